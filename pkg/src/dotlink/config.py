"""Configuration loading, validation, hashing, and deterministic seeding.

One JSON file holds every knob, grouped into sections that mirror the
module parameter types.  Unknown keys are rejected so typos fail loudly.
Dotted command-line overrides (section.key=value) are applied to the raw
mapping before any validation runs.
"""

from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field, fields

import numpy as np

from .dotmodel import MATERIAL_PRESETS, DotConfig, MaterialConstants
from .gatesim import PulsedDrive, RamanConfig
from .photonlink import LinkBudget
from .readout import ReadoutConfig
from .repeater import ChainConfig


@dataclass
class LinkSettings:
    """LinkBudget knobs plus the emitter mismatch and dephasing inputs."""

    eta_wg: float = 0.95
    t_switch_ps: float = 100.0
    eta_det: float = 1.0
    alpha_db_km: float = 0.0
    l0_km: float = 20.0
    c_fiber_km_ms: float = 200.0
    eta_override: float | None = 0.25
    delta_e_uev: float = 0.2
    t_deph_ps: float = 30000.0

    def __post_init__(self):
        if self.delta_e_uev < 0 or self.t_deph_ps <= 0:
            raise ValueError("delta_e_uev must be >= 0 and t_deph_ps > 0")

    def budget(self) -> LinkBudget:
        return LinkBudget(eta_wg=self.eta_wg, t_switch_ps=self.t_switch_ps,
                          eta_det=self.eta_det, alpha_db_km=self.alpha_db_km,
                          l0_km=self.l0_km, c_fiber_km_ms=self.c_fiber_km_ms,
                          eta_override=self.eta_override)


@dataclass
class ChainSettings:
    n_links: int = 64
    eps_gate: float = 0.005
    eps_meas: float = 0.005
    w0: float | None = None
    n_trials: int = 2000

    def __post_init__(self):
        if self.n_trials < 1:
            raise ValueError("n_trials must be at least 1")
        # fail at load time, not inside the run
        if self.n_links < 1 or self.n_links & (self.n_links - 1):
            raise ValueError("n_links must be a power of two")

    def chain_config(self, link: LinkSettings, t_rad_ps: float) -> ChainConfig:
        return ChainConfig(n_links=self.n_links, link=link.budget(),
                           eps_gate=self.eps_gate, eps_meas=self.eps_meas,
                           w0=self.w0, t_rad_ps=t_rad_ps,
                           delta_e_uev=link.delta_e_uev)


@dataclass
class PhononSettings:
    order: int = 128
    e_s_mev: float = 7.5
    e_w_mev: float = 15.0
    error_budget: float = 0.0014
    delta_min_mev: float = 0.5
    delta_max_mev: float = 15.0
    delta_step_mev: float = 0.25

    def __post_init__(self):
        if self.e_s_mev <= 0 or self.e_w_mev <= 0:
            raise ValueError("e_s_mev and e_w_mev must be positive")
        if self.error_budget <= 0:
            raise ValueError("error_budget must be positive")
        if not (0 < self.delta_min_mev < self.delta_max_mev) or self.delta_step_mev <= 0:
            raise ValueError("bad spectral-density grid")


@dataclass
class GateSettings:
    e_dd_mev: float = 5.0        # negative flips the dipole shift to binding
    r_dd_nm: float = 10.0        # dot separation for the dipole-dipole estimate
    tol: float = 1e-9

    def __post_init__(self):
        if not 0.0 < self.tol <= 1e-3:
            raise ValueError("tol must be in (0, 1e-3]")
        if self.r_dd_nm <= 0:
            raise ValueError("r_dd_nm must be positive")


@dataclass
class ExperimentConfig:
    seed: int = 12345
    out_dir: str = "results"
    dot: DotConfig = field(default_factory=DotConfig)
    material: MaterialConstants = field(default_factory=lambda: MATERIAL_PRESETS["GaAs"])
    drive: PulsedDrive = field(default_factory=PulsedDrive)
    link: LinkSettings = field(default_factory=LinkSettings)
    readout: ReadoutConfig = field(default_factory=ReadoutConfig)
    chain: ChainSettings = field(default_factory=ChainSettings)
    phonon: PhononSettings = field(default_factory=PhononSettings)
    gate: GateSettings = field(default_factory=GateSettings)
    raman: RamanConfig = field(default_factory=RamanConfig)

    def canonical_dict(self) -> dict:
        return dataclasses.asdict(self)

    def config_hash(self) -> str:
        # out_dir is an execution detail: the same physics configuration must
        # hash identically wherever the results land
        blob = self.canonical_dict()
        blob.pop("out_dir")
        text = json.dumps(blob, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(text.encode()).hexdigest()


_SECTIONS = {
    "dot": DotConfig,
    "material": MaterialConstants,
    "drive": PulsedDrive,
    "link": LinkSettings,
    "readout": ReadoutConfig,
    "chain": ChainSettings,
    "phonon": PhononSettings,
    "gate": GateSettings,
    "raman": RamanConfig,
}

_INT_FIELDS = {"n_links", "n_trials", "n_cycles", "threshold", "n_shots",
               "order", "seed"}


def _coerce(name: str, value, where: str):
    if isinstance(value, bool):
        raise ValueError(f"{where}.{name}: boolean not accepted here")
    if name in _INT_FIELDS:
        if isinstance(value, float) and not value.is_integer():
            raise ValueError(f"{where}.{name}: expected integer, got {value}")
        return int(value) if isinstance(value, (int, float)) else value
    if isinstance(value, list):
        return tuple(value)
    return value


def _build_section(cls, data: dict, where: str):
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown key(s) in {where}: {sorted(unknown)}")
    kwargs = {k: _coerce(k, v, where) for k, v in data.items()}
    return cls(**kwargs)


def _build_material(value):
    if isinstance(value, str):
        if value not in MATERIAL_PRESETS:
            raise ValueError(f"unknown material preset {value!r}; "
                             f"have {sorted(MATERIAL_PRESETS)}")
        return MATERIAL_PRESETS[value]
    if isinstance(value, dict):
        return _build_section(MaterialConstants, value, "material")
    raise ValueError("material must be a preset name or a mapping")


def config_from_dict(raw: dict) -> ExperimentConfig:
    unknown = set(raw) - set(_SECTIONS) - {"seed", "out_dir"}
    if unknown:
        raise ValueError(f"unknown top-level key(s): {sorted(unknown)}")
    kwargs = {}
    if "seed" in raw:
        kwargs["seed"] = _coerce("seed", raw["seed"], "top level")
    if "out_dir" in raw:
        kwargs["out_dir"] = str(raw["out_dir"])
    for name, cls in _SECTIONS.items():
        if name not in raw:
            continue
        if name == "material":
            kwargs[name] = _build_material(raw[name])
        else:
            if not isinstance(raw[name], dict):
                raise ValueError(f"section {name!r} must be a mapping")
            kwargs[name] = _build_section(cls, raw[name], name)
    return ExperimentConfig(**kwargs)


def apply_override(raw: dict, assignment: str):
    """Apply one dotted key=value override to the raw config mapping."""
    if "=" not in assignment:
        raise ValueError(f"override {assignment!r} is not key=value")
    key, text = assignment.split("=", 1)
    try:
        value = json.loads(text)
    except json.JSONDecodeError:
        value = text  # bare strings allowed, e.g. material=ZnSe
    parts = key.strip().split(".")
    node = raw
    for p in parts[:-1]:
        node = node.setdefault(p, {})
        if not isinstance(node, dict):
            raise ValueError(f"override {key!r} descends into a non-mapping")
    node[parts[-1]] = value


def load_config(path=None, overrides=(), seed=None, out_dir=None) -> ExperimentConfig:
    raw = {}
    if path is not None:
        with open(path) as fh:
            raw = json.load(fh)
        if not isinstance(raw, dict):
            raise ValueError("config root must be a JSON object")
    for assignment in overrides:
        apply_override(raw, assignment)
    if seed is not None:
        raw["seed"] = seed
    if out_dir is not None:
        raw["out_dir"] = out_dir
    return config_from_dict(raw)


def derive_rng(seed: int, module: str, index: int = 0) -> np.random.Generator:
    """Independent stream for (seed, module, index), stable across platforms."""
    tag = int.from_bytes(hashlib.sha256(module.encode()).digest()[:8], "big")
    ss = np.random.SeedSequence([int(seed) & (2 ** 63 - 1), tag, int(index)])
    return np.random.default_rng(ss)

"""Run configuration schema, validation and bundled presets.

Configs are flat JSON documents; every frequency is in recoil units (no unit
suffixes allowed anywhere).  The schema is versioned so stored configs stay
replayable.
"""

import copy
import json

from .errors import ConfigError
from .params import PhysicalParams
from .semiclassical import FORCE_MODES, SCHEMES, InitialCondition, IntegrationConfig

SCHEMA_VERSION = 1

ENGINES = ("semiclassical", "meanfield")

_DEFAULTS = {
    "schema_version": SCHEMA_VERSION,
    "engine": "semiclassical",
    "physical": {},
    "integration": {
        "dt": 2e-3,
        "t_end": 500.0,
        "scheme": "heun",
        "force_mode": "full",
        "noise_enabled": True,
        "sample_every": 0.5,
        "snapshot_times": [],
    },
    "initial": {
        "p2_initial": 5.0,
        "dipole_seed_eps": 1e-3,
    },
    "n_traj": 1,
    "master_seed": 0,
    "observables": ["p2_mean", "xdagx", "kurtosis"],
}

_PHYSICAL_KEYS = {"n_atoms", "kappa", "delta", "w_pump", "g", "n_gamma_c"}


def _require(cond, msg):
    if not cond:
        raise ConfigError(msg)


def validate_config(doc):
    """Validate a raw config dict and return it normalized with defaults."""
    _require(isinstance(doc, dict), "config must be a JSON object")
    unknown = set(doc) - set(_DEFAULTS)
    _require(not unknown, f"unknown config keys: {sorted(unknown)}")
    cfg = copy.deepcopy(_DEFAULTS)
    for key, val in doc.items():
        if isinstance(val, dict):
            bad = set(val) - set(cfg[key]) - _PHYSICAL_KEYS
            _require(not bad, f"unknown keys in {key!r}: {sorted(bad)}")
            cfg[key].update(copy.deepcopy(val))
        else:
            cfg[key] = copy.deepcopy(val)

    _require(cfg["schema_version"] == SCHEMA_VERSION,
             f"unsupported schema_version {cfg['schema_version']!r}")
    _require(cfg["engine"] in ENGINES,
             f"engine must be one of {ENGINES}, got {cfg['engine']!r}")
    phys = cfg["physical"]
    for key in ("n_atoms", "kappa", "delta", "w_pump"):
        _require(key in phys, f"physical.{key} is required")
    _require(("g" in phys) != ("n_gamma_c" in phys),
             "specify exactly one of physical.g and physical.n_gamma_c")
    integ = cfg["integration"]
    _require(integ["scheme"] in SCHEMES,
             f"integration.scheme must be one of {SCHEMES}")
    _require(integ["force_mode"] in FORCE_MODES,
             f"integration.force_mode must be one of {FORCE_MODES}")
    for key in ("dt", "t_end", "sample_every"):
        _require(isinstance(integ[key], (int, float)) and integ[key] > 0,
                 f"integration.{key} must be a positive number")
    _require(isinstance(cfg["n_traj"], int) and cfg["n_traj"] >= 1,
             "n_traj must be a positive integer")
    _require(isinstance(cfg["master_seed"], int) and 0 <= cfg["master_seed"] < 2**64,
             "master_seed must be a 64-bit unsigned integer")
    _require(cfg["initial"]["p2_initial"] >= 0,
             "initial.p2_initial must be nonnegative")
    return cfg


def load_config(path):
    with open(path, encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return validate_config(doc)


def build_objects(cfg):
    """Instantiate (PhysicalParams, IntegrationConfig, InitialCondition)."""
    params = PhysicalParams(**cfg["physical"])
    integ = cfg["integration"]
    config = IntegrationConfig(
        dt=integ["dt"],
        t_end=integ["t_end"],
        scheme=integ["scheme"],
        force_mode=integ["force_mode"],
        noise_enabled=integ["noise_enabled"],
        sample_every=integ["sample_every"],
        snapshot_times=tuple(integ["snapshot_times"]),
    )
    ic = InitialCondition(
        p2_initial=cfg["initial"]["p2_initial"],
        dipole_seed_eps=cfg["initial"]["dipole_seed_eps"],
    )
    return params, config, ic


# ---------------------------------------------------------------------------
# Bundled presets
# ---------------------------------------------------------------------------
# Shared cavity parameters of the production runs:
# N = 100, kappa = 780, NGc = 40, delta = kappa/2, w = NGc/4 = 10 (recoil units).

_FIG_PHYS = {"n_atoms": 100, "kappa": 780.0, "delta": 390.0, "w_pump": 10.0,
             "n_gamma_c": 40.0}

PRESETS = {
    # momentum-width relaxation at three initial temperatures
    "fig3a": {
        "engine": "semiclassical",
        "physical": dict(_FIG_PHYS),
        "integration": {"dt": 2e-3, "t_end": 2000.0},
        "initial": {"p2_initial": 500.0},
        "n_traj": 1000,
        "master_seed": 1003,
    },
    "fig3b": {
        "engine": "semiclassical",
        "physical": dict(_FIG_PHYS),
        "integration": {"dt": 2e-3, "t_end": 1000.0},
        "initial": {"p2_initial": 50.0},
        "n_traj": 1000,
        "master_seed": 1004,
    },
    "fig3c": {
        "engine": "semiclassical",
        "physical": dict(_FIG_PHYS),
        "integration": {"dt": 2e-3, "t_end": 500.0},
        "initial": {"p2_initial": 5.0},
        "n_traj": 200,
        "master_seed": 1005,
    },
    # mean-field vs semiclassical comparison (mean-field leg)
    "fig4": {
        "engine": "meanfield",
        "physical": dict(_FIG_PHYS),
        "integration": {"dt": 2e-3, "t_end": 500.0},
        "initial": {"p2_initial": 5.0},
        "n_traj": 1,
        "master_seed": 1006,
    },
    # <Xdag X> spectrum run (N = 1000 mean-field leg, NGc held fixed)
    "fig5": {
        "engine": "meanfield",
        "physical": dict(_FIG_PHYS, n_atoms=1000),
        "integration": {"dt": 2e-3, "t_end": 150.0, "sample_every": 0.1},
        "initial": {"p2_initial": 5.0},
        "n_traj": 1,
        "master_seed": 1007,
    },
    # steady-state profile tables
    "fig7": {
        "engine": "semiclassical",
        "physical": dict(_FIG_PHYS),
        "integration": {"dt": 2e-3, "t_end": 1.0},
        "initial": {"p2_initial": 5.0},
        "n_traj": 1,
        "master_seed": 1008,
    },
    # asymptotic phase-space histogram (N = 1000 mean-field leg)
    "fig8": {
        "engine": "meanfield",
        "physical": dict(_FIG_PHYS, n_atoms=1000),
        "integration": {"dt": 2e-3, "t_end": 60.0, "sample_every": 0.5,
                        "snapshot_times": [50.0, 55.0, 60.0]},
        "initial": {"p2_initial": 5.0},
        "n_traj": 1,
        "master_seed": 1009,
    },
    # fluctuation-dissipation sweep tables
    "fig10": {
        "engine": "semiclassical",
        "physical": dict(_FIG_PHYS),
        "integration": {"dt": 2e-3, "t_end": 1.0},
        "initial": {"p2_initial": 5.0},
        "n_traj": 1,
        "master_seed": 1010,
    },
    # cos(arg X) rotating-frame spectrum (N = 1000 mean-field leg)
    "fig11": {
        "engine": "meanfield",
        "physical": dict(_FIG_PHYS, n_atoms=1000),
        "integration": {"dt": 2e-3, "t_end": 100.0, "sample_every": 0.1},
        "initial": {"p2_initial": 5.0},
        "n_traj": 1,
        "master_seed": 1011,
    },
}


def preset_config(name):
    try:
        doc = PRESETS[name]
    except KeyError:
        raise ConfigError(
            f"unknown preset {name!r}; available: {sorted(PRESETS)}") from None
    return validate_config(copy.deepcopy(doc))

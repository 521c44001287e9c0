"""Python access to the hamlab Hammersley process simulator."""

import json

from . import _hamlab
from ._hamlab import (
    CertificationFailure,
    InvalidParameter,
    UncertifiedRegion,
    certificate_margin,
    experiment_names,
    identity_names,
    kolmogorov_sf,
    lis_length,
    sample_line,
    sample_planar,
    skellam_tail,
)

__all__ = [
    "CertificationFailure",
    "InvalidParameter",
    "UncertifiedRegion",
    "certificate_margin",
    "default_config",
    "evolve",
    "experiment_names",
    "flux",
    "identity_names",
    "kolmogorov_sf",
    "lis_length",
    "run_experiment",
    "run_identity",
    "sample_line",
    "sample_planar",
    "skellam_tail",
]

_NAN = float("nan")


def evolve(positions, lo, hi, epochs, t_end, left_density=_NAN):
    """Evolve a configuration on [lo, hi] under (x, t) epochs up to t_end."""
    return json.loads(_hamlab.evolve_json(list(positions), lo, hi, list(epochs), t_end, left_density))


def flux(positions, lo, hi, epochs, x, t, left_density=_NAN):
    """Variational flux through the segment (0,0)-(x,t)."""
    return json.loads(_hamlab.flux_json(list(positions), lo, hi, list(epochs), x, t, left_density))


def default_config(name):
    return json.loads(_hamlab.default_config_json(name))


def run_experiment(name, **overrides):
    """Run an experiment; keyword arguments override its default config."""
    cfg = default_config(name)
    cfg.update(overrides)
    return json.loads(_hamlab.run_experiment_json(json.dumps(cfg)))


def run_identity(name, seed=1, instances=100):
    return json.loads(_hamlab.run_identity_json(name, seed, instances))

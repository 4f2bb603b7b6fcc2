"""JSON configuration schema for groups, rates, and run parameters."""

from __future__ import annotations

import json

from .errors import ConfigError
from .groups import (
    GeneratorSet,
    Permutation,
    RateAssignment,
    builtin_group,
    generate_group,
)


def _require(cfg: dict, key: str, path: str = ""):
    if key not in cfg:
        raise ConfigError(f"missing key at /{path}{key}")
    return cfg[key]


def load_group_spec(cfg: dict):
    """Build (group, generators) from a JSON-style mapping.

    Either a built-in family:
        {"family": "cyclic"|"dihedral"|"dicyclic"|"symmetric", "n": int,
         "steps": [int, ...]?}
    or explicit permutation generators:
        {"generators": [[images], ...], "labels": [str, ...]}
    """
    if "family" in cfg:
        family = cfg["family"]
        n = _require(cfg, "n")
        if not isinstance(n, int) or n < 1:
            raise ConfigError("/n must be a positive integer")
        steps = tuple(cfg.get("steps", (1,)))
        try:
            return builtin_group(family, n, steps=steps)
        except ValueError as e:
            raise ConfigError(f"/family: {e}") from e
    if "generators" in cfg:
        perms = [Permutation(tuple(images)) for images in cfg["generators"]]
        labels = cfg.get("labels") or [f"g{i}" for i in range(len(perms))]
        if len(labels) != len(perms):
            raise ConfigError("/labels length must match /generators")
        group = generate_group(perms)
        named = [(lab, group.elements.index(p)) for lab, p in zip(labels, perms)]
        return group, GeneratorSet.build(group, named)
    raise ConfigError("group spec needs /family or /generators")


def load_rates(cfg: dict, gens: GeneratorSet) -> RateAssignment:
    raw = _require(cfg, "rates")
    if isinstance(raw, (int, float)):
        rates = RateAssignment({lab: float(raw) for lab in gens.labels})
    else:
        rates = RateAssignment({k: float(v) for k, v in raw.items()})
    try:
        rates.validate(gens)
    except ValueError as e:
        raise ConfigError(f"/rates: {e}") from e
    return rates


def load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e

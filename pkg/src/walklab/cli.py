"""Command-line entry point: wires JSON configs to the library modules and
emits CSV/JSON artifacts plus a run manifest.

Exit codes: 0 success, 1 a mathematical property check failed, 2 config or
usage error.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import math
import os
import sys
import time

from . import __version__
from .config import load_config, load_group_spec, load_rates
from .coxeter import CoxeterMatrix, coxeter_group, verify_wall_axioms
from .ctmc import RateGraph, stationarity_metrics, transition_distribution, discrete_coin_distribution
from .errors import ConfigError, WalklabError
from .groups import cayley_graph
from .ray import RayRates, km_crosscheck, profile_checks
from .search import SearchConfig, catalog_reproductions, random_search
from .speed import free_coxeter_speed, tree_speed_closed_form

EXIT_OK = 0
EXIT_PROPERTY_FAILED = 1
EXIT_CONFIG = 2


def _write_manifest(out_dir, sub, cfg, seed, t0, outputs):
    manifest = {
        "subcommand": sub,
        "config": cfg,
        "seed": seed,
        "version": __version__,
        "duration_s": round(time.monotonic() - t0, 3),
        "outputs": outputs,
    }
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w") as fh:
        json.dump(manifest, fh, indent=2, default=str)
    return manifest


def _write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        w.writerows(rows)


def _write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(obj, fh, indent=2, default=str)


def _cmd_group(cfg, out_dir):
    group, gens = load_group_spec(cfg)
    cg = cayley_graph(group, gens)
    _write_csv(
        os.path.join(out_dir, "distances.csv"),
        ["element", "distance"],
        [(i, int(d)) for i, d in enumerate(cg.dist)],
    )
    _write_json(
        os.path.join(out_dir, "group.json"),
        {
            "order": group.order,
            "generators": list(gens.labels),
            "diameter": int(cg.dist.max()),
        },
    )
    return EXIT_OK, ["distances.csv", "group.json"]


def _cmd_coxeter_verify(cfg, out_dir):
    matrix = CoxeterMatrix.from_json(cfg["matrix"])
    real = coxeter_group(matrix)
    report = verify_wall_axioms(real)
    _write_json(os.path.join(out_dir, "wall_axioms.json"), report.to_dict())
    return (EXIT_OK if report.all_pass else EXIT_PROPERTY_FAILED), ["wall_axioms.json"]


def _cmd_exact(cfg, out_dir):
    group, gens = load_group_spec(cfg)
    rates = load_rates(cfg, gens)
    t = float(cfg.get("t", 1.0))
    tol = float(cfg.get("tol", 1e-12))
    start = int(cfg.get("start", 0))
    cg = cayley_graph(group, gens)
    d = transition_distribution(RateGraph.from_cayley(cg, rates), start, t, tol)
    _write_csv(
        os.path.join(out_dir, "distribution.csv"),
        ["element", "probability"],
        [(i, repr(float(p))) for i, p in enumerate(d.p)],
    )
    _write_json(os.path.join(out_dir, "metrics.json"), stationarity_metrics(d))
    return EXIT_OK, ["distribution.csv", "metrics.json"]


def _cmd_discrete(cfg, out_dir):
    group, gens = load_group_spec(cfg)
    cg = cayley_graph(group, gens)
    seq = cfg.get("sequence", [])
    d = discrete_coin_distribution(cg, seq)
    _write_csv(
        os.path.join(out_dir, "discrete.csv"),
        ["element", "probability"],
        [(i, repr(float(p))) for i, p in enumerate(d.p)],
    )
    return EXIT_OK, ["discrete.csv"]


def _cmd_speed(cfg, out_dir):
    out = {}
    if "rates" in cfg:
        sol = free_coxeter_speed(cfg["rates"])
        out["free_coxeter"] = {
            "rates": cfg["rates"],
            "root": sol.root,
            "speed": sol.speed,
            "residual": sol.residual,
        }
    if "rho" in cfg:
        out["tree_closed_form"] = {
            "rho": cfg["rho"],
            "speed": tree_speed_closed_form(float(cfg["rho"])),
        }
    if not out:
        raise ConfigError("speed config needs /rates or /rho")
    _write_json(os.path.join(out_dir, "speed.json"), out)
    return EXIT_OK, ["speed.json"]


def _cmd_ray(cfg, out_dir):
    rr = RayRates(tuple(float(r) for r in cfg["rates"]), extend=cfg.get("extend"))
    t = float(cfg.get("t", 1.0))
    report = profile_checks(rr, t, float(cfg.get("tol", 1e-12)))
    _write_csv(
        os.path.join(out_dir, "profile.csv"),
        ["state", "probability"],
        [(i, repr(float(p))) for i, p in enumerate(report.distribution.p)],
    )
    _write_json(
        os.path.join(out_dir, "profile_report.json"),
        {
            "i0": report.i0,
            "checked_range": report.checked_range,
            "strictly_decreasing": report.strictly_decreasing,
            "min_relative_margin": report.min_relative_margin,
        },
    )
    code = EXIT_OK if report.strictly_decreasing else EXIT_PROPERTY_FAILED
    return code, ["profile.csv", "profile_report.json"]


def _cmd_search(cfg, out_dir, seed):
    fields = {f.name for f in dataclasses.fields(SearchConfig)}
    kwargs = {k: v for k, v in cfg.items() if k in fields}
    if "n_range" in kwargs:
        kwargs["n_range"] = tuple(kwargs["n_range"])
    for key in ("deltas", "p_grid"):
        if key in kwargs:
            kwargs[key] = tuple(
                math.inf if v in ("inf", "Infinity") else float(v) for v in kwargs[key]
            )
    if seed is not None:
        kwargs["seed"] = seed
    sc = SearchConfig(**kwargs)
    found = random_search(sc)
    jl = os.path.join(out_dir, "found.jsonl")
    with open(jl, "w") as fh:
        for ex in found:
            fh.write(ex.to_json() + "\n")
    _write_csv(
        os.path.join(out_dir, "summary.csv"),
        ["family", "n", "t", "perturbed", "max_delta"],
        [
            (ex.family, ex.n, ex.t, ex.perturbed_label, max(ex.p_deltas.values()))
            for ex in found
        ],
    )
    return EXIT_OK, ["found.jsonl", "summary.csv"]


def _cmd_catalog(cfg, out_dir):
    report = catalog_reproductions()
    _write_json(os.path.join(out_dir, "catalog.json"), dataclasses.asdict(report))
    return (EXIT_OK if report.all_pass() else EXIT_PROPERTY_FAILED), ["catalog.json"]


def _cmd_verify_all(cfg, out_dir):
    results = {}
    report = catalog_reproductions()
    results["catalog"] = report.all_pass()
    for name, m in (("A2", [[1, 3], [3, 1]]), ("I2_4", [[1, 4], [4, 1]])):
        wa = verify_wall_axioms(coxeter_group(CoxeterMatrix.from_json(m)))
        results[f"walls_{name}"] = wa.all_pass
    pr = profile_checks(RayRates((1.0,), extend=1.0), 1.0)
    results["ray_profile"] = pr.strictly_decreasing
    spec, fs = km_crosscheck(RayRates((1.0, 2.0, 3.0)), 3, 1.0)
    results["hitting_crosscheck"] = abs(spec - fs) <= 1e-9
    sol = free_coxeter_speed([1.0, 1.0, 1.0])
    results["speed_formula"] = abs(sol.speed - tree_speed_closed_form(1.0)) <= 1e-9
    _write_json(os.path.join(out_dir, "verify_all.json"), results)
    ok = all(results.values())
    return (EXIT_OK if ok else EXIT_PROPERTY_FAILED), ["verify_all.json"]


_COMMANDS = {
    "group": _cmd_group,
    "coxeter-verify": _cmd_coxeter_verify,
    "exact": _cmd_exact,
    "discrete": _cmd_discrete,
    "speed": _cmd_speed,
    "ray": _cmd_ray,
    "search": _cmd_search,
    "catalog": _cmd_catalog,
    "verify-all": _cmd_verify_all,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="walklab")
    parser.add_argument("subcommand", choices=sorted(_COMMANDS))
    parser.add_argument("--config", help="JSON config path")
    parser.add_argument("--out", default=".", help="output directory")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--tol", type=float, default=None)
    parser.add_argument("--threads", type=int, default=None, help="accepted for compatibility")
    args = parser.parse_args(argv)

    t0 = time.monotonic()
    try:
        cfg = load_config(args.config) if args.config else {}
        if args.tol is not None:
            cfg.setdefault("tol", args.tol)
        os.makedirs(args.out, exist_ok=True)
        fn = _COMMANDS[args.subcommand]
        if args.subcommand == "search":
            code, outputs = fn(cfg, args.out, args.seed)
        else:
            code, outputs = fn(cfg, args.out)
        _write_manifest(args.out, args.subcommand, cfg, args.seed, t0, outputs)
        return code
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except WalklabError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_PROPERTY_FAILED
    except KeyError as e:
        print(f"config error: missing key {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

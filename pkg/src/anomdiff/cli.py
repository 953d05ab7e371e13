"""Command-line front end.

A single entry point dispatching on --command:

  tabulate   write a density table as CSV (x, t, value, method)
  solve-bvp  evaluate the eigenfunction series on a grid, CSV plus an
             eigen-system JSON sidecar
  sample     dump draws from one of the samplers, one value per line
  verify     run the verification suite, JSON report, non-zero exit on failure
  moments    Monte Carlo scaling exponent of a subordinated moment

Exit status: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import montecarlo, solvers, verify
from .errors import ConvergenceError, DomainError, UnsupportedMethodError
from .laws import MuVector, tabulate_density
from .montecarlo import CompositionChain, RngSpec

_FLOAT_KEYS = {
    "gamma", "mu", "nu", "beta", "xmin", "xmax", "r", "x",
}
_INT_KEYS = {"nx", "n", "n_terms", "count", "stream"}
# "t" stays a string: grid commands accept semicolon-separated lists


def _parse_params(pairs):
    params = {}
    for pair in pairs or []:
        if "=" not in pair:
            raise DomainError(f"--param expects key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        key = key.strip()
        if key in _FLOAT_KEYS:
            params[key] = float(value)
        elif key in _INT_KEYS:
            params[key] = int(value)
        else:
            params[key] = value.strip()
    return params


def _write_rows(path, header, rows, fmt="csv"):
    if fmt == "json":
        doc = {"columns": list(header), "rows": [list(r) for r in rows]}
        _write_json(path, doc)
        return
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(f"{v:.12g}" if isinstance(v, float) else str(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _write_json(path, doc):
    text = json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _grid(params):
    xmin = params.get("xmin", 0.1)
    xmax = params.get("xmax", 3.0)
    nx = params.get("nx", 30)
    if nx < 1 or xmax < xmin or xmin <= 0:
        raise DomainError("invalid grid: need xmin > 0, xmax >= xmin, nx >= 1")
    ts = [float(v) for v in str(params.get("t", "1.0")).split(";") if v]
    return np.linspace(xmin, xmax, int(nx)), ts


def cmd_tabulate(params, seed, out, fmt):
    name = params.get("density")
    if name is None:
        raise DomainError("tabulate requires --param density=<name>")
    xs, ts = _grid(params)
    if name in ("g_nu_beta", "u_time_frac"):
        rows = []
        for t in ts:
            for x in xs:
                if name == "g_nu_beta":
                    v = solvers.space_fractional_density(
                        params.get("mu", 1.0), params.get("nu", 0.5),
                        params.get("beta", 1.0), float(x), float(t),
                        params.get("route", "double_integral"),
                    )
                    rows.append((float(x), float(t), v, params.get("route", "double_integral")))
                else:
                    v = solvers.time_fractional_solution(
                        params.get("gamma", 1.0), params.get("mu", 1.0),
                        params.get("nu", 0.5), float(x), float(t),
                    )
                    rows.append((float(x), float(t), v, "subordination"))
    else:
        rows = tabulate_density(name, params, xs, ts)
    _write_rows(out, ("x", "t", "value", "method"), rows, fmt)
    return 0


_BVP_PRESETS = {
    "one": lambda es: (lambda x: 1.0),
    "first-mode": lambda es: (lambda x: float(es.weight(x)) * float(es.eigenfunction(0, x))),
    "bump": lambda es: (lambda x: x * (1.0 - x)),
}


def cmd_solve_bvp(params, seed, out, fmt):
    gamma = params.get("gamma", 1.0)
    mu = params.get("mu", 1.0)
    nu = params.get("nu", 1.0)
    n_terms = params.get("n_terms", 50)
    preset = params.get("m0", "one")
    es = solvers.eigen_system(gamma, mu, n_terms)
    if preset in _BVP_PRESETS:
        m0 = _BVP_PRESETS[preset](es)
    elif preset.endswith(".csv"):
        data = np.loadtxt(preset, delimiter=",")
        m0 = lambda x: float(np.interp(x, data[:, 0], data[:, 1]))
    else:
        raise UnsupportedMethodError(f"unknown initial datum preset {preset!r}")
    spec = solvers.BVPSpec(gamma, mu, nu, m0, n_terms=n_terms)
    sol = solvers.sturm_liouville_solution(spec)
    xmin = params.get("xmin", 0.05)
    xmax = params.get("xmax", 0.95)
    nx = params.get("nx", 19)
    ts = [float(v) for v in str(params.get("t", "0.5")).split(";") if v]
    rows = []
    for t in ts:
        for x in np.linspace(xmin, xmax, int(nx)):
            rows.append((float(x), float(t), sol(float(x), float(t))))
    _write_rows(out, ("x", "t", "value"), rows, fmt)
    sidecar = (out + ".eigen.json") if out else None
    _write_json(sidecar, sol.eigen_system_with_coefficients().to_json_dict())
    return 0


def cmd_sample(params, seed, out, fmt):
    dist = params.get("dist")
    n = params.get("n", 1000)
    t = float(params.get("t", 1.0))
    rng = RngSpec(seed, params.get("stream", 0))
    if dist == "G":
        draws = montecarlo.sample_gamma(params.get("mu", 1.0), t, rng, size=n)
    elif dist == "E":
        draws = montecarlo.sample_inv_gamma(params.get("mu", 1.0), t, rng, size=n)
    elif dist == "subordinator":
        draws = montecarlo.sample_subordinator(params.get("nu", 0.5), t, rng, size=n)
    elif dist == "inverse":
        draws = montecarlo.sample_inverse_subordinator(params.get("nu", 0.5), t, rng, size=n)
    elif dist == "chain":
        chain = CompositionChain(
            params.get("kind", "subordinator"), MuVector.parse(params["mu_vector"]), t
        )
        draws = montecarlo.sample_chain(chain, rng, size=n)
    else:
        raise DomainError("sample requires --param dist=G|E|subordinator|inverse|chain")
    meta = f"# dist={dist} n={n} t={t:g} seed={seed}"
    lines = [meta, "value"] + [f"{v:.12g}" for v in np.atleast_1d(draws)]
    text = "\n".join(lines) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


def cmd_verify(params, seed, out, fmt):
    report = verify.run_suite(params.get("suite"), seed=seed)
    _write_json(out, report)
    return 0 if all(t["pass"] for t in report["tests"]) else 1


def cmd_moments(params, seed, out, fmt):
    t_grid = [float(v) for v in str(params.get("t", "0.5;1;2;4")).split(";") if v]
    slope = montecarlo.moment_scaling_slope(
        params.get("mu", 1.0),
        params.get("nu", 1.0),
        params.get("beta", 1.0),
        params.get("r", 1.0),
        t_grid,
        RngSpec(seed, params.get("stream", 0)),
        n_samples=params.get("n", 100_000),
    )
    expected = params.get("beta", 1.0) * params.get("r", 1.0) / params.get("nu", 1.0)
    _write_json(out, {"slope": slope, "expected": expected, "t_grid": t_grid, "seed": seed})
    return 0


_COMMANDS = {
    "tabulate": cmd_tabulate,
    "solve-bvp": cmd_solve_bvp,
    "sample": cmd_sample,
    "verify": cmd_verify,
    "moments": cmd_moments,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="anomdiff", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--command", required=True, choices=sorted(_COMMANDS))
    parser.add_argument("--param", action="append", metavar="key=value",
                        help="command parameter, repeatable")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default=None, help="output path (stdout if omitted)")
    parser.add_argument("--format", default="csv", choices=("csv", "json"))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        params = _parse_params(args.param)
        return _COMMANDS[args.command](params, args.seed, args.out, args.format)
    except (DomainError, UnsupportedMethodError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())

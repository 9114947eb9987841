"""Command-line front end.

Subcommands: eval, verify-envelope, lp, scaling, prop-i, rank1, oracle-diff.
Configuration is flags-first with an optional JSON config file (``--config``)
whose values the flags override.  The resolved semantic configuration --
command plus numeric parameters and seed, but not output paths or the thread
count -- is echoed into every artifact so a run can be reproduced from any
of its outputs.

Exit codes: 0 success, 2 usage/parse error, 3 resource guard tripped,
4 quadrature non-convergence, 5 invariant violation detected by a verify
run.  Errors are also printed as one-line JSON diagnostics on stderr.

``SU3CHAR_THREADS`` sets the default worker count for sweeps; results are
byte-identical for any thread count.
"""

from __future__ import annotations

import argparse
import dataclasses
import itertools
import json
import math
import os
import sys
from typing import Dict, List, Optional, Sequence

import numpy as np

from .bounds import GridSpec, default_mu_set, rank1_bound_margin, sweep_constant
from .cartan import DominantWeight, TorusPoint, dim
from .character import (
    CharValue,
    ResourceLimitError,
    SingularInputError,
    WallTooSmallError,
    chi_schur,
    chi_stable,
    chi_weyl,
    descent_terms,
)
from .lpnorms import (
    ConvergenceError,
    I_bound,
    I_numeric,
    QuadratureSpec,
    haar_lp_norm,
    scaling_fit,
)
from .reports import ReportWriteError, emit_json, emit_report

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_RESOURCE = 3
EXIT_NONCONVERGENCE = 4
EXIT_INVARIANT = 5


class UsageError(ValueError):
    """Bad or missing parameters after config-file merging."""


class InvariantViolation(RuntimeError):
    """A verify run observed a violated invariant."""


@dataclasses.dataclass(frozen=True)
class RunConfig:
    command: str
    params: Dict[str, object]


_DEFAULTS: Dict[str, Dict[str, object]] = {
    "eval": {
        "mu": None, "theta": None, "alcove": None, "method": "auto",
        "wall": None, "out": None,
    },
    "verify-envelope": {
        "dense_max": 20, "shell_max": 40, "grid_total": 10_000,
        "wall_per_edge": 500, "chamber": 500, "corner_scales": 8,
        "corner_rays": 5, "seed": 2718, "threads": None,
        "out_csv": None, "out_json": None,
    },
    "lp": {
        "mu": None, "p": None, "base_rule": 64, "max_refinements": 6,
        "rel_tol": 1e-6, "mapping": "periodic_square", "out": None,
    },
    "scaling": {
        "family": None, "p": None, "n_values": "8,16,32,64,128,256,512",
        "b0": 2, "base_rule": 64, "max_refinements": 6, "rel_tol": 1e-6,
        "mapping": "periodic_square", "out_csv": None, "out_json": None,
    },
    "prop-i": {
        "p_values": "2,2.8,3,4,5.5", "pool": "1,4,16,64,256",
        "base_rule": 64, "max_refinements": 6, "rel_tol": 1e-6,
        "out_csv": None, "out_json": None,
    },
    "rank1": {
        "n_max": 200, "grid": 10_000, "out": None,
    },
    "oracle-diff": {
        "mu": None, "samples": 100, "seed": 1234, "regime": "regular",
        "tol": None, "out_csv": None, "out_json": None,
    },
}

# runtime knobs that must not influence artifact bytes
_NOT_ECHOED = {"threads", "out", "out_csv", "out_json", "config"}


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="su3char",
        description="Evaluate irreducible SU(3) characters and certify their "
        "envelope and Lp-norm bounds.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add(cmd, help_text, flags):
        sp = sub.add_parser(cmd, help=help_text)
        sp.add_argument("--config", default=None,
                        help="JSON file of parameter defaults (flags override)")
        for name, kw in flags:
            sp.add_argument(name, default=None, **kw)
        return sp

    add("eval", "evaluate one character value", [
        ("--mu", dict(help="dominant weight 'a,b'")),
        ("--theta", dict(help="torus angles 'x,y,z' (must sum to 0)")),
        ("--alcove", dict(help="alcove coordinates 't1,t2'")),
        ("--method", dict(choices=["auto", "weyl", "descent", "schur"])),
        ("--wall", dict(type=int, help="wall index for --method descent")),
        ("--out", dict(help="write the result JSON here as well")),
    ])
    add("verify-envelope", "ratio sweep certifying the envelope bound", [
        ("--dense-max", dict(type=int)),
        ("--shell-max", dict(type=int)),
        ("--grid-total", dict(type=int)),
        ("--wall-per-edge", dict(type=int)),
        ("--chamber", dict(type=int)),
        ("--corner-scales", dict(type=int)),
        ("--corner-rays", dict(type=int)),
        ("--seed", dict(type=int)),
        ("--threads", dict(type=int)),
        ("--out-csv", dict()),
        ("--out-json", dict()),
    ])
    add("lp", "Lp norm of one character", [
        ("--mu", dict(help="dominant weight 'a,b'")),
        ("--p", dict(type=float)),
        ("--base-rule", dict(type=int)),
        ("--max-refinements", dict(type=int)),
        ("--rel-tol", dict(type=float)),
        ("--mapping", dict(choices=["periodic_square", "duffy"])),
        ("--out", dict()),
    ])
    add("scaling", "log-log exponent fit along a weight family", [
        ("--family", dict(choices=["axis", "diagonal", "fixed_b"])),
        ("--p", dict(type=float)),
        ("--n-values", dict(help="comma-separated N list")),
        ("--b0", dict(type=int)),
        ("--base-rule", dict(type=int)),
        ("--max-refinements", dict(type=int)),
        ("--rel-tol", dict(type=float)),
        ("--mapping", dict(choices=["periodic_square", "duffy"])),
        ("--out-csv", dict()),
        ("--out-json", dict()),
    ])
    add("prop-i", "model-integral one-sided bound check", [
        ("--p-values", dict(help="comma-separated p list")),
        ("--pool", dict(help="comma-separated magnitudes for (a,b,c) triples")),
        ("--base-rule", dict(type=int)),
        ("--max-refinements", dict(type=int)),
        ("--rel-tol", dict(type=float)),
        ("--out-csv", dict()),
        ("--out-json", dict()),
    ])
    add("rank1", "rank-one bound margin over an exhaustive grid", [
        ("--n-max", dict(type=int)),
        ("--grid", dict(type=int)),
        ("--out", dict()),
    ])
    add("oracle-diff", "cross-method agreement on random torus points", [
        ("--mu", dict(help="dominant weight 'a,b'")),
        ("--samples", dict(type=int)),
        ("--seed", dict(type=int)),
        ("--regime", dict(choices=["regular", "wall"])),
        ("--tol", dict(type=float)),
        ("--out-csv", dict()),
        ("--out-json", dict()),
    ])
    return ap


def _resolve(args: argparse.Namespace) -> RunConfig:
    cmd = args.command
    params = dict(_DEFAULTS[cmd])
    raw = vars(args)
    if raw.get("config"):
        try:
            with open(raw["config"], "r", encoding="utf-8") as fh:
                file_params = json.load(fh)
        except (OSError, json.JSONDecodeError) as e:
            raise UsageError(f"cannot read config file {raw['config']}: {e}")
        unknown = set(file_params) - set(params)
        if unknown:
            raise UsageError(
                f"unknown config keys for {cmd}: {sorted(unknown)}"
            )
        params.update(file_params)
    for key in params:
        flag_val = raw.get(key)
        if flag_val is not None:
            params[key] = flag_val
    return RunConfig(command=cmd, params=params)


def _echo(cfg: RunConfig) -> Dict[str, object]:
    body = {k: v for k, v in sorted(cfg.params.items()) if k not in _NOT_ECHOED}
    return {"command": cfg.command, **body}


def _parse_mu(value) -> DominantWeight:
    if value is None:
        raise UsageError("--mu is required (format 'a,b')")
    if isinstance(value, (list, tuple)):
        a, b = value
        return DominantWeight(int(a), int(b))
    try:
        a, b = (int(x) for x in str(value).split(","))
    except ValueError:
        raise UsageError(f"cannot parse --mu {value!r}; expected 'a,b'")
    return DominantWeight(a, b)


def _parse_float_list(value, what: str) -> List[float]:
    if isinstance(value, (list, tuple)):
        return [float(x) for x in value]
    try:
        return [float(x) for x in str(value).split(",")]
    except ValueError:
        raise UsageError(f"cannot parse {what} {value!r}")


def _parse_int_list(value, what: str) -> List[int]:
    if isinstance(value, (list, tuple)):
        return [int(x) for x in value]
    try:
        return [int(x) for x in str(value).split(",")]
    except ValueError:
        raise UsageError(f"cannot parse {what} {value!r}")


def _print(payload: dict) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def _cmd_eval(cfg: RunConfig) -> int:
    p = cfg.params
    mu = _parse_mu(p["mu"])
    if p["theta"] is not None:
        theta = _parse_float_list(p["theta"], "--theta")
        if len(theta) != 3:
            raise UsageError("--theta needs exactly three angles")
        H = TorusPoint(tuple(theta))
    elif p["alcove"] is not None:
        t = _parse_float_list(p["alcove"], "--alcove")
        if len(t) != 2:
            raise UsageError("--alcove needs exactly two coordinates")
        H = TorusPoint.from_alcove_coords(t[0], t[1])
    else:
        raise UsageError("one of --theta or --alcove is required")

    method = p["method"]
    if method == "auto":
        cv = chi_stable(mu, H)
    elif method == "weyl":
        cv = chi_weyl(mu.shifted(), H)
    elif method == "schur":
        cv = chi_schur(mu, H)
    elif method == "descent":
        j = p["wall"]
        if j is None:
            walls = H.wall_norms()
            j = min(range(3), key=lambda i: walls[i])
        ts = descent_terms(mu.shifted(), H, int(j))
        cv = CharValue(ts.assembled(), f"descent{ts.j}", ts.condition)
    else:
        raise UsageError(f"unknown method {method!r}")

    t1, t2 = H.alcove_coords
    payload = {
        "config": _echo(cfg),
        "mu": [mu.a, mu.b],
        "theta": list(H.theta),
        "alcove_t": [t1, t2],
        "value_re": cv.value.real,
        "value_im": cv.value.imag,
        "abs": abs(cv.value),
        "method": cv.method,
        "condition": cv.condition,
        "dim": dim(mu),
    }
    _print(payload)
    if p["out"]:
        emit_json(payload, p["out"])
    return EXIT_OK


def _cmd_verify_envelope(cfg: RunConfig) -> int:
    p = cfg.params
    spec = GridSpec(
        total=int(p["grid_total"]),
        wall_points_per_edge=int(p["wall_per_edge"]),
        chamber_wall_points=int(p["chamber"]),
        corner_scales=int(p["corner_scales"]),
        corner_rays=int(p["corner_rays"]),
    )
    mus = default_mu_set(int(p["dense_max"]), int(p["shell_max"]))
    threads = p["threads"]
    rep = sweep_constant(
        mus, spec, seed=int(p["seed"]),
        threads=int(threads) if threads is not None else None,
    )
    echo = _echo(cfg)
    summary = {
        "c_emp": rep.c_emp,
        "argmax": dataclasses.asdict(rep.argmax),
        "shells": list(rep.shells),
        "mu_count": rep.mu_count,
        "grid_total": rep.grid_total,
        "seed": rep.seed,
        "ratio_at_zero_exact": rep.ratio_at_zero_exact,
        "finite_ok": rep.finite_ok,
        "convention": rep.convention,
    }
    if p["out_csv"]:
        emit_report(rep.per_mu, "csv", p["out_csv"], config=echo)
    if p["out_json"]:
        emit_json(summary, p["out_json"], config=echo)
    _print({"config": echo, **summary})
    if not (rep.finite_ok and rep.ratio_at_zero_exact):
        raise InvariantViolation(
            f"envelope sweep violated invariants: finite_ok={rep.finite_ok}, "
            f"ratio_at_zero_exact={rep.ratio_at_zero_exact}"
        )
    return EXIT_OK


def _quad_spec(p: Dict[str, object], mapping_key: str = "mapping") -> QuadratureSpec:
    return QuadratureSpec(
        base_rule=int(p["base_rule"]),
        max_refinements=int(p["max_refinements"]),
        rel_tol=float(p["rel_tol"]),
        mapping=str(p.get(mapping_key, "periodic_square")),
    )


def _cmd_lp(cfg: RunConfig) -> int:
    p = cfg.params
    mu = _parse_mu(p["mu"])
    if p["p"] is None:
        raise UsageError("--p is required")
    rep = haar_lp_norm(mu, float(p["p"]), _quad_spec(p))
    payload = {"config": _echo(cfg), **dataclasses.asdict(rep)}
    _print(payload)
    if p["out"]:
        emit_json(payload, p["out"])
    return EXIT_OK if rep.converged else EXIT_NONCONVERGENCE


def _cmd_scaling(cfg: RunConfig) -> int:
    p = cfg.params
    if p["family"] is None or p["p"] is None:
        raise UsageError("--family and --p are required")
    n_values = _parse_int_list(p["n_values"], "--n-values")
    echo = _echo(cfg)
    try:
        fit = scaling_fit(
            str(p["family"]), float(p["p"]), tuple(n_values),
            _quad_spec(p), b0=int(p["b0"]),
        )
    except ConvergenceError as e:
        partial = getattr(e, "partial_table", ())
        if p["out_csv"] and partial:
            emit_report(partial, "csv", p["out_csv"], config=echo)
        raise
    summary = {
        "family": fit.family,
        "p": fit.p,
        "slope": fit.slope,
        "residual": fit.residual,
        "slope_trimmed": fit.slope_trimmed,
        "residual_trimmed": fit.residual_trimmed,
        "n_values": n_values,
    }
    if p["out_csv"]:
        emit_report(fit.table, "csv", p["out_csv"], config=echo)
    if p["out_json"]:
        emit_json(summary, p["out_json"], config=echo)
    _print({"config": echo, **summary})
    return EXIT_OK


def _cmd_prop_i(cfg: RunConfig) -> int:
    p = cfg.params
    p_values = _parse_float_list(p["p_values"], "--p-values")
    pool = sorted(_parse_float_list(p["pool"], "--pool"))
    spec = QuadratureSpec(
        base_rule=int(p["base_rule"]),
        max_refinements=int(p["max_refinements"]),
        rel_tol=float(p["rel_tol"]),
        mapping="duffy",
    )
    triples = [
        (z, y, x)
        for x, y, z in itertools.combinations_with_replacement(pool, 3)
    ]
    rows = []
    per_p = []
    for pv in p_values:
        best = None
        shell_max: Dict[float, float] = {}
        for a, b, c in triples:
            i_num = I_numeric(pv, a, b, c, spec)
            i_bd = I_bound(pv, a, b, c)
            ratio = i_num / i_bd
            rows.append({
                "p": pv, "a": a, "b": b, "c": c,
                "i_numeric": i_num, "i_bound": i_bd, "ratio": ratio,
            })
            if best is None or ratio > best:
                best = ratio
            # magnitude shell = the smallest entry: the whole triple has been
            # scaled up by at least that factor from the unit boundary
            shell_max[c] = max(shell_max.get(c, 0.0), ratio)
        shells = [
            {"shell": s, "K_shell": shell_max[s]} for s in sorted(shell_max)
        ]
        growths = [
            shells[i + 1]["K_shell"] / shells[i]["K_shell"]
            for i in range(len(shells) - 1)
        ]
        # the first step leaves the unit boundary layer, where the integral
        # is still transient; stability is asserted between grown shells and
        # the boundary step is reported unmetered
        per_p.append({
            "p": pv,
            "K": best,
            "shells": shells,
            "boundary_growth": growths[0] if growths else 0.0,
            "max_shell_growth": max(growths[1:], default=0.0),
        })
    echo = _echo(cfg)
    summary = {
        "per_p": per_p,
        "K_overall": max(e["K"] for e in per_p),
        "max_shell_growth": max(e["max_shell_growth"] for e in per_p),
    }
    if p["out_csv"]:
        emit_report(rows, "csv", p["out_csv"], config=echo)
    if p["out_json"]:
        emit_json(summary, p["out_json"], config=echo)
    _print({"config": echo, **summary})
    return EXIT_OK


def _cmd_rank1(cfg: RunConfig) -> int:
    p = cfg.params
    n_max = int(p["n_max"])
    grid = int(p["grid"])
    thetas = math.pi * (np.arange(grid, dtype=np.float64) + 1.0) / (grid + 1.0)
    min_margin = math.inf
    arg_n = -1
    arg_theta = math.nan
    for n in range(n_max + 1):
        margins = rank1_bound_margin(n, thetas)
        i = int(np.argmin(margins))
        if margins[i] < min_margin:
            min_margin = float(margins[i])
            arg_n = n
            arg_theta = float(thetas[i])
    payload = {
        "config": _echo(cfg),
        "n_max": n_max,
        "grid": grid,
        "min_margin": min_margin,
        "argmin_n": arg_n,
        "argmin_theta": arg_theta,
    }
    _print(payload)
    if p["out"]:
        emit_json(payload, p["out"])
    if min_margin < -1e-12:
        raise InvariantViolation(
            f"rank-one margin {min_margin:.3e} below -1e-12 "
            f"at n={arg_n}, theta={arg_theta!r}"
        )
    return EXIT_OK


def _cmd_oracle_diff(cfg: RunConfig) -> int:
    p = cfg.params
    mu = _parse_mu(p["mu"])
    samples = int(p["samples"])
    regime = str(p["regime"])
    rng = np.random.default_rng(int(p["seed"]))
    d = dim(mu)
    tol = p["tol"]
    if tol is None:
        tol = (1e-8 if regime == "regular" else 1e-6) * d
    tol = float(tol)

    rows = []
    max_diff = 0.0
    count = 0
    while count < samples:
        if regime == "regular":
            t1 = rng.uniform(0.0, 2.0 * math.pi)
            t2 = rng.uniform(0.0, 2.0 * math.pi - t1)
            H = TorusPoint.from_alcove_coords(t1, t2)
            if min(H.wall_norms()) < 0.1:
                continue
            ref = chi_schur(mu, H)
            cand = chi_weyl(mu.shifted(), H)
        else:
            j = count % 3
            eps = rng.uniform(1e-9, 1e-6)
            mid = rng.uniform(0.3, 2.0 * math.pi - 0.6)
            if j == 1:
                t1, t2 = eps, mid
            elif j == 2:
                t1, t2 = mid, eps
            else:
                t1, t2 = mid, 2.0 * math.pi - mid - eps
            H = TorusPoint.from_alcove_coords(t1, t2)
            ref = chi_schur(mu, H)
            ts = descent_terms(mu.shifted(), H, j)
            cand = CharValue(ts.assembled(), f"descent{j}", ts.condition)
        diff = abs(cand.value - ref.value)
        max_diff = max(max_diff, diff)
        rows.append({
            "t1": H.alcove_coords[0], "t2": H.alcove_coords[1],
            "wall_min": min(H.wall_norms()), "method": cand.method,
            "cand_re": cand.value.real, "cand_im": cand.value.imag,
            "ref_re": ref.value.real, "ref_im": ref.value.imag,
            "abs_diff": diff,
        })
        count += 1

    echo = _echo(cfg)
    summary = {
        "mu": [mu.a, mu.b],
        "dim": d,
        "regime": regime,
        "samples": samples,
        "max_abs_diff": max_diff,
        "tol": tol,
        "within_tol": max_diff <= tol,
    }
    if p["out_csv"]:
        emit_report(rows, "csv", p["out_csv"], config=echo)
    if p["out_json"]:
        emit_json(summary, p["out_json"], config=echo)
    _print({"config": echo, **summary})
    if max_diff > tol:
        raise InvariantViolation(
            f"oracle disagreement {max_diff:.3e} exceeds tolerance {tol:.3e}"
        )
    return EXIT_OK


_COMMANDS = {
    "eval": _cmd_eval,
    "verify-envelope": _cmd_verify_envelope,
    "lp": _cmd_lp,
    "scaling": _cmd_scaling,
    "prop-i": _cmd_prop_i,
    "rank1": _cmd_rank1,
    "oracle-diff": _cmd_oracle_diff,
}


def _diag(kind: str, exc: BaseException) -> None:
    sys.stderr.write(
        json.dumps({"error": kind, "message": str(exc)}) + "\n"
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        cfg = _resolve(args)
        return _COMMANDS[cfg.command](cfg)
    except UsageError as e:
        _diag("usage", e)
        return EXIT_USAGE
    except (SingularInputError, WallTooSmallError) as e:
        _diag("singular-input", e)
        return EXIT_USAGE
    except ResourceLimitError as e:
        _diag("resource-limit", e)
        return EXIT_RESOURCE
    except ConvergenceError as e:
        _diag("non-convergence", e)
        return EXIT_NONCONVERGENCE
    except InvariantViolation as e:
        _diag("invariant-violation", e)
        return EXIT_INVARIANT
    except ReportWriteError as e:
        _diag("io", e)
        return 1
    except ValueError as e:
        _diag("usage", e)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

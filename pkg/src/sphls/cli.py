"""Command-line surface: constants, spectra, verification suites, search.

Every command prints a machine-readable document on stdout (JSON report
or CSV table) with floats rendered at 17 significant digits, so a rerun
with identical flags and seed is byte-identical.  Wall time goes to
stderr only.  Exit codes: 0 all checks pass, 1 a verification failed,
2 the invocation itself was invalid.
"""

import argparse
import json
import math
import os
import sys
import time
from pathlib import Path

import numpy as np

from .constants import (
    Params,
    duality_product,
    eigenvalue_E,
    eigenvalue_table,
    funk_hecke_quadrature,
    green_coeff,
    hls_sharp_constant,
    sobolev_classical_form,
    sobolev_sharp_constant,
)
from .errors import (
    DegenerateDirectionError,
    DomainError,
    IntegrationError,
    NoRootError,
    UsageError,
)
from .extremal import (
    euler_lagrange_iterate,
    key_inequality_bilinear_check,
    key_margin,
    trace_to_csv,
)
from .geometry import (
    ConformalMap,
    chordal_factorization,
    north_pole,
    sphere_point,
    transport,
)
from .normalize import com_normalize, com_result_to_json
from .specfun import zonal_basis_table
from .sphere2 import grid_from_callable, gsr_full_check
from . import zonal as zn

DEFAULT_SEED = 20260822
_TINY = 1e-300

VERIFY_SUITES = (
    "funk-hecke",
    "gsr",
    "key",
    "duality",
    "chordal",
    "conformal-invariance",
    "sobolev",
    "hls",
)


# ---------------------------------------------------------------------------
# deterministic rendering

def _fmt_float(x):
    if not math.isfinite(x):
        raise UsageError(f"cannot render non-finite number {x}")
    return format(x, ".17g")


def _render_json(obj):
    """JSON with floats at 17 significant digits and stable key order."""
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, float):
        return _fmt_float(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_render_json(v) for v in obj) + "]"
    if isinstance(obj, dict):
        parts = (f"{json.dumps(k)}: {_render_json(v)}" for k, v in obj.items())
        return "{" + ", ".join(parts) + "}"
    raise UsageError(f"cannot render object of type {type(obj).__name__}")


def _chk(name, measured, expected, tol, mode="rel"):
    """One report row; pass iff the deviation is within tol (mode rel/abs)."""
    if mode == "rel":
        ok = abs(measured - expected) <= tol * max(abs(expected), _TINY)
    else:
        ok = abs(measured - expected) <= tol
    return {
        "name": name,
        "status": "pass" if ok else "fail",
        "measured": float(measured),
        "expected": float(expected),
        "tolerance": float(tol),
        "mode": mode,
    }


def _viol(name, violation, tol):
    # one-sided bounds are reported as a violation magnitude against zero
    return _chk(name, max(float(violation), 0.0), 0.0, tol, mode="abs")


def _report(command, parameters, seed, checks):
    status = "pass" if all(c["status"] == "pass" for c in checks) else "fail"
    return {
        "command": command,
        "parameters": parameters,
        "seed": seed,
        "checks": checks,
        "status": status,
    }


def _emit(doc):
    sys.stdout.write(_render_json(doc) + "\n")
    return 0 if doc["status"] == "pass" else 1


def _resolve_seed(args):
    if getattr(args, "seed", None) is not None:
        return int(args.seed)
    env = os.environ.get("RUN_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise UsageError(f"RUN_SEED must be an integer, got {env!r}") from exc
    return DEFAULT_SEED


def _check_dim_arg(dim):
    if dim is None:
        raise UsageError("--dim is required")
    if dim < 1:
        raise UsageError(f"--dim must be a positive integer, got {dim}")
    return int(dim)


def _random_profile(n, rng, num_nodes=zn.DEFAULT_NODES, lmax=6, cap=1.5):
    # exp of a clipped low-degree expansion: smooth, strictly positive
    base = zn.zonal_constant(n, num_nodes=num_nodes)
    t = np.asarray(base.rule.nodes)
    coeff = rng.standard_normal(lmax + 1) / (1.0 + np.arange(lmax + 1)) ** 2
    g = coeff @ zonal_basis_table(n, lmax, t)
    peak = float(np.max(np.abs(g)))
    if peak > cap:
        g = g * (cap / peak)
    return zn.zonal_from_values(n, np.exp(g))


# ---------------------------------------------------------------------------
# commands

def cmd_constants(args):
    n = _check_dim_arg(args.dim)
    if (args.lam is None) == (args.s is None):
        raise UsageError("exactly one of --lambda and --s is required")
    if args.lam is not None:
        params = Params(n, args.lam)
        lam, s = params.lam, params.s
    else:
        s = float(args.s)
        if not 0.0 < s < n / 2.0:
            raise DomainError(f"--s must lie in (0, {n / 2}), got {s}")
        lam = n - 2.0 * s
        params = Params(n, lam)

    values = {
        "dim": n,
        "lambda": lam,
        "s": s,
        "p": params.p,
        "hls_sharp_constant": hls_sharp_constant(n, lam),
        "sobolev_sharp_constant": sobolev_sharp_constant(n, s),
        "green_coeff": green_coeff(n, s),
    }
    checks = [_chk("duality-identity", duality_product(n, s), 1.0, 1e-12)]
    if s == 1.0 and n >= 3:
        checks.append(
            _chk(
                "gradient-form-printings-agree",
                sobolev_sharp_constant(n, 1.0),
                sobolev_classical_form(n),
                1e-13,
            )
        )
    doc = _report("constants", values, None, checks)
    return _emit(doc)


def cmd_spectrum(args):
    n = _check_dim_arg(args.dim)
    if args.alpha is None:
        raise UsageError("--alpha is required")
    alpha = float(args.alpha)
    if not 0.0 < alpha < n / 2.0:
        raise DomainError(f"--alpha must lie in (0, {n / 2}), got {alpha}")
    lmax = 200 if args.lmax is None else int(args.lmax)
    if lmax < 0:
        raise UsageError(f"--lmax must be nonnegative, got {lmax}")

    plain = np.asarray(eigenvalue_table(n, alpha, lmax))
    shifted = np.asarray(eigenvalue_table(n, alpha - 1.0, lmax))
    margins = [key_margin(n, alpha, l) for l in range(lmax + 1)]
    lines = ["l,E_l,E_tilde_l,key_margin"]
    for l in range(lmax + 1):
        lines.append(
            f"{l},{_fmt_float(float(plain[l]))},"
            f"{_fmt_float(float(shifted[l]))},{_fmt_float(margins[l])}"
        )
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 1 if min(margins) < -1e-12 else 0


def cmd_optimize(args):
    n = _check_dim_arg(args.dim)
    if args.lam is None:
        raise UsageError("--lambda is required")
    params = Params(n, args.lam)
    nodes = zn.DEFAULT_NODES if args.nodes is None else int(args.nodes)
    iters = 500 if args.iters is None else int(args.iters)
    seed = _resolve_seed(args)

    rng = np.random.default_rng(seed)
    h0 = _random_profile(n, rng, num_nodes=nodes)
    h, trace = euler_lagrange_iterate(params, h0, max_iters=iters, relax=args.relax)
    sharp = hls_sharp_constant(n, params.lam)
    last = trace.rows[-1]

    if args.trace:
        Path(args.trace).write_text(trace_to_csv(trace))

    checks = [
        _chk("stationarity-residual", last[3], 0.0, 1e-8, mode="abs"),
        _chk("quotient-vs-sharp", last[1], sharp, 1e-6),
    ]
    parameters = {
        "dim": n,
        "lambda": params.lam,
        "nodes": nodes,
        "iters": iters,
        "relax": float(args.relax),
        "iterations_used": int(last[0]),
        "converged": trace.converged,
        "quotient": last[1],
        "multiplier": trace.constant,
        "sharp_constant": sharp,
    }
    doc = _report("optimize", parameters, seed, checks)
    return _emit(doc)


def cmd_normalize(args):
    try:
        text = Path(args.input).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc}") from exc
    f = zn.zonal_from_json(text)
    res = com_normalize(f, args.p)
    doc = json.loads(com_result_to_json(res))
    sys.stdout.write(_render_json(doc) + "\n")
    return 0


# ---------------------------------------------------------------------------
# verification suites

def _suite_funk_hecke(args, seed):
    n = 3 if args.dim is None else _check_dim_arg(args.dim)
    alpha = 0.25 if args.alpha is None else float(args.alpha)
    if not alpha < n / 2.0:
        raise DomainError(f"--alpha must be below {n / 2} for S^{n}, got {alpha}")
    lmax = 10 if args.lmax is None else int(args.lmax)
    checks = []
    for l in range(lmax + 1):
        quad = funk_hecke_quadrature(
            n, lambda t: (1.0 - t) ** (-alpha), l, singular_exponent=alpha
        )
        checks.append(_chk(f"eigenvalue-l{l}", quad, eigenvalue_E(n, alpha, l), 1e-8))
    return {"dim": n, "alpha": alpha, "lmax": lmax}, checks


def _suite_gsr(args, seed):
    trials = 50 if args.trials is None else int(args.trials)
    rng = np.random.default_rng(seed)
    checks = []
    for n in (2, 3):
        worst = 0.0
        for _ in range(trials):
            coeff = rng.standard_normal(7) / (1.0 + np.arange(7)) ** 2
            u = zn.zonal_from_coeffs(n, coeff)
            lhs, rhs = zn.gsr_zonal_check(u)
            worst = max(worst, abs(lhs - rhs) / max(abs(rhs), _TINY))
        checks.append(_viol(f"zonal-identity-worst-n{n}", worst, 1e-10))
    grid = grid_from_callable(
        128, 256, lambda x, y, z: np.exp(x + 0.4 * y - 0.2 * z)
    )
    lhs, rhs = gsr_full_check(grid)
    checks.append(_chk("grid-identity", lhs, rhs, 1e-4))
    return {"trials": trials, "grid": [128, 256]}, checks


def _suite_key(args, seed):
    n = 3 if args.dim is None else _check_dim_arg(args.dim)
    alpha = 0.7 if args.alpha is None else float(args.alpha)
    if not 0.0 < alpha < n / 2.0:
        raise DomainError(f"--alpha must lie in (0, {n / 2}), got {alpha}")
    lmax = 200 if args.lmax is None else int(args.lmax)
    margins = np.array([key_margin(n, alpha, l) for l in range(lmax + 1)])
    checks = [
        _viol("margin-floor-violation", -float(np.min(margins)), 1e-12),
        _chk("degree-zero-margin", float(margins[0]), 0.0, 1e-11, mode="abs"),
        _viol("degree-positive-violation", -float(np.min(margins[1:])), 0.0),
    ]
    rng = np.random.default_rng(seed)
    f = _random_profile(n, rng)
    lhs, rhs = key_inequality_bilinear_check(f, n, alpha)
    alt = zn._bilinear_spectral(f, f, alpha) - 0.5 * zn._bilinear_spectral(
        f, f, alpha - 1.0
    )
    checks.append(_chk("two-route-equivalence", lhs, alt, 1e-10))
    checks.append(_viol("bilinear-gap-violation", rhs - lhs, 1e-12 * max(abs(lhs), 1.0)))
    return {"dim": n, "alpha": alpha, "lmax": lmax}, checks


def _suite_duality(args, seed):
    checks = []
    for n in (3, 4, 5):
        for s in (0.25, 0.5, 1.0, 1.5):
            if not s < n / 2.0:
                continue
            checks.append(
                _chk(f"duality-n{n}-s{s}", duality_product(n, s), 1.0, 1e-12)
            )
    return {"dims": [3, 4, 5], "s_values": [0.25, 0.5, 1.0, 1.5]}, checks


def _suite_chordal(args, seed):
    n = 3 if args.dim is None else _check_dim_arg(args.dim)
    trials = 200 if args.trials is None else int(args.trials)
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        scale = 10.0 ** rng.uniform(-2.0, 2.0)
        x = rng.standard_normal(n) * scale
        y = rng.standard_normal(n) * 10.0 ** rng.uniform(-2.0, 2.0)
        lhs, rhs = chordal_factorization(x, y)
        worst = max(worst, abs(lhs - rhs) / max(abs(rhs), _TINY))
    return {"dim": n, "trials": trials}, [
        _viol("factorization-worst", worst, 1e-14)
    ]


def _suite_conformal_invariance(args, seed):
    n = 3 if args.dim is None else _check_dim_arg(args.dim)
    lam = n / 2.0 if args.lam is None else float(args.lam)
    params = Params(n, lam)
    trials = 20 if args.trials is None else int(args.trials)
    rng = np.random.default_rng(seed)
    worst_norm = 0.0
    worst_quot = 0.0
    for _ in range(trials):
        f = _random_profile(n, rng)
        delta = float(np.exp(rng.uniform(-1.2, 1.2)))
        sign = 1.0 if rng.uniform() < 0.5 else -1.0
        m = ConformalMap(delta=delta, xi=north_pole(n) if sign > 0 else _south(n))
        moved = transport(f, m, params.p)
        norm_drift = abs(
            zn.zonal_lp_norm(moved, params.p) / zn.zonal_lp_norm(f, params.p) - 1.0
        )
        quot_drift = abs(
            zn.hls_quotient(moved, lam) / zn.hls_quotient(f, lam) - 1.0
        )
        worst_norm = max(worst_norm, norm_drift)
        worst_quot = max(worst_quot, quot_drift)
    checks = [
        _viol("norm-preservation-worst", worst_norm, 1e-7),
        _viol("quotient-invariance-worst", worst_quot, 1e-7),
    ]
    return {"dim": n, "lambda": lam, "trials": trials}, checks


def _south(n):
    return sphere_point(-north_pole(n).coords)


def _suite_sobolev(args, seed):
    n = 3 if args.dim is None else _check_dim_arg(args.dim)
    if n < 3:
        raise DomainError(f"the gradient-form suite needs dimension >= 3, got {n}")
    trials = 200 if args.trials is None else int(args.trials)
    rng = np.random.default_rng(seed)
    sharp = sobolev_sharp_constant(n, 1.0)
    worst = 0.0
    for _ in range(trials):
        u = _random_profile(n, rng)
        worst = max(worst, sharp - zn.sobolev_quotient(u))
    checks = [_viol("quotient-floor-violation", worst, 1e-9 * sharp)]
    for r in (0.0, 0.3, 0.5, 0.7, 0.9):
        q = zn.sobolev_quotient(zn.sobolev_extremal_family(n, r))
        checks.append(_chk(f"family-r{r}", q, sharp, 1e-7))
    return {"dim": n, "trials": trials}, checks


def _suite_hls(args, seed):
    n = 2 if args.dim is None else _check_dim_arg(args.dim)
    lam = 1.0 if args.lam is None else float(args.lam)
    params = Params(n, lam)
    trials = 200 if args.trials is None else int(args.trials)
    rng = np.random.default_rng(seed)
    sharp = hls_sharp_constant(n, lam)
    worst = 0.0
    for _ in range(trials):
        f = _random_profile(n, rng)
        worst = max(worst, zn.hls_quotient(f, lam) - sharp)
    checks = [_viol("quotient-cap-violation", worst, 1e-9 * sharp)]
    for r in (0.0, 0.3, 0.5, 0.7, 0.9):
        q = zn.hls_quotient(zn.hls_extremal_family(n, lam, r), lam)
        checks.append(_chk(f"family-r{r}", q, sharp, 1e-7))
    h0 = zn.zonal_from_coeffs(n, [1.0, 0.3])
    _, trace = euler_lagrange_iterate(params, h0)
    checks.append(_chk("search-quotient", trace.rows[-1][1], sharp, 1e-6))
    checks.append(_chk("search-residual", trace.rows[-1][3], 0.0, 1e-8, mode="abs"))
    return {"dim": n, "lambda": lam, "trials": trials}, checks


_SUITE_RUNNERS = {
    "funk-hecke": _suite_funk_hecke,
    "gsr": _suite_gsr,
    "key": _suite_key,
    "duality": _suite_duality,
    "chordal": _suite_chordal,
    "conformal-invariance": _suite_conformal_invariance,
    "sobolev": _suite_sobolev,
    "hls": _suite_hls,
}


def cmd_verify(args):
    seed = _resolve_seed(args)
    parameters, checks = _SUITE_RUNNERS[args.suite](args, seed)
    parameters = {"suite": args.suite, **parameters}
    doc = _report("verify", parameters, seed, checks)
    return _emit(doc)


# ---------------------------------------------------------------------------
# parser

def _build_parser():
    parser = argparse.ArgumentParser(
        prog="sphls",
        description="Sharp-constant verification toolkit for sphere inequalities.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("constants", help="sharp constants and the duality identity")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--s", type=float, default=None)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("spectrum", help="eigenvalue table with the shifted margin")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--lmax", type=int, default=None)
    p.add_argument("--out", type=str, default=None)
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("verify", help="run a named verification suite")
    p.add_argument("suite", choices=VERIFY_SUITES)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--lmax", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("optimize", help="fixed-point search from a seeded start")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--nodes", type=int, default=None)
    p.add_argument("--iters", type=int, default=None)
    p.add_argument("--relax", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--trace", type=str, default=None)
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("normalize", help="center-of-mass normalization of a profile")
    p.add_argument("--input", type=str, required=True)
    p.add_argument("--p", type=float, required=True)
    p.set_defaults(func=cmd_normalize)

    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    start = time.perf_counter()
    try:
        return args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NoRootError, IntegrationError, DegenerateDirectionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    finally:
        print(f"wall_time_s={time.perf_counter() - start:.3f}", file=sys.stderr)


if __name__ == "__main__":
    sys.exit(main())

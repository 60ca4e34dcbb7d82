"""Command-line front end.

JSON is the canonical output; CSV is a flat projection of the same values for
plotting. A run manifest is written next to every result file, and rerunning a
manifest reproduces the payload byte-for-byte.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass

import numpy as np

from .errors import NumericFailure, UsageError
from .experiments import (
    REFERENCE_LINES,
    dyadic_scan,
    fit_laguerre_lower_tail,
    fit_point_to_line_tail,
    run_lil,
    verify_loe_identity,
    verify_lue_identity,
)
from .laguerre import (
    LaguerreParams,
    gershgorin_bound,
    interleave,
    lambda_max_batch,
    ld_lower_bound_product,
    linearize,
    sample_bidiagonal,
)
from .lpp import line_to_point_batch, passage_point_batch, point_to_line_batch
from .randkit import RngStream
from .tilt import tail_probability
from .tridiag import largest_eigenvalue


@dataclass(frozen=True)
class RunManifest:
    subcommand: str
    params: dict
    master_seed: int
    trials: int
    threads: int
    output_path: str | None
    format: str


# ---------------------------------------------------------------------------
# serialization: floats at 17 significant digits, keys in stable order


def _fmt_float(x: float) -> str:
    if x != x or x in (float("inf"), float("-inf")):
        raise NumericFailure(f"non-finite value in output: {x!r}")
    return format(x, ".17g")


def _dumps(obj, indent: int = 0) -> str:
    pad = "  " * indent
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, (list, tuple, np.ndarray)):
        items = [_dumps(v, indent + 1) for v in obj]
        if not items:
            return "[]"
        inner = ",\n".join("  " * (indent + 1) + s for s in items)
        return "[\n" + inner + "\n" + pad + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        rows = []
        for key, val in obj.items():
            rows.append("  " * (indent + 1) + json.dumps(str(key)) + ": " + _dumps(val, indent + 1))
        return "{\n" + ",\n".join(rows) + "\n" + pad + "}"
    raise UsageError(f"cannot serialize value of type {type(obj).__name__}")


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return _fmt_float(float(v))
    return str(v)


def _csv_text(header: list, rows: list) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_csv_cell(v) for v in row))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommand handlers: each returns (result_dict, csv_header, csv_rows)


def _parse_grid(text: str) -> list:
    try:
        vals = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise UsageError(f"bad grid {text!r}: {exc}") from exc
    if not vals:
        raise UsageError("empty grid")
    return vals


def _cmd_sample_laguerre(a):
    p = LaguerreParams(m=a.m, n=a.n, beta=a.beta)
    vals = lambda_max_batch(p, a.seed, a.trials)
    result = {
        "m": a.m,
        "n": a.n,
        "beta": a.beta,
        "edge": p.edge,
        "trials": a.trials,
        "seed": a.seed,
        "samples": vals,
    }
    rows = [(i, float(v)) for i, v in enumerate(vals)]
    return result, ["index", "lambda_max"], rows


def _cmd_lpp(a):
    if a.geometry == "point":
        vals = passage_point_batch(a.seed, a.n, a.trials)
    elif a.geometry == "line":
        vals = point_to_line_batch(a.seed, a.n, a.trials)
    elif a.geometry == "line-to-point":
        vals = line_to_point_batch(a.seed, max(1, a.n // 2), a.n, a.trials)
    else:
        raise UsageError(f"unknown geometry {a.geometry!r}")
    result = {
        "n": a.n,
        "geometry": a.geometry,
        "trials": a.trials,
        "seed": a.seed,
        "samples": vals,
    }
    rows = [(i, float(v)) for i, v in enumerate(vals)]
    return result, ["index", "passage_time"], rows


def _ks_result(rep, n, trials, seed):
    result = {
        "n": n,
        "trials": trials,
        "seed": seed,
        "ks_stat": rep.ks_stat,
        "n_a": rep.n_a,
        "n_b": rep.n_b,
        "critical_001": rep.critical_001,
        "pass": rep.passed,
    }
    rows = [(n, trials, seed, rep.ks_stat, rep.critical_001, rep.passed)]
    return result, ["n", "trials", "seed", "ks_stat", "critical_001", "pass"], rows


def _cmd_verify_loe(a):
    return _ks_result(verify_loe_identity(a.n, a.trials, a.seed), a.n, a.trials, a.seed)


def _cmd_verify_lue(a):
    return _ks_result(verify_lue_identity(a.n, a.trials, a.seed), a.n, a.trials, a.seed)


def _cmd_tail(a):
    p = LaguerreParams(m=a.m, n=a.n, beta=a.beta)
    est = tail_probability(p, a.eps, b=a.b, trials=a.trials, seed=a.seed, method=a.method)
    result = {
        "p_hat": est.p_hat,
        "log_p_hat": est.log_p_hat,
        "std_err": est.std_err,
        "trials": est.trials,
        "seed": est.seed,
        "method": est.method,
    }
    rows = [(est.p_hat, est.log_p_hat, est.std_err, est.trials, est.seed, est.method)]
    return result, ["p_hat", "log_p_hat", "std_err", "trials", "seed", "method"], rows


def _fit_result(fit, predictor_name):
    result = {
        "slope": fit.slope,
        "grid": [
            {predictor_name: u, "log_p_hat": lp, "std_err": se, "ratio": (None if r != r else r)}
            for (u, lp, se), r in zip(fit.grid, fit.per_point_ratio)
        ],
    }
    rows = [
        (u, lp, se, (None if r != r else r), fit.slope)
        for (u, lp, se), r in zip(fit.grid, fit.per_point_ratio)
    ]
    return result, [predictor_name, "log_p_hat", "std_err", "ratio", "slope"], rows


def _cmd_fit_tail(a):
    if a.family == "point-to-line":
        if a.x is None:
            raise UsageError("fit-tail point-to-line requires --x")
        fit = fit_point_to_line_tail(a.n, _parse_grid(a.x), a.trials, method=a.method, seed=a.seed, b=a.b)
        return _fit_result(fit, "x")
    if a.family == "laguerre":
        if a.eps_grid is None:
            raise UsageError("fit-tail laguerre requires --eps-grid")
        if a.m is None:
            raise UsageError("fit-tail laguerre requires --m")
        p = LaguerreParams(m=a.m, n=a.n, beta=a.beta)
        fit = fit_laguerre_lower_tail(p, _parse_grid(a.eps_grid), a.trials, seed=a.seed, b=a.b, method=a.method)
        return _fit_result(fit, "predictor")
    raise UsageError(f"unknown family {a.family!r}")


def _cmd_lil(a):
    trace = run_lil(a.seed, a.nmax, start_n=a.start_n)
    ns = list(range(trace.start_n, a.nmax + 1))
    result = {
        "seed": a.seed,
        "nmax": a.nmax,
        "start_n": trace.start_n,
        "reference_lines": dict(REFERENCE_LINES),
        "final_scaled_min": float(trace.scaled_min[-1]),
        "final_scaled_max": float(trace.scaled_max[-1]),
        "n": ns,
        "t_n": [r.t_n for r in trace.records[trace.start_n - 1 :]],
        "z_n": [r.z_n for r in trace.records[trace.start_n - 1 :]],
        "scaled_min": trace.scaled_min,
        "scaled_max": trace.scaled_max,
    }
    rows = [
        (n, r.t_n, r.z_n, float(mn), float(mx))
        for n, r, mn, mx in zip(ns, trace.records[trace.start_n - 1 :], trace.scaled_min, trace.scaled_max)
    ]
    return result, ["n", "t_n", "z_n", "scaled_min", "scaled_max"], rows


def _cmd_dyadic(a):
    scans = []
    successes = 0
    for i in range(a.trials):
        s = dyadic_scan(a.seed + i, a.k, eta=a.eta, threshold_const=a.threshold_const)
        if not s.sandwich_ok:
            raise NumericFailure(
                f"path-splitting inequality violated at seed {a.seed + i}: "
                f"{s.sandwich_lhs} > {s.sandwich_rhs}"
            )
        ok = s.tau is not None and bool(s.b_tau)
        successes += ok
        scans.append(
            {
                "seed": a.seed + i,
                "tau": s.tau,
                "b_tau": s.b_tau,
                "success": ok,
                "sandwich_lhs": s.sandwich_lhs,
                "sandwich_rhs": s.sandwich_rhs,
                "sandwich_ok": s.sandwich_ok,
            }
        )
    result = {
        "k": a.k,
        "eta": a.eta,
        "threshold_const": a.threshold_const,
        "trials": a.trials,
        "seed": a.seed,
        "success_fraction": successes / a.trials,
        "scans": scans,
    }
    rows = [
        (s["seed"], s["tau"], s["b_tau"], s["success"], s["sandwich_lhs"], s["sandwich_rhs"], s["sandwich_ok"])
        for s in scans
    ]
    return result, ["seed", "tau", "b_tau", "success", "sandwich_lhs", "sandwich_rhs", "sandwich_ok"], rows


def _cmd_gershgorin(a):
    p = LaguerreParams(m=a.m, n=a.n, beta=a.beta)
    violations = 0
    max_ratio = 0.0
    for i in range(a.trials):
        rng = RngStream(master_seed=a.seed, stream_id=i)
        bm = sample_bidiagonal(p, rng)
        chain = interleave(bm)
        res = largest_eigenvalue(linearize(bm))
        s_top = res.value
        bound = gershgorin_bound(chain)
        ratio = s_top / bound
        if s_top > bound * (1.0 + 1e-12):
            violations += 1
        if ratio > max_ratio:
            max_ratio = ratio
    result = {
        "m": a.m,
        "n": a.n,
        "beta": a.beta,
        "trials": a.trials,
        "seed": a.seed,
        "violations": violations,
        "max_ratio": max_ratio,
    }
    if a.eps is not None:
        result["eps"] = a.eps
        result["product_log_bound"] = ld_lower_bound_product(p, a.eps)
    header = ["m", "n", "beta", "trials", "seed", "violations", "max_ratio", "eps", "product_log_bound"]
    rows = [
        (a.m, a.n, a.beta, a.trials, a.seed, violations, max_ratio, a.eps, result.get("product_log_bound"))
    ]
    return result, header, rows


# ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _build_parser() -> _Parser:
    top = _Parser(prog="betalpp", description=__doc__)
    sub = top.add_subparsers(dest="subcommand", required=True)

    def common(p, trials_default=10000):
        p.add_argument("--trials", type=int, default=trials_default)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--format", choices=["json", "csv"], default="json")
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--threads", type=int, default=0, help="0 = available parallelism")

    p = sub.add_parser("sample-laguerre")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    common(p, trials_default=100)
    p.set_defaults(fn=_cmd_sample_laguerre)

    p = sub.add_parser("lpp")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--geometry", choices=["point", "line", "line-to-point"], default="point")
    common(p, trials_default=100)
    p.set_defaults(fn=_cmd_lpp)

    for name, fn in (("verify-loe", _cmd_verify_loe), ("verify-lue", _cmd_verify_lue)):
        p = sub.add_parser(name)
        p.add_argument("--n", type=int, required=True)
        common(p, trials_default=20000)
        p.set_defaults(fn=fn)

    p = sub.add_parser("tail")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--eps", type=float, required=True)
    p.add_argument("--method", choices=["naive", "importance"], default="importance")
    p.add_argument("--b", type=float, default=0.2)
    common(p, trials_default=100000)
    p.set_defaults(fn=_cmd_tail)

    p = sub.add_parser("fit-tail")
    p.add_argument("--family", choices=["point-to-line", "laguerre"], default="point-to-line")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--x", type=str, default=None, help="comma-separated x grid (point-to-line)")
    p.add_argument("--eps-grid", type=str, default=None, help="comma-separated eps grid (laguerre)")
    p.add_argument("--method", choices=["naive", "importance"], default="importance")
    p.add_argument("--b", type=float, default=0.2)
    common(p, trials_default=100000)
    p.set_defaults(fn=_cmd_fit_tail)

    p = sub.add_parser("lil")
    p.add_argument("--nmax", type=int, default=2**14)
    p.add_argument("--start-n", type=int, default=16)
    common(p, trials_default=1)
    p.set_defaults(fn=_cmd_lil)

    p = sub.add_parser("dyadic")
    p.add_argument("--k", type=int, default=10)
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--threshold-const", type=float, default=1.0)
    common(p, trials_default=1)
    p.set_defaults(fn=_cmd_dyadic)

    p = sub.add_parser("gershgorin")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--beta", type=float, default=1.0)
    p.add_argument("--eps", type=float, default=None)
    common(p, trials_default=1000)
    p.set_defaults(fn=_cmd_gershgorin)

    return top


def _manifest(a) -> RunManifest:
    skip = {"fn", "subcommand", "seed", "trials", "threads", "out", "format"}
    params = {k: v for k, v in sorted(vars(a).items()) if k not in skip and v is not None}
    return RunManifest(
        subcommand=a.subcommand,
        params=params,
        master_seed=a.seed,
        trials=a.trials,
        threads=a.threads,
        output_path=a.out,
        format=a.format,
    )


def run(argv=None) -> int:
    try:
        args = _build_parser().parse_args(argv)
        env_seed = os.environ.get("BETALPP_SEED")
        if env_seed is not None:
            try:
                args.seed = int(env_seed)
            except ValueError as exc:
                raise UsageError(f"BETALPP_SEED must be an integer, got {env_seed!r}") from exc
        if args.threads > 0:
            import numba

            numba.set_num_threads(args.threads)
        result, header, rows = args.fn(args)
        payload = _dumps(result) + "\n" if args.format == "json" else _csv_text(header, rows)
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(payload)
            manifest_path = args.out + ".manifest.json"
            with open(manifest_path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(_dumps(asdict(_manifest(args))) + "\n")
        else:
            sys.stdout.write(payload)
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except NumericFailure as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 2


def rerun_manifest(path: str) -> int:
    """Rebuild the argv of a stored manifest and run it again."""
    with open(path, encoding="utf-8") as fh:
        man = json.load(fh)
    argv = [man["subcommand"]]
    for key, val in man["params"].items():
        flag = "--" + key.replace("_", "-")
        if isinstance(val, bool):
            raise UsageError(f"boolean manifest param {key} not replayable")
        argv += [flag, str(val)]
    argv += ["--seed", str(man["master_seed"]), "--trials", str(man["trials"])]
    argv += ["--threads", str(man["threads"]), "--format", man["format"]]
    if man["output_path"]:
        argv += ["--out", man["output_path"]]
    return run(argv)


def main() -> None:
    sys.exit(run())

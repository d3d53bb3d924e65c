"""Command-line front end: sequence tables, identity certification,
moment checks, and sampling, with machine-readable JSON/CSV output.

Exit codes: 0 success, 1 any check/identity failure, 2 configuration or
domain error.  Rationals are always emitted as "p/q" strings (never
decimals); floats use shortest round-trip formatting.  The environment
variable DEGDERANGE_OUT_DIR supplies a default directory for relative
--out paths.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from fractions import Fraction

from . import identities, probability, sequences
from .exactcore import Poly
from .sequences import SequenceTable

SCHEMA_VERSION = 1
HARD_N_CAP = 256

DEFAULT_LAMBDA_GRID = "0,1/2,-1/2,1/3,-1/3,2/7"
DEFAULT_X_GRID = "0,1,-2,3/4"

TABLE_SELECTORS = (
    "derangement",
    "derangement-poly",
    "derangement-order",
    "stirling1",
    "stirling2",
    "fubini",
    "bell",
    "falling",
)


class CliError(Exception):
    """Configuration/domain problem; maps to exit code 2."""


def _parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise CliError(f"bad rational {text!r}: {exc}") from None


def _parse_grid(text: str) -> list[Fraction]:
    vals = [_parse_rational(part) for part in text.split(",") if part.strip()]
    if not vals:
        raise CliError("empty grid")
    return vals


def _frac_str(q) -> str:
    return str(Fraction(q))


def _resolve_out(path: str | None):
    if path is None or path == "-":
        return None
    if not os.path.isabs(path):
        base = os.environ.get("DEGDERANGE_OUT_DIR")
        if base:
            path = os.path.join(base, path)
    return path


def _emit(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(out_path, "w") as fh:
            fh.write(text)


def _json_doc(command: str, params: dict, results) -> str:
    return json.dumps(
        {
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "params": params,
            "results": results,
        },
        indent=2,
    )


def _csv_rows(header: list[str], rows: list[list[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# table


def _build_table(args) -> SequenceTable | list[tuple[int, Poly]]:
    """Scalar selectors produce a SequenceTable; the poly selector a row list."""
    lam = _parse_rational(args.lam)
    n_max = args.n_max
    if not 0 <= n_max <= HARD_N_CAP:
        raise CliError(f"--n-max must lie in [0, {HARD_N_CAP}]")
    sel = args.sequence
    x = r = m = None
    if sel == "derangement":
        x = _parse_rational(args.x) if args.x is not None else Fraction(0)
        vals = [(n, sequences.derange_deg(n, lam, x)) for n in range(n_max + 1)]
    elif sel == "derangement-poly":
        return [(n, sequences.derange_deg_poly(n, lam)) for n in range(n_max + 1)]
    elif sel == "derangement-order":
        if args.r is None:
            raise CliError("derangement-order needs --r")
        if args.r < 1:
            raise CliError("--r must be >= 1")
        x = _parse_rational(args.x) if args.x is not None else Fraction(0)
        r = args.r
        vals = [(n, sequences.derange_deg_order(n, r, lam, x)) for n in range(n_max + 1)]
    elif sel in ("stirling1", "stirling2"):
        if args.m is None:
            raise CliError(f"{sel} needs --m (fixed second index)")
        if args.m < 0:
            raise CliError("--m must be >= 0")
        m = args.m
        fn = sequences.stirling1_deg if sel == "stirling1" else sequences.stirling2_deg
        vals = [(n, fn(n, m, lam)) for n in range(n_max + 1)]
    elif sel == "fubini":
        x = _parse_rational(args.x) if args.x is not None else Fraction(1)
        vals = [(n, sequences.fubini_deg(n, lam, x)) for n in range(n_max + 1)]
    elif sel == "bell":
        x = _parse_rational(args.x) if args.x is not None else Fraction(1)
        vals = [(n, sequences.bell_deg(n, lam, x)) for n in range(n_max + 1)]
    elif sel == "falling":
        x = _parse_rational(args.x) if args.x is not None else Fraction(1)
        vals = [(n, sequences.falling_deg(x, n, lam)) for n in range(n_max + 1)]
    else:
        raise CliError(f"unknown sequence selector {sel!r}")
    return SequenceTable(name=sel, lam=lam, x=x, r=r, m=m, values=tuple(vals))


def _cmd_table(args) -> int:
    table = _build_table(args)
    if isinstance(table, SequenceTable):
        params = {"sequence": table.name, "lambda": _frac_str(table.lam), "n_max": args.n_max}
        if table.x is not None:
            params["x"] = _frac_str(table.x)
        if table.r is not None:
            params["r"] = table.r
        if table.m is not None:
            params["m"] = table.m
        if args.format == "json":
            results = [{"n": n, "value": _frac_str(v)} for n, v in table.values]
            text = _json_doc("table", params, results)
        else:
            rows = [[str(n), _frac_str(v)] for n, v in table.values]
            text = _csv_rows(["n", "value"], rows)
    else:
        params = {
            "sequence": args.sequence,
            "lambda": _frac_str(_parse_rational(args.lam)),
            "n_max": args.n_max,
        }
        if args.format == "json":
            results = [
                {"n": n, "coeffs": [_frac_str(c) for c in p.coeffs]} for n, p in table
            ]
            text = _json_doc("table", params, results)
        else:
            rows = [[str(n), " ".join(_frac_str(c) for c in p.coeffs)] for n, p in table]
            text = _csv_rows(["n", "coeffs"], rows)
    _emit(text, _resolve_out(args.out))
    return 0


# ---------------------------------------------------------------------------
# verify / certify


def _parse_identities(text: str | None) -> list[identities.IdentityId]:
    if text is None or text.strip().lower() == "all":
        return list(identities.IdentityId)
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            out.append(identities.IdentityId(part))
        except ValueError:
            valid = ", ".join(i.value for i in identities.IdentityId)
            raise CliError(f"unknown identity {part!r}; valid: {valid}") from None
    if not out:
        raise CliError("empty identity list")
    return out


def _cmd_verify(args) -> int:
    ids = _parse_identities(args.identities)
    if not 0 <= args.n_max <= HARD_N_CAP:
        raise CliError(f"--n-max must lie in [0, {HARD_N_CAP}]")
    if args.r_max < 1:
        raise CliError("--r-max must be >= 1")
    lam_grid = _parse_grid(args.lambda_grid)
    x_grid = _parse_grid(args.x_grid)
    report = identities.verify_grid(
        ids,
        n_max=args.n_max,
        lam_grid=lam_grid,
        x_grid=x_grid,
        r_max=args.r_max,
        mutate=args.mutate,
        jobs=args.jobs,
    )
    params = {
        "identities": [i.value for i in ids],
        "n_max": args.n_max,
        "lambda_grid": [_frac_str(v) for v in lam_grid],
        "x_grid": [_frac_str(v) for v in x_grid],
        "r_max": args.r_max,
        "mutate": args.mutate,
    }
    failures = [
        {
            "identity": case.identity_id.value,
            "n": case.n,
            "lambda": _frac_str(case.lam),
            "x": _frac_str(case.x) if case.x is not None else None,
            "r": case.r,
            "lhs": _frac_str(lhs),
            "rhs": _frac_str(rhs),
        }
        for case, lhs, rhs in report.failures
    ]
    results = {
        "cases_run": report.cases_run,
        "failures": failures,
        "passed": report.ok,
    }
    _emit(_json_doc("verify", params, results), _resolve_out(args.out))
    return 0 if report.ok else 1


def _certify_points(n: int, count: int) -> list[Fraction]:
    # distinct rationals symmetric around 0, denominator clear of small poles
    return [Fraction(2 * i - n, 2 * (n + 2)) for i in range(count)]


def _cmd_certify(args) -> int:
    ids = _parse_identities(args.identities)
    if not 0 <= args.n_max <= HARD_N_CAP:
        raise CliError(f"--n-max must lie in [0, {HARD_N_CAP}]")
    all_ok = True
    results = []
    for ident in ids:
        per_n = {}
        for n in range(identities.identity_min_n(ident), args.n_max + 1):
            pts = _certify_points(n, n + 1)
            ok = identities.certify(ident, n, pts, pts, mutate=args.mutate)
            per_n[str(n)] = ok
            all_ok = all_ok and ok
        results.append({"identity": ident.value, "certified": per_n})
    params = {
        "identities": [i.value for i in ids],
        "n_max": args.n_max,
        "mutate": args.mutate,
    }
    _emit(_json_doc("certify", params, results), _resolve_out(args.out))
    return 0 if all_ok else 1


# ---------------------------------------------------------------------------
# gamma-check / sample


def _result_dict(res: probability.MomentCheckResult, **context) -> dict:
    out = dict(context)
    out.update(
        {
            "numeric_value": res.numeric_value,
            "exact_target": _frac_str(res.exact_target),
            "abs_error": res.abs_error,
            "rel_error": res.rel_error,
            "passed": res.passed,
        }
    )
    if res.inconclusive:
        out["inconclusive"] = True
    if res.detail:
        out["detail"] = res.detail
    return out


def _map_batch(fn, items, jobs):
    if jobs > 1 and len(items) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(fn, items))  # order-preserving: deterministic
    return [fn(item) for item in items]


def _thm11_item(arg):
    n, lam = arg
    return probability.theorem11_check(n, lam)


def _expansion_item(arg):
    n, m_cap, lam = arg
    return probability.stirling_log_expansion_check(n, m_cap, lam)


def _cmd_gamma_check(args) -> int:
    lam = _parse_rational(args.lam)
    results = []
    params: dict = {"check": args.check, "lambda": _frac_str(lam)}
    try:
        if args.check == "thm11":
            params["n_max"] = args.n_max
            batch = _map_batch(
                _thm11_item, [(n, lam) for n in range(args.n_max + 1)], args.jobs
            )
            for n, res in enumerate(batch):
                results.append(_result_dict(res, n=n))
        elif args.check == "gammafn":
            if args.k is None:
                raise CliError("gammafn needs --k")
            params["k"] = args.k
            exact = probability.deg_gamma_fn_exact(args.k, lam)
            numeric = probability.deg_gamma_fn_quadrature(args.k, float(lam))
            res = probability.MomentCheckResult(
                numeric_value=numeric,
                exact_target=exact,
                abs_error=abs(numeric - float(exact)),
                rel_error=abs(numeric - float(exact)) / abs(float(exact)),
                passed=abs(numeric - float(exact)) / abs(float(exact))
                <= probability.DEFAULT_CHECK_TOL,
            )
            results.append(_result_dict(res, k=args.k))
        elif args.check == "normalization":
            params["alpha"] = args.alpha
            params["beta"] = args.beta
            p = probability.DegGammaParams(args.alpha, args.beta, float(lam))
            mass = probability.improper_quadrature(lambda x: probability.deg_gamma_pdf(p, x))
            res = probability.MomentCheckResult(
                numeric_value=mass,
                exact_target=Fraction(1),
                abs_error=abs(mass - 1.0),
                rel_error=abs(mass - 1.0),
                passed=abs(mass - 1.0) <= probability.DEFAULT_CHECK_TOL,
            )
            results.append(_result_dict(res, alpha=args.alpha, beta=args.beta))
        elif args.check == "expansion":
            params["n_max"] = args.n_max
            params["m_cap"] = args.m_cap
            batch = _map_batch(
                _expansion_item,
                [(n, args.m_cap, lam) for n in range(args.n_max + 1)],
                args.jobs,
            )
            for n, res in enumerate(batch):
                results.append(_result_dict(res, n=n))
        else:
            raise CliError(f"unknown check {args.check!r}")
    except ValueError as exc:
        raise CliError(str(exc)) from None
    _emit(_json_doc("gamma-check", params, results), _resolve_out(args.out))
    return 0 if all(r["passed"] for r in results) else 1


def _cmd_sample(args) -> int:
    lam = _parse_rational(args.lam)
    if not 0 < lam < 1:
        raise CliError(f"--lambda must lie in (0, 1), got {lam}")
    if args.count < 0:
        raise CliError("--count must be >= 0")
    samples = probability.sample_deg_gamma11(float(lam), args.seed, args.count)
    params = {
        "lambda": _frac_str(lam),
        "seed": args.seed,
        "count": args.count,
    }
    if args.format == "json":
        text = _json_doc("sample", params, {"samples": [float(s) for s in samples]})
    else:
        text = _csv_rows(["sample"], [[repr(float(s))] for s in samples])
    _emit(text, _resolve_out(args.out))
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="degderange",
        description="Exact degenerate-derangement sequence tables, identity "
        "certification, and degenerate-gamma moment checks.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    common_out = dict(default=None, help="output path (default stdout; see DEGDERANGE_OUT_DIR)")

    p_table = sub.add_parser("table", help="emit a sequence table")
    p_table.add_argument("sequence", choices=TABLE_SELECTORS)
    p_table.add_argument("--lambda", dest="lam", default="0", help='deformation parameter "p/q"')
    p_table.add_argument("--x", default=None, help='argument "p/q" (sequence-dependent default)')
    p_table.add_argument("--r", type=int, default=None, help="order for derangement-order")
    p_table.add_argument("--m", type=int, default=None, help="second index for stirling tables")
    p_table.add_argument("--n-max", type=int, default=10)
    p_table.add_argument("--format", choices=("json", "csv"), default="json")
    p_table.add_argument("--out", **common_out)
    p_table.set_defaults(fn=_cmd_table)

    p_verify = sub.add_parser("verify", help="run identity verifiers over a grid")
    p_verify.add_argument("--identities", default=None, help="comma list or 'all'")
    p_verify.add_argument("--n-max", type=int, default=32)
    p_verify.add_argument("--lambda-grid", default=DEFAULT_LAMBDA_GRID)
    p_verify.add_argument("--x-grid", default=DEFAULT_X_GRID)
    p_verify.add_argument("--r-max", type=int, default=4)
    p_verify.add_argument("--mutate", action="store_true", help="negative-control mode")
    p_verify.add_argument("--jobs", type=int, default=1)
    p_verify.add_argument("--out", **common_out)
    p_verify.set_defaults(fn=_cmd_verify)

    p_certify = sub.add_parser("certify", help="polynomial-identity certification per n")
    p_certify.add_argument("--identities", default=None, help="comma list or 'all'")
    p_certify.add_argument("--n-max", type=int, default=16)
    p_certify.add_argument("--mutate", action="store_true")
    p_certify.add_argument("--out", **common_out)
    p_certify.set_defaults(fn=_cmd_certify)

    p_gamma = sub.add_parser("gamma-check", help="numeric checks for the gamma layer")
    p_gamma.add_argument("check", choices=("thm11", "gammafn", "normalization", "expansion"))
    p_gamma.add_argument("--lambda", dest="lam", required=True)
    p_gamma.add_argument("--n-max", type=int, default=8)
    p_gamma.add_argument("--k", type=int, default=None)
    p_gamma.add_argument("--m-cap", type=int, default=40)
    p_gamma.add_argument("--alpha", type=float, default=1.0)
    p_gamma.add_argument("--beta", type=float, default=1.0)
    p_gamma.add_argument("--jobs", type=int, default=1)
    p_gamma.add_argument("--out", **common_out)
    p_gamma.set_defaults(fn=_cmd_gamma_check)

    p_sample = sub.add_parser("sample", help="draw from the unit-parameter family")
    p_sample.add_argument("--lambda", dest="lam", required=True)
    p_sample.add_argument("--seed", type=int, default=0)
    p_sample.add_argument("--count", type=int, default=1000)
    p_sample.add_argument("--format", choices=("json", "csv"), default="json")
    p_sample.add_argument("--out", **common_out)
    p_sample.set_defaults(fn=_cmd_sample)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except probability.QuadratureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

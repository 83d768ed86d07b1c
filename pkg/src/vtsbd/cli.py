"""Command line front end.

Exit codes: 0 when every requested check passed, 1 on a verification
failure, 2 on bad input (unreadable file, parse error, domain violation).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import documents as docs
from .errors import NotRepresentable, SBDError
from .families import QBV, RBV, NodeConfig, dense_matrix, sbd, sbd_rbv_scaled
from .oracle import compare_sbd, exact_rank, tn_sample_check
from .sbd_core import fix_bottom_right, reconstruct, reconstruct_sbd, sbd_expand, sbd_from_factors
from .scalars import BINARY64, EPS, RATIONAL, InstrumentedKind, bigfloat, format_scalar

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
ACCURACY_FACTOR = 50

FIG1_Q = Fraction(1, 10)
FIG1_NODES = (
    "0.1 0.2 0.2 0.2 0.3 0.31 0.32 0.33 0.34 0.35 0.36 0.37 0.38 0.39 "
    "0.5 0.6 0.7 0.7 0.7 0.7 0.7 0.7 0.8 0.9"
).split()


def fig1_config() -> NodeConfig:
    return NodeConfig(QBV, FIG1_NODES, q=FIG1_Q)


def accuracy_bound(n: int) -> float:
    return ACCURACY_FACTOR * n * EPS


def binary64_twin(config: NodeConfig) -> NodeConfig:
    """The same config with every node and parameter rounded to the nearest double.

    Float pipelines are compared against exact arithmetic on these rounded
    values, so the comparison measures the algorithm and not input rounding.
    """
    r = lambda v: Fraction(float(v)) if v is not None else None  # noqa: E731
    return config.replace(
        nodes=[r(x) for x in config.nodes],
        q=r(config.q),
        h=r(config.h),
        d=r(config.d),
        weights=[r(w) for w in config.weights] if config.weights is not None else None,
    )


def _emit(obj, out):
    if out:
        docs.write_json_atomic(out, obj)
    else:
        json.dump(obj, sys.stdout, indent=2)
        sys.stdout.write("\n")


def _load(args) -> NodeConfig:
    config = docs.load_config(args.config)
    if getattr(args, "strict", None) is not None:
        config = config.replace(strict=args.strict)
    return config


def _kind(name: str):
    return BINARY64 if name in ("f64", "binary64") else RATIONAL


# --- commands ---------------------------------------------------------------------


def cmd_decompose(args) -> int:
    config = _load(args)
    kind = _kind(args.scalar)
    if args.variant == "scaled":
        if config.family != RBV:
            raise SBDError("--variant scaled applies to rational_bernstein_vandermonde only")
        fs = sbd_rbv_scaled(config, kind)
        if args.fix_corner:
            fs = fix_bottom_right(fs)
        _emit(docs.factors_to_doc(fs, config, kind, variant="scaled"), args.out)
        return EXIT_OK
    result = sbd(config, kind)
    if args.fix_corner:
        fs = fix_bottom_right(sbd_expand(result))
        _emit(docs.factors_to_doc(fs, config, kind, fixed_corner=True), args.out)
    else:
        _emit(docs.sbd_to_doc(result, config, kind), args.out)
    return EXIT_OK


def run_verify(config: NodeConfig, trials: int = 500, seed: int = 1) -> tuple[bool, dict]:
    """Float-vs-exact accuracy, exact reconstruction and (strict mode) TN sampling."""
    twin = binary64_twin(config)
    report = compare_sbd(sbd(twin, BINARY64), sbd(twin, RATIONAL), seed=seed)
    bound = accuracy_bound(config.n)
    accurate = report.max_rel_error <= bound
    exact = reconstruct_sbd(sbd(config)) == dense_matrix(config)
    out = report.to_dict()
    out.update({"bound": f"{bound:.6e}", "accurate": accurate, "reconstruction_exact": exact})
    ok = accurate and exact
    if config.strict:
        tn = tn_sample_check(dense_matrix(config), trials, seed)
        out["tn_check"] = {
            "trials": trials,
            "seed": seed,
            "negative_minors": [
                {"rows": list(r), "cols": list(c), "value": format_scalar(v)} for r, c, v in tn.negatives
            ],
        }
        ok = ok and tn.ok
    out["passed"] = ok
    return ok, out


def cmd_verify(args) -> int:
    ok, out = run_verify(_load(args), args.trials, args.seed)
    _emit(out, args.out)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_rank(args) -> int:
    config = _load(args)
    print(exact_rank(dense_matrix(config)))
    return EXIT_OK


def _load_any(path):
    doc = docs.load_json(path)
    schema = doc.get("schema")
    if schema == docs.SBD_SCHEMA:
        s, kind = docs.sbd_from_doc(doc)
        return doc, sbd_expand(s), kind
    if schema == docs.FACTORS_SCHEMA:
        fs, kind = docs.factors_from_doc(doc)
        return doc, fs, kind
    raise SBDError(f"{path}: unknown schema {schema!r}")


def matrix_csv(A) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in A:
        writer.writerow([format_scalar(v) for v in row])
    return buf.getvalue()


def cmd_reconstruct(args) -> int:
    _, fs, _ = _load_any(args.document)
    A = reconstruct(fs)
    if args.format == "json":
        text = json.dumps({"matrix": [[format_scalar(v) for v in row] for row in A]}, indent=2) + "\n"
    else:
        text = matrix_csv(A)
    if args.out:
        docs.write_text_atomic(args.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def run_check_file(path) -> tuple[bool, dict]:
    doc, fs, kind = _load_any(path)
    config = docs.doc_config(doc)
    if fs.n != config.n:
        return False, {"error": "dimension disagrees with node count"}
    if kind.exact:
        exact = reconstruct(fs) == dense_matrix(config)
        out = {"reconstruction_exact": exact}
        if doc["schema"] == docs.SBD_SCHEMA:
            out["matches_construction"] = sbd_from_factors(fs) == sbd(config)
        return all(out.values()), out
    if doc["schema"] != docs.SBD_SCHEMA:
        raise SBDError("check-file compares binary64 factor documents only in sbd/1 form")
    twin = binary64_twin(config)
    report = compare_sbd(sbd_from_factors(fs), sbd(twin, RATIONAL))
    bound = accuracy_bound(config.n)
    out = report.to_dict()
    out["bound"] = f"{bound:.6e}"
    return report.max_rel_error <= bound, out


def cmd_check_file(args) -> int:
    ok, out = run_check_file(args.document)
    out["passed"] = ok
    _emit(out, None)
    return EXIT_OK if ok else EXIT_FAIL


def run_fig1(out_dir) -> dict:
    """Write the 24 x 24 q-Bernstein-Vandermonde artifacts into ``out_dir``."""
    out_dir = Path(out_dir)
    if not out_dir.is_dir():
        raise SBDError(f"output directory {out_dir} does not exist")
    config = fig1_config()
    exact = sbd(config)
    counting = InstrumentedKind()
    sbd(config, counting)
    rank = exact_rank(dense_matrix(config))
    A = reconstruct_sbd(exact)
    if A != dense_matrix(config):
        raise AssertionError("exact reconstruction of the experiment matrix failed")
    hiprec = bigfloat(212)
    A_hp = [[hiprec.convert(v) for v in row] for row in A]
    docs.write_json_atomic(out_dir / "sbd.json", docs.sbd_to_doc(exact, config))
    docs.write_text_atomic(out_dir / "rank.txt", str(rank))
    docs.write_text_atomic(out_dir / "matrix_hiprec.csv", matrix_csv(A_hp))
    summary = {
        "n": config.n,
        "q": format_scalar(config.q),
        "rank": rank,
        "sbd_scalar_ops": counting.counter.count,
        "sbd_ops_per_n2": counting.counter.count / config.n**2,
        "min_sbd_entry_nonnegative": all(v >= 0 for row in (*exact.B, *exact.C) for v in row),
    }
    docs.write_json_atomic(out_dir / "summary.json", summary)
    return summary


def cmd_experiment_fig1(args) -> int:
    summary = run_fig1(args.out)
    print(json.dumps(summary, indent=2))
    return EXIT_OK


# --- argument parsing ---------------------------------------------------------------


def _strict_flag(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--strict", dest="strict", action="store_true", default=None,
                   help="enforce the TN domain (default unless the config says otherwise)")
    g.add_argument("--no-strict", dest="strict", action="store_false", default=None,
                   help="permissive mode: any nodes with nonzero denominators")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vtsbd", description="Singularity-free bidiagonal decompositions of Vandermonde-type matrices."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decompose", help="write the SBD of a configured matrix")
    p.add_argument("config")
    p.add_argument("--scalar", choices=("f64", "binary64", "rational"), default="rational")
    p.add_argument("--out")
    p.add_argument("--fix-corner", action="store_true", help="make every factor's (n,n) entry 1")
    p.add_argument("--variant", choices=("standard", "scaled"), default="standard")
    _strict_flag(p)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("verify", help="check binary64 accuracy, exact reconstruction and TN minors")
    p.add_argument("config")
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--out")
    _strict_flag(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("rank", help="print the exact rank of the dense matrix")
    p.add_argument("config")
    _strict_flag(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("reconstruct", help="multiply out an sbd/1 or factors/1 document")
    p.add_argument("document")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("experiment-fig1", help="24x24 q-Bernstein-Vandermonde rank experiment")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_experiment_fig1)

    p = sub.add_parser("check-file", help="verify a decomposition document against its embedded config")
    p.add_argument("document")
    p.set_defaults(func=cmd_check_file)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (SBDError, ValueError, OSError, NotRepresentable, KeyError) as exc:
        index = getattr(exc, "index", None)
        where = f" (node {index})" if index is not None else ""
        print(f"vtsbd {args.command}: error{where}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

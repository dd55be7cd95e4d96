"""Command-line front end.

Matrices are read from JSON documents ``{"n": 2, "entries": [[...], ...],
"label": "optional"}``.  Results are printed one per line as ``key=value``
with 12 significant digits.  Exit codes: 0 success, 2 usage error, 3 domain
error, 4 parse error.
"""
import argparse
import json
import math
import sys
from dataclasses import dataclass

import numpy as np

from .boundary import BoundaryForm, foliation_from_form, sequence_limit
from .errors import DomainError, FlatToriError, ParseError
from .geodesics import finsler_length, geodesic_path
from .lipschitz import extremal_affine, nonunique_family_member
from .metrics import DISTANCES, d_thurston, kappa_search
from .polytope import unit_ball
from .space import MarkedBasis, SpdForm

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN, EXIT_PARSE = 0, 2, 3, 4


@dataclass(frozen=True)
class MatrixDocument:
    entries: np.ndarray
    label: str = ""


def parse_matrix(text, source="<input>") -> MatrixDocument:
    """Decode a matrix document; errors name the offending position."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(doc, dict):
        raise ParseError(f"{source}: top level must be an object")
    if "entries" not in doc:
        raise ParseError(f"{source}: missing key 'entries'")
    rows = doc["entries"]
    if not isinstance(rows, list) or not rows:
        raise ParseError(f"{source}: 'entries' must be a non-empty list of rows")
    n = doc.get("n", len(rows))
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ParseError(f"{source}: 'n' must be a positive integer")
    if len(rows) != n:
        raise ParseError(f"{source}: n={n} but 'entries' has {len(rows)} rows")
    out = np.empty((n, n))
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != n:
            raise ParseError(f"{source}: entries[{i}] must be a list of {n} numbers")
        for j, v in enumerate(row):
            if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ParseError(f"{source}: entries[{i}][{j}] is not a finite number: {v!r}")
            out[i, j] = v
    label = doc.get("label", "")
    if not isinstance(label, str):
        raise ParseError(f"{source}: 'label' must be a string")
    return MatrixDocument(out, label)


def load_matrix(path) -> MatrixDocument:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ParseError(f"{path}: cannot read file ({exc.strerror})") from None
    return parse_matrix(text, path)


def fmt(x):
    # adding 0.0 turns -0.0 into 0.0
    return format(float(x) + 0.0, "#.12g")


def fmt_matrix(M):
    M = np.asarray(M, dtype=float)
    if M.ndim == 1:
        return "[" + ",".join(fmt(v) for v in M) + "]"
    return "[" + ",".join(fmt_matrix(r) for r in M) + "]"


def _emit(out, key, value):
    out.write(f"{key}={value}\n")


def cmd_distance(args, out):
    X = SpdForm(load_matrix(args.source).entries)
    Y = SpdForm(load_matrix(args.target).entries)
    _emit(out, "metric", args.metric)
    _emit(out, "distance", fmt(DISTANCES[args.metric](X.X, Y.X)))


def cmd_kappa(args, out):
    Y = SpdForm(load_matrix(args.source).entries)
    X = SpdForm(load_matrix(args.target).entries)
    value, cls = kappa_search(Y.X, X.X, args.radius)
    d = d_thurston(Y.X, X.X)
    _emit(out, "radius", args.radius)
    _emit(out, "kappa", fmt(value))
    _emit(out, "d_thurston", fmt(d))
    _emit(out, "gap", fmt(d - value))
    _emit(out, "class", "[" + ",".join(str(v) for v in cls.m) + "]")


def cmd_geodesic(args, out):
    V = load_matrix(args.source).entries
    U = load_matrix(args.target).entries
    path = geodesic_path(V, U)
    K = args.samples
    ts = [0.0] if K == 1 else [i / (K - 1) for i in range(K)]
    for i, t in enumerate(ts):
        _emit(out, f"t[{i}]", fmt(t))
        _emit(out, f"point[{i}]", fmt_matrix(path.points(t)))
    _emit(out, "kind", args.kind)
    _emit(out, "length", fmt(finsler_length(path, args.kind, args.steps)))
    _emit(out, "distance", fmt(DISTANCES[args.kind](path.V, path.U)))


def cmd_limit(args, out):
    seq = [load_matrix(p).entries for p in args.files]
    res = sequence_limit(seq, args.window, args.tol)
    if res.kind == "interior":
        _emit(out, "result", "Interior")
        _emit(out, "limit", fmt_matrix(res.form.X))
    elif res.kind == "boundary":
        _emit(out, "result", "Boundary")
        _emit(out, "limit", fmt_matrix(res.form.Q))
    else:
        _emit(out, "result", "NoLimit")
        _emit(out, "spread", fmt(res.spread))


def cmd_foliation(args, out):
    Q = BoundaryForm.normalized(load_matrix(args.form).entries)
    F = foliation_from_form(Q)
    _emit(out, "form", fmt_matrix(Q.Q))
    _emit(out, "leaf_dim", F.leaf_basis.shape[1])
    _emit(out, "leaf_basis", fmt_matrix(F.leaf_basis.T))
    for i, (B, w) in enumerate(F.blocks):
        _emit(out, f"block[{i}].weight", fmt(w))
        _emit(out, f"block[{i}].basis", fmt_matrix(B.T))


def cmd_unitball(args, out):
    lines = unit_ball(args.rep, args.n).describe()
    _emit(out, "rep", args.rep)
    _emit(out, "n", args.n)
    _emit(out, "equality", lines[0])
    for line in lines[1:]:
        _emit(out, "constraint", line)


def cmd_lipschitz(args, out):
    src = MarkedBasis(load_matrix(args.source).entries)
    tgt = MarkedBasis(load_matrix(args.target).entries)
    rep = extremal_affine(src, tgt)
    _emit(out, "A", fmt_matrix(rep.A))
    for key in ("lipschitz", "lipschitz_inverse", "K_inner", "K_outer", "K"):
        _emit(out, key, fmt(getattr(rep, key)))


def cmd_plfamily(args, out):
    F = nonunique_family_member(args.r, args.eps, args.delta)
    _emit(out, "breakpoint", fmt(F.breakpoint))
    _emit(out, "D_bottom", fmt_matrix(F.D_bottom))
    _emit(out, "D_top", fmt_matrix(F.D_top))
    _emit(out, "lipschitz", fmt(F.lipschitz))
    _emit(out, "inverse_lipschitz", fmt(F.inverse_lipschitz))
    _emit(out, "affine", str(F.is_affine).lower())


def _positive_int(text):
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _float(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {text!r}") from None
    if not math.isfinite(v):
        raise argparse.ArgumentTypeError(f"expected a finite number, got {text!r}")
    return v


def build_parser():
    parser = argparse.ArgumentParser(
        prog="flattori", description="Distances and boundary computations on the space of flat tori."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("distance", help="distance between two forms")
    p.add_argument("--metric", choices=sorted(DISTANCES), default="thurston")
    p.add_argument("source")
    p.add_argument("target")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("kappa", help="length-ratio lower bound for the Thurston distance")
    p.add_argument("--radius", type=_positive_int, required=True)
    p.add_argument("source")
    p.add_argument("target")
    p.set_defaults(func=cmd_kappa)

    p = sub.add_parser("geodesic", help="sample a geodesic and integrate its length")
    p.add_argument("--steps", type=_positive_int, default=4096)
    p.add_argument("--samples", type=_positive_int, default=5)
    p.add_argument("--kind", choices=["thurston", "teichmuller"], default="thurston")
    p.add_argument("source")
    p.add_argument("target")
    p.set_defaults(func=cmd_geodesic)

    p = sub.add_parser("limit", help="detect the limit of a sequence of forms")
    p.add_argument("--window", type=_positive_int, default=3)
    p.add_argument("--tol", type=_float, default=1e-8)
    p.add_argument("files", nargs="+")
    p.set_defaults(func=cmd_limit)

    p = sub.add_parser("foliation", help="measured foliation of a singular form")
    p.add_argument("form")
    p.set_defaults(func=cmd_foliation)

    p = sub.add_parser("unitball", help="H-representation of a Finsler unit ball in the flat")
    p.add_argument("--rep", choices=["standard", "sum"], required=True)
    p.add_argument("--n", type=_positive_int, required=True)
    p.set_defaults(func=cmd_unitball)

    p = sub.add_parser("lipschitz", help="extremal affine map between marked bases")
    p.add_argument("source")
    p.add_argument("target")
    p.set_defaults(func=cmd_lipschitz)

    p = sub.add_parser("plfamily", help="member of the piecewise-linear extremal family")
    p.add_argument("--r", type=_float, required=True)
    p.add_argument("--eps", type=_float, required=True)
    p.add_argument("--delta", type=_float, required=True)
    p.set_defaults(func=cmd_plfamily)
    return parser


def main(argv=None, out=None, err=None):
    """Run the CLI and return the exit code."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        args.func(args, out)
    except ParseError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except (DomainError, FlatToriError) as exc:
        err.write(f"domain error ({type(exc).__name__}): {exc}\n")
        return EXIT_DOMAIN
    return EXIT_OK


def entry_point():
    sys.exit(main())


if __name__ == "__main__":
    entry_point()

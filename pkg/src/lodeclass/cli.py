"""Command-line front end: ``reduce``, ``classify``, ``symmetries``, ``equiv``.

Exit codes: 0 success (``equiv``: equivalent), 1 inequivalent, 2 usage or
input error, 3 numeric failure.
"""

import argparse
import json
import sys

from .config import DEFAULT, Config
from .errors import LodeError, NumericError
from .germs import LFSection, classify_pipeline, equivalent
from .lodefile import emit_lode, format_real, operator_from_document, operator_lines, parse_lode
from .normalform import reduce_full
from .projective import symmetry_dimension

EXIT_OK, EXIT_INEQUIVALENT, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class _UsageError(Exception):
    pass


def _series_list(jet, tol):
    return [0.0 if abs(v) <= tol else float(v) for v in jet.coeffs[: jet.valid + 1]]


def _operator_json(D, tol):
    K = D.valid
    coeffs = {}
    for k in range(D.n, -1, -1):
        values = [0.0 if abs(v) <= tol else float(v) for v in D.coeffs[k].coeffs[: K + 1]]
        while values and values[-1] == 0.0:
            values.pop()
        if values:
            coeffs[f"a{k}"] = values
    return {"n": D.n, "x0": D.base, "K": K, "coeffs": coeffs}


def _signature_json(sig, tol):
    return {
        "class": sig.class_i,
        "epsilon": sig.epsilon,
        "parity": sig.parity.value,
        "parity_r": sig.parity_r,
        "sym_dim": sig.sym_dim,
        "canonical": _operator_json(sig.canonical.to_operator(), tol),
    }


def _load(path, args, cfg):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise _UsageError(f"{path}: {exc.strerror}") from None
    doc = parse_lode(text, cfg.reg_tol)
    K = doc.order(args.order)
    if K != cfg.order:
        cfg = Config(K, cfg.tol, cfg.reg_tol, cfg.rank_tol)
    return operator_from_document(doc, K, cfg), cfg


def _jet_line(name, jet, tol):
    return f"{name} = " + " ".join(format_real(v) for v in _series_list(jet, tol))


def cmd_reduce(args, cfg, out):
    D, cfg = _load(args.file, args, cfg)
    lf, T = reduce_full(D, cfg)
    rho = T.rho_or_one()
    if args.json:
        payload = {
            "operator": _operator_json(lf, cfg.tol),
            "transform": {
                name: _series_list(j, cfg.tol) for name, j in (("phi", T.phi), ("psi", T.psi), ("rho", rho))
            },
        }
        out.write(json.dumps(payload) + "\n")
    else:
        lines = operator_lines(lf, cfg.tol)
        lines.append("# transform at the input base point: x -> phi(x), y -> psi(x) y, factor rho(x)")
        lines += [_jet_line(name, j, cfg.tol) for name, j in (("phi", T.phi), ("psi", T.psi), ("rho", rho))]
        out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_classify(args, cfg, out):
    D, cfg = _load(args.file, args, cfg)
    sig = classify_pipeline(D, cfg)
    if args.json:
        out.write(json.dumps(_signature_json(sig, cfg.tol)) + "\n")
    else:
        out.write(emit_lode(sig, cfg.tol))
    return EXIT_OK


def cmd_symmetries(args, cfg, out):
    D, cfg = _load(args.file, args, cfg)
    lf, _ = reduce_full(D, cfg)
    result = symmetry_dimension(lf, cfg)
    if args.json:
        out.write(json.dumps({"dim": result.dim, "basis": [list(v) for v in result.basis]}) + "\n")
    else:
        lines = [f"dim = {result.dim}"]
        lines += ["basis = " + " ".join(format_real(x) for x in v) for v in result.basis]
        out.write("\n".join(lines) + "\n")
    return EXIT_OK


def _section(path, args, cfg):
    D, cfg = _load(path, args, cfg)
    lf, _ = reduce_full(D, cfg)
    return LFSection.from_operator(lf, cfg), cfg


def cmd_equiv(args, cfg, out):
    S1, cfg1 = _section(args.file1, args, cfg)
    S2, _ = _section(args.file2, args, cfg)
    zero1, zero2 = S1.is_zero(cfg1.tol), S2.is_zero(cfg1.tol)
    if zero1 or zero2:
        same = zero1 and zero2 and S1.n == S2.n
    else:
        same = equivalent(S1, S2, args.group, cfg1)
    if args.json:
        out.write(json.dumps({"equivalent": same, "group": args.group}) + "\n")
    else:
        out.write(("equivalent" if same else "inequivalent") + "\n")
    return EXIT_OK if same else EXIT_INEQUIVALENT


def _common_flags():
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--order", type=int, default=DEFAULT.order, metavar="K",
                   help="truncation order when the file does not set K (default %(default)s)")
    p.add_argument("--tol", type=float, default=DEFAULT.tol, metavar="T",
                   help="zero threshold for jet coefficients (default %(default)s)")
    p.add_argument("--json", action="store_true", help="print a JSON object instead of text")
    return p


def build_parser():
    common = _common_flags()
    parser = argparse.ArgumentParser(
        prog="lodeclass",
        description="Normal forms and germ classification of linear ODE operators.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("reduce", parents=[common], help="Laguerre-Forsyth form and transform jets")
    p.add_argument("file")
    p.set_defaults(func=cmd_reduce)
    p = sub.add_parser("classify", parents=[common], help="signature of the germ at x0")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)
    p = sub.add_parser("symmetries", parents=[common], help="projective symmetry algebra")
    p.add_argument("file")
    p.set_defaults(func=cmd_symmetries)
    p = sub.add_parser("equiv", parents=[common], help="compare the germs of two operators")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--group", choices=["g0plus", "g0"], default="g0",
                   help="isotropy group to compare under (default %(default)s)")
    p.set_defaults(func=cmd_equiv)
    return parser


def run(argv=None, out=None, err=None):
    """Execute a command line; returns the exit code."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = Config(args.order, args.tol, DEFAULT.reg_tol, DEFAULT.rank_tol)
        return args.func(args, cfg, out)
    except NumericError as exc:
        err.write(f"lodeclass: numeric failure: {exc}\n")
        return EXIT_NUMERIC
    except (LodeError, _UsageError, ValueError) as exc:
        err.write(f"lodeclass: {exc}\n")
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

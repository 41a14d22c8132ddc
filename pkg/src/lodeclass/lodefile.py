"""The ``.lode`` line format for operators, sections and signatures.

One ``key = value`` pair per line, ``#`` comments, keys ``n``, ``x0``, ``K``
and ``a<k>``.  A coefficient value is a whitespace-separated list of Taylor
coefficients at ``x0``.  Reals are written with 17 significant digits, which
round-trips every double exactly.
"""

import re
from dataclasses import dataclass, field

from .config import DEFAULT
from .diffop import LinearOperator
from .errors import DuplicateKey, MissingLeadingCoefficient, ParseError
from .germs import GermSignature, ParityCase
from .jet import Jet

__all__ = [
    "LodeDocument",
    "emit_lode",
    "format_real",
    "operator_from_document",
    "parse_lode",
]

_COEFF_KEY = re.compile(r"a(\d+)\Z")
_KEY = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


@dataclass(frozen=True)
class LodeDocument:
    """Parsed contents of a ``.lode`` file.

    ``coeffs`` maps ``k`` to the listed Taylor coefficients of ``a_k`` as
    written; missing indices mean the zero jet and short lists are padded
    with zeros when an operator is built.  ``K`` is None when the file does
    not set it.
    """

    n: int
    x0: float = 0.0
    K: int = None
    coeffs: dict = field(default_factory=dict)

    def order(self, default=DEFAULT.order):
        return self.K if self.K is not None else default


def format_real(x):
    return "%.17g" % x


def _parse_int(value, key, line):
    try:
        return int(value)
    except ValueError:
        raise ParseError(f"{key} must be an integer, got {value!r}", line) from None


def _parse_real(token, key, line):
    try:
        x = float(token)
    except ValueError:
        raise ParseError(f"{key}: not a real number: {token!r}", line) from None
    if x != x or x in (float("inf"), float("-inf")):
        raise ParseError(f"{key}: non-finite value {token!r}", line)
    return x


def parse_lode(text, reg_tol=DEFAULT.reg_tol):
    """Parse ``.lode`` text into a :class:`LodeDocument`."""
    seen = {}
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ParseError(f"expected 'key = value', got {body!r}", lineno)
        key, value = (part.strip() for part in body.split("=", 1))
        if not _KEY.match(key):
            raise ParseError(f"malformed key {key!r}", lineno)
        if key in seen:
            raise DuplicateKey(f"duplicate key {key!r} (first set on line {seen[key]})", lineno)
        seen[key] = lineno
        if key == "n":
            values["n"] = _parse_int(value, key, lineno)
        elif key == "K":
            values["K"] = _parse_int(value, key, lineno)
            if values["K"] < 0:
                raise ParseError("K must be non-negative", lineno)
        elif key == "x0":
            values["x0"] = _parse_real(value, key, lineno)
        elif _COEFF_KEY.match(key):
            tokens = value.split()
            if not tokens:
                raise ParseError(f"{key} has no values", lineno)
            values[key] = tuple(_parse_real(t, key, lineno) for t in tokens)
        else:
            raise ParseError(f"unknown key {key!r}", lineno)

    if "n" not in values:
        raise ParseError("missing required key 'n'")
    n = values["n"]
    if n < 2:
        raise ParseError(f"n must be at least 2, got {n}", seen["n"])
    K = values.get("K")
    coeffs = {}
    for key, series in values.items():
        m = _COEFF_KEY.match(key)
        if not m:
            continue
        k = int(m.group(1))
        if k > n:
            raise ParseError(f"{key} exceeds the operator order n = {n}", seen[key])
        if K is not None and len(series) > K + 1:
            raise ParseError(f"{key} lists {len(series)} values but K = {K}", seen[key])
        coeffs[k] = series
    lead = coeffs.get(n)
    if lead is None:
        raise MissingLeadingCoefficient(f"leading coefficient a{n} is missing")
    if abs(lead[0]) <= reg_tol:
        raise MissingLeadingCoefficient(
            f"a{n}(x0) = {format_real(lead[0])} vanishes", seen[f"a{n}"]
        )
    return LodeDocument(n, values.get("x0", 0.0), K, coeffs)


def operator_from_document(doc, order=None, config=None):
    """The operator of a document; ``doc.K`` wins over ``order``."""
    K = doc.order(DEFAULT.order if order is None else order)
    for k, series in doc.coeffs.items():
        if len(series) > K + 1:
            raise ParseError(f"a{k} lists {len(series)} values but K = {K}")
    jets = [Jet.from_polynomial(doc.coeffs.get(k, ()), doc.x0, K) for k in range(doc.n + 1)]
    return LinearOperator(jets, config)


def _series(jet, upto, tol):
    values = [0.0 if abs(v) <= tol else float(v) for v in jet.coeffs[: upto + 1]]
    while values and values[-1] == 0.0:
        values.pop()
    return values


def _operator_lines(coeff_jets, n, x0, tol):
    """Lines for ``a_n .. a_0`` truncated to the common watermark."""
    K = min(j.valid for j in coeff_jets)
    lines = [f"n = {n}", f"x0 = {format_real(x0)}", f"K = {K}"]
    for k in range(n, -1, -1):
        series = _series(coeff_jets[k], K, tol)
        if series:
            lines.append(f"a{k} = " + " ".join(format_real(v) for v in series))
    return lines


def operator_lines(D, tol=0.0):
    return _operator_lines(D.coeffs, D.n, D.base, tol)


def _document_lines(doc):
    lines = [f"n = {doc.n}", f"x0 = {format_real(doc.x0)}"]
    if doc.K is not None:
        lines.append(f"K = {doc.K}")
    for k in sorted(doc.coeffs, reverse=True):
        lines.append(f"a{k} = " + " ".join(format_real(v) for v in doc.coeffs[k]))
    return lines


def _parity_text(sig):
    if sig.parity is ParityCase.FIRST_ODD_POSITIVE:
        return f"first_odd_positive {sig.parity_r}"
    return sig.parity.value


def signature_lines(sig, tol=0.0):
    if sig.class_i is None:
        head = ["class = none", "epsilon = none"]
    else:
        head = [f"class = {sig.class_i}", f"epsilon = {'+1' if sig.epsilon > 0 else '-1'}"]
    head += [f"parity = {_parity_text(sig)}", f"sym_dim = {sig.sym_dim}"]
    return head + operator_lines(sig.canonical.to_operator(), tol)


def emit_lode(value, tol=0.0):
    """Render a document, operator or signature as ``.lode`` text.

    Documents are written exactly as parsed.  Operators are written through
    their common watermark with entries of size ``<= tol`` printed as zero;
    trailing zeros and all-zero coefficients are omitted.
    """
    if isinstance(value, LodeDocument):
        lines = _document_lines(value)
    elif isinstance(value, LinearOperator):
        lines = operator_lines(value, tol)
    elif isinstance(value, GermSignature):
        lines = signature_lines(value, tol)
    else:
        raise TypeError(f"cannot emit {type(value).__name__}")
    return "\n".join(lines) + "\n"

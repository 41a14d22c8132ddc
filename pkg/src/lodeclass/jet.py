"""Truncated Taylor jets.

A :class:`Jet` stores the coefficients ``c_0 .. c_K`` of
``sum_j c_j (x - x0)**j`` together with a *valid order* watermark: the
highest index whose coefficient is still exact.  Differentiation lowers the
watermark by one, products take the minimum, and so on, so that every
derived quantity knows how much of it can be trusted.

Coefficients may optionally live in the ring ``R[t]/(t**m)`` of truncated
polynomials in an infinitesimal parameter ``t``.  Such a jet stores an
``(m, K+1)`` array whose row ``p`` holds the ``t**p`` parts.  Plain real jets
are the case ``m == 1``.  The extension is what lets the infinitesimal group
action be computed exactly to first order (``m == 2``, i.e. dual numbers)
through exactly the same code path as the finite action.
"""

import math
from numbers import Real

import numpy as np

from .config import DEFAULT
from .errors import (
    BaseMismatch,
    BasePointMismatch,
    DivisionBySingular,
    NonInvertibleJet,
    NonPositiveConstantTerm,
    NumericError,
    OrderMismatch,
)

__all__ = [
    "Jet",
    "antiderivative",
    "compose",
    "compose_each",
    "derivative",
    "exp",
    "log",
    "nth_root",
    "power",
    "jet_compose",
    "jet_div",
    "jet_reverse",
    "reverse",
]


# -- scalars of R[t]/(t^m), stored as 1-d arrays of length m ---------------


def _nil_scalar(value, m):
    v = np.zeros(m)
    arr = np.atleast_1d(np.asarray(value, dtype=float))
    k = min(m, arr.shape[0])
    v[:k] = arr[:k]
    return v


def _smul(u, v):
    return np.convolve(u, v)[: u.shape[0]]


def _sseries(n, weights):
    """sum_k weights[k] * n**k for nilpotent ``n`` (weights has length m)."""
    out = np.zeros_like(n)
    out[0] = weights[0]
    term = np.zeros_like(n)
    term[0] = 1.0
    for k in range(1, n.shape[0]):
        term = _smul(term, n)
        out += weights[k] * term
    return out


def _unit_part(v):
    v0 = v[0]
    n = v / v0
    n[0] = 0.0
    return v0, n


def _sinv(v):
    v0, n = _unit_part(v)
    m = v.shape[0]
    return _sseries(n, [(-1.0) ** k for k in range(m)]) / v0


def _spow(v, alpha):
    v0, n = _unit_part(v)
    weights, b = [], 1.0
    for k in range(v.shape[0]):
        weights.append(b)
        b *= (alpha - k) / (k + 1)
    return _sseries(n, weights) * v0**alpha


def _slog(v):
    v0, n = _unit_part(v)
    weights = [0.0] + [(-1.0) ** (k + 1) / k for k in range(1, v.shape[0])]
    out = _sseries(n, weights)
    out[0] += math.log(v0)
    return out


def _sexp(v):
    n = v.copy()
    n[0] = 0.0
    weights = [1.0 / math.factorial(k) for k in range(v.shape[0])]
    return _sseries(n, weights) * math.exp(v[0])


# -- coefficient-array kernels ---------------------------------------------


def _mul(a, b):
    m, size = a.shape
    if m == 1:
        return np.convolve(a[0], b[0])[:size][np.newaxis, :]
    if m == 2:
        return np.array(
            [
                np.convolve(a[0], b[0])[:size],
                np.convolve(a[0], b[1])[:size] + np.convolve(a[1], b[0])[:size],
            ]
        )
    out = np.zeros((m, size))
    for p in range(m):
        for q in range(m - p):
            out[p + q] += np.convolve(a[p], b[q])[:size]
    return out


def _colconv(a, b, k, lo):
    """Column k of the product restricted to sum_{j=lo..k} a[:, j] * b[:, k-j]."""
    m = a.shape[0]
    out = np.zeros(m)
    if k < lo:
        return out
    rev = slice(k - lo, None, -1) if k - lo > 0 else slice(0, 1)
    for p in range(m):
        ap = a[p, lo : k + 1]
        for q in range(m - p):
            out[p + q] += ap @ b[q, rev]
    return out


def _promote(c, m):
    if c.shape[0] >= m:
        return c
    out = np.zeros((m, c.shape[1]))
    out[: c.shape[0]] = c
    return out


class Jet:
    """Immutable truncated Taylor expansion at ``base``.

    Parameters
    ----------
    coeffs : array_like
        Either ``K+1`` reals or an ``(m, K+1)`` array of coefficients in
        ``R[t]/(t**m)``.
    base : float
        Expansion point.
    valid : int, optional
        Valid-order watermark; defaults to ``K``.
    """

    __slots__ = ("_c", "_base", "_valid")

    def __init__(self, coeffs, base=0.0, valid=None):
        c = np.array(coeffs, dtype=float)
        if c.ndim == 1:
            c = c[np.newaxis, :]
        if c.ndim != 2 or c.shape[1] == 0 or c.shape[0] == 0:
            raise ValueError("coeffs must be a non-empty 1-d or 2-d array")
        if not np.isfinite(c).all():
            raise ValueError("jet coefficients must be finite")
        base = float(base)
        if not math.isfinite(base):
            raise ValueError("jet base point must be finite")
        c.flags.writeable = False
        order = c.shape[1] - 1
        self._c = c
        self._base = base
        self._valid = order if valid is None else max(-1, min(int(valid), order))

    @classmethod
    def _make(cls, c, base, valid):
        if not np.isfinite(c).all():
            raise NumericError("non-finite jet coefficient")
        c.flags.writeable = False
        self = object.__new__(cls)
        self._c = c
        self._base = base
        self._valid = max(-1, min(valid, c.shape[1] - 1))
        return self

    # -- constructors ------------------------------------------------------

    @classmethod
    def constant(cls, value, base=0.0, order=DEFAULT.order):
        arr = np.atleast_1d(np.asarray(value, dtype=float))
        c = np.zeros((arr.shape[0], order + 1))
        c[:, 0] = arr
        return cls(c, base)

    @classmethod
    def zero(cls, base=0.0, order=DEFAULT.order):
        return cls(np.zeros(order + 1), base)

    @classmethod
    def identity(cls, base=0.0, order=DEFAULT.order):
        """The jet of ``x`` itself at ``base``."""
        c = np.zeros(order + 1)
        c[0] = base
        if order >= 1:
            c[1] = 1.0
        return cls(c, base)

    @classmethod
    def from_polynomial(cls, coeffs, base=0.0, order=DEFAULT.order):
        """Jet of ``sum_j coeffs[j] (x - base)**j``, zero-padded or truncated."""
        c = np.zeros(order + 1)
        coeffs = np.asarray(coeffs, dtype=float)[: order + 1]
        c[: coeffs.shape[0]] = coeffs
        return cls(c, base)

    # -- accessors ---------------------------------------------------------

    @property
    def base(self):
        return self._base

    @property
    def order(self):
        return self._c.shape[1] - 1

    @property
    def valid(self):
        return self._valid

    @property
    def nil(self):
        """Nilpotency degree ``m`` of the coefficient ring (1 for real jets)."""
        return self._c.shape[0]

    @property
    def coeffs(self):
        """Real parts of the coefficients, as a read-only array."""
        return self._c[0]

    @property
    def array(self):
        """The full ``(m, K+1)`` coefficient array (read-only)."""
        return self._c

    @property
    def value(self):
        """Real part of the value at the base point."""
        return float(self._c[0, 0])

    def part(self, p):
        """The ``t**p`` component as a real jet with the same watermark."""
        if p >= self.nil:
            return Jet._make(np.zeros((1, self.order + 1)), self._base, self._valid)
        return Jet._make(self._c[p : p + 1].copy(), self._base, self._valid)

    def __repr__(self):
        body = np.array2string(self._c[0], precision=6, separator=", ")
        extra = f", nil={self.nil}" if self.nil > 1 else ""
        return f"Jet({body}, base={self._base!r}, valid={self._valid}{extra})"

    # -- structural transforms ---------------------------------------------

    def resized(self, order):
        """Zero-pad or truncate to ``order``; the watermark never grows."""
        c = np.zeros((self.nil, order + 1))
        k = min(order, self.order) + 1
        c[:, :k] = self._c[:, :k]
        return Jet._make(c, self._base, min(self._valid, order))

    def rebased(self, base):
        """Same coefficients, relabelled expansion point."""
        return Jet._make(self._c.copy(), float(base), self._valid)

    def with_valid(self, valid):
        return Jet._make(self._c.copy(), self._base, min(self._valid, valid))

    def is_zero(self, tol=DEFAULT.tol, upto=None):
        """Every coefficient through the watermark (or ``upto``) is within ``tol``."""
        v = self._valid if upto is None else min(self._valid, upto)
        return bool(np.all(np.abs(self._c[:, : v + 1]) <= tol))

    def max_abs(self, upto=None):
        v = self._valid if upto is None else min(self._valid, upto)
        if v < 0:
            return 0.0
        return float(np.max(np.abs(self._c[:, : v + 1])))

    def evaluate(self, x):
        """Value of the truncated polynomial (real part) at ``x``."""
        return float(np.polynomial.polynomial.polyval(x - self._base, self._c[0]))

    def derivative(self):
        return derivative(self)

    def antiderivative(self):
        return antiderivative(self)

    # -- ring operations ---------------------------------------------------

    def _binary(self, other):
        if abs(self._base - other._base) > 1e-12 * max(1.0, abs(self._base)):
            raise BaseMismatch(f"jet bases differ: {self._base} vs {other._base}")
        if self.order != other.order:
            raise OrderMismatch(f"jet orders differ: {self.order} vs {other.order}")
        m = max(self.nil, other.nil)
        return _promote(self._c, m), _promote(other._c, m), min(self._valid, other._valid)

    def __add__(self, other):
        if isinstance(other, Jet):
            a, b, v = self._binary(other)
            return Jet._make(a + b, self._base, v)
        if isinstance(other, Real):
            c = self._c.copy()
            c[0, 0] += other
            return Jet._make(c, self._base, self._valid)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Jet._make(-self._c, self._base, self._valid)

    def __sub__(self, other):
        if isinstance(other, Jet):
            a, b, v = self._binary(other)
            return Jet._make(a - b, self._base, v)
        if isinstance(other, Real):
            return self + (-other)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Real):
            return (-self) + other
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, Jet):
            a, b, v = self._binary(other)
            return Jet._make(_mul(a, b), self._base, v)
        if isinstance(other, Real):
            return Jet._make(self._c * float(other), self._base, self._valid)
        return NotImplemented

    __rmul__ = __mul__

    def scale(self, factor):
        return self * factor

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return divide(self, other)
        if isinstance(other, Real):
            return Jet._make(self._c / float(other), self._base, self._valid)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, Real):
            return divide(Jet.constant(other, self._base, self.order), self)
        return NotImplemented

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        out = Jet.constant(1.0, self._base, self.order)
        for _ in range(k):
            out = out * self
        return out

    def times_scalar(self, value):
        """Multiply by a scalar of ``R[t]/(t**m)`` given as a 1-d array."""
        s = np.atleast_1d(np.asarray(value, dtype=float))
        m = max(self.nil, s.shape[0])
        c = _promote(self._c, m)
        out = np.zeros_like(c)
        for p in range(m):
            if s.shape[0] > p and s[p] != 0.0:
                out[p:] += s[p] * c[: m - p]
        return Jet._make(out, self._base, self._valid)


# -- division and calculus -------------------------------------------------


def divide(f, g, reg_tol=DEFAULT.reg_tol):
    """``h`` with ``h * g == f`` to the truncation order."""
    a, b, v = f._binary(g)
    if abs(b[0, 0]) <= reg_tol:
        raise DivisionBySingular(f"divisor vanishes at the base point ({b[0, 0]:.3g})")
    m, size = a.shape
    h = np.zeros((m, size))
    if m == 1:
        g0 = b[0, 0]
        bb, hh, aa = b[0], h[0], a[0]
        for k in range(size):
            hh[k] = (aa[k] - bb[1 : k + 1] @ hh[k - 1 :: -1][:k]) / g0 if k else aa[0] / g0
    else:
        inv0 = _sinv(b[:, 0])
        for k in range(size):
            h[:, k] = _smul(inv0, a[:, k] - _colconv(b, h, k, 1))
    return Jet._make(h, f._base, v)


def derivative(f):
    """Termwise derivative; the top coefficient is zero and drops out of the watermark."""
    c = np.zeros_like(f._c)
    k = f.order
    if k > 0:
        c[:, :k] = f._c[:, 1:] * np.arange(1, k + 1)
    return Jet._make(c, f._base, f._valid - 1)


def antiderivative(f):
    """Termwise integral vanishing at the base point."""
    c = np.zeros_like(f._c)
    k = f.order
    if k > 0:
        c[:, 1:] = f._c[:, :k] / np.arange(1, k + 1)
    return Jet._make(c, f._base, f._valid + 1)


# -- composition and reversion ---------------------------------------------


def _powers(u):
    """Stacked powers u**0 .. u**K as an array of shape (K+1, m, K+1)."""
    m, size = u._c.shape
    pw = np.zeros((size, m, size))
    pw[0, 0, 0] = 1.0
    cur = pw[0]
    for j in range(1, size):
        cur = _mul(cur, u._c)
        pw[j] = cur
    return pw


def _check_inner(outer, inner, tol):
    if abs(inner.value - outer.base) > tol:
        raise BasePointMismatch(
            f"inner jet takes value {inner.value} at its base, outer is based at {outer.base}"
        )
    if inner.order != outer.order:
        raise OrderMismatch(f"jet orders differ: {outer.order} vs {inner.order}")


def _shifted_inner(inner):
    """``inner - outer.base`` with the real constant snapped to zero.

    Also returns the order loss: a nilpotent offset of the base point costs
    one order per power of ``t``.
    """
    c = inner._c.copy()
    c[0, 0] = 0.0
    loss = inner.nil - 1 if inner.nil > 1 and np.any(c[1:, 0] != 0.0) else 0
    return Jet._make(c, inner._base, inner._valid), loss


def _apply_powers(outer, pw, m):
    size = pw.shape[0]
    oc = _promote(outer._c, m)
    out = np.zeros((m, size))
    for p in range(m):
        term = np.tensordot(oc[p], pw, axes=1)
        out[p:] += term[: m - p]
    return out


def compose_each(outers, inner, tol=DEFAULT.tol):
    """Compose several outer jets with one shared inner jet.

    Returns ``[outer o inner for outer in outers]``, all based at
    ``inner.base``.
    """
    outers = list(outers)
    if not outers:
        return []
    for outer in outers:
        _check_inner(outer, inner, tol)
    u, loss = _shifted_inner(inner)
    m = max([u.nil] + [o.nil for o in outers])
    u = Jet._make(_promote(u._c, m), u._base, u._valid)
    pw = _powers(u)
    return [
        Jet._make(_apply_powers(o, pw, m), inner._base, min(o._valid, u._valid) - loss)
        for o in outers
    ]


def compose(outer, inner, tol=DEFAULT.tol):
    """Jet of ``outer o inner`` at ``inner.base``."""
    return compose_each([outer], inner, tol)[0]


def reverse(f, reg_tol=DEFAULT.reg_tol):
    """Compositional inverse, based at ``f.value``.

    Returns ``g`` with ``compose(g, f)`` equal to the identity jet at
    ``f.base``.
    """
    if f.order < 1 or abs(f._c[0, 1]) <= reg_tol:
        raise NonInvertibleJet("derivative vanishes at the base point")
    m, size = f._c.shape
    order = size - 1
    hc = f._c.copy()
    hc[:, 0] = 0.0
    h = Jet._make(hc, 0.0, f._valid)
    inv1 = _sinv(f._c[:, 1])
    y = Jet.identity(0.0, order)
    g = y.times_scalar(inv1)
    # each pass fixes one more coefficient
    for _ in range(order - 1):
        g = g + (y - compose(h, g)).times_scalar(inv1)
    b0 = f.value
    target = Jet.identity(b0, order)
    offset = f._c[:, 0].copy()
    offset[0] = 0.0
    if np.any(offset != 0.0):
        inner = (target - b0) - Jet.constant(offset, b0, order)
        g = compose(g, inner)
    else:
        g = g.rebased(b0)
    g = g + f.base
    return g.with_valid(f._valid - (m - 1 if np.any(offset != 0.0) else 0))


# -- analytic functions ----------------------------------------------------


def exp(f):
    c = f._c
    m, size = c.shape
    e = np.zeros((m, size))
    e[:, 0] = _sexp(c[:, 0])
    weighted = c * np.arange(size)
    for k in range(1, size):
        e[:, k] = _colconv(weighted, e, k, 1) / k
    return Jet._make(e, f._base, f._valid)


def _require_positive(f, reg_tol, what):
    if f._c[0, 0] <= reg_tol:
        raise NonPositiveConstantTerm(
            f"{what} needs a positive constant term, got {f._c[0, 0]:.3g}"
        )


def log(f, reg_tol=DEFAULT.reg_tol):
    _require_positive(f, reg_tol, "log")
    out = antiderivative(divide(derivative(f), f, reg_tol))
    c = out._c.copy()
    c[:, 0] = _slog(f._c[:, 0])
    return Jet._make(c, f._base, f._valid)


def power(f, alpha, reg_tol=DEFAULT.reg_tol):
    """``f**alpha`` for real ``alpha`` via the recursion ``f P' = alpha f' P``."""
    _require_positive(f, reg_tol, "power")
    alpha = float(alpha)
    c = f._c
    m, size = c.shape
    p = np.zeros((m, size))
    p[:, 0] = _spow(c[:, 0], alpha)
    inv0 = _sinv(c[:, 0])
    weighted = c * np.arange(size)
    for k in range(1, size):
        s = (alpha + 1.0) * _colconv(weighted, p, k, 1) - k * _colconv(c, p, k, 1)
        p[:, k] = _smul(inv0, s) / k
    return Jet._make(p, f._base, f._valid)


def nth_root(f, n, reg_tol=DEFAULT.reg_tol):
    if int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    return power(f, 1.0 / int(n), reg_tol)


# names used by the operation catalogue
jet_div = divide
jet_compose = compose
jet_reverse = reverse

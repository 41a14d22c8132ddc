"""Linear differential operators with jet coefficients."""

from dataclasses import dataclass
from math import comb

import numpy as np

from .config import resolve
from .errors import (
    BaseMismatch,
    NonInvertibleJet,
    OrderMismatch,
    OrderTooLow,
    SingularLeadingCoefficient,
)
from .jet import Jet, compose_each, reverse

__all__ = [
    "GaugeTransform",
    "LinearOperator",
    "apply_operator",
    "change_variable",
    "compose_transforms",
    "conjugate",
    "is_lf_form",
    "op_apply",
    "op_change_variable",
    "op_conjugate",
]


class LinearOperator:
    """``a_n D^n + ... + a_1 D + a_0`` with ``coeffs[k] == a_k``.

    All coefficient jets share one base point and truncation order, and the
    leading coefficient must not vanish at the base point.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs, config=None):
        cfg = resolve(config)
        coeffs = tuple(coeffs)
        if len(coeffs) < 2:
            raise OrderTooLow("an operator needs order n >= 1")
        first = coeffs[0]
        for c in coeffs[1:]:
            if c.order != first.order:
                raise OrderMismatch("coefficient jets must share one truncation order")
            if abs(c.base - first.base) > 1e-12 * max(1.0, abs(first.base)):
                raise BaseMismatch("coefficient jets must share one base point")
        if abs(coeffs[-1].value) <= cfg.reg_tol:
            raise SingularLeadingCoefficient(
                f"leading coefficient vanishes at the base point ({coeffs[-1].value:.3g})"
            )
        self.coeffs = coeffs

    @classmethod
    def from_lists(cls, lists, base=0.0, order=None, config=None):
        """Build from ``[a_0, ..., a_n]`` given as coefficient lists (or None for zero)."""
        order = resolve(config).order if order is None else order
        return cls(
            [Jet.from_polynomial([] if c is None else c, base, order) for c in lists],
            config,
        )

    @classmethod
    def monomial(cls, n, base=0.0, order=None):
        """The operator ``D^n``."""
        return cls.from_lists([None] * n + [[1.0]], base, order)

    @property
    def n(self):
        return len(self.coeffs) - 1

    @property
    def base(self):
        return self.coeffs[0].base

    @property
    def order(self):
        return self.coeffs[0].order

    @property
    def valid(self):
        return min(c.valid for c in self.coeffs)

    def __getitem__(self, k):
        return self.coeffs[k]

    def __repr__(self):
        return f"LinearOperator(n={self.n}, base={self.base}, order={self.order}, valid={self.valid})"

    def resized(self, order):
        return LinearOperator([c.resized(order) for c in self.coeffs])

    def rebased(self, base):
        return LinearOperator([c.rebased(base) for c in self.coeffs])

    def allclose(self, other, tol, upto=None):
        """Coefficientwise comparison through both watermarks (and ``upto``)."""
        if self.n != other.n:
            return False
        for a, b in zip(self.coeffs, other.coeffs):
            v = min(a.valid, b.valid) if upto is None else min(a.valid, b.valid, upto)
            if (a.resized(b.order) - b).max_abs(v) > tol:
                return False
        return True


@dataclass(frozen=True)
class GaugeTransform:
    """``x_new = phi(x)``, ``y_new = psi(x) * y`` and overall factor ``rho(x)``.

    ``rho is None`` stands for the unit factor.  ``phi_inverse`` may carry a
    precomputed compositional inverse of ``phi`` (based at ``phi(x0)``) and
    ``psi_inverse`` a precomputed ``1/psi``; both are derived when absent.
    Supplying closed forms matters when ``1/psi`` is a polynomial: series
    division leaves roundoff in its vanishing high coefficients, which the
    ``n`` derivatives taken during conjugation then amplify.
    """

    phi: Jet
    psi: Jet
    rho: Jet = None
    phi_inverse: Jet = None
    psi_inverse: Jet = None

    @classmethod
    def identity(cls, base=0.0, order=12):
        x = Jet.identity(base, order)
        return cls(x, Jet.constant(1.0, base, order), None, x)

    @property
    def base(self):
        return self.phi.base

    @property
    def order(self):
        return self.phi.order

    def rho_or_one(self):
        if self.rho is None:
            return Jet.constant(1.0, self.phi.base, self.phi.order)
        return self.rho

    def inverse_phi(self, config=None):
        if self.phi_inverse is not None:
            return self.phi_inverse
        return reverse(self.phi, resolve(config).reg_tol)

    def check(self, config=None):
        cfg = resolve(config)
        if abs(self.phi.coeffs[1]) <= cfg.reg_tol:
            raise NonInvertibleJet("phi'(x0) vanishes")
        if abs(self.psi.value) <= cfg.reg_tol:
            raise NonInvertibleJet("psi(x0) vanishes")
        if self.rho is not None and abs(self.rho.value) <= cfg.reg_tol:
            raise NonInvertibleJet("rho(x0) vanishes")


def compose_transforms(second, first, config=None):
    """The transform ``second o first`` (apply ``first``, then ``second``).

    ``second`` must be based at ``phi_first(x0)``.  The result has the order
    of ``first``.
    """
    cfg = resolve(config)
    order = first.order
    phi1 = first.phi
    outer = [second.phi.resized(order), second.psi.resized(order)]
    if second.rho is not None:
        outer.append(second.rho.resized(order))
    parts = compose_each(outer, phi1, cfg.tol)
    phi = parts[0]
    psi = parts[1] * first.psi.resized(order)
    rho = None
    if second.rho is not None or first.rho is not None:
        r2 = parts[2] if second.rho is not None else Jet.constant(1.0, phi1.base, order)
        rho = r2 * first.rho_or_one().resized(order)
    return GaugeTransform(phi, psi, rho)


def apply_operator(D, y):
    """``sum_k a_k y^(k)``; exact through ``y.valid - n`` at best."""
    y = y.resized(D.order) if y.order != D.order else y
    out = D.coeffs[0] * y
    dy = y
    for a in D.coeffs[1:]:
        dy = dy.derivative()
        out = out + a * dy
    return out


def _chain_coefficients(dphi, n):
    """``rows[j][m]``: jet coefficient of ``D_new^m`` in ``D_x^j`` (``D_x = phi' D_new``)."""
    one = Jet.constant(1.0, dphi.base, dphi.order)
    rows = [[one]]
    for j in range(1, n + 1):
        prev = rows[-1]
        row = []
        for m in range(j + 1):
            term = None
            if m < j:
                term = prev[m].derivative()
            if m >= 1:
                lift = dphi * prev[m - 1]
                term = lift if term is None else term + lift
            row.append(term)
        rows.append(row)
    return rows


def _rewrite(coeffs, dphi):
    n = len(coeffs) - 1
    rows = _chain_coefficients(dphi, n)
    out = []
    for m in range(n + 1):
        acc = None
        for j in range(m, n + 1):
            term = coeffs[j] * rows[j][m]
            acc = term if acc is None else acc + term
        out.append(acc)
    return out


def change_variable(D, phi, config=None):
    """Rewrite ``D`` in powers of ``D_new = (1/phi') D_x``.

    The coefficients stay jets in the old variable ``x``.
    """
    cfg = resolve(config)
    if abs(phi.coeffs[1]) <= cfg.reg_tol:
        raise NonInvertibleJet("phi'(x0) vanishes")
    phi = phi.resized(D.order)
    return LinearOperator(_rewrite(D.coeffs, phi.derivative()), cfg)


def conjugate(D, T, config=None):
    """``rho * psi * D * (1/psi)`` rewritten in the variable ``x_new = phi(x)``.

    The output coefficients are recentred at ``phi(x0)``.  When the
    transform jets are longer than ``D``'s, the computation runs at their
    order and is truncated back, so derivatives of the transform do not eat
    into ``D``'s watermark.
    """
    cfg = resolve(config)
    T.check(cfg)
    n = D.n
    work = max(D.order, T.order)
    a = [c.resized(work) for c in D.coeffs]
    phi = T.phi.resized(work)
    psi = T.psi.resized(work)
    factor = psi if T.rho is None else T.rho.resized(work) * psi

    inv_psi = 1.0 / psi if T.psi_inverse is None else T.psi_inverse.resized(work)
    dinv = [inv_psi]
    for _ in range(n):
        dinv.append(dinv[-1].derivative())
    gauged = []
    for j in range(n + 1):
        acc = None
        for k in range(j, n + 1):
            term = a[k] * dinv[k - j]
            if k > j:
                term = term * float(comb(k, j))
            acc = term if acc is None else acc + term
        gauged.append(factor * acc)

    rewritten = _rewrite(gauged, phi.derivative())

    inverse = T.inverse_phi(cfg).resized(work)
    recentred = compose_each(rewritten, inverse, cfg.tol)
    return LinearOperator([c.resized(D.order) for c in recentred], cfg)


def is_lf_form(D, tol=None, config=None):
    """Monic with vanishing ``a_{n-1}`` and ``a_{n-2}`` (through the watermark)."""
    cfg = resolve(config)
    tol = cfg.tol if tol is None else tol
    n = D.n
    if n < 3:
        raise OrderTooLow(f"Laguerre-Forsyth form needs n >= 3, got {n}")
    return (
        (D.coeffs[n] - 1.0).is_zero(tol)
        and D.coeffs[n - 1].is_zero(tol)
        and D.coeffs[n - 2].is_zero(tol)
    )


def _order_scale(jets):
    """Per-order size ``max(1, max_k |c_k[j]|)`` of a family of jets."""
    stacked = np.concatenate([np.abs(j.array) for j in jets])
    return np.maximum(1.0, stacked.max(axis=0))


def _is_dust(jet, scale, tol):
    """Every coefficient through the watermark is within ``tol`` of its order's scale."""
    v = jet.valid
    return bool(np.all(np.abs(jet.array[:, : v + 1]) <= tol * scale[: v + 1]))


def _lf_gate(D, cfg):
    """Structural LF check with a threshold scaled orderwise by the coefficients.

    Used as a precondition inside the library: normalizing maps of germs
    with a steep top coefficient produce legitimately large jets, and the
    roundoff in the vanishing coefficients grows with them order by order.
    """
    n = D.n
    if n < 3:
        raise OrderTooLow(f"Laguerre-Forsyth form needs n >= 3, got {n}")
    scale = _order_scale(D.coeffs)
    tol = cfg.reg_tol
    return (
        _is_dust(D.coeffs[n] - 1.0, scale, tol)
        and _is_dust(D.coeffs[n - 1], scale, tol)
        and _is_dust(D.coeffs[n - 2], scale, tol)
    )


# names used by the operation catalogue
op_apply = apply_operator
op_change_variable = change_variable
op_conjugate = conjugate

"""Regular germs of Laguerre-Forsyth sections and their canonical forms.

A section is the tuple ``(a_{n-3}, ..., a_0)`` of lower coefficients of a
monic operator with vanishing ``a_{n-1}`` and ``a_{n-2}``.  Germs are taken
at 0, and the residual freedom is the isotropy group of 0 in the Moebius
group.  Its orientation-preserving part is two-dimensional,
``x -> a x / (c x + 1)`` with ``a > 0``, and is used to normalize the pair
``(a_i(0), a_i'(0))`` of the top nonvanishing coefficient to ``(+-1, 0)``.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from .config import resolve
from .diffop import LinearOperator, _is_dust, _lf_gate, _order_scale
from .errors import (
    ClassMismatch,
    NormalizationDiverged,
    NotInLFForm,
    NotRegularGerm,
    OrderMismatch,
)
from .jet import Jet
from .normalform import reduce_full
from .projective import ProjectiveMap, _act, act_on_lf, symmetry_dimension

__all__ = [
    "GermSignature",
    "LFSection",
    "ParityCase",
    "classify_pipeline",
    "ell",
    "equivalent",
    "germ_class",
    "normalize_germ",
    "signature",
]


@dataclass(frozen=True)
class LFSection:
    """The lower coefficients ``(a_{n-3}, ..., a_0)`` of a monic LF operator."""

    n: int
    coeffs: tuple

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if self.n < 3:
            raise ValueError("sections need n >= 3")
        if len(self.coeffs) != self.n - 2:
            raise ValueError(f"expected {self.n - 2} coefficient jets, got {len(self.coeffs)}")
        orders = {c.order for c in self.coeffs}
        if len(orders) != 1:
            raise OrderMismatch("section jets must share one truncation order")

    @classmethod
    def from_lists(cls, n, lists, base=0.0, order=12):
        """``lists`` maps coefficient index ``k`` to a list of Taylor coefficients."""
        return cls(
            n,
            [Jet.from_polynomial(lists.get(k, []), base, order) for k in range(n - 3, -1, -1)],
        )

    @classmethod
    def from_operator(cls, D, config=None):
        """Section of an LF operator; the germ is moved to 0 by translation."""
        cfg = resolve(config)
        if not _lf_gate(D, cfg):
            raise NotInLFForm("operator is not in Laguerre-Forsyth form")
        return cls(D.n, [D.coeffs[k].rebased(0.0) for k in range(D.n - 3, -1, -1)])

    def to_operator(self):
        base, order = self.base, self.order
        zero = Jet.zero(base, order)
        lower = [self.a(k) for k in range(self.n - 2)]
        return LinearOperator(lower + [zero, zero, Jet.constant(1.0, base, order)])

    def a(self, k):
        """The coefficient jet ``a_k`` (``0 <= k <= n-3``)."""
        return self.coeffs[self.n - 3 - k]

    @property
    def base(self):
        return self.coeffs[0].base

    @property
    def order(self):
        return self.coeffs[0].order

    @property
    def valid(self):
        return min(c.valid for c in self.coeffs)

    def is_zero(self, tol):
        return all(c.is_zero(tol) for c in self.coeffs)


class ParityCase(enum.Enum):
    ALL_ODD_VANISH = "all_odd_vanish"
    FIRST_ODD_POSITIVE = "first_odd_positive"
    NOT_APPLICABLE = "n/a"


@dataclass(frozen=True)
class GermSignature:
    """Classification label of a germ plus its canonical representative.

    ``class_i`` and ``epsilon`` are None for the zero section.  ``mu_applied``
    records whether the reflection ``x -> -x`` was used, and ``odd_values``
    keeps the values ``a_{i-j}(0)`` (odd ``j``) before any reflection.
    """

    class_i: int
    epsilon: int
    parity: ParityCase
    parity_r: int
    sym_dim: int
    canonical: LFSection
    mu_applied: bool = False
    odd_values: tuple = field(default=())

    def discrete(self):
        return (self.class_i, self.epsilon, self.parity, self.parity_r, self.sym_dim)


def germ_class(S, config=None):
    """Regular class ``i`` of the germ at the base point, or None.

    None covers both the zero section and sections whose first
    non-identically-zero coefficient vanishes at the base point.
    """
    cfg = resolve(config)
    for k in range(S.n - 3, -1, -1):
        jet = S.a(k)
        if jet.is_zero(cfg.tol):
            continue
        return k if abs(jet.value) > cfg.reg_tol else None
    return None


def ell(S, i, config=None):
    """``(a_i(0), a_i'(0))`` for a germ of class ``i``."""
    if germ_class(S, config) != i:
        raise ClassMismatch(f"germ is not regular of class {i}")
    c = S.a(i).coeffs
    return float(c[0]), float(c[1])


def _act_section(f, S, cfg):
    moved = act_on_lf(f, S.to_operator(), cfg)
    try:
        out = LFSection.from_operator(moved, cfg)
    except NotInLFForm as exc:
        # a pole of f close to 0 makes the moved jets grow like |c|^k
        raise NormalizationDiverged(
            f"precision lost moving the germ by {f}; the germ is ill-conditioned at this order"
        ) from exc
    # the action preserves the class subbundle: vanishing top coefficients stay exactly zero
    scale = _order_scale(out.coeffs)
    coeffs = list(out.coeffs)
    for pos, (before, after) in enumerate(zip(S.coeffs, out.coeffs)):
        if not before.is_zero(cfg.tol):
            break
        if _is_dust(after, scale, cfg.reg_tol):
            coeffs[pos] = Jet.zero(after.base, after.order).with_valid(after.valid)
    return LFSection(S.n, coeffs)


def _ell_with_jacobian(D, i, scale, c, cfg):
    """ell of the moved germ and its partial derivatives in (scale, c)."""
    by_scale = _act(([scale, 1.0], 0.0, c, 1.0), D, cfg).coeffs[i].array
    by_c = _act((scale, 0.0, [c, 1.0], 1.0), D, cfg).coeffs[i].array
    r = by_scale[0, :2]
    jac = np.column_stack([by_scale[1, :2], by_c[1, :2]])
    return r, jac


def normalize_germ(S, config=None):
    """Move a regular germ into ``ell = (+-1, 0)`` within the isotropy group.

    Solves for ``f(x) = a x / (c x + 1)``, ``a > 0``, by damped Newton
    iteration on the engine-evaluated ``ell``; the Jacobian is exact
    (dual-number evaluation of the action).  The seed uses the weight
    ``n - i`` of ``a_i(0)`` under scaling.

    Returns ``(normalized_section, f)``.
    """
    cfg = resolve(config)
    i = germ_class(S, cfg)
    if i is None:
        raise NotRegularGerm("germ is not regular")
    n = S.n
    # ell only sees orders 0 and 1, and the action keeps the watermark
    D = S.to_operator().resized(2)
    a0 = S.a(i).value
    eps = 1.0 if a0 > 0 else -1.0
    scale, c = abs(a0) ** (1.0 / (n - i)), 0.0
    target = np.array([eps, 0.0])
    best, best_params, prev = np.inf, (scale, c), np.inf
    for _ in range(100):
        r, jac = _ell_with_jacobian(D, i, scale, c, cfg)
        res = r - target
        err = float(np.abs(res).max())
        if err < best:
            best, best_params = err, (scale, c)
        # stop once converged or when roundoff stalls the iteration
        if err <= 1e-3 * cfg.tol or (best <= cfg.tol and err > 0.5 * prev):
            break
        prev = err
        try:
            step = np.linalg.solve(jac, -res)
        except np.linalg.LinAlgError as exc:
            raise NormalizationDiverged("singular Jacobian in germ normalization") from exc
        lam = 1.0
        while scale + lam * step[0] <= 0.5 * scale:
            lam *= 0.5
        scale += lam * step[0]
        c += lam * step[1]
    if best > cfg.tol:
        raise NormalizationDiverged(f"ell residual {best:.3g} after normalization")
    f = ProjectiveMap.isotropy(*best_params)
    return _act_section(f, S, cfg), f


def _odd_values(S, i):
    return tuple(S.a(i - j).value for j in range(1, i + 1, 2))


def _signature(S, cfg, with_symmetry=True):
    i = germ_class(S, cfg)
    if i is None:
        raise NotRegularGerm("germ is not regular")
    n = S.n
    canon, _ = normalize_germ(S, cfg)
    eps = 1 if canon.a(i).value > 0 else -1
    mu = ProjectiveMap.mu()
    mu_applied = False
    odd = ()
    parity, r = ParityCase.NOT_APPLICABLE, None
    if (n - i) % 2 == 1:
        if eps < 0:
            # odd weight: the reflection flips the sign of a_i(0)
            canon, _ = normalize_germ(_act_section(mu, canon, cfg), cfg)
            mu_applied = True
            eps = 1 if canon.a(i).value > 0 else -1
    else:
        odd = _odd_values(canon, i)
        first = next((k for k, v in enumerate(odd) if abs(v) > cfg.reg_tol), None)
        if first is None:
            parity = ParityCase.ALL_ODD_VANISH
        else:
            parity, r = ParityCase.FIRST_ODD_POSITIVE, 2 * first + 1
            if odd[first] < 0:
                # even weight: the reflection keeps ell and flips every odd-offset value
                canon, _ = normalize_germ(_act_section(mu, canon, cfg), cfg)
                mu_applied = True
    sym = symmetry_dimension(canon.to_operator(), cfg).dim if with_symmetry else None
    return GermSignature(i, eps, parity, r, sym, canon, mu_applied, odd)


def signature(S, config=None):
    """Canonical classification label of a regular germ under the isotropy group."""
    return _signature(S, resolve(config))


def zero_signature(S):
    return GermSignature(None, None, ParityCase.NOT_APPLICABLE, None, 3, S)


def _same_jets(S1, S2, upto, tol):
    for a, b in zip(S1.coeffs, S2.coeffs):
        v = min(upto, a.valid, b.valid)
        if (a - b).max_abs(v) > tol:
            return False
    return True


def equivalent(S1, S2, group="G0", config=None):
    """Whether two regular germs are equivalent to the tested jet order.

    ``group`` is ``"G0plus"`` (orientation-preserving isotropy maps only) or
    ``"G0"`` (the full isotropy group, reflection included).  Canonical jets
    are compared through order ``K - n - 4`` within ``10 * tol``.
    """
    cfg = resolve(config)
    if S1.n != S2.n or S1.order != S2.order:
        raise OrderMismatch("sections must share n and truncation order")
    i1, i2 = germ_class(S1, cfg), germ_class(S2, cfg)
    if i1 is None or i2 is None:
        raise NotRegularGerm("both germs must be regular")
    if i1 != i2:
        return False
    n = S1.n
    upto = S1.order - n - 4
    tol = 10 * cfg.tol
    key = group.lower().replace("_", "").replace("+", "plus")
    if key == "g0plus":
        c1, _ = normalize_germ(S1, cfg)
        c2, _ = normalize_germ(S2, cfg)
        if np.sign(c1.a(i1).value) != np.sign(c2.a(i1).value):
            return False
        return _same_jets(c1, c2, upto, tol)
    if key != "g0":
        raise ValueError(f"unknown group {group!r}")
    s1 = _signature(S1, cfg, with_symmetry=False)
    s2 = _signature(S2, cfg, with_symmetry=False)
    if s1.discrete() != s2.discrete():
        return False
    if _same_jets(s1.canonical, s2.canonical, upto, tol):
        return True
    if s1.parity is ParityCase.ALL_ODD_VANISH:
        # both a germ and its reflection satisfy the all-odd-vanish condition
        mirrored = _act_section(ProjectiveMap.mu(), s1.canonical, cfg)
        return _same_jets(mirrored, s2.canonical, upto, tol)
    return False


def classify_pipeline(D, config=None):
    """Reduce an operator to LF form and classify its germ at the base point.

    The germ is classified at the configured order: jets carried beyond
    ``config.order`` are dropped after reduction.  The zero section (the
    operator is equivalent to ``D^n``) is reported with ``sym_dim = 3`` and
    no regular class.
    """
    cfg = resolve(config)
    lf, _ = reduce_full(D, cfg)
    if lf.order > cfg.order:
        # high orders only carry growth from the normalizing pole
        lf = lf.resized(cfg.order)
    S = LFSection.from_operator(lf, cfg)
    if S.is_zero(cfg.tol):
        return zero_signature(S)
    return _signature(S, cfg)

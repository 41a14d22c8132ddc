"""Moebius maps, their lift to Laguerre-Forsyth operators, and projective symmetries."""

import math
from dataclasses import dataclass

import numpy as np

from .config import resolve
from .diffop import GaugeTransform, _lf_gate, conjugate
from .errors import Anomaly, DegenerateMap, NotInLFForm, PoleAtBasePoint
from .jet import Jet, _spow

__all__ = [
    "GENERATORS",
    "ProjectiveMap",
    "SymmetryResult",
    "act_on_lf",
    "infinitesimal_action",
    "lift",
    "symmetry_dimension",
]


@dataclass(frozen=True)
class ProjectiveMap:
    """``x -> (a x + b) / (c x + d)`` with ``ad - bc != 0``."""

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, float(getattr(self, name)))
        if abs(self.det) <= 1e-12:
            raise DegenerateMap(f"ad - bc = {self.det:.3g}")

    @classmethod
    def identity(cls):
        return cls(1.0, 0.0, 0.0, 1.0)

    @classmethod
    def mu(cls):
        """The reflection ``x -> -x``."""
        return cls(-1.0, 0.0, 0.0, 1.0)

    @classmethod
    def isotropy(cls, scale, c):
        """``x -> scale x / (c x + 1)``, fixing 0."""
        return cls(scale, 0.0, c, 1.0)

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def orientation(self):
        return 1 if self.det > 0 else -1

    def matrix(self):
        return np.array([[self.a, self.b], [self.c, self.d]])

    @classmethod
    def from_matrix(cls, m):
        m = np.asarray(m, dtype=float)
        det = m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]
        if abs(det) <= 1e-12:
            raise DegenerateMap(f"ad - bc = {det:.3g}")
        m = m / math.sqrt(abs(det))
        return cls(m[0, 0], m[0, 1], m[1, 0], m[1, 1])

    def normalized(self):
        """Same map scaled to ``|ad - bc| = 1``."""
        return ProjectiveMap.from_matrix(self.matrix())

    def compose(self, other):
        """``self o other``."""
        return ProjectiveMap.from_matrix(self.matrix() @ other.matrix())

    def inverse(self):
        return ProjectiveMap.from_matrix([[self.d, -self.b], [-self.c, self.a]])

    def _denominator(self, x, reg_tol):
        den = self.c * x + self.d
        if abs(den) <= reg_tol:
            raise PoleAtBasePoint(f"pole at x = {x}")
        return den

    def __call__(self, x, reg_tol=1e-6):
        return (self.a * x + self.b) / self._denominator(x, reg_tol)

    def derivative(self, x, reg_tol=1e-6):
        return self.det / self._denominator(x, reg_tol) ** 2

    def close_to(self, other, tol):
        """Equality as points of PGL(2), i.e. up to the sign of the matrix."""
        m1, m2 = self.normalized().matrix(), other.normalized().matrix()
        return min(np.abs(m1 - m2).max(), np.abs(m1 + m2).max()) <= tol

    def as_jet(self, x0, order, reg_tol=1e-6):
        self._denominator(x0, reg_tol)
        return _mobius_jets((self.a, self.b, self.c, self.d), x0, order)[0]


def _mobius_jets(params, x0, order):
    """Jets of the lift of ``x -> (a x + b) / (c x + d)`` at ``x0``.

    The parameters may be nil-scalars.  Returns ``(phi, phi_inverse, den,
    det)`` where ``den`` is the jet of ``c x + d`` and ``det = ad - bc``;
    ``phi_inverse`` is based at the real part of ``phi(x0)``.
    """
    a, b, c, d = (np.atleast_1d(np.asarray(p, dtype=float)) for p in params)
    m = max(len(a), len(b), len(c), len(d))
    a, b, c, d = (np.pad(p, (0, m - len(p))) for p in (a, b, c, d))

    def line(slope, offset, base):
        # slope * x + offset as a jet at base
        return (Jet.identity(base, order) - base).times_scalar(slope) + Jet.constant(
            slope * base + offset, base, order
        )

    den = line(c, d, x0)
    phi = line(a, b, x0) / den
    det = _nmul(a, d) - _nmul(b, c)
    y0 = phi.value
    inverse = line(d, -b, y0) / line(-c, a, y0)
    return phi, inverse, den, det


def _nmul(u, v):
    return np.convolve(u, v)[: len(u)]


def _lift_from_jets(phi, inverse, den, det, n):
    """``psi = |f'|^((n-1)/2)``, ``rho = sign(f')^n |f'|^(-n)`` in closed form.

    With ``f' = det / den^2`` both ``1/psi`` and ``rho`` are polynomials in
    ``den``, so they are built by multiplication rather than series
    recursions.
    """
    s_det = 1.0 if det[0] > 0 else -1.0
    s_den = 1.0 if den.value > 0 else -1.0
    mod_det = det * s_det
    pos_den = den * s_den
    den_pow = pos_den ** (n - 1)
    psi_inverse = den_pow.times_scalar(_spow(mod_det, -(n - 1) / 2.0))
    psi = (1.0 / den_pow).times_scalar(_spow(mod_det, (n - 1) / 2.0))
    rho = ((den_pow * pos_den) ** 2).times_scalar(_spow(mod_det, -float(n))) * s_det**n
    return GaugeTransform(phi, psi, rho, inverse, psi_inverse)


def lift(f, n, x0, order, config=None):
    """Transform induced by ``f``: ``x -> f(x)``, ``y -> |f'|^((n-1)/2) y``.

    ``rho = sign(f')^n |f'|^(-n)`` keeps the conjugated operator monic.
    """
    cfg = resolve(config)
    f._denominator(x0, cfg.reg_tol)
    return _lift_from_jets(*_mobius_jets((f.a, f.b, f.c, f.d), x0, order), n)


def _act(params, S, cfg):
    n = S.n
    work = S.order + n + 2
    T = _lift_from_jets(*_mobius_jets(params, S.base, work), n)
    return conjugate(S, T, cfg)


def _require_lf(S, cfg):
    if not _lf_gate(S, cfg):
        raise NotInLFForm("operator is not in Laguerre-Forsyth form")


def act_on_lf(f, S, config=None):
    """The section ``f(S)``: conjugation by the lift of ``f``.

    The output is based at ``f(x0)``.  The lift is evaluated at a padded
    order so the output keeps ``S``'s watermark.
    """
    cfg = resolve(config)
    _require_lf(S, cfg)
    f._denominator(S.base, cfg.reg_tol)
    return _act((f.a, f.b, f.c, f.d), S, cfg)


# flows of v1 = d/dx, v2 = x d/dx, v3 = x^2 d/dx to first order in t
GENERATORS = {
    "v1": ((1.0, [0.0, 1.0], 0.0, 1.0), lambda t: ProjectiveMap(1.0, t, 0.0, 1.0)),
    "v2": (([1.0, 1.0], 0.0, 0.0, 1.0), lambda t: ProjectiveMap(math.exp(t), 0.0, 0.0, 1.0)),
    "v3": ((1.0, 0.0, [0.0, -1.0], 1.0), lambda t: ProjectiveMap(1.0, 0.0, -t, 1.0)),
}


def infinitesimal_action(gen, S, config=None):
    """``d/dt f_t(S)`` at ``t = 0`` for the flow ``f_t`` of a generator.

    Returns one jet per section coefficient, ordered ``a_{n-3}, ..., a_0``.
    The derivative is exact: the flow parameter is carried as a dual number.
    """
    cfg = resolve(config)
    _require_lf(S, cfg)
    params, _ = GENERATORS[gen]
    moved = _act(params, S, cfg)
    return [moved.coeffs[k].part(1) for k in range(S.n - 3, -1, -1)]


@dataclass(frozen=True)
class SymmetryResult:
    dim: int
    basis: tuple
    residual: float


def _determining_matrix(S, cfg):
    n = S.n
    depth = S.order - n - 4
    columns = []
    for gen in GENERATORS:
        jets = infinitesimal_action(gen, S, cfg)
        col = []
        for jet in jets:
            top = min(depth, jet.valid)
            col.extend(jet.coeffs[: top + 1])
        columns.append(col)
    return np.array(columns).T


def symmetry_dimension(S, config=None):
    """Dimension of the algebra of projective symmetries of the section ``S``.

    The determining equations are the jet coefficients, through order
    ``K - n - 4``, of the infinitesimal action of ``alpha v1 + beta v2 +
    gamma v3``.  Rows that are numerical dust are dropped, the rest are
    scaled to unit length, and the rank is read off the singular values.
    """
    cfg = resolve(config)
    _require_lf(S, cfg)
    M = _determining_matrix(S, cfg)
    if M.size == 0:
        raise ValueError("jet order too low for the symmetry test")
    norms = np.linalg.norm(M, axis=1)
    keep = norms > cfg.tol
    if not keep.any():
        basis = tuple(tuple(row) for row in np.eye(3))
        return SymmetryResult(3, basis, 0.0)
    A = M[keep] / norms[keep, np.newaxis]
    _, s, vh = np.linalg.svd(A)
    rank = int(np.sum(s > cfg.rank_tol))
    dim = 3 - rank
    if dim == 2:
        raise Anomaly("computed a two-dimensional symmetry algebra")
    basis = []
    for v in vh[rank:]:
        v = v / np.linalg.norm(v)
        if v[np.argmax(np.abs(v))] < 0:
            v = -v
        basis.append(tuple(float(x) for x in v))
    residual = max((float(np.abs(M @ np.array(v)).max()) for v in basis), default=0.0)
    return SymmetryResult(dim, tuple(basis), residual)

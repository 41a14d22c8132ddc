"""Moebius maps acting on Laguerre-Forsyth operators, and their symmetries.

Run: python3 demos/projective_action.py
"""

import math

import numpy as np

from lodeclass import (
    Jet,
    LinearOperator,
    ProjectiveMap,
    act_on_lf,
    is_lf_form,
    schwarzian,
    symmetry_dimension,
)

K = 12


def lf_operator(n, lower):
    """Monic operator with the given a_0 .. a_{n-3} and no a_{n-1}, a_{n-2}."""
    zero = Jet.zero(0.0, K)
    return LinearOperator(list(lower) + [zero, zero, Jet.constant(1.0, 0.0, K)])


# The Schwarzian vanishes on Moebius maps and only there.
f = ProjectiveMap(2.0, 1.0, 0.5, 1.0)
print(f"Schwarzian of the jet of {f}: {schwarzian(f.as_jet(0.0, K)).max_abs():.1e}")
print(f"Schwarzian of exp: {schwarzian(Jet([1.0 / math.factorial(j) for j in range(K + 1)])).value}")

# The lifted action keeps LF form and is a group action.
rng = np.random.default_rng(0)
S = lf_operator(5, [Jet(rng.uniform(-1, 1, K + 1)) for _ in range(3)])
g = ProjectiveMap(1.0, 0.2, 0.1, 1.0)
h = ProjectiveMap(0.9, -0.1, -0.2, 1.0)
once = act_on_lf(g, S)
print(f"\ng(S) is in LF form: {is_lf_form(once, 1e-9)}, based at g(0) = {once.base:.3f}")
twice = act_on_lf(h, once)
direct = act_on_lf(h.compose(g), S)
gap = max((a - b).max_abs(min(a.valid, b.valid)) for a, b in zip(twice.coeffs, direct.coeffs))
print(f"h(g(S)) against (h g)(S): {gap:.1e}")

# Projective symmetries: the algebra has dimension 3, 1 or 0.
cases = [
    ("zero section (D^5)", LinearOperator.monomial(5, order=K)),
    ("constant coefficients", lf_operator(5, [Jet.constant(c, 0.0, K) for c in (1.0, -0.5, 0.25)])),
    ("random coefficients", S),
]
print()
for name, op in cases:
    result = symmetry_dimension(op)
    basis = [np.round(v, 6).tolist() for v in result.basis]
    print(f"{name:24s} dim = {result.dim}  basis = {basis}")

"""Reduce operators to Laguerre-Forsyth form and check what the reduction promises.

Run: python3 demos/normal_form.py
"""

import math

import numpy as np

from lodeclass import (
    Jet,
    LinearOperator,
    apply_operator,
    compose,
    gauge_normalize,
    is_lf_form,
    reduce_full,
    reverse,
)

K = 12
np.set_printoptions(precision=6, suppress=True, linewidth=100)


def show(D, terms=5):
    for k in range(D.n, -1, -1):
        print(f"  a{k}: {D[k].coeffs[:terms]}")


# D^3 + 3 D^2.  Conjugating by psi = exp(x) removes a_2 and leaves
# D^3 - 3 D + 2, whose kernel contains exp(x) moved to the new variable.
D = LinearOperator.from_lists([None, None, [3.0], [1.0]], 0.0, K)
gauged, T = gauge_normalize(D)
print("gauge stage of D^3 + 3 D^2")
show(gauged)
print(f"  psi: {T.psi.coeffs[:5]}")

# The LF stage then removes a_1 through a Schwarzian equation.
lf, T = reduce_full(D)
print("\nLaguerre-Forsyth form")
show(lf)
print(f"  LF form within 1e-9: {is_lf_form(lf, 1e-9)}")

# An operator with variable leading coefficient, built so that y = exp(x/2)
# lies in its kernel.  The reduced operator must annihilate the moved solution.
rng = np.random.default_rng(3)
y = Jet([0.5**j / math.factorial(j) for j in range(K + 1)])
upper = [Jet(rng.uniform(-1, 1, K + 1)) for _ in range(3)]
upper.append(Jet.from_polynomial([1.5, 0.4, -0.2], 0.0, K))
rest = LinearOperator([Jet.zero(0.0, K)] + upper)
a0 = -apply_operator(rest, y) / y
D = LinearOperator([a0.resized(K)] + upper)
print(f"\nrandom operator with known solution, |D y| = {apply_operator(D, y).max_abs():.1e}")

lf, T = reduce_full(D)
moved = compose(T.psi * y, reverse(T.phi))
residual = apply_operator(lf, moved)
depth = residual.valid - 2
print(f"reduced operator valid to order {lf.valid}")
print(f"|D_LF (psi y o phi^-1)| through order {depth}: {residual.max_abs(depth):.1e}")

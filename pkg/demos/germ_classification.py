"""Classify germs of Laguerre-Forsyth sections under the isotropy group of 0.

Run: python3 demos/germ_classification.py
"""

import numpy as np

from lodeclass import LFSection, ProjectiveMap, act_on_lf, classify_pipeline, equivalent, signature
from lodeclass.lodefile import emit_lode

K = 12


def section(n, lists):
    return LFSection.from_lists(n, lists, 0.0, K)


def describe(sig):
    r = "" if sig.parity_r is None else f" r={sig.parity_r}"
    return f"class {sig.class_i}, epsilon {sig.epsilon:+d}, {sig.parity.value}{r}, sym_dim {sig.sym_dim}"


# The normalizing map of a0 = 16 at n = 4 is x -> 2x: a_0 has weight n - i = 4.
print("n=4, a0 = 16        ->", describe(signature(section(4, {0: [16.0]}))))

# With a slope, the projective parameter c is needed to clear a_0'(0).
sig = signature(section(4, {0: [1.0, 1.0]}))
print("n=4, a0 = 1 + x     ->", describe(sig))
print("   canonical a0:", np.round(sig.canonical.a(0).coeffs[:5], 6))

# Odd weight: the reflection x -> -x flips the sign, so epsilon is +1 under G0
# while the orientation-preserving group keeps +1 and -1 apart.
plus, minus = section(5, {0: [1.0]}), section(5, {0: [-1.0]})
print("\nn=5, a0 = -1        ->", describe(signature(minus)))
print("a0 = 1 vs a0 = -1, orientation-preserving maps only:", equivalent(plus, minus, "G0plus"))
print("a0 = 1 vs a0 = -1, reflection allowed:              ", equivalent(plus, minus, "G0"))

# Even weight: epsilon survives, the first odd-offset value fixes the orientation.
print("\nn=5, a1 = 1, a0 = -0.5 ->", describe(signature(section(5, {1: [1.0], 0: [-0.5]}))))

# A germ and its image under an isotropy map share one signature.
rng = np.random.default_rng(7)
S = section(6, {2: [0.8, 0.3, -0.1], 1: rng.normal(size=4).tolist(), 0: rng.normal(size=4).tolist()})
f = ProjectiveMap.isotropy(1.1, 0.2)
moved = LFSection.from_operator(act_on_lf(f, S.to_operator()))
print(f"\nrandom n=6 germ     -> {describe(signature(S))}")
print(f"moved by {f}: equivalent = {equivalent(S, moved, 'G0plus')}")

# The full pipeline from an arbitrary operator, printed in the .lode format.
D = S.to_operator()
print("\nclassify output for the same operator:")
print(emit_lode(classify_pipeline(D), 1e-12), end="")

import math

import numpy as np
import pytest

import pools
from lodeclass import Jet, LinearOperator, ProjectiveMap
from lodeclass import projective
from lodeclass.diffop import is_lf_form
from lodeclass.errors import Anomaly, DegenerateMap, NotInLFForm, PoleAtBasePoint
from lodeclass.projective import (
    GENERATORS,
    act_on_lf,
    infinitesimal_action,
    lift,
    symmetry_dimension,
)

K = 12


def lf(n, lists, order=K, base=0.0):
    """LF operator from ``{k: coefficients}`` for the lower coefficients."""
    cs = [Jet.from_polynomial(lists.get(k, []), base, order) for k in range(n - 2)]
    zero = Jet.zero(base, order)
    return LinearOperator(cs + [zero, zero, Jet.constant(1.0, base, order)])


def shift_to(jet, base):
    """Re-expand a polynomial jet at a new base point (exact for the stored terms)."""
    c = jet.coeffs
    h = base - jet.base
    out = np.zeros_like(c)
    for m, cm in enumerate(c):
        for j in range(m + 1):
            out[j] += cm * math.comb(m, j) * h ** (m - j)
    return Jet(out, base)


# -- Moebius maps ------------------------------------------------------------


def test_mobius_group_operations():
    e = ProjectiveMap.identity()
    assert e.inverse().close_to(e, 0.0)
    rng = np.random.default_rng(0)
    for _ in range(10):
        f = pools.mobius(rng, rng.uniform(-1, 1))
        assert f.compose(f.inverse()).close_to(e, 1e-12)
        x = rng.uniform(-1, 1)
        assert abs(f.inverse()(f(x)) - x) <= 1e-12


def test_mobius_jet_and_derivative():
    f = ProjectiveMap(1, 0, -1, 1)
    np.testing.assert_allclose(f.as_jet(0.0, 3).coeffs, [0, 1, 1, 1])
    assert f.derivative(0.5) == pytest.approx(4.0)
    assert f.orientation == 1 and ProjectiveMap.mu().orientation == -1


def test_mobius_errors():
    with pytest.raises(DegenerateMap):
        ProjectiveMap(1, 2, 2, 4)
    with pytest.raises(PoleAtBasePoint):
        ProjectiveMap(1, 0, 1, -1).as_jet(1.0, 4)
    with pytest.raises(PoleAtBasePoint):
        ProjectiveMap(1, 0, 1, -1)(1.0)


# -- lift --------------------------------------------------------------------


def test_lift_examples():
    T = lift(ProjectiveMap.identity(), 4, 0.0, K)
    assert (T.phi - Jet.identity(0.0, K)).max_abs() == 0.0
    assert (T.psi - 1.0).max_abs() == 0.0 and (T.rho - 1.0).max_abs() == 0.0
    T = lift(ProjectiveMap(2, 0, 0, 1), 3, 0.0, K)
    assert (T.psi - 2.0).max_abs() <= 1e-15
    assert (T.rho - 2.0**-3).max_abs() <= 1e-15
    T = lift(ProjectiveMap.mu(), 4, 0.0, K)
    assert (T.psi - 1.0).max_abs() <= 1e-15
    assert T.phi.coeffs[1] == -1.0


def test_lift_matches_power_formulas():
    rng = np.random.default_rng(1)
    from lodeclass.jet import power

    for n in (3, 4, 5):
        x0 = rng.uniform(-1, 1)
        f = pools.mobius(rng, x0)
        T = lift(f, n, x0, K)
        dphi = T.phi.derivative()
        s = 1.0 if dphi.value > 0 else -1.0
        modulus = dphi * s
        v = K - 1
        assert (T.psi - power(modulus, (n - 1) / 2)).max_abs(v) <= 1e-12
        assert (T.rho - power(modulus, -float(n)) * s**n).max_abs(v) <= 1e-12


# -- finite action -----------------------------------------------------------


def test_act_identity():
    S = pools.lf_operator(np.random.default_rng(2), 5)
    assert act_on_lf(ProjectiveMap.identity(), S).allclose(S, 1e-12)


def test_act_scaling_weight():
    out = act_on_lf(ProjectiveMap(2, 0, 0, 1), lf(4, {0: [16.0]}))
    assert (out[0] - 1.0).max_abs() <= 1e-12
    assert out[1].max_abs() <= 1e-12


def test_act_reflection_parity_pattern():
    n = 5
    S = lf(n, {0: [0.7], 1: [-0.4], 2: [1.3]})
    out = act_on_lf(ProjectiveMap.mu(), S)
    for k in range(n - 2):
        assert (out[k] - S[k].value * (-1) ** (n - k)).max_abs() <= 1e-13


def test_act_output_base_point():
    f = ProjectiveMap(1, 0.25, 0.1, 1)
    out = act_on_lf(f, pools.lf_operator(np.random.default_rng(3), 4, base=0.5))
    assert out.base == pytest.approx(f(0.5))


def test_act_requires_lf_input():
    with pytest.raises(NotInLFForm):
        act_on_lf(ProjectiveMap.identity(), pools.operator(np.random.default_rng(4), 4))


def test_lf_closure_random():
    rng = np.random.default_rng(5)
    for _ in range(30):
        n = int(rng.integers(3, 7))
        x0 = rng.uniform(-0.5, 0.5)
        out = act_on_lf(pools.mobius(rng, x0), pools.lf_operator(rng, n, base=x0))
        assert is_lf_form(out, 1e-7)
        assert out.valid == K


def test_group_law_random():
    rng = np.random.default_rng(6)
    for _ in range(20):
        n = int(rng.integers(3, 7))
        x0 = rng.uniform(-0.5, 0.5)
        S = pools.lf_operator(rng, n, base=x0)
        g = pools.mobius(rng, x0)
        f = pools.mobius(rng, g(x0))
        lhs = act_on_lf(f, act_on_lf(g, S))
        rhs = act_on_lf(f.compose(g), S)
        assert lhs.allclose(rhs, 1e-6)


# -- infinitesimal action ----------------------------------------------------


@pytest.mark.parametrize("gen", list(GENERATORS))
def test_infinitesimal_zero_section(gen):
    assert all(j.is_zero(0.0) for j in infinitesimal_action(gen, LinearOperator.monomial(4, order=K)))


def test_translation_fixes_constants():
    jets = infinitesimal_action("v1", lf(5, {0: [2.0], 2: [-1.0]}))
    assert all(j.is_zero(1e-13) for j in jets)


def test_scaling_generator_on_unit_section():
    # -4 a0 + x a0' with a0 = 1
    a1, a0 = infinitesimal_action("v2", lf(4, {0: [1.0]}))
    assert a1.is_zero(1e-13)
    assert (a0 + 4.0).max_abs() <= 1e-12


def _finite_difference(gen, S, h=1e-5):
    _, flow = GENERATORS[gen]
    n = S.n
    plus = act_on_lf(flow(h), S)
    minus = act_on_lf(flow(-h), S)
    return [
        (shift_to(plus[k], 0.0) - shift_to(minus[k], 0.0)) * (1 / (2 * h))
        for k in range(n - 3, -1, -1)
    ]


@pytest.mark.parametrize("gen", list(GENERATORS))
def test_infinitesimal_matches_finite_differences(gen):
    rng = np.random.default_rng(7)
    for _ in range(3):
        n = int(rng.integers(3, 6))
        S = pools.lf_operator(rng, n)
        exact = infinitesimal_action(gen, S)
        approx = _finite_difference(gen, S)
        depth = K - n - 4
        for e, a in zip(exact, approx):
            assert (e - a).max_abs(depth) <= 1e-6


# -- symmetry dimension ------------------------------------------------------


def test_symmetry_examples():
    zero = symmetry_dimension(LinearOperator.monomial(4, order=K))
    assert zero.dim == 3 and len(zero.basis) == 3
    unit = symmetry_dimension(lf(4, {0: [1.0]}))
    assert unit.dim == 1
    np.testing.assert_allclose(unit.basis[0], (1, 0, 0), atol=1e-12)
    generic = symmetry_dimension(lf(4, {0: [1, 1, 0, 1]}))
    assert generic.dim == 0 and generic.basis == ()


def test_symmetry_strata():
    rng = np.random.default_rng(8)
    for _ in range(20):
        n = int(rng.integers(3, 7))
        S = pools.lf_operator(rng, n)
        assert symmetry_dimension(S).dim == 0
        consts = {k: [rng.uniform(-1, 1)] for k in range(n - 2)}
        result = symmetry_dimension(lf(n, consts))
        assert result.dim == 1
        assert np.linalg.norm(result.basis[0]) == pytest.approx(1.0)
        assert result.residual <= 1e-8


def test_symmetry_dimension_is_equivariant():
    rng = np.random.default_rng(9)
    for _ in range(10):
        n = int(rng.integers(3, 6))
        if rng.random() < 0.5:
            S = lf(n, {k: [rng.uniform(-1, 1)] for k in range(n - 2)})
        else:
            S = pools.lf_operator(rng, n)
        f = pools.isotropy(rng)
        assert symmetry_dimension(act_on_lf(f, S)).dim == symmetry_dimension(S).dim


def test_two_dimensional_answer_is_flagged(monkeypatch):
    fake = np.array([[1.0, 0.0, 0.0]] * 4)
    monkeypatch.setattr(projective, "_determining_matrix", lambda S, cfg: fake)
    with pytest.raises(Anomaly):
        symmetry_dimension(lf(4, {0: [1.0]}))

import numpy as np
import pytest

from juliacheb.errors import CompositionTooLarge
from juliacheb.poly import (
    Polynomial,
    compose,
    derivative,
    evaluate,
    monomial,
    preimages,
    quadratic_roots,
)


def test_evaluate_examples():
    assert evaluate(Polynomial([0.25, 0, 1]), 0) == 0.25
    assert evaluate(Polynomial([-2, 0, 1]), 2) == 2
    assert evaluate(monomial(2), 3j) == -9


def test_evaluate_vectorized_matches_scalar():
    p = Polynomial([1.5, -2j, 0.25, 1])
    zs = np.array([0.1 + 0.2j, -1.0, 3j, 2.5 - 1j])
    vec = evaluate(p, zs)
    for z, v in zip(zs, vec):
        assert abs(v - evaluate(p, complex(z))) < 1e-14


def test_compose_monomials():
    assert compose(monomial(2), monomial(2)) == monomial(4)


def test_compose_hand_expansion_and_evaluation_oracle():
    p = Polynomial([1, 0, 1])
    out = compose(p, p)
    assert np.allclose(out.coeffs, [2, 0, 2, 0, 1])
    rng = np.random.default_rng(1)
    for _ in range(10):
        z = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        assert abs(evaluate(out, z) - evaluate(p, evaluate(p, z))) < 1e-12


def test_compose_leading_recursion():
    out = compose(Polynomial([0, 0, 3]), Polynomial([0, 0, 2]))
    assert out == Polynomial([0, 0, 0, 0, 12])
    assert out.leading == 3 * 2**2


def test_compose_rejects_constants_and_caps_size():
    with pytest.raises(ValueError):
        compose(Polynomial([1.0]), monomial(2))
    with pytest.raises(CompositionTooLarge):
        compose(monomial(2), monomial(2), max_coeffs=4)


def test_derivative_examples():
    assert derivative(Polynomial([0.3, 0, 1])) == Polynomial([0, 2])
    assert derivative(Polynomial([5.0])).is_zero
    assert derivative(Polynomial([2, 0, -4, 0, 1])) == Polynomial([0, -8, 0, 4])


def test_preimages_quadratic_examples():
    assert preimages(Polynomial([-2, 0, 1]), 2) == [-2, 2]
    roots = preimages(monomial(2), -1)
    assert roots == [-1j, 1j]


def test_preimages_cube_roots_back_substitution():
    p = monomial(3)
    roots = preimages(p, 8)
    assert len(roots) == 3
    for r in roots:
        assert abs(evaluate(p, r) - 8) < 1e-10
    omega = np.exp(2j * np.pi / 3)
    expected = sorted([2 + 0j, 2 * omega, 2 * omega**2],
                      key=lambda z: (z.real, z.imag))
    assert np.allclose(roots, expected)


def test_preimages_multiple_root_keeps_branch_count():
    # pulling through the critical value must not lose branches
    roots = preimages(monomial(2), 0)
    assert roots == [0, 0]
    # triple root: the count survives and the residual contract bounds
    # each approximation by (tol * scale)^(1/3)
    roots = preimages(Polynomial([0, 0, 0, 1]), 0)
    assert len(roots) == 3
    assert max(abs(r) for r in roots) <= 1e-4


def test_cluster_merge_helper():
    from juliacheb.poly import _merge_clusters
    merged = _merge_clusters([1 + 0j, 1 + 5e-9j, 3 + 0j])
    assert merged[0] == merged[1] == 1 + 2.5e-9j
    assert merged[2] == 3 + 0j


def test_preimages_general_quartic_residuals():
    p = Polynomial([1.0, -0.5j, 2.0, 0.25, 1.0])
    w = 0.7 - 0.3j
    roots = preimages(p, w)
    assert len(roots) == 4
    scale = max(1.0, abs(w), float(np.max(np.abs(p.coeffs))))
    for r in roots:
        assert abs(evaluate(p, r) - w) <= 1e-12 * scale


def test_preimages_requires_nonconstant():
    with pytest.raises(ValueError):
        preimages(Polynomial([3.0]), 1.0)


def test_quadratic_roots_symmetric_pair():
    r1, r2 = quadratic_roots(1.0, -2.0, -1.0)  # z^2 - 2z - 1
    assert abs(r1 + r2 - 2.0) < 1e-15  # vertex symmetry to rounding
    assert abs(r1 * r2 + 1.0) < 1e-14
    # the pair is constructed as vertex +- offset, so the mirror is exact
    r1, r2 = quadratic_roots(1.0, 0.0, -2.0 - 1.0j)
    assert r1 == -r2


def test_compose_evaluate_consistency_random():
    rng = np.random.default_rng(7)
    for _ in range(8):
        dp = int(rng.integers(1, 7))
        dq = int(rng.integers(1, 7))
        p = Polynomial(rng.standard_normal(dp + 1) + 1j * rng.standard_normal(dp + 1))
        q = Polynomial(rng.standard_normal(dq + 1) + 1j * rng.standard_normal(dq + 1))
        if p.degree < 1 or q.degree < 1:
            continue
        c = compose(p, q)
        assert c.degree == p.degree * q.degree
        lead = p.leading * q.leading ** p.degree
        assert abs(c.leading - lead) <= 1e-12 * abs(lead)
        for _ in range(20):
            z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
            direct = evaluate(c, z)
            nested = evaluate(p, evaluate(q, z))
            assert abs(direct - nested) <= 1e-10 * max(1.0, abs(nested))


def test_derivative_chain_rule_random():
    rng = np.random.default_rng(11)
    p = Polynomial(rng.standard_normal(4) + 1j * rng.standard_normal(4))
    q = Polynomial(rng.standard_normal(3) + 1j * rng.standard_normal(3))
    c = compose(p, q)
    dc = derivative(c)
    dp = derivative(p)
    dq = derivative(q)
    for _ in range(10):
        z = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        chain = evaluate(dp, evaluate(q, z)) * evaluate(dq, z)
        direct = evaluate(dc, z)
        assert abs(direct - chain) <= 1e-8 * max(1.0, abs(chain))


def test_zero_polynomial_representation():
    z = Polynomial([0])
    assert z.is_zero and z.degree == 0
    trimmed = Polynomial([1, 2, 0, 0])
    assert trimmed.degree == 1 and trimmed.leading == 2

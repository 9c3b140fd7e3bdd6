import numpy as np
import pytest

from coopga import kernel as K
from coopga.algebra import (
    Multivector,
    MultivectorJacobian,
    e0,
    e1,
    e2,
    e3,
    einf,
    embed_point,
    extract_point,
    jacobian_inverse,
    jacobian_normalize,
    pseudoscalar,
)
from coopga.errors import DegeneratePoint, NonScalarNorm, NullMultivector


def test_null_basis_identities_exact():
    assert np.all((e0 * e0).c == 0.0)
    assert np.all((einf * einf).c == 0.0)
    prod = e0 * einf
    assert prod.scalar_part() == -1.0
    assert prod["e0i"] == 1.0


def test_pseudoscalar_squares_to_minus_one_exactly():
    sq = pseudoscalar * pseudoscalar
    assert sq.scalar_part() == -1.0
    assert np.count_nonzero(sq.c) == 1


def test_metric_signature():
    for v in (e1, e2, e3):
        assert (v * v).is_close(Multivector.scalar(1.0))


def test_geometric_product_associative_and_distributive():
    rng = np.random.default_rng(0)
    worst_assoc = 0.0
    worst_dist = 0.0
    for _ in range(1000):
        a, b, c = (Multivector(rng.normal(size=32)) for _ in range(3))
        assoc = ((a * b) * c - a * (b * c)).c
        dist = (a * (b + c) - a * b - a * c).c
        scale = max(1.0, np.max(np.abs(a.c)) * np.max(np.abs(b.c)) * np.max(np.abs(c.c)))
        worst_assoc = max(worst_assoc, np.max(np.abs(assoc)) / scale)
        worst_dist = max(worst_dist, np.max(np.abs(dist)) / scale)
    assert worst_assoc <= 1e-12
    assert worst_dist <= 1e-12


def test_vector_product_decomposes_into_inner_plus_outer():
    rng = np.random.default_rng(1)
    for _ in range(100):
        a = Multivector.from_euclidean(rng.normal(size=3))
        b = Multivector.from_euclidean(rng.normal(size=3))
        lhs = a * b
        rhs = (a | b) + (a ^ b)
        assert lhs.is_close(rhs, 1e-12)


def test_outer_product_antisymmetric_on_points():
    P = embed_point([0.3, -0.7, 1.1])
    assert np.max(np.abs((P ^ P).c)) <= 1e-12


def test_basic_blades():
    assert (e1 ^ e2).is_close(Multivector.basis("e12"))
    assert (~Multivector.basis("e12")).is_close(-Multivector.basis("e12"))
    m = Multivector.scalar(1) + Multivector.basis("e12") + Multivector.basis("e012")
    assert m.grade(2).is_close(Multivector.basis("e12"))


def test_dual_involution_is_minus_identity():
    rng = np.random.default_rng(2)
    for _ in range(100):
        x = Multivector(rng.normal(size=32))
        assert x.dual().dual().is_close(-x, 1e-12)
        assert x.dual().undual().is_close(x, 1e-12)


def test_embed_extract_round_trip():
    rng = np.random.default_rng(3)
    assert embed_point([0, 0, 0]).is_close(e0)
    expected = Multivector.from_blades({"e0": 1.0, "e1": 1.0, "ei": 0.5})
    assert embed_point([1, 0, 0]).is_close(expected)
    for _ in range(1000):
        x = rng.normal(size=3) * 3.0
        P = embed_point(x)
        assert abs(P.norm_squared_signed()) <= 1e-12 * max(1.0, np.max(x * x) ** 2)
        assert np.max(np.abs(extract_point(P) - x)) <= 1e-12


def test_extract_point_at_infinity_raises():
    with pytest.raises(DegeneratePoint):
        extract_point(einf)


def test_normalize_and_inverse():
    assert (2.0 * e1).normalized().is_close(e1)
    assert e1.inverse().is_close(e1)
    rng = np.random.default_rng(4)
    from coopga.groups import exp_versor, random_group_bivector

    for _ in range(100):
        V = exp_versor(random_group_bivector(rng, "S")).mv
        X = 3.7 * V
        assert (X * X.inverse()).is_close(Multivector.scalar(1.0), 1e-10)
        n = X.normalized()
        assert abs(n.norm_squared_signed() - np.sign(X.norm_squared_signed())) <= 1e-10


def test_normalize_error_conditions():
    with pytest.raises(NullMultivector):
        embed_point([1.0, 2.0, 3.0]).normalized()  # null vector
    with pytest.raises(NonScalarNorm):
        (e1 + Multivector.basis("e12") * 0.5 + Multivector.basis("e013") * 0.2).inverse()


def test_similarity_product_closure_is_exact():
    """Product of two similarity versors has support only on the 12-dim
    subspace (1 scalar, 7 bivectors, 4 quadvectors); complementary
    coefficients are exactly zero."""
    from coopga.groups import VERSOR_IDX, exp_versor, random_group_bivector

    rng = np.random.default_rng(5)
    comp = np.setdiff1d(np.arange(32), VERSOR_IDX)
    for _ in range(200):
        a = exp_versor(random_group_bivector(rng, "S"))
        b = exp_versor(random_group_bivector(rng, "S"))
        prod = K.gp(a.c, b.c)
        assert np.all(prod[comp] == 0.0)


def test_similarity_component_counts():
    """A similarity bivector has 7 coordinates; a similarity versor has 12
    components: 1 scalar, 7 bivector, and 4 quadvector."""
    from coopga.groups import SIM_BIVECTOR_BASIS, VERSOR_IDX

    assert SIM_BIVECTOR_BASIS.shape[1] == 7
    assert np.all(K.GRADES[np.nonzero(np.any(SIM_BIVECTOR_BASIS != 0, axis=1))[0]] == 2)
    assert len(VERSOR_IDX) == 12
    grades = K.GRADES[VERSOR_IDX]
    assert (np.sum(grades == 0), np.sum(grades == 2), np.sum(grades == 4)) == (1, 7, 4)
    # every structure constant of the closed subalgebra is +-1
    from coopga.groups import SIM_PRODUCT_TENSOR

    vals = np.unique(np.abs(SIM_PRODUCT_TENSOR[SIM_PRODUCT_TENSOR != 0.0]))
    assert np.array_equal(vals, [1.0])


def _fd_columns(f, t0, h=1e-6):
    cols = []
    for j, tj in enumerate(np.atleast_1d(t0)):
        tp = np.array(np.atleast_1d(t0), dtype=float)
        tm = tp.copy()
        tp[j] += h
        tm[j] -= h
        cols.append((f(tp).c - f(tm).c) / (2 * h))
    return np.stack(cols, axis=1)


def test_jacobian_normalize_constant_is_zero():
    X = e1 + 0.3 * Multivector.basis("e2")
    J = MultivectorJacobian.zero(2)
    out = jacobian_normalize(X, J)
    assert np.all(out.m == 0.0)
    out = jacobian_inverse(X, J)
    assert np.all(out.m == 0.0)


def test_jacobian_normalize_matches_fd_on_vector_family():
    def family(t):
        return e1 + float(t[0]) * e2

    t0 = np.array([0.7])
    X = family(t0)
    Jx = MultivectorJacobian(np.stack([e2.c], axis=1))
    analytic = jacobian_normalize(X, Jx).m
    fd = _fd_columns(lambda t: family(t).normalized(), t0)
    assert np.max(np.abs(analytic - fd)) <= 1e-6

    analytic_inv = jacobian_inverse(X, Jx).m
    fd_inv = _fd_columns(lambda t: family(t).inverse(), t0)
    assert np.max(np.abs(analytic_inv - fd_inv)) <= 1e-6


def test_jacobian_normalize_matches_fd_on_rotor_family():
    from coopga.groups import GroupBivector, exp_versor

    def rotor(t):
        coords = np.zeros(7)
        coords[:3] = t
        return exp_versor(GroupBivector("R", coords)).mv * 2.0  # denormalized

    rng = np.random.default_rng(6)
    for _ in range(20):
        t0 = rng.normal(size=3) * 0.8
        X = rotor(t0)
        Jx = MultivectorJacobian(_fd_columns(rotor, t0, h=1e-7))
        analytic = jacobian_normalize(X, Jx).m
        fd = _fd_columns(lambda t: rotor(t).normalized(), t0)
        denom = max(1.0, np.max(np.abs(fd)))
        assert np.max(np.abs(analytic - fd)) / denom <= 1e-6

        analytic_inv = jacobian_inverse(X, Jx).m
        fd_inv = _fd_columns(lambda t: rotor(t).inverse(), t0)
        assert np.max(np.abs(analytic_inv - fd_inv)) / denom <= 1e-6

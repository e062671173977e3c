"""Scalar quaternion algebra tests."""

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qharm.quaternion import (
    DEFAULT_AXIS,
    I,
    J,
    K,
    ONE,
    FrequencyAxis,
    Quaternion,
    axis_commutator_sign,
    qconj,
    qexp_axis,
    qinv,
    qmul,
    qnorm,
)

UNITS = {"1": ONE, "i": I, "j": J, "k": K}

# Full multiplication table over the basis units, exact in floats.
TABLE = {
    ("1", "1"): ONE, ("1", "i"): I, ("1", "j"): J, ("1", "k"): K,
    ("i", "1"): I, ("j", "1"): J, ("k", "1"): K,
    ("i", "i"): -ONE, ("j", "j"): -ONE, ("k", "k"): -ONE,
    ("i", "j"): K, ("j", "i"): -K,
    ("j", "k"): I, ("k", "j"): -I,
    ("k", "i"): J, ("i", "k"): -J,
}


def components():
    return st.floats(min_value=-100.0, max_value=100.0, allow_nan=False)


def quaternions():
    return st.builds(Quaternion, components(), components(), components(), components())


class TestProductTable:
    @pytest.mark.parametrize("a,b", sorted(TABLE))
    def test_unit_products_exact(self, a, b):
        assert UNITS[a] * UNITS[b] == TABLE[(a, b)]

    def test_triple_product(self):
        assert I * J * K == -ONE

    def test_identity_left_and_right(self):
        q = Quaternion(0.3, -1.2, 4.0, 0.7)
        assert qmul(q, ONE) == q
        assert qmul(ONE, q) == q

    def test_mixed_expansion(self):
        assert (ONE + I) * (ONE + J) == Quaternion(1.0, 1.0, 1.0, 1.0)


class TestConjugate:
    def test_real_self_conjugate(self):
        assert qconj(ONE) == ONE

    def test_pure_negates(self):
        assert qconj(I + J + K) == -(I + J + K)

    def test_anti_homomorphism_example(self):
        lhs = qconj((ONE + I) * (ONE + J))
        rhs = qconj(ONE + J) * qconj(ONE + I)
        assert lhs == rhs == Quaternion(1.0, -1.0, -1.0, -1.0)

    @given(quaternions(), quaternions())
    def test_anti_homomorphism(self, a, b):
        lhs = qconj(qmul(a, b))
        rhs = qmul(qconj(b), qconj(a))
        assert (lhs - rhs).norm() <= 1e-12 * max(1.0, a.norm() * b.norm())

    @given(quaternions())
    def test_conj_times_self_is_norm_squared(self, q):
        p = qmul(qconj(q), q)
        assert abs(p.w - q.norm_squared()) <= 1e-12 * max(1.0, q.norm_squared())
        assert p.vector_norm() <= 1e-12 * max(1.0, q.norm_squared())


class TestNorm:
    def test_zero(self):
        assert qnorm(Quaternion()) == 0.0

    def test_sqrt3(self):
        assert qnorm(I + J + K) == pytest.approx(math.sqrt(3.0), abs=1e-15)

    def test_positive_sequence_coefficient(self):
        coeff = (2 * I - J - K) / 2
        assert qnorm(coeff) == pytest.approx(math.sqrt(6.0) / 2.0, abs=1e-15)

    @given(quaternions(), quaternions())
    def test_multiplicative(self, a, b):
        lhs = qnorm(qmul(a, b))
        rhs = qnorm(a) * qnorm(b)
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, rhs)


class TestInverse:
    def test_one(self):
        assert qinv(ONE) == ONE

    def test_unit_pure(self):
        assert qinv(J) == -J

    def test_one_plus_i(self):
        assert qinv(ONE + I) == Quaternion(0.5, -0.5, 0.0, 0.0)

    def test_zero_raises(self):
        with pytest.raises(ValueError):
            qinv(Quaternion())

    @given(quaternions())
    def test_right_inverse(self, q):
        if q.norm() < 1e-3:
            return
        p = qmul(q, qinv(q))
        assert (p - ONE).norm() <= 1e-12 * max(1.0, q.norm())


class TestAxisExponential:
    def test_theta_zero(self):
        assert qexp_axis(DEFAULT_AXIS, 0.0) == ONE

    def test_theta_half_pi(self):
        q = qexp_axis(DEFAULT_AXIS, math.pi / 2.0)
        assert (q - DEFAULT_AXIS.mu).norm() <= 1e-15

    def test_theta_third_pi(self):
        q = qexp_axis(DEFAULT_AXIS, math.pi / 3.0)
        expected = Quaternion(0.5, 0.5, 0.5, 0.5)
        assert (q - expected).norm() <= 1e-15

    def test_default_axis_squares_to_minus_one(self):
        mu = DEFAULT_AXIS.mu
        assert (mu * mu + ONE).norm() <= 1e-15

    @given(
        st.floats(min_value=-10.0, max_value=10.0),
        st.floats(min_value=-10.0, max_value=10.0),
    )
    def test_additivity(self, t1, t2):
        lhs = qexp_axis(DEFAULT_AXIS, t1) * qexp_axis(DEFAULT_AXIS, t2)
        rhs = qexp_axis(DEFAULT_AXIS, t1 + t2)
        assert (lhs - rhs).norm() <= 1e-12

    @given(st.floats(min_value=-10.0, max_value=10.0))
    def test_unit_norm(self, theta):
        assert abs(qexp_axis(DEFAULT_AXIS, theta).norm() - 1.0) <= 1e-12

    @settings(max_examples=50)
    @given(quaternions(), st.floats(min_value=-10.0, max_value=10.0))
    def test_orthogonal_pure_flips_exponential(self, q, theta):
        # A pure quaternion orthogonal to the axis anticommutes with it, so it
        # slides through the exponential while flipping the angle sign.
        mu = DEFAULT_AXIS.mu
        dot = q.x * mu.x + q.y * mu.y + q.z * mu.z
        a = Quaternion(0.0, q.x - dot * mu.x, q.y - dot * mu.y, q.z - dot * mu.z)
        lhs = a * qexp_axis(DEFAULT_AXIS, theta)
        rhs = qexp_axis(DEFAULT_AXIS, -theta) * a
        assert (lhs - rhs).norm() <= 1e-12 * max(1.0, a.norm())


class TestCommutatorSign:
    def test_parallel_commutes(self):
        assert axis_commutator_sign(I + J + K, DEFAULT_AXIS) == "commutes"

    def test_orthogonal_anticommutes(self):
        coeff = (2 * I - J - K) / 2
        assert axis_commutator_sign(coeff, DEFAULT_AXIS) == "anticommutes"

    def test_generic_neither(self):
        assert axis_commutator_sign(I, DEFAULT_AXIS) == "neither"

    def test_scalar_part_rejected(self):
        with pytest.raises(ValueError):
            axis_commutator_sign(ONE + I, DEFAULT_AXIS)


class TestFrequencyAxis:
    def test_default_components(self):
        s = 1.0 / math.sqrt(3.0)
        assert DEFAULT_AXIS.components() == (s, s, s)

    def test_non_pure_rejected(self):
        with pytest.raises(ValueError):
            FrequencyAxis(Quaternion(0.5, 1.0, 0.0, 0.0))

    def test_non_unit_rejected(self):
        with pytest.raises(ValueError):
            FrequencyAxis(Quaternion(0.0, 2.0, 0.0, 0.0))


class TestRealEmbedding:
    def test_mixed_arithmetic(self):
        q = Quaternion(1.0, 2.0, 3.0, 4.0)
        assert 2 * q == Quaternion(2.0, 4.0, 6.0, 8.0)
        assert q * 2 == 2 * q
        assert q / 2 == Quaternion(0.5, 1.0, 1.5, 2.0)
        assert q + 1 == Quaternion(2.0, 2.0, 3.0, 4.0)
        assert 1 - q == Quaternion(0.0, -2.0, -3.0, -4.0)

    def test_real_commutes_with_everything(self):
        q = Quaternion(0.3, -0.4, 0.5, 0.6)
        assert 3.5 * q == q * 3.5

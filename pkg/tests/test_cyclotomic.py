import random
from fractions import Fraction

import pytest

from supermodular.cyclotomic import (
    CycNumber,
    CycPolynomial,
    cyclotomic_polynomial,
    euler_phi,
    gauss_alpha,
    root_of_unity,
)


def frac(*values):
    return tuple(Fraction(v) for v in values)


def test_cyclotomic_polynomial_small_cases():
    assert cyclotomic_polynomial(1).coeffs == frac(-1, 1)
    assert cyclotomic_polynomial(2).coeffs == frac(1, 1)
    assert cyclotomic_polynomial(8).coeffs == frac(1, 0, 0, 0, 1)
    assert cyclotomic_polynomial(12).coeffs == frac(1, 0, -1, 0, 1)


def test_cyclotomic_polynomial_divides_xn_minus_1():
    for n in range(1, 65):
        phi_n = cyclotomic_polynomial(n)
        assert phi_n.degree == euler_phi(n)
        assert phi_n.is_integral()
        xn = CycPolynomial.from_ints([-1] + [0] * (n - 1) + [1])
        quot, rem = xn.divmod(phi_n)
        assert rem.is_zero()
        assert quot.is_integral()


def test_root_of_unity_basics():
    i = root_of_unity(4, 1)
    assert i * i == CycNumber.from_rational(-1, 4)
    for n in (1, 2, 5, 8, 12):
        assert root_of_unity(n, n) == CycNumber.one(n)
        assert root_of_unity(n, 0) == CycNumber.one(n)
    z = root_of_unity(8, 2)
    assert z * z == CycNumber.from_rational(-1, 8)


def test_arithmetic_examples():
    i = root_of_unity(4)
    assert i.conjugate() == -i
    assert i.conjugate() == root_of_unity(4, 3)
    for n, k in ((5, 2), (8, 3), (12, 7)):
        assert root_of_unity(n, k).invert() == root_of_unity(n, n - k)
    z8 = root_of_unity(8)
    lhs = (CycNumber.one(8) + z8) * (CycNumber.one(8) - z8)
    rhs = CycNumber.one(8) - z8 * z8
    assert lhs == rhs
    assert abs(lhs.approx() - rhs.approx()) < 1e-12


def test_invert_zero_raises():
    with pytest.raises(ZeroDivisionError):
        CycNumber.zero(8).invert()


def _random_element(rng, n, span=6):
    phi = euler_phi(n)
    return CycNumber(n, [Fraction(rng.randint(-span, span), rng.randint(1, 4)) for _ in range(phi)])


def test_field_axioms_random():
    rng = random.Random(20240817)
    conductors = [1, 3, 4, 5, 8, 9, 12, 16]
    for _ in range(1000):
        n = rng.choice(conductors)
        a, b, c = (_random_element(rng, n) for _ in range(3))
        assert (a + b) + c == a + (b + c)
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c
        if not a.is_zero():
            assert a * a.invert() == CycNumber.one(n)


def test_conjugation_is_ring_homomorphism():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.choice([4, 8, 12, 15])
        a, b = _random_element(rng, n), _random_element(rng, n)
        assert (a + b).conjugate() == a.conjugate() + b.conjugate()
        assert (a * b).conjugate() == a.conjugate() * b.conjugate()
        assert a.conjugate().conjugate() == a


def test_approx_tracks_arithmetic():
    rng = random.Random(99)
    for _ in range(200):
        n = rng.choice([8, 12, 16])
        phi = euler_phi(n)
        a = CycNumber(n, [Fraction(rng.randint(-1000, 1000)) for _ in range(phi)])
        b = CycNumber(n, [Fraction(rng.randint(-1000, 1000)) for _ in range(phi)])
        prod = (a * b).approx()
        direct = a.approx() * b.approx()
        scale = max(1.0, abs(direct))
        assert abs(prod - direct) / scale < 1e-9


def test_mixed_conductor_embedding():
    z3 = root_of_unity(3)
    z4 = root_of_unity(4)
    assert z3 * z4 == root_of_unity(12, 7)
    assert z3 + z4 == root_of_unity(12, 4) + root_of_unity(12, 3)


def test_gauss_alpha_exact_square():
    for m in range(1, 17):
        alpha = gauss_alpha(m)
        assert alpha * alpha == CycNumber.from_rational(Fraction(2, m + 1), alpha.conductor)


def test_gauss_alpha_values():
    assert gauss_alpha(1) == CycNumber.one(16)
    assert abs(gauss_alpha(1).approx() - 1.0) < 1e-12
    a3 = gauss_alpha(3)
    assert a3 * a3 == CycNumber.from_rational(Fraction(1, 2), 32)
    assert abs(a3.approx().real - 0.7071067811865476) < 1e-9


def test_serialization_roundtrip():
    rng = random.Random(3)
    for _ in range(50):
        a = _random_element(rng, rng.choice([4, 8, 15]))
        assert CycNumber.from_json_dict(a.to_json_dict()) == a
    payload = root_of_unity(8, 3).to_json_dict()
    assert payload["conductor"] == 8
    assert all(isinstance(num, str) and isinstance(den, str) for num, den in payload["coeffs"])


def test_hash_consistent_with_equality():
    a = root_of_unity(12, 4)  # a primitive cube root
    b = root_of_unity(3, 1).embed(12)
    assert a == b and hash(a) == hash(b)
    assert CycNumber.one(5) == CycNumber.one(7)

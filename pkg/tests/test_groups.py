import random
from fractions import Fraction

import pytest

from supermodular.cyclotomic import CycNumber, root_of_unity
from supermodular.exactmat import CycMatrix
from supermodular.groups import (
    Exceeded,
    ModNCarrier,
    central_quotient,
    close,
    quotient_by_center_order,
    sl2_order,
    sl2_table,
)


def test_identity_generator_gives_trivial_group():
    table = close([CycMatrix.identity(8, 2)])
    assert table.order == 1
    assert table.check_words()


def brute_force_sl2_mod2():
    found = []
    for a in range(2):
        for b in range(2):
            for c in range(2):
                for d in range(2):
                    if (a * d - b * c) % 2 == 1:
                        found.append((a, b, c, d))
    return found


def test_sl2_mod2_matches_brute_force():
    assert sl2_table(2).order == len(brute_force_sl2_mod2()) == 6


def test_sl2_orders_match_formula():
    for n in range(2, 17):
        assert sl2_table(n).order == sl2_order(n), n


def test_sl2_projective_mod5():
    assert sl2_table(5, projective=True).order == 60


def test_projective_hat_closure_m1(psu2_data):
    hd = psu2_data(1)
    table = close([hd.s_hat, hd.t2_matrix()], projective=True)
    assert table.order == 16


def test_words_reproduce_elements(psu2_data):
    assert sl2_table(3).check_words()
    hd = psu2_data(1)
    table = close([hd.s_hat, hd.t2_matrix()], projective=True)
    assert table.check_words()


def test_abelian_group_structure():
    g = CycMatrix.diagonal(8, [root_of_unity(8, 1), root_of_unity(8, 3)])
    table = close([g])
    assert table.order == 8
    assert len(table.center_indices()) == table.order
    assert table.derived_subgroup().order == 1


def test_inverses_and_element_orders():
    table = sl2_table(2)  # symmetric group on three letters
    inv = table.inverses()
    for i in range(table.order):
        assert table.mult_idx(i, int(inv[i])) == 0
    orders = sorted(table.element_order(i) for i in range(table.order))
    assert orders == [1, 2, 2, 2, 3, 3]
    fp = table.fingerprint()
    assert fp.exponent == 6 and fp.center_order == 1 and fp.derived_order == 3


def test_derived_subgroup_quaternion_at_m2(psu2_data):
    hd = psu2_data(2)
    table = close([hd.s_hat, hd.t2_matrix()])
    derived = table.derived_subgroup()
    fp = derived.fingerprint()
    assert fp.order == 8
    assert dict(fp.order_histogram) == {1: 1, 2: 1, 4: 6}  # quaternion profile


def test_derived_subgroup_sl2_5_at_m4(psu2_data):
    hd = psu2_data(4)
    table = close([hd.s_hat, hd.t2_matrix()])
    derived = table.derived_subgroup()
    assert derived.order == 120
    assert derived.fingerprint() == sl2_table(5).fingerprint()


def test_center_quotients(psu2_data):
    for m, expected in ((1, 16), (2, 12)):
        hd = psu2_data(m)
        table = close([hd.s_hat, hd.t2_matrix()])
        assert quotient_by_center_order(table) == expected
        quo = central_quotient(table)
        assert quo.order == expected


def test_central_quotient_of_sl2_3():
    quo = central_quotient(sl2_table(3))
    fp = quo.fingerprint()
    # the quotient is the alternating group on four letters
    assert fp.order == 12 and fp.center_order == 1 and fp.derived_order == 4
    assert dict(fp.order_histogram) == {1: 1, 2: 3, 3: 8}


def test_closure_set_independent_of_generator_order(psu2_data):
    hd = psu2_data(1)
    a = close([hd.s_hat, hd.t2_matrix()])
    b = close([hd.t2_matrix(), hd.s_hat])
    assert a.order == b.order
    assert set(a.key2idx) == set(b.key2idx)


def test_closure_determinism_random_modn():
    rng = random.Random(11)
    for _ in range(100):
        n = rng.choice([2, 3, 4, 5, 6])
        carrier = ModNCarrier(n)
        s = (0, (-1) % n, 1, 0)
        t = (1, 1, 0, 1)
        word = [rng.choice([s, t]) for _ in range(3)]
        g = (1, 0, 0, 1)
        for w in word:
            g = carrier.mul(g, w)
        a = close([s, g], carrier=carrier)
        b = close([g, s], carrier=carrier)
        assert set(a.key2idx) == set(b.key2idx)


def test_projective_canonical_invariance_under_scalars(psu2_data):
    rng = random.Random(12)
    hd = psu2_data(1)
    mats = [hd.s_hat, hd.t2_matrix(), hd.s_hat @ hd.t2_matrix()]
    for m in mats:
        for _ in range(20):
            scalar = root_of_unity(16, rng.randrange(16)) * Fraction(rng.randint(1, 7), rng.randint(1, 7))
            assert m.scale(scalar).projective_canonical() == m.projective_canonical()


def test_exceeded_on_infinite_group():
    shear = CycMatrix.from_entries(
        1, [[CycNumber.one(1), CycNumber.one(1)], [CycNumber.zero(1), CycNumber.one(1)]]
    )
    result = close([shear], cap=50)
    assert isinstance(result, Exceeded)
    assert result.cap == 50 and result.found == 51


def test_singular_generators_rejected():
    singular = CycMatrix.from_entries(
        8, [[CycNumber.one(8), CycNumber.one(8)], [CycNumber.one(8), CycNumber.one(8)]]
    )
    with pytest.raises(ValueError):
        close([singular])
    with pytest.raises(ValueError):
        close([(1, 1, 1, 1)], carrier=ModNCarrier(4))


def test_subgroup_and_normal_closure():
    table = sl2_table(3)
    t_idx = table.generator_indices()[1]
    cyclic = table.subgroup_closure([t_idx])
    assert len(cyclic) == 3
    normal, _ = table.normal_closure([t_idx])
    assert len(normal) > len(cyclic)
    assert len(normal) % len(cyclic) == 0


def test_table_report(psu2_data):
    hd = psu2_data(1)
    table = close([hd.s_hat, hd.t2_matrix()])
    report = table.as_report()
    assert report["order"] == 32 and report["generators"] == 2

import math

import pytest

from supermodular.cyclotomic import CycNumber, root_of_unity
from supermodular.exactmat import CycMatrix
from supermodular.modular_data import (
    ModularData,
    find_fermions,
    transparent_objects,
    verify_modular_axioms,
)


def test_su2_shape_and_unit(su2_data):
    for m in (1, 2):
        md = su2_data(m)
        assert md.rank == 4 * m + 3
        assert md.conductor == 16 * (m + 1)
        assert md.s_tilde.entry(0, 0) == CycNumber.one(md.conductor)
        assert md.duality == tuple(range(md.rank))


def test_su2_t_order(su2_data):
    assert su2_data(1).t_order() == 32
    assert su2_data(2).t_order() == 48


def test_su2_quantum_dimension(su2_data):
    md = su2_data(1)
    # d_1 = sin(2pi/8)/sin(pi/8) = 2cos(pi/8)
    d1 = md.dim(1)
    c = md.conductor
    sin1 = root_of_unity(c, 2) - root_of_unity(c, -2)
    sin2 = root_of_unity(c, 4) - root_of_unity(c, -4)
    assert d1 * sin1 == sin2
    assert abs(d1.approx().real - 1.8477590650225735) < 1e-12
    assert abs(d1.approx().imag) < 1e-12


def test_su2_first_row_real(su2_data):
    md = su2_data(2)
    for j in range(md.rank):
        d = md.dim(j)
        assert d.conjugate() == d


def test_su2_symmetric(su2_data):
    md = su2_data(2)
    assert md.s_tilde == md.s_tilde.transpose()


def test_axioms_hold(su2_data):
    for m in (1, 2, 3):
        report = verify_modular_axioms(su2_data(m))
        assert report.all_ok, f"m={m}: {report}"


def test_axioms_detect_perturbation(su2_data):
    md = su2_data(1)
    entries = md.s_tilde.entries()
    entries[0][1] = entries[0][1] + CycNumber.one(md.conductor)
    entries[1][0] = entries[0][1]
    broken = ModularData(
        rank=md.rank,
        duality=md.duality,
        s_tilde=CycMatrix.from_entries(md.conductor, entries),
        t_diag=md.t_diag,
        conductor=md.conductor,
    )
    report = verify_modular_axioms(broken)
    assert not report.s_squared_ok
    assert not report.all_ok


def test_psu2_m1_matches_closed_form(psu2_data):
    hd = psu2_data(1)
    n = hd.conductor
    assert n == 16
    s00 = hd.s_hat.entry(0, 0)
    s01 = hd.s_hat.entry(0, 1)
    s11 = hd.s_hat.entry(1, 1)
    sqrt2 = root_of_unity(n, 2) + root_of_unity(n, -2)
    one = CycNumber.one(n)
    # S = (1/sqrt(4+2*sqrt(2))) * [[1, 1+sqrt2], [1+sqrt2, -1]]
    assert s01 == s00 * (one + sqrt2)
    assert s11 == -s00
    assert s00 * s00 * (CycNumber.from_rational(4, n) + sqrt2 * 2) == one
    # T = diag(1, i) so T^2 = diag(1, -1)
    assert hd.t_hat[0] == one
    assert hd.t_hat[1] == root_of_unity(n, 4)
    assert hd.t_hat[1] * hd.t_hat[1] == -one


def test_psu2_m0_trivial(psu2_data):
    hd = psu2_data(0)
    assert hd.size == 1
    assert hd.s_hat.entry(0, 0) == CycNumber.one(hd.conductor)
    assert hd.t_hat[0] * hd.t_hat[0] == CycNumber.one(hd.conductor)


def test_psu2_unitary_symmetric(psu2_data):
    for m in (1, 2, 3, 4):
        hd = psu2_data(m)
        ident = CycMatrix.identity(hd.conductor, hd.size)
        assert hd.s_hat @ hd.s_hat.conj_transpose() == ident
        assert hd.s_hat == hd.s_hat.transpose()


def test_psu2_t2_order_divides(psu2_data):
    for m in (1, 2, 3, 4):
        hd = psu2_data(m)
        t2 = hd.t2_matrix()
        assert t2.power(2 * (m + 1)) == CycMatrix.identity(hd.conductor, hd.size)


def test_transparent_objects(su2_data):
    md = su2_data(1)
    assert transparent_objects(md) == (0,)
    sub = md.restrict([0, 2, 4, 6])
    assert transparent_objects(sub) == (0, 3)  # unit and the fermion slot
    rank1 = md.restrict([0])
    assert transparent_objects(rank1) == (0,)


def test_find_fermions(su2_data):
    for m in (1, 2):
        md = su2_data(m)
        assert find_fermions(md) == (4 * m + 2,)
    md2 = su2_data(2)
    theta10 = md2.t_diag[10]
    assert theta10 == CycNumber.from_rational(-1, md2.conductor)
    assert find_fermions(su2_data(1).restrict([0])) == ()


def test_find_fermions_on_degenerate_restriction(su2_data):
    sub = su2_data(1).restrict([0, 2, 4, 6])
    assert find_fermions(sub) == (3,)


def test_restrict_requires_duality_closure(su2_data):
    md = su2_data(1)
    sub = md.restrict([0, 3])  # self-dual labels, fine
    assert sub.rank == 2
    with_dual = ModularData(
        rank=3,
        duality=(0, 2, 1),
        s_tilde=md.s_tilde.submatrix([0, 1, 2], [0, 1, 2]),
        t_diag=md.t_diag[:3],
        conductor=md.conductor,
    )
    with pytest.raises(ValueError):
        with_dual.restrict([0, 1])


def test_json_roundtrip(su2_data, psu2_data):
    md = su2_data(1)
    again = ModularData.from_json_dict(md.to_json_dict())
    assert again.s_tilde == md.s_tilde
    assert again.t_diag == md.t_diag
    assert again.duality == md.duality
    hd = psu2_data(1)
    hd2 = type(hd).from_json_dict(hd.to_json_dict())
    assert hd2.s_hat == hd.s_hat
    assert hd2.t_hat == hd.t_hat
    assert hd2.name == hd.name


def test_global_dimension(su2_data):
    md = su2_data(1)
    d2 = md.global_dim_squared()
    # sum of squared dims = 4 / sin^2(pi/8) = 16 + 8*sqrt(2)
    sqrt2 = root_of_unity(32, 4) + root_of_unity(32, -4)
    assert d2 == CycNumber.from_rational(16, 32) + sqrt2 * 8
    assert abs(d2.approx().real - (16 + 8 * math.sqrt(2))) < 1e-9

import random

import pytest
from hypothesis import given, strategies as st

from covermonoid.abelian_group import FiniteAbelianGroup, enumerate_surjections, hom_from_values
from covermonoid.cover_monoid import Ray, build_cover_lattice, extremal_rays, h_of_ray, pardini_ray
from covermonoid.errors import AlgebraError
from covermonoid.graded_algebra import (
    BinomialRule,
    MultiplicationTable,
    ScalarField,
    UnitCharacter,
    H_of_table,
    from_ray,
    h_of_table,
    in_main_component,
    is_twist_equivalent,
    minimum_generating_degrees,
    normal_form,
    quotient_ring_structure_constants,
    reduce_mod_H,
    standard_monomials,
    validate,
    zero_table,
)

GROUPS = ["2", "3", "4", "2,2", "5", "6"]


def identity_ray(M: FiniteAbelianGroup) -> Ray:
    return pardini_ray(hom_from_values(M, M, M.generators(), M.generators()))


def constant_table(M, scalars, value):
    return MultiplicationTable.from_function(M, scalars, lambda m, n: scalars(value))


def test_scalar_fields():
    assert ScalarField.parse("QQ") == ScalarField(0)
    assert ScalarField.parse("gf(7)") == ScalarField(7)
    assert str(ScalarField(7)) == "GF(7)"
    F = ScalarField(7)
    assert F.to_text(F("1/2")) == "4"
    assert ScalarField(0).to_text(ScalarField(0)("6/4")) == "3/2"
    assert F.power(F.zero, 0) == F.one
    with pytest.raises(AlgebraError):
        ScalarField(4)
    with pytest.raises(AlgebraError):
        ScalarField.parse("reals")
    with pytest.raises(AlgebraError):
        F("1/7")


def test_validate(gf7):
    M = FiniteAbelianGroup((4,))
    assert validate(constant_table(M, gf7, 1)).ok
    two = M.element([2])
    broken = MultiplicationTable.from_function(
        M, gf7, lambda m, n: gf7.zero if n.is_zero() and m == two else gf7.one)
    report = validate(broken)
    assert not report.ok and report.rule == "unit"
    assert report.describe().startswith("unit fails")


def test_from_ray(gf7):
    Z2 = FiniteAbelianGroup((2,))
    zero = Ray.zero(build_cover_lattice(Z2))
    assert from_ray(zero, gf7) == constant_table(Z2, gf7, 1)
    ray = identity_ray(Z2)
    one = Z2.element([1])
    table = from_ray(ray, gf7)
    assert table.psi(one, one) == gf7.zero
    assert table.psi(one, Z2.zero) == gf7.one
    assert from_ray(ray.scale(2), gf7) == table


@pytest.mark.parametrize("spec", GROUPS)
def test_twisted_ray_tables_are_valid(spec, gf7):
    M = FiniteAbelianGroup.parse(spec)
    rng = random.Random(len(spec))
    for ray in extremal_rays(M):
        table = from_ray(ray, gf7, UnitCharacter.random(M, gf7, rng))
        assert validate(table).ok
        assert h_of_table(table) == h_of_ray(ray)


def test_H_and_h_of_tables(gf7):
    M = FiniteAbelianGroup((4,))
    torsor = constant_table(M, gf7, 1)
    assert H_of_table(torsor) == frozenset(M.elements())
    assert h_of_table(torsor) == 0
    zero = zero_table(M, gf7)
    assert H_of_table(zero) == frozenset({M.zero})
    assert h_of_table(zero) == 3
    assert minimum_generating_degrees(zero) == frozenset(M.nonzero_elements())
    assert minimum_generating_degrees(from_ray(identity_ray(M), gf7)) == frozenset({M.element([1])})


def test_minimum_generating_degrees_of_two_pardini_rays(gf7):
    V = FiniteAbelianGroup((2, 2))
    Z2 = FiniteAbelianGroup((2,))
    one, zero = Z2.element([1]), Z2.zero
    first = pardini_ray(hom_from_values(V, Z2, V.generators(), [one, zero]))
    second = pardini_ray(hom_from_values(V, Z2, V.generators(), [zero, one]))
    degrees = minimum_generating_degrees(from_ray(first + second, gf7))
    assert {x.coords for x in degrees} == {(1, 0), (0, 1)}


def test_minimum_generating_degrees_needs_trivial_H(gf7):
    with pytest.raises(AlgebraError):
        minimum_generating_degrees(constant_table(FiniteAbelianGroup((3,)), gf7, 1))


def test_reduce_mod_H(gf7):
    Z4, Z2 = FiniteAbelianGroup((4,)), FiniteAbelianGroup((2,))
    (eta,) = enumerate_surjections(Z4, Z2)
    table = from_ray(pardini_ray(eta), gf7)
    H = {Z4.zero, Z4.element([2])}
    assert reduce_mod_H(table, H) == from_ray(identity_ray(Z2), gf7)
    assert h_of_table(reduce_mod_H(table, {Z4.zero})) == h_of_table(table)
    torsor = constant_table(Z4, gf7, 1)
    assert reduce_mod_H(torsor, H) == constant_table(Z2, gf7, 1)


def test_reduce_mod_H_needs_a_split_torsor(gf7):
    Z4 = FiniteAbelianGroup((4,))
    with pytest.raises(AlgebraError):
        reduce_mod_H(from_ray(identity_ray(Z4), gf7), {Z4.element([2])})
    twisted = constant_table(Z4, gf7, 1).twist(UnitCharacter(Z4, gf7, tuple(gf7(v) for v in (1, 2, 3, 4))))
    with pytest.raises(AlgebraError):
        reduce_mod_H(twisted, {Z4.element([2])})


@given(st.sampled_from(GROUPS), st.sampled_from([ScalarField(0), ScalarField(7), ScalarField(11)]), st.randoms())
def test_twists_are_recognised(spec, scalars, rng):
    M = FiniteAbelianGroup.parse(spec)
    for ray in extremal_rays(M):
        plain = from_ray(ray, scalars)
        twisted = plain.twist(UnitCharacter.random(M, scalars, rng))
        u = is_twist_equivalent(plain, twisted)
        assert u is not None
        assert plain.twist(u) == twisted


def test_different_zero_patterns_are_not_twists(gf7):
    M = FiniteAbelianGroup((3,))
    first, second = extremal_rays(M)
    assert is_twist_equivalent(from_ray(first, gf7), from_ray(second, gf7)) is None


def test_non_coboundary_is_not_a_twist():
    # psi_{1,1} = 2 on Z/2 over QQ would need u_1^2 = 2
    QQ = ScalarField(0)
    Z2 = FiniteAbelianGroup((2,))
    torsor = constant_table(Z2, QQ, 1)
    other = MultiplicationTable.from_function(Z2, QQ, lambda m, n: QQ(2) if m == n == Z2.element([1]) else QQ.one)
    assert validate(other).ok
    assert is_twist_equivalent(torsor, other) is None


@pytest.mark.parametrize("spec", GROUPS)
def test_ray_tables_lie_on_the_main_component(spec, gf7):
    M = FiniteAbelianGroup.parse(spec)
    assert in_main_component(constant_table(M, gf7, 1)) == (True, Ray.zero(build_cover_lattice(M)))
    for ray in extremal_rays(M):
        member, witness = in_main_component(from_ray(ray, gf7))
        assert member and witness.support == ray.support


def test_table_off_the_main_component(gf7):
    # v1*v1, v7*v5 and v3*v3 land in even degrees, so every triple product vanishes
    M = FiniteAbelianGroup((8,))
    nonzero = {frozenset({1}), frozenset({5, 7}), frozenset({3})}

    def psi(m, n):
        a, b = m.coords[0], n.coords[0]
        return gf7.one if a == 0 or b == 0 or frozenset({a, b}) in nonzero else gf7.zero

    table = MultiplicationTable.from_function(M, gf7, psi)
    assert validate(table).ok
    assert in_main_component(table) == (False, None)


def test_table_json(gf7):
    table = from_ray(identity_ray(FiniteAbelianGroup((3,))), gf7)
    data = table.to_json()
    assert data["field"] == "GF(7)" and data["group"] == "3"
    assert MultiplicationTable.from_json(data) == table
    with pytest.raises(AlgebraError):
        MultiplicationTable.from_json({"group": "3", "entries": []})
    with pytest.raises(AlgebraError):
        MultiplicationTable.from_json({"group": "3", "field": "QQ", "entries": [["1"]]})


def test_standard_monomials():
    assert len(standard_monomials([(2, 0), (0, 5), (1, 3)])) == 8
    with pytest.raises(AlgebraError):
        standard_monomials([(2, 0)])


def test_normal_form_rewrites_by_weight(gf7):
    rules = [BinomialRule((2, 0), gf7(3), (0, 1))]
    assert normal_form(rules, (2, 1), gf7, (2, 1)) == (gf7(3), (0, 2))
    with pytest.raises(AlgebraError):
        normal_form(rules, (2, 0), gf7, (1, 2))


def test_quotient_ring_of_a_single_square_root(gf7):
    # k[s, t]/(s^2 - 3, t - s) graded by Z/2 with both generators in degree 1
    Z2 = FiniteAbelianGroup((2,))
    one = Z2.element([1])
    rules = [BinomialRule((0, 1), gf7.one, (1, 0)), BinomialRule((2, 0), gf7(3), (0, 0))]
    basis = {Z2.zero: (0, 0), one: (1, 0)}
    table = quotient_ring_structure_constants(Z2, one, one, rules, basis, gf7, (1, 2))
    assert table.psi(one, one) == gf7(3)
    assert validate(table).ok

import pytest
from hypothesis import given, strategies as st

from covermonoid.abelian_group import (
    FiniteAbelianGroup,
    GroupHomomorphism,
    abelian_groups_of_order,
    enumerate_elements,
    enumerate_surjections,
    hom_from_values,
    invariant_factors,
    is_elementary_power,
    is_isomorphic,
    is_quotient_of,
    normalize,
    order_of,
    presentation_group,
    quotient,
    recognize_two_generator_presentation,
    subgroup_generated,
)
from covermonoid.errors import GroupError
from covermonoid.two_degree import valid_presentations

PRESENTATIONS = list(valid_presentations(12))


def test_parse_and_spec(group):
    M = group("2, 4")
    assert M.factor_orders == (2, 4)
    assert M.spec == "2,4"
    assert M.size == 8
    assert group("1").size == 1
    assert str(group("3")) == "Z/3"


@pytest.mark.parametrize("bad", ["a", "2,x", "0", "4,1"])
def test_parse_rejects_bad_specs(group, bad):
    with pytest.raises(GroupError):
        group(bad)


def test_arithmetic(group):
    Z4 = group("4")
    three = Z4.element([3])
    assert (three + three).coords == (2,)
    assert order_of(Z4.element([2])) == 2
    assert (-three).coords == (1,)
    assert (3 * Z4.element([1])).coords == (3,)


def test_elements_are_lexicographic(group):
    assert [x.coords for x in enumerate_elements(group("2,2"))] == [(0, 0), (0, 1), (1, 0), (1, 1)]


def test_mixing_groups_fails(group):
    with pytest.raises(GroupError):
        group("4").element([1]) + group("2,2").element([1, 0])


def test_subgroup_generated(group):
    Z4 = group("4")
    assert {x.coords for x in subgroup_generated(Z4, [Z4.element([2])])} == {(0,), (2,)}
    assert subgroup_generated(Z4, []) == frozenset({Z4.zero})
    M = group("2,4")
    closure = subgroup_generated(M, [M.element([1, 1])])
    assert {x.coords for x in closure} == {(0, 0), (1, 1), (0, 2), (1, 3)}


def test_recognize_two_generator_presentation(group):
    V = group("2,2")
    assert recognize_two_generator_presentation(V, V.element([1, 0]), V.element([0, 1])) == (2, 0, 2)
    M = group("6,2")
    assert recognize_two_generator_presentation(M, M.element([1, 0]), M.element([1, 1])) == (2, 2, 6)
    Z4 = group("4")
    assert recognize_two_generator_presentation(Z4, Z4.element([1]), Z4.element([3])) == (1, 3, 4)


def test_recognize_rejects_non_generators(group):
    Z4 = group("4")
    with pytest.raises(GroupError):
        recognize_two_generator_presentation(Z4, Z4.element([2]), Z4.element([2]))
    with pytest.raises(GroupError):
        recognize_two_generator_presentation(Z4, Z4.zero, Z4.element([1]))
    V = group("2,2")
    with pytest.raises(GroupError):
        recognize_two_generator_presentation(V, V.element([1, 0]), V.element([1, 1]) + V.element([0, 1]))


@given(st.sampled_from(PRESENTATIONS))
def test_presentation_round_trip(datum):
    r, alpha, N = datum
    G, m, n = presentation_group(r, alpha, N)
    assert G.size == r * N
    assert r * m == alpha * n
    assert recognize_two_generator_presentation(G, m, n) == datum


@pytest.mark.parametrize("source, target, count", [("2", "2", 1), ("4", "2", 1), ("2,2", "2", 3), ("2,2", "4", 0)])
def test_surjection_counts(group, source, target, count):
    assert len(enumerate_surjections(group(source), group(target))) == count


@given(st.sampled_from(["4", "6", "2,2", "2,4", "3,3"]), st.sampled_from(["2", "3", "4", "2,2"]))
def test_surjections_are_surjective(source, target):
    M, Q = FiniteAbelianGroup.parse(source), FiniteAbelianGroup.parse(target)
    maps = enumerate_surjections(M, Q)
    assert bool(maps) == is_quotient_of(Q, M)
    for phi in maps:
        assert {phi(x) for x in M.elements()} == set(Q.elements())


def test_homomorphism_well_definedness(group):
    Z4, Z2 = group("4"), group("2")
    with pytest.raises(GroupError):
        GroupHomomorphism(Z2, Z4, (Z4.element([1]),))
    phi = hom_from_values(Z4, Z2, [Z4.element([1])], [Z2.element([1])])
    assert {x.coords for x in phi.kernel()} == {(0,), (2,)}
    with pytest.raises(GroupError):
        hom_from_values(Z2, Z4, [Z2.element([1])], [Z4.element([1])])


def test_invariant_factors_and_isomorphism(group):
    assert invariant_factors(group("2,3")) == (6,)
    assert invariant_factors(group("4,2")) == (2, 4)
    assert is_isomorphic(group("2,3"), group("6"))
    assert not is_isomorphic(group("2,2"), group("4"))
    assert [len(abelian_groups_of_order(n)) for n in (8, 12, 16)] == [3, 2, 5]


def test_normalize(group):
    assert normalize(group("2,3")).spec == "6"
    assert normalize(group("4,2,3")).spec == "2,12"
    assert normalize(group("2,2")).spec == "2,2"


def test_is_elementary_power(group):
    assert is_elementary_power(group("2,2")) == (2, 2)
    assert is_elementary_power(group("4")) is None
    assert is_elementary_power(group("3,3,3")) == (3, 3)


def test_quotient(group):
    Z4 = group("4")
    Q, projection = quotient(Z4, [Z4.element([2])])
    assert Q.factor_orders == (2,)
    assert projection(Z4.element([3])) == Q.element([1])

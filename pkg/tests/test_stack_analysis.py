import pytest

from covermonoid.abelian_group import FiniteAbelianGroup, hom_from_values
from covermonoid.cover_monoid import pardini_ray
from covermonoid.errors import AlgebraError, FanError, GroupError
from covermonoid.graded_algebra import MultiplicationTable, ScalarField, from_ray, zero_table
from covermonoid.stack_analysis import (
    Verdict,
    full_smooth_locus_fan,
    h_locus_membership,
    irreducibility_report,
    is_reducibility_certificate,
    reducibility_certificate,
    smooth_locus_fan,
    smoothness_verdict,
    theta2_fan,
)
from covermonoid.two_degree import lambda_delta


def identity_ray(M):
    return pardini_ray(hom_from_values(M, M, M.generators(), M.generators()))


@pytest.mark.parametrize("spec", ["2", "3", "2,2"])
def test_smooth_groups(group, spec):
    verdict = smoothness_verdict(group(spec))
    assert verdict.smooth
    assert verdict.witness is None and verdict.relation is None


def test_z4_is_singular(group):
    Z4 = group("4")
    verdict = smoothness_verdict(Z4)
    assert not verdict.smooth
    assert [x.coords for x in verdict.witness] == [(1,), (2,), (3,)]
    assert verdict.relation == "x_{1,2}*x_{3,3} - x_{2,3}*x_{1,1}"


@pytest.mark.parametrize("spec", ["5", "6", "2,4", "3,3"])
def test_larger_groups_are_singular(group, spec):
    assert not smoothness_verdict(group(spec)).smooth


def test_trivial_group_is_rejected(group):
    with pytest.raises(GroupError):
        smoothness_verdict(group("1"))
    with pytest.raises(GroupError):
        irreducibility_report(group("1"))


def test_reducibility_certificates(group):
    assert reducibility_certificate(group("2")) is None
    Z8 = group("8")
    assert is_reducibility_certificate(Z8, *(Z8.element([k]) for k in (2, 4, 6, 1)))
    assert not is_reducibility_certificate(Z8, *(Z8.element([k]) for k in (2, 4, 6, 0)))
    assert not is_reducibility_certificate(Z8, *(Z8.element([k]) for k in (2, 2, 6, 1)))
    V = group("2,2,2,2")
    assert is_reducibility_certificate(V, *V.generators())


@pytest.mark.parametrize("spec, verdict", [
    ("2", Verdict.IRREDUCIBLE),
    ("2,2", Verdict.IRREDUCIBLE),
    ("4", Verdict.IRREDUCIBLE),
    ("5", Verdict.UNKNOWN),
    ("6", Verdict.UNKNOWN),
    ("2,2,2", Verdict.UNKNOWN),
    ("8", Verdict.REDUCIBLE),
    ("9", Verdict.REDUCIBLE),
])
def test_irreducibility_verdicts(group, spec, verdict):
    M = group(spec)
    report = irreducibility_report(M)
    assert report.verdict == verdict
    if verdict == Verdict.REDUCIBLE:
        assert is_reducibility_certificate(M, *report.certificate)
    else:
        assert report.certificate is None


def test_h_loci_of_tables(gf7):
    _, Delta = lambda_delta(1, 3, 4, 2)
    table = from_ray(Delta, gf7)
    first, second = h_locus_membership(table, 1), h_locus_membership(table, 2)
    assert (first.h, first.member, second.member) == (2, False, True)
    assert second.witness

    eight = zero_table(FiniteAbelianGroup((8,)), gf7)
    assert h_locus_membership(eight, 1).h == 7
    assert not h_locus_membership(eight, 1).member
    assert not h_locus_membership(eight, 2).member

    torsor = MultiplicationTable.from_function(FiniteAbelianGroup((4,)), gf7, lambda m, n: gf7.one)
    for level in (1, 2):
        report = h_locus_membership(torsor, level)
        assert report.member and report.witness == ()


def test_h_loci_of_rays():
    ray = identity_ray(FiniteAbelianGroup((4,)))
    report = h_locus_membership(ray, 1)
    assert report.member and report.h == 1
    assert report.witness == (ray,)


def test_h_locus_errors(gf7):
    M = FiniteAbelianGroup((3,))
    with pytest.raises(GroupError):
        h_locus_membership(identity_ray(M), 3)
    broken = MultiplicationTable.from_function(M, gf7, lambda m, n: gf7.zero)
    with pytest.raises(AlgebraError):
        h_locus_membership(broken, 1)


def test_theta2_fan_of_z2():
    fan = theta2_fan(FiniteAbelianGroup((2,)))
    assert fan.to_text() == "rank 1\nray 1\ncone 0"
    assert list(fan.faces()) == [(), (0,)]


def test_theta2_fan_of_klein_group():
    fan = theta2_fan(FiniteAbelianGroup((2, 2)))
    assert fan.lattice_rank == 3
    assert len(fan.rays) == 3
    assert len(fan.max_cones) == 3 and all(len(cone) == 2 for cone in fan.max_cones)
    assert fan.to_json()["max_cones"] == [list(cone) for cone in fan.max_cones]


def test_full_smooth_locus_of_klein_group():
    fan = full_smooth_locus_fan(FiniteAbelianGroup((2, 2)))
    assert fan.max_cones == ((0, 1, 2),)
    faces = list(fan.faces())
    assert faces[0] == () and len(faces) == 8


def test_fans_need_smooth_sequences():
    Z2 = FiniteAbelianGroup((2,))
    with pytest.raises(FanError):
        smooth_locus_fan(Z2, [(identity_ray(Z2).scale(2),)])
    with pytest.raises(FanError):
        smooth_locus_fan(Z2, [()])
    with pytest.raises(FanError):
        smooth_locus_fan(Z2, [(identity_ray(FiniteAbelianGroup((3,))),)])


def test_h_locus_does_not_depend_on_the_field():
    _, Delta = lambda_delta(1, 3, 4, 2)
    for scalars in (ScalarField(0), ScalarField(5)):
        assert h_locus_membership(from_ray(Delta, scalars), 2).member

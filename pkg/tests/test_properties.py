from concurrent.futures import ThreadPoolExecutor

import pytest

from covermonoid import properties
from covermonoid.errors import TwoDegreeError
from covermonoid.properties import (
    REGISTRY,
    PropertyFailure,
    expect,
    groups_up_to,
    run_property,
    run_suite,
)


def test_registry_names_every_check():
    assert {
        "omega-recursion",
        "two-degree-invariants",
        "lambda-delta-rays",
        "universal-algebra-matches-oracle",
        "classification-round-trip",
        "sigma-boundary",
        "sigma-duality",
        "normal-crossing-table",
        "extremal-rays-match-bruteforce",
        "extremal-rays-indecomposable",
    } <= set(REGISTRY)


def test_groups_up_to():
    assert [M.spec for M in groups_up_to(4)] == ["2", "3", "4", "2,2"]
    assert all(M.size >= 8 for M in groups_up_to(9, min_order=8))


def test_expect():
    expect(True, "never raised")
    with pytest.raises(PropertyFailure, match="broken"):
        expect(False, "broken")


@pytest.mark.parametrize("name", [
    "two-generator-presentations",
    "omega-recursion",
    "two-degree-invariants",
    "presentations-are-consistent",
    "extremal-rays-indecomposable",
    "reducibility-certificates",
    "normal-crossing-table",
])
def test_cheap_properties_pass(name):
    result = run_property(name, 4, 101)
    assert result.passed, result.detail
    assert int(result.checked) > 0


def test_run_property_reports_failures(monkeypatch):
    def failing(max_order, prime):
        expect(max_order < 3, f"order {max_order} is too large")
        return 1

    def erroring(max_order, prime):
        raise TwoDegreeError("qbar is not in Omega")

    monkeypatch.setitem(REGISTRY, "failing", failing)
    monkeypatch.setitem(REGISTRY, "erroring", erroring)
    assert run_property("failing", 2, 7).passed
    result = run_property("failing", 5, 7)
    assert not result.passed and result.detail == "order 5 is too large" and result.checked == "0"
    assert run_property("erroring", 2, 7).detail == "TwoDegreeError: qbar is not in Omega"


def test_run_suite_keeps_registry_order(monkeypatch):
    monkeypatch.setattr(properties, "REGISTRY", {
        "first": lambda max_order, prime: max_order,
        "second": lambda max_order, prime: prime,
    })
    with ThreadPoolExecutor(max_workers=2) as executor:
        results = run_suite(3, 11, executor)
    assert [(r.name, r.passed, r.checked) for r in results] == [("first", True, "3"), ("second", True, "11")]

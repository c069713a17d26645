"""
Named property checks run by `covermonoid verify`.

Each check takes (max_order, prime), raises PropertyFailure on the first counterexample and
otherwise returns how many cases it examined.
"""
import logging
import random
from concurrent.futures import Executor
from math import gcd
from typing import Callable

from .abelian_group import (
    FiniteAbelianGroup,
    abelian_groups_of_order,
    enumerate_surjections,
    is_elementary_power,
    is_isomorphic,
    presentation_group,
    recognize_two_generator_presentation,
)
from .cover_monoid import (
    H_of_ray,
    extremal_rays,
    extremal_rays_bruteforce,
    h_of_ray,
    in_nonnegative_span,
    is_indecomposable,
    is_smooth_ray,
    is_smooth_sequence,
    pardini_maps,
    pardini_ray,
    reduced_presentation,
    support_realizable,
)
from .errors import CoverMonoidError
from .graded_algebra import (
    H_of_table,
    ScalarField,
    UnitCharacter,
    from_ray,
    h_of_table,
    is_twist_equivalent,
    reduce_mod_H,
    validate,
)
from .schemas import PropertyResult
from .stack_analysis import (
    full_smooth_locus_fan,
    h_locus_membership,
    is_reducibility_certificate,
    reducibility_certificate,
    smoothness_verdict,
    theta2_fan,
)
from .two_degree import (
    classify_two_degree_algebra,
    d_value,
    delta_of,
    dual_datum,
    duality_orbit_check,
    enumerate_sigma,
    invariants_for,
    lambda_delta,
    nc_ray_table,
    omega_set,
    oracle_multiplication,
    q_hat,
    sigma_is_empty,
    universal_multiplication,
    valid_data,
    valid_presentations,
)

logger = logging.getLogger(__name__)

Check = Callable[[int, int], int]
REGISTRY: dict[str, Check] = {}


class PropertyFailure(Exception):
    pass


def prop(name: str):
    def decorator(fn: Check) -> Check:
        REGISTRY[name] = fn
        return fn
    return decorator


def expect(condition: bool, detail: str):
    if not condition:
        raise PropertyFailure(detail)


def groups_up_to(max_order: int, min_order: int = 2) -> list[FiniteAbelianGroup]:
    return [M for n in range(min_order, max_order + 1) for M in abelian_groups_of_order(n)]


# --- Groups ---

@prop("two-generator-presentations")
def check_presentations(max_order: int, prime: int) -> int:
    checked = 0
    for r, alpha, N in valid_presentations(max_order):
        G, m, n = presentation_group(r, alpha, N)
        expect(G.size == r * N and r * m == alpha * n, f"M_{(r, alpha, N)} has the wrong relations")
        expect(recognize_two_generator_presentation(G, m, n) == (r, alpha, N), f"{(r, alpha, N)} is not recovered")
        checked += 1
    for M in groups_up_to(min(max_order, 8)):
        for Q in groups_up_to(M.size):
            for phi in enumerate_surjections(M, Q):
                expect(phi.is_surjective(), f"{phi} is not surjective")
                checked += 1
    return checked


# --- Cover monoid ---

@prop("extremal-rays-match-bruteforce")
def check_extremal_rays(max_order: int, prime: int) -> int:
    checked = 0
    for M in groups_up_to(min(max_order, 6)):
        rays = sorted(r.dual for r in extremal_rays(M))
        expect(rays == sorted(r.dual for r in extremal_rays_bruteforce(M)), f"ray lists differ on {M}")
        checked += len(rays)
    return checked


@prop("extremal-ray-supports")
def check_extremal_supports(max_order: int, prime: int) -> int:
    checked = 0
    for M in groups_up_to(min(max_order, 8)):
        rays = extremal_rays(M)
        for ray in rays:
            expect(gcd(*ray.dual) == 1, f"{ray.dual} is not primitive")
        expect(len({r.support for r in rays}) == len(rays), f"two extremal rays of {M} share a support")
        for eta in pardini_maps(M):
            E = pardini_ray(eta)
            match = [r for r in rays if r.support == E.support]
            expect(len(match) == 1, f"Pardini ray of {eta.images} is not extremal on {M}")
            k = max(abs(x) for x in E.dual) // max(abs(x) for x in match[0].dual)
            expect(match[0].scale(k) == E, f"Pardini ray of {eta.images} is not a multiple of an extremal ray")
        checked += len(rays)
    return checked


@prop("extremal-rays-indecomposable")
def check_indecomposable(max_order: int, prime: int) -> int:
    checked = 0
    for M in groups_up_to(min(max_order, 6)):
        for ray in extremal_rays(M):
            expect(is_indecomposable(ray), f"{ray.dual} splits into two nonzero rays on {M}")
            checked += 1
    return checked


@prop("presentations-are-consistent")
def check_presentation_relations(max_order: int, prime: int) -> int:
    expect(len(reduced_presentation(FiniteAbelianGroup((4,))).relations) == 1, "Z/4 needs one relation")
    for spec in ("3", "2,2"):
        expect(not reduced_presentation(FiniteAbelianGroup.parse(spec)).relations, f"{spec} has relations")
    checked = 3
    for M in groups_up_to(min(max_order, 6)):
        reduced_presentation(M)
        checked += 1
    return checked


@prop("supports-in-extremal-span")
def check_support_realizability(max_order: int, prime: int) -> int:
    checked = 0
    for M in groups_up_to(min(max_order, 6)):
        rays = extremal_rays(M)
        for i, first in enumerate(rays):
            for second in rays[i + 1:]:
                ray = support_realizable(M, first.support | second.support)
                expect(ray is not None, f"union of two extremal supports on {M} is not realizable")
                expect(in_nonnegative_span(ray, rays), f"a realizable ray on {M} leaves the extremal span")
                checked += 1
    return checked


# --- Graded algebras ---

@prop("tables-from-rays")
def check_tables_from_rays(max_order: int, prime: int) -> int:
    scalars = ScalarField(prime)
    checked = 0
    for M in groups_up_to(min(max_order, 6)):
        if M.size % prime == 0:
            continue
        rng = random.Random(M.size * prime)
        for ray in extremal_rays(M):
            plain = from_ray(ray, scalars)
            twisted = from_ray(ray, scalars, UnitCharacter.random(M, scalars, rng))
            expect(validate(twisted).ok, f"twisted table of {ray.dual} is not a multiplication")
            expect(H_of_table(twisted) == H_of_ray(ray), f"H differs on {ray.dual}")
            expect(h_of_table(twisted) == h_of_table(plain) == h_of_ray(ray), f"h differs on {ray.dual}")
            expect(is_twist_equivalent(plain, twisted) is not None, f"twist of {ray.dual} is not recognised")
            checked += 1
    return checked


@prop("reduction-mod-H")
def check_reduce_mod_H(max_order: int, prime: int) -> int:
    scalars = ScalarField(prime)
    checked = 0
    for M in groups_up_to(min(max_order, 8)):
        for ray in extremal_rays(M):
            H = H_of_ray(ray)
            if len(H) == 1:
                continue
            table = from_ray(ray, scalars)
            reduced = reduce_mod_H(table, H)
            expect(len(H_of_table(reduced)) == 1, f"H survives reduction on {ray.dual}")
            expect(h_of_table(reduced) == h_of_table(table), f"reduction changes h on {ray.dual}")
            checked += 1
    return checked


# --- Two degrees ---

@prop("omega-recursion")
def check_omega(max_order: int, prime: int) -> int:
    checked = 0
    for N in range(2, 51):
        for beta in range(N):
            omega = omega_set(beta, N)
            for previous, q in zip(omega, omega[1:]):
                qh = q_hat(beta, N, q)
                d, d_prev, d_hat = d_value(beta, N, q), d_value(beta, N, previous), d_value(beta, N, qh)
                expect(q == previous + qh and d == d_prev + d_hat, f"recursion fails at beta={beta}, N={N}, q={q}")
                expect(qh * N + q * d_hat - qh * d == N, f"determinant identity fails at beta={beta}, N={N}, q={q}")
                checked += 1
    return checked


@prop("two-degree-invariants")
def check_invariants(max_order: int, prime: int) -> int:
    checked = 0
    for datum in valid_data(2 * max_order):
        inv = invariants_for(*datum)
        size = inv.presentation.size
        expect(inv.z * inv.x - inv.y * inv.w == size and sum(inv.profile) == size, f"{datum} fails zx - yw = |M|")
        expect(sorted(inv.good_pairs.values()) == [(A, B) for A in range(inv.z) for B in range(inv.f(A))],
               f"good pairs of {datum} do not fill the staircase")
        checked += 1
    return checked


@prop("lambda-delta-rays")
def check_lambda_delta(max_order: int, prime: int) -> int:
    checked = 0
    for datum in valid_data(2 * max_order, nondegenerate=True):
        r, alpha, N, qbar = datum
        Lambda, Delta = lambda_delta(*datum)
        _, m, n = presentation_group(r, alpha, N)
        expect(Lambda.value(m, -m) == 1 and Delta.value(n, -n) == 1, f"boundary values of {datum}")
        expect(Lambda.value(n, -n) == int(qbar != 1), f"Lambda_(n,-n) of {datum}")
        expect(Delta.value(m, -m) == int(qbar != N // gcd(alpha, N)), f"Delta_(m,-m) of {datum}")
        expect(is_smooth_sequence([Lambda, Delta])[0], f"(Lambda, Delta) of {datum} is not smooth")
        checked += 1
    return checked


ORACLE_SCALARS = [(0, 0), (1, 0), (0, 1), (1, 1), (3, 5)]


@prop("universal-algebra-matches-oracle")
def check_oracle(max_order: int, prime: int) -> int:
    scalars = ScalarField(prime)
    checked = 0
    for datum in valid_data(max_order):
        r, alpha, N, _ = datum
        if (r * N) % prime == 0:
            continue
        for a, b in ORACLE_SCALARS:
            closed = universal_multiplication(*datum, a, b, scalars)
            expect(closed == oracle_multiplication(*datum, a, b, scalars), f"{datum} with a={a}, b={b}")
            checked += 1
    return checked


@prop("classification-round-trip")
def check_classification(max_order: int, prime: int) -> int:
    scalars = ScalarField(prime)
    checked = 0
    for datum in valid_data(max_order, nondegenerate=True):
        r, alpha, N, qbar = datum
        _, m, n = presentation_group(r, alpha, N)
        for lam in (0, 1):
            if lam == 1 and qbar == N // gcd(alpha, N):
                continue
            result = classify_two_degree_algebra(universal_multiplication(*datum, lam, 0, scalars), m, n)
            expect(result.qbar == qbar and result.lam == scalars(lam), f"{datum}, lambda={lam} gives {result}")
            checked += 1
    return checked


@prop("sigma-boundary")
def check_sigma(max_order: int, prime: int) -> int:
    checked = 0
    for M in groups_up_to(2 * max_order + 3):
        power = is_elementary_power(M)
        expect(sigma_is_empty(M) == (power is not None and power[0] in (2, 3)), f"Sigma of {M}")
        checked += 1
    for M in groups_up_to(min(max_order + 4, 16)):
        for chi in enumerate_sigma(M):
            ray = delta_of(chi)
            expect(h_of_ray(ray) == 2 and is_smooth_ray(ray), f"Delta of {chi.key} on {M}")
            checked += 1
    return checked


@prop("sigma-duality")
def check_duality(max_order: int, prime: int) -> int:
    checked = 0
    for M in groups_up_to(min(max_order, 16)):
        for chi in enumerate_sigma(M):
            expect(dual_datum(dual_datum(chi)) == chi, f"duality is not an involution at {chi.key} on {M}")
            checked += 1
        expect(duality_orbit_check(M), f"Delta does not collapse exactly the duality orbits on {M}")
    return checked


NC_H = {1: 1, 2: 2, 3: 2, 4: 2, 5: 2}


@prop("normal-crossing-table")
def check_nc_table(max_order: int, prime: int) -> int:
    checked = 0
    expected_rows = {"2": {1}, "2,2": {1, 2}, "4": {1, 4}, "6": {1, 5}, "8": {1, 4}, "4,2": {1, 2, 3, 4}}
    for spec, rows in expected_rows.items():
        M = FiniteAbelianGroup.parse(spec)
        if M.size > max(max_order, 8):
            continue
        table = nc_ray_table(M)
        expect({row.row for row in table} == rows, f"rows of the normal-crossing table for {spec}")
        for row in table:
            expect(row.h == NC_H[row.row], f"row {row.row} on {spec} has h = {row.h}")
            checked += 1
    return checked


# --- Stack ---

@prop("reducibility-certificates")
def check_reducibility(max_order: int, prime: int) -> int:
    checked = 0
    Z8 = FiniteAbelianGroup((8,))
    expect(is_reducibility_certificate(Z8, *(Z8.element([x]) for x in (2, 4, 6, 1))), "witness on Z/8")
    V = FiniteAbelianGroup((2, 2, 2, 2))
    expect(is_reducibility_certificate(V, *V.generators()), "witness on (Z/2)^4")
    for M in groups_up_to(max_order + 4, min_order=8):
        if is_isomorphic(M, FiniteAbelianGroup((2, 2, 2))):
            continue
        certificate = reducibility_certificate(M)
        expect(certificate is not None and is_reducibility_certificate(M, *certificate), f"no certificate on {M}")
        checked += 1
    return checked


@prop("stack-smoothness")
def check_smoothness(max_order: int, prime: int) -> int:
    groups = groups_up_to(max_order + 4)
    for M in groups:
        smoothness_verdict(M)
    return len(groups)


@prop("h-loci")
def check_h_loci(max_order: int, prime: int) -> int:
    checked = 0
    for M in groups_up_to(min(max_order, 8)):
        for ray in extremal_rays(M):
            for level in (1, 2):
                h_locus_membership(ray, level)
                checked += 1
    return checked


@prop("fans-are-smooth")
def check_fans(max_order: int, prime: int) -> int:
    checked = 0
    for M in groups_up_to(min(max_order, 6)):
        checked += len(theta2_fan(M).max_cones)
    for M in groups_up_to(min(max_order, 4)):
        checked += len(full_smooth_locus_fan(M).max_cones)
    return checked


# --- Running ---

def run_property(name: str, max_order: int, prime: int) -> PropertyResult:
    logger.debug("property %s: start", name)
    try:
        checked = REGISTRY[name](max_order, prime)
    except PropertyFailure as e:
        result = PropertyResult(name=name, passed=False, checked="0", detail=str(e))
    except CoverMonoidError as e:
        result = PropertyResult(name=name, passed=False, checked="0", detail=f"{type(e).__name__}: {e}")
    else:
        result = PropertyResult(name=name, passed=True, checked=str(checked))
    logger.debug("property %s: %s", name, "passed" if result.passed else "failed")
    return result


def run_suite(max_order: int, prime: int, executor: Executor) -> list[PropertyResult]:
    futures = [executor.submit(run_property, name, max_order, prime) for name in REGISTRY]
    return [future.result() for future in futures]

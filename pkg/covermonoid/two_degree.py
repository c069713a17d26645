"""
Covers generated in two degrees.

A group generated by two elements m, n is M_{r,alpha,N} = Z^2/<(r,-alpha),(0,N)> with m = e1,
n = e2. Algebras with H = 0 generated in degrees m, n are classified by a record value qbar of
the residues d_q and a scalar lambda. This module computes the invariants attached to qbar, the
dual-basis rays Lambda and Delta, the universal multiplication a^Lambda b^Delta, the set of data
Sigma_M indexing smooth extremal rays with h = 2, and the normal-crossing rays.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterator, Literal

from sympy import divisors

from .abelian_group import (
    FiniteAbelianGroup,
    GroupElement,
    GroupHomomorphism,
    enumerate_surjections,
    hom_from_values,
    is_quotient_of,
    presentation_group,
    recognize_two_generator_presentation,
)
from .cover_monoid import Ray, build_cover_lattice, h_of_ray, pardini_maps, pardini_ray, pullback_ray
from .errors import GroupError, InvariantViolation, TwoDegreeError
from .graded_algebra import (
    BinomialRule,
    MultiplicationTable,
    ScalarField,
    UnitCharacter,
    H_of_table,
    is_twist_equivalent,
    minimum_generating_degrees,
    quotient_ring_structure_constants,
)

logger = logging.getLogger(__name__)


# --- Residues ---

def d_value(beta: int, N: int, q: int) -> int:
    """The representative of q*beta mod N in (0, N]."""
    return (q * beta - 1) % N + 1


def omega_set(beta: int, N: int) -> list[int]:
    if N < 2 or not 0 <= beta < N:
        raise TwoDegreeError(f"omega needs N > 1 and 0 <= beta < N, got beta={beta}, N={N}")
    order = N // gcd(N, beta)
    omega, record = [], 0
    for q in range(1, order + 1):
        d = d_value(beta, N, q)
        if d > record:
            omega.append(q)
            record = d
    return omega


def q_hat(beta: int, N: int, qbar: int) -> int:
    return min(range(qbar), key=lambda q: d_value(beta, N, q))


@dataclass(frozen=True)
class TwoDegreePresentation:
    r: int
    alpha: int
    N: int

    def __post_init__(self):
        if self.r < 1 or self.N < 2 or not 0 <= self.alpha < self.N:
            raise TwoDegreeError(f"({self.r}, {self.alpha}, {self.N}) needs r > 0, N > 1, 0 <= alpha < N")
        if self.r == 1 and self.alpha <= 1:
            raise TwoDegreeError("r = 1 needs alpha > 1, otherwise m is 0 or equal to n")

    @property
    def size(self) -> int:
        return self.r * self.N

    @property
    def beta(self) -> int:
        return -self.alpha % self.N

    @property
    def gcd(self) -> int:
        return gcd(self.alpha, self.N)

    @property
    def group(self) -> FiniteAbelianGroup:
        return presentation_group(self.r, self.alpha, self.N)[0]

    @property
    def m(self) -> GroupElement:
        return presentation_group(self.r, self.alpha, self.N)[1]

    @property
    def n(self) -> GroupElement:
        return presentation_group(self.r, self.alpha, self.N)[2]

    def omega(self) -> list[int]:
        return omega_set(self.beta, self.N)


@dataclass(frozen=True)
class TwoDegreeInvariants:
    presentation: TwoDegreePresentation
    qbar: int
    qhat: int
    qprime: int
    z: int
    x: int
    y: int
    w: int
    gamma: int
    d_qhat: int
    good_pairs: dict = field(repr=False, compare=False)

    def f(self, c: int) -> int:
        if not 0 <= c < self.z:
            raise TwoDegreeError(f"f is defined on [0, {self.z})")
        return self.x if c < self.qhat * self.presentation.r else self.d_qhat

    @property
    def profile(self) -> tuple[int, ...]:
        return tuple(self.f(c) for c in range(self.z))

    @property
    def degenerate(self) -> bool:
        return self.z == 1 or self.x == 1

    def good_pair(self, l: GroupElement) -> tuple[int, int]:
        return self.good_pairs[l]


@lru_cache(maxsize=None)
def invariants_for(r: int, alpha: int, N: int, qbar: int) -> TwoDegreeInvariants:
    P = TwoDegreePresentation(r, alpha, N)
    beta = P.beta
    if qbar not in P.omega():
        raise TwoDegreeError(f"qbar = {qbar} is not in Omega_({beta},{N})")
    qhat = q_hat(beta, N, qbar)
    qprime = qbar - qhat
    z = qbar * r
    y = N - d_value(beta, N, qbar)
    x = N - d_value(beta, N, qprime) if qbar > 1 else N
    w = qprime * r if qbar > 1 else 0
    d_qhat = d_value(beta, N, qhat)
    size = P.size

    if z * x - y * w != size:
        raise InvariantViolation(f"zx - yw = {z * x - y * w} differs from |M| = {size}")
    profile = [x if c < qhat * r else d_qhat for c in range(z)]
    if sum(profile) != size or any(a < b for a, b in zip(profile, profile[1:])):
        raise InvariantViolation(f"profile {profile} is not a decreasing partition of {size}")
    if qbar > 1 and (qhat * r != z - w or d_qhat != x - y):
        raise InvariantViolation("qhat r = z - w and d_qhat = x - y fail")

    G, m, n = presentation_group(r, alpha, N)
    if z * m != y * n or w * m != x * n:
        raise InvariantViolation("zm = yn and wm = xn fail")
    good_pairs: dict[GroupElement, tuple[int, int]] = {}
    for A in range(z):
        for B in range(profile[A]):
            l = A * m + B * n
            if l in good_pairs:
                raise InvariantViolation(f"{l.label()} has two good pairs")
            good_pairs[l] = (A, B)
    if len(good_pairs) != size:
        raise InvariantViolation("good pairs do not cover the group")
    return TwoDegreeInvariants(P, qbar, qhat, qprime, z, x, y, w, int(qbar > 1), d_qhat, good_pairs)


def valid_presentations(max_size: int) -> Iterator[tuple[int, int, int]]:
    """(r, alpha, N) with rN <= max_size, in lexicographic order of (rN, N, alpha)."""
    for size in range(2, max_size + 1):
        for N in divisors(size):
            if N < 2:
                continue
            r = size // N
            for alpha in range(N):
                if r > 1 or alpha > 1:
                    yield r, alpha, N


def valid_data(max_size: int, nondegenerate: bool = False) -> Iterator[tuple[int, int, int, int]]:
    for r, alpha, N in valid_presentations(max_size):
        for qbar in omega_set(-alpha % N, N):
            if nondegenerate and (qbar * r == 1 or qbar == N):
                continue
            yield r, alpha, N, qbar


# --- Rays ---

@lru_cache(maxsize=None)
def lambda_delta(r: int, alpha: int, N: int, qbar: int) -> tuple[Ray, Ray]:
    """Lambda = (x E + w delta)/|M| and Delta = (y E + z delta)/|M| on M_{r,alpha,N}."""
    inv = invariants_for(r, alpha, N, qbar)
    if inv.degenerate:
        raise TwoDegreeError("Lambda and Delta need qbar r != 1 and qbar != N")
    G, m, n = presentation_group(r, alpha, N)
    lattice = build_cover_lattice(G)
    size = inv.presentation.size
    pairs = inv.good_pairs
    Lambda = Ray.from_e_values(lattice, {l: Fraction(inv.x * A + inv.w * B, size) for l, (A, B) in pairs.items()})
    Delta = Ray.from_e_values(lattice, {l: Fraction(inv.y * A + inv.z * B, size) for l, (A, B) in pairs.items()})

    top_m, top_n = (inv.z - 1) * m, (inv.x - 1) * n
    if (Lambda.value(m, top_m), Lambda.value(n, top_n), Delta.value(m, top_m), Delta.value(n, top_n)) != (1, 0, 0, 1):
        raise InvariantViolation(f"Lambda, Delta of {(r, alpha, N, qbar)} are not a dual pair")
    return Lambda, Delta


def _cyclic(order: int) -> FiniteAbelianGroup:
    return FiniteAbelianGroup((order,))


def degenerate_ray(r: int, alpha: int, N: int, qbar: int,
                   which: Literal["lambda", "delta"]) -> tuple[str, Ray]:
    """
    Identify Lambda or Delta with a Pardini ray or with the Delta of a smaller qbar.
    Returns the case label and the ray on M_{r,alpha,N}.
    """
    inv = invariants_for(r, alpha, N, qbar)
    if inv.degenerate:
        raise TwoDegreeError("degenerate identifications need qbar r != 1 and qbar != N")
    P = inv.presentation
    G, m, n = presentation_group(r, alpha, N)
    if which == "delta":
        if qbar == N // P.gcd:
            Q = _cyclic(P.gcd)
            return "xi", pardini_ray(hom_from_values(G, Q, [m, n], [Q.zero, Q.element([1])]))
        if (qbar * alpha) % N == 1:
            Z = _cyclic(G.size)
            return "zeta", pardini_ray(hom_from_values(G, Z, [m], [Z.element([1])]))
    elif which == "lambda":
        if qbar == 1:
            Q = _cyclic(r)
            return "omega", pardini_ray(hom_from_values(G, Q, [m, n], [Q.element([1]), Q.zero]))
        if inv.w == 1:
            Z = _cyclic(G.size)
            return "theta", pardini_ray(hom_from_values(G, Z, [n], [Z.element([1])]))
        return "smaller-qbar", lambda_delta(r, alpha, N, qbar - inv.qhat)[1]
    else:
        raise TwoDegreeError(f"unknown ray {which!r}")
    raise TwoDegreeError(f"Delta of {(r, alpha, N, qbar)} is not degenerate")


# --- Universal algebra ---

def universal_relations(inv: TwoDegreeInvariants, a, b, scalars: ScalarField) -> list[BinomialRule]:
    """s^z = a t^y, t^x = b s^w, s^(qhat r) t^(d_qhat) = a^gamma b."""
    r = inv.presentation.r
    return [
        BinomialRule((inv.z, 0), a, (0, inv.y)),
        BinomialRule((0, inv.x), b, (inv.w, 0)),
        BinomialRule((inv.qhat * r, inv.d_qhat), scalars.power(a, inv.gamma) * b, (0, 0)),
    ]


def rewrite_weights(inv: TwoDegreeInvariants) -> tuple[int, int]:
    # s^z > t^y and t^x > s^w under these weights because zx - yw = |M| > 0
    return inv.x + inv.y, inv.z + inv.w


def oracle_multiplication(r: int, alpha: int, N: int, qbar: int, a, b,
                          scalars: ScalarField) -> MultiplicationTable:
    """Structure constants of the universal algebra computed by rewriting."""
    inv = invariants_for(r, alpha, N, qbar)
    G, m, n = presentation_group(r, alpha, N)
    return quotient_ring_structure_constants(G, m, n, universal_relations(inv, scalars(a), scalars(b), scalars),
                                             inv.good_pairs, scalars, rewrite_weights(inv))


def universal_multiplication(r: int, alpha: int, N: int, qbar: int, a, b,
                             scalars: ScalarField) -> MultiplicationTable:
    """a^Lambda b^Delta, or the single-generator forms when qbar = N or qbar r = 1."""
    inv = invariants_for(r, alpha, N, qbar)
    G, m, n = presentation_group(r, alpha, N)
    a, b = scalars(a), scalars(b)
    Z = _cyclic(G.size)
    if inv.x == 1:
        ray = pardini_ray(hom_from_values(G, Z, [m], [Z.element([1])]))
        return MultiplicationTable.from_function(G, scalars, lambda u, v: scalars.power(a, ray.value(u, v)))
    if inv.z == 1:
        ray = pardini_ray(hom_from_values(G, Z, [n], [Z.element([1])]))
        return MultiplicationTable.from_function(G, scalars, lambda u, v: scalars.power(b, ray.value(u, v)))
    Lambda, Delta = lambda_delta(r, alpha, N, qbar)
    return MultiplicationTable.from_function(
        G, scalars, lambda u, v: scalars.power(a, Lambda.value(u, v)) * scalars.power(b, Delta.value(u, v)))


# --- Classification ---

@dataclass(frozen=True)
class TwoDegreeClassification:
    presentation: TwoDegreePresentation
    qbar: int
    lam: object
    twist: UnitCharacter = field(repr=False)


def _power_scalars(table: MultiplicationTable, g: GroupElement, count: int) -> list:
    """c_h with v_g^h = c_h v_{hg}, for h = 0 .. count."""
    scalars = table.scalars
    values = [scalars.one, scalars.one]
    for h in range(1, count):
        values.append(values[-1] * table.psi(g, h * g))
    return values[:count + 1]


def classify_two_degree_algebra(table: MultiplicationTable, m: GroupElement,
                                n: GroupElement) -> TwoDegreeClassification:
    M, scalars = table.group, table.scalars
    if m.is_zero() or n.is_zero() or m == n:
        raise TwoDegreeError("m and n must be distinct and nonzero")
    if len(H_of_table(table)) != 1:
        raise TwoDegreeError("the algebra has a nontrivial torsor part")
    degrees = minimum_generating_degrees(table)
    if not degrees <= {m, n}:
        labels = ", ".join(sorted(d.label() for d in degrees))
        raise TwoDegreeError(f"the algebra needs generators in degrees {labels}")
    try:
        r, alpha, N = recognize_two_generator_presentation(M, m, n)
    except GroupError as exc:
        raise TwoDegreeError(str(exc)) from None
    P = TwoDegreePresentation(r, alpha, N)

    multiples_of_n = {i * n: i for i in range(N)}
    c = _power_scalars(table, m, M.size)
    d = _power_scalars(table, n, N)
    z = y = None
    for h in range(1, M.size + 1):
        i = multiples_of_n.get(h * m)
        if i is not None and (not scalars.is_zero(d[i]) or scalars.is_zero(c[h])):
            z, y = h, i
            break
    if z is None or z % r:
        raise InvariantViolation(f"no relation v_m^h = lambda v_n^i found for {P}")
    qbar = z // r
    if qbar not in P.omega():
        raise InvariantViolation(f"qbar = {qbar} is not in Omega for {P}")
    lam = scalars.zero if scalars.is_zero(d[y]) else c[z] / d[y]

    G, e1, e2 = presentation_group(r, alpha, N)
    iso = hom_from_values(G, M, [e1, e2], [m, n])
    back = {iso(g): g for g in G.elements()}
    universal = universal_multiplication(r, alpha, N, qbar, scalars.to_fraction(lam), 0, scalars)
    transported = MultiplicationTable.from_function(M, scalars, lambda u, v: universal.psi(back[u], back[v]))
    u = is_twist_equivalent(transported, table)
    if u is None:
        raise InvariantViolation(f"algebra is not a twist of the universal algebra at qbar = {qbar}")
    logger.debug("classified table over %s: %s, qbar=%d", M, P, qbar)
    return TwoDegreeClassification(P, qbar, lam, u)


# --- Sigma ---

@dataclass(frozen=True)
class SigmaDatum:
    r: int
    alpha: int
    N: int
    qbar: int
    phi: GroupHomomorphism

    @property
    def presentation(self) -> TwoDegreePresentation:
        return TwoDegreePresentation(self.r, self.alpha, self.N)

    @property
    def key(self) -> tuple[int, int, int, int]:
        return self.r, self.alpha, self.N, self.qbar


def _in_sigma(r: int, alpha: int, N: int, qbar: int) -> bool:
    return qbar * r != 1 and (qbar * alpha) % N != 1 and qbar != N // gcd(alpha, N)


def _in_sigma_bar(r: int, alpha: int, N: int, qbar: int) -> bool:
    return qbar * r != 1 and qbar != N


def quotient_presentations(M: FiniteAbelianGroup) -> Iterator[tuple[int, int, int]]:
    """Every valid (r, alpha, N) with M_{r,alpha,N} a quotient of M."""
    for r, alpha, N in valid_presentations(M.size):
        if M.size % (r * N) == 0 and is_quotient_of(presentation_group(r, alpha, N)[0], M):
            yield r, alpha, N


def _iter_sigma(M: FiniteAbelianGroup, strict: bool) -> Iterator[SigmaDatum]:
    condition = _in_sigma if strict else _in_sigma_bar
    for r, alpha, N in quotient_presentations(M):
        qbars = [q for q in omega_set(-alpha % N, N) if condition(r, alpha, N, q)]
        if not qbars:
            continue
        maps = enumerate_surjections(M, presentation_group(r, alpha, N)[0])
        for qbar in qbars:
            for phi in maps:
                yield SigmaDatum(r, alpha, N, qbar, phi)


def enumerate_sigma(M: FiniteAbelianGroup) -> list[SigmaDatum]:
    data = list(_iter_sigma(M, strict=True))
    logger.debug("Sigma of %s has %d elements", M, len(data))
    return data


def enumerate_sigma_bar(M: FiniteAbelianGroup) -> list[SigmaDatum]:
    data = list(_iter_sigma(M, strict=False))
    logger.debug("Sigma-bar of %s has %d elements", M, len(data))
    return data


def sigma_is_empty(M: FiniteAbelianGroup) -> bool:
    return next(_iter_sigma(M, strict=True), None) is None


def dual_datum(chi: SigmaDatum) -> SigmaDatum:
    """Exchange the roles of m and n."""
    r, alpha, N, qbar = chi.key
    if not _in_sigma(r, alpha, N, qbar):
        raise TwoDegreeError(f"{chi.key} is not in Sigma")
    g = gcd(alpha, N)
    q_tilde = next(q for q in range(N // g) if (q * alpha - g) % N == 0)
    r_dual, N_dual, alpha_dual = g, r * N // g, q_tilde * r
    qbar_dual = invariants_for(r, alpha, N, qbar).y // g

    G, e1, e2 = presentation_group(r, alpha, N)
    G_dual, f1, f2 = presentation_group(r_dual, alpha_dual, N_dual)
    try:
        swap = hom_from_values(G, G_dual, [e1, e2], [f2, f1])
    except GroupError:
        raise InvariantViolation(f"dual presentation of {chi.key} does not swap the generators") from None
    dual = SigmaDatum(r_dual, alpha_dual, N_dual, qbar_dual, swap.compose(chi.phi))
    if not _in_sigma(*dual.key) or qbar_dual not in omega_set(-alpha_dual % N_dual, N_dual):
        raise InvariantViolation(f"dual of {chi.key} is {dual.key}, outside Sigma")
    return dual


def delta_of(chi: SigmaDatum) -> Ray:
    return pullback_ray(lambda_delta(*chi.key)[1], chi.phi)


def lambda_of(chi: SigmaDatum) -> Ray:
    return pullback_ray(lambda_delta(*chi.key)[0], chi.phi)


def duality_orbit_check(M: FiniteAbelianGroup) -> bool:
    """Delta^chi = Delta^chi' exactly when chi' is chi or its dual."""
    data = enumerate_sigma(M)
    rays = [delta_of(chi) for chi in data]
    duals = [dual_datum(chi) for chi in data]
    for i, chi in enumerate(data):
        for j, other in enumerate(data):
            if (rays[i] == rays[j]) != (other == chi or other == duals[i]):
                logger.debug("duality orbit mismatch: %s vs %s", chi.key, other.key)
                return False
    return True


@lru_cache(maxsize=None)
def enumerate_theta2(M: FiniteAbelianGroup) -> tuple[tuple[Ray, ...], ...]:
    """Pardini rays as singletons and the pairs (Lambda^chi, Delta^chi) over Sigma-bar."""
    sequences: list[tuple[Ray, ...]] = []
    seen = set()
    candidates = [(pardini_ray(eta),) for eta in pardini_maps(M)]
    candidates += [(lambda_of(chi), delta_of(chi)) for chi in enumerate_sigma_bar(M)]
    for sequence in candidates:
        if sequence not in seen:
            seen.add(sequence)
            sequences.append(sequence)
    return tuple(sequences)


# --- Normal crossings ---

@dataclass(frozen=True)
class NCRow:
    row: int
    l: int
    group: FiniteAbelianGroup
    m: GroupElement
    n: GroupElement
    r: int
    alpha: int
    N: int
    qbar: int
    phi: GroupHomomorphism
    ray: Ray
    h: int


def _nc_patterns(order: int) -> Iterator[tuple[int, int, tuple[int, int, int, int]]]:
    """(row, l, (r, alpha, N, qbar)) for the row groups of order dividing `order`."""
    if order % 2 == 0:
        yield 1, 1, (1, 1, 2, 1)
    if order % 4 == 0:
        yield 2, 1, (2, 0, 2, 1)
    for l in range(2, order // 4 + 1):
        if order % (4 * l) == 0:
            yield 3, l, (2, 2, 2 * l, 1)
    for l in range(1, order // 4 + 1):
        if order % (4 * l) == 0:
            yield 4, l, (1, 2 * l + 1, 4 * l, 2)
    for l in range(3, order // 2 + 1, 2):
        if order % (2 * l) == 0:
            yield 5, l, (2, 2, l, 1)


def _nc_ray(row: int, r: int, alpha: int, N: int, qbar: int) -> Ray:
    G, m, n = presentation_group(r, alpha, N)
    if row == 1:
        return pardini_ray(pardini_maps(G)[0]).scale(2)
    if row == 2:
        Z2 = _cyclic(2)
        one, zero = Z2.element([1]), Z2.element([0])
        return (pardini_ray(hom_from_values(G, Z2, [m, n], [one, zero]))
                + pardini_ray(hom_from_values(G, Z2, [m, n], [zero, one])))
    return lambda_delta(r, alpha, N, qbar)[1]


def nc_ray_table(M: FiniteAbelianGroup) -> list[NCRow]:
    rows: list[NCRow] = []
    seen = set()
    for row, l, (r, alpha, N, qbar) in _nc_patterns(M.size):
        G, m, n = presentation_group(r, alpha, N)
        if not is_quotient_of(G, M):
            continue
        base = _nc_ray(row, r, alpha, N, qbar)
        for phi in enumerate_surjections(M, G):
            ray = pullback_ray(base, phi)
            if (row, ray) in seen:
                continue
            seen.add((row, ray))
            rows.append(NCRow(row, l, G, m, n, r, alpha, N, qbar, phi, ray, h_of_ray(ray)))
    return rows

"""
The cover lattice of a finite abelian group and the calculus of rays on it.

For M finite abelian, the free lattice Z^M/<e_0> has basis (e_m) for m != 0. K is the kernel
of e_m -> m. The monoid K+ inside it is generated by v_{m,n} = e_m + e_n - e_{m+n}. A ray is
an additive map K+ -> N. It is stored by its values on a fixed basis of K (the "dual"
coordinates), with rational values on the e_m and cached integer values on every generator.
"""
import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Callable, Iterable, Mapping, Optional, Sequence

from .abelian_group import FiniteAbelianGroup, GroupElement, GroupHomomorphism, enumerate_surjections, invariant_factors
from .errors import GroupError, InvariantViolation, LatticeError, RayError
from .exact_linalg import (
    IntVector,
    RationalCone,
    clear_denominators,
    coordinates_in,
    determinant,
    dot,
    dual_cone_extreme_rays,
    dual_cone_extreme_rays_bruteforce,
    kernel_lattice_basis,
    lattice_basis,
    rank,
    rational_inverse,
    solve_homogeneous_system,
    sublattice_equal,
    transpose,
)

logger = logging.getLogger(__name__)

Pair = tuple[GroupElement, GroupElement]


def canonical_pair(m: GroupElement, n: GroupElement) -> Pair:
    return (m, n) if m <= n else (n, m)


def pair_label(pair: Pair) -> str:
    return f"{pair[0].label()},{pair[1].label()}"


@dataclass(frozen=True, eq=False)
class CoverLattice:
    group: FiniteAbelianGroup
    elements: tuple[GroupElement, ...]
    pairs: tuple[Pair, ...]
    generator_vectors: tuple[IntVector, ...]
    k_basis: tuple[IntVector, ...]
    k_basis_inverse: tuple[tuple[Fraction, ...], ...]
    generator_coords: tuple[IntVector, ...]
    pair_index: dict = field(repr=False)

    @property
    def rank(self) -> int:
        return len(self.elements)

    def position(self, m: GroupElement) -> int:
        return self.group.index(m) - 1

    def basis_vector(self, m: GroupElement) -> list[int]:
        vector = [0] * self.rank
        if not m.is_zero():
            vector[self.position(m)] = 1
        return vector

    def generator(self, m: GroupElement, n: GroupElement) -> list[int]:
        """v_{m,n} in the coordinates e_m, m != 0."""
        return [a + b - c for a, b, c in zip(self.basis_vector(m), self.basis_vector(n), self.basis_vector(m + n))]

    def k_coordinates(self, vector: Sequence[int]) -> list[int]:
        coords = coordinates_in(self.k_basis, vector)
        if coords is None:
            raise LatticeError(f"{list(vector)} does not lie in K")
        return coords


@lru_cache(maxsize=None)
def build_cover_lattice(M: FiniteAbelianGroup) -> CoverLattice:
    if M.size < 2:
        raise GroupError("the trivial group has no cover lattice")
    elements = tuple(M.nonzero_elements())
    d = len(elements)
    pairs = tuple((m, n) for i, m in enumerate(elements) for n in elements[i:])

    position = {m: i for i, m in enumerate(elements)}

    def unit(m):
        vector = [0] * d
        if not m.is_zero():
            vector[position[m]] = 1
        return vector

    generator_vectors = tuple(
        tuple(a + b - c for a, b, c in zip(unit(m), unit(n), unit(m + n))) for m, n in pairs
    )

    # K is the projection of the left kernel of [coords(m) ; diag(o)]
    k = M.rank
    relation_rows = [list(m.coords) for m in elements]
    relation_rows += [[o * int(i == j) for j in range(k)] for i, o in enumerate(M.factor_orders)]
    left_kernel = kernel_lattice_basis(transpose(relation_rows), d + k)
    k_basis = tuple(tuple(row) for row in lattice_basis([row[:d] for row in left_kernel], d))

    if len(k_basis) != d:
        raise InvariantViolation(f"rank of K is {len(k_basis)}, expected {d}")
    if abs(determinant(k_basis)) != M.size:
        raise InvariantViolation("K is not the kernel of a surjection onto M")

    generator_coords = []
    for vector in generator_vectors:
        coords = coordinates_in(k_basis, vector)
        if coords is None:
            raise InvariantViolation(f"generator {vector} is not in K")
        generator_coords.append(tuple(coords))

    inverse = tuple(tuple(row) for row in rational_inverse(k_basis))
    logger.debug("cover lattice of %s: rank %d, %d generators", M, d, len(pairs))
    return CoverLattice(
        group=M,
        elements=elements,
        pairs=pairs,
        generator_vectors=generator_vectors,
        k_basis=k_basis,
        k_basis_inverse=inverse,
        generator_coords=tuple(generator_coords),
        pair_index={pair: i for i, pair in enumerate(pairs)},
    )


# --- Rays ---

@dataclass(frozen=True, eq=False)
class Ray:
    lattice: CoverLattice = field(repr=False)
    dual: IntVector
    generator_values: IntVector = field(repr=False)
    denominator: int
    numerators: IntVector

    @classmethod
    def from_dual(cls, lattice: CoverLattice, dual: Sequence[int]) -> "Ray":
        dual = tuple(int(x) for x in dual)
        if len(dual) != lattice.rank:
            raise RayError("dual coordinates have the wrong length")
        e_values = [sum((a * b for a, b in zip(row, dual)), Fraction(0)) for row in lattice.k_basis_inverse]
        denominator = lcm(*(x.denominator for x in e_values))
        numerators = tuple(int(x * denominator) for x in e_values)
        values = tuple(dot(g, dual) for g in lattice.generator_coords)
        if any(v < 0 for v in values):
            raise RayError("a ray must be non-negative on every generator")
        return cls(lattice, dual, values, denominator, numerators)

    @classmethod
    def from_e_values(cls, lattice: CoverLattice,
                      values: Mapping[GroupElement, Fraction | int] | Sequence[Fraction | int]) -> "Ray":
        if isinstance(values, Mapping):
            x = [Fraction(values.get(m, 0)) for m in lattice.elements]
        else:
            x = [Fraction(v) for v in values]
        dual = [sum((a * b for a, b in zip(row, x)), Fraction(0)) for row in lattice.k_basis]
        if any(v.denominator != 1 for v in dual):
            raise RayError("values are not integral on K")
        return cls.from_dual(lattice, [int(v) for v in dual])

    @classmethod
    def zero(cls, lattice: CoverLattice) -> "Ray":
        return cls.from_dual(lattice, [0] * lattice.rank)

    @property
    def group(self) -> FiniteAbelianGroup:
        return self.lattice.group

    def e_value(self, m: GroupElement) -> Fraction:
        if m.is_zero():
            return Fraction(0)
        return Fraction(self.numerators[self.lattice.position(m)], self.denominator)

    def value(self, m: GroupElement, n: GroupElement) -> int:
        """The value on v_{m,n}; v_{m,0} = 0."""
        if m.is_zero() or n.is_zero():
            return 0
        return self.generator_values[self.lattice.pair_index[canonical_pair(m, n)]]

    @property
    def support(self) -> frozenset[Pair]:
        return frozenset(p for p, v in zip(self.lattice.pairs, self.generator_values) if v > 0)

    def is_zero(self) -> bool:
        return not any(self.dual)

    def __add__(self, other: "Ray") -> "Ray":
        if other.group != self.group:
            raise RayError("rays live on different cover lattices")
        return Ray.from_dual(self.lattice, [a + b for a, b in zip(self.dual, other.dual)])

    def scale(self, k: int) -> "Ray":
        if k < 0:
            raise RayError("rays can only be scaled by non-negative integers")
        return Ray.from_dual(self.lattice, [k * a for a in self.dual])

    def __eq__(self, other) -> bool:
        if not isinstance(other, Ray):
            return NotImplemented
        return self.group == other.group and self.generator_values == other.generator_values

    def __hash__(self) -> int:
        return hash((self.group, self.generator_values))


def pullback_ray(ray: Ray, phi: GroupHomomorphism) -> Ray:
    """(E o phi)_m = E_{phi(m)} on the cover lattice of the source."""
    if phi.target != ray.group:
        raise RayError("the homomorphism does not land in the ray's group")
    lattice = build_cover_lattice(phi.source)
    return Ray.from_e_values(lattice, {m: ray.e_value(phi(m)) for m in lattice.elements})


# --- Presentation ---

@dataclass(frozen=True)
class MonoidPresentation:
    group: FiniteAbelianGroup
    variables: tuple[Pair, ...]
    relations: tuple[tuple[tuple[Pair, ...], tuple[Pair, ...]], ...]

    def to_text(self) -> str:
        return "\n".join(relation_text(lhs, rhs) for lhs, rhs in self.relations)


def variable_text(pair: Pair) -> str:
    return "x_{" + pair_label(pair) + "}"


def relation_text(lhs: Sequence[Pair], rhs: Sequence[Pair]) -> str:
    return "*".join(map(variable_text, lhs)) + " - " + "*".join(map(variable_text, rhs))


def reduced_presentation(M: FiniteAbelianGroup) -> MonoidPresentation:
    lattice = build_cover_lattice(M)
    variables = tuple(p for p in lattice.pairs if not (p[0] + p[1]).is_zero())
    nonzero = lattice.elements

    def side(a: Pair, b: Pair) -> tuple[Pair, ...]:
        return tuple(sorted([canonical_pair(*a), canonical_pair(*b)]))

    relations = set()

    def add(lhs, rhs):
        if lhs != rhs:
            relations.add((min(lhs, rhs), max(lhs, rhs)))

    for m, n, t in itertools.product(nonzero, repeat=3):
        if m == t or (m + n).is_zero() or (n + t).is_zero() or (m + n + t).is_zero():
            continue
        add(side((m, n), (m + n, t)), side((n, t), (n + t, m)))
    for m, s, t in itertools.permutations(nonzero, 3):
        add(side((-m, t), (t - m, m)), side((-m, s), (s - m, m)))

    def image(product):
        return [sum(column) for column in zip(*(lattice.generator_vectors[lattice.pair_index[p]] for p in product))]

    for lhs, rhs in relations:
        if image(lhs) != image(rhs):
            raise InvariantViolation(f"relation {relation_text(lhs, rhs)} does not hold in K")
    return MonoidPresentation(M, variables, tuple(sorted(relations)))


# --- Extremal rays ---

def _cone(lattice: CoverLattice) -> RationalCone:
    return RationalCone(lattice.rank, lattice.generator_coords)


@lru_cache(maxsize=None)
def extremal_rays(M: FiniteAbelianGroup) -> tuple[Ray, ...]:
    lattice = build_cover_lattice(M)
    rays = tuple(Ray.from_dual(lattice, f) for f in dual_cone_extreme_rays(_cone(lattice)))
    logger.debug("%s: %d extremal rays", M, len(rays))
    return rays


def extremal_rays_bruteforce(M: FiniteAbelianGroup) -> tuple[Ray, ...]:
    lattice = build_cover_lattice(M)
    return tuple(Ray.from_dual(lattice, f) for f in dual_cone_extreme_rays_bruteforce(_cone(lattice)))


def zero_section_ray(M: FiniteAbelianGroup) -> Ray:
    rays = extremal_rays(M)
    total = rays[0]
    for ray in rays[1:]:
        total = total + ray
    return total


def pardini_maps(M: FiniteAbelianGroup) -> list[GroupHomomorphism]:
    """All surjections M -> Z/l with l > 1."""
    factors = invariant_factors(M)
    exponent = factors[-1] if factors else 1
    maps = []
    for l in range(2, exponent + 1):
        maps.extend(enumerate_surjections(M, FiniteAbelianGroup((l,))))
    return maps


def pardini_ray(eta: GroupHomomorphism) -> Ray:
    """E^eta_m = s(eta(m)) / l with s the lift to {0, ..., l-1}; E^eta_{m,n} is the carry."""
    if eta.target.rank != 1:
        raise RayError("a Pardini ray needs a surjection onto a cyclic group Z/l, l > 1")
    if not eta.is_surjective():
        raise RayError("eta is not surjective")
    l = eta.target.factor_orders[0]
    lattice = build_cover_lattice(eta.source)
    return Ray.from_e_values(lattice, {m: Fraction(eta(m).coords[0], l) for m in lattice.elements})


# --- H and h ---

def H_of_ray(ray: Ray) -> frozenset[GroupElement]:
    M = ray.group
    H = frozenset(m for m in M.elements() if m.is_zero() or ray.value(m, -m) == 0)
    if any(a + b not in H for a in H for b in H):
        raise InvariantViolation("H of a ray is not a subgroup")
    return H


def h_profile(M: FiniteAbelianGroup, H: frozenset[GroupElement],
              nonvanishing: Callable[[GroupElement, GroupElement], bool]) -> dict[GroupElement, int]:
    """
    h_t = 1 iff t is outside H and no pair u, n outside H with u + n = t mod H has a
    nonvanishing product.
    """
    outside = [x for x in M.elements() if x not in H]
    profile = {}
    for t in M.elements():
        if t in H:
            profile[t] = 0
            continue
        component = 1
        for u in outside:
            if (t - u) in H:
                continue
            if any(nonvanishing(u, t - u + h) for h in H):
                component = 0
                break
        profile[t] = component
    return profile


def h_total(profile: dict[GroupElement, int], H: frozenset[GroupElement]) -> int:
    total = sum(profile.values())
    if total % len(H):
        raise InvariantViolation(f"h sum {total} is not divisible by |H| = {len(H)}")
    return total // len(H)


def h_component(ray: Ray, t: GroupElement) -> int:
    H = H_of_ray(ray)
    return h_profile(ray.group, H, lambda u, n: ray.value(u, n) == 0)[t]


def h_of_ray(ray: Ray) -> int:
    H = H_of_ray(ray)
    return h_total(h_profile(ray.group, H, lambda u, n: ray.value(u, n) == 0), H)


# --- Smoothness ---

def is_smooth_sequence(rays: Sequence[Ray]) -> tuple[bool, Optional[tuple[Pair, ...]]]:
    """
    Returns (smooth, witness). The witness lists generators v_j with E^i(v_j) = delta_ij.
    """
    if not rays:
        return True, ()
    lattice = rays[0].lattice
    if any(r.group != lattice.group for r in rays):
        raise RayError("rays of a sequence must share a cover lattice")
    d = lattice.rank
    kernel = kernel_lattice_basis([r.dual for r in rays], d)
    in_kernel = [g for i, g in enumerate(lattice.generator_coords)
                 if all(r.generator_values[i] == 0 for r in rays)]
    if not sublattice_equal(in_kernel, kernel, d):
        return False, None
    witness = []
    for j in range(len(rays)):
        found = None
        for i, pair in enumerate(lattice.pairs):
            if all(r.generator_values[i] == int(k == j) for k, r in enumerate(rays)):
                found = pair
                break
        if found is None:
            return False, None
        witness.append(found)
    return True, tuple(witness)


def is_smooth_ray(ray: Ray) -> bool:
    if ray.is_zero():
        raise RayError("the zero ray has no smoothness")
    return is_smooth_sequence([ray])[0]


def all_smooth_sequences(M: FiniteAbelianGroup) -> list[tuple[Ray, ...]]:
    """Smooth subsets of the extremal rays, grown one ray at a time."""
    rays = extremal_rays(M)
    level = {(i,) for i, r in enumerate(rays) if is_smooth_ray(r)}
    found = sorted(level)
    for _ in range(2, build_cover_lattice(M).rank + 1):
        nxt = set()
        for base in sorted(level):
            for j in range(base[-1] + 1, len(rays)):
                candidate = base + (j,)
                if any(candidate[:i] + candidate[i + 1:] not in level for i in range(len(candidate))):
                    continue
                if is_smooth_sequence([rays[i] for i in candidate])[0]:
                    nxt.add(candidate)
        if not nxt:
            break
        found.extend(sorted(nxt))
        level = nxt
    return [tuple(rays[i] for i in indices) for indices in found]


# --- Realizability ---

def support_realizable(M: FiniteAbelianGroup, Z: Iterable[Pair]) -> Optional[Ray]:
    """A ray whose support is exactly Z, or None."""
    lattice = build_cover_lattice(M)
    Z = {canonical_pair(*p) for p in Z}
    unknown = [p for p in Z if p not in lattice.pair_index]
    if unknown:
        raise RayError(f"{pair_label(unknown[0])} is not a pair of nonzero elements")
    off = [g for p, g in zip(lattice.pairs, lattice.generator_coords) if p not in Z]
    on = [g for p, g in zip(lattice.pairs, lattice.generator_coords) if p in Z]
    solution = solve_homogeneous_system(off, [], on, lattice.rank)
    if solution is None:
        return None
    ray = Ray.from_dual(lattice, clear_denominators(solution))
    if ray.support != Z:
        raise InvariantViolation("feasibility solution has the wrong support")
    return ray


def in_nonnegative_span(ray: Ray, rays: Sequence[Ray]) -> bool:
    """True iff a positive multiple of ray is a non-negative combination of rays."""
    k = len(rays)
    d = ray.lattice.rank
    # unknowns: one weight per ray, then the multiplier of the target
    equalities = [[r.dual[i] for r in rays] + [-ray.dual[i]] for i in range(d)]
    nonnegative = [[int(j == i) for j in range(k + 1)] for i in range(k)]
    strict = [[0] * k + [1]]
    return solve_homogeneous_system(equalities, nonnegative, strict, k + 1) is not None


# --- Decompositions ---

def _box_rows(ray: Ray) -> list[int]:
    """Generator indices spanning K, taking those where the ray is smallest first."""
    order = sorted(range(len(ray.generator_values)), key=lambda i: (ray.generator_values[i], i))
    chosen: list[int] = []
    for i in order:
        rows = [ray.lattice.generator_coords[j] for j in chosen + [i]]
        if rank(rows, ray.lattice.rank) == len(rows):
            chosen.append(i)
            if len(chosen) == ray.lattice.rank:
                break
    return chosen


def proper_summands(ray: Ray) -> list[Ray]:
    """Rays e' with e' != 0, e' != ray and 0 <= e' <= ray on every generator."""
    lattice = ray.lattice
    rows = _box_rows(ray)
    inverse = rational_inverse([lattice.generator_coords[i] for i in rows])
    bounds = [range(ray.generator_values[i] + 1) for i in rows]
    found = []
    for target in itertools.product(*bounds):
        dual = [sum((a * b for a, b in zip(row, target)), Fraction(0)) for row in inverse]
        if any(x.denominator != 1 for x in dual):
            continue
        values = [dot(g, dual) for g in lattice.generator_coords]
        if not all(0 <= v <= w for v, w in zip(values, ray.generator_values)):
            continue
        if not any(values) or tuple(values) == ray.generator_values:
            continue
        found.append(Ray.from_dual(lattice, [int(x) for x in dual]))
    return found


def is_indecomposable(ray: Ray) -> bool:
    """A nonzero ray is indecomposable when it is not a sum of two nonzero rays."""
    if ray.is_zero():
        raise RayError("the zero ray has no decompositions")
    return not proper_summands(ray)

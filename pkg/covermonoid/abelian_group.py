"""Finite abelian groups stored as products of cyclic factors, with homomorphism enumeration."""
import itertools
import logging
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import gcd, lcm, prod
from typing import Iterable, Optional, Sequence

from sympy import factorint, isprime
from sympy.utilities.iterables import partitions

from .errors import GroupError, InvariantViolation
from .exact_linalg import smith_normal_form

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FiniteAbelianGroup:
    factor_orders: tuple[int, ...] = ()

    def __post_init__(self):
        orders = tuple(int(o) for o in self.factor_orders)
        if any(o < 2 for o in orders):
            raise GroupError(f"cyclic factor orders must be at least 2, got {list(orders)}")
        object.__setattr__(self, "factor_orders", orders)

    @classmethod
    def parse(cls, spec: str) -> "FiniteAbelianGroup":
        """'4' is Z/4, '2,2' is Z/2 x Z/2, '1' or '' is the trivial group."""
        spec = spec.strip()
        if spec in ("", "1"):
            return cls(())
        try:
            return cls(tuple(int(part) for part in spec.split(",")))
        except ValueError:
            raise GroupError(f"cannot parse group spec {spec!r}") from None

    @property
    def size(self) -> int:
        return prod(self.factor_orders)

    @property
    def rank(self) -> int:
        return len(self.factor_orders)

    @property
    def spec(self) -> str:
        return ",".join(map(str, self.factor_orders)) or "1"

    def __str__(self) -> str:
        return " x ".join(f"Z/{o}" for o in self.factor_orders) or "0"

    @property
    def zero(self) -> "GroupElement":
        return GroupElement((0,) * self.rank, self)

    def element(self, coords: Sequence[int]) -> "GroupElement":
        if len(coords) != self.rank:
            raise GroupError(f"{list(coords)} has the wrong length for {self}")
        return GroupElement(tuple(c % o for c, o in zip(coords, self.factor_orders)), self)

    def parse_element(self, text: str) -> "GroupElement":
        cleaned = text.strip().strip("()")
        try:
            coords = [int(part) for part in cleaned.split(",")] if cleaned else []
        except ValueError:
            raise GroupError(f"cannot parse element {text!r}") from None
        return self.element(coords)

    @cached_property
    def _elements(self) -> tuple["GroupElement", ...]:
        return tuple(GroupElement(c, self) for c in itertools.product(*(range(o) for o in self.factor_orders)))

    def elements(self) -> list["GroupElement"]:
        return list(self._elements)

    def nonzero_elements(self) -> list["GroupElement"]:
        return list(self._elements[1:])

    def generators(self) -> list["GroupElement"]:
        return [self.element([int(i == j) for j in range(self.rank)]) for i in range(self.rank)]

    def index(self, x: "GroupElement") -> int:
        """Position of x in the lexicographic enumeration."""
        position = 0
        for c, o in zip(x.coords, self.factor_orders):
            position = position * o + c
        return position


@dataclass(frozen=True, order=True)
class GroupElement:
    coords: tuple[int, ...]
    group: FiniteAbelianGroup = field(compare=False, repr=False)

    def _same_group(self, other: "GroupElement"):
        if self.group != other.group:
            raise GroupError(f"elements of {self.group} and {other.group} cannot be combined")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._same_group(other)
        orders = self.group.factor_orders
        return GroupElement(tuple((a + b) % o for a, b, o in zip(self.coords, other.coords, orders)), self.group)

    def __neg__(self) -> "GroupElement":
        return GroupElement(tuple(-a % o for a, o in zip(self.coords, self.group.factor_orders)), self.group)

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        return self + (-other)

    def __mul__(self, k: int) -> "GroupElement":
        return GroupElement(tuple(k * a % o for a, o in zip(self.coords, self.group.factor_orders)), self.group)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def label(self) -> str:
        if self.group.rank == 1:
            return str(self.coords[0])
        return "(" + ",".join(map(str, self.coords)) + ")"


def add(a: GroupElement, b: GroupElement) -> GroupElement:
    return a + b


def order_of(a: GroupElement) -> int:
    return lcm(*(o // gcd(o, c) for c, o in zip(a.coords, a.group.factor_orders)))


def enumerate_elements(M: FiniteAbelianGroup) -> list[GroupElement]:
    return M.elements()


def subgroup_generated(M: FiniteAbelianGroup, gens: Iterable[GroupElement]) -> frozenset[GroupElement]:
    gens = list(gens)
    closure = {M.zero}
    frontier = [M.zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x + g
                if y not in closure:
                    closure.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(closure)


# --- Isomorphism types ---

def primary_partitions(M: FiniteAbelianGroup) -> dict[int, tuple[int, ...]]:
    """Per prime p, the exponents of the p-primary cyclic factors in decreasing order."""
    parts: dict[int, list[int]] = {}
    for o in M.factor_orders:
        for p, e in factorint(o).items():
            parts.setdefault(p, []).append(e)
    return {p: tuple(sorted(es, reverse=True)) for p, es in sorted(parts.items())}


def _from_partitions(parts: dict[int, Sequence[int]]) -> tuple[int, ...]:
    length = max((len(es) for es in parts.values()), default=0)
    factors = [prod(p ** es[i] for p, es in parts.items() if i < len(es)) for i in range(length)]
    return tuple(sorted(factors))


def invariant_factors(M: FiniteAbelianGroup) -> tuple[int, ...]:
    """Invariant factors d_1 | d_2 | ... of M, all at least 2."""
    return _from_partitions(primary_partitions(M))


def normalize(M: FiniteAbelianGroup) -> FiniteAbelianGroup:
    return FiniteAbelianGroup(invariant_factors(M))


def is_isomorphic(A: FiniteAbelianGroup, B: FiniteAbelianGroup) -> bool:
    return invariant_factors(A) == invariant_factors(B)


def is_elementary_power(M: FiniteAbelianGroup) -> Optional[tuple[int, int]]:
    factors = invariant_factors(M)
    if factors and len(set(factors)) == 1 and isprime(factors[0]):
        return factors[0], len(factors)
    return None


def is_quotient_of(G: FiniteAbelianGroup, M: FiniteAbelianGroup) -> bool:
    """True iff some homomorphism M -> G is surjective."""
    parts_m = primary_partitions(M)
    for p, parts_g in primary_partitions(G).items():
        parts = parts_m.get(p, ())
        if len(parts_g) > len(parts) or any(a > b for a, b in zip(parts_g, parts)):
            return False
    return True


def abelian_groups_of_order(n: int) -> list[FiniteAbelianGroup]:
    """One group per isomorphism class, in invariant-factor form."""
    choices = []
    for p, e in sorted(factorint(n).items()):
        options = []
        for part in partitions(e):
            options.append(sorted((k for k, mult in part.items() for _ in range(mult)), reverse=True))
        choices.append([(p, opt) for opt in options])
    groups = [FiniteAbelianGroup(_from_partitions(dict(combo))) for combo in itertools.product(*choices)]
    return sorted(groups, key=lambda G: (len(G.factor_orders), G.factor_orders))


# --- Homomorphisms ---

@dataclass(frozen=True)
class GroupHomomorphism:
    source: FiniteAbelianGroup
    target: FiniteAbelianGroup
    images: tuple[GroupElement, ...]

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        if len(self.images) != self.source.rank:
            raise GroupError("one image per canonical generator is required")
        for o, image in zip(self.source.factor_orders, self.images):
            if image.group != self.target:
                raise GroupError("images must lie in the target group")
            if not (o * image).is_zero():
                raise GroupError(f"image {image.label()} is not killed by {o}")

    def __call__(self, x: GroupElement) -> GroupElement:
        result = self.target.zero
        for c, image in zip(x.coords, self.images):
            result = result + c * image
        return result

    def is_surjective(self) -> bool:
        return len(subgroup_generated(self.target, self.images)) == self.target.size

    def compose(self, inner: "GroupHomomorphism") -> "GroupHomomorphism":
        """self after inner."""
        if inner.target != self.source:
            raise GroupError("homomorphisms are not composable")
        return GroupHomomorphism(inner.source, self.target, tuple(self(x) for x in inner.images))

    def kernel(self) -> frozenset[GroupElement]:
        return frozenset(x for x in self.source.elements() if self(x).is_zero())


def hom_from_values(source: FiniteAbelianGroup, target: FiniteAbelianGroup, gens: Sequence[GroupElement],
                    values: Sequence[GroupElement]) -> GroupHomomorphism:
    """The homomorphism sending gens[i] to values[i]; gens must generate the source."""
    table = {source.zero: target.zero}
    frontier = [source.zero]
    while frontier:
        nxt = []
        for x in frontier:
            for g, v in zip(gens, values):
                y = x + g
                image = table[x] + v
                if y in table:
                    if table[y] != image:
                        raise GroupError("prescribed values do not define a homomorphism")
                    continue
                table[y] = image
                nxt.append(y)
        frontier = nxt
    if len(table) != source.size:
        raise GroupError("prescribed elements do not generate the source")
    hom = GroupHomomorphism(source, target, tuple(table[g] for g in source.generators()))
    if any(hom(x) != table[x] for x in source.elements()):
        raise GroupError("prescribed values do not define a homomorphism")
    return hom


def enumerate_surjections(M: FiniteAbelianGroup, target: FiniteAbelianGroup) -> list[GroupHomomorphism]:
    if not is_quotient_of(target, M):
        return []
    candidates = [[t for t in target.elements() if (o * t).is_zero()] for o in M.factor_orders]
    result = []
    for images in itertools.product(*candidates):
        hom = GroupHomomorphism(M, target, images)
        if hom.is_surjective():
            result.append(hom)
    return result


# --- Two-generator presentations ---

def recognize_two_generator_presentation(M: FiniteAbelianGroup, m: GroupElement,
                                         n: GroupElement) -> tuple[int, int, int]:
    """Returns (r, alpha, N) with r*m = alpha*n, N = order of n and |M| = r*N."""
    if m.group != M or n.group != M:
        raise GroupError("m and n must be elements of M")
    if m.is_zero() or n.is_zero():
        raise GroupError("m and n must be nonzero")
    if m == n:
        raise GroupError("m and n must be distinct")
    if len(subgroup_generated(M, [m, n])) != M.size:
        raise GroupError(f"{m.label()} and {n.label()} do not generate {M}")
    N = order_of(n)
    multiples = {i * n: i for i in range(N)}
    r = next(s for s in range(1, M.size + 1) if s * m in multiples)
    alpha = multiples[r * m]
    if r * N != M.size:
        raise InvariantViolation(f"|M| = {M.size} but r*N = {r * N}")
    return r, alpha, N


@lru_cache(maxsize=None)
def presentation_group(r: int, alpha: int, N: int) -> tuple[FiniteAbelianGroup, GroupElement, GroupElement]:
    """
    Realize M_{r,alpha,N} = Z^2 / <(r,-alpha), (0,N)> as a product of cyclic groups.
    Returns the group and the images of e1, e2.
    """
    if r < 1 or N < 1 or not 0 <= alpha < N:
        raise GroupError(f"invalid presentation ({r}, {alpha}, {N})")
    _, D, V = smith_normal_form([[r, -alpha], [0, N]])
    diagonal = [D[0][0], D[1][1]]
    keep = [i for i in range(2) if diagonal[i] != 1]
    G = FiniteAbelianGroup(tuple(diagonal[i] for i in keep))
    e1 = G.element([V[0][i] for i in keep])
    e2 = G.element([V[1][i] for i in keep])
    return G, e1, e2


def quotient(M: FiniteAbelianGroup, H: Iterable[GroupElement]) -> tuple[FiniteAbelianGroup, GroupHomomorphism]:
    """M/<H> as a product of cyclic groups, with the projection."""
    k = M.rank
    relations = [[o * int(i == j) for j in range(k)] for i, o in enumerate(M.factor_orders)]
    relations += [list(h.coords) for h in H]
    _, D, V = smith_normal_form(relations)
    keep = [i for i in range(k) if D[i][i] != 1]
    Q = FiniteAbelianGroup(tuple(D[i][i] for i in keep))
    images = tuple(Q.element([V[j][i] for i in keep]) for j in range(k))
    return Q, GroupHomomorphism(M, Q, images)

"""
M-graded algebras over a field, given by their structure constants.

An algebra with graded basis (v_m) is recorded by psi with v_m v_n = psi_{m,n} v_{m+n}. Over a
field "unit" means "nonzero", so H and h are read off the zero pattern of psi. Everything is
computed over the exact field the table lives in; the support-level criteria used here do not
depend on that choice.
"""
import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Iterable, Mapping, Optional, Sequence

from sympy import factorint, isprime
from sympy.ntheory import discrete_log, primitive_root
from sympy.polys.domains import GF, QQ

from .abelian_group import FiniteAbelianGroup, GroupElement, quotient
from .cover_monoid import Pair, Ray, h_total, canonical_pair, h_profile, support_realizable
from .errors import AlgebraError, GroupError, InvariantViolation
from .exact_linalg import solve_integer_system

logger = logging.getLogger(__name__)

Scalar = Any


@lru_cache(maxsize=None)
def _prime_field(p: int):
    return GF(p, symmetric=False)


@dataclass(frozen=True)
class ScalarField:
    """QQ when characteristic is 0, GF(p) otherwise."""
    characteristic: int = 0

    def __post_init__(self):
        if self.characteristic and not isprime(self.characteristic):
            raise AlgebraError(f"GF({self.characteristic}) is not a field")

    @classmethod
    def parse(cls, text: str) -> "ScalarField":
        cleaned = text.strip().upper()
        if cleaned in ("QQ", "Q", "0"):
            return cls(0)
        if cleaned.startswith("GF(") and cleaned.endswith(")"):
            cleaned = cleaned[3:-1]
        try:
            return cls(int(cleaned))
        except ValueError:
            raise AlgebraError(f"cannot parse field {text!r}") from None

    @property
    def domain(self):
        return _prime_field(self.characteristic) if self.characteristic else QQ

    def __str__(self) -> str:
        return f"GF({self.characteristic})" if self.characteristic else "QQ"

    @property
    def one(self) -> Scalar:
        return self.domain.one

    @property
    def zero(self) -> Scalar:
        return self.domain.zero

    def __call__(self, value) -> Scalar:
        if isinstance(value, str):
            value = Fraction(value.strip())
        value = Fraction(value)
        if self.characteristic:
            F = self.domain
            if value.denominator % self.characteristic == 0:
                raise AlgebraError(f"{value} has no image in {self}")
            return F(value.numerator) / F(value.denominator)
        return QQ(value.numerator, value.denominator)

    def is_zero(self, x: Scalar) -> bool:
        return x == self.zero

    def power(self, x: Scalar, k: int) -> Scalar:
        """x**k with 0**0 = 1."""
        if k == 0:
            return self.one
        if k < 0:
            raise AlgebraError("negative exponents are not allowed")
        return x ** k

    def to_text(self, x: Scalar) -> str:
        if self.characteristic:
            return str(int(self.domain.to_sympy(x)) % self.characteristic)
        return str(QQ.to_sympy(x))

    def to_fraction(self, x: Scalar) -> Fraction:
        if self.characteristic:
            return Fraction(int(self.domain.to_sympy(x)) % self.characteristic)
        value = QQ.to_sympy(x)
        return Fraction(int(value.p), int(value.q))

    def random_unit(self, rng: random.Random) -> Scalar:
        if self.characteristic:
            return self(rng.randrange(1, self.characteristic))
        numerator = rng.choice([-1, 1]) * rng.randrange(1, 10)
        return self(Fraction(numerator, rng.randrange(1, 10)))


@dataclass(frozen=True)
class UnitCharacter:
    """Invertible scalars u_m with u_0 = 1; twists a table by u_m u_n / u_{m+n}."""
    group: FiniteAbelianGroup
    scalars: ScalarField
    values: tuple

    def __post_init__(self):
        values = tuple(self.values)
        if len(values) != self.group.size:
            raise AlgebraError("a unit character needs one value per group element")
        if values[0] != self.scalars.one:
            raise AlgebraError("u_0 must be 1")
        if any(self.scalars.is_zero(v) for v in values):
            raise AlgebraError("unit characters take invertible values")
        object.__setattr__(self, "values", values)

    def __call__(self, m: GroupElement) -> Scalar:
        return self.values[self.group.index(m)]

    @classmethod
    def trivial(cls, M: FiniteAbelianGroup, scalars: ScalarField) -> "UnitCharacter":
        return cls(M, scalars, (scalars.one,) * M.size)

    @classmethod
    def random(cls, M: FiniteAbelianGroup, scalars: ScalarField, rng: random.Random) -> "UnitCharacter":
        return cls(M, scalars, (scalars.one,) + tuple(scalars.random_unit(rng) for _ in range(M.size - 1)))


@dataclass(frozen=True, eq=False)
class MultiplicationTable:
    group: FiniteAbelianGroup
    scalars: ScalarField
    entries: tuple[tuple, ...] = field(repr=False)

    @classmethod
    def from_function(cls, M: FiniteAbelianGroup, scalars: ScalarField,
                      psi: Callable[[GroupElement, GroupElement], Scalar]) -> "MultiplicationTable":
        elements = M.elements()
        return cls(M, scalars, tuple(tuple(psi(m, n) for n in elements) for m in elements))

    def psi(self, m: GroupElement, n: GroupElement) -> Scalar:
        return self.entries[self.group.index(m)][self.group.index(n)]

    def is_nonzero(self, m: GroupElement, n: GroupElement) -> bool:
        return not self.scalars.is_zero(self.psi(m, n))

    def twist(self, u: UnitCharacter) -> "MultiplicationTable":
        if u.group != self.group or u.scalars != self.scalars:
            raise AlgebraError("the character lives on another group or field")
        return MultiplicationTable.from_function(
            self.group, self.scalars, lambda m, n: u(m) * u(n) / u(m + n) * self.psi(m, n))

    def zero_pairs(self) -> frozenset[Pair]:
        """Canonical pairs of nonzero elements where psi vanishes."""
        elements = self.group.nonzero_elements()
        return frozenset(canonical_pair(m, n) for i, m in enumerate(elements) for n in elements[i:]
                         if not self.is_nonzero(m, n))

    def __eq__(self, other) -> bool:
        if not isinstance(other, MultiplicationTable):
            return NotImplemented
        return self.group == other.group and self.scalars == other.scalars and self.entries == other.entries

    def __hash__(self) -> int:
        return hash((self.group, self.scalars, self.entries))

    def to_json(self) -> dict:
        return {
            "field": str(self.scalars),
            "group": self.group.spec,
            "entries": [[self.scalars.to_text(x) for x in row] for row in self.entries],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "MultiplicationTable":
        try:
            M = FiniteAbelianGroup.parse(str(data["group"]))
            scalars = ScalarField.parse(str(data["field"]))
            rows = data["entries"]
        except KeyError as exc:
            raise AlgebraError(f"table is missing the {exc.args[0]!r} key") from None
        if len(rows) != M.size or any(len(row) != M.size for row in rows):
            raise AlgebraError(f"a table over {M} needs a {M.size}x{M.size} matrix")
        return cls(M, scalars, tuple(tuple(scalars(str(x)) for x in row) for row in rows))


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    rule: Optional[str] = None
    elements: tuple[GroupElement, ...] = ()

    def describe(self) -> str:
        if self.ok:
            return "ok"
        return f"{self.rule} fails at ({', '.join(x.label() for x in self.elements)})"


def validate(table: MultiplicationTable) -> ValidationReport:
    M = table.group
    elements = M.elements()
    one = table.scalars.one
    for m in elements:
        if table.psi(m, M.zero) != one:
            return ValidationReport(False, "unit", (m,))
    for i, m in enumerate(elements):
        for n in elements[i + 1:]:
            if table.psi(m, n) != table.psi(n, m):
                return ValidationReport(False, "symmetry", (m, n))
    for m in elements:
        for n in elements:
            for t in elements:
                if table.psi(m, n) * table.psi(m + n, t) != table.psi(n, t) * table.psi(n + t, m):
                    return ValidationReport(False, "associativity", (m, n, t))
    return ValidationReport(True)


def from_ray(ray: Ray, scalars: ScalarField, twist: Optional[UnitCharacter] = None) -> MultiplicationTable:
    """psi_{m,n} = 0^{E_{m,n}}, twisted by u when given."""
    table = MultiplicationTable.from_function(
        ray.group, scalars, lambda m, n: scalars.one if ray.value(m, n) == 0 else scalars.zero)
    return table.twist(twist) if twist is not None else table


def zero_table(M: FiniteAbelianGroup, scalars: ScalarField) -> MultiplicationTable:
    return MultiplicationTable.from_function(
        M, scalars, lambda m, n: scalars.one if m.is_zero() or n.is_zero() else scalars.zero)


# --- H and h ---

def H_of_table(table: MultiplicationTable) -> frozenset[GroupElement]:
    H = frozenset(m for m in table.group.elements() if table.is_nonzero(m, -m))
    if any(a + b not in H for a in H for b in H):
        raise InvariantViolation("H of a table is not a subgroup")
    return H


def h_components(table: MultiplicationTable) -> dict[GroupElement, int]:
    return h_profile(table.group, H_of_table(table), table.is_nonzero)


def h_of_table(table: MultiplicationTable) -> int:
    H = H_of_table(table)
    return h_total(h_profile(table.group, H, table.is_nonzero), H)


def minimum_generating_degrees(table: MultiplicationTable) -> frozenset[GroupElement]:
    if len(H_of_table(table)) != 1:
        raise AlgebraError("minimum generating degrees need H = 0")
    return frozenset(t for t, h in h_components(table).items() if h)


def lexicographic_section(M: FiniteAbelianGroup, projection) -> dict[GroupElement, GroupElement]:
    section: dict[GroupElement, GroupElement] = {}
    for x in M.elements():
        section.setdefault(projection(x), x)
    return section


def reduce_mod_H(table: MultiplicationTable, H: Iterable[GroupElement],
                 section: Optional[Mapping[GroupElement, GroupElement]] = None) -> MultiplicationTable:
    """
    The M/H-graded algebra obtained from a table whose restriction to H is the split torsor.
    The default section picks the lexicographically smallest representative of each coset.
    """
    M = table.group
    H = frozenset(H) | {M.zero}
    if any(a + b not in H for a in H for b in H):
        raise GroupError("H is not a subgroup")
    if not H <= H_of_table(table):
        raise AlgebraError("H is not contained in H of the table")
    one = table.scalars.one
    if any(table.psi(a, b) != one for a in H for b in H):
        raise AlgebraError("the restriction to H is not the split torsor; twist it first")
    Q, projection = quotient(M, H)
    sigma = dict(section) if section is not None else lexicographic_section(M, projection)
    if any(projection(sigma[q]) != q for q in Q.elements()):
        raise AlgebraError("section does not lift the quotient")

    def psi(a, b):
        h = sigma[a + b] - sigma[a] - sigma[b]
        return table.psi(sigma[a], sigma[b]) * table.psi(h, sigma[a] + sigma[b])

    return MultiplicationTable.from_function(Q, table.scalars, psi)


# --- Twists ---

def _coboundary_rows(M: FiniteAbelianGroup, pairs: Sequence[Pair]) -> list[list[int]]:
    """Rows of x -> x_m + x_n - x_{m+n} on the unknowns x_l, l != 0."""
    rows = []
    for m, n in pairs:
        row = [0] * (M.size - 1)
        for element, sign in ((m, 1), (n, 1), (m + n, -1)):
            if not element.is_zero():
                row[M.index(element) - 1] += sign
        rows.append(row)
    return rows


def is_twist_equivalent(first: MultiplicationTable,
                        second: MultiplicationTable) -> Optional[UnitCharacter]:
    """
    A character u over the table's own field with second = first twisted by u, or None.

    The ratios psi'/psi are written in a basis of the unit group (discrete logarithms for
    GF(p), prime exponents and sign for QQ) and the coboundary equations are solved over Z.
    """
    if first.group != second.group or first.scalars != second.scalars:
        raise AlgebraError("tables over different groups or fields")
    M, scalars = first.group, first.scalars
    if first.zero_pairs() != second.zero_pairs():
        return None
    elements = M.elements()
    pairs = [(m, n) for i, m in enumerate(elements) for n in elements[i:] if first.is_nonzero(m, n)]
    ratios = [second.psi(m, n) / first.psi(m, n) for m, n in pairs]
    A = _coboundary_rows(M, pairs)
    k = M.size - 1

    if scalars.characteristic:
        p = scalars.characteristic
        g = primitive_root(p)
        logs = [discrete_log(p, int(scalars.to_fraction(x)), g) for x in ratios]
        solution = solve_integer_system([row + [(p - 1) * int(i == j) for j in range(len(A))]
                                         for i, row in enumerate(A)], logs, k + len(A))
        if solution is None:
            return None
        values = [scalars.power(scalars(g), x % (p - 1)) for x in solution[:k]]
    else:
        fractions = [scalars.to_fraction(x) for x in ratios]
        primes = sorted({q for f in fractions for q in factorint(f.numerator * f.denominator)})
        values = [Fraction(1)] * k
        for q in primes:
            exponents = [factorint(f.numerator).get(q, 0) - factorint(f.denominator).get(q, 0) for f in fractions]
            solution = solve_integer_system(A, exponents, k)
            if solution is None:
                return None
            values = [v * Fraction(q) ** e for v, e in zip(values, solution)]
        signs = [int(f < 0) for f in fractions]
        solution = solve_integer_system([row + [2 * int(i == j) for j in range(len(A))]
                                         for i, row in enumerate(A)], signs, k + len(A))
        if solution is None:
            return None
        values = [scalars(-v if e % 2 else v) for v, e in zip(values, solution[:k])]

    u = UnitCharacter(M, scalars, (scalars.one,) + tuple(values))
    if first.twist(u) != second:
        raise InvariantViolation("twist solution does not reproduce the second table")
    return u


def in_main_component(table: MultiplicationTable) -> tuple[bool, Optional[Ray]]:
    """Whether the zero pattern of the table is the support of a ray, with that ray."""
    ray = support_realizable(table.group, table.zero_pairs())
    return ray is not None, ray


# --- Rewriting oracle ---

@dataclass(frozen=True)
class BinomialRule:
    """s^lead -> coefficient * s^tail on exponent pairs (i, j) of s^i t^j."""
    lead: tuple[int, int]
    coefficient: Scalar
    tail: tuple[int, int]

    def divides(self, monomial: tuple[int, int]) -> bool:
        return self.lead[0] <= monomial[0] and self.lead[1] <= monomial[1]


def standard_monomials(leads: Sequence[tuple[int, int]]) -> list[tuple[int, int]]:
    """Exponents not divisible by any lead; needs pure powers of s and of t among the leads."""
    s_bound = min((i for i, j in leads if j == 0), default=None)
    t_bound = min((j for i, j in leads if i == 0), default=None)
    if s_bound is None or t_bound is None:
        raise AlgebraError("the monomial ideal has infinite colength")
    return [(i, j) for i in range(s_bound) for j in range(t_bound)
            if not any(a <= i and b <= j for a, b in leads)]


def normal_form(rules: Sequence[BinomialRule], monomial: tuple[int, int], scalars: ScalarField,
                weights: tuple[int, int], max_steps: int = 10_000) -> tuple[Scalar, tuple[int, int]]:
    coefficient = scalars.one
    for _ in range(max_steps):
        if scalars.is_zero(coefficient):
            return scalars.zero, (0, 0)
        rule = next((r for r in rules if r.divides(monomial)), None)
        if rule is None:
            return coefficient, monomial
        after = (monomial[0] - rule.lead[0] + rule.tail[0], monomial[1] - rule.lead[1] + rule.tail[1])
        if weights[0] * after[0] + weights[1] * after[1] >= weights[0] * monomial[0] + weights[1] * monomial[1]:
            raise AlgebraError(f"rule {rule.lead} -> {rule.tail} does not decrease the weighted degree")
        coefficient *= rule.coefficient
        monomial = after
    raise AlgebraError("rewriting did not terminate")


def quotient_ring_structure_constants(M: FiniteAbelianGroup, m: GroupElement, n: GroupElement,
                                      rules: Sequence[BinomialRule],
                                      basis: Mapping[GroupElement, tuple[int, int]],
                                      scalars: ScalarField,
                                      weights: tuple[int, int]) -> MultiplicationTable:
    """
    Multiply the basis monomials s^A t^B of k[s,t]/(rules) with deg s = m, deg t = n by
    rewriting, and read off psi. Rewriting strictly lowers the weighted degree.
    """
    for l, (a, b) in basis.items():
        if a * m + b * n != l:
            raise AlgebraError(f"basis monomial of {l.label()} has degree {(a * m + b * n).label()}")
    for rule in rules:
        lead = rule.lead[0] * m + rule.lead[1] * n
        if not scalars.is_zero(rule.coefficient) and lead != rule.tail[0] * m + rule.tail[1] * n:
            raise AlgebraError(f"rule {rule.lead} -> {rule.tail} is not homogeneous")

    def psi(a, b):
        product = (basis[a][0] + basis[b][0], basis[a][1] + basis[b][1])
        coefficient, monomial = normal_form(rules, product, scalars, weights)
        if scalars.is_zero(coefficient):
            return scalars.zero
        if monomial != basis[a + b]:
            raise AlgebraError(f"v_{a.label()} v_{b.label()} is not a multiple of v_{(a + b).label()}")
        return coefficient

    return MultiplicationTable.from_function(M, scalars, psi)

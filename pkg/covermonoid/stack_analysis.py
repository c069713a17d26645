"""
Global verdicts on the moduli of covers: smoothness and reducibility of the whole stack, the
loci {h <= 1} and {h <= 2}, and the toric fan of a collection of smooth sequences.
"""
import enum
import itertools
import logging
from dataclasses import dataclass
from typing import Iterator, Optional, Sequence, Union

from .abelian_group import FiniteAbelianGroup, GroupElement, is_isomorphic
from .cover_monoid import (
    Pair,
    Ray,
    all_smooth_sequences,
    build_cover_lattice,
    canonical_pair,
    h_of_ray,
    is_smooth_sequence,
    pardini_maps,
    pardini_ray,
    relation_text,
)
from .errors import AlgebraError, FanError, GroupError, InvariantViolation
from .exact_linalg import is_unimodular, solve_homogeneous_system
from .graded_algebra import MultiplicationTable, h_of_table, validate
from .two_degree import enumerate_theta2

logger = logging.getLogger(__name__)

Triple = tuple[GroupElement, GroupElement, GroupElement]


def _groups(*specs: str) -> list[FiniteAbelianGroup]:
    return [FiniteAbelianGroup.parse(spec) for spec in specs]


SMOOTH_GROUPS = _groups("2", "3", "2,2")
IRREDUCIBLE_GROUPS = _groups("2", "3", "2,2", "4")
UNDECIDED_GROUPS = _groups("5", "6", "7", "2,2,2")


def _is_one_of(M: FiniteAbelianGroup, groups: Sequence[FiniteAbelianGroup]) -> bool:
    return any(is_isomorphic(M, G) for G in groups)


def _require_nontrivial(M: FiniteAbelianGroup):
    if M.size < 2:
        raise GroupError("the moduli of covers is only analysed for nontrivial groups")


# --- Smoothness of the stack ---

def is_singularity_witness(M: FiniteAbelianGroup, m: GroupElement, n: GroupElement, t: GroupElement) -> bool:
    values = (m, n, t, m + n, n + t, m + n + t)
    return all(x.group == M and not x.is_zero() for x in values) and m != t


def singularity_relation(m: GroupElement, n: GroupElement, t: GroupElement) -> str:
    """x_{m,n} x_{m+n,t} = x_{n,t} x_{m,n+t}, a binomial that is not a product of variables."""
    return relation_text([canonical_pair(m, n), canonical_pair(m + n, t)],
                         [canonical_pair(n, t), canonical_pair(m, n + t)])


@dataclass(frozen=True)
class SmoothnessVerdict:
    group: FiniteAbelianGroup
    smooth: bool
    witness: Optional[Triple] = None

    @property
    def relation(self) -> Optional[str]:
        return singularity_relation(*self.witness) if self.witness else None


def smoothness_verdict(M: FiniteAbelianGroup) -> SmoothnessVerdict:
    _require_nontrivial(M)
    elements = M.nonzero_elements()
    witness = next((triple for triple in itertools.product(elements, repeat=3)
                    if is_singularity_witness(M, *triple)), None)
    smooth = witness is None
    if smooth != _is_one_of(M, SMOOTH_GROUPS):
        raise InvariantViolation(f"witness search on {M} disagrees with the list of smooth groups")
    return SmoothnessVerdict(M, smooth, witness)


# --- Reducibility ---

def _forbidden_values(m: GroupElement, n: GroupElement, t: GroupElement) -> set[GroupElement]:
    return {m.group.zero, m, n, t, m - n, n - m, n - t, t - n, m - t,
            2 * m - t, 2 * n - t, m + n - t, m + n - 2 * t}


def is_reducibility_certificate(M: FiniteAbelianGroup, m: GroupElement, n: GroupElement,
                                t: GroupElement, a: GroupElement) -> bool:
    if any(x.group != M for x in (m, n, t, a)):
        return False
    if len({m, n, t}) < 3 or any(x.is_zero() for x in (m, n, t)):
        return False
    return a not in _forbidden_values(m, n, t) and 2 * a != m + n - t


def reducibility_certificate(M: FiniteAbelianGroup) -> Optional[tuple[GroupElement, ...]]:
    elements = M.nonzero_elements()
    for m, n, t in itertools.permutations(elements, 3):
        forbidden = _forbidden_values(m, n, t)
        target = m + n - t
        for a in elements:
            if a not in forbidden and 2 * a != target:
                return m, n, t, a
    return None


class Verdict(str, enum.Enum):
    REDUCIBLE = "reducible"
    IRREDUCIBLE = "irreducible"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class IrreducibilityReport:
    group: FiniteAbelianGroup
    verdict: Verdict
    reason: str
    certificate: Optional[tuple[GroupElement, ...]] = None


def irreducibility_report(M: FiniteAbelianGroup) -> IrreducibilityReport:
    _require_nontrivial(M)
    if _is_one_of(M, UNDECIDED_GROUPS):
        return IrreducibilityReport(M, Verdict.UNKNOWN, "no certificate and no proof of irreducibility")
    if _is_one_of(M, SMOOTH_GROUPS):
        return IrreducibilityReport(M, Verdict.IRREDUCIBLE, "the stack is smooth, hence equal to its main component")
    if _is_one_of(M, IRREDUCIBLE_GROUPS):
        return IrreducibilityReport(M, Verdict.IRREDUCIBLE, "integral and normal: a single binomial relation")
    certificate = reducibility_certificate(M)
    if certificate is None:
        raise InvariantViolation(f"no reducibility certificate found for {M}")
    return IrreducibilityReport(M, Verdict.REDUCIBLE, "a cover outside the main component exists", certificate)


# --- h loci ---

@dataclass(frozen=True)
class HLocusReport:
    level: int
    h: int
    member: bool
    witness: tuple[Ray, ...] = ()


def _zero_support(target: Union[Ray, MultiplicationTable]) -> tuple[frozenset[Pair], int, FiniteAbelianGroup]:
    if isinstance(target, Ray):
        return target.support, h_of_ray(target), target.group
    report = validate(target)
    if not report.ok:
        raise AlgebraError(f"not a multiplication: {report.describe()}")
    return target.zero_pairs(), h_of_table(target), target.group


def _span_supports(sequence: Sequence[Ray]) -> Iterator[frozenset[Pair]]:
    """Supports of N-combinations of the sequence: unions over subsets of the rays."""
    for k in range(len(sequence) + 1):
        for subset in itertools.combinations(sequence, k):
            yield frozenset().union(*(ray.support for ray in subset))


def h_locus_membership(target: Union[Ray, MultiplicationTable], level: int) -> HLocusReport:
    """
    Decide h <= level twice: from h itself and from the zero pattern being that of a ray in the
    span of a Pardini ray (level 1) or of a sequence of Theta2 (level 2).
    """
    if level not in (1, 2):
        raise GroupError(f"h loci are tested at levels 1 and 2, not {level}")
    support, h, M = _zero_support(target)
    if level == 1:
        sequences = [(pardini_ray(eta),) for eta in pardini_maps(M)]
    else:
        sequences = enumerate_theta2(M)
    witness: tuple[Ray, ...] = ()
    found = not support
    for sequence in sequences:
        if found:
            break
        if any(candidate == support for candidate in _span_supports(sequence)):
            found, witness = True, tuple(sequence)
    if found != (h <= level):
        raise InvariantViolation(f"h = {h} but the support test at level {level} says {found}")
    return HLocusReport(level, h, found, witness)


# --- Fans ---

@dataclass(frozen=True)
class Fan:
    lattice_rank: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]

    def faces(self) -> Iterator[tuple[int, ...]]:
        """Every face of every maximal cone, each once, the zero cone first."""
        seen = set()
        for cone in self.max_cones:
            for k in range(len(cone) + 1):
                for face in itertools.combinations(cone, k):
                    if face not in seen:
                        seen.add(face)
                        yield face

    def to_text(self) -> str:
        lines = [f"rank {self.lattice_rank}"]
        lines += ["ray " + " ".join(map(str, ray)) for ray in self.rays]
        lines += ["cone " + " ".join(map(str, cone)) for cone in self.max_cones]
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "lattice_rank": self.lattice_rank,
            "rays": [list(ray) for ray in self.rays],
            "max_cones": [list(cone) for cone in self.max_cones],
        }


def _meet_in_common_face(rays: Sequence[tuple[int, ...]], first: tuple[int, ...], second: tuple[int, ...],
                         rank: int) -> bool:
    common = set(first) & set(second)
    k1, k2 = len(first), len(second)
    # x = sum l_i v_i = sum u_j v_j with some weight outside the common rays
    equalities = [[rays[i][c] for i in first] + [-rays[j][c] for j in second] for c in range(rank)]
    nonnegative = [[int(col == i) for col in range(k1 + k2)] for i in range(k1 + k2)]
    outside = [int(i not in common) for i in first] + [int(j not in common) for j in second]
    if not any(outside):
        return True
    return solve_homogeneous_system(equalities, nonnegative, [outside], k1 + k2) is None


def smooth_locus_fan(M: FiniteAbelianGroup, theta: Sequence[Sequence[Ray]]) -> Fan:
    lattice = build_cover_lattice(M)
    index: dict[tuple[int, ...], int] = {}
    cones = set()
    for sequence in theta:
        if any(ray.group != M for ray in sequence):
            raise FanError(f"every ray must live on {M}")
        if not sequence or not is_smooth_sequence(sequence)[0]:
            raise FanError("every sequence of the fan must be smooth")
        vectors = [tuple(ray.dual) for ray in sequence]
        if not is_unimodular(vectors):
            raise InvariantViolation("a smooth sequence does not extend to a lattice basis")
        cones.add(tuple(sorted(index.setdefault(v, len(index)) for v in vectors)))
    maximal = sorted(c for c in cones if not any(set(c) < set(other) for other in cones))

    rays = sorted(index, key=index.get)
    for first, second in itertools.combinations(maximal, 2):
        if not _meet_in_common_face(rays, first, second, lattice.rank):
            raise FanError(f"cones {first} and {second} do not meet in a common face")
    logger.debug("fan on %s: %d rays, %d maximal cones", M, len(rays), len(maximal))
    return Fan(lattice.rank, tuple(rays), tuple(maximal))


def full_smooth_locus_fan(M: FiniteAbelianGroup) -> Fan:
    return smooth_locus_fan(M, all_smooth_sequences(M))


def theta2_fan(M: FiniteAbelianGroup) -> Fan:
    return smooth_locus_fan(M, enumerate_theta2(M))

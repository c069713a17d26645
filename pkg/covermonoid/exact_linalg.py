"""
Exact integer and rational linear algebra.

Integer matrices are lists of rows of Python ints and nothing in here touches floating point.
The normal forms carry their unimodular transforms so callers can map coordinates; ranks,
determinants and inverses go through sympy's DomainMatrix over ZZ and QQ. Feasibility of
mixed strict/non-strict homogeneous systems is decided by Fourier-Motzkin elimination over
Fractions, with back-substitution producing an explicit solution.
"""
import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, inf, lcm
from typing import Optional, Sequence

from sympy import QQ, ZZ
from sympy.polys.matrices import DomainMatrix

from .errors import InvariantViolation, LatticeError

logger = logging.getLogger(__name__)

IntVector = tuple[int, ...]
IntMatrix = list[list[int]]


# --- Small helpers ---

def identity(n: int) -> IntMatrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> IntMatrix:
    columns = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, col)) for col in columns] for row in A]


def transpose(A: Sequence[Sequence[int]], ncols: Optional[int] = None) -> IntMatrix:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def primitive(v: Sequence[int]) -> IntVector:
    g = gcd(*v)
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


def clear_denominators(values: Sequence[Fraction]) -> IntVector:
    """Scale a rational vector by a positive factor to a primitive integer vector."""
    scale = lcm(*(Fraction(x).denominator for x in values)) if values else 1
    return primitive([int(Fraction(x) * scale) for x in values])


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        return -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def _domain_matrix(A: Sequence[Sequence], ncols: int, domain) -> DomainMatrix:
    if domain == QQ:
        rows = [[QQ(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in A]
    else:
        rows = [[domain(int(x)) for x in row] for row in A]
    return DomainMatrix(rows, (len(A), ncols), domain)


def rank(A: Sequence[Sequence], ncols: Optional[int] = None) -> int:
    if not A:
        return 0
    ncols = len(A[0]) if ncols is None else ncols
    if ncols == 0:
        return 0
    return _domain_matrix(A, ncols, QQ).rank()


def determinant(A: Sequence[Sequence[int]]) -> int:
    n = len(A)
    if n == 0:
        return 1
    return int(ZZ.to_sympy(_domain_matrix(A, n, ZZ).det()))


def rational_inverse(A: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(A)
    inverse = _domain_matrix(A, n, QQ).inv().to_Matrix()
    return [[Fraction(int(inverse[i, j].p), int(inverse[i, j].q)) for j in range(n)] for i in range(n)]


# --- Normal forms ---

def smith_normal_form(A: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """
    Returns (U, D, V) with U*A*V = D, D diagonal with d_i | d_{i+1} and non-negative entries.
    U and V are unimodular.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    D = [list(row) for row in A]
    U = identity(m)
    V = identity(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(target, source, factor):
        D[target] = [x + factor * y for x, y in zip(D[target], D[source])]
        U[target] = [x + factor * y for x, y in zip(U[target], U[source])]

    def add_col(target, source, factor):
        for row in D:
            row[target] += factor * row[source]
        for row in V:
            row[target] += factor * row[source]

    for t in range(min(m, n)):
        while True:
            entries = [(abs(D[i][j]), i, j) for i in range(t, m) for j in range(t, n) if D[i][j]]
            if not entries:
                return U, D, V
            _, pi, pj = min(entries)
            swap_rows(t, pi)
            swap_cols(t, pj)
            pivot = D[t][t]
            clean = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(i, t, -(D[i][t] // pivot))
                    clean = clean and D[i][t] == 0
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(j, t, -(D[t][j] // pivot))
                    clean = clean and D[t][j] == 0
            if not clean:
                continue
            # divisibility of the remaining block by the pivot
            offender = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                             if D[i][j] % pivot), None)
            if offender is None:
                break
            add_row(t, offender[0], 1)
        if D[t][t] < 0:
            D[t] = [-x for x in D[t]]
            U[t] = [-x for x in U[t]]
    return U, D, V


def hermite_normal_form(A: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """
    Row-style Hermite normal form: returns (H, U) with H = U*A, U unimodular.

    Pivots are positive, entries above a pivot lie in [0, pivot) and zero rows sit at the bottom.
    """
    m = len(A)
    n = len(A[0]) if m else 0
    H = [list(row) for row in A]
    U = identity(m)
    row = 0
    for col in range(n):
        if row == m:
            break
        while True:
            nonzero = [i for i in range(row, m) if H[i][col]]
            if not nonzero:
                break
            pivot_row = min(nonzero, key=lambda i: abs(H[i][col]))
            H[row], H[pivot_row] = H[pivot_row], H[row]
            U[row], U[pivot_row] = U[pivot_row], U[row]
            done = True
            for i in range(row + 1, m):
                if H[i][col]:
                    q = H[i][col] // H[row][col]
                    H[i] = [x - q * y for x, y in zip(H[i], H[row])]
                    U[i] = [x - q * y for x, y in zip(U[i], U[row])]
                    done = done and H[i][col] == 0
            if done:
                break
        if H[row][col] == 0:
            continue
        if H[row][col] < 0:
            H[row] = [-x for x in H[row]]
            U[row] = [-x for x in U[row]]
        for i in range(row):
            q = H[i][col] // H[row][col]
            if q:
                H[i] = [x - q * y for x, y in zip(H[i], H[row])]
                U[i] = [x - q * y for x, y in zip(U[i], U[row])]
        row += 1
    return H, U


# --- Lattices ---

def lattice_basis(gens: Sequence[Sequence[int]], ncols: Optional[int] = None) -> IntMatrix:
    """
    Reduced Hermite basis of the lattice spanned by gens, built by inserting one vector at a time.
    Two generating sets span the same lattice iff their bases are equal.
    """
    gens = [list(g) for g in gens]
    n = len(gens[0]) if gens else (ncols or 0)
    pivots: dict[int, list[int]] = {}
    for v in gens:
        for col in range(n):
            if v[col] == 0:
                continue
            current = pivots.get(col)
            if current is None:
                pivots[col] = v if v[col] > 0 else [-x for x in v]
                break
            a, b = current[col], v[col]
            g, s, t = _xgcd(a, b)
            pivots[col] = [s * x + t * y for x, y in zip(current, v)]
            v = [(b // g) * x - (a // g) * y for x, y in zip(current, v)]
    columns = sorted(pivots)
    basis = [pivots[c] for c in columns]
    for j, c in enumerate(columns):
        for i in range(j):
            q = basis[i][c] // basis[j][c]
            if q:
                basis[i] = [x - q * y for x, y in zip(basis[i], basis[j])]
    return basis


def coordinates_in(basis: Sequence[Sequence[int]], v: Sequence[int]) -> Optional[list[int]]:
    """Integer coordinates of v in an echelon basis, or None when v is not in the lattice."""
    v = list(v)
    coords = [0] * len(basis)
    pivot_of = {}
    for i, row in enumerate(basis):
        pivot_of[next(c for c, x in enumerate(row) if x)] = i
    for col in range(len(v)):
        if v[col] == 0:
            continue
        i = pivot_of.get(col)
        if i is None or v[col] % basis[i][col]:
            return None
        q = v[col] // basis[i][col]
        coords[i] = q
        v = [x - q * y for x, y in zip(v, basis[i])]
    return coords


def lattice_contains(basis: Sequence[Sequence[int]], v: Sequence[int]) -> bool:
    return coordinates_in(basis, v) is not None


def kernel_lattice_basis(A: Sequence[Sequence[int]], ncols: Optional[int] = None) -> IntMatrix:
    """Saturated basis of {x in Z^n : A x = 0}, in reduced Hermite form."""
    n = len(A[0]) if A else ncols
    if n is None:
        raise LatticeError("kernel of an empty matrix needs an explicit column count")
    H, U = hermite_normal_form(transpose(A, n))
    kernel = [U[i] for i in range(n) if not any(H[i])]
    return lattice_basis(kernel, n)


def sublattice_equal(gens_a: Sequence[Sequence[int]], gens_b: Sequence[Sequence[int]],
                     ncols: Optional[int] = None) -> bool:
    basis_a = lattice_basis(gens_a, ncols)
    basis_b = lattice_basis(gens_b, ncols)
    return (all(lattice_contains(basis_b, g) for g in gens_a)
            and all(lattice_contains(basis_a, g) for g in gens_b))


def lattice_index(sub: Sequence[Sequence[int]], sup: Sequence[Sequence[int]]):
    """Index [sup : sub] as an int, or math.inf when sub has smaller rank."""
    basis = lattice_basis(sup)
    coords = []
    for g in sub:
        c = coordinates_in(basis, g)
        if c is None:
            raise LatticeError(f"{list(g)} does not lie in the ambient lattice")
        coords.append(c)
    if rank(coords, len(basis)) < len(basis):
        return inf
    _, D, _ = smith_normal_form(coords)
    index = 1
    for i in range(len(basis)):
        index *= D[i][i]
    return index


def solve_integer_system(A: Sequence[Sequence[int]], b: Sequence[int], ncols: int) -> Optional[list[int]]:
    """An integer solution of A x = b, or None."""
    if not A:
        return [0] * ncols if not any(b) else None
    U, D, V = smith_normal_form(A)
    c = [dot(row, b) for row in U]
    y = [0] * ncols
    for i, value in enumerate(c):
        pivot = D[i][i] if i < ncols else 0
        if pivot == 0:
            if value:
                return None
            continue
        if value % pivot:
            return None
        y[i] = value // pivot
    return [dot(row, y) for row in V]


def is_unimodular(vectors: Sequence[Sequence[int]]) -> bool:
    """True iff the vectors are part of a Z-basis of the ambient lattice."""
    if not vectors:
        return True
    if rank(vectors) < len(vectors):
        return False
    _, D, _ = smith_normal_form(vectors)
    return all(D[i][i] == 1 for i in range(len(vectors)))


# --- Cones ---

@dataclass(frozen=True)
class RationalCone:
    rank: int
    generators: tuple[IntVector, ...]

    def __post_init__(self):
        if self.rank < 1:
            raise LatticeError("ambient rank must be at least 1")
        for g in self.generators:
            if len(g) != self.rank:
                raise LatticeError(f"generator {g} does not have length {self.rank}")
            if not any(g):
                raise LatticeError("cone generators must be nonzero")

    def spans(self) -> bool:
        return rank(list(self.generators), self.rank) == self.rank


def _tight(ray: IntVector, constraints: Sequence[IntVector]) -> frozenset[int]:
    return frozenset(i for i, g in enumerate(constraints) if dot(g, ray) == 0)


def dual_cone_extreme_rays(cone: RationalCone) -> list[IntVector]:
    """
    Extreme rays of {f : f(g) >= 0 for every generator g}, by double description.

    Constraints enter in lexicographic order; two rays are adjacent when the constraints tight
    at both have rank d - 2. Output rays are primitive and sorted.
    """
    d = cone.rank
    gens = sorted(set(cone.generators))
    if rank(gens, d) != d:
        raise LatticeError("cone does not span its ambient space")

    chosen: list[IntVector] = []
    for g in gens:
        if rank(chosen + [g], d) > len(chosen):
            chosen.append(g)
            if len(chosen) == d:
                break
    inverse = rational_inverse(chosen)
    rays = [clear_denominators([inverse[i][j] for i in range(d)]) for j in range(d)]
    processed = list(chosen)
    chosen_set = set(chosen)
    remaining = [g for g in gens if g not in chosen_set]

    for step, g in enumerate(remaining):
        values = {ray: dot(g, ray) for ray in rays}
        positive = [ray for ray in rays if values[ray] > 0]
        negative = [ray for ray in rays if values[ray] < 0]
        kept = [ray for ray in rays if values[ray] >= 0]
        if negative:
            tight = {ray: _tight(ray, processed) for ray in positive + negative}
            for p in positive:
                for q in negative:
                    common = tight[p] & tight[q]
                    if len(common) < d - 2:
                        continue
                    if rank([processed[i] for i in common], d) != d - 2:
                        continue
                    kept.append(primitive([values[p] * b - values[q] * a for a, b in zip(p, q)]))
        rays = sorted(set(kept))
        processed.append(g)
        logger.debug("double description: constraint %d/%d, %d rays", step + 1, len(remaining), len(rays))
    return sorted(rays)


def dual_cone_extreme_rays_bruteforce(cone: RationalCone) -> list[IntVector]:
    """Facet normals of all (d-1)-subsets of generators, filtered by the sign condition."""
    d = cone.rank
    gens = sorted(set(cone.generators))
    if rank(gens, d) != d:
        raise LatticeError("cone does not span its ambient space")
    found = set()
    for subset in itertools.combinations(gens, d - 1):
        if rank(list(subset), d) != d - 1:
            continue
        normal = kernel_lattice_basis(list(subset), d)[0]
        values = [dot(g, normal) for g in gens]
        if all(v >= 0 for v in values):
            found.add(tuple(normal))
        elif all(v <= 0 for v in values):
            found.add(tuple(-x for x in normal))
    return sorted(found)


# --- Fourier-Motzkin feasibility ---

# coefficients, strict flag, indices of the original rows it was derived from
Constraint = tuple[IntVector, bool, frozenset[int]]


def _normalize_system(rows: Sequence[Constraint]) -> Optional[list[Constraint]]:
    merged: dict[IntVector, tuple[bool, frozenset[int]]] = {}
    for coeffs, strict, history in rows:
        if not any(coeffs):
            if strict:
                return None
            continue
        key = primitive(coeffs)
        previous = merged.get(key)
        if (previous is None or (strict and not previous[0])
                or (strict == previous[0] and len(history) < len(previous[1]))):
            merged[key] = (strict, history)
    return [(key, strict, history) for key, (strict, history) in sorted(merged.items(), key=lambda item: item[0])]


def _fourier_motzkin(rows: Sequence[tuple[IntVector, bool]], k: int) -> Optional[list[Fraction]]:
    """
    Decide a homogeneous system of strict and non-strict inequalities in k variables.

    Rows derived from more than t + 1 originals after t eliminations are implied by the
    others and get dropped (Chernikov's rule).
    """
    current = _normalize_system([(c, s, frozenset([i])) for i, (c, s) in enumerate(rows)])
    if current is None:
        return None
    stages = [current]
    order: list[int] = []
    remaining = set(range(k))
    while remaining:
        def cost(var):
            ups = sum(1 for r in current if r[0][var] > 0)
            downs = sum(1 for r in current if r[0][var] < 0)
            return ups * downs - ups - downs, var
        var = min(remaining, key=cost)
        remaining.discard(var)
        order.append(var)
        ups = [r for r in current if r[0][var] > 0]
        downs = [r for r in current if r[0][var] < 0]
        combined = [r for r in current if r[0][var] == 0]
        limit = len(order) + 1
        for (p, p_strict, p_hist), (q, q_strict, q_hist) in itertools.product(ups, downs):
            history = p_hist | q_hist
            if len(history) > limit:
                continue
            a, b = p[var], -q[var]
            combined.append((tuple(b * x + a * y for x, y in zip(p, q)), p_strict or q_strict, history))
        current = _normalize_system(combined)
        if current is None:
            return None
        stages.append(current)

    values: dict[int, Fraction] = {}
    for t in reversed(range(k)):
        var = order[t]
        low, low_strict = None, False
        high, high_strict = None, False
        for coeffs, strict, _ in stages[t]:
            a = coeffs[var]
            if a == 0:
                continue
            rest = sum((c * values[i] for i, c in enumerate(coeffs) if c and i in values), Fraction(0))
            bound = -rest / a
            if a > 0:
                if low is None or bound > low or (bound == low and strict):
                    low, low_strict = bound, strict
            elif high is None or bound < high or (bound == high and strict):
                high, high_strict = bound, strict
        if low is None and high is None:
            value = Fraction(0)
        elif high is None:
            value = low + 1 if low_strict else low
        elif low is None:
            value = high - 1 if high_strict else high
        elif low < high:
            value = (low + high) / 2
        elif low == high and not (low_strict or high_strict):
            value = low
        else:
            raise InvariantViolation("Fourier-Motzkin back-substitution found an empty interval")
        values[var] = value
    return [values[i] for i in range(k)]


def solve_homogeneous_system(equalities: Sequence[Sequence[int]], inequalities: Sequence[Sequence[int]],
                             strict: Sequence[Sequence[int]], nvars: int) -> Optional[list[Fraction]]:
    """
    Find x with E x = 0, I x >= 0 and S x > 0, or return None.

    The equalities are solved first over the integers, then the inequalities are eliminated
    variable by variable on the kernel coordinates.
    """
    W = kernel_lattice_basis(list(equalities), nvars)
    rows = [(tuple(dot(a, w) for w in W), False) for a in inequalities]
    rows += [(tuple(dot(a, w) for w in W), True) for a in strict]
    coords = _fourier_motzkin(rows, len(W))
    if coords is None:
        return None
    return [sum((c * w[i] for c, w in zip(coords, W)), Fraction(0)) for i in range(nvars)]

"""
Exact group theory on J(E)_n = (Z/n)^2: SL2(Z/n) transvections, generated subgroups and orbits, and exhaustive checks
of the combinatorial statements about pairs and triples of torsion points.

Vectors are pairs (x, y) of integers mod n; the pairing is <u, v> = u1*v2 - u2*v1.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations, permutations
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple
import numpy as np
from sympy import factorint, primefactors
from torsionnodes.config import get_global_config
from torsionnodes.errors import EnumerationCapExceeded, InvalidInputError
from torsionnodes.torus import TorsionPoint, enumerate_torsion, pairing, torsion_order, two_torsion
from torsionnodes.utils import get_logger

global_config = get_global_config()
logger = get_logger(__name__,
                    global_config.get_log_file(),
                    global_config.get_file_verbosity(),
                    global_config.get_screen_verbosity())

Vector = Tuple[int, int]

DEFAULT_DELTAS = ((1, 0), (0, 1))
LEM5_MAX_LEVEL = 36


@dataclass(frozen=True)
class ModMatrix:
    """
    A 2x2 matrix [[a, b], [c, d]] over Z/n acting on column vectors
    """
    a: int
    b: int
    c: int
    d: int
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise InvalidInputError("Matrix level must be positive", n=self.n)
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, int(getattr(self, name)) % self.n)

    @staticmethod
    def identity(n: int):
        return ModMatrix(1, 0, 0, 1, n)

    @property
    def entries(self) -> Tuple[int, int, int, int]:
        return self.a, self.b, self.c, self.d

    def det(self) -> int:
        return (self.a * self.d - self.b * self.c) % self.n

    def _check_level(self, other):
        if other.n != self.n:
            raise InvalidInputError("Matrices at different levels", n1=self.n, n2=other.n)

    def __mul__(self, other):
        self._check_level(other)
        return ModMatrix(self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
                         self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d, self.n)

    def inverse(self):
        """Adjugate inverse; the determinant is 1 for every matrix built here"""
        det = self.det()
        if math.gcd(det, self.n) != 1:
            raise InvalidInputError("Matrix is not invertible mod n", matrix=self)
        u = pow(det, -1, self.n) if self.n > 1 else 0
        return ModMatrix(u * self.d, -u * self.b, -u * self.c, u * self.a, self.n)

    def apply(self, v: Vector) -> Vector:
        return (self.a * v[0] + self.b * v[1]) % self.n, (self.c * v[0] + self.d * v[1]) % self.n

    def to_transport_format(self):
        return [[self.a, self.b], [self.c, self.d]]


def vector_pairing(u: Vector, v: Vector, n: int) -> int:
    return (u[0] * v[1] - u[1] * v[0]) % n


def vector_order(v: Vector, n: int) -> int:
    return n // math.gcd(math.gcd(v[0], v[1]), n)


def transvection(delta: Vector, n: int) -> ModMatrix:
    """
    The Picard-Lefschetz map T(x) = x + <x, delta> delta as a matrix

    Raises
    ------
    InvalidInputError
        If delta is zero mod n
    """
    d1, d2 = delta[0] % n, delta[1] % n
    if d1 == 0 and d2 == 0:
        raise InvalidInputError("The vanishing cycle must be nonzero", delta=delta, n=n)
    return ModMatrix(1 + d1 * d2, -d1 * d1, d2 * d2, 1 - d1 * d2, n)


def sl2_order(n: int) -> int:
    """|SL2(Z/n)| = n^3 * prod over primes p | n of (1 - 1/p^2)"""
    if n < 1:
        raise InvalidInputError("Level must be positive", n=n)
    order = n ** 3
    for p in primefactors(n):
        order = order // (p * p) * (p * p - 1)
    return order


def _check_cap(n: int, cap: int):
    if n > cap:
        raise EnumerationCapExceeded("Level {0} exceeds the enumeration cap {1}".format(n, cap), n=n, cap=cap)


@dataclass(frozen=True)
class MatrixGroup:
    """
    A finite subgroup of SL2(Z/n) given by all of its elements
    """
    n: int
    elements: FrozenSet[ModMatrix] = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, item):
        return item in self.elements


def generated_subgroup(gens: Sequence[ModMatrix], cap: int = 12) -> MatrixGroup:
    """
    Closure of the generators under multiplication, by breadth-first search over products

    Parameters
    ----------
    gens: list of ModMatrix
        Generators, all at the same level
    cap: int
        Largest level for which enumeration is allowed

    Returns
    -------
    MatrixGroup

    Raises
    ------
    InvalidInputError
        If there are no generators or their levels differ
    EnumerationCapExceeded
        If the level is above cap
    """
    if not gens:
        raise InvalidInputError("At least one generator is required")
    n = gens[0].n
    for g in gens:
        gens[0]._check_level(g)
    _check_cap(n, cap)
    identity = ModMatrix.identity(n)
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    logger.debug("generated subgroup of SL2(Z/%d) has order %d", n, len(seen))
    return MatrixGroup(n, frozenset(seen))


def enumerate_sl2(n: int, cap: int = 12) -> List[ModMatrix]:
    """All matrices of determinant 1 mod n, by brute force over the n^4 candidates"""
    _check_cap(n, cap)
    return [ModMatrix(a, b, c, d, n) for a in range(n) for b in range(n) for c in range(n) for d in range(n)
            if (a * d - b * c) % n == 1 % n]


def check_surjectivity(deltas: Sequence[Vector], n: int, cap: int = 12) -> bool:
    """True iff the transvections of the deltas generate all of SL2(Z/n)"""
    group = generated_subgroup([transvection(d, n) for d in deltas], cap)
    return group.order == sl2_order(n)


def check_surjectivity_prime_powers(deltas: Sequence[Vector], n: int, cap: int = 12) -> Dict[int, bool]:
    """
    Surjectivity checked separately modulo each prime power p^d exactly dividing n. By the Chinese remainder theorem
    the transvections generate SL2(Z/n) iff they do so modulo every p^d; callers compare with check_surjectivity.
    """
    results = {}
    for p, d in sorted(factorint(n).items()):
        q = p ** d
        reduced = [v for v in ((x % q, y % q) for x, y in deltas) if v != (0, 0)]
        results[q] = bool(reduced) and check_surjectivity(reduced, q, cap)
    return results


def exact_order_vectors(n: int) -> List[Vector]:
    return [(t.a, t.b) for t in enumerate_torsion(n, exact_order=True)]


def orbit_on_exact_order(deltas: Sequence[Vector], n: int, cap: int = 12) -> List[List[Vector]]:
    """
    Partition of the vectors of exact order n into orbits of the group generated by the transvections, each orbit
    sorted and the list sorted by first element

    Raises
    ------
    EnumerationCapExceeded
        If n is above cap
    """
    _check_cap(n, cap)
    gens = [transvection(d, n) for d in deltas]
    remaining = set(exact_order_vectors(n))
    orbits = []
    while remaining:
        start = min(remaining)
        orbit = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for v in frontier:
                for g in gens:
                    w = g.apply(v)
                    if w not in orbit:
                        orbit.add(w)
                        nxt.append(w)
            frontier = nxt
        remaining -= orbit
        orbits.append(sorted(orbit))
    return orbits


def indivisibility_check(deltas: Sequence[Vector], n: int) -> bool:
    """True iff every delta is indivisible mod n, i.e. gcd(d1, d2, n) = 1"""
    return all(math.gcd(math.gcd(d[0], d[1]), n) == 1 for d in deltas)


def gcd_pairing_check(deltas: Sequence[Vector], n: int) -> bool:
    """
    True iff for every indivisible x mod n the pairings <x, delta_i> together with n have gcd 1
    """
    for x in range(n):
        for y in range(n):
            if math.gcd(math.gcd(x, y), n) != 1:
                continue
            g = n
            for d in deltas:
                g = math.gcd(g, vector_pairing((x, y), d, n))
            if g != 1:
                logger.debug("gcd pairing condition fails at (%d, %d) mod %d", x, y, n)
                return False
    return True


def transvection_power_law(t1: TorsionPoint, t2: TorsionPoint, kmax: int = 12) -> bool:
    """
    Checks T_{t1}^k(t2) = t2 - k <t1, t2> t1 for 0 <= k <= kmax at the common level
    """
    level = t1.n * t2.n // math.gcd(t1.n, t2.n)
    u, v = t1.rescale(level), t2.rescale(level)
    step = transvection((u.a, u.b), level) if not u.is_zero() else ModMatrix.identity(level)
    m = pairing(u, v, level)
    current = ModMatrix.identity(level)
    for k in range(kmax + 1):
        expected = ((v.a - k * m * u.a) % level, (v.b - k * m * u.b) % level)
        if current.apply((v.a, v.b)) != expected:
            return False
        current = step * current
    return True


def odd_swap_exponent(n: int, m: int, n2: int) -> Tuple[int, bool]:
    """
    k0 = n / gcd(m*n2, n) and whether it is odd. An odd k0 (equivalently 2*gcd(m*n2, n) does not divide n) forces
    the two zeros of b_{n1 t1} to be swapped into the zero set of b_{n2 t2}, so that n1*t1 = n2*t2.
    """
    k0 = n // math.gcd(m * n2, n)
    return k0, k0 % 2 == 1


def lem5_scan(n: int) -> Tuple[int, Optional[dict]]:
    """
    For every ordered pair a1 != a2 of exact order n with <a1, a2> = n/2 and all odd d1, d2 mod n with
    4 (d1 a1 - d2 a2) = 0, checks that d1 a1 - d2 a2 has order exactly 2

    Returns
    -------
    tuple
        (number of qualifying configurations checked, first counterexample or None)

    Raises
    ------
    InvalidInputError
        Unless 4 | n, 8 does not divide n, and n <= 36
    """
    if n % 4 != 0 or n % 8 == 0 or n > LEM5_MAX_LEVEL:
        raise InvalidInputError("Requires 4 | n, 8 not dividing n and n <= {0}".format(LEM5_MAX_LEVEL), n=n)
    vectors = np.array(exact_order_vectors(n), dtype=np.int64)
    odd = np.arange(1, n, 2, dtype=np.int64)
    checked = 0
    for a1 in vectors:
        pair = (a1[0] * vectors[:, 1] - a1[1] * vectors[:, 0]) % n
        partners = vectors[pair == n // 2]
        if not len(partners):
            continue
        # diff[i, j, k, :] = odd[i] * a1 - odd[j] * partners[k]
        diff = (odd[:, None, None, None] * a1[None, None, None, :]
                - odd[None, :, None, None] * partners[None, None, :, :]) % n
        qualifies = np.all((4 * diff) % n == 0, axis=-1)
        orders = n // np.gcd(np.gcd(diff[..., 0], diff[..., 1]), n)
        checked += int(qualifies.sum())
        bad = np.argwhere(qualifies & (orders != 2))
        if len(bad):
            i, j, k = bad[0]
            return checked, {"alpha1": [int(a1[0]), int(a1[1])],
                             "alpha2": [int(partners[k][0]), int(partners[k][1])],
                             "d1": int(odd[i]), "d2": int(odd[j]), "order": int(orders[i, j, k])}
    return checked, None


def lem5_exhaustive(n: int) -> bool:
    checked, counterexample = lem5_scan(n)
    logger.info("order-2 difference check at n=%d: %d configurations, counterexample=%s", n, checked, counterexample)
    return counterexample is None


class PairClassification(Enum):
    DisjointExpected = "DisjointExpected"
    TwoTwo = "TwoTwo"
    SixSix = "SixSix"


@dataclass(frozen=True)
class PairClass:
    classification: PairClassification
    n1: int
    n2: int
    pairing: int
    difference_order: int

    def to_transport_format(self):
        return {"classification": self.classification.value, "n1": self.n1, "n2": self.n2,
                "pairing": self.pairing, "difference_order": self.difference_order}


def _canonical(t: TorsionPoint) -> TorsionPoint:
    a, b, n = t.reduced()
    return TorsionPoint(a, b, n, t.lattice)


def classify_pair(t1: TorsionPoint, t2: TorsionPoint) -> PairClass:
    """
    Classifies a pair of distinct nonzero torsion points by the exceptional cases in which the zero sets of their
    b-functions may meet: two 2-torsion points, or two points of order 6 with pairing 3 and difference of order 6

    Raises
    ------
    InvalidInputError
        If either point is zero or the points are equal
    """
    if t1.is_zero() or t2.is_zero() or t1 == t2:
        raise InvalidInputError("Pair must consist of distinct nonzero torsion points", t1=t1, t2=t2)
    u, v = _canonical(t1), _canonical(t2)
    n1, n2 = u.n, v.n
    value = pairing(u, v)
    diff_order = torsion_order(u - v)
    kind = PairClassification.DisjointExpected
    if (n1, n2) == (2, 2):
        kind = PairClassification.TwoTwo
    elif (n1, n2) == (6, 6) and pairing(u, v, 6) in (3, -3 % 6) and diff_order == 6:
        kind = PairClassification.SixSix
    return PairClass(kind, n1, n2, value, diff_order)


@dataclass
class TripleExclusionReport:
    shared_points: List[str]
    shared_points_distinct: bool
    ordered_two_torsion_pairs: int
    six_six_pairs: int
    qualifying_triples: List[List[str]]

    @property
    def passed(self) -> bool:
        return self.shared_points_distinct and not self.qualifying_triples

    def to_transport_format(self):
        return {"shared_points": self.shared_points,
                "shared_points_distinct": self.shared_points_distinct,
                "ordered_two_torsion_pairs": self.ordered_two_torsion_pairs,
                "six_six_pairs": self.six_six_pairs,
                "qualifying_triples": self.qualifying_triples,
                "passed": self.passed}


def triple_exclusion_exhaustive(nmax: int = 6) -> TripleExclusionReport:
    """
    (A) for the three 2-torsion points, the shared zero p - t3 of each pair {t1, t2} is different for each pair;
    (B) no three distinct points of order 6 are pairwise SixSix

    Raises
    ------
    InvalidInputError
        If nmax is outside 2..12
    """
    if nmax < 2 or nmax > 12:
        raise InvalidInputError("nmax must be between 2 and 12", nmax=nmax)
    twos = two_torsion()
    ordered = list(permutations(twos, 2))
    shared = sorted({(t1 + t2).to_text() for t1, t2 in ordered})

    six_pairs = 0
    triples = []
    if nmax >= 6:
        pool = enumerate_torsion(6, exact_order=True)
        certified = set()
        for t1, t2 in combinations(pool, 2):
            if classify_pair(t1, t2).classification is PairClassification.SixSix:
                certified.add((t1, t2))
                certified.add((t2, t1))
        six_pairs = len(certified) // 2
        for t1, t2, t3 in combinations(pool, 3):
            if (t1, t2) in certified and (t1, t3) in certified and (t2, t3) in certified:
                triples.append([t1.to_text(), t2.to_text(), t3.to_text()])
    logger.info("triple exclusion: %d SixSix pairs, %d qualifying triples", six_pairs, len(triples))
    return TripleExclusionReport(shared, len(shared) == len(twos), len(ordered), six_pairs, triples)


def subgroup_types(m: int) -> List[Tuple[int, int]]:
    """
    Isomorphism types Z/a x Z/b (b | a, a*b = m) of order-m subgroups of (Q/Z)^2
    """
    if m < 1:
        raise InvalidInputError("Order must be positive", m=m)
    return [(m // b, b) for b in range(1, math.isqrt(m) + 1) if m % (b * b) == 0]


class Dichotomy(Enum):
    AlwaysNodal = "AlwaysNodal"
    TriplesPossible = "TriplesPossible"


def dichotomy_for_m(m: int) -> Dichotomy:
    """
    TriplesPossible iff some subgroup type of order m contains Z/2 x Z/2, i.e. has even b
    """
    if any(b % 2 == 0 for _, b in subgroup_types(m)):
        return Dichotomy.TriplesPossible
    return Dichotomy.AlwaysNodal


class SeveriBranch(Enum):
    DeformationNodal = "DeformationNodal"
    MainCase = "MainCase"
    NotApplicable = "NotApplicable"


def severi_branch(m: int, deg_m: int) -> SeveriBranch:
    """
    Which argument covers L = mD + pi^*M: deformation for deg M >= 2, the arrangement analysis for deg M = 1
    """
    if m > 0 and deg_m >= 2:
        return SeveriBranch.DeformationNodal
    if m > 0 and deg_m == 1:
        return SeveriBranch.MainCase
    return SeveriBranch.NotApplicable

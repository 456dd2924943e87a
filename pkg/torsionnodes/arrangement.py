"""
Singularities of the arrangement of translated curves sigma(G), sigma in a finite translation group A, read off from
the zero sets of the b-functions on the base curve: the zeros of b_{tau,p} are the points where G meets its translate
by tau, and a point where k of these zero sets meet is a point where k + 1 branches cross.
"""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, List, Optional, Sequence
from torsionnodes.bfunc import ZeroPair, construct_b, find_zeros, zero_intersection
from torsionnodes.config import get_global_config
from torsionnodes.errors import InvalidInputError, NumericFailure
from torsionnodes.policy import DEFAULT_POLICY, NumericPolicy
from torsionnodes.torsion_group import (Dichotomy, PairClassification, classify_pair, dichotomy_for_m,
                                        subgroup_types)
from torsionnodes.torus import (Lattice, TorsionPoint, TorusPoint, contains_full_two_torsion, enumerate_torsion,
                                reduce_to_fundamental, subgroup_from_generators, torus_distance)
from torsionnodes.utils import complex_pair, get_logger, make_rng

global_config = get_global_config()
logger = get_logger(__name__,
                    global_config.get_log_file(),
                    global_config.get_file_verbosity(),
                    global_config.get_screen_verbosity())


class Verdict(Enum):
    NormalCrossings = "NormalCrossings"
    NodesAndTriples = "NodesAndTriples"
    Unclassified = "Unclassified"


@dataclass(frozen=True)
class Cluster:
    """
    A point of G where the curve meets r - 1 of its translates

    Attributes
    ----------
    center: complex
        Mean of the pooled zeros in the cluster
    vanishing: tuple of str
        The tau in A with b_{tau,p}(center) = 0, as "a/n,b/n"
    margins: tuple of float
        |b'_tau(q)| for each member zero q
    scales: tuple of float
        |wp(q - p)| + |wp(q - p + t)| for each member zero, the local scale of its margin
    spread: float
        Largest torus distance from the center to a member zero
    """
    center: complex
    vanishing: tuple
    margins: tuple
    spread: float
    scales: tuple = ()

    @property
    def branches(self) -> int:
        return 1 + len(set(self.vanishing))

    @property
    def relative_margin(self) -> float:
        """Smallest margin relative to its local scale"""
        if not self.scales:
            return min(self.margins)
        return min(m / s if s > 0 else m for m, s in zip(self.margins, self.scales))

    def to_transport_format(self):
        return {"center": complex_pair(self.center),
                "vanishing": list(self.vanishing),
                "branches": self.branches,
                "margins": list(self.margins),
                "relative_margin": self.relative_margin,
                "spread": self.spread}


@dataclass
class ArrangementReport:
    lattice: Lattice
    p: TorusPoint
    subgroup: List[TorsionPoint]
    clusters: List[Cluster]
    nodes_on_g: int
    triples_on_g: int
    total_nodes: int
    total_triples: int
    verdict: Verdict
    non_generic: bool
    notes: List[str] = field(default_factory=list)

    @property
    def order(self) -> int:
        return len(self.subgroup)

    def to_transport_format(self):
        return {"lattice": self.lattice.to_transport_format(),
                "p": complex_pair(self.p.z),
                "subgroup": [t.to_text() for t in self.subgroup],
                "clusters": [c.to_transport_format() for c in self.clusters],
                "on_curve": {"nodes": self.nodes_on_g, "triples": self.triples_on_g},
                "totals": {"nodes": self.total_nodes, "triples": self.total_triples},
                "pair_count_conserved": pair_count_conserved(self),
                "verdict": self.verdict.value,
                "non_generic": self.non_generic,
                "notes": list(self.notes)}


def _validate_subgroup(subgroup: Sequence[TorsionPoint]) -> List[TorsionPoint]:
    if len(subgroup) < 2:
        raise InvalidInputError("The translation group must have at least two elements")
    members = set(subgroup)
    if len(members) != len(subgroup) or not any(t.is_zero() for t in subgroup):
        raise InvalidInputError("The translation group must list distinct elements including 0")
    for s in subgroup:
        for t in subgroup:
            if s + t not in members:
                raise InvalidInputError("The listed elements are not closed under addition", s=s, t=t)
    return [t for t in subgroup if not t.is_zero()]


def zero_locus_table(subgroup: Sequence[TorsionPoint], p, lattice: Lattice, policy: NumericPolicy = DEFAULT_POLICY,
                     workers: int = 1) -> Dict[TorsionPoint, ZeroPair]:
    """
    The zero pair of b_{tau,p} for every nonzero tau in the subgroup, in the order of the subgroup listing

    Raises
    ------
    InvalidInputError
        If the elements do not form a group of order at least 2
    NumericFailure
        Propagated from zero finding, with the offending tau attached
    """
    nonzero = _validate_subgroup(subgroup)

    def zeros_for(tau):
        try:
            return find_zeros(construct_b(p, tau, lattice, policy=policy), policy)
        except NumericFailure as e:
            e.context["tau"] = tau.to_text()
            raise

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            pairs = list(pool.map(zeros_for, nonzero))
    else:
        pairs = [zeros_for(tau) for tau in nonzero]
    table = dict(zip(nonzero, pairs))
    for tau, pair in table.items():
        if pair.double:
            logger.warning("b for tau=%s has a double zero at %s", tau.to_text(), pair.q1.z)
    return table


def _cluster(points: List[complex], lat: Lattice, tol: float) -> List[List[int]]:
    """Single-linkage clusters of point indices at torus distance <= tol, in order of first member"""
    parent = list(range(len(points)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(len(points)):
        for j in range(i + 1, len(points)):
            if torus_distance(points[i], points[j], lat) <= tol:
                parent[find(j)] = find(i)
    groups: Dict[int, List[int]] = {}
    for i in range(len(points)):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def _cluster_center(points: List[complex], lat: Lattice) -> complex:
    anchor = points[0]
    offsets = [torus_offset(z, anchor, lat) for z in points]
    return reduce_to_fundamental(anchor + sum(offsets) / len(offsets), lat).z


def torus_offset(z: complex, anchor: complex, lat: Lattice) -> complex:
    """The representative of z - anchor of smallest modulus"""
    d = reduce_to_fundamental(z - anchor, lat).z
    return min((d + i * lat.omega1 + j * lat.omega2 for i in (-1, 0) for j in (-1, 0)), key=abs)


def classify_arrangement(subgroup: Sequence[TorsionPoint], p, lattice: Lattice, tol: Optional[float] = None,
                         policy: NumericPolicy = DEFAULT_POLICY, workers: int = 1) -> ArrangementReport:
    """
    Pools the zeros of b_{tau,p} over the nonzero tau in the subgroup, clusters them and classifies every cluster by
    its branch count

    Parameters
    ----------
    subgroup: list of TorsionPoint
        All elements of A, including 0
    p: TorusPoint or complex
        Base point
    lattice: Lattice
        The lattice
    tol: float
        Clustering tolerance, policy.arrangement_tol by default
    policy: NumericPolicy
        Tolerances
    workers: int
        Threads used for zero finding

    Returns
    -------
    ArrangementReport
        verdict Unclassified when a cluster has more than three branches, a zero is not simple, two zeros are neither
        clearly equal nor clearly distinct, or the orbit counts are not integral
    """
    tol = policy.arrangement_tol if tol is None else tol
    lat = lattice
    base = reduce_to_fundamental(p.z if isinstance(p, TorusPoint) else p, lat)
    table = zero_locus_table(subgroup, base, lat, policy, workers)
    notes = []
    non_generic = lat.is_special()
    if non_generic:
        logger.warning("lattice tau=%s is special; genericity statements need not hold", lat.omega2)
        notes.append("non-generic lattice")

    points, owners, margins, scales = [], [], [], []
    for tau, pair in table.items():
        f = construct_b(base, tau, lat, policy=policy)
        for q, slope in zip((pair.q1, pair.q2), pair.derivatives):
            points.append(q.z)
            owners.append(tau.to_text())
            margins.append(slope)
            scales.append(f.derivative_scale(q.z, policy))

    groups = _cluster(points, lat, tol)
    unclassified = False
    centers = []
    clusters = []
    for g in groups:
        center = _cluster_center([points[i] for i in g], lat)
        spread = max(torus_distance(points[i], center, lat) for i in g)
        vanishing = tuple(owners[i] for i in g)
        cluster = Cluster(center, vanishing, tuple(margins[i] for i in g), spread, tuple(scales[i] for i in g))
        if len(set(vanishing)) != len(vanishing):
            notes.append("double zero at {0}".format(center))
            unclassified = True
        if cluster.branches > 3:
            notes.append("{0} branches at {1}".format(cluster.branches, center))
            unclassified = True
        if cluster.relative_margin < policy.transversality_margin:
            notes.append("non-transversal branch at {0}".format(center))
            unclassified = True
        centers.append(center)
        clusters.append(cluster)

    separation = policy.distinctness_factor * tol
    for i, j in ((i, j) for i in range(len(centers)) for j in range(i + 1, len(centers))):
        d = torus_distance(centers[i], centers[j], lat)
        if d < separation:
            notes.append("clusters at {0} and {1} are {2} apart".format(centers[i], centers[j], d))
            unclassified = True

    nodes = sum(1 for c in clusters if c.branches == 2)
    triples = sum(1 for c in clusters if c.branches == 3)
    order = len(subgroup)
    if (order * nodes) % 2 or (order * triples) % 3:
        notes.append("orbit counts are not integral")
        unclassified = True

    if unclassified:
        verdict = Verdict.Unclassified
    elif triples:
        verdict = Verdict.NodesAndTriples
    else:
        verdict = Verdict.NormalCrossings
    report = ArrangementReport(lat, base, list(subgroup), clusters, nodes, triples, order * nodes // 2,
                               order * triples // 3, verdict, non_generic, notes)
    logger.debug("arrangement of order %d: %d nodes, %d triples on G, verdict %s", order, nodes, triples,
                 verdict.value)
    return report


def full_arrangement_totals(report: ArrangementReport) -> Dict[str, int]:
    """Singular points of the whole arrangement, by orbit counting: |A| * (count on G) / r"""
    return {"nodes": report.order * report.nodes_on_g // 2, "triples": report.order * report.triples_on_g // 3}


def pair_count_conserved(report: ArrangementReport) -> bool:
    """
    Every unordered pair of curves meets in two points: the sum of C(r, 2) over all singular points is C(|A|, 2) * 2
    """
    totals = full_arrangement_totals(report)
    return totals["nodes"] + 3 * totals["triples"] == math.comb(report.order, 2) * 2


def subgroup_of_type(a: int, b: int, lattice: Optional[Lattice] = None) -> List[TorsionPoint]:
    """
    All elements of the subgroup Z/a x Z/b of J(E)_a generated by (1,0)/a and (0,1)/b

    Raises
    ------
    InvalidInputError
        If b does not divide a
    """
    if a < 1 or b < 1 or a % b != 0:
        raise InvalidInputError("Subgroup type needs b | a", a=a, b=b)
    gens = [TorsionPoint(1, 0, a, lattice)]
    if b > 1:
        gens.append(TorsionPoint(0, 1, b, lattice))
    return subgroup_from_generators(gens)


def translate_covariance(subgroup: Sequence[TorsionPoint], p, mu: TorsionPoint, lattice: Lattice,
                         policy: NumericPolicy = DEFAULT_POLICY) -> float:
    """
    Classifies at p and at p + mu for mu in A and returns the largest distance between a cluster center of the second
    report and the nearest translated center of the first; infinite if the counts differ
    """
    if mu not in set(subgroup):
        raise InvalidInputError("mu must belong to the subgroup", mu=mu)
    base = p.z if isinstance(p, TorusPoint) else complex(p)
    shift = mu.embed(lattice)
    first = classify_arrangement(subgroup, base, lattice, policy=policy)
    second = classify_arrangement(subgroup, base + shift, lattice, policy=policy)
    if (first.nodes_on_g, first.triples_on_g, first.verdict) != (second.nodes_on_g, second.triples_on_g,
                                                                 second.verdict):
        return math.inf
    return max(min(torus_distance(c.center, d.center + shift, lattice) for d in first.clusters)
               for c in second.clusters)


def random_base(lattice_rng) -> tuple:
    """A random lattice from the generic box together with a random base point in its parallelogram"""
    lat = Lattice.random(lattice_rng)
    return lat, lat.point(*lattice_rng.uniform(0.0, 1.0, size=2))


@dataclass
class DichotomyRun:
    a: int
    b: int
    tau: complex
    p: complex
    expected: Verdict
    verdict: Verdict
    total_nodes: int
    total_triples: int
    notes: List[str]

    @property
    def matches(self) -> bool:
        return self.verdict is self.expected

    def to_transport_format(self):
        return {"type": [self.a, self.b], "tau": complex_pair(self.tau), "p": complex_pair(self.p),
                "expected": self.expected.value, "verdict": self.verdict.value,
                "totals": {"nodes": self.total_nodes, "triples": self.total_triples},
                "matches": self.matches, "notes": self.notes}


@dataclass
class DichotomyReport:
    m: int
    prediction: Dichotomy
    seed: int
    runs: List[DichotomyRun]

    @property
    def passed(self) -> bool:
        if not all(r.matches for r in self.runs):
            return False
        with_triples = any(r.verdict is Verdict.NodesAndTriples for r in self.runs)
        return with_triples == (self.prediction is Dichotomy.TriplesPossible)

    def to_transport_format(self):
        return {"m": self.m, "prediction": self.prediction.value, "seed": self.seed,
                "runs": [r.to_transport_format() for r in self.runs], "passed": self.passed}


def dichotomy_experiment(m: int, trials: int, seed: int = 0, policy: NumericPolicy = DEFAULT_POLICY,
                         workers: int = 1) -> DichotomyReport:
    """
    Classifies one subgroup of every type of order m on `trials` random lattices; a type is expected to give triple
    points iff it contains the full 2-torsion

    Raises
    ------
    InvalidInputError
        If m is outside 2..12 or trials < 1
    """
    if m < 2 or m > 12 or trials < 1:
        raise InvalidInputError("Requires 2 <= m <= 12 and trials >= 1", m=m, trials=trials)
    rng = make_rng(seed)
    runs = []
    for _ in range(trials):
        lat, p = random_base(rng)
        for a, b in subgroup_types(m):
            subgroup = subgroup_of_type(a, b, lat)
            expected = Verdict.NodesAndTriples if contains_full_two_torsion(subgroup) else Verdict.NormalCrossings
            try:
                report = classify_arrangement(subgroup, p, lat, policy=policy, workers=workers)
                runs.append(DichotomyRun(a, b, lat.omega2, p, expected, report.verdict, report.total_nodes,
                                         report.total_triples, report.notes))
            except NumericFailure as e:
                runs.append(DichotomyRun(a, b, lat.omega2, p, expected, Verdict.Unclassified, 0, 0, [str(e)]))
    report = DichotomyReport(m, dichotomy_for_m(m), seed, runs)
    logger.info("dichotomy m=%d: %d runs, passed=%s", m, len(runs), report.passed)
    return report


@dataclass(frozen=True)
class SixSixRecord:
    tau: complex
    t1: str
    t2: str
    kind: str
    min_distance: float

    def to_transport_format(self):
        return {"tau": complex_pair(self.tau), "t1": self.t1, "t2": self.t2, "kind": self.kind,
                "min_distance": self.min_distance}


def six_six_experiment(lattices: Sequence[Lattice], p: complex = 0j,
                       policy: NumericPolicy = DEFAULT_POLICY) -> List[SixSixRecord]:
    """
    Records whether the zero sets of b_{t1,p} and b_{t2,p} meet for every SixSix pair of order-6 points. Such pairs
    are allowed, not forced, to share a zero; the outcome is recorded without being asserted.
    """
    pool = enumerate_torsion(6, exact_order=True)
    records = []
    for lat in lattices:
        for i, t1 in enumerate(pool):
            for t2 in pool[i + 1:]:
                if classify_pair(t1, t2).classification is not PairClassification.SixSix:
                    continue
                meet = zero_intersection(construct_b(p, t1, lat, policy=policy),
                                         construct_b(p, t2, lat, policy=policy), policy=policy)
                records.append(SixSixRecord(lat.omega2, t1.to_text(), t2.to_text(), meet.kind, meet.min_distance))
    shared = sum(1 for r in records if r.kind == "SharedPoint")
    logger.info("SixSix experiment: %d of %d pairs share a zero", shared, len(records))
    return records

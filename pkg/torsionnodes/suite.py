"""
Named, seeded verification criteria. Each criterion returns a CriterionResult; run_suite runs all of them (or a
selection) in a fixed order.
"""
import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence
import numpy as np
from torsionnodes.arrangement import Verdict, classify_arrangement, dichotomy_experiment, random_base, \
    subgroup_of_type
from torsionnodes.bfunc import (argument_principle_count, check_no_double_zero, clear_caches, construct_b,
                                construct_b_linear, find_zeros, full_level_sum, nodal_fiber_sum, translate_sum,
                                uniqueness_spread)
from torsionnodes.config import get_global_config
from torsionnodes.errors import InvalidInputError, NumericFailure
from torsionnodes.policy import DEFAULT_POLICY, NumericPolicy
from torsionnodes.torsion_group import (DEFAULT_DELTAS, PairClassification, check_surjectivity, classify_pair,
                                        enumerate_sl2, lem5_exhaustive, orbit_on_exact_order, sl2_order,
                                        transvection, generated_subgroup, triple_exclusion_exhaustive)
from torsionnodes.torus import (Lattice, TorsionPoint, enumerate_torsion, torsion_count, torus_distance,
                                two_torsion)
from torsionnodes.utils import get_logger, make_rng

global_config = get_global_config()
logger = get_logger(__name__,
                    global_config.get_log_file(),
                    global_config.get_file_verbosity(),
                    global_config.get_screen_verbosity())

DETERMINISM = "determinism"
DETERMINISM_DEFAULTS = ("translate-sum", "nodal-fiber-sum", "lemma-exhaustives")


@dataclass
class CriterionResult:
    name: str
    passed: bool
    residual: float
    seed: int
    detail: dict = field(default_factory=dict)

    def to_transport_format(self):
        return {"name": self.name, "passed": self.passed, "residual": self.residual, "seed": self.seed,
                "detail": self.detail}


@dataclass
class SuiteContext:
    """
    Settings shared by the criteria

    Attributes
    ----------
    seed: int
        Base seed; criterion i draws from seed * 1000 + i
    policy: NumericPolicy
        Tolerances
    lattice: Lattice
        When set, every criterion uses this lattice instead of random ones
    scale: float
        Multiplies every sample count (1.0 runs the full sweep)
    n: int
        Upper level for the nodal fiber identity
    workers: int
        Threads for zero finding in arrangement runs
    """
    seed: int
    policy: NumericPolicy = DEFAULT_POLICY
    lattice: Optional[Lattice] = None
    scale: float = 1.0
    n: int = 12
    workers: int = 1

    def count(self, full: int) -> int:
        return max(1, int(round(full * self.scale)))

    def rng(self, index: int):
        return make_rng(self.seed * 1000 + index)

    def base(self, rng):
        """A lattice and base point: the fixed lattice if one is set, else a random generic one"""
        lat, p = random_base(rng)
        return (self.lattice, p) if self.lattice is not None else (lat, p)


def _random_torsion(rng, order: int, lattice: Lattice) -> TorsionPoint:
    candidates = enumerate_torsion(order, exact_order=True, lattice=lattice)
    return candidates[int(rng.integers(len(candidates)))]


def _random_z(rng, lat: Lattice) -> complex:
    return lat.point(*rng.uniform(0.0, 1.0, size=2))


def translate_sum_criterion(ctx: SuiteContext, index: int) -> CriterionResult:
    rng = ctx.rng(index)
    worst = 0.0
    skipped = 0
    lattices = ctx.count(50)
    for _ in range(lattices):
        lat, p = ctx.base(rng)
        for order in range(2, 9):
            f = construct_b(p, _random_torsion(rng, order, lat), lat, policy=ctx.policy)
            for _ in range(ctx.count(20)):
                try:
                    worst = max(worst, abs(translate_sum(f, _random_z(rng, lat), ctx.policy)))
                except NumericFailure:
                    skipped += 1
    return CriterionResult("translate-sum", worst <= 1e-8, worst, ctx.seed * 1000 + index,
                           {"lattices": lattices, "orders": [2, 8], "skipped_near_pole": skipped})


def level_amplification_criterion(ctx: SuiteContext, index: int) -> CriterionResult:
    rng = ctx.rng(index)
    worst = 0.0
    for _ in range(ctx.count(10)):
        lat, p = ctx.base(rng)
        for n, m in ((2, 4), (2, 6), (3, 6), (4, 8)):
            f = construct_b(p, _random_torsion(rng, n, lat), lat, policy=ctx.policy)
            z = _random_z(rng, lat)
            for g in (f, f.shifted(1.0)):
                lhs = full_level_sum(g, z, m, ctx.policy)
                rhs = m * m / n * translate_sum(g, z, ctx.policy)
                worst = max(worst, abs(lhs - rhs))
    return CriterionResult("level-amplification", worst <= 1e-7, worst, ctx.seed * 1000 + index,
                           {"pairs": [[2, 4], [2, 6], [3, 6], [4, 8]]})


def zero_structure_criterion(ctx: SuiteContext, index: int) -> CriterionResult:
    rng = ctx.rng(index)
    worst = 0.0
    failures = []
    for _ in range(ctx.count(50)):
        lat, p = ctx.base(rng)
        for order in range(2, 9):
            f = construct_b(p, _random_torsion(rng, order, lat), lat, policy=ctx.policy)
            try:
                zeros, poles, boundary = argument_principle_count(f, ctx.policy)
                pair = find_zeros(f, ctx.policy)
            except NumericFailure as e:
                failures.append({"tau": f.t.to_text(), "lattice": [lat.omega2.real, lat.omega2.imag],
                                 "error": str(e)})
                continue
            if (zeros, poles, boundary) != (2, 2, 0):
                failures.append({"tau": f.t.to_text(), "counts": [zeros, poles, boundary]})
            worst = max(worst, pair.abel_residual)
    return CriterionResult("zero-structure", not failures and worst <= 1e-8, worst, ctx.seed * 1000 + index,
                           {"failures": failures})


def two_torsion_law_criterion(ctx: SuiteContext, index: int) -> CriterionResult:
    rng = ctx.rng(index)
    if ctx.lattice is not None:
        lattices = [ctx.lattice]
    else:
        lattices = [Lattice.square(), Lattice.hexagonal()]
        while len(lattices) < ctx.count(100):
            lattices.append(ctx.base(rng)[0])
    worst = 0.0
    for lat in lattices:
        p = _random_z(rng, lat)
        twos = two_torsion(lat)
        for tau in twos:
            pair = find_zeros(construct_b(p, tau, lat, policy=ctx.policy), ctx.policy)
            expected = [p - other.embed(lat) for other in twos if other != tau]
            for q in pair.points:
                worst = max(worst, min(torus_distance(q, e, lat) for e in expected))
            if pair.double:
                worst = max(worst, 1.0)
    non_generic = sum(1 for lat in lattices if lat.is_special())
    return CriterionResult("two-torsion-law", worst <= 1e-8, worst, ctx.seed * 1000 + index,
                           {"lattices": len(lattices), "non_generic": non_generic})


def no_double_zero_criterion(ctx: SuiteContext, index: int) -> CriterionResult:
    rng = ctx.rng(index)
    margin = np.inf
    failures = 0
    for _ in range(ctx.count(100)):
        lat, p = ctx.base(rng)
        for order in range(2, 7):
            report = check_no_double_zero(construct_b(p, _random_torsion(rng, order, lat), lat,
                                                      policy=ctx.policy), ctx.policy)
            margin = min(margin, report.min_margin)
            failures += report.min_margin < 1e-4
    return CriterionResult("no-double-zero", failures == 0, float(margin), ctx.seed * 1000 + index,
                           {"failures": failures, "threshold": 1e-4})


def _nonzero_up_to(order_max: int, lattice: Lattice) -> List[TorsionPoint]:
    seen = {}
    for n in range(2, order_max + 1):
        for t in enumerate_torsion(n, lattice=lattice):
            if not t.is_zero():
                a, b, level = t.reduced()
                seen.setdefault((a, b, level), TorsionPoint(a, b, level, lattice))
    return [seen[k] for k in sorted(seen, key=lambda k: (k[2], k[0], k[1]))]


def pairwise_disjointness_criterion(ctx: SuiteContext, index: int) -> CriterionResult:
    rng = ctx.rng(index)
    tol = ctx.policy.arrangement_tol
    violations = []
    six_six = {"shared": 0, "disjoint": 0}
    triple_points = 0
    worst = 0.0
    for _ in range(ctx.count(20)):
        lat, p = ctx.base(rng)
        points = _nonzero_up_to(6, lat)
        zeros = {t: find_zeros(construct_b(p, t, lat, policy=ctx.policy), ctx.policy).points for t in points}
        for t1, t2 in combinations(points, 2):
            d = min(torus_distance(q, r, lat) for q in zeros[t1] for r in zeros[t2])
            kind = classify_pair(t1, t2).classification
            if kind is PairClassification.TwoTwo:
                target = p - (t1 + t2).embed(lat)
                shared = [q for q in zeros[t1] if min(torus_distance(q, r, lat) for r in zeros[t2]) <= tol]
                miss = max([torus_distance(q, target, lat) for q in shared] or [1.0])
                worst = max(worst, miss)
                if len(shared) != 1 or miss > tol:
                    violations.append({"t1": t1.to_text(), "t2": t2.to_text(), "shared": len(shared)})
            elif kind is PairClassification.SixSix:
                six_six["shared" if d <= tol else "disjoint"] += 1
            elif d <= tol:
                violations.append({"t1": t1.to_text(), "t2": t2.to_text(), "distance": d})
        pooled = [(q, t) for t in points for q in zeros[t]]
        for q, t in pooled:
            owners = {t} | {s for r, s in pooled if torus_distance(q, r, lat) <= tol}
            if len(owners) >= 3:
                triple_points += 1
    return CriterionResult("pairwise-disjointness", not violations and triple_points == 0, worst,
                           ctx.seed * 1000 + index,
                           {"violations": violations[:20], "six_six": six_six, "triple_coincidences": triple_points})


def nodal_fiber_criterion(ctx: SuiteContext, index: int) -> CriterionResult:
    rng = ctx.rng(index)
    worst = 0.0
    for n in range(2, ctx.n + 1):
        z = rng.uniform(-2.0, 2.0, size=ctx.count(100)) + 1j * rng.uniform(-2.0, 2.0, size=ctx.count(100))
        worst = max(worst, float(np.max(np.abs(nodal_fiber_sum(z, n)))))
    return CriterionResult("nodal-fiber-sum", worst <= 1e-10, worst, ctx.seed * 1000 + index, {"n_max": ctx.n})


def monodromy_criterion(ctx: SuiteContext, index: int) -> CriterionResult:
    mismatches = []
    for n in range(2, 9):
        brute = len(enumerate_sl2(n, ctx.policy.enumeration_cap))
        group = generated_subgroup([transvection(d, n) for d in DEFAULT_DELTAS], ctx.policy.enumeration_cap)
        orbits = orbit_on_exact_order(DEFAULT_DELTAS, n, ctx.policy.enumeration_cap)
        ok = (brute == sl2_order(n) == group.order and check_surjectivity(DEFAULT_DELTAS, n, ctx.policy.enumeration_cap)
              and len(orbits) == 1 and len(orbits[0]) == torsion_count(n))
        if not ok:
            mismatches.append({"n": n, "brute": brute, "formula": sl2_order(n), "generated": group.order,
                               "orbits": [len(o) for o in orbits]})
    return CriterionResult("monodromy", not mismatches, float(len(mismatches)), ctx.seed * 1000 + index,
                           {"levels": [2, 8], "mismatches": mismatches})


def lemma_exhaustives_criterion(ctx: SuiteContext, index: int) -> CriterionResult:
    lem = {n: lem5_exhaustive(n) for n in (4, 12, 20)}
    triples = triple_exclusion_exhaustive(6)
    passed = all(lem.values()) and triples.passed
    return CriterionResult("lemma-exhaustives", passed, float(len(triples.qualifying_triples)),
                           ctx.seed * 1000 + index,
                           {"order_two_difference": {str(n): ok for n, ok in lem.items()},
                            "triple_exclusion": triples.to_transport_format()})


def arrangement_dichotomy_criterion(ctx: SuiteContext, index: int) -> CriterionResult:
    trials = ctx.count(5)
    runs = {}
    passed = True
    unclassified = 0
    for m in (2, 3, 4, 5, 6, 8):
        report = dichotomy_experiment(m, trials, ctx.seed * 1000 + index + m, ctx.policy, ctx.workers)
        runs[str(m)] = report.passed
        passed = passed and report.passed
        unclassified += sum(1 for r in report.runs if r.verdict is Verdict.Unclassified)
    rng = ctx.rng(index)
    full_two = []
    for _ in range(trials):
        lat, p = ctx.base(rng)
        report = classify_arrangement(subgroup_of_type(2, 2, lat), p, lat, policy=ctx.policy, workers=ctx.workers)
        full_two.append([report.total_triples, report.total_nodes])
        passed = passed and report.total_triples == 4 and report.total_nodes == 0
    return CriterionResult("arrangement-dichotomy", passed and unclassified == 0, float(unclassified),
                           ctx.seed * 1000 + index, {"m": runs, "full_two_torsion": full_two})


def uniqueness_criterion(ctx: SuiteContext, index: int) -> CriterionResult:
    rng = ctx.rng(index)
    worst = 0.0
    for i in range(ctx.count(20)):
        lat, p = ctx.base(rng)
        tau = _random_torsion(rng, int(rng.integers(2, 9)), lat)
        f = construct_b(p, tau, lat, policy=ctx.policy)
        g = construct_b_linear(p, tau, lat, ctx.policy, seed=i)
        worst = max(worst, uniqueness_spread(f, g, ctx.policy, seed=i))
    return CriterionResult("uniqueness", worst <= 1e-8, worst, ctx.seed * 1000 + index, {})


def _digest(results: Sequence[CriterionResult]) -> str:
    return json.dumps([r.to_transport_format() for r in results], sort_keys=True)


def determinism_criterion(ctx: SuiteContext, index: int,
                          reference: Optional[Sequence[CriterionResult]] = None) -> CriterionResult:
    """
    Re-runs the other criteria of the report with cleared caches and compares the two reports byte for byte. Inside
    run_suite the reference is everything selected before it; run on its own, DETERMINISM_DEFAULTS is the reference.
    """
    if reference is None:
        reference = run_suite(ctx, DETERMINISM_DEFAULTS)
    names = [r.name for r in reference]
    clear_caches()
    same = _digest(reference) == _digest(run_suite(ctx, names))
    return CriterionResult("determinism", same, 0.0 if same else 1.0, ctx.seed * 1000 + index, {"criteria": names})


CRITERIA: Dict[str, Callable[[SuiteContext, int], CriterionResult]] = {
    "translate-sum": translate_sum_criterion,
    "level-amplification": level_amplification_criterion,
    "zero-structure": zero_structure_criterion,
    "two-torsion-law": two_torsion_law_criterion,
    "no-double-zero": no_double_zero_criterion,
    "pairwise-disjointness": pairwise_disjointness_criterion,
    "nodal-fiber-sum": nodal_fiber_criterion,
    "monodromy": monodromy_criterion,
    "lemma-exhaustives": lemma_exhaustives_criterion,
    "arrangement-dichotomy": arrangement_dichotomy_criterion,
    "uniqueness": uniqueness_criterion,
    "determinism": determinism_criterion,
}


def run_criterion(name: str, ctx: SuiteContext,
                  reference: Optional[Sequence[CriterionResult]] = None) -> CriterionResult:
    """
    Runs one criterion; numeric failures become a failed result instead of propagating. reference is passed only to
    the determinism criterion.
    """
    if name not in CRITERIA:
        raise InvalidInputError("Unknown criterion {0}".format(name), known=sorted(CRITERIA))
    index = list(CRITERIA).index(name) + 1
    try:
        if name == DETERMINISM:
            result = determinism_criterion(ctx, index, reference)
        else:
            result = CRITERIA[name](ctx, index)
    except NumericFailure as e:
        logger.error("criterion %s failed numerically: %s", name, e)
        result = CriterionResult(name, False, float("inf"), ctx.seed * 1000 + index, e.to_transport_format())
    logger.info("criterion %s: passed=%s residual=%s", name, result.passed, result.residual)
    return result


def run_suite(ctx: SuiteContext, only: Optional[Sequence[str]] = None) -> List[CriterionResult]:
    names = list(CRITERIA) if not only else [n for n in CRITERIA if n in set(only)]
    unknown = set(only or ()) - set(CRITERIA)
    if unknown:
        raise InvalidInputError("Unknown criteria: {0}".format(", ".join(sorted(unknown))))
    results = [run_criterion(name, ctx) for name in names if name != DETERMINISM]
    if DETERMINISM in names:
        # Compares the whole selected report unless determinism was requested alone
        results.append(run_criterion(DETERMINISM, ctx, results or None))
    return results

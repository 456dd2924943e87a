"""
The elliptic functions b_{tau,p}: simple poles at p and p - tau with residues +1 and -1 and vanishing translate sum
sum_{k<n} b(z + k tau) = 0, n = ord(tau).

Construction: b(z) = zeta(z - p) - zeta(z - p + t) + c where t is a lift of tau to C and c = eta(t), the quasi-period
map extended R-linearly to C (for n*t = a*omega1 + b*omega2, c = (a*eta1 + b*eta2)/n).
"""
import math
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import List, Optional, Tuple
import numpy as np
from torsionnodes.config import get_global_config
from torsionnodes.contour import WindingGrid, newton, winding_grid
from torsionnodes.errors import InvalidInputError, NumericFailure, PoleProximityError
from torsionnodes.policy import DEFAULT_POLICY, NumericPolicy
from torsionnodes.theta import quasi_periods, residue, weierstrass_p, weierstrass_p_prime, weierstrass_zeta
from torsionnodes.torus import (Lattice, TorsionPoint, TorusPoint, halves, reduce_to_fundamental, torus_distance,
                                torus_gap)
from torsionnodes.utils import get_logger, make_rng

global_config = get_global_config()
logger = get_logger(__name__,
                    global_config.get_log_file(),
                    global_config.get_file_verbosity(),
                    global_config.get_screen_verbosity())

TRANSLATE_SUM_TOL = 1e-9
ABEL_TOL = 1e-8
PROPORTIONALITY_TOL = 1e-7
ZERO_SEARCH_ATTEMPTS = 4

# Offsets from p, in lattice coordinates, at which a new construction is checked
_SAMPLE_POINTS = ((0.2137, 0.3719), (0.6421, 0.1583), (0.4729, 0.8311))


@dataclass(frozen=True)
class BFunction:
    """
    A normalized b_{tau,p}

    Attributes
    ----------
    lattice: Lattice
    p: TorusPoint
        Pole with residue +1
    t: TorsionPoint
        tau, written at its exact order
    t_lift: complex
        The lift of tau to C used by the zeta difference
    c: complex
        Additive constant making the translate sum vanish
    """
    lattice: Lattice
    p: TorusPoint
    t: TorsionPoint
    t_lift: complex
    c: complex

    @property
    def n(self) -> int:
        return self.t.n

    @property
    def poles(self) -> Tuple[complex, complex]:
        """The two poles p (residue +1) and p - tau (residue -1), reduced"""
        return self.p.z, reduce_to_fundamental(self.p.z - self.t_lift, self.lattice).z

    def __call__(self, z, policy: NumericPolicy = DEFAULT_POLICY):
        return eval_b(self, z, policy)

    def derivative(self, z, policy: NumericPolicy = DEFAULT_POLICY):
        """b'(z) = -wp(z - p) + wp(z - p + t)"""
        w = np.asarray(z, dtype=complex) - self.p.z
        return (-weierstrass_p(w, self.lattice, policy) + weierstrass_p(w + self.t_lift, self.lattice, policy))[()]

    def derivative_scale(self, z, policy: NumericPolicy = DEFAULT_POLICY) -> float:
        """|wp(z - p)| + |wp(z - p + t)|, the size of the two terms that cancel in b'(z)"""
        w = complex(z) - self.p.z
        return (abs(complex(weierstrass_p(w, self.lattice, policy)))
                + abs(complex(weierstrass_p(w + self.t_lift, self.lattice, policy))))

    def shifted(self, delta: complex):
        """The un-normalized function b + delta"""
        return replace(self, c=self.c + complex(delta))

    def to_transport_format(self):
        return {"p": [self.p.z.real, self.p.z.imag],
                "tau": self.t.to_text(),
                "order": self.n,
                "t_lift": [self.t_lift.real, self.t_lift.imag],
                "c": [self.c.real, self.c.imag]}


@dataclass(frozen=True)
class ZeroPair:
    """
    The two zeros of a b-function, counted with multiplicity

    Attributes
    ----------
    q1, q2: TorusPoint
        The zeros; equal when double
    double: bool
        True when b vanishes below the double-zero threshold at a point p - eta with 2 eta = tau, or when the refined
        zeros coincide within the cluster tolerance
    multiplicities: tuple
        (1, 1) for simple zeros, (2,) for a double zero
    derivatives: tuple
        |b'(q1)|, |b'(q2)|
    residuals: tuple
        |b(q1)|, |b(q2)| after refinement
    abel_residual: float
        Torus distance between q1 + q2 and 2p - tau
    """
    q1: TorusPoint
    q2: TorusPoint
    double: bool
    multiplicities: Tuple[int, ...]
    derivatives: Tuple[float, float]
    residuals: Tuple[float, float]
    abel_residual: float
    cell_counts: int = field(default=2, compare=False)

    @property
    def points(self) -> List[TorusPoint]:
        """Distinct zeros"""
        return [self.q1] if self.double else [self.q1, self.q2]

    def to_transport_format(self):
        return {"zeros": [[q.z.real, q.z.imag] for q in self.points],
                "double": self.double,
                "multiplicities": list(self.multiplicities),
                "derivative_magnitudes": list(self.derivatives),
                "residuals": list(self.residuals),
                "abel_residual": self.abel_residual}


def _canonical(t: TorsionPoint, lattice: Lattice) -> TorsionPoint:
    a, b, n = t.reduced()
    return TorsionPoint(a, b, n, lattice)


def lift_constant(lattice: Lattice, t_lift: complex) -> complex:
    """
    The R-linear extension of the quasi-period map evaluated at t_lift: x*eta1 + y*eta2 for t_lift = x*omega1 + y*omega2
    """
    qp = quasi_periods(lattice)
    x, y = lattice.coordinates(complex(t_lift))
    return x * qp.eta1 + y * qp.eta2


def construct_b(p, t: TorsionPoint, lattice: Optional[Lattice] = None, t_lift: Optional[complex] = None,
                policy: NumericPolicy = DEFAULT_POLICY) -> BFunction:
    """
    Builds the normalized b_{tau,p} and checks its translate sum numerically

    Parameters
    ----------
    p: TorusPoint or complex
        The pole with residue +1
    t: TorsionPoint
        tau, of order at least 2
    lattice: Lattice
        Defaults to the lattice of p or of t
    t_lift: complex
        Optional lift of tau; must differ from (a*omega1 + b*omega2)/n by a lattice vector
    policy: NumericPolicy
        Tolerances

    Returns
    -------
    BFunction

    Raises
    ------
    InvalidInputError
        If tau has order below 2, the lift is not a lift of tau, or no lattice is known
    NumericFailure
        If the translate sum does not vanish at the sample points
    """
    lat = lattice or (p.lattice if isinstance(p, TorusPoint) else None) or t.lattice
    if lat is None:
        raise InvalidInputError("No lattice given for the b-function")
    canon = _canonical(t, lat)
    if canon.n < 2:
        raise InvalidInputError("tau must have order at least 2", tau=t)
    base = canon.embed(lat)
    if t_lift is None:
        t_lift = base
    else:
        t_lift = complex(t_lift)
        if torus_distance(t_lift, base, lat) > 1e-9:
            raise InvalidInputError("t_lift is not a lift of tau", tau=t, t_lift=t_lift)
    pole = reduce_to_fundamental(p.z if isinstance(p, TorusPoint) else p, lat)
    f = BFunction(lat, pole, canon, t_lift, lift_constant(lat, t_lift))
    logger.debug("b for tau=%s p=%s: t_lift=%s c=%s", canon.to_text(), pole.z, t_lift, f.c)

    for s, u in _SAMPLE_POINTS:
        z = pole.z + lat.point(s, u)
        terms = eval_b(f, z + np.arange(f.n) * t_lift, policy)
        total = abs(np.sum(terms))
        if total > TRANSLATE_SUM_TOL * max(1.0, float(np.sum(np.abs(terms)))):
            logger.error("translate sum %s at %s for tau=%s", total, z, canon.to_text())
            raise NumericFailure("Translate sum of the constructed b does not vanish", tau=canon, residual=total)
    return f


def eval_b(f: BFunction, z, policy: NumericPolicy = DEFAULT_POLICY):
    """
    Value of b at z (scalar or array)

    Raises
    ------
    PoleProximityError
        If z is within policy.pole_proximity of either pole
    """
    w = np.asarray(z, dtype=complex) - f.p.z
    return (weierstrass_zeta(w, f.lattice, policy) - weierstrass_zeta(w + f.t_lift, f.lattice, policy) + f.c)[()]


def _check_translates(f: BFunction, points: np.ndarray, policy: NumericPolicy):
    for pole in f.poles:
        gap = torus_gap(points, pole, f.lattice)
        if gap.size and float(np.min(gap)) < policy.translate_pole_proximity:
            raise PoleProximityError("A translate lies within {0} of a pole".format(policy.translate_pole_proximity),
                                     pole=pole)


def translate_sum(f: BFunction, z: complex, policy: NumericPolicy = DEFAULT_POLICY) -> complex:
    """
    sum_{k=0}^{n-1} b(z + k tau)

    Raises
    ------
    PoleProximityError
        If any translate is within policy.translate_pole_proximity of a pole
    """
    points = complex(z) + np.arange(f.n) * f.t_lift
    _check_translates(f, points, policy)
    return complex(np.sum(eval_b(f, points, policy)))


def full_level_sum(f: BFunction, z: complex, m: int, policy: NumericPolicy = DEFAULT_POLICY) -> complex:
    """
    sum over all lambda in J(E)_m of b(z + lambda); equals (m^2/n) * translate_sum(f, z)

    Raises
    ------
    InvalidInputError
        If n does not divide m
    """
    if m < 1 or m % f.n != 0:
        raise InvalidInputError("The level m must be a positive multiple of n", m=m, n=f.n)
    a, b = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")
    points = complex(z) + ((a * f.lattice.omega1 + b * f.lattice.omega2) / m).ravel()
    _check_translates(f, points, policy)
    return complex(np.sum(eval_b(f, points, policy)))


def residues(f: BFunction, policy: NumericPolicy = DEFAULT_POLICY) -> Tuple[complex, complex]:
    """
    Residues at p and p - tau by small-circle contour integrals
    """
    p, p_minus = f.poles
    radius = min(1e-3, 0.25 * torus_distance(p, p_minus, f.lattice))
    return (residue(lambda z: eval_b(f, z, policy), p, radius),
            residue(lambda z: eval_b(f, z, policy), p_minus, radius))


def _grid_origin(lat: Lattice, attempt: int, grid: int) -> complex:
    rng = make_rng(7919 + attempt)
    s, t = rng.uniform(0.1, 0.9, size=2) / grid
    return lat.point(s, t)


def _scan(f: BFunction, policy: NumericPolicy) -> Tuple[WindingGrid, np.ndarray]:
    last = None
    for attempt in range(ZERO_SEARCH_ATTEMPTS):
        origin = _grid_origin(f.lattice, attempt, policy.grid)
        try:
            grid = winding_grid(lambda z: eval_b(f, z, policy), origin, f.lattice, policy, avoid=f.poles)
        except NumericFailure as e:
            logger.debug("grid placement attempt %d failed: %s", attempt, e)
            last = e
            continue
        counts = grid.winding.copy()
        for pole in f.poles:
            i, j = grid.cell_of(pole, f.lattice)
            counts[i, j] += 1
        if counts.sum() == 2 and counts.min() >= 0:
            return grid, counts
        logger.debug("attempt %d counted %d zeros", attempt, counts.sum())
        last = NumericFailure("Argument principle count is {0}, expected 2".format(counts.sum()))
    logger.error("zero search failed for tau=%s p=%s: %s", f.t.to_text(), f.p.z, last)
    raise NumericFailure("Argument principle zero count failed after {0} placements".format(ZERO_SEARCH_ATTEMPTS),
                         tau=f.t, p=f.p.z, cause=str(last))


def argument_principle_count(f: BFunction, policy: NumericPolicy = DEFAULT_POLICY) -> Tuple[int, int, int]:
    """
    (#zeros, #poles, winding around the whole parallelogram) from the grid scan

    Raises
    ------
    NumericFailure
        If no grid placement gives exactly two zeros
    """
    grid, counts = _scan(f, policy)
    return int(counts.sum()), len(f.poles), grid.boundary_winding


def abel_partner(f: BFunction, q: complex) -> complex:
    """The zero determined by q through q1 + q2 = 2p - tau"""
    return reduce_to_fundamental(2.0 * f.p.z - f.t_lift - q, f.lattice).z


def find_zeros(f: BFunction, policy: NumericPolicy = DEFAULT_POLICY) -> ZeroPair:
    """
    Locates both zeros of b: winding numbers on a grid find the cells holding zeros, Newton's method refines from
    the cell centers and the Abel relation supplies or checks the partner zero

    Returns
    -------
    ZeroPair

    Raises
    ------
    NumericFailure
        If the zero count is not 2, Newton does not converge, or the Abel relation fails
    """
    return _find_zeros_cached(f, policy)


def _double_zero(f: BFunction, found: List[complex], value, slope, policy: NumericPolicy) -> Optional[complex]:
    """
    b(w + h) = b(w - h) about each w = p - eta with 2 eta = tau, so a double zero can only sit at one of these w.
    Returns that w when |b(w)| is below the double-zero threshold, after a multiplicity-2 Newton pass from the nearest
    simple estimate confirms it.
    """
    lat = f.lattice
    centers = [reduce_to_fundamental(f.p.z - eta.embed(lat), lat).z for eta in halves(f.t)]
    w = min(centers, key=lambda c: abs(complex(value(c))))
    if abs(complex(value(w))) >= policy.double_zero_threshold:
        return None
    start = min(found, key=lambda z: torus_distance(z, w, lat)) if found else w
    z = reduce_to_fundamental(newton(value, slope, start, policy, multiplicity=2)[0], lat).z
    if torus_distance(z, w, lat) > math.sqrt(policy.double_zero_threshold):
        raise NumericFailure("Double zero refinement left the symmetry point", tau=f.t, p=f.p.z, center=w, last=z)
    return w


@lru_cache(maxsize=4096)
def _find_zeros_cached(f: BFunction, policy: NumericPolicy) -> ZeroPair:
    lat = f.lattice
    grid, counts = _scan(f, policy)

    def value(z):
        return eval_b(f, z, policy)

    def slope(z):
        return f.derivative(z, policy)

    found = []
    for i, j in zip(*np.nonzero(counts)):
        start = grid.cell_center(lat, int(i), int(j))
        z, _, iterations = newton(value, slope, start, policy)
        z = reduce_to_fundamental(z, lat).z
        logger.debug("newton from cell (%d, %d) converged in %d steps", i, j, iterations)
        if all(torus_distance(z, other, lat) > policy.cluster_tol for other in found):
            found.append(z)
    if len(found) == 1:
        partner = abel_partner(f, found[0])
        if abs(value(partner)) > policy.newton_residual:
            partner = reduce_to_fundamental(newton(value, slope, partner, policy)[0], lat).z
        found = [found[0], partner]

    center = _double_zero(f, found, value, slope, policy)
    if center is not None:
        q1 = q2 = center
    elif len(found) != 2:
        raise NumericFailure("Expected two zeros, refined {0}".format(len(found)), tau=f.t, p=f.p.z)
    else:
        q1, q2 = sorted(found, key=lambda z: (round(z.real, 9), round(z.imag, 9)))
        if torus_distance(q1, q2, lat) <= policy.cluster_tol:
            q2 = q1
    double = q1 == q2
    abel = torus_distance(q1 + q2, 2.0 * f.p.z - f.t_lift, lat)
    if abel > ABEL_TOL:
        logger.error("Abel relation off by %s for tau=%s", abel, f.t.to_text())
        raise NumericFailure("Zeros violate the Abel relation", tau=f.t, residual=abel)
    return ZeroPair(TorusPoint(q1, lat), TorusPoint(q2, lat), double, (2,) if double else (1, 1),
                    (abs(complex(slope(q1))), abs(complex(slope(q2)))),
                    (abs(complex(value(q1))), abs(complex(value(q2)))), abel, int(counts.sum()))


def clear_caches():
    """Drops memoized zero searches and quasi-periods"""
    _find_zeros_cached.cache_clear()
    quasi_periods.cache_clear()


@dataclass(frozen=True)
class DoubleZeroReport:
    """
    |b(p - eta)| for the four eta with 2 eta = tau; a double zero of b can only sit at one of these points
    """
    values: Tuple[Tuple[str, float], ...]
    min_margin: float
    threshold: float

    @property
    def passed(self) -> bool:
        return self.min_margin >= self.threshold

    def to_transport_format(self):
        return {"values": {eta: margin for eta, margin in self.values},
                "min_margin": self.min_margin,
                "threshold": self.threshold,
                "passed": self.passed}


def check_no_double_zero(f: BFunction, policy: NumericPolicy = DEFAULT_POLICY) -> DoubleZeroReport:
    values = []
    for eta in halves(f.t):
        margin = abs(complex(eval_b(f, f.p.z - eta.embed(f.lattice), policy)))
        values.append((eta.to_text(), margin))
    return DoubleZeroReport(tuple(values), min(v for _, v in values), policy.double_zero_threshold)


@dataclass(frozen=True)
class ZeroIntersection:
    """
    Common zeros of two b-functions: kind is "Disjoint" or "SharedPoint"
    """
    kind: str
    shared: Tuple[TorusPoint, ...]
    min_distance: float

    def to_transport_format(self):
        return {"kind": self.kind,
                "shared": [[q.z.real, q.z.imag] for q in self.shared],
                "min_distance": self.min_distance}


def _same_base(f1: BFunction, f2: BFunction):
    if f1.lattice != f2.lattice:
        raise InvalidInputError("b-functions live on different lattices")
    if torus_distance(f1.p, f2.p, f1.lattice) > 1e-12:
        raise InvalidInputError("b-functions have different base points", p1=f1.p.z, p2=f2.p.z)


def zero_intersection(f1: BFunction, f2: BFunction, tol: Optional[float] = None,
                      policy: NumericPolicy = DEFAULT_POLICY) -> ZeroIntersection:
    """
    Compares the zero sets of two b-functions with the same base point

    Raises
    ------
    InvalidInputError
        If the lattices or base points differ, or tau1 = tau2
    """
    _same_base(f1, f2)
    if f1.t == f2.t:
        raise InvalidInputError("tau1 and tau2 must differ", tau=f1.t)
    tol = policy.arrangement_tol if tol is None else tol
    z1, z2 = find_zeros(f1, policy), find_zeros(f2, policy)
    shared = []
    best = math.inf
    for q in z1.points:
        d = min(torus_distance(q, r, f1.lattice) for r in z2.points)
        best = min(best, d)
        if d <= tol:
            shared.append(q)
    return ZeroIntersection("SharedPoint" if shared else "Disjoint", tuple(shared), best)


@dataclass(frozen=True)
class CombinationReport:
    """
    b_{tau1,p}(z) + c * b_{tau2,p}(z + tau1 - tau2) compared with b_{tau1 - tau2, p}
    """
    c: complex
    difference: TorsionPoint
    ratio: complex
    spread: float

    @property
    def proportional(self) -> bool:
        return self.spread <= PROPORTIONALITY_TOL and 0 < abs(self.ratio) < math.inf

    def to_transport_format(self):
        return {"c": [self.c.real, self.c.imag],
                "difference": self.difference.to_text(),
                "ratio": [self.ratio.real, self.ratio.imag],
                "spread": self.spread,
                "proportional": self.proportional}


def _sample_points(lat: Lattice, avoid, count: int, seed: int, margin: float = 0.05):
    rng = make_rng(seed)
    points = []
    while len(points) < count:
        z = lat.point(*rng.uniform(0.0, 1.0, size=2))
        if all(torus_distance(z, a, lat) > margin for a in avoid):
            points.append(z)
    return np.array(points)


def combine_shifted(f1: BFunction, f2: BFunction, policy: NumericPolicy = DEFAULT_POLICY,
                    seed: int = 0) -> CombinationReport:
    """
    Cancels the pole of b_{tau1,p} at p - tau1 against the shifted b_{tau2,p}(z + tau1 - tau2). The result has poles
    at p and p - (tau1 - tau2) only and is compared, at ten points, with b_{tau1 - tau2, p}

    Raises
    ------
    InvalidInputError
        If tau1 = tau2 or the base points differ
    """
    _same_base(f1, f2)
    difference = f1.t - f2.t
    if difference.is_zero():
        raise InvalidInputError("tau1 - tau2 must be nonzero", tau1=f1.t, tau2=f2.t)
    lat = f1.lattice
    d = f1.t_lift - f2.t_lift
    p_minus = f1.poles[1]
    radius = min(1e-3, 0.25 * min(torus_distance(p_minus, f1.p, lat), torus_distance(p_minus, f1.p.z - d, lat)))
    c = -(residue(lambda z: eval_b(f1, z, policy), p_minus, radius) /
          residue(lambda z: eval_b(f2, z + d, policy), p_minus, radius))
    logger.debug("combination constant for %s and %s: %s", f1.t.to_text(), f2.t.to_text(), c)

    target = construct_b(f1.p, difference, lat, policy=policy)
    points = _sample_points(lat, (f1.p.z, p_minus, reduce_to_fundamental(f1.p.z - d, lat).z), 10, seed)
    combined = eval_b(f1, points, policy) + c * eval_b(f2, points + d, policy)
    ratios = combined / eval_b(target, points, policy)
    mean = complex(np.mean(ratios))
    spread = float(np.max(np.abs(ratios - mean)) / abs(mean)) if mean != 0 else math.inf
    return CombinationReport(complex(c), _canonical(difference, lat), mean, spread)


@dataclass(frozen=True)
class LinearBFunction:
    """
    b built as alpha * h(z - p) + beta on the basis {1, h} of functions with at most simple poles at p and p - tau,
    h(w) = (wp'(w) - wp'(t)) / (wp(w) - wp(t))
    """
    lattice: Lattice
    p: TorusPoint
    t_lift: complex
    alpha: complex
    beta: complex

    def basis(self, z, policy: NumericPolicy = DEFAULT_POLICY):
        return _pole_basis(np.asarray(z, dtype=complex) - self.p.z, self.t_lift, self.lattice, policy)

    def __call__(self, z, policy: NumericPolicy = DEFAULT_POLICY):
        return (self.alpha * self.basis(z, policy) + self.beta)[()]


def _pole_basis(w, t: complex, lat: Lattice, policy: NumericPolicy):
    num = weierstrass_p_prime(w, lat, policy) - weierstrass_p_prime(t, lat, policy)
    return num / (weierstrass_p(w, lat, policy) - weierstrass_p(t, lat, policy))


def construct_b_linear(p, t: TorsionPoint, lattice: Optional[Lattice] = None,
                       policy: NumericPolicy = DEFAULT_POLICY, seed: int = 0) -> LinearBFunction:
    """
    Solves for (alpha, beta) in least squares from the residue condition Res_p = 1 and the translate-sum condition
    at several sample points. Used to cross-check the uniqueness of b.
    """
    lat = lattice or (p.lattice if isinstance(p, TorusPoint) else None) or t.lattice
    canon = _canonical(t, lat)
    if canon.n < 2:
        raise InvalidInputError("tau must have order at least 2", tau=t)
    pole = reduce_to_fundamental(p.z if isinstance(p, TorusPoint) else p, lat)
    t_lift = canon.embed(lat)
    n = canon.n

    # h has poles at w = 0 and w = -t and a removable point at w = t; sample translates stay clear of all three
    shifts = np.arange(n) * t_lift
    rng = make_rng(seed)
    rows, rhs = [], []
    res = residue(lambda z: _pole_basis(z - pole.z, t_lift, lat, policy), pole.z,
                  min(1e-3, 0.25 * torus_distance(0.0, t_lift, lat)))
    rows.append([res, 0.0])
    rhs.append(1.0)
    while len(rows) < 7:
        w = lat.point(*rng.uniform(0.0, 1.0, size=2))
        ws = w + shifts
        gaps = np.minimum.reduce([torus_gap(ws, 0.0, lat), torus_gap(ws, t_lift, lat), torus_gap(ws, -t_lift, lat)])
        if float(np.min(gaps)) < 0.05:
            continue
        rows.append([complex(np.sum(_pole_basis(ws, t_lift, lat, policy))), float(n)])
        rhs.append(0.0)
    solution, *_ = np.linalg.lstsq(np.array(rows, dtype=complex), np.array(rhs, dtype=complex), rcond=None)
    logger.debug("linear construction for tau=%s: alpha=%s beta=%s", canon.to_text(), solution[0], solution[1])
    return LinearBFunction(lat, pole, t_lift, complex(solution[0]), complex(solution[1]))


def uniqueness_spread(f: BFunction, g: LinearBFunction, policy: NumericPolicy = DEFAULT_POLICY,
                      seed: int = 0) -> float:
    """
    Relative spread of f/g over ten sample points; zero when the two constructions agree up to a scalar
    """
    avoid = (f.p.z, f.poles[1], reduce_to_fundamental(f.p.z + f.t_lift, f.lattice).z)
    points = _sample_points(f.lattice, avoid, 10, seed)
    ratios = eval_b(f, points, policy) / g(points, policy)
    mean = complex(np.mean(ratios))
    return float(np.max(np.abs(ratios - mean)) / abs(mean))


def nodal_fiber_sum(z, n: int, pole_proximity: float = DEFAULT_POLICY.pole_proximity):
    """
    sum_{k=0}^{n-1} e^k z / ((e^k z - 1)(e^k z - e)) with e = exp(2 pi i / n); vanishes identically

    Raises
    ------
    InvalidInputError
        If n < 2
    PoleProximityError
        If a denominator is within pole_proximity of zero
    """
    if n < 2:
        raise InvalidInputError("n must be at least 2", n=n)
    root = np.exp(2j * np.pi / n)
    u = np.asarray(z, dtype=complex)[..., None] * root ** np.arange(n)
    den = (u - 1.0) * (u - root)
    if den.size and float(np.min(np.abs(den))) < pole_proximity:
        raise PoleProximityError("A term of the nodal fiber sum has a vanishing denominator", n=n)
    return np.sum(u / den, axis=-1)[()]


def zero_torsion_check(f: BFunction, level_max: int = 12, tol: float = 1e-7,
                       policy: NumericPolicy = DEFAULT_POLICY) -> List[Optional[int]]:
    """
    For each zero q, the smallest N <= level_max with N*(p - q) in the lattice, or None
    """
    zeros = find_zeros(f, policy)
    levels = []
    for q in (zeros.q1, zeros.q2):
        s, t = f.lattice.coordinates(f.p.z - q.z)
        level = next((k for k in range(1, level_max + 1)
                      if abs(k * s - round(k * s)) < tol and abs(k * t - round(k * t)) < tol), None)
        levels.append(level)
    return levels

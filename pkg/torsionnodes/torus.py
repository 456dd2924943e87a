import cmath
import math
import re
from dataclasses import dataclass, field
from functools import reduce
from typing import List, Optional, Tuple
import numpy as np
from sympy import primefactors
from torsionnodes.errors import InvalidInputError

# Lattice points closer than this (in lattice coordinates) to a cell boundary snap onto it
_SNAP = 1e-12
_HEXAGONAL_TAU = complex(-0.5, math.sqrt(3.0) / 2.0)

# Random lattices are drawn from this box inside the modular fundamental domain
RANDOM_BOX_RE = (-0.4, 0.4)
RANDOM_BOX_IM = (1.0, 2.0)


def reduce_tau(tau: complex, max_steps: int = 1000) -> complex:
    """
    Moves tau into the standard fundamental domain of SL2(Z) acting on the upper half plane.

    Tie-break on the boundary: Re(tau) in [-1/2, 1/2), and on the unit circle Re(tau) <= 0.

    Parameters
    ----------
    tau: complex
        A point with Im(tau) > 0

    Returns
    -------
    complex
        The reduced representative
    """
    x, y = tau.real, tau.imag
    for _ in range(max_steps):
        x -= math.floor(x + 0.5)
        r2 = x * x + y * y
        if r2 < 1.0 - 1e-15:
            x, y = -x / r2, y / r2
            continue
        break
    else:
        raise InvalidInputError("Lattice reduction did not terminate", tau=tau)
    if abs(x * x + y * y - 1.0) <= 1e-15 and x > 0:
        x = -x
    return complex(x, y)


@dataclass(frozen=True)
class Lattice:
    """
    The period lattice of a complex torus C/L, always stored in normalized form: omega1 = 1 and omega2 in the
    fundamental domain of the modular group. Torsion coordinates throughout the package refer to this basis.
    """
    omega1: complex = 1.0
    omega2: complex = 1j
    label: str = field(default="", compare=False)

    def __post_init__(self):
        w1 = complex(self.omega1)
        w2 = complex(self.omega2)
        if not (cmath.isfinite(w1) and cmath.isfinite(w2)) or w1 == 0:
            raise InvalidInputError("Lattice periods must be finite and nonzero", omega1=w1, omega2=w2)
        tau = w2 / w1
        if tau.imag <= 0:
            raise InvalidInputError("Im(omega2/omega1) must be positive", omega1=w1, omega2=w2)
        object.__setattr__(self, "omega1", 1.0 + 0j)
        object.__setattr__(self, "omega2", reduce_tau(tau))

    @property
    def tau(self) -> complex:
        return self.omega2

    @property
    def nome(self) -> complex:
        """q = exp(i pi tau), the nome used by the theta series"""
        return cmath.exp(1j * math.pi * self.omega2)

    @staticmethod
    def from_periods(omega1: complex, omega2: complex, label: str = ""):
        return Lattice(omega1, omega2, label)

    @staticmethod
    def square():
        return Lattice(1.0, 1j, "square")

    @staticmethod
    def hexagonal():
        return Lattice(1.0, _HEXAGONAL_TAU, "hexagonal")

    @staticmethod
    def random(rng, label: str = "random"):
        """
        Draws a lattice uniformly from the generic box Re in [-0.4, 0.4], Im in [1, 2] of the fundamental domain

        Parameters
        ----------
        rng: numpy.random.Generator
            Source of randomness; callers record its seed
        """
        re_ = rng.uniform(*RANDOM_BOX_RE)
        im_ = rng.uniform(*RANDOM_BOX_IM)
        return Lattice(1.0, complex(re_, im_), label)

    def is_special(self, tol: float = 1e-6) -> bool:
        """
        True for lattices with extra automorphisms (square and hexagonal), where genericity statements need not hold
        """
        return abs(self.omega2 - 1j) < tol or abs(self.omega2 - _HEXAGONAL_TAU) < tol

    def coordinates(self, z: complex) -> Tuple[float, float]:
        """
        Real coordinates (s, t) with z = s*omega1 + t*omega2
        """
        t = z.imag / self.omega2.imag
        s = z.real - t * self.omega2.real
        return s, t

    def point(self, s: float, t: float) -> complex:
        return s * self.omega1 + t * self.omega2

    def to_transport_format(self):
        return {"omega1": [self.omega1.real, self.omega1.imag],
                "omega2": [self.omega2.real, self.omega2.imag],
                "label": self.label,
                "special": self.is_special()}


def _frac(x: float) -> float:
    f = x - math.floor(x)
    if f >= 1.0 - _SNAP or f < _SNAP:
        return 0.0
    return f


@dataclass(frozen=True)
class TorusPoint:
    """
    A point of the torus, represented by its reduced representative in the half-open parallelogram
    [0,1)*omega1 + [0,1)*omega2
    """
    z: complex
    lattice: Lattice = field(repr=False)

    def __sub__(self, other):
        return reduce_to_fundamental(self.z - complex(other.z if isinstance(other, TorusPoint) else other),
                                     self.lattice)

    def __add__(self, other):
        return reduce_to_fundamental(self.z + complex(other.z if isinstance(other, TorusPoint) else other),
                                     self.lattice)


def reduce_to_fundamental(z, lat: Lattice) -> TorusPoint:
    """
    Reduces z to its representative in the half-open fundamental parallelogram of the lattice

    Parameters
    ----------
    z: complex
        Any finite complex number
    lat: Lattice
        The lattice

    Returns
    -------
    TorusPoint
        The reduced representative

    Raises
    ------
    InvalidInputError
        If z is not finite
    """
    z = complex(z)
    if not cmath.isfinite(z):
        raise InvalidInputError("Cannot reduce a non-finite point", z=z)
    s, t = lat.coordinates(z)
    return TorusPoint(lat.point(_frac(s), _frac(t)), lat)


def torus_distance(a, b, lat: Lattice) -> float:
    """
    Distance on the torus: the minimum of |a - b + lambda| over the nine lattice vectors lambda around the origin
    after both points are reduced
    """
    za = a.z if isinstance(a, TorusPoint) else reduce_to_fundamental(a, lat).z
    zb = b.z if isinstance(b, TorusPoint) else reduce_to_fundamental(b, lat).z
    d = za - zb
    return min(abs(d + i * lat.omega1 + j * lat.omega2) for i in (-1, 0, 1) for j in (-1, 0, 1))


@dataclass(frozen=True, eq=False)
class TorsionPoint:
    """
    An exact element (a*omega1 + b*omega2)/n of J(E)_n. Coordinates are kept as integers modulo n; two torsion points
    are equal iff they embed to the same point of the torus.
    """
    a: int
    b: int
    n: int
    lattice: Optional[Lattice] = field(default=None, repr=False)

    def __post_init__(self):
        if int(self.n) < 1:
            raise InvalidInputError("Torsion level must be a positive integer", n=self.n)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "a", int(self.a) % self.n)
        object.__setattr__(self, "b", int(self.b) % self.n)

    def reduced(self) -> Tuple[int, int, int]:
        """
        Canonical form (a', b', ord) at the lowest level on which the point is defined
        """
        g = math.gcd(math.gcd(self.a, self.b), self.n)
        return self.a // g, self.b // g, self.n // g

    def __eq__(self, other):
        if not isinstance(other, TorsionPoint):
            return NotImplemented
        return self.reduced() == other.reduced()

    def __hash__(self):
        return hash(self.reduced())

    def __repr__(self):
        return "TorsionPoint({0}/{2},{1}/{2})".format(self.a, self.b, self.n)

    def order(self) -> int:
        return torsion_order(self)

    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    def rescale(self, level: int):
        """
        The same point written at a level that is a multiple of the current one
        """
        if level % self.n != 0:
            raise InvalidInputError("Level {0} is not a multiple of {1}".format(level, self.n))
        d = level // self.n
        return TorsionPoint(self.a * d, self.b * d, level, self.lattice)

    def _common(self, other):
        _check_lattices(self, other)
        level = _lcm(self.n, other.n)
        return self.rescale(level), other.rescale(level), level

    def __add__(self, other):
        x, y, level = self._common(other)
        return TorsionPoint(x.a + y.a, x.b + y.b, level, self.lattice or other.lattice)

    def __neg__(self):
        return TorsionPoint(-self.a, -self.b, self.n, self.lattice)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k: int):
        return TorsionPoint(self.a * int(k), self.b * int(k), self.n, self.lattice)

    __rmul__ = __mul__

    def with_lattice(self, lattice: Lattice):
        return TorsionPoint(self.a, self.b, self.n, lattice)

    def embed(self, lattice: Optional[Lattice] = None) -> complex:
        """
        The lift (a*omega1 + b*omega2)/n with 0 <= a, b < n
        """
        lat = lattice or self.lattice
        if lat is None:
            raise InvalidInputError("Torsion point has no lattice to embed into", point=self)
        return (self.a * lat.omega1 + self.b * lat.omega2) / self.n

    def to_text(self) -> str:
        return "{0}/{2},{1}/{2}".format(self.a, self.b, self.n)


def _lcm(x: int, y: int) -> int:
    return x * y // math.gcd(x, y)


def _check_lattices(t1: TorsionPoint, t2: TorsionPoint):
    if t1.lattice is not None and t2.lattice is not None and t1.lattice != t2.lattice:
        raise InvalidInputError("Torsion points live on different lattices", t1=t1, t2=t2)


def torsion_order(t: TorsionPoint) -> int:
    """
    The smallest k >= 1 with k*t = 0, i.e. n / gcd(a, b, n)
    """
    return t.n // math.gcd(math.gcd(t.a, t.b), t.n)


def pairing(t1: TorsionPoint, t2: TorsionPoint, level: Optional[int] = None) -> int:
    """
    The intersection pairing a1*b2 - a2*b1 in Z/n

    Both points are first written at a common level: the requested level, or lcm of their levels.

    Parameters
    ----------
    t1: TorsionPoint
    t2: TorsionPoint
    level: int
        Optional common level (a multiple of both levels)

    Returns
    -------
    int
        The pairing value in range(level)

    Raises
    ------
    InvalidInputError
        If the points are on different lattices or the level is not a common multiple
    """
    _check_lattices(t1, t2)
    level = level or _lcm(t1.n, t2.n)
    x, y = t1.rescale(level), t2.rescale(level)
    return (x.a * y.b - y.a * x.b) % level


def torsion_count(n: int) -> int:
    """
    Number of points of exact order n in J(E)_n: n^2 * prod over primes p | n of (1 - 1/p^2)
    """
    if n < 1:
        raise InvalidInputError("Level must be positive", n=n)
    count = n * n
    for p in primefactors(n):
        count = count // (p * p) * (p * p - 1)
    return count


def enumerate_torsion(n: int, exact_order: bool = False, lattice: Optional[Lattice] = None) -> List[TorsionPoint]:
    """
    All n^2 elements of J(E)_n in lexicographic order of (a, b), or only those of order exactly n

    Raises
    ------
    InvalidInputError
        If n < 1
    """
    if n < 1:
        raise InvalidInputError("Level must be positive", n=n)
    points = [TorsionPoint(a, b, n, lattice) for a in range(n) for b in range(n)]
    if exact_order:
        points = [t for t in points if torsion_order(t) == n]
    return points


def subgroup_from_generators(gens: List[TorsionPoint]) -> List[TorsionPoint]:
    """
    The subgroup of J(E)_tors generated by the argument points, written at the lcm of their levels and sorted

    Parameters
    ----------
    gens: list of TorsionPoint
        Nonempty list of generators

    Returns
    -------
    list of TorsionPoint
        All elements, identity first
    """
    if not gens:
        raise InvalidInputError("At least one generator is required")
    level = reduce(_lcm, [g.n for g in gens])
    lattice = next((g.lattice for g in gens if g.lattice is not None), None)
    steps = [(g.rescale(level).a, g.rescale(level).b) for g in gens]
    seen = {(0, 0)}
    frontier = [(0, 0)]
    while frontier:
        nxt = []
        for a, b in frontier:
            for da, db in steps:
                e = ((a + da) % level, (b + db) % level)
                if e not in seen:
                    seen.add(e)
                    nxt.append(e)
        frontier = nxt
    return [TorsionPoint(a, b, level, lattice) for a, b in sorted(seen)]


def contains_full_two_torsion(points: List[TorsionPoint]) -> bool:
    """
    True iff the set contains J(E)_2
    """
    members = set(points)
    return all(t in members for t in two_torsion())


def two_torsion(lattice: Optional[Lattice] = None) -> List[TorsionPoint]:
    """The three nonzero 2-torsion points"""
    return [TorsionPoint(1, 0, 2, lattice), TorsionPoint(0, 1, 2, lattice), TorsionPoint(1, 1, 2, lattice)]


def halves(t: TorsionPoint) -> List[TorsionPoint]:
    """
    The four points eta of J(E)_{2n} with 2*eta = t
    """
    n = t.n
    return [TorsionPoint(t.a + n * i, t.b + n * j, 2 * n, t.lattice) for i in (0, 1) for j in (0, 1)]


_FLOAT = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?"
_LATTICE_RE = re.compile(r"^\s*tau\s*=\s*({0})\s*,\s*({0})\s*$".format(_FLOAT))
_TORSION_RE = re.compile(r"^\s*([-+]?\d+)\s*/\s*(\d+)\s*,\s*([-+]?\d+)\s*/\s*(\d+)\s*$")


def parse_lattice(text: str) -> Lattice:
    """
    Parses "tau=<re>,<im>" (also "square" and "hexagonal") into a normalized lattice
    """
    if text.strip() == "square":
        return Lattice.square()
    if text.strip() == "hexagonal":
        return Lattice.hexagonal()
    match = _LATTICE_RE.match(text)
    if match is None:
        raise InvalidInputError("Lattice must look like tau=<re>,<im>", text=text)
    return Lattice(1.0, complex(float(match.group(1)), float(match.group(2))), text.strip())


def parse_torsion(text: str, lattice: Optional[Lattice] = None) -> TorsionPoint:
    """
    Parses "a/n,b/m" exactly, writing the point at level lcm(n, m)
    """
    match = _TORSION_RE.match(text)
    if match is None:
        raise InvalidInputError("Torsion point must look like a/n,b/n", text=text)
    a, n, b, m = (int(g) for g in match.groups())
    if n == 0 or m == 0:
        raise InvalidInputError("Torsion denominators must be positive", text=text)
    return TorsionPoint(a, 0, n, lattice) + TorsionPoint(0, b, m, lattice)


def centered(z, lat: Lattice):
    """
    Splits z = w + m*omega1 + k*omega2 (scalar or array) with w in the parallelogram centered at the origin,
    |s|, |t| <= 1/2 in lattice coordinates

    Returns
    -------
    tuple
        (w, m, k) as numpy arrays
    """
    z = np.asarray(z, dtype=complex)
    t = z.imag / lat.omega2.imag
    s = z.real - t * lat.omega2.real
    k = np.floor(t + 0.5)
    m = np.floor(s + 0.5)
    return z - m * lat.omega1 - k * lat.omega2, m, k


def torus_gap(z, center, lat: Lattice):
    """
    Vectorized torus distance from each point of z to a single point
    """
    w, _, _ = centered(np.asarray(z, dtype=complex) - complex(center), lat)
    neighbors = np.array([i * lat.omega1 + j * lat.omega2 for i in (-1, 0, 1) for j in (-1, 0, 1)])
    return np.min(np.abs(w[..., None] + neighbors), axis=-1)

"""
Jacobi theta series and the Weierstrass functions built from them.

With omega1 = 1 and nome q = exp(i*pi*tau) the package uses

    zeta(z) = eta1 * z + pi * theta1'(pi z) / theta1(pi z)

    eta1 = (pi^2 / 3) * sum (-1)^k q^((k+1/2)^2) (2k+1)^3 / sum (-1)^k q^((k+1/2)^2) (2k+1)

    eta2 = eta1 * tau - 2 pi i

so the Legendre relation reads eta1 * omega2 - eta2 * omega1 = +2 pi i.
"""
import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
import numpy as np
from torsionnodes.config import get_global_config
from torsionnodes.errors import InvalidInputError, PoleProximityError
from torsionnodes.policy import DEFAULT_POLICY, NumericPolicy
from torsionnodes.torus import Lattice, centered
from torsionnodes.utils import get_logger

global_config = get_global_config()
logger = get_logger(__name__,
                    global_config.get_log_file(),
                    global_config.get_file_verbosity(),
                    global_config.get_screen_verbosity())

_MAX_TERMS = 400
_NOME_LIMIT = 0.999


@dataclass(frozen=True)
class QuasiPeriods:
    """
    Increments of zeta under the two periods: zeta(z + omega_i) = zeta(z) + eta_i
    """
    eta1: complex
    eta2: complex

    def increment(self, m, k):
        """The increment eta(m*omega1 + k*omega2) = m*eta1 + k*eta2"""
        return m * self.eta1 + k * self.eta2


def _series(v, log_q: complex, order: int, rtol: float):
    """
    Sums theta1 and its first `order` derivatives at v (scalar or array) for the nome exp(log_q).

    theta1(v) = 2 sum_{k>=0} (-1)^k q^((k+1/2)^2) sin((2k+1) v)

    Terms are added until the certified geometric tail of every requested sum is below rtol times the running
    magnitude |theta1| + |theta1'|.
    """
    v = np.asarray(v, dtype=complex)
    sums = [np.zeros_like(v) for _ in range(order + 1)]
    abs_q = math.exp(log_q.real)
    im_v = float(np.max(np.abs(v.imag))) if v.size else 0.0
    for k in range(_MAX_TERMS):
        odd = 2 * k + 1
        coeff = 2.0 * (-1) ** k * cmath.exp((k + 0.5) ** 2 * log_q)
        u = odd * v
        s, c = np.sin(u), np.cos(u)
        sums[0] += coeff * s
        if order >= 1:
            sums[1] += coeff * odd * c
        if order >= 2:
            sums[2] -= coeff * odd ** 2 * s
        if order >= 3:
            sums[3] -= coeff * odd ** 3 * c

        # Bound on the next term and on the ratio of all later terms
        nxt = 2 * k + 3
        bound = 2.0 * abs_q ** ((k + 1.5) ** 2) * nxt ** order * math.exp(nxt * im_v)
        ratio = abs_q ** (2 * k + 4) * math.exp(2.0 * im_v) * ((nxt + 2) / nxt) ** order
        if ratio < 1.0:
            tail = bound / (1.0 - ratio)
            scale = np.abs(sums[0]) + (np.abs(sums[1]) if order >= 1 else 0.0)
            if v.size == 0 or tail <= rtol * float(np.min(scale)) or tail < 1e-300:
                break
    else:
        logger.warning("theta series hit the term cap at %d terms", _MAX_TERMS)
    return sums


def _log_nome(q: complex) -> complex:
    q = complex(q)
    if abs(q) >= _NOME_LIMIT:
        raise InvalidInputError("The nome must satisfy |q| < {0}".format(_NOME_LIMIT), q=q)
    if q == 0:
        return complex(-math.inf, 0)
    return cmath.log(q)


def theta1(w, q, policy: NumericPolicy = DEFAULT_POLICY):
    """
    Jacobi theta1(w, q) = 2 sum_{k>=0} (-1)^k q^((k+1/2)^2) sin((2k+1) w), principal branch of q^(1/4)

    Parameters
    ----------
    w: complex or array
        Argument
    q: complex
        Nome, |q| < 0.999

    Returns
    -------
    complex or array
        The value, with the shape of w

    Raises
    ------
    InvalidInputError
        If |q| is not below the nome limit
    """
    log_q = _log_nome(q)
    if log_q.real == -math.inf:
        return np.zeros_like(np.asarray(w, dtype=complex))[()]
    return _series(w, log_q, 0, policy.series_rtol)[0][()]


def theta1_derivatives(w, q, policy: NumericPolicy = DEFAULT_POLICY):
    """
    theta1 and its first three derivatives in w, summed in a single pass

    Returns
    -------
    tuple
        (theta1, theta1', theta1'', theta1''')
    """
    log_q = _log_nome(q)
    return tuple(s[()] for s in _series(w, log_q, 3, policy.series_rtol))


def _lattice_log_nome(lat: Lattice) -> complex:
    return 1j * math.pi * lat.omega2


@lru_cache(maxsize=512)
def quasi_periods(lat: Lattice) -> QuasiPeriods:
    """
    The quasi-periods of zeta for the lattice, from the theta constants

    Returns
    -------
    QuasiPeriods
        eta1 and eta2 with eta1*omega2 - eta2*omega1 = 2*pi*i
    """
    log_q = _lattice_log_nome(lat)
    num = 0j
    den = 0j
    for k in range(_MAX_TERMS):
        # q^((k+1/2)^2) relative to q^(1/4)
        weight = (-1) ** k * cmath.exp((k * k + k) * log_q)
        odd = 2 * k + 1
        num += weight * odd ** 3
        den += weight * odd
        if abs(weight) * odd ** 3 < 1e-18 * abs(num):
            break
    eta1 = (math.pi ** 2 / 3.0) * num / den
    eta2 = eta1 * lat.omega2 - 2j * math.pi
    logger.debug("quasi periods for tau=%s: eta1=%s eta2=%s", lat.omega2, eta1, eta2)
    return QuasiPeriods(eta1, eta2)


def _check_poles(w, policy: NumericPolicy, what: str):
    if w.size and float(np.min(np.abs(w))) < policy.pole_proximity:
        idx = int(np.argmin(np.abs(w)))
        raise PoleProximityError("{0} evaluated within {1} of a lattice point".format(what, policy.pole_proximity),
                                 offset=complex(w.flat[idx]))


def _log_derivatives(w, lat: Lattice, policy: NumericPolicy, order: int):
    """
    L_j = theta1^(j) / theta1 at v = pi*w, for j = 1..order
    """
    sums = _series(np.pi * w, _lattice_log_nome(lat), order, policy.series_rtol)
    th = sums[0]
    return [sums[j] / th for j in range(1, order + 1)]


def zeta_series(z, lat: Lattice, policy: NumericPolicy = DEFAULT_POLICY):
    """
    zeta(z) straight from the theta log-derivative, without reducing z into the centered cell. Valid while the series
    converges, i.e. for |Im z| well below 2 Im(tau); used as an independent check of quasi-periodicity.
    """
    w = np.asarray(z, dtype=complex)
    _check_poles(w, policy, "zeta")
    qp = quasi_periods(lat)
    l1, = _log_derivatives(w, lat, policy, 1)
    return (qp.eta1 * w + np.pi * l1)[()]


def weierstrass_zeta(z, lat: Lattice, policy: NumericPolicy = DEFAULT_POLICY):
    """
    Weierstrass zeta function of the lattice

    Parameters
    ----------
    z: complex or array
        Evaluation point(s), none within policy.pole_proximity of a lattice point
    lat: Lattice
        The lattice
    policy: NumericPolicy
        Tolerances

    Returns
    -------
    complex or array

    Raises
    ------
    PoleProximityError
        If any point is too close to a lattice point
    """
    w, m, k = centered(z, lat)
    _check_poles(w, policy, "zeta")
    qp = quasi_periods(lat)
    l1, = _log_derivatives(w, lat, policy, 1)
    return (qp.eta1 * w + np.pi * l1 + qp.increment(m, k))[()]


def weierstrass_p(z, lat: Lattice, policy: NumericPolicy = DEFAULT_POLICY):
    """
    Weierstrass p-function, -d(zeta)/dz

    Raises
    ------
    PoleProximityError
        If any point is too close to a lattice point
    """
    w, _, _ = centered(z, lat)
    _check_poles(w, policy, "wp")
    qp = quasi_periods(lat)
    l1, l2 = _log_derivatives(w, lat, policy, 2)
    return (-qp.eta1 + np.pi ** 2 * (l1 * l1 - l2))[()]


def weierstrass_p_prime(z, lat: Lattice, policy: NumericPolicy = DEFAULT_POLICY):
    """
    Derivative of the Weierstrass p-function

    Raises
    ------
    PoleProximityError
        If any point is too close to a lattice point
    """
    w, _, _ = centered(z, lat)
    _check_poles(w, policy, "wp'")
    l1, l2, l3 = _log_derivatives(w, lat, policy, 3)
    return (-np.pi ** 3 * (l3 - 3.0 * l1 * l2 + 2.0 * l1 ** 3))[()]


def residue(f, z0: complex, radius: float = 1e-3, samples: int = 64) -> complex:
    """
    (1/2 pi i) times the contour integral of f around a small circle, by the trapezoidal rule

    The rule converges geometrically for functions analytic on an annulus around the circle, so 64 samples give the
    residue of a simple pole to near machine precision when no other singularity lies within a few radii.

    Parameters
    ----------
    f: callable
        Vectorized function of a complex array
    z0: complex
        Center of the circle
    radius: float
        Radius of the circle
    samples: int
        Number of equally spaced nodes

    Returns
    -------
    complex
    """
    theta = 2.0 * np.pi * np.arange(samples) / samples
    offsets = radius * np.exp(1j * theta)
    return complex(np.mean(np.asarray(f(z0 + offsets)) * offsets))

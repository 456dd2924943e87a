"""
Argument principle on a subdivided period parallelogram and Newton refinement.

The parallelogram origin + [0,1]*omega1 + [0,1]*omega2 is cut into grid x grid cells. The function is sampled along
every grid line; summing argument increments around a cell gives (#zeros - #poles) inside it.
"""
import math
from dataclasses import dataclass
from typing import Callable, Sequence
import numpy as np
from torsionnodes.config import get_global_config
from torsionnodes.errors import NumericFailure
from torsionnodes.policy import DEFAULT_POLICY, NumericPolicy
from torsionnodes.torus import Lattice
from torsionnodes.utils import get_logger

global_config = get_global_config()
logger = get_logger(__name__,
                    global_config.get_log_file(),
                    global_config.get_file_verbosity(),
                    global_config.get_screen_verbosity())


class ContourPlacementError(NumericFailure):
    """
    A grid line passes too close to a pole or a zero; the caller should move the grid
    """
    status = 2


@dataclass(frozen=True)
class WindingGrid:
    """
    Winding numbers of f around every cell of the grid

    Attributes
    ----------
    origin: complex
        Lower left corner of the parallelogram
    grid: int
        Cells per side
    winding: numpy.ndarray
        winding[i, j] is (#zeros - #poles) in cell i along omega1, j along omega2
    boundary_winding: int
        Winding number around the whole parallelogram
    samples: int
        Largest number of samples used on any cell edge
    """
    origin: complex
    grid: int
    winding: np.ndarray
    boundary_winding: int
    samples: int

    def cell_center(self, lat: Lattice, i: int, j: int) -> complex:
        return self.origin + ((i + 0.5) * lat.omega1 + (j + 0.5) * lat.omega2) / self.grid

    def cell_of(self, z: complex, lat: Lattice):
        """Indices of the cell containing z modulo the lattice"""
        s, t = lat.coordinates(z - self.origin)
        s, t = s - math.floor(s), t - math.floor(t)
        return min(int(s * self.grid), self.grid - 1), min(int(t * self.grid), self.grid - 1)


def argument_increments(values: np.ndarray) -> np.ndarray:
    """
    Principal argument of the ratio of consecutive samples along the last axis
    """
    return np.angle(values[..., 1:] / values[..., :-1])


def _edge_increments(f: Callable, starts: np.ndarray, ends: np.ndarray, samples: int):
    steps = np.linspace(0.0, 1.0, samples + 1)
    points = starts[:, None] + (ends - starts)[:, None] * steps[None, :]
    values = np.asarray(f(points), dtype=complex)
    if not np.all(np.isfinite(values)) or np.min(np.abs(values)) == 0.0:
        raise ContourPlacementError("Function vanishes or is not finite on a grid line")
    inc = argument_increments(values)
    return inc.sum(axis=1), np.max(np.abs(inc), axis=1)


def line_distance(points: Sequence[complex], origin: complex, lat: Lattice, grid: int) -> float:
    """
    Smallest Euclidean distance from any of the points to any grid line
    """
    best = math.inf
    for z in points:
        s, t = lat.coordinates(complex(z) - origin)
        ds = abs(s * grid - round(s * grid)) / grid
        dt = abs(t * grid - round(t * grid)) / grid
        best = min(best, ds * lat.omega2.imag / abs(lat.omega2), dt * lat.omega2.imag)
    return best


def winding_grid(f: Callable, origin: complex, lat: Lattice, policy: NumericPolicy = DEFAULT_POLICY,
                 avoid: Sequence[complex] = ()) -> WindingGrid:
    """
    Counts (#zeros - #poles) of a vectorized function in every cell of a grid over one period parallelogram

    Each edge starts with policy.edge_samples samples; edges on which some argument step exceeds policy.max_arg_step
    are resampled with twice as many points until policy.max_edge_samples is reached.

    Parameters
    ----------
    f: callable
        Vectorized meromorphic function
    origin: complex
        Lower left corner of the parallelogram
    lat: Lattice
        The lattice
    policy: NumericPolicy
        Grid size, sampling and margin settings
    avoid: sequence of complex
        Known poles; none may lie within policy.contour_margin of a grid line

    Returns
    -------
    WindingGrid

    Raises
    ------
    ContourPlacementError
        If a pole or zero sits on or too close to a grid line
    """
    g = policy.grid
    if avoid and line_distance(avoid, origin, lat, g) < policy.contour_margin:
        raise ContourPlacementError("A pole lies within {0} of the grid".format(policy.contour_margin))

    nodes = origin + (np.arange(g + 1)[:, None] * lat.omega1 + np.arange(g + 1)[None, :] * lat.omega2) / g
    # horizontal[i, j]: node(i, j) -> node(i+1, j); vertical[i, j]: node(i, j) -> node(i, j+1)
    h_start, h_end = nodes[:-1, :].ravel(), nodes[1:, :].ravel()
    v_start, v_end = nodes[:, :-1].ravel(), nodes[:, 1:].ravel()
    starts = np.concatenate([h_start, v_start])
    ends = np.concatenate([h_end, v_end])

    samples = policy.edge_samples
    total, worst = _edge_increments(f, starts, ends, samples)
    pending = np.nonzero(worst > policy.max_arg_step)[0]
    used = samples
    while pending.size:
        samples *= 2
        if samples > policy.max_edge_samples:
            raise ContourPlacementError("Argument steps stay above {0} rad at {1} samples per edge"
                                        .format(policy.max_arg_step, policy.max_edge_samples))
        logger.debug("resampling %d grid edges with %d samples", pending.size, samples)
        sub_total, sub_worst = _edge_increments(f, starts[pending], ends[pending], samples)
        total[pending] = sub_total
        worst[pending] = sub_worst
        used = samples
        pending = pending[sub_worst > policy.max_arg_step]

    horizontal = total[:g * (g + 1)].reshape(g, g + 1)
    vertical = total[g * (g + 1):].reshape(g + 1, g)
    cells = horizontal[:, :-1] + vertical[1:, :] - horizontal[:, 1:] - vertical[:-1, :]
    winding = np.rint(cells / (2.0 * np.pi)).astype(int)
    if np.max(np.abs(cells / (2.0 * np.pi) - winding)) > 1e-3:
        raise ContourPlacementError("Cell winding numbers are not integral")
    boundary = horizontal[:, 0].sum() + vertical[-1, :].sum() - horizontal[:, -1].sum() - vertical[0, :].sum()
    return WindingGrid(complex(origin), g, winding, int(round(boundary / (2.0 * np.pi))), used)


def newton(f: Callable, fprime: Callable, z0: complex, policy: NumericPolicy = DEFAULT_POLICY,
           multiplicity: int = 1):
    """
    Newton iteration z <- z - multiplicity * f(z) / f'(z)

    Returns
    -------
    tuple
        (z, |f(z)|, iterations)

    Raises
    ------
    NumericFailure
        If the residual does not drop below policy.newton_residual within policy.newton_max_iter steps
    """
    z = complex(z0)
    value = complex(f(z))
    steps = 0
    for steps in range(policy.newton_max_iter):
        if abs(value) <= policy.newton_residual:
            return z, abs(value), steps
        slope = complex(fprime(z))
        if slope == 0 or not np.isfinite(slope):
            break
        step = multiplicity * value / slope
        z -= step
        value = complex(f(z))
        steps += 1
        if abs(step) < 1e-15 * max(1.0, abs(z)):
            # Stalled
            break
    if abs(value) <= policy.newton_residual:
        return z, abs(value), steps
    raise NumericFailure("Newton refinement did not converge", start=z0, last=z, residual=abs(value))

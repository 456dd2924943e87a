from dataclasses import dataclass, asdict, fields, replace
from torsionnodes.config import Config, get_global_config
from torsionnodes.errors import InvalidInputError


@dataclass(frozen=True)
class NumericPolicy:
    """
    Every tolerance used by the numerical modules. Defaults are the documented values; a configuration file section
    TOLERANCES or per-call overrides replace individual fields.

    Attributes
    ----------
    pole_proximity: float
        Minimum distance to a pole (or lattice point) at which evaluation is allowed
    translate_pole_proximity: float
        Minimum distance from any translate z + k*tau to a pole in translate sums
    series_rtol: float
        Theta series terms are dropped once their certified tail is below this fraction of the running sum
    newton_residual: float
        Newton refinement stops once |b(q)| is below this value
    newton_max_iter: int
        Newton iteration cap per zero
    cluster_tol: float
        Two zeros of one function closer than this are a double zero
    grid: int
        Cells per side of the coarse winding-number grid
    edge_samples: int
        Initial number of samples per grid cell edge for argument increments
    max_edge_samples: int
        Cap on the adaptive edge sampling
    max_arg_step: float
        Largest accepted argument increment (radians) between neighboring contour samples
    contour_margin: float
        Poles closer than this to a contour (in cell units scaled by the cell size) trigger a re-jitter
    double_zero_threshold: float
        |b(p - eta)| below this is reported as a double zero
    arrangement_tol: float
        Pooled zeros closer than this (torus distance) form one cluster
    distinctness_factor: float
        Distinct clusters must be separated by at least distinctness_factor * arrangement_tol
    transversality_margin: float
        Minimum |b'(q)| for a zero to count as simple
    enumeration_cap: int
        Largest level n for exhaustive SL2(Z/n) enumeration
    """
    pole_proximity: float = 1e-9
    translate_pole_proximity: float = 1e-7
    series_rtol: float = 1e-16
    newton_residual: float = 1e-11
    newton_max_iter: int = 60
    cluster_tol: float = 1e-7
    grid: int = 16
    edge_samples: int = 32
    max_edge_samples: int = 1024
    max_arg_step: float = 0.75
    contour_margin: float = 1e-6
    double_zero_threshold: float = 1e-6
    arrangement_tol: float = 1e-6
    distinctness_factor: float = 100.0
    transversality_margin: float = 1e-6
    enumeration_cap: int = 12

    def with_overrides(self, **overrides):
        """
        Returns a copy of the policy with some fields replaced. Unknown names are rejected.
        """
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise InvalidInputError("Unknown tolerance override(s): {0}".format(", ".join(sorted(unknown))))
        typed = {}
        for f in fields(self):
            if f.name in overrides and overrides[f.name] is not None:
                typed[f.name] = f.type(overrides[f.name]) if isinstance(f.type, type) else overrides[f.name]
        return replace(self, **typed)

    def as_dict(self):
        return asdict(self)

    @staticmethod
    def from_config(config: Config):
        """
        Builds a policy from the TOLERANCES section and ENUMERATION_CAP of a configuration
        """
        overrides = config.get_tolerances()
        overrides.setdefault("enumeration_cap", config.get_enumeration_cap())
        return NumericPolicy().with_overrides(**overrides)


DEFAULT_POLICY = NumericPolicy.from_config(get_global_config())

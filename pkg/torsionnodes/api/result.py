"""
Command results. The status doubles as the process exit code:

    0  success
    1  invalid arguments or input
    2  numeric failure
    3  an arrangement that could not be classified
    4  enumeration cap exceeded
    5  a verification criterion failed
"""
from dataclasses import dataclass, field
from torsionnodes.errors import TorsionNodesError

EXIT_OK = 0
EXIT_BAD_ARGS = 1
EXIT_NUMERIC = 2
EXIT_UNCLASSIFIED = 3
EXIT_CAP = 4
EXIT_VERIFY_FAILED = 5


@dataclass
class Result:
    """
    A status and the report dictionary written for it

    Parameters
    ----------
    status: int
        One of the EXIT_* codes
    response: dict
        The report, composed of primitives, complex numbers, numpy scalars or objects with to_transport_format
    """
    status: int
    response: dict = field(default_factory=dict)

    def is_error(self) -> bool:
        return self.status != EXIT_OK

    def is_success(self) -> bool:
        return self.status == EXIT_OK

    @property
    def points(self) -> list:
        """The [re, im, kind] rows used as plot data"""
        return (self.response or {}).get("points", [])

    def to_transport_format(self) -> dict:
        return {"status": self.status, "response": self.response}

    @classmethod
    def from_transport_format(cls, obj: dict) -> "Result":
        """
        Rebuilds a Result from a report read back from a file

        Raises
        ------
        KeyError
            If obj has no "status"
        """
        return cls(int(obj["status"]), obj.get("response") or {})

    @classmethod
    def from_error(cls, error: TorsionNodesError, **extra) -> "Result":
        """
        A failed Result carrying the error's status, with the error described under the "error" key
        """
        response = dict(extra)
        response["error"] = error.to_transport_format()
        return cls(error.status, response)

class TorsionNodesError(Exception):
    """
    Base class for all errors raised by the package. Every error carries an integer status that the command line
    front end uses as its exit code (by convention 0 is success and all values >0 are errors).
    """
    status = 1

    def __init__(self, message: str, **context):
        super().__init__(message)
        self.context = context

    def to_transport_format(self):
        """
        Wraps the error as a dictionary so that it can be emitted inside a report

        Returns
        -------
        dict
            The status, the message and any context attached when the error was raised
        """
        return {"status": self.status, "error": type(self).__name__, "message": str(self),
                "context": {key: repr(value) for key, value in self.context.items()}}


class InvalidInputError(TorsionNodesError):
    """
    Bad arguments: degenerate torsion, non-finite coordinates, mismatched levels or lattices, or a violated
    precondition of an operation.
    """
    status = 1


class NumericFailure(TorsionNodesError):
    """
    A numerical procedure failed to reach its tolerance (argument principle count, Newton refinement). This signals a
    failure of the numerics, never a mathematical state of the object being studied.
    """
    status = 2


class PoleProximityError(NumericFailure):
    """
    Evaluation was requested within the pole proximity threshold of a pole. Callers that deliberately evaluate near poles
    catch this error specifically.
    """
    status = 2


class EnumerationCapExceeded(TorsionNodesError):
    """
    An exhaustive group enumeration was requested above the configured level cap.
    """
    status = 4

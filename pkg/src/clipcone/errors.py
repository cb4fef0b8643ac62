"""Exception types shared across modules."""


class ClipConeError(Exception):
    """Base class for all package errors."""


class CapExceeded(ClipConeError):
    pass


class NotLatticePreserving(ClipConeError):
    pass


class NotIsometry(ClipConeError):
    pass


class DegenerateInput(ClipConeError, ValueError):
    pass


class NotSimplicial(ClipConeError, ValueError):
    pass


class Unsupported(ClipConeError, NotImplementedError):
    pass


class DimensionMismatch(ClipConeError, ValueError):
    pass


class SignatureAnomaly(ClipConeError):
    """Invariant subspace of a hyperbolic orbit has the wrong signature."""


class NotAutomorphism(ClipConeError):
    pass


class NotInterior(ClipConeError, ValueError):
    pass


class PreconditionFailure(ClipConeError):
    def __init__(self, hypothesis: str, detail: str = ""):
        self.hypothesis = hypothesis
        self.detail = detail
        super().__init__(f"{hypothesis}: {detail}" if detail else hypothesis)


class PsdOrbitUnsupported(ClipConeError):
    pass


class BlockStructureViolation(ClipConeError):
    pass


class DegenerateB(ClipConeError):
    """Clipping a 2-dimensional invariant piece left a lower-dimensional cone."""


class NotInPlusCone(ClipConeError, ValueError):
    pass


class IterationCap(ClipConeError):
    pass


class StabilizerNontrivial(UserWarning):
    """Base point of a Dirichlet domain is fixed by a non-identity element."""

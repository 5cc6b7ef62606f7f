"""Exception hierarchy shared by all modules."""


class GravWitnessError(Exception):
    """Base class for every error raised by this package."""


class NotHermitian(GravWitnessError, ValueError):
    pass


class DimensionMismatch(GravWitnessError, ValueError):
    pass


class ConvergenceError(GravWitnessError, RuntimeError):
    """Jacobi sweeps exhausted. Should never happen for the small matrices used here."""


class DegenerateGeometry(GravWitnessError, ValueError):
    """The separation does not exceed the superposition span (D <= L)."""


class InvalidGeometry(GravWitnessError, ValueError):
    pass


class RatioOutOfRange(GravWitnessError, ValueError):
    pass


class CoherenceOutOfRange(GravWitnessError, ValueError):
    pass


class InvalidState(GravWitnessError, ValueError):
    pass


class InvalidChannel(GravWitnessError, ValueError):
    pass


class NotEntangling(GravWitnessError, ValueError):
    """The coefficient matrix has a positive semidefinite partial transpose."""


class ZeroCoherence(GravWitnessError, ValueError):
    """Witness synthesis needs a nonzero initial-state element where the witness matrix is nonzero."""

"""
Exception hierarchy for Atom Lens Designer

Every error carries the process exit code the CLI maps it to.
"""


class AtomLensError(Exception):
    """Base error"""
    exit_code = 1


class ConfigError(AtomLensError, ValueError):
    """Invalid run configuration or command-line flags"""
    exit_code = 2


class NumericalError(AtomLensError):
    """A solver, bracket or root search failed"""
    exit_code = 3


class SingularSystemError(NumericalError):
    """The Taylor cancellation system has no unique nullspace direction"""

    def __init__(self, J, rank):
        self.J = J
        self.rank = rank
        super().__init__(
            f"Taylor system for J={J} (order {2 * J + 1}) is singular: "
            f"rank {rank}, expected {J}"
        )


class DeviationMarkError(NumericalError):
    """The focal profile never leaves the tolerance band before its peak"""

    def __init__(self, order, tolerance, limit):
        self.order = order
        self.tolerance = tolerance
        self.limit = limit
        super().__init__(
            f"Order {order}: deviation from the parabola stays below "
            f"{tolerance:g} up to the outermost turning point x={limit:.6g}"
        )


class BracketError(NumericalError):
    """z_min criterion could not be bracketed or is not monotone"""

    def __init__(self, order, message, trace=()):
        self.order = order
        self.trace = list(trace)
        lines = '\n'.join(f"  z_R={z:.6g}  max|dI|={v:.6g}" for z, v in self.trace)
        super().__init__(f"Order {order}: {message}" + (f"\nscan trace:\n{lines}" if lines else ''))


class PhysicsValidityError(AtomLensError):
    """A physical approximation the model relies on does not hold"""
    exit_code = 4


class RamanNathError(PhysicsValidityError):
    """Atoms are not fast enough for the thin phase-mask approximation"""

    def __init__(self, ratio, threshold):
        self.ratio = ratio
        self.threshold = threshold
        super().__init__(
            f"Raman-Nath approximation violated: K_0/max U = {ratio:.4g} "
            f"(required >= {threshold:g})"
        )


class UndefinedPointError(AtomLensError, ValueError):
    """Relative deviation requested where the reference profile vanishes"""

"""Exception types raised by the constructors and checkers."""


class SpectraDiagError(ValueError):
    pass


class DimensionMismatch(SpectraDiagError):
    def __init__(self, n1, n2):
        super().__init__(f"dimension mismatch: {n1} != {n2}")
        self.sizes = (n1, n2)


class MajorizationViolated(SpectraDiagError):
    """The spectrum does not majorize the target diagonal.

    ``index`` is the first (0-based) prefix whose partial-sum slack is negative
    beyond tolerance, or ``n - 1`` when only the totals disagree.
    """

    def __init__(self, index, slack=None):
        msg = f"majorization violated at prefix {index}"
        if slack is not None:
            msg += f" (slack {slack!r})"
        super().__init__(msg)
        self.index = index
        self.slack = slack


class TraceMismatch(SpectraDiagError):
    def __init__(self, gap):
        super().__init__(f"trace mismatch (gap {gap!r})")
        self.gap = gap


class IntervalViolation(SpectraDiagError):
    pass


class NotCorrelationSpectrum(SpectraDiagError):
    pass


class NotSymmetric(SpectraDiagError):
    pass


class NoConvergence(SpectraDiagError):
    def __init__(self, off_norm, sweeps):
        super().__init__(f"no convergence after {sweeps} sweeps (off-norm {off_norm!r})")
        self.off_norm = off_norm
        self.sweeps = sweeps

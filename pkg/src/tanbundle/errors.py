"""Exception types raised by tanbundle."""


class TanBundleError(Exception):
    pass


class DomainError(TanBundleError, ValueError):
    """A point (or a finite-difference stencil around it) leaves the chart."""


class ModelError(TanBundleError):
    """A user-supplied metric is not symmetric positive definite."""


class WeightValidityError(TanBundleError, ValueError):
    """A weight function returned a non-positive value."""


class DegenerateInputError(TanBundleError, ValueError):
    """Input is degenerate: a collapsed plane, or a zero fiber vector where a frame is needed."""


class UsageError(TanBundleError, ValueError):
    pass


class UnsupportedOperationError(TanBundleError, NotImplementedError):
    pass

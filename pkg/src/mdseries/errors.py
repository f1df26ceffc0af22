"""Exception types shared across the package."""


class MDSeriesError(Exception):
    """Base class for all package-specific errors."""


class WorkCapExceeded(MDSeriesError):
    """An enumeration or scan would exceed the configured work cap."""

    def __init__(self, needed, cap, what="enumeration"):
        self.needed = needed
        self.cap = cap
        super().__init__(f"{what} needs ~{needed} units of work, cap is {cap} "
                         f"(set MDS_WORK_CAP to override)")


class TwistOverflowError(MDSeriesError):
    """A row operation pushed a twist value past the integer cap."""


class ConvergenceError(MDSeriesError):
    """Some Re(s_j) <= 1 and no explicit override was given."""


class ConstraintSyntaxError(MDSeriesError):
    """Parse failure in the constraint expression language."""

    def __init__(self, message, line, col):
        self.line = line
        self.col = col
        super().__init__(f"line {line}, col {col}: {message}")


class MissingPrimePowerError(MDSeriesError):
    """A coefficient family has no value for the requested prime power."""


class DescriptorError(MDSeriesError):
    """A system descriptor failed validation; carries the offending field path."""

    def __init__(self, path, message):
        self.path = path
        super().__init__(f"{path}: {message}")

"""Exception taxonomy shared across the package."""


class FourlabError(Exception):
    """Base class for all errors raised by fourlab."""


class DimensionError(FourlabError, ValueError):
    """Array length or operator size does not match the basis dimension."""


class ContractError(FourlabError, ValueError):
    """A declared structural property (unitarity, hermiticity, ...) fails validation."""


class PlanError(FourlabError, ValueError):
    """A regrouping plan is not a partition of the index range."""


class RangeError(FourlabError, ValueError):
    """A requested spatial window exceeds the reliable region of the truncated basis."""


class TruncationError(FourlabError, RuntimeError):
    """Requested data lies outside what the truncated basis can represent."""


class QuadratureError(FourlabError, RuntimeError):
    """Quadrature construction produced an invalid grid."""


class ConfigError(FourlabError, ValueError):
    """A run configuration file or override is malformed."""

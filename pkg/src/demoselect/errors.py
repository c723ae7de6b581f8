"""Exception hierarchy shared by all modules.

Every error carries an ``exit_code`` so the CLI can map failures onto its
documented process exit statuses: 1 usage/config, 2 data/parse, 3
oracle/protocol.
"""


class DemoselectError(Exception):
    exit_code = 3


class ConfigError(DemoselectError):
    """Invalid configuration or arguments."""

    exit_code = 1


class BadSplit(ConfigError):
    pass


class BadK(ConfigError):
    pass


class PoolTooLarge(ConfigError):
    pass


class EmptyPool(ConfigError):
    pass


class EmptyQuerySet(ConfigError):
    pass


class EmptyInput(ConfigError):
    pass


class OverlapError(ConfigError):
    pass


class IndexOutOfRange(ConfigError):
    pass


class DataError(DemoselectError):
    """Unreadable or inconsistent input data."""

    exit_code = 2


class ParseError(DataError):
    pass


class MissingFile(DataError):
    pass


class ShapeMismatch(DataError):
    pass


class DimensionMismatch(DataError):
    pass


class EmptyBatch(DataError):
    pass


class NonFinite(DataError):
    pass


class ZeroVector(DataError):
    pass


class MissingEntry(DataError):
    pass


class ChosenSetNotEnumerated(DataError):
    pass


class OracleError(DemoselectError):
    """Evaluator-side failure."""

    exit_code = 3


class EmptyDemoSet(OracleError):
    pass


class CardinalityUnsupported(OracleError):
    pass


class ProtocolError(OracleError):
    pass


class EvaluatorCrashed(OracleError):
    pass


class Timeout(OracleError):
    pass

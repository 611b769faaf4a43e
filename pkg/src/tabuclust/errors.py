"""Exception hierarchy shared by all modules."""


class TabuClustError(Exception):
    """Base class for every error raised by this package."""


class ModelError(TabuClustError, ValueError):
    """Malformed points, datasets or solutions."""


class ParameterError(TabuClustError, ValueError):
    """Search or experiment parameters outside their valid range."""


class MoveError(TabuClustError, ValueError):
    """An illegal centroid substitution was requested."""


class EngineIntegrityError(TabuClustError, RuntimeError):
    """Map outputs do not cover the dataset exactly once."""


class MetricError(TabuClustError, ValueError):
    """Invalid inputs to an accuracy, speedup or test statistic."""


class DegenerateSampleError(MetricError):
    """Every paired difference is zero, so the signed-rank p-value is undefined."""


class IngestionError(TabuClustError, ValueError):
    """A dataset file could not be parsed."""

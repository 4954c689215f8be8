"""Exception types shared across the pipeline stages."""


class SensorGridError(Exception):
    """Base class for every error raised by this package."""


class DataError(SensorGridError):
    """Input data or configuration violates a documented contract."""


class InconsistentAnnotation(DataError):
    """Label bit and event type contradict each other."""


class UnknownClass(DataError):
    """Event type string is not one of the eight known classes."""


class MissingColumn(DataError):
    """A required CSV column is absent."""


class UnparsableTimestamp(DataError):
    """Neither the ts column nor date+time could be parsed."""


class InvalidSchedule(DataError):
    """Scenario blocks overlap, leave gaps, or fall outside the duration."""


class ClassConflict(DataError):
    """Readings joined into one row carry different classes (strict mode only)."""


class PartitionInfeasible(SensorGridError):
    """No shuffle within the attempt budget put every class in both partitions."""


class MissingStats(DataError):
    """Median/mode imputation requested without fitted training statistics."""


class UnknownStrategy(DataError):
    """Imputation token does not name a known per-channel strategy mix."""


class EmptyTraining(DataError):
    """Scaler or imputation statistics requested on an empty training partition."""


class FormatMismatch(DataError):
    """Dataset container files disagree with each other or the manifest."""


class UndefinedRate(DataError):
    """A rate was requested whose denominator is zero."""


class DegenerateInput(DataError):
    """Accuracy/precision/recall triple is inconsistent or has a vanishing denominator."""


class SingleClass(DataError):
    """ROC requested on predictions that contain only positives or only negatives."""

class TrainerError(Exception):
    """Base class for trainer failures."""


class ContainerError(TrainerError):
    """Dataset container files are missing, malformed or inconsistent."""


class ClassMissing(TrainerError):
    """A class present in the container has no samples in the train partition."""


class ShapeMismatch(TrainerError):
    """Checkpoint and container disagree on tensor shape or class count."""

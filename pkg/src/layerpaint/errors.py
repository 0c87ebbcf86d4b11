"""Exception types shared across the pipeline."""


class LayerpaintError(Exception):
    """Base class for all pipeline errors."""


class InputError(LayerpaintError):
    """Unreadable, malformed, or mutually inconsistent input artifacts."""


class OutputError(LayerpaintError):
    """Failure to write an output artifact."""

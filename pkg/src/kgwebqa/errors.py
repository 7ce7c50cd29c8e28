"""Exception hierarchy shared across the pipeline.

Each error class carries the process exit code the CLI maps it to, so a
failure anywhere in the stack surfaces as a stable, scriptable code.
"""

from __future__ import annotations


class PipelineError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class ConfigError(PipelineError):
    """Invalid or inconsistent configuration (bad flag, unknown style, ...)."""

    exit_code = 2


class DataError(PipelineError):
    """Malformed input data: KG files, datasets, annotation rows, empty references."""

    exit_code = 3


class RetrievalError(PipelineError):
    """Search or fetch failure at the network level.

    ``status`` holds the HTTP status code when one was received.
    """

    exit_code = 4

    def __init__(self, message: str, status: int | None = None):
        super().__init__(message)
        self.status = status


class BackendError(PipelineError):
    """A model capability backend failed after exhausting its retries."""

    exit_code = 5

    def __init__(self, message: str, capability: str = "", retries: int = 0,
                 status: int | None = None):
        super().__init__(message)
        self.capability = capability
        self.retries = retries
        self.status = status


class GenerationError(BackendError):
    """Text generation failed; carries the prompt length for diagnostics."""

    def __init__(self, message: str, prompt_length: int = 0, retries: int = 0,
                 status: int | None = None):
        super().__init__(message, capability="generate", retries=retries, status=status)
        self.prompt_length = prompt_length

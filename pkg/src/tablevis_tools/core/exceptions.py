#  Copyright (c) xultaeculcis. All rights reserved.
#  Licensed under MIT License.
"""Exception hierarchy shared by all tablevis-tools modules."""

from __future__ import annotations


class TableVisError(Exception):
    """Base class for all errors raised by tablevis-tools."""


class MalformedTableError(TableVisError):
    """Raised when a pipe table is empty, lacks a separator row or has no header cells."""


class NotATableError(TableVisError):
    """Raised when text contains no pipe-structured lines at all."""


class BackendError(TableVisError):
    """Base class for model backend failures."""


class TransientBackendError(BackendError):
    """Retryable failure (timeout, connection reset, 5xx, 429).

    Args:
        message: The error message.
        retry_after: Server provided wait hint in seconds, if any.

    """

    def __init__(self, message: str, retry_after: float | None = None) -> None:
        super().__init__(message)
        self.retry_after = retry_after


class TransportError(BackendError):
    """Raised when a backend call keeps failing after all retries."""


class AuthError(BackendError):
    """Raised when the API key is missing or rejected."""


class ProtocolError(BackendError):
    """Raised when a response violates the expected wire schema."""


class ContentRefusedError(BackendError):
    """Raised when the backend declines to generate or edit an image."""


class TemplateError(TableVisError):
    """Raised when a prompt template misses a required placeholder or a value for one."""


class ResponseParseError(TableVisError):
    """Raised when a model response cannot be turned into the expected structure."""


class PipelineRunError(TableVisError):
    """Raised when a pipeline run aborts. The partial run record is persisted before raising."""


class JudgeProtocolError(TableVisError):
    """Raised when the auditor does not produce a parseable reply, even after a re-ask."""


class EvaluationError(TableVisError):
    """Raised when a mandatory scoring dimension fails for an instance."""


class DomainError(TableVisError, ValueError):
    """Raised when a formula is evaluated outside its mathematical domain."""


class StoreError(TableVisError):
    """Raised on run store I/O failures or invalid document keys."""


class ConfigError(TableVisError):
    """Raised when a run configuration is invalid."""


class DatasetError(TableVisError):
    """Raised when a dataset file cannot be loaded.

    Args:
        message: The error message.
        line: 1-based line number of the offending record, if known.

    """

    def __init__(self, message: str, line: int | None = None) -> None:
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line

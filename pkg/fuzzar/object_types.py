from __future__ import annotations

from typing import Iterable, List


class Error:
    """Information about one invalid record or syntax problem."""

    __slots__ = ("source", "location", "text")

    def __init__(self, source: str, location: str, text: str):
        self.source = source
        self.location = location
        self.text = text

    def __repr__(self) -> str:
        return (
            f"<{self.__class__.__name__} source='{self.source}' "
            f"location='{self.location}' text='{self.text}'>"
        )

    def __str__(self) -> str:
        return f"{self.source}:{self.location} {self.text}"

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Error):
            return NotImplemented
        return (self.source, self.location, self.text) == (
            other.source,
            other.location,
            other.text,
        )

    @classmethod
    def at_position(cls, source: str, line: int, column: int, text: str) -> Error:
        return cls(source, f"{line}:{column}", text)


class FuzzarError(Exception):
    """Base class of all errors raised by this package."""


class DomainError(FuzzarError, ValueError):
    """An operation was called with arguments outside of its domain."""


class DataError(FuzzarError):
    """Input data could not be used.

    Holds every problem found in the input, not just the first one.
    """

    def __init__(self, errors: Iterable[Error]):
        self.errors: List[Error] = list(errors)
        super().__init__("; ".join(str(e) for e in self.errors))


class ParseError(DataError):
    """Input is not valid JSON or CSV."""


class ValidationError(DataError):
    """Input is well formed, but breaks the schema or a data invariant."""

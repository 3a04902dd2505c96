from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence, Tuple

from fuzzar.constants import LABEL_DESCRIPTIONS, LABEL_NAMES
from fuzzar.object_types import DomainError


@dataclass(frozen=True)
class Label:
    """Linguistic performance label; a lower index means weaker success."""

    index: int
    name: str
    description: str = ""

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class LabelScale:
    """Ordered universe of labels, weakest first."""

    labels: Tuple[Label, ...]

    def __post_init__(self):
        if len(self.labels) < 2:
            raise DomainError(
                f"Label scale needs at least 2 labels, got {len(self.labels)}."
            )
        for position, label in enumerate(self.labels):
            if label.index != position:
                raise DomainError(
                    f"Label '{label.name}' has index {label.index}, "
                    f"expected {position}."
                )
        names = [label.name for label in self.labels]
        if len(set(names)) != len(names):
            raise DomainError("Label names have to be unique.")
        if not all(names):
            raise DomainError("Label names must not be empty.")

    @classmethod
    def from_names(cls, names: Sequence[str]) -> LabelScale:
        """Build a scale from label symbols.

        The default descriptions are attached to scales of five labels.
        """
        names = [name.strip() for name in names]
        descriptions: Sequence[str] = (
            LABEL_DESCRIPTIONS
            if len(names) == len(LABEL_DESCRIPTIONS)
            else [""] * len(names)
        )
        return cls(
            tuple(
                Label(index, name, description)
                for index, (name, description) in enumerate(zip(names, descriptions))
            )
        )

    @property
    def names(self) -> Tuple[str, ...]:
        return tuple(label.name for label in self.labels)

    def by_name(self, name: str) -> Label:
        for label in self.labels:
            if label.name == name:
                return label
        raise DomainError(
            f"Unknown label '{name}', expected one of "
            + ", ".join(f"'{n}'" for n in self.names)
            + "."
        )

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[Label]:
        return iter(self.labels)

    def __getitem__(self, index: int) -> Label:
        return self.labels[index]


def default_scale() -> LabelScale:
    """Return the scale a (negligible) < b < c < d < e (complete)."""
    return LabelScale.from_names(LABEL_NAMES)


def label_from_solved(solved: int, total: int, scale: LabelScale) -> Label:
    """Map the number of problems a solver handled positively to a label.

    With ``L - 1`` problems the label index equals ``solved``; other problem
    counts are spread proportionally, rounding down, so that 0 and ``total``
    always reach the extreme labels.
    """
    if total < 1:
        raise DomainError(f"Problem count has to be positive, got {total}.")
    if not 0 <= solved <= total:
        raise DomainError(f"Solved count {solved} is outside of 0..{total}.")
    top = len(scale) - 1
    if total == top:
        return scale[solved]
    return scale[solved * top // total]

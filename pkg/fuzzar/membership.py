from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Mapping, Optional, Tuple

from fuzzar.object_types import DomainError, Error, ValidationError
from fuzzar.scale import Label, LabelScale


@dataclass(frozen=True)
class StepCounts:
    """Number of solvers per label at one step of one cohort.

    ``counts`` is indexed by label index.
    """

    step_name: str
    scale: LabelScale
    counts: Tuple[int, ...]
    cohort_size: int

    def __post_init__(self):
        if len(self.counts) != len(self.scale):
            raise DomainError(
                f"Step '{self.step_name}' has {len(self.counts)} counts "
                f"for {len(self.scale)} labels."
            )
        if any(count < 0 for count in self.counts):
            raise DomainError(f"Step '{self.step_name}' has a negative count.")
        if self.cohort_size < 1:
            raise DomainError(
                f"Cohort size has to be positive, got {self.cohort_size}."
            )

    @classmethod
    def from_mapping(
        cls,
        step_name: str,
        scale: LabelScale,
        mapping: Mapping[str, int],
        cohort_size: Optional[int] = None,
    ) -> StepCounts:
        """Build counts from ``{label name: count}``; missing labels count 0.

        Without ``cohort_size`` the counts' sum is used.
        """
        counts = [0] * len(scale)
        for name, count in mapping.items():
            counts[scale.by_name(name).index] = count
        if cohort_size is None:
            cohort_size = sum(counts)
        return cls(step_name, scale, tuple(counts), cohort_size)

    def count(self, label: Label) -> int:
        return self.counts[label.index]

    def as_dict(self) -> Dict[str, int]:
        return {label.name: self.counts[label.index] for label in self.scale}


@dataclass(frozen=True)
class FuzzyStepSet:
    """Fuzzy subset of the label scale describing one step."""

    step_name: str
    scale: LabelScale
    memberships: Tuple[Fraction, ...]

    def membership(self, label: Label) -> Fraction:
        return self.memberships[label.index]

    def as_dict(self) -> Dict[str, Fraction]:
        return {label.name: self.memberships[label.index] for label in self.scale}

    def support(self) -> Tuple[Label, ...]:
        return tuple(label for label in self.scale if self.memberships[label.index])


def band_of(count: int, cohort_size: int, num_bands: int) -> int:
    """Return the threshold band of ``count`` solvers out of ``cohort_size``.

    Band ``j`` holds counts with ``j*n/L < count <= (j+1)*n/L``; band 0 also
    holds zero. The bounds are compared after cross-multiplication, so no
    rounding happens.
    """
    if num_bands < 2:
        raise DomainError(f"At least 2 bands are needed, got {num_bands}.")
    if cohort_size < 1:
        raise DomainError(f"Cohort size has to be positive, got {cohort_size}.")
    if not 0 <= count <= cohort_size:
        raise DomainError(f"Count {count} is outside of 0..{cohort_size}.")
    if count == 0:
        return 0
    # smallest j + 1 with num_bands * count <= (j + 1) * cohort_size
    return -(-num_bands * count // cohort_size) - 1


def build_fuzzy_step(counts: StepCounts) -> FuzzyStepSet:
    total = sum(counts.counts)
    if total != counts.cohort_size:
        raise ValidationError(
            [
                Error(
                    counts.step_name,
                    "counts",
                    f"Counts sum to {total}, expected cohort size "
                    f"{counts.cohort_size}.",
                )
            ]
        )
    num_bands = len(counts.scale)
    top = num_bands - 1
    memberships = tuple(
        Fraction(band_of(count, counts.cohort_size, num_bands), top)
        for count in counts.counts
    )
    return FuzzyStepSet(counts.step_name, counts.scale, memberships)

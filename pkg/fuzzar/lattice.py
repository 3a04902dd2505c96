from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Mapping, Sequence, Tuple

from fuzzar.membership import FuzzyStepSet
from fuzzar.object_types import DomainError
from fuzzar.scale import Label, LabelScale

# One label per step, in step order.
Profile = Tuple[Label, ...]


@dataclass(frozen=True)
class GroupAssessment:
    """Profile lattice of one cohort.

    ``memberships`` and ``possibilities`` contain every one of the
    ``lattice_size`` profiles, in step-major lexicographic order.
    """

    group_name: str
    scale: LabelScale
    steps: Tuple[FuzzyStepSet, ...]
    memberships: Dict[Profile, Fraction]
    max_membership: Fraction
    possibilities: Dict[Profile, Fraction]
    entropy: float
    lattice_size: int
    degenerate: bool
    compat: bool = False

    @property
    def step_names(self) -> Tuple[str, ...]:
        return tuple(step.step_name for step in self.steps)


def profile_name(profile: Profile) -> str:
    return "".join(label.name for label in profile)


def enumerate_profiles(scale: LabelScale, k: int) -> Iterator[Profile]:
    return itertools.product(scale.labels, repeat=k)


def is_well_ordered(profile: Profile) -> bool:
    """Success degrees never increase from one step to the next."""
    return all(
        earlier.index >= later.index for earlier, later in zip(profile, profile[1:])
    )


def profile_membership(profile: Profile, steps: Sequence[FuzzyStepSet]) -> Fraction:
    if len(profile) != len(steps):
        raise DomainError(
            f"Profile has {len(profile)} labels for {len(steps)} steps."
        )
    if not is_well_ordered(profile):
        return Fraction(0)
    result = Fraction(1)
    for label, step in zip(profile, steps):
        result *= step.membership(label)
    return result


def well_ordered_count(num_labels: int, k: int) -> int:
    """Number of well ordered profiles: multisets of size k from L labels."""
    if num_labels < 1 or k < 1:
        raise DomainError("Label and step counts have to be positive.")
    return math.comb(num_labels + k - 1, k)


def _check_steps(steps: Sequence[FuzzyStepSet]) -> LabelScale:
    if not steps:
        raise DomainError("At least one step is required.")
    scale = steps[0].scale
    for step in steps[1:]:
        if step.scale != scale:
            raise DomainError(
                f"Step '{step.step_name}' uses a different label scale "
                f"than step '{steps[0].step_name}'."
            )
    return scale


def _entropy(memberships: Iterable[Fraction], lattice_size: int) -> float:
    # 0 * ln 0 is taken as 0
    terms: List[float] = []
    for value in memberships:
        if value > 0:
            as_float = float(value)
            terms.append(as_float * math.log(as_float))
    if not terms or lattice_size < 2:
        return 0.0
    terms.sort(key=abs)
    result = -math.fsum(terms) / math.log(lattice_size)
    return result if result > 0 else 0.0


def _assess(
    name: str,
    steps: Sequence[FuzzyStepSet],
    memberships: Dict[Profile, Fraction],
    *,
    compat: bool,
) -> GroupAssessment:
    scale = steps[0].scale
    max_membership = max(memberships.values())
    degenerate = max_membership == 0
    if degenerate:
        possibilities = {profile: Fraction(0) for profile in memberships}
    else:
        possibilities = {
            profile: value / max_membership for profile, value in memberships.items()
        }
    lattice_size = len(memberships)
    return GroupAssessment(
        group_name=name,
        scale=scale,
        steps=tuple(steps),
        memberships=memberships,
        max_membership=max_membership,
        possibilities=possibilities,
        entropy=_entropy(memberships.values(), lattice_size),
        lattice_size=lattice_size,
        degenerate=degenerate,
        compat=compat,
    )


def assess_group(name: str, steps: Sequence[FuzzyStepSet]) -> GroupAssessment:
    """Compute memberships, possibilities and entropy of every profile."""
    scale = _check_steps(steps)
    memberships = {
        profile: profile_membership(profile, steps)
        for profile in enumerate_profiles(scale, len(steps))
    }
    return _assess(name, steps, memberships, compat=False)


def assess_memberships(
    name: str,
    steps: Sequence[FuzzyStepSet],
    memberships: Mapping[Profile, Fraction],
) -> GroupAssessment:
    """Build a lattice from externally supplied membership degrees.

    Used to replay published tables, rounding and errata included. Profiles
    missing from ``memberships`` get 0. The step sets are kept for display
    only; they do not influence the result.
    """
    scale = _check_steps(steps)
    lattice = {
        profile: Fraction(0) for profile in enumerate_profiles(scale, len(steps))
    }
    for profile, value in memberships.items():
        if profile not in lattice:
            raise DomainError(
                f"Profile '{profile_name(profile)}' does not belong to the lattice."
            )
        value = Fraction(value)
        if not 0 <= value <= 1:
            raise DomainError(
                f"Membership of '{profile_name(profile)}' is outside of [0, 1]."
            )
        lattice[profile] = value
    return _assess(name, steps, lattice, compat=True)


def shannon_entropy(assessment: GroupAssessment) -> float:
    """Normalized Shannon-Wiener index of the lattice's membership degrees."""
    return _entropy(assessment.memberships.values(), assessment.lattice_size)


def modal_profiles(assessment: GroupAssessment) -> List[Profile]:
    """Profiles holding the maximal membership degree."""
    if assessment.degenerate:
        return []
    return [
        profile
        for profile, possibility in assessment.possibilities.items()
        if possibility == 1
    ]


def rank_by_entropy(assessments: Sequence[GroupAssessment]) -> List[GroupAssessment]:
    """Order groups from the strongest (lowest H) to the weakest."""
    return sorted(assessments, key=lambda assessment: assessment.entropy)

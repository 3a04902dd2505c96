from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Sequence, Tuple

from fuzzar.lattice import GroupAssessment, Profile
from fuzzar.object_types import DomainError
from fuzzar.scale import LabelScale


@dataclass(frozen=True)
class CombinedAssessment:
    """Pseudo-frequencies and possibilities of several lattices.

    The same structure describes several groups in one process, or one group
    across several processes.
    """

    group_names: Tuple[str, ...]
    scale: LabelScale
    step_names: Tuple[str, ...]
    pseudo_frequencies: Dict[Profile, Fraction]
    max_pseudo_frequency: Fraction
    combined_possibilities: Dict[Profile, Fraction]
    lattice_size: int
    degenerate: bool


def combine(groups: Sequence[GroupAssessment]) -> CombinedAssessment:
    if len(groups) < 2:
        raise DomainError(f"At least 2 groups are required, got {len(groups)}.")
    first = groups[0]
    for group in groups[1:]:
        if group.scale != first.scale:
            raise DomainError(
                f"Group '{group.group_name}' uses a different label scale "
                f"than group '{first.group_name}'."
            )
        if len(group.steps) != len(first.steps):
            raise DomainError(
                f"Group '{group.group_name}' has {len(group.steps)} steps, "
                f"group '{first.group_name}' has {len(first.steps)}."
            )

    pseudo_frequencies: Dict[Profile, Fraction] = {
        profile: sum((group.memberships[profile] for group in groups), Fraction(0))
        for profile in first.memberships
    }
    max_pseudo_frequency = max(pseudo_frequencies.values())
    degenerate = max_pseudo_frequency == 0
    if degenerate:
        possibilities = {profile: Fraction(0) for profile in pseudo_frequencies}
    else:
        possibilities = {
            profile: value / max_pseudo_frequency
            for profile, value in pseudo_frequencies.items()
        }

    return CombinedAssessment(
        group_names=tuple(group.group_name for group in groups),
        scale=first.scale,
        step_names=first.step_names,
        pseudo_frequencies=pseudo_frequencies,
        max_pseudo_frequency=max_pseudo_frequency,
        combined_possibilities=possibilities,
        lattice_size=first.lattice_size,
        degenerate=degenerate,
    )

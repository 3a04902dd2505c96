from __future__ import annotations

import random
from enum import Enum
from typing import List, Optional

from fuzzar.constants import STEP_NAMES
from fuzzar.ingest import CohortDataset, SolverRecord, SourceKind
from fuzzar.object_types import DomainError
from fuzzar.scale import LabelScale, default_scale


class Skill(str, Enum):
    UNIFORM = "uniform"
    STRONG = "strong"
    WEAK = "weak"


def step_names(k: int) -> List[str]:
    if k <= len(STEP_NAMES):
        return list(STEP_NAMES[:k])
    return [f"step-{i}" for i in range(1, k + 1)]


def simulate_dataset(
    size: int,
    k: int,
    seed: int,
    skill: Skill = Skill.UNIFORM,
    *,
    scale: Optional[LabelScale] = None,
    problems: Optional[int] = None,
    group: Optional[str] = None,
) -> CohortDataset:
    """Generate a synthetic per-solver cohort.

    ``strong`` solvers keep the better of two uniform draws, ``weak`` ones the
    worse. The same arguments always give the same dataset.
    """
    scale = scale or default_scale()
    problems = len(scale) - 1 if problems is None else problems
    if size < 1 or k < 1 or problems < 1:
        raise DomainError("Cohort size, step count and problems have to be positive.")
    skill = Skill(skill)

    rng = random.Random(seed)
    width = len(str(size))
    records = []
    for step in step_names(k):
        for solver in range(1, size + 1):
            first = rng.randint(0, problems)
            second = rng.randint(0, problems)
            if skill is Skill.STRONG:
                solved = max(first, second)
            elif skill is Skill.WEAK:
                solved = min(first, second)
            else:
                solved = first
            records.append(
                SolverRecord(f"s{solver:0{width}d}", step, solved, problems)
            )

    return CohortDataset(
        group_name=group or f"simulated-{skill.value}-{seed}",
        scale_names=scale.names,
        step_names=tuple(step_names(k)),
        source_kind=SourceKind.PER_SOLVER,
        rows=tuple(records),
        total_problems=problems,
    )

"""Cellularity certificates with a checkable derivation trace."""

from __future__ import annotations

from dataclasses import dataclass, field

STABLE = "stable"

# leaves: cellular by a structural fact or an input assumption
LEAF_RULES = {"bruhat", "atacc", "stratum", "arrangement-base", "sphere", "contractible"}
# level = max(parent levels) + 1
PURITY_RULES = {"purity", "suspension"}
# level = max(parent levels)
PRESERVING_RULES = {"thom", "tower"}
STABLE_RULES = {"stable-purity", "stable-split"}


@dataclass(frozen=True)
class TraceStep:
    rule: str
    level: object  # int or STABLE
    parents: tuple = ()
    inputs: tuple = ()  # ((key, value), ...)

    def as_dict(self) -> dict:
        return {
            "rule": self.rule,
            "level": self.level,
            "parents": list(self.parents),
            "inputs": {k: v for k, v in self.inputs},
        }


def level_str(level) -> str:
    return STABLE if level == STABLE else f"suspended({level})"


@dataclass(frozen=True)
class CellCertificate:
    level: object
    trace: tuple = field(default=())
    construction: str = "constructive"  # or "minimal"

    def __post_init__(self):
        self.validate()

    def validate(self):
        if not self.trace:
            raise AssertionError("certificate trace is empty")
        levels = []
        for i, step in enumerate(self.trace):
            if any(p >= i or p < 0 for p in step.parents):
                raise AssertionError(f"step {i} refers to a later step")
            parent_levels = [levels[p] for p in step.parents]
            if step.rule in LEAF_RULES:
                ok = step.level in (0, STABLE) and not step.parents
            elif step.rule in PURITY_RULES:
                ok = (bool(parent_levels) and STABLE not in parent_levels
                      and step.level == max(parent_levels) + 1)
            elif step.rule in PRESERVING_RULES:
                ok = (bool(parent_levels) and STABLE not in parent_levels
                      and step.level == max(parent_levels))
            elif step.rule in STABLE_RULES:
                ok = step.level == STABLE
            else:
                raise AssertionError(f"unknown rule {step.rule!r}")
            if not ok:
                raise AssertionError(f"step {i} ({step.rule}) claims level {step.level} "
                                     f"from parents at {parent_levels}")
            levels.append(step.level)
        if levels[-1] != self.level:
            raise AssertionError(f"final step level {levels[-1]} != certificate level {self.level}")

    @property
    def is_stable(self) -> bool:
        return self.level == STABLE

    def as_dict(self) -> dict:
        return {
            "level": level_str(self.level),
            "construction": self.construction,
            "trace": [s.as_dict() for s in self.trace],
        }


class TraceBuilder:
    """Append-only trace; each ``add`` returns the new step's index."""

    def __init__(self):
        self.steps = []

    def add(self, rule, level, parents=(), **inputs) -> int:
        self.steps.append(TraceStep(rule, level, tuple(parents), tuple(inputs.items())))
        return len(self.steps) - 1

    def extend(self, steps) -> int:
        """Splice in another trace, re-indexing parents; returns the index of its last step."""
        offset = len(self.steps)
        for s in steps:
            self.steps.append(TraceStep(s.rule, s.level, tuple(p + offset for p in s.parents), s.inputs))
        return len(self.steps) - 1

    def certificate(self, construction="constructive") -> CellCertificate:
        return CellCertificate(self.steps[-1].level, tuple(self.steps), construction)

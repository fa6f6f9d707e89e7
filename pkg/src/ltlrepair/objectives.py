"""Specifications, boundary-condition checks and the four search objectives."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .ltl import And, Formula, Iff, Not, Or, as_formula, atoms, conjunction, render
from .semantics import (
    DEFAULT_BOUND,
    BoundedChecker,
    ResourceLimitExceeded,
)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Specification:
    """Domain properties plus goals over a declared alphabet.

    Only ``goals`` change during search; ``dom`` is carried along untouched.
    """

    alphabet: tuple[str, ...]
    dom: tuple[Formula, ...]
    goals: tuple[Formula, ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "dom", tuple(self.dom))
        object.__setattr__(self, "goals", tuple(self.goals))
        if not self.goals:
            raise ValueError("a specification needs at least one goal")
        declared = set(self.alphabet)
        for f in self.dom + self.goals:
            extra = atoms(f) - declared
            if extra:
                raise ValueError(f"formula uses undeclared atoms {sorted(extra)}")

    @classmethod
    def from_text(
        cls,
        alphabet: Iterable[str],
        dom: Iterable[str | Formula],
        goals: Iterable[str | Formula],
        name: str = "",
    ) -> "Specification":
        alphabet = tuple(alphabet)
        return cls(
            alphabet,
            tuple(as_formula(f, alphabet) for f in dom),
            tuple(as_formula(f, alphabet) for f in goals),
            name,
        )

    def with_goals(self, goals: Sequence[Formula]) -> "Specification":
        return Specification(self.alphabet, self.dom, tuple(goals), self.name)

    def goals_formula(self) -> Formula:
        return conjunction(self.goals)

    def formula(self) -> Formula:
        """``Dom && goals`` as one conjunction."""
        return conjunction(self.dom + self.goals)

    def tokens(self) -> list[str]:
        out: list[str] = []
        for g in self.goals:
            out.extend(render(g))
        return out


@dataclass(frozen=True)
class BoundaryConditionReport:
    inconsistency: bool
    minimality: tuple[bool, ...]
    non_triviality: bool

    @property
    def holds(self) -> bool:
        return self.inconsistency and all(self.minimality) and self.non_triviality

    def to_json(self) -> dict:
        return {
            "inconsistency": self.inconsistency,
            "minimality": list(self.minimality),
            "non_triviality": self.non_triviality,
            "holds": self.holds,
        }


@dataclass(frozen=True)
class FitnessVector:
    consistency: float
    resolved: float
    syntactic: float
    semantic: float

    def __iter__(self):
        return iter(self.values)

    @property
    def values(self) -> tuple[float, float, float, float]:
        return (self.consistency, self.resolved, self.syntactic, self.semantic)

    def to_json(self) -> dict:
        return {
            "consistency": self.consistency,
            "resolved_bcs": self.resolved,
            "syntactic": self.syntactic,
            "semantic": self.semantic,
        }


def _sat(f: Formula, k: int, alphabet, checker: BoundedChecker | None) -> bool:
    return (checker or BoundedChecker()).sat(f, k, alphabet).sat


def check_bc(
    spec: Specification, bc: Formula, k: int = DEFAULT_BOUND, checker: BoundedChecker | None = None
) -> BoundaryConditionReport:
    """Check the three boundary-condition conditions at bound ``k``."""
    alphabet = spec.alphabet
    dom = list(spec.dom)
    goals = list(spec.goals)
    inconsistency = not _sat(conjunction(dom + [bc] + goals), k, alphabet, checker)
    minimality = tuple(
        _sat(conjunction(dom + [bc] + goals[:i] + goals[i + 1 :]), k, alphabet, checker)
        for i in range(len(goals))
    )
    # bc is trivial when it is bounded-equivalent to the negated goals
    differs = Not(Iff(bc, Not(conjunction(goals))))
    non_triviality = _sat(differs, k, alphabet, checker)
    return BoundaryConditionReport(inconsistency, minimality, non_triviality)


def consistency(spec: Specification, k: int = DEFAULT_BOUND, checker: BoundedChecker | None = None) -> float:
    """1 if ``Dom && G`` is satisfiable, 0.5 if only ``G`` is, else 0."""
    try:
        if _sat(spec.formula(), k, spec.alphabet, checker):
            return 1.0
    except ResourceLimitExceeded as exc:
        log.warning("consistency check with domain gave up: %s", exc)
    try:
        if _sat(spec.goals_formula(), k, spec.alphabet, checker):
            return 0.5
    except ResourceLimitExceeded as exc:
        log.warning("consistency check of goals gave up: %s", exc)
    return 0.0


def is_resolved(
    spec: Specification, bc: Formula, k: int = DEFAULT_BOUND, checker: BoundedChecker | None = None
) -> bool:
    """Whether ``Dom && bc && G`` has a lasso model within the bound."""
    try:
        return _sat(conjunction(list(spec.dom) + [bc] + list(spec.goals)), k, spec.alphabet, checker)
    except ResourceLimitExceeded as exc:
        log.warning("resolution check gave up, counting bc as unresolved: %s", exc)
        return False


def resolved_ratio(
    spec: Specification,
    bcs: Sequence[Formula],
    k: int = DEFAULT_BOUND,
    checker: BoundedChecker | None = None,
) -> float:
    if not bcs:
        raise ValueError("at least one boundary condition is required")
    return sum(is_resolved(spec, bc, k, checker) for bc in bcs) / len(bcs)


def levenshtein(a: Sequence, b: Sequence) -> int:
    """Edit distance between two sequences (insert, delete, substitute)."""
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, 1):
        cur = [i]
        for j, y in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def syntactic_similarity(orig: Specification, cand: Specification) -> float:
    """``(maxLength - distance) / maxLength`` over goal token streams."""
    a, b = orig.tokens(), cand.tokens()
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    return (longest - levenshtein(a, b)) / longest


def semantic_similarity(
    orig: Specification,
    cand: Specification,
    k: int = DEFAULT_BOUND,
    checker: BoundedChecker | None = None,
) -> float:
    """Ratio of bases shared by both specifications to bases of either."""
    alphabet = _merged_alphabet(orig, cand)
    s, c = orig.formula(), cand.formula()
    both, either = (checker or BoundedChecker()).count([And(s, c), Or(s, c)], k, alphabet)
    if both == 0 or either == 0:
        return 0.0
    return both / either


def _merged_alphabet(a: Specification, b: Specification) -> tuple[str, ...]:
    seen = dict.fromkeys(a.alphabet)
    seen.update(dict.fromkeys(b.alphabet))
    return tuple(seen)


def is_valid_resolution(
    orig: Specification,
    cand: Specification,
    bcs: Sequence[Formula],
    k: int = DEFAULT_BOUND,
    checker: BoundedChecker | None = None,
    min_similarity: float | None = None,
) -> bool:
    """Consistent with the domain and co-satisfiable with every bc.

    ``min_similarity`` optionally also demands that the syntactic or the
    semantic similarity reach the given threshold.
    """
    if consistency(cand, k, checker) != 1.0 or resolved_ratio(cand, bcs, k, checker) != 1.0:
        return False
    if min_similarity is not None:
        return max(
            syntactic_similarity(orig, cand), semantic_similarity(orig, cand, k, checker)
        ) >= min_similarity
    return True


class FitnessEvaluator:
    """Memoized four-objective fitness against one original specification."""

    def __init__(
        self,
        orig: Specification,
        bcs: Sequence[Formula],
        k: int = DEFAULT_BOUND,
        checker: BoundedChecker | None = None,
    ):
        if not bcs:
            raise ValueError("at least one boundary condition is required")
        self.orig = orig
        self.bcs = tuple(bcs)
        self.k = k
        self.checker = checker or BoundedChecker()
        self.cache: dict[tuple[Formula, ...], FitnessVector] = {}
        self.computed = 0

    def __call__(self, cand: Specification) -> FitnessVector:
        key = cand.goals
        got = self.cache.get(key)
        if got is None:
            got = self._compute(cand)
            self.cache[key] = got
            self.computed += 1
        return got

    def _compute(self, cand: Specification) -> FitnessVector:
        k, checker = self.k, self.checker
        cons = consistency(cand, k, checker)
        resolved = resolved_ratio(cand, self.bcs, k, checker)
        syn = syntactic_similarity(self.orig, cand)
        try:
            sem = semantic_similarity(self.orig, cand, k, checker)
        except ResourceLimitExceeded as exc:
            log.warning("semantic similarity gave up: %s", exc)
            sem = 0.0
        return FitnessVector(cons, resolved, syn, sem)

    def is_valid(self, cand: Specification) -> bool:
        v = self(cand)
        return v.consistency == 1.0 and v.resolved == 1.0

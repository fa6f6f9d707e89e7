"""Pareto machinery and the four search strategies.

Every strategy draws from a shared evaluation budget: each generated
individual consumes one unit, and structurally equal specifications reuse
the memoized fitness. All strategies return a :class:`ParetoArchive` of
valid resolutions (consistency 1, every bc resolved) that are mutually
non-dominated over the full fitness vector.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .ltl import Formula
from .objectives import FitnessEvaluator, FitnessVector, Specification
from .operators import crossover_specs, mutate_spec
from .semantics import DEFAULT_BOUND, DEFAULT_TIMEOUT, BoundedChecker

ALGORITHMS = ("nsga3", "wbga", "amosa", "unguided")
DEFAULT_WEIGHTS = (0.1, 0.7, 0.1, 0.1)


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """``a`` is nowhere worse than ``b`` and strictly better somewhere (maximizing)."""
    better = False
    for x, y in zip(a, b):
        if x < y:
            return False
        if x > y:
            better = True
    return better


def weighted_fitness(v: Sequence[float], weights: Sequence[float] = DEFAULT_WEIGHTS) -> float:
    return sum(w * x for w, x in zip(weights, v))


@dataclass(frozen=True)
class Candidate:
    spec: Specification
    fitness: FitnessVector
    birth: int

    @property
    def goals(self) -> tuple[Formula, ...]:
        return self.spec.goals


@dataclass
class ParetoArchive:
    """Mutually non-dominated candidates, kept in birth order."""

    members: list[Candidate] = field(default_factory=list)
    history: list[Candidate] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def add(self, cand: Candidate) -> bool:
        """Insert ``cand`` unless it is dominated or already present."""
        for m in self.members:
            if m.goals == cand.goals or dominates(m.fitness, cand.fitness):
                return False
        self.members = [m for m in self.members if not dominates(cand.fitness, m.fitness)]
        self.members.append(cand)
        self.members.sort(key=lambda c: c.birth)
        return True


def pareto_front(cands: Iterable[Candidate]) -> ParetoArchive:
    """Maximal elements of ``cands`` under :func:`dominates`, duplicates dropped."""
    unique: dict[tuple[Formula, ...], Candidate] = {}
    for c in sorted(cands, key=lambda c: c.birth):
        unique.setdefault(c.goals, c)
    pool = list(unique.values())
    members = [c for c in pool if not any(dominates(o.fitness, c.fitness) for o in pool)]
    return ParetoArchive(members)


def non_dominated_sort(cands: Sequence[Candidate]) -> list[list[Candidate]]:
    """Partition into levels: level 0 is non-dominated, level 1 is
    non-dominated once level 0 is removed, and so on."""
    n = len(cands)
    dominated_by = [0] * n
    dominating: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if dominates(cands[i].fitness, cands[j].fitness):
                dominating[i].append(j)
                dominated_by[j] += 1
            elif dominates(cands[j].fitness, cands[i].fitness):
                dominating[j].append(i)
                dominated_by[i] += 1
    levels = []
    current = [i for i in range(n) if dominated_by[i] == 0]
    while current:
        levels.append([cands[i] for i in current])
        nxt = []
        for i in current:
            for j in dominating[i]:
                dominated_by[j] -= 1
                if dominated_by[j] == 0:
                    nxt.append(j)
        current = sorted(nxt)
    return levels


def crowding_distance(cands: Sequence[Candidate]) -> list[float]:
    n = len(cands)
    dist = [0.0] * n
    if n <= 2:
        return [math.inf] * n
    for m in range(4):
        order = sorted(range(n), key=lambda i: (cands[i].fitness.values[m], cands[i].birth))
        lo = cands[order[0]].fitness.values[m]
        hi = cands[order[-1]].fitness.values[m]
        if hi == lo:
            continue
        dist[order[0]] = dist[order[-1]] = math.inf
        for pos in range(1, n - 1):
            gap = cands[order[pos + 1]].fitness.values[m] - cands[order[pos - 1]].fitness.values[m]
            dist[order[pos]] += gap / (hi - lo)
    return dist


@dataclass
class AmosaConfig:
    initial_temp: float = 1.0
    cooling_rate: float = 5.0
    archive_cap: int = 50


@dataclass
class SearchConfig:
    algorithm: str = "nsga3"
    population_size: int = 100
    evaluation_budget: int = 1000
    crossover_probability: float = 0.1
    weights: tuple[float, float, float, float] = DEFAULT_WEIGHTS
    bound: int = DEFAULT_BOUND
    seed: int = 0
    timeout: float | None = DEFAULT_TIMEOUT
    tournament_size: int = 4
    initial_temp: float = 1.0
    cooling_rate: float = 5.0
    amosa: AmosaConfig = field(default_factory=AmosaConfig)

    def __post_init__(self):
        self.weights = tuple(float(w) for w in self.weights)
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")
        if len(self.weights) != 4 or any(w < 0 for w in self.weights):
            raise ValueError("weights must be four non-negative numbers")
        if abs(sum(self.weights) - 1.0) > 1e-9:
            raise ValueError(f"weights must sum to 1, got {sum(self.weights)}")
        if self.population_size < 1:
            raise ValueError("population size must be positive")
        if self.evaluation_budget < 0:
            raise ValueError("evaluation budget must be non-negative")
        if not 0.0 <= self.crossover_probability <= 1.0:
            raise ValueError("crossover probability must lie in [0, 1]")
        if self.bound < 1:
            raise ValueError("bound must be at least 1")

    def to_json(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "population_size": self.population_size,
            "evaluation_budget": self.evaluation_budget,
            "crossover_probability": self.crossover_probability,
            "weights": list(self.weights),
            "bound": self.bound,
            "seed": self.seed,
            "timeout": self.timeout,
            "tournament_size": self.tournament_size,
            "initial_temp": self.initial_temp,
            "cooling_rate": self.cooling_rate,
            "amosa": {
                "initial_temp": self.amosa.initial_temp,
                "cooling_rate": self.amosa.cooling_rate,
                "archive_cap": self.amosa.archive_cap,
            },
        }


@dataclass
class Problem:
    spec: Specification
    bcs: tuple[Formula, ...]
    evaluator: FitnessEvaluator

    @classmethod
    def create(
        cls, spec: Specification, bcs: Sequence[Formula], bound: int = DEFAULT_BOUND,
        timeout: float | None = DEFAULT_TIMEOUT,
    ) -> "Problem":
        checker = BoundedChecker(timeout=timeout)
        return cls(spec, tuple(bcs), FitnessEvaluator(spec, bcs, bound, checker))


class _Budget:
    """Evaluation counter; every generated individual costs one unit."""

    def __init__(self, problem: Problem, budget: int):
        self.problem = problem
        self.budget = budget
        self.used = 0
        self.history: list[Candidate] = []

    @property
    def remaining(self) -> int:
        return self.budget - self.used

    def spend(self, spec: Specification) -> Candidate | None:
        if self.used >= self.budget:
            return None
        cand = Candidate(spec, self.problem.evaluator(spec), self.used)
        self.used += 1
        self.history.append(cand)
        return cand

    def valid(self, cand: Candidate) -> bool:
        f = cand.fitness
        return f.consistency == 1.0 and f.resolved == 1.0

    def final_front(self) -> ParetoArchive:
        archive = pareto_front(c for c in self.history if self.valid(c))
        archive.history = list(self.history)
        return archive


def _temperature(t0: float, rate: float, used: int, budget: int) -> float:
    return t0 * math.exp(-rate * used / max(budget, 1))


def _dedupe(cands: Iterable[Candidate]) -> list[Candidate]:
    seen: dict[tuple[Formula, ...], Candidate] = {}
    for c in sorted(cands, key=lambda c: c.birth):
        seen.setdefault(c.goals, c)
    return list(seen.values())


def _initial_population(problem: Problem, budget: _Budget, size: int, rng: random.Random) -> list[Candidate]:
    pop = []
    for _ in range(size):
        cand = budget.spend(mutate_spec(problem.spec, rng))
        if cand is None:
            break
        pop.append(cand)
    return pop


def _breed(
    pop: Sequence[Candidate],
    pick: Callable[[], Candidate],
    cfg: SearchConfig,
    rng: random.Random,
    budget: _Budget,
) -> list[Candidate]:
    offspring = []
    for _ in range(cfg.population_size):
        parent = pick()
        spec = parent.spec
        if rng.random() < cfg.crossover_probability:
            spec = crossover_specs(spec, pick().spec, rng)
        child = budget.spend(mutate_spec(spec, rng))
        if child is None:
            break
        offspring.append(child)
    return offspring


def _level_round_robin(levels: list[list[Candidate]], size: int) -> list[Candidate]:
    """Fill ``size`` slots taking one individual per level per pass."""
    ordered = []
    for level in levels:
        crowd = crowding_distance(level)
        ordered.append([c for _, c in sorted(zip(crowd, level), key=lambda p: (-p[0], p[1].birth))])
    chosen: list[Candidate] = []
    depth = 0
    while len(chosen) < size and any(depth < len(l) for l in ordered):
        for level in ordered:
            if depth < len(level) and len(chosen) < size:
                chosen.append(level[depth])
        depth += 1
    return chosen


def run_nsga3(problem: Problem, cfg: SearchConfig, rng: random.Random | None = None) -> ParetoArchive:
    """Genetic search with level-partitioned survivor selection.

    Survivors are taken one per non-dominated level in round-robin passes
    (most crowded-apart first within a level) until the population is full.
    """
    rng = rng or random.Random(cfg.seed)
    budget = _Budget(problem, cfg.evaluation_budget)
    pop = _initial_population(problem, budget, cfg.population_size, rng)

    while pop and budget.remaining >= cfg.population_size:
        levels = non_dominated_sort(pop)
        rank = {id(c): r for r, level in enumerate(levels) for c in level}

        def tournament() -> Candidate:
            entrants = rng.sample(pop, min(cfg.tournament_size, len(pop)))
            return min(entrants, key=lambda c: (rank[id(c)], c.birth))

        offspring = _breed(pop, tournament, cfg, rng, budget)
        pop = _level_round_robin(non_dominated_sort(_dedupe(pop + offspring)), cfg.population_size)
    return budget.final_front()


def run_wbga(problem: Problem, cfg: SearchConfig, rng: random.Random | None = None) -> ParetoArchive:
    """Weighted-sum genetic search with Boltzmann parent selection."""
    rng = rng or random.Random(cfg.seed)
    budget = _Budget(problem, cfg.evaluation_budget)
    pop = _initial_population(problem, budget, cfg.population_size, rng)

    def score(c: Candidate) -> float:
        return weighted_fitness(c.fitness, cfg.weights)

    while pop and budget.remaining >= cfg.population_size:
        temp = _temperature(cfg.initial_temp, cfg.cooling_rate, budget.used, budget.budget)
        top = max(score(c) for c in pop)
        weights = [math.exp((score(c) - top) / temp) for c in pop]

        def boltzmann() -> Candidate:
            return rng.choices(pop, weights=weights)[0]

        offspring = _breed(pop, boltzmann, cfg, rng, budget)
        merged = _dedupe(pop + offspring)
        merged.sort(key=lambda c: (-score(c), c.birth))
        pop = merged[: cfg.population_size]
    return budget.final_front()


def amosa_accepts(
    current: FitnessVector, new: FitnessVector, weights: Sequence[float], temp: float, rng: random.Random
) -> bool:
    """Dominating and incomparable moves are taken; dominated ones with
    probability ``exp(-delta / temp)``."""
    if dominates(new, current):
        return True
    if dominates(current, new):
        delta = weighted_fitness(current, weights) - weighted_fitness(new, weights)
        return rng.random() < math.exp(-max(delta, 0.0) / temp)
    return True


def run_amosa(problem: Problem, cfg: SearchConfig, rng: random.Random | None = None) -> ParetoArchive:
    """Single-point annealing with a crowding-pruned archive.

    A worse (dominated) move is accepted with probability ``exp(-delta/T)``,
    ``delta`` being the drop in weighted fitness.
    """
    rng = rng or random.Random(cfg.seed)
    acfg = cfg.amosa
    budget = _Budget(problem, cfg.evaluation_budget)
    archive = ParetoArchive()

    def record(c: Candidate) -> None:
        if budget.valid(c) and archive.add(c) and len(archive) > acfg.archive_cap:
            crowd = crowding_distance(archive.members)
            worst = min(range(len(crowd)), key=lambda i: (crowd[i], -archive.members[i].birth))
            del archive.members[worst]

    current = budget.spend(mutate_spec(problem.spec, rng))
    if current is not None:
        record(current)
    while current is not None:
        new = budget.spend(mutate_spec(current.spec, rng))
        if new is None:
            break
        record(new)
        temp = _temperature(acfg.initial_temp, acfg.cooling_rate, budget.used, budget.budget)
        if amosa_accepts(current.fitness, new.fitness, cfg.weights, temp, rng):
            current = new
    archive.history = list(budget.history)
    return archive


def run_unguided(problem: Problem, cfg: SearchConfig, rng: random.Random | None = None) -> ParetoArchive:
    """Random mutation of random pool members; fitness is only read at the end."""
    rng = rng or random.Random(cfg.seed)
    budget = _Budget(problem, cfg.evaluation_budget)
    pool = [problem.spec]
    for _ in range(cfg.evaluation_budget):
        pool.append(mutate_spec(rng.choice(pool), rng))
    for spec in pool[1:]:
        budget.spend(spec)
    return budget.final_front()


RUNNERS = {
    "nsga3": run_nsga3,
    "wbga": run_wbga,
    "amosa": run_amosa,
    "unguided": run_unguided,
}


def run_search(problem: Problem, cfg: SearchConfig, rng: random.Random | None = None) -> ParetoArchive:
    return RUNNERS[cfg.algorithm](problem, cfg, rng)

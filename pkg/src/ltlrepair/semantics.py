"""Bounded LTL semantics over lasso traces.

Three entry points:

* :func:`eval_lasso` evaluates one formula on one lasso trace.
* :func:`sat_bounded` decides satisfiability over lassos whose base has at
  most ``k`` states and returns a witness.
* :func:`count_bases` counts, exactly, the bases of length ``k`` that admit
  at least one loop start whose lasso satisfies the formula.

The last two enumerate every base at once with numpy: each subformula is
evaluated to a ``(k, n_bases)`` boolean matrix for a fixed loop start.
Bases are encoded as integers, state ``i`` of base ``b`` being the bit
slice ``b >> (i * n_atoms)``.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .ltl import Atom, Binary, Constant, Formula, Unary, atoms

DEFAULT_BOUND = 5
DEFAULT_TIMEOUT = 300.0
# Hard cap on the number of bases enumerated per query.
DEFAULT_MAX_BASES = 1 << 26
CHUNK_SIZE = 1 << 16


class ResourceLimitExceeded(RuntimeError):
    """Raised when a bounded query exceeds its time or enumeration budget."""


class AlphabetMismatchError(ValueError):
    pass


@dataclass(frozen=True)
class LassoTrace:
    """``base[0..loop-1] (base[loop..])^omega``."""

    base: tuple[frozenset[str], ...]
    loop: int = 0
    alphabet: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(frozenset(s) for s in self.base))
        if not self.base:
            raise ValueError("lasso base must be nonempty")
        if not 0 <= self.loop < len(self.base):
            raise ValueError(f"loop start {self.loop} outside base of length {len(self.base)}")
        if self.alphabet is not None:
            object.__setattr__(self, "alphabet", tuple(self.alphabet))
            declared = set(self.alphabet)
            for state in self.base:
                if not state <= declared:
                    raise AlphabetMismatchError(
                        f"state mentions undeclared atoms {sorted(state - declared)}"
                    )

    def __len__(self) -> int:
        return len(self.base)

    def successor(self, i: int) -> int:
        return i + 1 if i + 1 < len(self.base) else self.loop

    def to_json(self) -> dict:
        return {"base": [sorted(s) for s in self.base], "loop": self.loop}

    @classmethod
    def from_json(cls, data: dict | str, alphabet: Sequence[str] | None = None) -> "LassoTrace":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple(frozenset(s) for s in data["base"]), int(data.get("loop", 0)), alphabet)


@dataclass(frozen=True)
class SatWitness:
    trace: LassoTrace
    sat = True


@dataclass(frozen=True)
class NoLassoWithinBound:
    k: int
    sat = False


BoundedVerdict = SatWitness | NoLassoWithinBound


# ---------------------------------------------------------------------------
# Single-trace evaluation


def eval_lasso(f: Formula, trace: LassoTrace) -> bool:
    """Whether the lasso ``trace`` satisfies ``f`` at position 0."""
    if trace.alphabet is not None:
        extra = atoms(f) - set(trace.alphabet)
        if extra:
            raise AlphabetMismatchError(f"formula mentions undeclared atoms {sorted(extra)}")
    return _eval_positions(f, trace, {})[0]


def _eval_positions(f: Formula, t: LassoTrace, memo: dict) -> list[bool]:
    got = memo.get(f)
    if got is not None:
        return got
    k = len(t.base)
    if isinstance(f, Constant):
        val = [f.value] * k
    elif isinstance(f, Atom):
        val = [f.name in s for s in t.base]
    elif isinstance(f, Unary):
        a = _eval_positions(f.child, t, memo)
        if f.op == "!":
            val = [not x for x in a]
        elif f.op == "X":
            val = [a[t.successor(i)] for i in range(k)]
        elif f.op == "F":
            val = _fixpoint(t, [True] * k, a, least=True)
        elif f.op == "G":
            val = _fixpoint(t, a, [False] * k, least=False)
        else:
            raise ValueError(f"unknown unary operator {f.op!r}")
    elif isinstance(f, Binary):
        a = _eval_positions(f.left, t, memo)
        b = _eval_positions(f.right, t, memo)
        op = f.op
        if op == "&&":
            val = [x and y for x, y in zip(a, b)]
        elif op == "||":
            val = [x or y for x, y in zip(a, b)]
        elif op == "->":
            val = [(not x) or y for x, y in zip(a, b)]
        elif op == "<->":
            val = [x == y for x, y in zip(a, b)]
        elif op == "U":
            val = _fixpoint(t, a, b, least=True)
        elif op == "W":
            val = _fixpoint(t, a, b, least=False)
        elif op == "R":
            # a R b == b W (a && b)
            val = _fixpoint(t, b, [x and y for x, y in zip(a, b)], least=False)
        else:
            raise ValueError(f"unknown binary operator {op!r}")
    else:
        raise TypeError(f"not a formula: {f!r}")
    memo[f] = val
    return val


def _fixpoint(t: LassoTrace, hold: list[bool], goal: list[bool], least: bool) -> list[bool]:
    """Solve ``v[i] = goal[i] or (hold[i] and v[succ(i)])``.

    Least fixpoint gives until, greatest gives weak until. Two backward
    sweeps suffice because any witness on the loop is reached within one lap.
    """
    k = len(t.base)
    val = [not least] * k
    for _ in range(2):
        for i in range(k - 1, -1, -1):
            val[i] = goal[i] or (hold[i] and val[t.successor(i)])
    return val


# ---------------------------------------------------------------------------
# Vectorized enumeration over all bases


def _alphabet_for(f: Formula | Iterable[Formula], alphabet: Sequence[str] | None) -> tuple[str, ...]:
    formulas = [f] if isinstance(f, Formula) else list(f)
    used: set[str] = set()
    for g in formulas:
        used |= atoms(g)
    if alphabet is None:
        return tuple(sorted(used))
    alphabet = tuple(alphabet)
    extra = used - set(alphabet)
    if extra:
        raise AlphabetMismatchError(f"formula mentions undeclared atoms {sorted(extra)}")
    return alphabet


class _Batch:
    """All lassos with a fixed base length and loop start over a chunk of bases."""

    def __init__(self, alphabet: tuple[str, ...], k: int, loop: int, valuations: dict[str, np.ndarray]):
        self.alphabet = alphabet
        self.k = k
        self.loop = loop
        self.valuations = valuations
        self.width = next(iter(valuations.values())).shape[1] if valuations else 1
        self.memo: dict[Formula, np.ndarray] = {}

    def eval(self, f: Formula) -> np.ndarray:
        got = self.memo.get(f)
        if got is not None:
            return got
        k, loop = self.k, self.loop
        if isinstance(f, Constant):
            val = np.full((k, self.width), f.value, dtype=bool)
        elif isinstance(f, Atom):
            val = self.valuations[f.name]
        elif isinstance(f, Unary):
            a = self.eval(f.child)
            if f.op == "!":
                val = ~a
            elif f.op == "X":
                val = np.empty_like(a)
                val[:-1] = a[1:]
                val[-1] = a[loop]
            elif f.op == "F":
                # F a at i: a somewhere in i..k-1, or somewhere on the loop.
                val = self._suffix(a, np.logical_or)
                val |= val[loop]
            elif f.op == "G":
                val = self._suffix(a, np.logical_and)
                val &= val[loop]
            else:
                raise ValueError(f"unknown unary operator {f.op!r}")
        elif isinstance(f, Binary):
            a = self.eval(f.left)
            b = self.eval(f.right)
            op = f.op
            if op == "&&":
                val = a & b
            elif op == "||":
                val = a | b
            elif op == "->":
                val = ~a | b
            elif op == "<->":
                val = a == b
            elif op == "U":
                val = self._fixpoint(a, b, least=True)
            elif op == "W":
                val = self._fixpoint(a, b, least=False)
            elif op == "R":
                val = self._fixpoint(b, a & b, least=False)
            else:
                raise ValueError(f"unknown binary operator {op!r}")
        else:
            raise TypeError(f"not a formula: {f!r}")
        self.memo[f] = val
        return val

    @staticmethod
    def _suffix(a: np.ndarray, op) -> np.ndarray:
        val = a.copy()
        for i in range(len(a) - 2, -1, -1):
            op(val[i], val[i + 1], out=val[i])
        return val

    def _fixpoint(self, hold: np.ndarray, goal: np.ndarray, least: bool) -> np.ndarray:
        k, loop = self.k, self.loop
        val = np.full(hold.shape, not least, dtype=bool)
        for _ in range(2):
            nxt = val[loop]
            for i in range(k - 1, -1, -1):
                val[i] = goal[i] | (hold[i] & nxt)
                nxt = val[i]
        return val


def _valuations(alphabet: tuple[str, ...], k: int, start: int, stop: int) -> dict[str, np.ndarray]:
    n = len(alphabet)
    idx = np.arange(start, stop, dtype=np.int64)
    out = {}
    for a, name in enumerate(alphabet):
        rows = [((idx >> (n * i + a)) & 1).astype(bool) for i in range(k)]
        out[name] = np.stack(rows) if rows else np.zeros((0, stop - start), dtype=bool)
    return out


def decode_base(index: int, alphabet: Sequence[str], k: int) -> tuple[frozenset[str], ...]:
    n = len(alphabet)
    return tuple(
        frozenset(name for a, name in enumerate(alphabet) if (index >> (n * i + a)) & 1)
        for i in range(k)
    )


@dataclass
class BoundedChecker:
    """Enumeration engine with a shared time and size budget.

    ``timeout`` is in seconds per query; ``None`` disables it.
    """

    timeout: float | None = DEFAULT_TIMEOUT
    max_bases: int = DEFAULT_MAX_BASES
    chunk_size: int = CHUNK_SIZE
    _deadline: float | None = field(default=None, init=False, repr=False)
    _valuation_cache: dict = field(default_factory=dict, init=False, repr=False)

    def _start(self, n_atoms: int, k: int) -> int:
        total = 1 << (n_atoms * k)
        if total > self.max_bases:
            raise ResourceLimitExceeded(
                f"{total} bases exceed the enumeration budget of {self.max_bases}"
            )
        self._deadline = None if self.timeout is None else time.monotonic() + self.timeout
        return total

    def _tick(self) -> None:
        if self._deadline is not None and time.monotonic() > self._deadline:
            raise ResourceLimitExceeded(f"bounded query exceeded {self.timeout} s")

    def _valuations(self, alphabet: tuple[str, ...], k: int, start: int, stop: int):
        key = (alphabet, k, start, stop)
        got = self._valuation_cache.get(key)
        if got is None:
            if len(self._valuation_cache) >= 64:
                self._valuation_cache.clear()
            got = self._valuation_cache[key] = _valuations(alphabet, k, start, stop)
        return got

    def _chunks(self, total: int):
        for start in range(0, total, self.chunk_size):
            yield start, min(total, start + self.chunk_size)

    def satisfying_bases(self, formulas: Sequence[Formula], k: int, alphabet: tuple[str, ...]):
        """Yield ``(start, masks)`` per chunk, one mask per formula.

        ``masks[j][b]`` is true when base ``start + b`` has some loop start
        satisfying ``formulas[j]``.
        """
        total = self._start(len(alphabet), k)
        for start, stop in self._chunks(total):
            vals = self._valuations(alphabet, k, start, stop)
            masks = [np.zeros(stop - start, dtype=bool) for _ in formulas]
            for loop in range(k):
                self._tick()
                batch = _Batch(alphabet, k, loop, vals)
                for j, f in enumerate(formulas):
                    masks[j] |= batch.eval(f)[0]
            yield start, masks

    def count(self, f: Formula | Sequence[Formula], k: int, alphabet: Sequence[str] | None = None):
        if k < 1:
            raise ValueError("bound must be at least 1")
        single = isinstance(f, Formula)
        formulas = [f] if single else list(f)
        alpha = _alphabet_for(formulas, alphabet)
        totals = [0] * len(formulas)
        for _, masks in self.satisfying_bases(formulas, k, alpha):
            for j, m in enumerate(masks):
                totals[j] += int(np.count_nonzero(m))
        return totals[0] if single else totals

    def sat(self, f: Formula, k: int, alphabet: Sequence[str] | None = None) -> BoundedVerdict:
        if k < 1:
            raise ValueError("bound must be at least 1")
        alpha = _alphabet_for(f, alphabet)
        # Every lasso with a shorter base denotes a trace that also has a
        # base of length exactly k, so lengths are tried shortest first only
        # to return small witnesses.
        for length in range(1, k + 1):
            total = self._start(len(alpha), length)
            for start, stop in self._chunks(total):
                vals = self._valuations(alpha, length, start, stop)
                for loop in range(length):
                    self._tick()
                    row = _Batch(alpha, length, loop, vals).eval(f)[0]
                    hits = np.flatnonzero(row)
                    if hits.size:
                        base = decode_base(start + int(hits[0]), alpha, length)
                        return SatWitness(LassoTrace(base, loop, alpha))
        return NoLassoWithinBound(k)


_DEFAULT_CHECKER = BoundedChecker()


def sat_bounded(
    f: Formula,
    k: int = DEFAULT_BOUND,
    alphabet: Sequence[str] | None = None,
    checker: BoundedChecker | None = None,
) -> BoundedVerdict:
    """Search lassos with base length at most ``k`` for a model of ``f``."""
    return (checker or _DEFAULT_CHECKER).sat(f, k, alphabet)


def count_bases(
    f: Formula,
    k: int = DEFAULT_BOUND,
    alphabet: Sequence[str] | None = None,
    checker: BoundedChecker | None = None,
) -> int:
    """Number of length-``k`` bases with at least one satisfying loop start."""
    return (checker or _DEFAULT_CHECKER).count(f, k, alphabet)

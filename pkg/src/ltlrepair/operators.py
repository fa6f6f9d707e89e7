"""Mutation and combination of LTL formulas, lifted to specifications.

Mutation picks one node of the formula uniformly at random and applies a
uniformly chosen rule that is applicable at that node. Rules:

=====  ==============================================================
1      flip a constant
2      replace an atom by a different atom
3a     swap a unary operator for another one of ``! X F G``
3b     drop a unary operator
3c     mutate the operand of a unary operator
3d     ``phi`` -> ``q op phi`` with ``op`` in ``U W && ||``
4a     swap a binary operator for one of ``|| && U R W``
4b     keep only one operand of a binary operator
4c/4d  mutate the left/right operand
5      wrap the node in one of ``G F X !``
6      replace the node by a constant or an atom
=====  ==============================================================

A mutation is reported as its rule chain: the inductive rules (3c, 4c,
4d) followed from the root down to the picked node, then the rule applied
there. A root mutation has a chain of length one.
"""

from __future__ import annotations

import enum
import random
from typing import Sequence

from .ltl import (
    FALSE,
    TRUE,
    Atom,
    Binary,
    Constant,
    Formula,
    Path,
    Unary,
    get_at,
    replace_at,
    subformulas,
)
from .objectives import Specification

UNARY_MUTATION_OPS = ("!", "X", "F", "G")
BINARY_MUTATION_OPS = ("||", "&&", "U", "R", "W")
AUGMENT_OPS = ("U", "W", "&&", "||")
WRAP_OPS = ("G", "F", "X", "!")
COMBINE_OPS = ("||", "&&", "U", "R", "W")


class MutationRule(str, enum.Enum):
    FLIP_CONSTANT = "1"
    SWAP_ATOM = "2"
    SWAP_UNARY = "3a"
    DROP_UNARY = "3b"
    INTO_UNARY = "3c"
    AUGMENT_UNARY = "3d"
    SWAP_BINARY = "4a"
    DROP_BINARY = "4b"
    INTO_LEFT = "4c"
    INTO_RIGHT = "4d"
    WRAP = "5"
    REPLACE = "6"

    def __str__(self) -> str:
        return self.value


R = MutationRule


def _leaves(alphabet: Sequence[str]) -> list[Formula]:
    return [TRUE, FALSE] + [Atom(a) for a in alphabet]


def local_rules(node: Formula, alphabet: Sequence[str]) -> list[MutationRule]:
    """Rules applicable directly at ``node`` (excluding the recursive ones)."""
    if isinstance(node, Constant):
        rules = [R.FLIP_CONSTANT]
    elif isinstance(node, Atom):
        rules = [R.SWAP_ATOM] if any(a != node.name for a in alphabet) else []
    elif isinstance(node, Unary):
        rules = [R.SWAP_UNARY, R.DROP_UNARY, R.AUGMENT_UNARY] if alphabet else [R.SWAP_UNARY, R.DROP_UNARY]
    else:
        rules = [R.SWAP_BINARY, R.DROP_BINARY]
    return rules + [R.WRAP, R.REPLACE]


def rule_outcomes(node: Formula, rule: MutationRule, alphabet: Sequence[str]) -> list[Formula]:
    """Every formula ``rule`` can turn ``node`` into, in a fixed order."""
    if rule is R.FLIP_CONSTANT:
        return [Constant(not node.value)]
    if rule is R.SWAP_ATOM:
        return [Atom(a) for a in alphabet if a != node.name]
    if rule is R.SWAP_UNARY:
        return [Unary(op, node.child) for op in UNARY_MUTATION_OPS if op != node.op]
    if rule is R.DROP_UNARY:
        return [node.child]
    if rule is R.AUGMENT_UNARY:
        return [Binary(op, Atom(q), node) for q in alphabet for op in AUGMENT_OPS]
    if rule is R.SWAP_BINARY:
        return [Binary(op, node.left, node.right) for op in BINARY_MUTATION_OPS if op != node.op]
    if rule is R.DROP_BINARY:
        return [node.left, node.right]
    if rule is R.WRAP:
        return [Unary(op, node) for op in WRAP_OPS]
    if rule is R.REPLACE:
        return [x for x in _leaves(alphabet) if x != node]
    raise ValueError(f"rule {rule} is not applied locally")


RuleChain = tuple[MutationRule, ...]


def rule_chain(f: Formula, path: Path, local: MutationRule) -> RuleChain:
    chain = []
    node = f
    for idx in path:
        if isinstance(node, Unary):
            chain.append(R.INTO_UNARY)
        else:
            chain.append(R.INTO_LEFT if idx == 0 else R.INTO_RIGHT)
        node = node.children[idx]
    chain.append(local)
    return tuple(chain)


def mutate_at(
    f: Formula, path: Path, rng: random.Random, alphabet: Sequence[str], rule: MutationRule | None = None
) -> tuple[Formula, RuleChain]:
    node = get_at(f, path)
    if rule is None:
        rule = rng.choice(local_rules(node, alphabet))
    replacement = rng.choice(rule_outcomes(node, rule, alphabet))
    return replace_at(f, path, replacement), rule_chain(f, path, rule)


def mutate_formula(
    f: Formula, rng: random.Random, alphabet: Sequence[str]
) -> tuple[Formula, RuleChain]:
    """Apply one random mutation; returns the mutant and its rule chain."""
    paths = subformulas(f)
    path, _ = rng.choice(paths)
    return mutate_at(f, path, rng, alphabet)


def single_mutants(f: Formula, alphabet: Sequence[str]) -> set[Formula]:
    """All formulas reachable from ``f`` by one mutation."""
    out: set[Formula] = set()
    for path, node in subformulas(f):
        for rule in local_rules(node, alphabet):
            for g in rule_outcomes(node, rule, alphabet):
                out.add(replace_at(f, path, g))
    return out


def combine_at(f: Formula, path: Path, beta: Formula, op: str | None = None) -> Formula:
    """Replace the node at ``path`` by ``beta``, or by ``node op beta``."""
    if op is None:
        return replace_at(f, path, beta)
    return replace_at(f, path, Binary(op, get_at(f, path), beta))


def combine_formulas(f: Formula, g: Formula, rng: random.Random) -> Formula:
    alpha_path, _ = rng.choice(subformulas(f))
    _, beta = rng.choice(subformulas(g))
    if rng.random() < 0.5:
        return combine_at(f, alpha_path, beta)
    return combine_at(f, alpha_path, beta, rng.choice(COMBINE_OPS))


def mutate_spec(cand: Specification, rng: random.Random) -> Specification:
    """Mutate one uniformly chosen goal; the domain is left as is."""
    i = rng.randrange(len(cand.goals))
    goals = list(cand.goals)
    goals[i], _ = mutate_formula(goals[i], rng, cand.alphabet)
    return cand.with_goals(goals)


def crossover_specs(a: Specification, b: Specification, rng: random.Random) -> Specification:
    if set(a.alphabet) != set(b.alphabet):
        raise ValueError("crossover parents must share an alphabet")
    i = rng.randrange(len(a.goals))
    j = rng.randrange(len(b.goals))
    goals = list(a.goals)
    goals[i] = combine_formulas(a.goals[i], b.goals[j], rng)
    return a.with_goals(goals)

"""Propositional formulas over facts, and the state sets they describe."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from .errors import EnumerationCapExceeded, ParseError, UniverseMismatch, UnknownFactError
from .strips import Domain, FactUniverse, PlanningTask, State

DEFAULT_ENUMERATION_CAP = 20


@dataclass(frozen=True)
class Atom:
    fact: str

    def __str__(self):
        return self.fact


@dataclass(frozen=True)
class Not:
    arg: "Formula"

    def __str__(self):
        return f"(not {self.arg})"


@dataclass(frozen=True)
class And:
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise ValueError("And needs at least one operand")

    def __str__(self):
        return "(and " + " ".join(map(str, self.args)) + ")"


@dataclass(frozen=True)
class Or:
    args: tuple

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if not self.args:
            raise ValueError("Or needs at least one operand")

    def __str__(self):
        return "(or " + " ".join(map(str, self.args)) + ")"


@dataclass(frozen=True)
class Const:
    value: bool

    def __str__(self):
        return "true" if self.value else "false"


TRUE = Const(True)
FALSE = Const(False)

Formula = Union[Atom, Not, And, Or, Const]


def atoms(phi: Formula) -> set[str]:
    if isinstance(phi, Atom):
        return {phi.fact}
    if isinstance(phi, Not):
        return atoms(phi.arg)
    if isinstance(phi, (And, Or)):
        return set().union(*(atoms(a) for a in phi.args))
    return set()


def check_atoms(phi: Formula, universe: FactUniverse) -> None:
    for f in sorted(atoms(phi)):
        if f not in universe:
            raise UnknownFactError(f, "in formula")


def evaluate(phi: Formula, s: State) -> bool:
    """Truth value of ``phi`` in state ``s`` (closed world: absent facts are false)."""
    check_atoms(phi, s.universe)
    return _eval_mask(phi, s.universe, s.mask)


def _eval_mask(phi, u, mask):
    if isinstance(phi, Atom):
        return bool(mask >> u.index(phi.fact) & 1)
    if isinstance(phi, Not):
        return not _eval_mask(phi.arg, u, mask)
    if isinstance(phi, And):
        return all(_eval_mask(a, u, mask) for a in phi.args)
    if isinstance(phi, Or):
        return any(_eval_mask(a, u, mask) for a in phi.args)
    if isinstance(phi, Const):
        return phi.value
    raise TypeError(f"not a formula: {phi!r}")


def compile_mask_predicate(phi: Formula, universe: FactUniverse):
    """Return a fast ``mask -> bool`` function for ``phi``."""
    check_atoms(phi, universe)
    if isinstance(phi, Atom):
        bit = 1 << universe.index(phi.fact)
        return lambda m: bool(m & bit)
    if isinstance(phi, Not):
        inner = compile_mask_predicate(phi.arg, universe)
        return lambda m: not inner(m)
    if isinstance(phi, And):
        parts = [compile_mask_predicate(a, universe) for a in phi.args]
        return lambda m: all(p(m) for p in parts)
    if isinstance(phi, Or):
        parts = [compile_mask_predicate(a, universe) for a in phi.args]
        return lambda m: any(p(m) for p in parts)
    v = phi.value
    return lambda m: v


def nnf(phi: Formula, negate: bool = False) -> Formula:
    """Negation normal form of ``phi`` (of ``not phi`` when ``negate``)."""
    if isinstance(phi, Atom):
        return Not(phi) if negate else phi
    if isinstance(phi, Not):
        return nnf(phi.arg, not negate)
    if isinstance(phi, Const):
        return Const(phi.value != negate)
    args = tuple(nnf(a, negate) for a in phi.args)
    if isinstance(phi, And):
        return Or(args) if negate else And(args)
    return And(args) if negate else Or(args)


def parse_formula(text: str, universe: FactUniverse | Domain | None = None) -> Formula:
    """Parse the s-expression syntax: ``f``, ``(f)``, ``(not x)``, ``(and ...)``,
    ``(or ...)``, ``true``, ``false``.

    Atoms are checked against ``universe`` when one is given.
    """
    from .pddl import SList, Sym, read_sexprs

    exprs = read_sexprs(text)
    if len(exprs) != 1:
        raise ParseError(f"expected exactly one formula, got {len(exprs)}")

    def conv(x):
        if isinstance(x, Sym):
            if x.key == "true":
                return TRUE
            if x.key == "false":
                return FALSE
            return Atom(x.text)
        assert isinstance(x, SList)
        if not x:
            raise ParseError("empty formula", x.line, x.col)
        head = x[0]
        if isinstance(head, Sym):
            k = head.key
            if k == "not":
                if len(x) != 2:
                    raise ParseError("'not' takes one argument", x.line, x.col)
                return Not(conv(x[1]))
            if k in ("and", "or"):
                if len(x) < 2:
                    raise ParseError(f"'{k}' needs at least one operand", x.line, x.col)
                args = [conv(a) for a in x[1:]]
                return And(args) if k == "and" else Or(args)
            if len(x) == 1:
                return conv(head)
        raise ParseError("malformed formula", x.line, x.col)

    phi = conv(exprs[0])
    if universe is not None:
        check_atoms(phi, universe.universe if isinstance(universe, Domain) else universe)
    return phi


# -- state set specifications ------------------------------------------------

@dataclass(frozen=True)
class Explicit:
    states: tuple

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))


@dataclass(frozen=True)
class ByFormula:
    phi: Formula


@dataclass(frozen=True)
class ReachableOf:
    task: PlanningTask


@dataclass(frozen=True)
class Universe:
    pass


StateSetSpec = Union[Explicit, ByFormula, ReachableOf, Universe]


def _check_cap(d: Domain, cap: int) -> None:
    n = len(d.facts)
    if n > cap:
        raise EnumerationCapExceeded(cap, n)


def enumerate_states(spec: StateSetSpec, d: Domain, cap: int = DEFAULT_ENUMERATION_CAP,
                     max_states: int | None = None) -> list[State]:
    """List the states of ``spec`` in deterministic order.

    Formula and universe sets are enumerated over ``2^F`` in ascending
    bitmask order (bit ``i`` = ``i``-th declared fact), which requires
    ``|F| <= cap``.  Reachable sets come from breadth-first search and are
    returned in the same ascending order.
    """
    u = d.universe
    if isinstance(spec, Explicit):
        out, seen = [], set()
        for s in spec.states:
            if s.universe is not u and s.universe != u:
                raise UniverseMismatch("explicit state over a different fact universe")
            if s.mask not in seen:
                seen.add(s.mask)
                out.append(State(u, s.mask))
        return out
    if isinstance(spec, Universe):
        _check_cap(d, cap)
        return [State(u, m) for m in range(1 << len(u))]
    if isinstance(spec, ByFormula):
        pred = compile_mask_predicate(spec.phi, u)
        _check_cap(d, cap)
        return [State(u, m) for m in range(1 << len(u)) if pred(m)]
    if isinstance(spec, ReachableOf):
        from .reversibility import reachable_states

        if spec.task.domain.universe != u:
            raise UniverseMismatch("task over a different fact universe")
        limit = max_states if max_states is not None else 1 << cap
        masks = sorted(s.mask for s in reachable_states(spec.task, limit))
        return [State(u, m) for m in masks]
    raise TypeError(f"not a state set spec: {spec!r}")


def states_from(d: Domain, sets: Iterable[Iterable[str]]) -> Explicit:
    """Convenience: an :class:`Explicit` spec from lists of fact names."""
    return Explicit(tuple(d.state(s) for s in sets))

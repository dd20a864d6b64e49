"""Propositional STRIPS model: facts, states, actions, domains and tasks.

States and fact sets are stored as integer bitmasks over a :class:`FactUniverse`
(bit ``i`` is the ``i``-th declared fact), which keeps membership and subset
tests cheap for universes of a few hundred facts.  Everything here is an
immutable value.
"""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence, Union

from .errors import (
    MalformedDomain,
    PlanNotApplicable,
    PreconditionViolated,
    UniverseMismatch,
    UnknownFactError,
)

Fact = str

_NAME_RE = re.compile(r'^[^\s()";]+$')


def valid_name(name: str) -> bool:
    return bool(name) and _NAME_RE.match(name) is not None


class FactUniverse:
    """Ordered, finite set of fact names.

    The declaration order is the canonical order used for iteration,
    serialization and state enumeration.
    """

    __slots__ = ("names", "_index", "_hash")

    def __init__(self, names: Iterable[str]):
        self.names = tuple(names)
        index = {}
        for i, n in enumerate(self.names):
            index.setdefault(n, i)
        self._index = index
        self._hash = hash(self.names)

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self._index

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FactUniverse):
            return NotImplemented
        return self.names == other.names

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"FactUniverse({list(self.names)!r})"

    @property
    def full_mask(self) -> int:
        return (1 << len(self.names)) - 1

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownFactError(name) from None

    def mask(self, names: Iterable[str]) -> int:
        m = 0
        for n in names:
            m |= 1 << self.index(n)
        return m

    def names_of(self, mask: int) -> tuple[str, ...]:
        out = []
        i = 0
        while mask:
            if mask & 1:
                out.append(self.names[i])
            mask >>= 1
            i += 1
        return tuple(out)


def _same_universe(u1: FactUniverse, u2: FactUniverse, what: str) -> None:
    if u1 is not u2 and u1 != u2:
        raise UniverseMismatch(f"{what}: objects built over different fact universes")


@dataclass(frozen=True)
class State:
    """A set of true facts (closed world), stored as a bitmask."""

    universe: FactUniverse = field(repr=False)
    mask: int

    @classmethod
    def of(cls, universe: FactUniverse, facts: Iterable[str] = ()) -> "State":
        return cls(universe, universe.mask(facts))

    @property
    def facts(self) -> tuple[str, ...]:
        """Member facts in canonical order."""
        return self.universe.names_of(self.mask)

    @property
    def members(self) -> frozenset:
        return frozenset(self.facts)

    def __contains__(self, name) -> bool:
        i = self.universe._index.get(name)
        return i is not None and bool(self.mask >> i & 1)

    def __iter__(self) -> Iterator[str]:
        return iter(self.facts)

    def __len__(self) -> int:
        return bin(self.mask).count("1")

    def issubset(self, other: "State") -> bool:
        _same_universe(self.universe, other.universe, "issubset")
        return self.mask & ~other.mask == 0

    def __str__(self):
        return "{" + ", ".join(self.facts) + "}"

    def __repr__(self):
        return f"State({str(self)})"


@dataclass(frozen=True)
class Action:
    """STRIPS action ``<pre, add, del>`` over a fact universe."""

    name: str
    universe: FactUniverse = field(repr=False)
    pre_mask: int = 0
    add_mask: int = 0
    del_mask: int = 0

    @classmethod
    def create(cls, universe, name, pre=(), add=(), delete=()) -> "Action":
        try:
            return cls(name, universe, universe.mask(pre), universe.mask(add),
                       universe.mask(delete))
        except UnknownFactError as e:
            raise UnknownFactError(e.name, f"in action {name!r}") from None

    @property
    def pre(self) -> frozenset:
        return frozenset(self.universe.names_of(self.pre_mask))

    @property
    def add(self) -> frozenset:
        return frozenset(self.universe.names_of(self.add_mask))

    @property
    def delete(self) -> frozenset:
        return frozenset(self.universe.names_of(self.del_mask))

    @property
    def touched_mask(self) -> int:
        """Facts mentioned anywhere in the action."""
        return self.pre_mask | self.add_mask | self.del_mask

    def __str__(self):
        return self.name

    def __repr__(self):
        u = self.universe
        return (f"Action({self.name!r}, pre={list(u.names_of(self.pre_mask))}, "
                f"add={list(u.names_of(self.add_mask))}, del={list(u.names_of(self.del_mask))})")


Plan = tuple  # tuple[Action, ...]


def plan_names(plan: Sequence[Action]) -> tuple[str, ...]:
    return tuple(a.name for a in plan)


@dataclass(frozen=True)
class Violation:
    kind: str  # AddDelOverlap, PreAddOverlap, DuplicateActionName, DuplicateFactName, BadName
    subject: str
    facts: tuple = ()

    def __str__(self):
        if self.facts:
            return f"{self.kind}({self.subject}: {', '.join(self.facts)})"
        return f"{self.kind}({self.subject})"


ActionLike = Union[Action, tuple]


class Domain:
    """A named fact universe with an ordered list of actions.

    ``check`` controls well-formedness enforcement at construction:

    * ``"strict"`` -- any violation raises :class:`MalformedDomain`;
    * ``"lenient"`` -- facts in both pre and add are dropped from add (with a
      warning); remaining violations still raise;
    * ``"none"`` -- no checks, for inspecting raw input with
      :func:`validate_domain`.

    ``actions`` may hold :class:`Action` objects or ``(name, pre, add, delete)``
    tuples of fact names.
    """

    def __init__(self, name: str, facts: Iterable[str], actions: Iterable[ActionLike] = (),
                 check: str = "strict"):
        if check not in ("strict", "lenient", "none"):
            raise ValueError(f"unknown check mode {check!r}")
        self.name = name
        self.universe = facts if isinstance(facts, FactUniverse) else FactUniverse(facts)
        built = []
        for a in actions:
            if isinstance(a, Action):
                _same_universe(a.universe, self.universe, f"action {a.name}")
                if a.universe is not self.universe:
                    a = Action(a.name, self.universe, a.pre_mask, a.add_mask, a.del_mask)
            else:
                a = Action.create(self.universe, *a)
            built.append(a)
        if check == "lenient":
            fixed = []
            for a in built:
                overlap = a.pre_mask & a.add_mask
                if overlap:
                    warnings.warn(
                        f"action {a.name}: dropping add effects already in precondition: "
                        f"{', '.join(self.universe.names_of(overlap))}",
                        stacklevel=2,
                    )
                    a = Action(a.name, self.universe, a.pre_mask, a.add_mask & ~overlap, a.del_mask)
                fixed.append(a)
            built = fixed
        self.actions: tuple[Action, ...] = tuple(built)
        self._by_name = {}
        for a in self.actions:
            self._by_name.setdefault(a.name, a)
        if check != "none":
            problems = validate_domain(self)
            if problems:
                raise MalformedDomain(problems)

    @property
    def facts(self) -> tuple[str, ...]:
        return self.universe.names

    def action(self, name: str) -> Action:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"no action named {name!r} in domain {self.name!r}") from None

    def plan(self, *names: str) -> Plan:
        """Build a plan from action names."""
        return tuple(self.action(n) for n in names)

    def state(self, facts: Iterable[str] = ()) -> State:
        return State.of(self.universe, facts)

    def __eq__(self, other):
        if not isinstance(other, Domain):
            return NotImplemented
        return (self.name == other.name and self.universe == other.universe
                and self.actions == other.actions)

    def __hash__(self):
        return hash((self.name, self.universe, self.actions))

    def __repr__(self):
        return f"Domain({self.name!r}, facts={len(self.facts)}, actions={[a.name for a in self.actions]})"


@dataclass(frozen=True)
class PlanningTask:
    """Domain plus an initial state and a goal fact set."""

    domain: Domain
    init: State
    goal: State

    def __post_init__(self):
        _same_universe(self.init.universe, self.domain.universe, "task init")
        _same_universe(self.goal.universe, self.domain.universe, "task goal")

    @classmethod
    def create(cls, domain: Domain, init: Iterable[str] = (), goal: Iterable[str] = ()):
        return cls(domain, domain.state(init), domain.state(goal))

    def is_goal(self, s: State) -> bool:
        return self.goal.issubset(s)


def validate_domain(d: Domain) -> list[Violation]:
    """Return every well-formedness violation of ``d`` (empty list if none)."""
    out = []
    u = d.universe
    seen = set()
    for f in u.names:
        if f in seen:
            out.append(Violation("DuplicateFactName", f))
        seen.add(f)
        if not valid_name(f):
            out.append(Violation("BadName", f))
    seen = set()
    for a in d.actions:
        if a.name in seen:
            out.append(Violation("DuplicateActionName", a.name))
        seen.add(a.name)
        if not valid_name(a.name):
            out.append(Violation("BadName", a.name))
        if a.add_mask & a.del_mask:
            out.append(Violation("AddDelOverlap", a.name, u.names_of(a.add_mask & a.del_mask)))
        if a.pre_mask & a.add_mask:
            out.append(Violation("PreAddOverlap", a.name, u.names_of(a.pre_mask & a.add_mask)))
    return out


def is_applicable(a: Action, s: State) -> bool:
    if a.universe is not s.universe:
        _same_universe(a.universe, s.universe, "is_applicable")
    return a.pre_mask & ~s.mask == 0


def apply(a: Action, s: State) -> State:
    """Successor state ``(s - del) | add``; raises if ``a`` is not applicable."""
    if not is_applicable(a, s):
        raise PreconditionViolated(a.name, s.universe.names_of(a.pre_mask & ~s.mask))
    return State(s.universe, (s.mask & ~a.del_mask) | a.add_mask)


def apply_sequence(plan: Sequence[Action], s: State) -> State:
    """Apply ``plan`` step by step; the empty plan is the identity.

    Raises :class:`PlanNotApplicable` carrying the first failing step index.
    """
    mask = s.mask
    for i, a in enumerate(plan):
        if a.universe is not s.universe:
            _same_universe(a.universe, s.universe, "apply_sequence")
        missing = a.pre_mask & ~mask
        if missing:
            raise PlanNotApplicable(i, a.name, s.universe.names_of(missing))
        mask = (mask & ~a.del_mask) | a.add_mask
    return State(s.universe, mask)

"""Deciding uniform reversibility of STRIPS actions.

An action ``a`` is uniformly reversible over a state set ``S`` when one action
sequence (a *reverse plan*) restores every ``s`` in ``S`` where ``a`` is
applicable.  Four settings are supported: all states (universal), models of a
formula, an explicit list of states, and the reachable states of a task.

Universal mode only needs the facts of ``pre(a)``: an action or plan step that
touches any other fact can never be part of a universal reverse plan, so the
search runs on the subsets of ``pre(a)`` from a single start state and is
complete once that projected graph is exhausted.  The other modes search over
belief states (one current state per start state) and are bounded by the
horizon.
"""

from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import EnumerationCapExceeded
from .formula import (
    DEFAULT_ENUMERATION_CAP,
    ByFormula,
    Explicit,
    ReachableOf,
    StateSetSpec,
    Universe,
    enumerate_states,
)
from .strips import Action, Domain, Plan, PlanningTask, State, plan_names

BRUTE_FORCE_MAX_FACTS = 12


class Status(str, enum.Enum):
    REVERSIBLE = "reversible"
    IRREVERSIBLE = "irreversible"
    UNKNOWN = "unknown-up-to-horizon"


@dataclass(frozen=True)
class SearchConfig:
    """Search bounds.

    ``exact`` selects plans of length exactly ``horizon``; otherwise all
    lengths ``0..horizon`` are searched, shortest first.  ``closure`` enables
    an exhaustive belief-space fixpoint in the set-based modes, which can
    prove irreversibility there (off by default).
    """

    horizon: int = 1
    exact: bool = False
    max_plans: int = 10
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    max_states: int = 1 << 20
    closure: bool = False

    def __post_init__(self):
        if self.horizon < 0:
            raise ValueError("horizon must be >= 0")
        if self.max_plans < 1:
            raise ValueError("max_plans must be >= 1")

    def lengths(self) -> range:
        return range(self.horizon, self.horizon + 1) if self.exact else range(0, self.horizon + 1)


@dataclass(frozen=True)
class Note:
    code: str
    message: str

    def to_dict(self):
        return {"code": self.code, "message": self.message}


@dataclass(frozen=True)
class ReversibilityVerdict:
    action: str
    mode: str  # universal | phi | explicit | in-task
    horizon: int
    exact: bool
    status: Status
    witnesses: tuple = ()
    notes: tuple = ()
    phi: str | None = None

    @property
    def reversible(self) -> bool:
        return self.status is Status.REVERSIBLE

    @property
    def vacuous(self) -> bool:
        return any(n.code == "vacuous" for n in self.notes)

    def witness_names(self) -> list[tuple[str, ...]]:
        return [plan_names(p) for p in self.witnesses]

    def to_dict(self) -> dict:
        d = {
            "action": self.action,
            "mode": self.mode,
            "horizon": self.horizon,
            "exact": self.exact,
            "status": self.status.value,
            "witnesses": [list(w) for w in self.witness_names()],
            "notes": [n.to_dict() for n in self.notes],
        }
        if self.phi is not None:
            d["phi"] = self.phi
        return d


@dataclass(frozen=True)
class ReverseCheck:
    """Outcome of :func:`check_reverse_plan`; truthy iff the plan works."""

    ok: bool
    state: State | None = None
    kind: str | None = None  # "inapplicable" | "wrong-final-state"
    step: int | None = None
    final: State | None = None

    def __bool__(self):
        return self.ok


def _check_masks(a: Action, plan: Sequence[Action], masks: Iterable[int]):
    """First failure of ``plan`` reversing ``a`` over start masks, or None."""
    pre = a.pre_mask
    for m in masks:
        if pre & ~m:
            continue
        cur = (m & ~a.del_mask) | a.add_mask
        for i, b in enumerate(plan):
            if b.pre_mask & ~cur:
                return m, "inapplicable", i, None
            cur = (cur & ~b.del_mask) | b.add_mask
        if cur != m:
            return m, "wrong-final-state", None, cur
    return None


def check_reverse_plan(a: Action, plan: Sequence[Action], states: Iterable[State]) -> ReverseCheck:
    """Check the reverse-plan definition literally over ``states``.

    Vacuously true when ``a`` is applicable in none of them.
    """
    states = list(states)
    if not states:
        return ReverseCheck(True)
    u = states[0].universe
    fail = _check_masks(a, plan, (s.mask for s in states))
    if fail is None:
        return ReverseCheck(True)
    m, kind, step, final = fail
    return ReverseCheck(False, State(u, m), kind, step, None if final is None else State(u, final))


def relevant_facts(a: Action) -> frozenset:
    return a.pre


def obeys_relevance(a: Action, scope) -> bool:
    """True iff every fact ``a`` mentions lies in ``scope`` (names or a bitmask)."""
    mask = scope if isinstance(scope, int) else a.universe.mask(scope)
    return a.touched_mask & ~mask == 0


# -- search machinery ---------------------------------------------------------

class _PlanSearch:
    """Enumerate action sequences driving a belief (tuple of masks) to a goal.

    Plans come out in lexicographic order of action declaration index for each
    length.  Dead ``(belief, remaining)`` pairs are memoized, which is sound
    for both exact and up-to enumeration since the goal is fixed.
    """

    def __init__(self, steps: Sequence[Action], start: tuple, goal: tuple, limit: int):
        self.steps = list(steps)
        self._ops = [(b.pre_mask, ~b.del_mask, b.add_mask) for b in self.steps]
        self.start = start
        self.goal = goal
        self.limit = limit
        self.found: list[tuple[int, ...]] = []
        self.truncated = False
        self._dead: set = set()
        self._path: list[int] = []

    def run(self, lengths: Iterable[int]) -> list[Plan]:
        for length in lengths:
            if self.truncated:
                break
            self._dfs(self.start, length)
        return [tuple(self.steps[i] for i in p) for p in self.found]

    def _dfs(self, belief, k) -> bool:
        if k == 0:
            if belief == self.goal:
                self.found.append(tuple(self._path))
                if len(self.found) >= self.limit:
                    self.truncated = True
                return True
            return False
        key = (belief, k)
        if key in self._dead:
            return False
        hit = False
        for idx, (pre, keep, add) in enumerate(self._ops):
            ok = True
            for m in belief:
                if pre & ~m:
                    ok = False
                    break
            if not ok:
                continue
            nb = tuple((m & keep) | add for m in belief)
            self._path.append(idx)
            if self._dfs(nb, k - 1):
                hit = True
            self._path.pop()
            if self.truncated:
                return True
        if not hit:
            self._dead.add(key)
        return hit


def _shortest_distance(steps: Sequence[Action], start: tuple, goal: tuple,
                       max_nodes: int | None = None) -> int | None:
    """Breadth-first distance from ``start`` to ``goal`` over beliefs.

    Returns None when the goal is unreachable.  Raises
    :class:`EnumerationCapExceeded` if more than ``max_nodes`` beliefs are seen.
    """
    if start == goal:
        return 0
    ops = [(b.pre_mask, ~b.del_mask, b.add_mask) for b in steps]
    seen = {start}
    frontier = [start]
    dist = 0
    while frontier:
        dist += 1
        nxt = []
        for belief in frontier:
            for pre, keep, add in ops:
                if any(pre & ~m for m in belief):
                    continue
                nb = tuple((m & keep) | add for m in belief)
                if nb == goal:
                    return dist
                if nb not in seen:
                    seen.add(nb)
                    nxt.append(nb)
                    if max_nodes is not None and len(seen) > max_nodes:
                        raise EnumerationCapExceeded(max_nodes, len(seen), "beliefs")
        frontier = nxt
    return None


def _resolve(a, d: Domain) -> Action:
    return d.action(a) if isinstance(a, str) else a


def _finish(a, mode, cfg, search: _PlanSearch, plans, notes, status_if_none, phi=None):
    notes = list(notes)
    if search.truncated:
        notes.append(Note("truncated", f"stopped after {cfg.max_plans} reverse plans; more may exist"))
    status = Status.REVERSIBLE if plans else status_if_none
    return ReversibilityVerdict(a.name, mode, cfg.horizon, cfg.exact, status, tuple(plans),
                                tuple(notes), phi)


def _universal_core(a: Action, d: Domain, cfg: SearchConfig, mode="universal", phi=None):
    u = d.universe
    pre = a.pre_mask
    if not obeys_relevance(a, pre):
        outside = u.names_of(a.touched_mask & ~pre)
        note = Note("relevance", f"{a.name} touches facts outside its precondition: "
                                 f"{', '.join(outside)}")
        return ReversibilityVerdict(a.name, mode, cfg.horizon, cfg.exact, Status.IRREVERSIBLE,
                                    (), (note,), phi)
    steps = [b for b in d.actions if obeys_relevance(b, pre)]
    start = ((pre & ~a.del_mask) | a.add_mask,)
    goal = (pre,)
    search = _PlanSearch(steps, start, goal, cfg.max_plans)
    plans = search.run(cfg.lengths())
    if plans:
        return _finish(a, mode, cfg, search, plans, [], Status.REVERSIBLE, phi)
    shortest = _shortest_distance(steps, start, goal)
    if shortest is None:
        note = Note("unreachable", f"the state before {a.name} cannot be restored by any "
                                   f"action sequence over its precondition facts")
        return _finish(a, mode, cfg, search, plans, [note], Status.IRREVERSIBLE, phi)
    if cfg.exact:
        msg = f"no reverse plan of length exactly {cfg.horizon}; a shortest one has length {shortest}"
    else:
        msg = f"no reverse plan up to length {cfg.horizon}; a shortest one has length {shortest}"
    return _finish(a, mode, cfg, search, plans, [Note("other-length", msg)], Status.UNKNOWN, phi)


def decide_universal(a, d: Domain, cfg: SearchConfig = SearchConfig()) -> ReversibilityVerdict:
    """Universal uniform reversibility of ``a`` (over all of ``2^F``).

    Actions touching facts outside ``pre(a)`` are rejected outright.  The
    remaining search is exhaustive over subsets of ``pre(a)``, so a missing
    reverse plan is reported as irreversible when the pre-action state is
    unreachable, and as unknown only when a plan exists at some other length.
    """
    return _universal_core(_resolve(a, d), d, cfg)


_MODE_NAMES = {Universe: "universal", ByFormula: "phi", Explicit: "explicit", ReachableOf: "in-task"}


def decide_over_set(a, d: Domain, spec: StateSetSpec,
                    cfg: SearchConfig = SearchConfig()) -> ReversibilityVerdict:
    """Uniform S-reversibility over the states described by ``spec``.

    A single plan must work from every state of S where ``a`` is applicable;
    this is searched depth-first over belief states.  Without witnesses the
    answer is unknown, except when a formula or universe set contains every
    state where ``a`` is applicable (the universal criteria then apply) or
    ``cfg.closure`` proves the original belief unreachable.
    """
    a = _resolve(a, d)
    mode = _MODE_NAMES[type(spec)]
    phi = str(spec.phi) if isinstance(spec, ByFormula) else None
    states = enumerate_states(spec, d, cfg.enumeration_cap, cfg.max_states)
    goal = tuple(s.mask for s in states if not a.pre_mask & ~s.mask)
    if not goal:
        note = Note("vacuous", f"{a.name} is applicable in no state of the set")
        return ReversibilityVerdict(a.name, mode, cfg.horizon, cfg.exact, Status.REVERSIBLE,
                                    ((),), (note,), phi)
    start = tuple((m & ~a.del_mask) | a.add_mask for m in goal)
    search = _PlanSearch(d.actions, start, goal, cfg.max_plans)
    plans = search.run(cfg.lengths())
    if plans:
        return _finish(a, mode, cfg, search, plans, [], Status.REVERSIBLE, phi)

    free = len(d.facts) - bin(a.pre_mask).count("1")
    if mode in ("universal", "phi") and len(goal) == 1 << free:
        # S holds every state where a is applicable: same question as universal mode.
        # Explicit and in-task sets stay bounded unless closure is requested.
        v = _universal_core(a, d, cfg, mode, phi)
        if v.status is not Status.REVERSIBLE:
            return v
    notes = []
    if cfg.closure:
        dist = _shortest_distance(d.actions, start, goal, cfg.max_states)
        if dist is None:
            notes.append(Note("unreachable", "belief-space closure never restores all start states"))
            return _finish(a, mode, cfg, search, plans, notes, Status.IRREVERSIBLE, phi)
        notes.append(Note("other-length", f"a shortest uniform reverse plan has length {dist}"))
    else:
        bound = f"exactly {cfg.horizon}" if cfg.exact else f"up to {cfg.horizon}"
        notes.append(Note("incomplete", f"no uniform reverse plan of length {bound}; "
                                        "bounded search is not complete for this mode"))
    return _finish(a, mode, cfg, search, plans, notes, Status.UNKNOWN, phi)


def reachable_states(task: PlanningTask, cap: int = 1 << 20) -> frozenset:
    """All states reachable from ``task.init`` (breadth-first closure)."""
    u = task.domain.universe
    ops = [(b.pre_mask, ~b.del_mask, b.add_mask) for b in task.domain.actions]
    seen = {task.init.mask}
    if len(seen) > cap:
        raise EnumerationCapExceeded(cap, len(seen), "states")
    queue = deque(seen)
    while queue:
        m = queue.popleft()
        for pre, keep, add in ops:
            if pre & ~m:
                continue
            n = (m & keep) | add
            if n not in seen:
                seen.add(n)
                if len(seen) > cap:
                    raise EnumerationCapExceeded(cap, len(seen), "states")
                queue.append(n)
    return frozenset(State(u, m) for m in seen)


def decide_in_task(a, task: PlanningTask, cfg: SearchConfig = SearchConfig()) -> ReversibilityVerdict:
    return decide_over_set(a, task.domain, ReachableOf(task), cfg)


def brute_force_universal(a, d: Domain, cfg: SearchConfig = SearchConfig()) -> ReversibilityVerdict:
    """Reference oracle for :func:`decide_universal`.

    Tries every action sequence of the configured lengths against every state
    of ``2^F`` with :func:`check_reverse_plan`.  Irreversibility is established
    independently by exhausting the belief space over all applicable start
    states (no projection onto ``pre(a)``).  Limited to small fact sets.
    """
    a = _resolve(a, d)
    n = len(d.facts)
    if n > BRUTE_FORCE_MAX_FACTS:
        raise EnumerationCapExceeded(BRUTE_FORCE_MAX_FACTS, n)
    masks = range(1 << n)
    plans = []
    truncated = False
    for length in cfg.lengths():
        for plan in itertools.product(d.actions, repeat=length):
            if _check_masks(a, plan, masks) is None:
                plans.append(plan)
                if len(plans) >= cfg.max_plans:
                    truncated = True
                    break
        if truncated:
            break
    notes = []
    if truncated:
        notes.append(Note("truncated", f"stopped after {cfg.max_plans} reverse plans; more may exist"))
    if plans:
        status = Status.REVERSIBLE
    else:
        goal = tuple(m for m in masks if not a.pre_mask & ~m)
        start = tuple((m & ~a.del_mask) | a.add_mask for m in goal)
        dist = _shortest_distance(d.actions, start, goal)
        if dist is None:
            status = Status.IRREVERSIBLE
            notes.append(Note("unreachable", "belief-space closure never restores all start states"))
        else:
            status = Status.UNKNOWN
            notes.append(Note("other-length", f"a shortest reverse plan has length {dist}"))
    return ReversibilityVerdict(a.name, "universal", cfg.horizon, cfg.exact, status, tuple(plans),
                                tuple(notes))

"""Set-based STRIPS semantics written straight from the definitions.

Deliberately shares no code with the package: actions are plain
``(name, pre, add, delete)`` tuples of frozensets, states are frozensets.
Used to compute expected values for the tests.
"""

from itertools import chain, combinations, product


def powerset(facts):
    facts = list(facts)
    return [frozenset(c) for c in chain.from_iterable(combinations(facts, r) for r in range(len(facts) + 1))]


def run(plan, s):
    """Apply ``plan`` to ``s``; None if some step is inapplicable."""
    for _, pre, add, dele in plan:
        if not pre <= s:
            return None
        s = (s - dele) | add
    return s


def is_reverse_plan(a, plan, states):
    for s in states:
        if not a[1] <= s:
            continue
        after = run([a], s)
        if run(plan, after) != s:
            return False
    return True


def reverse_plans(a, actions, states, lengths):
    out = []
    for n in lengths:
        for plan in product(actions, repeat=n):
            if is_reverse_plan(a, plan, states):
                out.append(tuple(p[0] for p in plan))
    return out


def reachable(actions, init):
    seen = {frozenset(init)}
    todo = [frozenset(init)]
    while todo:
        s = todo.pop()
        for _, pre, add, dele in actions:
            if pre <= s:
                t = (s - dele) | add
                if t not in seen:
                    seen.add(t)
                    todo.append(t)
    return seen


def from_domain(d):
    """Convert a package Domain to naive tuples (reads only public fact sets)."""
    return [(a.name, frozenset(a.pre), frozenset(a.add), frozenset(a.delete)) for a in d.actions]


def shortest_uniform(a, actions, states):
    """Length of a shortest uniform reverse plan by BFS over beliefs.

    A belief is the tuple of current states, one per start state where ``a``
    applies.  Returns None if no belief reached restores every start state.
    """
    starts = tuple(s for s in states if a[1] <= s)
    if not starts:
        return 0
    belief = tuple(run([a], s) for s in starts)
    seen = {belief}
    frontier = [belief]
    dist = 0
    while frontier:
        if any(b == starts for b in frontier):
            return dist
        dist += 1
        nxt = []
        for b in frontier:
            for act in actions:
                nb = tuple(run([act], s) for s in b)
                if None in nb or nb in seen:
                    continue
                seen.add(nb)
                nxt.append(nb)
        frontier = nxt
    return None

"""Benchmark domains: the ``rev-i`` family and seeded random STRIPS domains."""

from __future__ import annotations

import random
from dataclasses import dataclass
from pathlib import Path

from .pddl import PddlSource, pretty_print
from .strips import Domain


@dataclass(frozen=True)
class RevSpec:
    """``rev-i`` has ``i`` facts ``f0..f(i-1)`` (the worked rev-2 example has f0, f1)."""

    i: int

    def __post_init__(self):
        if self.i < 1:
            raise ValueError(f"rev-i needs i >= 1, got {self.i}")


def rev_domain(i: int) -> Domain:
    """``rev-i``: ``del-all`` deletes every fact, ``add-fk`` rebuilds them in
    order (``add-fk`` needs ``f(k-1)``).  The unique shortest reverse plan of
    ``del-all`` has length ``i``."""
    RevSpec(i)
    facts = [f"f{k}" for k in range(i)]
    actions = [("del-all", facts, (), facts), ("add-f0", (), ("f0",), ())]
    actions += [(f"add-f{k}", (f"f{k - 1}",), (f"f{k}",), ()) for k in range(1, i)]
    return Domain(f"rev-{i}", facts, actions)


def gen_rev_domain(spec: RevSpec | int) -> PddlSource:
    i = spec.i if isinstance(spec, RevSpec) else spec
    return PddlSource(pretty_print(rev_domain(i)), f"rev-{i}.pddl")


def rev_reverse_plan(i: int) -> tuple[str, ...]:
    return tuple(f"add-f{k}" for k in range(i))


@dataclass(frozen=True)
class RandomSpec:
    n_facts: int
    n_actions: int
    seed: int = 0
    p: float = 0.5

    def __post_init__(self):
        if self.n_facts < 1 or self.n_actions < 1:
            raise ValueError("n_facts and n_actions must be positive")
        if not 0.0 <= self.p <= 1.0:
            raise ValueError("p must lie in [0, 1]")


def gen_random_domain(spec: RandomSpec) -> Domain:
    """Random well-formed domain, a pure function of ``spec``.

    Facts are ``f0..``, actions ``a0..``.  Membership of fact ``k`` in the
    pre/add/del sets of action ``j`` is drawn from a generator seeded by
    ``(seed, j, k)`` alone, so shrinking ``n_facts`` or ``n_actions`` keeps the
    surviving draws.  Collisions are repaired by removing the fact from add.
    """
    facts = [f"f{k}" for k in range(spec.n_facts)]
    actions = []
    for j in range(spec.n_actions):
        pre, add, dele = set(), set(), set()
        for k, f in enumerate(facts):
            rng = random.Random(f"{spec.seed}/{j}/{k}")
            if rng.random() < spec.p:
                pre.add(f)
            if rng.random() < spec.p:
                add.add(f)
            if rng.random() < spec.p:
                dele.add(f)
        add -= dele
        add -= pre
        actions.append((f"a{j}", sorted(pre), sorted(add), sorted(dele)))
    return Domain(f"random-{spec.n_facts}-{spec.n_actions}-{spec.seed}", facts, actions)


def write_domain(source: PddlSource, out_dir) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / Path(source.origin).name
    path.write_text(source.text, encoding="utf-8")
    return path

"""Shared generators and independent oracles for the test suite.

The oracles deliberately re-derive results from the raw definitions
(path enumeration, triple loops over worlds) rather than reusing the
library's sweeps, so that each check has two routes to the answer.
"""

from __future__ import annotations

import itertools
import random

from belieffusion import (
    Agent,
    Block,
    LayeredForm,
    Profile,
    Relation,
    Source,
    WorldUniverse,
    from_layers,
    relation,
)

LETTERS = "abcdefgh"


def small_universe(n: int) -> WorldUniverse:
    return WorldUniverse(tuple(LETTERS[:n]))


def all_relations(u: WorldUniverse):
    """Every relation over u (2^(n*n) of them)."""
    cells = [(x, y) for x in u.worlds for y in u.worlds]
    for mask in range(2 ** len(cells)):
        yield relation(u, (c for i, c in enumerate(cells) if mask >> i & 1))


def closure_oracle(pairs: frozenset, worlds) -> frozenset:
    """Reachability via >= 1 steps, by breadth-first search per world."""
    succ = {w: set() for w in worlds}
    for x, y in pairs:
        succ[x].add(y)
    out = set()
    for start in worlds:
        frontier = list(succ[start])
        seen = set()
        while frontier:
            w = frontier.pop()
            if w in seen:
                continue
            seen.add(w)
            frontier.extend(succ[w])
        out.update((start, w) for w in seen)
    return frozenset(out)


def modular_oracle(r: Relation) -> bool:
    ws = r.universe.worlds
    return all(
        (not r.has(x, y)) or r.has(x, z) or r.has(z, y)
        for x in ws
        for y in ws
        for z in ws
    )


def transitive_oracle(r: Relation) -> bool:
    ws = r.universe.worlds
    return all(
        (not (r.has(x, y) and r.has(y, z))) or r.has(x, z)
        for x in ws
        for y in ws
        for z in ws
    )


def choice_oracle(r: Relation, xs: frozenset) -> frozenset:
    def strictly_under(a, b):
        return r.has(a, b) and not r.has(b, a)

    return frozenset(x for x in xs if not any(strictly_under(y, x) for y in xs))


def nonempty_subsets(worlds):
    for k in range(1, len(worlds) + 1):
        for combo in itertools.combinations(worlds, k):
            yield frozenset(combo)


def random_layered(rng: random.Random, u: WorldUniverse) -> LayeredForm:
    ws = list(u.worlds)
    rng.shuffle(ws)
    k = rng.randint(1, len(ws))
    cuts = sorted(rng.sample(range(1, len(ws)), k - 1)) if k > 1 else []
    blocks = []
    start = 0
    for cut in cuts + [len(ws)]:
        blocks.append(Block(frozenset(ws[start:cut]), rng.random() < 0.5))
        start = cut
    return LayeredForm(u, tuple(blocks))


def random_state(rng: random.Random, u: WorldUniverse):
    return from_layers(random_layered(rng, u))


def random_profile(
    rng: random.Random,
    u: WorldUniverse,
    max_sources: int = 5,
    max_rank: int = 3,
    min_sources: int = 0,
    distinct_ranks: bool = False,
    equal_ranks: bool = False,
    prefix: str = "s",
) -> Profile:
    n = rng.randint(min_sources, max_sources)
    if distinct_ranks:
        ranks = rng.sample(range(max(n, max_rank + 1)), n)
    elif equal_ranks:
        ranks = [rng.randint(0, max_rank)] * n
    else:
        ranks = [rng.randint(0, max_rank) for _ in range(n)]
    sources = tuple(
        Source(f"{prefix}{i}", ranks[i], random_state(rng, u)) for i in range(n)
    )
    return Profile(u, sources)


def random_agents(rng: random.Random, u: WorldUniverse, count: int) -> list[Agent]:
    """Agents over a shared pool of sources (sources may be shared)."""
    pool = list(random_profile(rng, u, max_sources=6, min_sources=1).sources)
    agents = []
    for i in range(count):
        take = rng.sample(pool, rng.randint(0, len(pool)))
        agents.append(Agent(f"A{i}", Profile(u, tuple(take))))
    return agents

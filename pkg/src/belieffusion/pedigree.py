"""Pedigreed belief states and order-invariant multi-agent fusion.

Storing every informant source forever is wasteful; storing only the
aggregated relation loses too much (two agents with identical states can
require different fusion results depending on where their opinions came
from). The sweet spot is the refined relation with each pair labeled by
the highest rank of a source asserting it. Fusing such states is a pure
set computation, and fusing the per-agent states equals aggregating the
union of everyone's sources - which is what makes fusion idempotent,
commutative, and associative, and therefore safe to iterate in any order.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .aggregation import Profile, Source, agr_rf
from .relations import (
    Pair,
    Relation,
    UniverseMismatchError,
    WorldUniverse,
    relation,
    transitive_closure,
    union_all,
)
from .states import BeliefState

Entry = tuple[str, str, int]


@dataclass(frozen=True)
class PedigreedBeliefState:
    """A refined relation whose every pair carries a rank label.

    Entries are kept sorted by universe order, so equality (labels
    included) is plain value equality.
    """

    universe: WorldUniverse
    entries: tuple[Entry, ...]

    def __post_init__(self) -> None:
        for x, y, r in self.entries:
            self.universe.index(x)
            self.universe.index(y)
            if r < 0:
                raise ValueError("rank labels must be non-negative")
        pairs = [(x, y) for x, y, _ in self.entries]
        if len(set(pairs)) != len(pairs):
            raise ValueError("duplicate labeled pair")
        ordered = tuple(
            sorted(self.entries, key=lambda e: self.universe.pair_key((e[0], e[1])))
        )
        object.__setattr__(self, "entries", ordered)

    def label_map(self) -> dict[Pair, int]:
        return {(x, y): r for x, y, r in self.entries}

    def label(self, x: str, y: str) -> int | None:
        return self.label_map().get((x, y))

    def relation(self) -> Relation:
        return relation(self.universe, ((x, y) for x, y, _ in self.entries))


def empty_pedigree(u: WorldUniverse) -> PedigreedBeliefState:
    return PedigreedBeliefState(u, ())


def pedigree_from_sources(p: Profile) -> PedigreedBeliefState:
    """Refine the profile and label each surviving pair with the highest
    rank among the sources asserting it."""
    refined = agr_rf(p)
    entries = []
    for x, y in refined.pairs:
        entries.append((x, y, max(s.rank for s in p.sources if s.asserts(x, y))))
    return PedigreedBeliefState(p.universe, tuple(entries))


def induced_state(pbs: PedigreedBeliefState) -> BeliefState:
    """The belief state an agent acts on: closure of the labeled pairs."""
    return BeliefState.from_relation(transitive_closure(pbs.relation()))


def restrict(pbs: PedigreedBeliefState, rank: int) -> Relation:
    """Pairs labeled exactly ``rank``."""
    return relation(pbs.universe, ((x, y) for x, y, r in pbs.entries if r == rank))


def fuse(
    states: Sequence[PedigreedBeliefState], u: WorldUniverse | None = None
) -> PedigreedBeliefState:
    """Fuse pedigreed states as if aggregating the union of their sources.

    A pair survives iff no state holds an opinion on it, in either
    direction, at a strictly higher rank; its new label is the highest rank
    supporting it. ``u`` is only needed for an empty argument list, where
    the identity element (the empty pedigree) is returned.
    """
    if not states:
        if u is None:
            raise ValueError("fusing no states needs an explicit universe")
        return empty_pedigree(u)
    base = states[0].universe
    if u is not None and u != base:
        raise UniverseMismatchError("explicit universe differs from the states'")
    for s in states:
        if s.universe != base:
            raise UniverseMismatchError("pedigreed states span different universes")

    best: dict[Pair, int] = {}
    for s in states:
        for x, y, r in s.entries:
            if best.get((x, y), -1) < r:
                best[(x, y)] = r
    entries = tuple(
        (x, y, r) for (x, y), r in best.items() if r >= best.get((y, x), -1)
    )
    return PedigreedBeliefState(base, entries)


def fuse_equal_rank(states: Sequence[BeliefState]) -> BeliefState:
    """Shortcut when every underlying source shares one rank: the fused
    induced state is just the closure of the union of induced states."""
    if not states:
        raise ValueError("need at least one state")
    merged = union_all([s.relation for s in states], states[0].universe)
    return BeliefState.from_relation(transitive_closure(merged))


@dataclass(frozen=True)
class Agent:
    """An agent identified with its informant profile."""

    id: str
    informants: Profile

    def pedigree(self) -> PedigreedBeliefState:
        return pedigree_from_sources(self.informants)

    def induced(self) -> BeliefState:
        return induced_state(self.pedigree())


def union_profile(agents: Sequence[Agent]) -> Profile:
    """The combined informant profile of several agents.

    Shared sources (same id) must agree exactly; the union keeps one copy.
    """
    if not agents:
        raise ValueError("need at least one agent")
    u = agents[0].informants.universe
    seen: dict[str, Source] = {}
    for a in agents:
        if a.informants.universe != u:
            raise UniverseMismatchError("agents span different universes")
        for s in a.informants.sources:
            if s.id in seen and seen[s.id] != s:
                raise ValueError(f"source {s.id!r} differs between agents")
            seen.setdefault(s.id, s)
    return Profile(u, tuple(seen.values()))

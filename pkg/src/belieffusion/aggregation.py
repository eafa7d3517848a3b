"""Aggregating ranked sources into a single belief state.

A source is a named belief state with an integer credibility rank (larger
is more credible). Four operators are provided:

* ``un``       - union of all opinions (modular, possibly intransitive)
* ``agr_un``   - transitive closure of the union; right when all sources
                 are equally credible
* ``agr_rf``   - refinement: keep an opinion iff every strictly more
                 credible source is agnostic about the pair; right when
                 ranks are strictly ordered
* ``agr``      - closure of the refinement; the general-purpose operator
* ``agr_star`` - per-rank closure first, then refinement across ranks.
                 Kept for comparison only: closing each rank before
                 refining lets overridden opinions leak into the result,
                 and the per-pair rank labels it yields are too weak to
                 support multi-agent fusion (see pedigree module tests).
"""

from __future__ import annotations

from dataclasses import dataclass

from .relations import (
    Relation,
    UniverseMismatchError,
    WorldUniverse,
    relation,
    transitive_closure,
    union_all,
)
from .states import BeliefState


@dataclass(frozen=True)
class Source:
    """A named, ranked informant. Ranks are non-negative integers."""

    id: str
    rank: int
    state: BeliefState

    def __post_init__(self) -> None:
        if self.rank < 0:
            raise ValueError(f"source {self.id!r}: rank must be non-negative")

    def asserts(self, x: str, y: str) -> bool:
        return self.state.relation.has(x, y)

    def agnostic(self, x: str, y: str) -> bool:
        return not self.asserts(x, y) and not self.asserts(y, x)


@dataclass(frozen=True)
class Profile:
    """A finite set of sources over one universe.

    The induced credibility ordering (s at least as credible as s' iff
    rank(s) >= rank(s')) is a total pre-order by construction. Profiles may
    be empty; every aggregation operator maps the empty profile to the
    empty state.
    """

    universe: WorldUniverse
    sources: tuple[Source, ...]

    def __post_init__(self) -> None:
        ids = [s.id for s in self.sources]
        if len(set(ids)) != len(ids):
            raise ValueError("source ids must be unique within a profile")
        for s in self.sources:
            if s.state.universe != self.universe:
                raise UniverseMismatchError(
                    f"source {s.id!r} is over a different universe"
                )

    def __iter__(self):
        return iter(self.sources)

    def __len__(self) -> int:
        return len(self.sources)

    def ranks(self) -> tuple[int, ...]:
        """Ranks represented in the profile, ascending."""
        return tuple(sorted({s.rank for s in self.sources}))

    def subset(self, ids: list[str]) -> "Profile":
        by_id = {s.id: s for s in self.sources}
        missing = [i for i in ids if i not in by_id]
        if missing:
            raise KeyError(f"unknown source id(s): {', '.join(missing)}")
        return Profile(self.universe, tuple(by_id[i] for i in ids))


def un(p: Profile) -> Relation:
    """Union of all source opinions; modular but not always transitive."""
    return union_all([s.state.relation for s in p.sources], p.universe)


def agr_un(p: Profile) -> BeliefState:
    """Equal-credibility aggregation: transitive closure of the union."""
    return BeliefState.from_relation(transitive_closure(un(p)))


def agr_rf(p: Profile) -> Relation:
    """Refinement: (x, y) survives iff some source asserts it and every
    strictly more credible source is agnostic about {x, y}.

    Always modular; transitive (hence a belief state) whenever the ranks
    are strictly ordered.
    """
    pairs = set()
    for s in p.sources:
        higher = [t for t in p.sources if t.rank > s.rank]
        for x, y in s.state.relation.pairs:
            if all(t.agnostic(x, y) for t in higher):
                pairs.add((x, y))
    return relation(p.universe, pairs)


def agr(p: Profile) -> BeliefState:
    """Rank-based aggregation: transitive closure of the refinement.

    Coincides with agr_un when all ranks are equal and with agr_rf when
    ranks are strictly ordered.
    """
    return BeliefState.from_relation(transitive_closure(agr_rf(p)))


def agr_star(p: Profile) -> BeliefState:
    """Close each rank's union first, then refine across ranks."""
    per_rank: dict[int, Relation] = {}
    for r in p.ranks():
        members = [s.state.relation for s in p.sources if s.rank == r]
        per_rank[r] = transitive_closure(union_all(members, p.universe))

    def rank_agnostic(r: int, x: str, y: str) -> bool:
        rel = per_rank[r]
        return not rel.has(x, y) and not rel.has(y, x)

    pairs = set()
    for r, rel in per_rank.items():
        higher = [r2 for r2 in per_rank if r2 > r]
        for x, y in rel.pairs:
            if all(rank_agnostic(r2, x, y) for r2 in higher):
                pairs.add((x, y))
    return BeliefState.from_relation(relation(p.universe, pairs))

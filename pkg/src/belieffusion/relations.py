"""Finite binary relations over a fixed world set.

Everything downstream (belief states, aggregation, fusion) is built on
ordered pairs over a small finite universe, so relations are kept as plain
pair sets and every predicate is a direct quantifier sweep. World sets here
are small by design; clarity and exhaustive-test speed beat asymptotics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

Pair = tuple[str, str]


class UniverseMismatchError(ValueError):
    """Raised when relations over different universes are combined."""


class UnknownWorldError(ValueError):
    """Raised when a world identifier is not part of the universe."""


class EmptySubsetError(ValueError):
    """Raised when a choice set is requested for the empty subset."""


@dataclass(frozen=True)
class WorldUniverse:
    """An ordered, non-empty set of distinct world identifiers.

    Iteration order is declaration order and is stable; it keys every
    deterministic ordering in the package (printing, DOT export, wire
    formats).
    """

    worlds: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.worlds:
            raise ValueError("universe must contain at least one world")
        if len(set(self.worlds)) != len(self.worlds):
            raise ValueError("world identifiers must be unique")
        object.__setattr__(self, "worlds", tuple(self.worlds))
        object.__setattr__(self, "_index", {w: i for i, w in enumerate(self.worlds)})

    def __contains__(self, world: str) -> bool:
        return world in self._index

    def __iter__(self):
        return iter(self.worlds)

    def __len__(self) -> int:
        return len(self.worlds)

    def index(self, world: str) -> int:
        try:
            return self._index[world]
        except KeyError:
            raise UnknownWorldError(f"unknown world {world!r}") from None

    def pair_key(self, pair: Pair) -> tuple[int, int]:
        """Sort key for pairs: universe declaration order, row-major."""
        return (self.index(pair[0]), self.index(pair[1]))


def universe(*worlds: str) -> WorldUniverse:
    return WorldUniverse(tuple(worlds))


@dataclass(frozen=True)
class Relation:
    """A set of ordered world pairs over a shared universe.

    Semantically a |W| x |W| boolean membership matrix; stored as a
    frozenset of (row, column) pairs.
    """

    universe: WorldUniverse
    pairs: frozenset[Pair]

    def __post_init__(self) -> None:
        object.__setattr__(self, "pairs", frozenset(self.pairs))
        for x, y in self.pairs:
            if x not in self.universe or y not in self.universe:
                raise UnknownWorldError(f"pair ({x!r}, {y!r}) is not over the universe")

    def __contains__(self, pair: Pair) -> bool:
        return pair in self.pairs

    def has(self, x: str, y: str) -> bool:
        return (x, y) in self.pairs

    def sorted_pairs(self) -> list[Pair]:
        return sorted(self.pairs, key=self.universe.pair_key)

    def replace_pairs(self, pairs: Iterable[Pair]) -> "Relation":
        return Relation(self.universe, frozenset(pairs))


def relation(u: WorldUniverse, pairs: Iterable[Pair] = ()) -> Relation:
    return Relation(u, frozenset(pairs))


@dataclass(frozen=True)
class PropertyFlags:
    reflexive: bool
    irreflexive: bool
    symmetric: bool
    asymmetric: bool
    antisymmetric: bool
    total: bool
    modular: bool
    transitive: bool
    quasi_transitive: bool
    acyclic: bool


def classify_properties(r: Relation) -> PropertyFlags:
    """Evaluate the standard relation properties by direct sweeps.

    Quasi-transitivity and acyclicity are evaluated on the strict version
    of ``r``; acyclicity means the strict version has no directed cycle.
    """
    ws = r.universe.worlds
    has = r.has
    strict = strict_version(r)
    strict_reach = transitive_closure(strict)
    return PropertyFlags(
        reflexive=all(has(x, x) for x in ws),
        irreflexive=not any(has(x, x) for x in ws),
        symmetric=all(has(y, x) for (x, y) in r.pairs),
        asymmetric=not any(has(y, x) for (x, y) in r.pairs),
        antisymmetric=all(x == y for (x, y) in r.pairs if has(y, x)),
        total=all(has(x, y) or has(y, x) for x in ws for y in ws),
        modular=_is_modular(r),
        transitive=_is_transitive(r),
        quasi_transitive=_is_transitive(strict),
        acyclic=not any(strict_reach.has(x, x) for x in ws),
    )


def _is_modular(r: Relation) -> bool:
    has = r.has
    return all(
        has(x, z) or has(z, y) for (x, y) in r.pairs for z in r.universe.worlds
    )


def _is_transitive(r: Relation) -> bool:
    has = r.has
    return all(has(x, z) for (x, y) in r.pairs for (y2, z) in r.pairs if y == y2)


def modularity_witness(r: Relation) -> tuple[str, str, str] | None:
    """A triple (x, y, z) with x r y but neither x r z nor z r y, if any."""
    for x, y in sorted(r.pairs, key=r.universe.pair_key):
        for z in r.universe.worlds:
            if not r.has(x, z) and not r.has(z, y):
                return (x, y, z)
    return None


def transitivity_witness(r: Relation) -> tuple[str, str, str] | None:
    """A triple (x, y, z) with x r y and y r z but not x r z, if any."""
    for x, y in sorted(r.pairs, key=r.universe.pair_key):
        for y2, z in sorted(r.pairs, key=r.universe.pair_key):
            if y == y2 and not r.has(x, z):
                return (x, y, z)
    return None


def strict_version(r: Relation) -> Relation:
    """Keep (x, y) iff the reverse pair is absent (the asymmetric part)."""
    return r.replace_pairs((x, y) for (x, y) in r.pairs if not r.has(y, x))


def transitive_closure(r: Relation) -> Relation:
    """Smallest transitive superset of ``r`` (paths of length >= 1)."""
    n = len(r.universe)
    idx = r.universe.index
    reach = [[False] * n for _ in range(n)]
    for x, y in r.pairs:
        reach[idx(x)][idx(y)] = True
    for k in range(n):
        row_k = reach[k]
        for i in range(n):
            if reach[i][k]:
                row_i = reach[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    ws = r.universe.worlds
    return r.replace_pairs(
        (ws[i], ws[j]) for i in range(n) for j in range(n) if reach[i][j]
    )


def choice_set(r: Relation, x_set: Iterable[str]) -> frozenset[str]:
    """Elements of ``x_set`` not strictly dominated by any other element.

    Domination is judged by the strict version of ``r``. The subset must be
    non-empty; the result is non-empty exactly when ``r`` is acyclic.
    """
    xs = frozenset(x_set)
    if not xs:
        raise EmptySubsetError("choice set of the empty subset is undefined")
    for x in xs:
        if x not in r.universe:
            raise UnknownWorldError(f"unknown world {x!r}")
    strict = strict_version(r)
    return frozenset(x for x in xs if not any(strict.has(y, x) for y in xs))


def in_conflict(r: Relation, x: str, y: str) -> bool:
    """True iff x reaches y and y reaches x via chains of length >= 1.

    A self-loop (x, x) therefore puts x in conflict with itself. For a
    transitive relation this degenerates to both (x, y) and (y, x) being
    members.
    """
    r.universe.index(x)
    r.universe.index(y)
    reach = transitive_closure(r)
    return reach.has(x, y) and reach.has(y, x)


def union_all(rs: Sequence[Relation], u: WorldUniverse | None = None) -> Relation:
    """Pairwise union of relations sharing one universe.

    ``u`` is required only when ``rs`` is empty (the result is then the
    empty relation over ``u``).
    """
    if not rs:
        if u is None:
            raise ValueError("union of no relations needs an explicit universe")
        return relation(u)
    base = rs[0].universe
    if u is not None and u != base:
        raise UniverseMismatchError("explicit universe differs from the relations'")
    pairs: set[Pair] = set()
    for r in rs:
        if r.universe != base:
            raise UniverseMismatchError("relations span different universes")
        pairs |= r.pairs
    return relation(base, pairs)

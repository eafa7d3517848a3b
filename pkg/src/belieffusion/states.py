"""Generalized belief states: modular, transitive relations over worlds.

A belief state reads ``x < y`` as "there is reason to consider x strictly
more likely than y". Because the relation need not be total, the same
structure distinguishes agnosticism (neither direction present) from
conflict (both present). Modularity plus transitivity is exactly what makes
both strict likelihood and agnosticism transitive, and yields the layered
normal form: an ordered partition of the worlds into blocks that are each
fully connected (conflicted) or fully disconnected (agnostic).
"""

from __future__ import annotations

from dataclasses import dataclass

from .formulas import Formula, PropUniverse, models
from .relations import (
    Relation,
    WorldUniverse,
    choice_set,
    classify_properties,
    modularity_witness,
    relation,
    strict_version,
    transitivity_witness,
)


class NotModularError(ValueError):
    def __init__(self, witness: tuple[str, str, str], subject: str | None = None):
        x, y, z = witness
        who = f"{subject}: " if subject else ""
        super().__init__(
            f"{who}not modular: {x} < {y} holds but neither {x} < {z} nor {z} < {y}"
        )
        self.witness = witness
        self.subject = subject


class NotTransitiveError(ValueError):
    def __init__(self, witness: tuple[str, str, str], subject: str | None = None):
        x, y, z = witness
        who = f"{subject}: " if subject else ""
        super().__init__(
            f"{who}not transitive: {x} < {y} and {y} < {z} hold but not {x} < {z}"
        )
        self.witness = witness
        self.subject = subject


class VacuousConditionError(ValueError):
    """The condition of a conditional query has no satisfying world."""


@dataclass(frozen=True)
class BeliefState:
    """A validated modular, transitive relation."""

    relation: Relation

    @classmethod
    def from_relation(cls, r: Relation, subject: str | None = None) -> "BeliefState":
        w = modularity_witness(r)
        if w is not None:
            raise NotModularError(w, subject)
        w = transitivity_witness(r)
        if w is not None:
            raise NotTransitiveError(w, subject)
        return cls(r)

    @property
    def universe(self) -> WorldUniverse:
        return self.relation.universe


def from_relation(r: Relation, subject: str | None = None) -> BeliefState:
    return BeliefState.from_relation(r, subject)


def agnosticism(b: BeliefState | Relation) -> Relation:
    """Pairs related in neither direction.

    Defined for any relation; symmetric always, and transitive exactly
    when a transitive input is also modular (i.e. for belief states).
    """
    r = b.relation if isinstance(b, BeliefState) else b
    ws = r.universe.worlds
    return relation(
        r.universe,
        ((x, y) for x in ws for y in ws if not r.has(x, y) and not r.has(y, x)),
    )


def conflict(b: BeliefState | Relation) -> Relation:
    """Pairs related in both directions; on transitive relations this
    coincides with cycle-based conflict."""
    r = b.relation if isinstance(b, BeliefState) else b
    return relation(r.universe, ((x, y) for (x, y) in r.pairs if r.has(y, x)))


@dataclass(frozen=True)
class Block:
    worlds: frozenset[str]
    connected: bool


@dataclass(frozen=True)
class LayeredForm:
    """Ordered partition of the universe; index 0 is most likely."""

    universe: WorldUniverse
    blocks: tuple[Block, ...]


def to_layers(b: BeliefState) -> LayeredForm:
    """Decompose a belief state into its layered normal form.

    Blocks are the classes of "x and y look the same from every world":
    x == y iff for every z, (x < z iff y < z) and (z < x iff z < y). The
    class containing the most likely worlds comes first. The decomposition
    is unique and round-trips through from_layers.
    """
    r = b.relation
    ws = r.universe.worlds

    def signature(x: str) -> tuple[tuple[bool, bool], ...]:
        return tuple((r.has(x, z), r.has(z, x)) for z in ws)

    classes: dict[tuple, list[str]] = {}
    for w in ws:
        classes.setdefault(signature(w), []).append(w)

    members = list(classes.values())

    # Block order is forced: distinct classes are strictly comparable, so
    # a class's position is the number of classes strictly before it.
    def position(grp: list[str]) -> int:
        return sum(1 for other in members if other is not grp and r.has(other[0], grp[0]))

    members = sorted(members, key=position)
    blocks = tuple(
        Block(frozenset(grp), all(r.has(x, y) for x in grp for y in grp))
        for grp in members
    )
    return LayeredForm(r.universe, blocks)


def from_layers(layered: LayeredForm) -> BeliefState:
    """Rebuild the belief state from an ordered block partition."""
    u = layered.universe
    seen: set[str] = set()
    for block in layered.blocks:
        if not block.worlds:
            raise ValueError("blocks must be non-empty")
        overlap = seen & block.worlds
        if overlap:
            raise ValueError(f"world(s) in more than one block: {sorted(overlap)}")
        seen |= block.worlds
    missing = set(u.worlds) - seen
    if missing:
        raise ValueError(f"world(s) missing from the partition: {sorted(missing)}")
    pairs = []
    for i, bi in enumerate(layered.blocks):
        for j, bj in enumerate(layered.blocks):
            if i < j:
                pairs.extend((x, y) for x in bi.worlds for y in bj.worlds)
            elif i == j and bi.connected:
                pairs.extend((x, y) for x in bi.worlds for y in bj.worlds)
    return BeliefState(relation(u, pairs))


@dataclass(frozen=True)
class ClassFlags:
    """Membership in the classical relation classes.

    ``in_q_strict`` is decided by exhaustive search over total
    quasi-transitive relations and is therefore only computed for universes
    of at most three worlds; it is None above that size.
    """

    in_b: bool
    in_t: bool
    in_t_strict: bool
    in_q: bool
    in_q_strict: bool | None


def classify_class(r: Relation) -> ClassFlags:
    flags = classify_properties(r)
    in_b = flags.modular and flags.transitive
    in_t = flags.total and flags.transitive
    in_q = flags.total and flags.quasi_transitive
    in_q_strict: bool | None
    if len(r.universe) <= 3:
        in_q_strict = any(
            strict_version(q) == r for q in _total_quasi_transitive(r.universe)
        )
    else:
        in_q_strict = None
    return ClassFlags(
        in_b=in_b,
        in_t=in_t,
        in_t_strict=in_b and flags.irreflexive,
        in_q=in_q,
        in_q_strict=in_q_strict,
    )


def _total_quasi_transitive(u: WorldUniverse):
    cells = [(x, y) for x in u.worlds for y in u.worlds]
    for mask in range(2 ** len(cells)):
        pairs = frozenset(c for i, c in enumerate(cells) if mask >> i & 1)
        q = Relation(u, pairs)
        f = classify_properties(q)
        if f.total and f.quasi_transitive:
            yield q


@dataclass(frozen=True)
class ConditionalStatus:
    """Outcome of a conditional query "if p, then q?".

    ``bel``/``disbel`` report homogeneous choice sets; ``agn`` a fully
    disconnected choice set mixed on q; ``con`` a fully connected one. The
    flags are reported independently: a conflicted choice set can still be
    homogeneous on q, so ``con`` and ``bel`` may co-hold.
    """

    bel: bool
    disbel: bool
    agn: bool
    con: bool
    choice: frozenset[str]


def evaluate_conditional(
    b: BeliefState, p: Formula, q: Formula, pu: PropUniverse
) -> ConditionalStatus:
    if pu.universe != b.universe:
        raise ValueError("belief state and universe do not match")
    p_worlds = models(pu, p)
    if not p_worlds:
        raise VacuousConditionError("condition has no satisfying world")
    q_worlds = models(pu, q)
    chosen = choice_set(b.relation, p_worlds)
    r = b.relation
    fully_connected = all(r.has(x, y) for x in chosen for y in chosen)
    fully_disconnected = not any(r.has(x, y) for x in chosen for y in chosen)
    hits = chosen & q_worlds
    return ConditionalStatus(
        bel=hits == chosen,
        disbel=not hits,
        agn=fully_disconnected and bool(hits) and hits != chosen,
        con=fully_connected,
        choice=chosen,
    )

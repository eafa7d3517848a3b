import pathlib
import random

import pytest

from belieffusion import (
    NotModularError,
    ParseError,
    PedigreedBeliefState,
    agr,
    export_dot,
    format_scenario,
    parse_pedigree,
    parse_scenario,
    serialize_pedigree,
    to_layers,
    universe,
)
from belieffusion.states import Block, LayeredForm
from helpers import random_layered, random_profile, small_universe

MINIMAL = """\
worlds a b c
source s0 rank 1
  layers [a c] > [b]
agent A1 = s0
"""

EXAMPLE4 = """\
# the three-source profile with one higher-ranked source
worlds a b c
source s0 rank 1
  pairs b < a, b < c
source s1 rank 1
  pairs a < b, c < b
source s2 rank 2
  pairs a < b, c < b
agent A1p = s0 s2
agent A2p = s1 s2
"""


def test_parse_minimal_scenario():
    s = parse_scenario(MINIMAL)
    assert s.universe.worlds == ("a", "b", "c")
    assert len(s.profile) == 1
    assert s.profile.sources[0].state.relation.pairs == {("a", "b"), ("c", "b")}
    assert [a.id for a in s.agents] == ["A1"]


def test_parse_rejects_non_modular_pairs_source():
    text = "worlds a b c\nsource bad rank 1\n  pairs a < b\n"
    with pytest.raises(NotModularError) as exc:
        parse_scenario(text)
    assert exc.value.subject == "bad"
    assert "bad" in str(exc.value)


def test_parse_example4_and_aggregate():
    s = parse_scenario(EXAMPLE4)
    assert agr(s.profile).relation.pairs == {("a", "b"), ("c", "b")}


def test_parse_vars_and_aliases():
    text = """\
vars F D
world ok = F D
world crashed = !F D
source st rank 2
  layers [crashed] > [F.!D !F.!D] > [ok]
agent A = st
"""
    s = parse_scenario(text)
    assert s.universe.worlds == ("ok", "F.!D", "crashed", "!F.!D")
    assert s.prop.valuation("crashed") == {"F": False, "D": True}
    st_rel = s.profile.sources[0].state.relation
    assert st_rel.has("crashed", "ok")


@pytest.mark.parametrize(
    "text, fragment",
    [
        ("", "no universe"),
        ("worlds a a\n", "unique"),
        ("worlds a\nworlds b\n", "already declared"),
        ("vars F\nvars D\n", "already declared"),
        ("worlds a b\nsource s rank -1\n", "negative rank"),
        ("worlds a b\nsource s rank x\n", "non-negative integer"),
        ("worlds a b\nsource s rank 1\nsource s rank 2\n", "duplicate source"),
        ("worlds a b\nsource s rank 1\n  pairs a < z\n", "unknown world"),
        ("worlds a b\nsource s rank 1\n  layers [a] > [a b]\n", "more than one layer"),
        ("worlds a b\nsource s rank 1\n  layers [a]\n", "missing b"),
        ("worlds a b\nsource s rank 1\n  layers []\n", "empty layer"),
        ("worlds a b\npairs a < b\n", "indented"),
        ("worlds a b\nsource s rank 1\n  layers [a] > [b]\n  pairs a < b\n", "already has"),
        ("worlds a b\nsource s rank 1\n  pairs a < b\n  layers [a] > [b]\n", "mixes"),
        ("worlds a b\nagent A = ghost\n", "unknown source"),
        ("worlds a b\nagent A =\nagent A =\n", "duplicate agent"),
        ("worlds a b\nsource s rank 1\nagent A = s s\n", "twice"),
        ("worlds a b\nworld w = F\n", "'vars'"),
        ("vars F\nsource s rank 0\nworld w = F\n", "precede sources"),
        ("vars F\nworld w = G\n", "unknown variable"),
        ("vars F D\nworld w = F\n", "missing D"),
        ("vars F\nworld w = F\nworld w2 = F\n", "already renamed"),
        ("worlds a b\nbogus\n", "unknown declaration"),
        ("worlds a b\nsource s rank 1 extra\n", "trailing"),
    ],
)
def test_parse_errors(text, fragment):
    with pytest.raises(ParseError) as exc:
        parse_scenario(text)
    assert fragment in str(exc.value)
    assert exc.value.line >= 1 and exc.value.column >= 1


def test_parse_error_position_is_exact():
    with pytest.raises(ParseError) as exc:
        parse_scenario("worlds a b\nsource s rank 1\n  pairs a < zz\n")
    assert exc.value.line == 3
    assert exc.value.column == 13
    assert exc.value.token == "zz"


def test_format_scenario_round_trip_value_and_bytes():
    for text in (MINIMAL, EXAMPLE4):
        s = parse_scenario(text)
        printed = format_scenario(s)
        again = parse_scenario(printed)
        assert again == s
        assert format_scenario(again) == printed


def test_format_scenario_round_trip_randomized():
    rng = random.Random(31)
    for _ in range(30):
        u = small_universe(rng.randint(1, 5))
        profile = random_profile(rng, u, max_sources=4)
        agents = []
        for i in range(rng.randint(0, 3)):
            ids = [s.id for s in profile.sources if rng.random() < 0.5]
            agents.append((f"A{i}", ids))
        lines = ["worlds " + " ".join(u.worlds)]
        for src in profile.sources:
            lines.append(f"source {src.id} rank {src.rank}")
            pairs = src.state.relation.sorted_pairs()
            if pairs:
                lines.append("  pairs " + ", ".join(f"{x} < {y}" for x, y in pairs))
        for aid, ids in agents:
            lines.append(f"agent {aid} = " + " ".join(ids))
        s = parse_scenario("\n".join(lines) + "\n")
        assert parse_scenario(format_scenario(s)) == s


def test_pedigree_wire_format():
    u = universe("a", "b", "c")
    pbs = PedigreedBeliefState(u, (("c", "b", 2), ("a", "b", 2)))
    assert serialize_pedigree(pbs) == "pedigree\na < b @ 2\nc < b @ 2\n"
    assert serialize_pedigree(PedigreedBeliefState(u, ())) == "pedigree\n"
    assert parse_pedigree("pedigree\na < b @ 2\nc < b @ 2\n", u) == pbs


def test_pedigree_round_trip_randomized():
    rng = random.Random(32)
    for _ in range(50):
        u = small_universe(rng.randint(1, 6))
        entries = []
        for x in u.worlds:
            for y in u.worlds:
                if rng.random() < 0.3:
                    entries.append((x, y, rng.randint(0, 5)))
        pbs = PedigreedBeliefState(u, tuple(entries))
        assert parse_pedigree(serialize_pedigree(pbs), u) == pbs


def test_pedigree_parse_errors():
    u = universe("a", "b")
    for text in (
        "",
        "a < b @ 1\n",
        "pedigree\na < z @ 1\n",
        "pedigree\na < b @ x\n",
        "pedigree\na < b\n",
        "pedigree\na < b @ 1\na < b @ 2\n",
    ):
        with pytest.raises(ParseError):
            parse_pedigree(text, u)


def test_export_dot_layered():
    u = universe("a", "b", "c")
    lf = LayeredForm(
        u, (Block(frozenset({"a", "c"}), False), Block(frozenset({"b"}), False))
    )
    assert export_dot(lf) == (
        "digraph belief_state {\n"
        '  n0 [label="a,c"];\n'
        '  n1 [label="b"];\n'
        "  n0 -> n1;\n"
        "}\n"
    )
    connected = LayeredForm(universe("a", "b"), (Block(frozenset({"a", "b"}), True),))
    assert export_dot(connected) == (
        "digraph belief_state {\n"
        '  n0 [label="a,b"];\n'
        "  n0 -> n0;\n"
        "}\n"
    )
    lonely = LayeredForm(universe("a"), (Block(frozenset({"a"}), False),))
    assert export_dot(lonely) == (
        "digraph belief_state {\n"
        '  n0 [label="a"];\n'
        "}\n"
    )


def test_export_dot_pedigree_labels_edges():
    u = universe("a", "b", "c")
    pbs = PedigreedBeliefState(u, (("a", "b", 2), ("c", "b", 1)))
    out = export_dot(pbs)
    assert 'n0 [label="a,c"];' in out
    assert 'n0 -> n1 [label="1,2"];' in out


def test_fuzz_smoke_parsers_raise_structured_errors():
    rng = random.Random(33)
    u = universe("a", "b")
    for _ in range(500):
        blob = bytes(rng.randrange(256) for _ in range(rng.randrange(0, 60)))
        text = blob.decode("utf-8", errors="replace")
        for parser in (parse_scenario, lambda t: parse_pedigree(t, u)):
            try:
                parser(text)
            except (ParseError, NotModularError):
                pass


def test_shipped_sample_scenarios_parse_and_round_trip():
    scenarios_dir = pathlib.Path(__file__).parent.parent / "scenarios"
    paths = sorted(scenarios_dir.glob("*.scn"))
    assert len(paths) >= 2
    for path in paths:
        s = parse_scenario(path.read_text())
        assert s.profile.sources and s.agents
        assert parse_scenario(format_scenario(s)) == s


def test_telemetry_scenario_semantics():
    scenarios_dir = pathlib.Path(__file__).parent.parent / "scenarios"
    s = parse_scenario((scenarios_dir / "telemetry.scn").read_text())
    assert s.universe.worlds == ("nominal", "F.!D", "!F.D", "!F.!D")
    merged = agr(s.profile).relation
    # both failure worlds beat both healthy-link worlds; the two rank-1
    # holdouts disagree about "nominal", leaving a recorded conflict
    assert merged.has("!F.!D", "nominal") and merged.has("!F.D", "F.!D")
    assert merged.has("nominal", "F.!D") and merged.has("F.!D", "nominal")


def test_layers_round_trip_through_scenario_text():
    rng = random.Random(34)
    from belieffusion import format_layers, from_layers

    for _ in range(40):
        u = small_universe(rng.randint(1, 5))
        layered = random_layered(rng, u)
        text = (
            "worlds " + " ".join(u.worlds) + "\n"
            "source s rank 0\n"
            "  layers " + format_layers(layered) + "\n"
        )
        parsed = parse_scenario(text)
        assert parsed.profile.sources[0].state == from_layers(layered)
        assert to_layers(parsed.profile.sources[0].state) == layered

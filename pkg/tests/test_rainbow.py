import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from cylgames.atom_structure import check_ca_axioms
from cylgames.rainbow import (
    ALL_SHADE,
    ColouredGraph,
    MINIMAL_PARAMS,
    RainbowAtom,
    RainbowParams,
    atom_from_graph,
    build_rainbow_atom_structure,
    check_J_membership,
    colour_from_json,
    colour_to_json,
    find_cones,
    forbidden_triple,
    shade_set,
)

DEFAULTS = RainbowParams()


def wf(*pairs):
    return ("wf", tuple(sorted(pairs)))


# ----------------------------------------------------------------------
# forbidden triples


def test_three_greens_forbidden():
    assert forbidden_triple(("gi", 1), ("gi", 1), ("gi", 1))
    assert forbidden_triple(("gi", 1), ("g0", 0), ("g0", -1))


def test_same_index_green_pair_rejects_whites():
    assert forbidden_triple(("gi", 1), ("gi", 1), ("w",))
    assert forbidden_triple(("gi", 1), ("gi", 1), wf((0, 3)))
    assert not forbidden_triple(("gi", 1), ("gi", 1), ("b",))
    assert not forbidden_triple(("gi", 1), ("gi", 1), ("r", 0, 0))


def test_super_green_pair_forces_red():
    for other in [("w",), wf(), wf((-1, 0)), ("y",), ("b",)]:
        assert forbidden_triple(("g0", -1), ("g0", 0), other)
    # order-preserving red indices survive
    assert not forbidden_triple(("g0", -1), ("g0", 0), ("r", 0, 1))
    # equal tints need equal indices
    assert forbidden_triple(("g0", -1), ("g0", -1), ("r", 0, 1))
    assert not forbidden_triple(("g0", -1), ("g0", -1), ("r", 1, 1))
    # order violation in both pairings
    assert forbidden_triple(("g0", -2), ("g0", -1), ("r", 1, 1))


def test_green_yellow_white_f_needs_domain():
    assert forbidden_triple(("g0", -1), ("y",), wf((0, 3)))
    assert not forbidden_triple(("g0", -1), ("y",), wf((-1, 3)))
    assert not forbidden_triple(("g0", -1), ("y",), wf((-1, 0), (0, 1)))


def test_yellow_triples():
    assert forbidden_triple(("y",), ("y",), ("y",))
    assert forbidden_triple(("y",), ("y",), ("b",))
    assert not forbidden_triple(("y",), ("b",), ("b",))
    assert not forbidden_triple(("y",), ("y",), ("w",))


def test_red_triples():
    assert not forbidden_triple(("r", 0, 1), ("r", 1, 2), ("r", 0, 2))
    assert forbidden_triple(("r", 0, 1), ("r", 1, 2), ("r", 1, 2))
    assert forbidden_triple(("r", 0, 0), ("r", 0, 0), ("r", 1, 1))
    assert not forbidden_triple(("r", 3, 3), ("r", 3, 3), ("r", 3, 3))
    # two reds plus anything non-green is fine
    assert not forbidden_triple(("r", 0, 1), ("r", 5, 5), ("w",))


COLOUR_POOL = (
    [("gi", 1), ("g0", 0), ("g0", -1), ("g0", -2), ("w",), wf(), wf((-1, 2)),
     wf((-2, 0), (0, 5)), ("y",), ("b",)]
    + [("r", i, j) for i in range(3) for j in range(3)]
)


@settings(max_examples=300, deadline=None)
@given(
    st.sampled_from(COLOUR_POOL),
    st.sampled_from(COLOUR_POOL),
    st.sampled_from(COLOUR_POOL),
    st.permutations([0, 1, 2]),
)
def test_forbidden_triple_permutation_invariant(a, b, c, perm):
    tri = [a, b, c]
    shuffled = [tri[i] for i in perm]
    assert forbidden_triple(*tri) == forbidden_triple(*shuffled)


# ----------------------------------------------------------------------
# graphs and class membership


def two_node_white_member():
    g = ColouredGraph(3, {0, 1}, {(0, 1): ("w",)}, {})
    g = g.with_shade((0, 1), ALL_SHADE).with_shade((1, 0), shade_set([0]))
    return g


def test_two_node_white_graph_is_member():
    assert check_J_membership(two_node_white_member(), MINIMAL_PARAMS) == []


def test_incomplete_graph_rejected():
    g = ColouredGraph(3, {0, 1, 2}, {(0, 1): ("w",)}, {})
    report = check_J_membership(g, MINIMAL_PARAMS)
    assert any("unlabelled" in v for v in report)


def test_green_tuple_must_not_carry_shade():
    g = ColouredGraph(3, {0, 1}, {(0, 1): ("gi", 1)}, {(0, 1): ALL_SHADE})
    report = check_J_membership(g, MINIMAL_PARAMS)
    assert any("green edge but carries shade" in v for v in report)


def test_greenless_tuple_needs_shade():
    g = ColouredGraph(3, {0, 1}, {(0, 1): ("w",)}, {(0, 1): ALL_SHADE})
    report = check_J_membership(g, MINIMAL_PARAMS)
    assert any("no green edge but carries no shade" in v for v in report)
    assert check_J_membership(g.with_shade((1, 0), ALL_SHADE), MINIMAL_PARAMS) == []


def cone_graph(tint, base_shade):
    # nodes 0, 1 form the base, node 2 is the apex
    g = ColouredGraph(
        3,
        {0, 1, 2},
        {(0, 2): ("g0", tint), (1, 2): ("gi", 1), (0, 1): ("y",)},
        {},
    )
    g = g.with_shade((0, 1), base_shade).with_shade((1, 0), ALL_SHADE)
    return g


def test_find_cones():
    g = cone_graph(0, ALL_SHADE)
    cones = find_cones(g)
    assert ((0, 1), 2, 0) in cones


def test_cone_shade_must_contain_tint():
    params = RainbowParams(n=3, green_low=-2, red_bound=4, yellow_universe=3)
    bad = cone_graph(0, shade_set([1]))
    report = check_J_membership(bad, params)
    assert any("does not contain the tint" in v for v in report)
    good = cone_graph(0, shade_set([0, 1]))
    assert check_J_membership(good, params) == []
    # the unbounded shade contains every tint, negative ones included
    neg = cone_graph(-2, ALL_SHADE)
    assert check_J_membership(neg, params) == []


def test_forbidden_triangle_reported():
    g = ColouredGraph(
        3,
        {0, 1, 2},
        {(0, 1): ("y",), (0, 2): ("y",), (1, 2): ("y",)},
        {},
    )
    for t in itertools.permutations([0, 1, 2], 2):
        g = g.with_shade(t, ALL_SHADE)
    report = check_J_membership(g, MINIMAL_PARAMS)
    assert any("forbidden triple" in v for v in report)


def test_colour_bounds_checked():
    g = two_node_white_member().with_edge(0, 1, ("r", 5, 0))
    report = check_J_membership(g, MINIMAL_PARAMS)
    assert any("outside parameter bounds" in v for v in report)


# ----------------------------------------------------------------------
# JSON encodings


def test_colour_json_roundtrip():
    for c in COLOUR_POOL:
        doc = colour_to_json(c)
        assert colour_from_json(doc) == c
    assert colour_to_json(("g0", -1)) == {"kind": "greenSuper", "index": -1}
    assert colour_to_json(("r", 2, 5)) == {"kind": "red", "i": 2, "j": 5}


def test_graph_json_roundtrip():
    g = cone_graph(0, shade_set([0, 1]))
    doc = g.to_json()
    back = ColouredGraph.from_json(doc, 3)
    assert back == g
    assert doc["edges"][0]["colour"]["kind"] in (
        "greenI", "greenSuper", "white", "whiteF", "yellow", "black", "red",
    )


# ----------------------------------------------------------------------
# atoms and the lazy structure


def test_atom_from_graph_canonical():
    g = two_node_white_member()
    a1 = atom_from_graph(g, (0, 1, 0))
    a2 = atom_from_graph(g, (1, 0, 1))  # swapped roles, same pattern class?
    assert a1.eq == (0, 1, 0)
    assert a2.eq == (0, 1, 0)
    # the swap exchanges which node carries which shade, so the atoms differ
    assert a1 != a2
    assert RainbowAtom.decode(a1.encode()) == a1


def test_identity_and_accessibility_predicates():
    s = build_rainbow_atom_structure(MINIMAL_PARAMS)
    g = two_node_white_member()
    a = atom_from_graph(g, (0, 1, 0))
    assert s.in_identity(0, 2, a)
    assert not s.in_identity(0, 1, a)
    assert s.t_related(1, a, a)
    # moving only slot 2 keeps the restriction to slots {0, 1} intact
    b = atom_from_graph(g, (0, 1, 1))
    assert s.t_related(2, a, b)
    # but changes the restrictions that do see slot 2
    assert not s.t_related(0, a, b)
    assert not s.t_related(1, a, b)


def test_t_class_properties():
    rng = random.Random(0)
    s = build_rainbow_atom_structure(MINIMAL_PARAMS)
    a = s.random_atom(rng)
    for i in range(3):
        cls = s.t_class(i, a)
        assert a in cls
        for b in cls:
            assert s.t_related(i, a, b)
        for b in cls[:100]:
            assert s.validate_atom(b) == []
        assert len(set(cls)) == len(cls)


def test_sample_t_class_members_are_related():
    rng = random.Random(4)
    s = build_rainbow_atom_structure(MINIMAL_PARAMS)
    a = s.random_atom(rng)
    for i in range(3):
        for b in s.sample_t_class(i, a, 5, rng):
            assert s.t_related(i, a, b)
            assert s.validate_atom(b) == []


def test_sampled_atoms_are_members():
    rng = random.Random(1)
    s = build_rainbow_atom_structure(MINIMAL_PARAMS)
    for a in s.sample_atoms(20, rng):
        assert s.validate_atom(a) == []


def test_enumeration_small_and_deterministic():
    s = build_rainbow_atom_structure(MINIMAL_PARAMS)
    first = list(s.enumerate_atoms(limit=50))
    second = list(s.enumerate_atoms(limit=50))
    assert first == second
    assert len(set(first)) == 50
    for a in first:
        assert s.validate_atom(a) == []


def test_axiom_sampling_on_rainbow():
    s = build_rainbow_atom_structure(MINIMAL_PARAMS)
    assert check_ca_axioms(s, budget=300, seed=0) == []


def test_degenerate_parameters_rejected():
    with pytest.raises(ValueError):
        RainbowParams(n=2)
    with pytest.raises(ValueError):
        RainbowParams(n=3, red_bound=0)


def test_default_palette_sizes():
    cols = DEFAULTS.edge_colours()
    # 1 g_i + 7 g_0 + 1 white + wf + yellow + black + 256 reds
    wfs = [c for c in cols if c[0] == "wf"]
    assert len(wfs) == 1 + 7 * 16 + 21 * 120
    assert len([c for c in cols if c[0] == "r"]) == 256
    assert len(DEFAULTS.shades()) == 1 + 2 ** 8

import random

import pytest

from cylgames.atom_structure import one_atom_structure
from cylgames.games import (
    H_game,
    F_game,
    ParameterExhausted,
    StrategyError,
    abelard_rainbow_script,
    check_strategy_invariants,
    eloise_rainbow_strategy,
    new_game,
    random_abelard,
    run_match,
)
from cylgames.rainbow import RainbowParams, build_rainbow_atom_structure

WIDE_PARAMS = RainbowParams(n=3, green_low=-6, red_bound=81, yellow_universe=8)
NARROW_PARAMS = RainbowParams(n=3, green_low=-3, red_bound=2, yellow_universe=1)


@pytest.fixture(scope="module")
def wide():
    return build_rainbow_atom_structure(WIDE_PARAMS)


@pytest.fixture(scope="module")
def narrow():
    return build_rainbow_atom_structure(NARROW_PARAMS)


def test_script_requires_deep_greens(narrow):
    params = RainbowParams(n=3, green_low=-2, red_bound=2, yellow_universe=1)
    s = build_rainbow_atom_structure(params)
    with pytest.raises(ValueError):
        abelard_rainbow_script(s, H_game())
    abelard_rainbow_script(narrow, H_game())  # deep enough


def test_eloise_needs_rainbow_structure():
    with pytest.raises(ValueError):
        eloise_rainbow_strategy(one_atom_structure(3), 3)


def test_eloise_survives_the_script_with_wide_reds(wide):
    rounds = 4
    strat_a = abelard_rainbow_script(wide, H_game(rounds))
    strat_e = eloise_rainbow_strategy(wide, rounds)
    trace = run_match(wide, H_game(rounds), strat_a, strat_e, rounds)
    assert trace["winner"] == "E"
    assert trace["haltReason"] == "eloise survived all rounds"
    report = check_strategy_invariants(trace, strat_e)
    assert report["ok"], report["firstFailure"]
    assert report["rounds"] == rounds


def test_eloise_dies_to_the_script_with_two_reds(narrow):
    rounds = 3
    strat_a = abelard_rainbow_script(narrow, H_game(rounds))
    inner = eloise_rainbow_strategy(narrow, rounds)

    def strat_e(state, move):
        try:
            return inner(state, move)
        except StrategyError:
            return None

    trace = run_match(narrow, H_game(rounds), strat_a, strat_e, rounds)
    assert trace["winner"] == "A"
    assert trace["haltReason"] == "eloise has no response"


def test_parameter_exhaustion_is_explicit(narrow):
    rounds = 3
    strat_a = abelard_rainbow_script(narrow, H_game(rounds))
    strat_e = eloise_rainbow_strategy(narrow, rounds)
    state = new_game(narrow, H_game(rounds))
    with pytest.raises(ParameterExhausted):
        for _ in range(rounds):
            move = strat_a(state)
            assert move is not None
            state = state.append(strat_e(state, move))


def test_eloise_survives_random_abelard_lines(wide):
    rounds = 4
    for seed in range(5):
        rng = random.Random(seed)
        strat_a = random_abelard(wide, rng)
        strat_e = eloise_rainbow_strategy(wide, rounds)
        trace = run_match(wide, H_game(rounds), strat_a, strat_e, rounds)
        assert trace["winner"] == "E", f"seed {seed}: {trace['haltReason']}"
        report = check_strategy_invariants(trace, strat_e)
        assert report["ok"], (seed, report["firstFailure"])


def test_eloise_survives_bounded_node_game(wide):
    rounds = 4
    strat_a = abelard_rainbow_script(wide, F_game(rounds + 2, rounds))
    strat_e = eloise_rainbow_strategy(wide, rounds)
    trace = run_match(wide, F_game(rounds + 2, rounds), strat_a, strat_e, rounds)
    assert trace["winner"] == "E"


def test_injected_fault_breaks_ownership_invariant(wide):
    rounds = 3
    strat_a = abelard_rainbow_script(wide, H_game(rounds))
    strat_e = eloise_rainbow_strategy(wide, rounds)
    trace = run_match(wide, H_game(rounds), strat_a, strat_e, rounds)
    assert trace["winner"] == "E"
    rec = strat_e.history[-1]
    green = next(
        frozenset(e)
        for e, c in trace["states"][-1].positions[-1].graph.edges.items()
        if c[0] in ("g0", "gi")
    )
    rec.owners[green] = "E"
    report = check_strategy_invariants(trace, strat_e)
    assert not report["ok"]
    assert report["firstFailure"]["property"] == "I"


def test_index_map_spacing(wide):
    rounds = 4
    strat_a = abelard_rainbow_script(wide, H_game(rounds))
    strat_e = eloise_rainbow_strategy(wide, rounds)
    run_match(wide, H_game(rounds), strat_a, strat_e, rounds)
    for s, rec in enumerate(strat_e.history):
        items = sorted(rec.rho.items())
        gap = 3 ** max(rounds - (s + 1), 0)
        for (_, v1), (_, v2) in zip(items, items[1:]):
            assert v2 - v1 >= gap

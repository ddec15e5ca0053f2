"""Acceptance gate: one test and one printed PASS/FAIL line per criterion.

Run with -s to see the lines as they are produced.  Budgets are explicit
and truncation is always reported; a criterion that cannot be certified
within its budget fails rather than being weakened silently.
"""

import itertools
import random
import signal
import time
from fractions import Fraction

import pytest

from cylgames.atom_structure import (
    additivity_check,
    check_ca_axioms,
    factor_substitution,
    one_atom_structure,
    random_small_structure,
    validate_atom_structure,
)
from cylgames.games import (
    BudgetExceeded,
    F_game,
    H_game,
    StrategyError,
    abelard_rainbow_script,
    check_strategy_invariants,
    eloise_rainbow_strategy,
    legal_moves_abelard,
    new_game,
    random_abelard,
    run_match,
    solve,
)
from cylgames.hyperplane import (
    cdelta_literal,
    classify_clause,
    cylindrify,
    cylindrify_oracle,
    diag_literal,
    make_plane,
    membership,
    nf,
    perturb_outside_w,
    plane_literal,
    point,
    q_literal,
    q_plane,
    singleton_nf,
    tau,
    tau_singletons,
    w_plane,
    witness_solve,
)
from cylgames.networks import graph_to_network, network_to_graph, validate_network
from cylgames.rainbow import (
    MINIMAL_PARAMS,
    ColouredGraph,
    RainbowParams,
    build_rainbow_atom_structure,
    random_completion,
)

STATED_PARAMS = RainbowParams(n=3, green_low=-6, red_bound=16, yellow_universe=8)
SURVIVAL_PARAMS = RainbowParams(n=3, green_low=-6, red_bound=81, yellow_universe=8)
DEMO_PARAMS = RainbowParams(n=3, green_low=-3, red_bound=2, yellow_universe=1)


def _report(name, ok, detail=""):
    tail = f" ({detail})" if detail else ""
    print(f"{'PASS' if ok else 'FAIL'} {name}{tail}", flush=True)
    assert ok, f"{name}{tail}"


class _WallClock(Exception):
    pass


def _alarm(signum, frame):
    raise _WallClock()


@pytest.fixture(scope="module")
def stated():
    return build_rainbow_atom_structure(STATED_PARAMS)


@pytest.fixture(scope="module")
def survival():
    return build_rainbow_atom_structure(SURVIVAL_PARAMS)


# ----------------------------------------------------------------------
# criterion 1: attacker win in the node-bounded game


def test_criterion_attacker_win(stated):
    n = STATED_PARAMS.n
    rounds = 6
    details = []

    # scripted attacker against the survival strategy: she must get stuck
    strat_a = abelard_rainbow_script(stated, F_game(n + 2, rounds), rounds)
    inner = eloise_rainbow_strategy(stated, rounds)

    def strat_e(state, move):
        try:
            return inner(state, move)
        except StrategyError:
            return None

    trace = run_match(stated, F_game(n + 2, rounds), strat_a, strat_e, rounds)
    script_ok = (trace["winner"] == "A"
                 and trace["haltReason"] == "eloise has no response")
    details.append(f"scripted match: winner {trace['winner']}")

    # the solver certifies the win at a reduced red palette
    demo = build_rainbow_atom_structure(DEMO_PARAMS)
    res = solve(demo, F_game(n + 2, 3), rounds=3, response_cap=5000)
    demo_ok = res.winner == "A"
    details.append(f"two-red solver verdict: {res.winner}")

    # bounded attempt at the full stated palette
    verdict = None
    signal.signal(signal.SIGALRM, _alarm)
    signal.alarm(60)
    try:
        full = solve(stated, F_game(n + 2, rounds), rounds=rounds,
                     restricted=True, node_budget=200, response_cap=4000)
        verdict = full.winner
        details.append(f"stated-palette solver verdict: {full.winner}")
    except BudgetExceeded as exc:
        details.append(f"stated-palette solve: {exc.args[0]}")
    except _WallClock:
        details.append("stated-palette solve: wall clock budget exhausted")
    finally:
        signal.alarm(0)

    # the criterion asks for a solver verdict at the stated palette; the
    # response space per demand exceeds any workable cap there, so the
    # verdict stays uncertified and this line fails honestly
    _report("attacker-win", script_ok and demo_ok and verdict == "A",
            "; ".join(details))


# ----------------------------------------------------------------------
# criterion 2: defender survival


def _explore_lines(structure, rounds, caps):
    """Every attacker line under per-round menu caps; replayed from scratch
    so the defender's records stay per-line."""
    lines = 0
    truncated = False
    failures = []

    def walk(prefix):
        nonlocal lines, truncated
        strat = eloise_rainbow_strategy(structure, rounds)
        state = new_game(structure, H_game(rounds))
        states = [state]
        for mv in prefix:
            state = state.append(strat(state, mv))
            states.append(state)
        if len(prefix) == rounds:
            rep = check_strategy_invariants({"states": states, "winner": "E"},
                                            strat)
            if not rep["ok"]:
                failures.append(rep["firstFailure"])
            lines += 1
            return
        cap = caps[len(prefix)]
        stream = legal_moves_abelard(state, atom_limit=cap, face_limit=cap)
        moves = list(itertools.islice(iter(stream), cap))
        if not stream.exhausted:
            truncated = True
        for mv in moves:
            walk(prefix + (mv,))

    walk(())
    return lines, truncated, failures


def test_criterion_defender_survival(survival):
    details = []
    total_lines = 0
    failures = []
    # every line under explicit menu caps for rounds 1..3; the raw move
    # space (one option per atom) is unbounded, so caps are unavoidable
    for rounds, caps in ((1, (60,)), (2, (30, 25)), (3, (16, 12, 8))):
        lines, truncated, fails = _explore_lines(survival, rounds, caps)
        total_lines += lines
        failures.extend(fails)
        details.append(f"r={rounds}: {lines} lines"
                       + (" (menus capped)" if truncated else ""))
    # 1000 seeded random attacker lines at four rounds
    bad = 0
    for seed in range(1000):
        rng = random.Random(seed)
        strat_a = random_abelard(survival, rng)
        strat_e = eloise_rainbow_strategy(survival, 4)
        trace = run_match(survival, H_game(4), strat_a, strat_e, 4)
        rep = check_strategy_invariants(trace, strat_e)
        if trace["winner"] != "E" or not rep["ok"]:
            bad += 1
            if rep["firstFailure"]:
                failures.append(rep["firstFailure"])
    details.append(f"random r=4: 1000 lines, {bad} losses")
    _report("defender-survival",
            total_lines > 0 and bad == 0 and not failures,
            "; ".join(details) + (f"; first failure {failures[0]}"
                                  if failures else ""))


# ----------------------------------------------------------------------
# criterion 3: axiom suite


def test_criterion_axiom_suite():
    bad = []
    structures = [one_atom_structure(2), one_atom_structure(3)]
    rng = random.Random(5)
    while len(structures) < 52:
        s = random_small_structure(rng, n=rng.choice([2, 2, 3]), max_atoms=4)
        if validate_atom_structure(s):
            continue
        structures.append(s)
    for idx, s in enumerate(structures):
        violations = check_ca_axioms(s)
        if violations:
            bad.append(f"structure {idx}: {violations[0]}")
        done = 0
        while done < 20:
            tau_map = [rng.randrange(s.dimension) for _ in range(s.dimension)]
            try:
                factor_substitution(list(tau_map), s.dimension)
            except ValueError:
                # full-support permutations have no scratch index and are
                # not expressible; skip them
                continue
            done += 1
            if not additivity_check(s, tau_map):
                bad.append(f"structure {idx}: tau {tau_map} not additive")
    # the smallest rainbow palette, probed pointwise (its atom set is
    # far beyond the exhaustive bitmask limit)
    rainbow = build_rainbow_atom_structure(MINIMAL_PARAMS)
    violations = check_ca_axioms(rainbow, budget=10000)
    if violations:
        bad.append(f"rainbow: {violations[0]}")
    _report("axiom-suite", not bad,
            f"{len(structures)} explicit structures exhaustive, "
            f"rainbow sampled 10^4" + (f"; {bad[0]}" if bad else ""))


# ----------------------------------------------------------------------
# criterion 4: translation round trips


def test_criterion_translation_round_trips():
    structure = build_rainbow_atom_structure(MINIMAL_PARAMS)
    from cylgames.rainbow import _enumerate_complete_graphs

    bad = []
    counted = 0
    # every member on one and two nodes; a deterministic slice of the
    # 1.7M three-node members
    members = itertools.chain(
        _enumerate_complete_graphs(MINIMAL_PARAMS, 1),
        _enumerate_complete_graphs(MINIMAL_PARAMS, 2),
        itertools.islice(_enumerate_complete_graphs(MINIMAL_PARAMS, 3), 4000),
    )
    rng = random.Random(6)
    randoms = []
    while len(randoms) < 100:
        m = rng.randint(1, 3)
        g = random_completion(
            ColouredGraph(3, frozenset(range(m)), {}, {}), MINIMAL_PARAMS, rng)
        if g is not None:
            randoms.append(g)
    for g in itertools.chain(members, randoms):
        counted += 1
        net = graph_to_network(g, structure)
        if validate_network(net):
            bad.append("network invalid")
            break
        if network_to_graph(net) != g:
            bad.append("graph round trip broke")
            break
        if graph_to_network(network_to_graph(net), structure) != net:
            bad.append("network round trip broke")
            break
    _report("translation-round-trips", not bad,
            f"{counted} members exact" + (f"; {bad[0]}" if bad else ""))


# ----------------------------------------------------------------------
# criterion 5: hyperplane oracle agreement


def _rand_literal(rng, alpha):
    sign = rng.choice([1, -1])
    kind = rng.random()
    if kind < 0.5:
        coeffs = [rng.randint(-3, 3) for _ in range(alpha)]
        if all(c == 0 for c in coeffs):
            coeffs[rng.randrange(alpha)] = 1
        return plane_literal(make_plane(alpha, rng.randint(-4, 4), coeffs), sign)
    if kind < 0.75:
        i, j = rng.sample(range(alpha), 2)
        return diag_literal(alpha, i, j, sign)
    delta = {0} | {k for k in range(1, alpha) if rng.random() < 0.5}
    return cdelta_literal(alpha, delta, sign)


def _rand_nf(rng, alpha):
    clauses = [tuple(_rand_literal(rng, alpha)
                     for _ in range(rng.randint(1, 3)))
               for _ in range(rng.randint(1, 3))]
    return nf(alpha, clauses)


def _rand_point(rng, alpha):
    return point([Fraction(rng.randint(-6, 6), rng.choice([1, 1, 2, 3]))
                  for _ in range(alpha)])


def test_criterion_hyperplane_oracle():
    t0 = time.time()
    bad = []
    rng = random.Random(7)
    for alpha in (3, 4, 5):
        for _ in range(1000):
            g = _rand_nf(rng, alpha)
            j = rng.randrange(alpha)
            s = _rand_point(rng, alpha)
            if membership(cylindrify(g, j), s) != cylindrify_oracle(g, j, s):
                bad.append(f"cylindrify disagrees at alpha={alpha}")
                break
    # substituted-pair composition against the closed form
    r, t = point([1, 2, 0]), point([2, 3, 0])
    worked = tau_singletons(r, t)
    if worked != point([1, 3, 0]) or not w_plane(3).contains(worked):
        bad.append("worked pair broke")
    if not membership(tau(singleton_nf(r), singleton_nf(t)), worked):
        bad.append("symbolic worked pair broke")
    for _ in range(100):
        tail = [Fraction(rng.randint(-5, 5)) for _ in range(2)]
        r = point([sum(tail) - 1] + tail)
        if rng.random() < 0.6:
            t = point([r[1], r[1] + 1 - sum(r[2:])] + list(r[2:]))
        else:
            tail = [Fraction(rng.randint(-5, 5)) for _ in range(2)]
            t = point([sum(tail) - 1] + tail)
        closed = tau_singletons(r, t)
        sym = tau(singleton_nf(r), singleton_nf(t))
        if closed is None:
            if any(membership(sym, _rand_point(rng, 3)) for _ in range(5)):
                bad.append("symbolic nonempty on mismatch")
                break
        elif not membership(sym, closed):
            bad.append("symbolic misses closed-form point")
            break
    # witness recursion, self-checking
    for _ in range(500):
        m = rng.randint(2, 4)
        rows = []
        for _ in range(rng.randint(0, 4)):
            coeffs = [rng.randint(-4, 4) for _ in range(m + 1)]
            if coeffs[0] == 0:
                coeffs[0] = 1
            coeffs[rng.randint(1, m)] = 0
            rows.append((rng.randint(-5, 5), tuple(coeffs)))
        witness_solve(m, rows)
    # perturbation off the generator plane
    done = 0
    while done < 200:
        z = _rand_point(rng, 3)
        lits = []
        for _ in range(rng.randint(1, 3)):
            pick = rng.random()
            if pick < 0.4:
                i = rng.randrange(3)
                if not q_plane(3, i).contains(z):
                    lits.append(q_literal(3, i, -1))
            elif pick < 0.7:
                coeffs = [0] + [rng.randint(-3, 3) for _ in range(2)]
                if any(coeffs):
                    tt = -sum(a * b for a, b in zip(coeffs, z))
                    lits.append(plane_literal(make_plane(3, tt, coeffs)))
            else:
                delta = {0} | {i for i in range(1, 3) if z[i] != 0}
                lits.append(cdelta_literal(3, delta))
        clause = tuple(lits)
        if not clause or classify_clause(clause, 3) != "G3":
            continue
        out = perturb_outside_w(clause, z)
        if not all(l.holds(out) for l in clause) or w_plane(3).contains(out):
            bad.append("perturbation failed")
            break
        done += 1
    elapsed = time.time() - t0
    _report("hyperplane-oracle", not bad and elapsed < 120,
            f"3000 cylindrifications, 100 compositions, 500 witnesses, "
            f"200 perturbations in {elapsed:.1f}s"
            + (f"; {bad[0]}" if bad else ""))


# ----------------------------------------------------------------------
# criterion 6: restricted and unrestricted demands agree


def test_criterion_restriction_equivalence():
    bad = []
    solved = 0
    demo = build_rainbow_atom_structure(DEMO_PARAMS)
    cases = [(demo, 3)]
    rng = random.Random(8)
    cases.extend((one_atom_structure(n), 2) for n in (2, 3))
    for _ in range(6):
        s = random_small_structure(rng, n=2, max_atoms=3)
        if not validate_atom_structure(s):
            cases.append((s, 2))
    for s, rounds in cases:
        try:
            a = solve(s, H_game(rounds), rounds=rounds, restricted=True,
                      response_cap=5000, node_budget=100000)
            b = solve(s, H_game(rounds), rounds=rounds, restricted=False,
                      response_cap=5000, node_budget=100000)
        except BudgetExceeded:
            continue
        solved += 1
        if a.winner != b.winner:
            bad.append(f"winners split {a.winner}/{b.winner}")
    _report("restriction-equivalence", solved > 0 and not bad,
            f"{solved} instances solved both ways"
            + (f"; {bad[0]}" if bad else ""))

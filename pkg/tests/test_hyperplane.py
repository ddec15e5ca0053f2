import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cylgames.hyperplane import (
    Literal,
    bool_op,
    bottom,
    cdelta_literal,
    classify_clause,
    complement,
    cylindrify,
    cylindrify_oracle,
    diag_literal,
    diag_plane,
    join,
    literal_nf,
    make_plane,
    meet,
    membership,
    nf,
    nf_from_json,
    nf_to_json,
    perturb_outside_w,
    plane_literal,
    point,
    q_literal,
    q_plane,
    singleton_nf,
    tau,
    tau_singletons,
    top,
    transpose,
    w_plane,
    witness_solve,
)

ALPHA = 3


def rand_point(rng, alpha=ALPHA):
    return point([Fraction(rng.randint(-6, 6), rng.choice([1, 1, 2, 3]))
                  for _ in range(alpha)])


def rand_literal(rng, alpha=ALPHA):
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


def rand_nf(rng, alpha=ALPHA, max_clauses=3, max_lits=3):
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        clauses.append(tuple(rand_literal(rng, alpha)
                             for _ in range(rng.randint(1, max_lits))))
    return nf(alpha, clauses)


# ----------------------------------------------------------------------
# membership


def test_origin_in_every_cdelta():
    origin = point([0, 0, 0])
    for delta in ({0}, {0, 1}, {0, 1, 2}):
        assert membership(literal_nf(cdelta_literal(ALPHA, delta)), origin)


def test_base_plane_memberships():
    y = literal_nf(q_literal(ALPHA, 0))
    assert membership(y, point([1, 2, 0]))  # 1+1 = 2+0
    w = literal_nf(plane_literal(w_plane(ALPHA)))
    assert membership(w, point([1, 3, 0]))  # 1+2 = 3+0


def test_plane_canonical_scaling():
    a = make_plane(3, 2, [2, -2, 4])
    b = make_plane(3, 1, [1, -1, 2])
    assert a == b
    assert a.coeffs[0] == 1


def test_plane_classification_flags():
    assert q_plane(3, 0).in_pl_s
    assert not q_plane(3, 0).in_pl_less
    axis = make_plane(3, 1, [1, 0, 0])
    assert axis.in_pl_less and not axis.in_pl_s
    # diagonals are axis-parallel exactly from dimension 3 up
    assert diag_plane(3, 0, 1).in_pl_less


# ----------------------------------------------------------------------
# boolean structure


def test_meet_with_complement_is_bottom():
    rng = random.Random(0)
    for _ in range(20):
        x = rand_nf(rng)
        z = bool_op("meet", x, bool_op("complement", x))
        for _ in range(5):
            assert not membership(z, rand_point(rng))


def test_join_idempotent():
    y = literal_nf(q_literal(ALPHA, 0))
    assert bool_op("join", y, y) == y


def test_meet_agrees_pointwise():
    rng = random.Random(1)
    q0 = literal_nf(q_literal(ALPHA, 0))
    nd = literal_nf(diag_literal(ALPHA, 0, 1, -1))
    both = bool_op("meet", q0, nd)
    for _ in range(100):
        s = rand_point(rng)
        assert membership(both, s) == (membership(q0, s) and membership(nd, s))


@given(st.integers(0, 2 ** 32))
@settings(max_examples=40, deadline=None)
def test_de_morgan_pointwise(seed):
    rng = random.Random(seed)
    x, y = rand_nf(rng), rand_nf(rng)
    lhs = complement(meet(x, y))
    rhs = join(complement(x), complement(y))
    for _ in range(4):
        s = rand_point(rng)
        assert membership(lhs, s) == membership(rhs, s)


# ----------------------------------------------------------------------
# cylindrification


def test_cylindrify_bottom():
    for j in range(ALPHA):
        assert cylindrify(bottom(ALPHA), j) == bottom(ALPHA)


def test_cylindrify_fixed_plane_example():
    g = meet(literal_nf(q_literal(ALPHA, 0)),
             literal_nf(plane_literal(make_plane(ALPHA, -5, [0, 1, 0]))))
    got = cylindrify(g, 1)
    rng = random.Random(2)
    for _ in range(200):
        s = rand_point(rng)
        assert membership(got, s) == cylindrify_oracle(g, 1, s)


def test_cylindrify_saturates_cdelta():
    g = literal_nf(cdelta_literal(ALPHA, {0, 1}))
    got = cylindrify(g, 2)
    full = literal_nf(cdelta_literal(ALPHA, {0, 1, 2}))
    rng = random.Random(3)
    assert got == full
    for _ in range(20):
        assert membership(got, rand_point(rng))


@given(st.integers(0, 2 ** 32))
@settings(max_examples=120, deadline=None)
def test_cylindrify_matches_oracle(seed):
    rng = random.Random(seed)
    g = rand_nf(rng)
    j = rng.randrange(ALPHA)
    got = cylindrify(g, j)
    for _ in range(4):
        s = rand_point(rng)
        assert membership(got, s) == cylindrify_oracle(g, j, s), (g, j, s)


def test_cylindrify_is_increasing_and_idempotent():
    rng = random.Random(4)
    for _ in range(25):
        g = rand_nf(rng)
        j = rng.randrange(ALPHA)
        once = cylindrify(g, j)
        twice = cylindrify(once, j)
        for _ in range(4):
            s = rand_point(rng)
            if membership(g, s):
                assert membership(once, s)
            assert membership(once, s) == membership(twice, s)


def test_cylindrify_additive_over_joins():
    rng = random.Random(5)
    for _ in range(15):
        x, y = rand_nf(rng), rand_nf(rng)
        j = rng.randrange(ALPHA)
        lhs = cylindrify(join(x, y), j)
        rhs = join(cylindrify(x, j), cylindrify(y, j))
        for _ in range(4):
            s = rand_point(rng)
            assert membership(lhs, s) == membership(rhs, s)


def test_cyl_distributes_over_cylindrified_factor():
    rng = random.Random(6)
    for _ in range(15):
        x, y = rand_nf(rng), rand_nf(rng)
        j = rng.randrange(ALPHA)
        lhs = cylindrify(meet(x, cylindrify(y, j)), j)
        rhs = meet(cylindrify(x, j), cylindrify(y, j))
        for _ in range(4):
            s = rand_point(rng)
            assert membership(lhs, s) == membership(rhs, s)


# ----------------------------------------------------------------------
# substitutions


def test_transpose_substituted_copies():
    assert transpose(literal_nf(q_literal(ALPHA, 0)), 0, 1) == \
        literal_nf(q_literal(ALPHA, 1))
    assert transpose(literal_nf(q_literal(ALPHA, 2)), 0, 1) == \
        literal_nf(q_literal(ALPHA, 2))


def test_transpose_cdelta_swap():
    got = transpose(literal_nf(cdelta_literal(ALPHA, {0, 1})), 1, 2)
    assert got == literal_nf(Literal(ALPHA, "cdelta", 1, delta=frozenset({0, 2})))


def test_transpose_is_boolean_endomorphism():
    rng = random.Random(7)
    for _ in range(15):
        x, y = rand_nf(rng), rand_nf(rng)
        k, l = rng.sample(range(ALPHA), 2)
        for op, fn in (("meet", meet), ("join", join)):
            lhs = transpose(fn(x, y), k, l)
            rhs = fn(transpose(x, k, l), transpose(y, k, l))
            for _ in range(3):
                s = rand_point(rng)
                assert membership(lhs, s) == membership(rhs, s)
        lhs = transpose(complement(x), k, l)
        rhs = complement(transpose(x, k, l))
        for _ in range(3):
            s = rand_point(rng)
            assert membership(lhs, s) == membership(rhs, s)


# ----------------------------------------------------------------------
# tau


def rand_on_base(rng, alpha=ALPHA):
    # a point of q_0: s_0 + 1 = sum_{i>0} s_i
    tail = [Fraction(rng.randint(-5, 5)) for _ in range(alpha - 1)]
    return point([sum(tail) - 1] + tail)


def test_tau_worked_pair():
    r, t = point([1, 2, 0]), point([2, 3, 0])
    s = tau_singletons(r, t)
    assert s == point([1, 3, 0])
    assert w_plane(ALPHA).contains(s)


def test_tau_mismatch_is_empty():
    r = point([1, 2, 0])
    t = point([6, 2, 5])  # on the base plane but t_0 != r_1
    assert tau_singletons(r, t) is None
    sym = tau(singleton_nf(r), singleton_nf(t))
    rng = random.Random(8)
    for _ in range(20):
        assert not membership(sym, rand_point(rng))


def test_tau_symbolic_matches_closed_form():
    rng = random.Random(9)
    for _ in range(40):
        r = rand_on_base(rng)
        if rng.random() < 0.6:
            # matching pair: t_0 = r_1, tail shared, t_1 forced by the plane
            t1 = r[1] + 1 - sum(r[2:])
            t = point([r[1], t1] + list(r[2:]))
        else:
            t = rand_on_base(rng)
        closed = tau_singletons(r, t)
        sym = tau(singleton_nf(r), singleton_nf(t))
        if closed is None:
            for _ in range(5):
                assert not membership(sym, rand_point(rng))
        else:
            assert membership(sym, closed)
            assert w_plane(ALPHA).contains(closed)
            # the symbolic result is exactly the singleton
            probe = point([closed[0] + 1]) + closed[1:]
            assert not membership(sym, probe)


# ----------------------------------------------------------------------
# witness solver


def test_witness_simple_constraint():
    s = witness_solve(2, [(0, (1, 0, 0))])
    assert s[0] + 2 == s[1] + 2 * s[2]
    assert s[0] != 0


def test_witness_no_constraints():
    s = witness_solve(2, [])
    assert s[0] + 2 == s[1] + 2 * s[2]
    for l in range(3):
        assert not q_plane(3, l).contains(s)


def test_witness_rejects_bad_shapes():
    with pytest.raises(ValueError):
        witness_solve(2, [(1, (0, 1, 0))])  # zero 0-coefficient
    with pytest.raises(ValueError):
        witness_solve(2, [(1, (1, 1, 1))])  # no zero coefficient


def test_witness_random_instances():
    rng = random.Random(10)
    for _ in range(120):
        m = rng.randint(2, 4)
        rows = []
        for _ in range(rng.randint(0, 4)):
            coeffs = [rng.randint(-4, 4) for _ in range(m + 1)]
            if coeffs[0] == 0:
                coeffs[0] = 1
            coeffs[rng.randint(1, m)] = 0
            rows.append((rng.randint(-5, 5), tuple(coeffs)))
        witness_solve(m, rows)  # self-checking


# ----------------------------------------------------------------------
# perturbation


def test_perturb_single_negative_q():
    clause = (q_literal(ALPHA, 1, -1),)
    z = point([0, 0, 0])
    out = perturb_outside_w(clause, z)
    assert all(l.holds(out) for l in clause)
    assert not w_plane(ALPHA).contains(out)


def test_perturb_preserves_cdelta():
    clause = (cdelta_literal(ALPHA, {0, 1}), q_literal(ALPHA, 0, -1))
    z = point([1, 1, 0])
    out = perturb_outside_w(clause, z)
    assert out[1:] == z[1:]
    assert clause[0].holds(out)


def test_perturb_random_third_kind_clauses():
    rng = random.Random(11)
    done = 0
    while done < 200:
        z = rand_point(rng)
        lits = []
        for _ in range(rng.randint(1, 3)):
            pick = rng.random()
            if pick < 0.3:
                i = rng.randrange(ALPHA)
                if not q_plane(ALPHA, i).contains(z):
                    lits.append(q_literal(ALPHA, i, -1))
            elif pick < 0.6:
                coeffs = [0] + [rng.randint(-3, 3) for _ in range(ALPHA - 1)]
                if any(coeffs):
                    t = -sum(r * x for r, x in zip(coeffs, z))
                    lits.append(plane_literal(make_plane(ALPHA, t, coeffs)))
            elif pick < 0.8:
                delta = {0} | {i for i in range(1, ALPHA) if z[i] != 0}
                lits.append(cdelta_literal(ALPHA, delta))
            else:
                coeffs = [rng.randint(-3, 3) for _ in range(ALPHA)]
                coeffs[rng.randrange(ALPHA)] = 0  # keep it axis-parallel
                if any(coeffs):
                    p = make_plane(ALPHA, rng.randint(-4, 4), coeffs)
                    if not p.contains(z) and not p.in_pl_s:
                        lits.append(plane_literal(p, -1))
        clause = tuple(lits)
        if not clause or classify_clause(clause, ALPHA) != "G3":
            continue
        out = perturb_outside_w(clause, z)
        assert all(l.holds(out) for l in clause)
        assert not w_plane(ALPHA).contains(out)
        done += 1


# ----------------------------------------------------------------------
# serialization


def test_json_round_trip():
    rng = random.Random(12)
    for _ in range(20):
        g = rand_nf(rng)
        assert nf_from_json(nf_to_json(g)) == g

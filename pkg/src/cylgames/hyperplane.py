"""Exact hyperplane calculus over the rational weak space.

Finite dimension alpha (3 <= alpha <= 8), points in Q^alpha.  The
generators are signed literals: affine planes (with the substituted
copies of the base plane y and the axis-parallel planes classified),
diagonals s_i = s_j, and the sets c_(Delta){0} of points vanishing
outside Delta.  Normal forms are finite unions of finite intersections
of literals; cylindrification and transposition are computed
symbolically, case by case, and checked against a finite-witness
semantic oracle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

MIN_ALPHA = 3
MAX_ALPHA = 8


def _frac(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point input rejected; use Fraction or int")
    return Fraction(x)


def check_alpha(alpha):
    if not (MIN_ALPHA <= alpha <= MAX_ALPHA):
        raise ValueError(f"dimension must lie in [{MIN_ALPHA},{MAX_ALPHA}]")
    return alpha


def point(coords):
    return tuple(_frac(c) for c in coords)


# ----------------------------------------------------------------------
# planes


@dataclass(frozen=True)
class AffinePlane:
    """t + sum(r_i s_i) = 0, scaled so the first nonzero r_i is 1."""

    alpha: int
    t: Fraction
    coeffs: tuple

    def value(self, s):
        return self.t + sum(r * x for r, x in zip(self.coeffs, s))

    def contains(self, s):
        return self.value(s) == 0

    @property
    def in_pl_less(self):
        return any(r == 0 for r in self.coeffs)

    @property
    def in_pl_s(self):
        return any(self == q_plane(self.alpha, i) for i in range(self.alpha))


def make_plane(alpha, t, coeffs):
    check_alpha(alpha)
    t = _frac(t)
    coeffs = tuple(_frac(r) for r in coeffs)
    if len(coeffs) != alpha:
        raise ValueError("coefficient count must equal the dimension")
    lead = next((r for r in coeffs if r != 0), None)
    if lead is None:
        raise ValueError("a plane needs a nonzero coefficient")
    return AffinePlane(alpha, t / lead, tuple(r / lead for r in coeffs))


def q_plane(alpha, i):
    """s_i + 1 = sum_{j != i} s_j as a canonical plane."""
    coeffs = [Fraction(-1)] * alpha
    coeffs[i] = Fraction(1)
    return make_plane(alpha, 1, coeffs)


def w_plane(alpha):
    """s_0 + 2 = s_1 + 2 sum_{i>1} s_i."""
    coeffs = [Fraction(-2)] * alpha
    coeffs[0] = Fraction(1)
    coeffs[1] = Fraction(-1)
    return make_plane(alpha, 2, coeffs)


def diag_plane(alpha, i, j):
    coeffs = [Fraction(0)] * alpha
    coeffs[i] = Fraction(1)
    coeffs[j] = Fraction(-1)
    return make_plane(alpha, 0, coeffs)


def plane_project(plane, j):
    """p(j|0): drop coefficient j.  Returns ("plane", p), ("top",) or
    ("bottom",) when the projection degenerates."""
    coeffs = list(plane.coeffs)
    coeffs[j] = Fraction(0)
    if all(r == 0 for r in coeffs):
        return ("top",) if plane.t == 0 else ("bottom",)
    return ("plane", make_plane(plane.alpha, plane.t, coeffs))


def plane_eliminate(p, q, j):
    """The j-eliminant of two planes with nonzero j-coefficients: the
    plane {s : the u solving p at slot j also solves q}."""
    a, b = p.coeffs[j], q.coeffs[j]
    t = a * q.t - b * p.t
    coeffs = [a * rq - b * rp for rp, rq in zip(p.coeffs, q.coeffs)]
    coeffs[j] = Fraction(0)
    if all(r == 0 for r in coeffs):
        return ("top",) if t == 0 else ("bottom",)
    return ("plane", make_plane(p.alpha, t, coeffs))


def plane_transpose(plane, k, l):
    coeffs = list(plane.coeffs)
    coeffs[k], coeffs[l] = coeffs[l], coeffs[k]
    return make_plane(plane.alpha, plane.t, coeffs)


# ----------------------------------------------------------------------
# literals


@dataclass(frozen=True)
class Literal:
    """A signed generator: a plane, a diagonal, or c_(Delta){0}."""

    alpha: int
    kind: str  # "plane" | "diag" | "cdelta"
    sign: int  # +1 or -1
    plane: AffinePlane = None
    i: int = None
    j: int = None
    delta: frozenset = None

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        if self.kind == "cdelta" and not self.delta <= set(range(self.alpha)):
            raise ValueError("delta must be a subset of the dimension")

    def holds(self, s):
        if self.kind == "plane":
            got = self.plane.contains(s)
        elif self.kind == "diag":
            got = s[self.i] == s[self.j]
        else:
            got = all(s[j] == 0 for j in range(self.alpha) if j not in self.delta)
        return got if self.sign > 0 else not got

    def negate(self):
        return Literal(self.alpha, self.kind, -self.sign,
                       self.plane, self.i, self.j, self.delta)

    def as_plane(self):
        if self.kind == "plane":
            return self.plane
        if self.kind == "diag":
            return diag_plane(self.alpha, self.i, self.j)
        return None

    def sort_key(self):
        if self.kind == "plane":
            body = (str(self.plane.t),) + tuple(str(r) for r in self.plane.coeffs)
        elif self.kind == "diag":
            body = (self.i, self.j)
        else:
            body = tuple(sorted(self.delta))
        return (self.kind, self.sign, body)


def plane_literal(plane, sign=1):
    return Literal(plane.alpha, "plane", sign, plane=plane)


def q_literal(alpha, i, sign=1):
    return plane_literal(q_plane(alpha, i), sign)


def diag_literal(alpha, i, j, sign=1):
    if i == j:
        raise ValueError("diagonal needs distinct indices")
    a, b = min(i, j), max(i, j)
    return Literal(alpha, "diag", sign, i=a, j=b)


def cdelta_literal(alpha, delta, sign=1, strict=True):
    delta = frozenset(delta)
    if strict and 0 not in delta:
        # the generator set requires 0 in Delta; the wider family drops it
        raise ValueError("generator form requires 0 in delta")
    return Literal(alpha, "cdelta", sign, delta=delta)


def literal_in_G(lit):
    """Is this a generator: q or -q (substituted copy), p or -p with p
    axis-parallel or the 01 diagonal, or a signed c_(Delta){0} with
    0 in Delta?"""
    if lit.kind == "cdelta":
        return 0 in lit.delta
    if lit.kind == "diag":
        return (lit.i, lit.j) == (0, 1)
    return lit.plane.in_pl_s or lit.plane.in_pl_less


# ----------------------------------------------------------------------
# normal forms


@dataclass(frozen=True)
class NormalForm:
    """Finite union of finite intersections of literals (canonical)."""

    alpha: int
    clauses: tuple  # tuple of tuples of Literals

    def is_bottom(self):
        return not self.clauses

    def is_top(self):
        return any(not c for c in self.clauses)


def nf(alpha, clauses):
    check_alpha(alpha)
    out = set()
    for clause in clauses:
        lits = sorted(set(clause), key=Literal.sort_key)
        if any(a == b.negate() for a, b in itertools.combinations(lits, 2)):
            continue
        out.add(tuple(lits))
    if () in out:
        out = {()}
    return NormalForm(alpha, tuple(sorted(out, key=lambda c: [l.sort_key() for l in c])))


def top(alpha):
    return nf(alpha, [()])


def bottom(alpha):
    return nf(alpha, [])


def literal_nf(lit):
    return nf(lit.alpha, [(lit,)])


def membership(x, s):
    if isinstance(x, Literal):
        return x.holds(s)
    if len(s) != x.alpha:
        raise ValueError("point dimension mismatch")
    return any(all(l.holds(s) for l in clause) for clause in x.clauses)


def meet(x, y):
    if x.alpha != y.alpha:
        raise ValueError("dimension mismatch")
    return nf(x.alpha, [a + b for a in x.clauses for b in y.clauses])


def join(x, y):
    if x.alpha != y.alpha:
        raise ValueError("dimension mismatch")
    return nf(x.alpha, x.clauses + y.clauses)


def complement(x):
    out = top(x.alpha)
    for clause in x.clauses:
        out = meet(out, nf(x.alpha, [(l.negate(),) for l in clause]))
    return out


def bool_op(op, *args):
    if op == "meet":
        a, b = args
        return meet(a, b)
    if op == "join":
        a, b = args
        return join(a, b)
    if op == "complement":
        return complement(args[0])
    raise ValueError(f"unknown boolean operation {op!r}")


# ----------------------------------------------------------------------
# cylindrification


def _j_invariant(lit, j):
    if lit.kind == "plane":
        return lit.plane.coeffs[j] == 0
    if lit.kind == "diag":
        return j not in (lit.i, lit.j)
    return j in lit.delta


def _project_literal(plane, sign, j, clause_out):
    """Append p(j|0) with the sign to clause_out; returns False when the
    whole clause dies."""
    got = plane_project(plane, j)
    if got[0] == "plane":
        clause_out.append(plane_literal(got[1], sign))
        return True
    if got[0] == "top":
        return sign > 0  # -top kills the clause
    return sign < 0  # +bottom kills the clause


def _cyl_clause(alpha, clause, j):
    """c_j of one conjunctive clause, per the closure case analysis."""
    inv = []
    pos_planes = []
    neg_planes = []
    pos_deltas = []
    neg_deltas = []
    for lit in clause:
        if lit.kind == "cdelta" and lit.sign > 0:
            pos_deltas.append(lit.delta)
            continue
        if _j_invariant(lit, j):
            inv.append(lit)
        elif lit.kind == "cdelta":
            neg_deltas.append(lit.delta)
        elif lit.sign > 0:
            pos_planes.append(lit.as_plane())
        else:
            neg_planes.append(lit.as_plane())
    pos_delta = None
    if pos_deltas:
        # c_(Delta){0} meet c_(Gamma){0} = c_(Delta cap Gamma){0}
        pos_delta = frozenset.intersection(*pos_deltas)
        if j in pos_delta:
            inv.append(Literal(alpha, "cdelta", 1, delta=pos_delta))
            pos_delta = None

    if pos_delta is not None:
        # a point-set factor pins the witness to u = 0
        out = list(inv)
        for p in pos_planes:
            if not _project_literal(p, 1, j, out):
                return bottom(alpha)
        for q in neg_planes:
            if not _project_literal(q, -1, j, out):
                return bottom(alpha)
        out.append(Literal(alpha, "cdelta", 1, delta=pos_delta | {j}))
        for d in neg_deltas:
            out.append(Literal(alpha, "cdelta", -1, delta=d | {j}))
        return nf(alpha, [tuple(out)])

    if not pos_planes:
        # only complements constrain the witness: finitely many bad
        # values in an infinite field, so the demand is always met
        return nf(alpha, [tuple(inv)])

    result = nf(alpha, [tuple(inv)])
    for p, q in itertools.combinations(pos_planes, 2):
        got = plane_eliminate(p, q, j)
        if got[0] == "bottom":
            return bottom(alpha)
        if got[0] == "plane":
            result = meet(result, literal_nf(plane_literal(got[1], 1)))
    for p in pos_planes:
        for q in neg_planes:
            got = plane_eliminate(p, q, j)
            if got[0] == "top":
                return bottom(alpha)
            if got[0] == "plane":
                result = meet(result, literal_nf(plane_literal(got[1], -1)))
        for d in neg_deltas:
            # c_j(p - c_(Gamma){0}) = -p(j|0) + (p(j|0) - c_j c_(Gamma){0})
            got = plane_project(p, j)
            if got[0] == "bottom":
                continue  # the branch contributes the whole space
            if got[0] == "top":
                piece = literal_nf(Literal(alpha, "cdelta", -1, delta=d | {j}))
            else:
                pj = got[1]
                piece = join(
                    literal_nf(plane_literal(pj, -1)),
                    nf(alpha, [(plane_literal(pj, 1),
                                Literal(alpha, "cdelta", -1, delta=d | {j}))]),
                )
            result = meet(result, piece)
    return result


def cylindrify(g, j):
    if not (0 <= j < g.alpha):
        raise ValueError("axis out of range")
    out = bottom(g.alpha)
    for clause in g.clauses:
        out = join(out, _cyl_clause(g.alpha, clause, j))
    return out


def cylindrify_oracle(g, j, s):
    """Decide exists u: s(j|u) in g by testing finitely many witnesses:
    each plane's unique solution at slot j, zero, and a generic value
    past everything collected."""
    candidates = {Fraction(0)}
    for clause in g.clauses:
        for lit in clause:
            p = lit.as_plane()
            if p is not None and p.coeffs[j] != 0:
                rest = p.t + sum(
                    r * x for i, (r, x) in enumerate(zip(p.coeffs, s)) if i != j
                )
                candidates.add(-rest / p.coeffs[j])
    candidates.add(max(candidates) + 1)
    for u in sorted(candidates):
        probe = s[:j] + (u,) + s[j + 1:]
        if membership(g, probe):
            return True
    return False


# ----------------------------------------------------------------------
# substitutions


def transpose_literal(lit, k, l):
    if lit.kind == "plane":
        return plane_literal(plane_transpose(lit.plane, k, l), lit.sign)
    if lit.kind == "diag":
        swap = {k: l, l: k}
        return diag_literal(lit.alpha, swap.get(lit.i, lit.i),
                            swap.get(lit.j, lit.j), lit.sign)
    delta = set(lit.delta)
    ink, inl = k in delta, l in delta
    if ink != inl:
        # Gamma = (Delta - {i}) + {j}
        delta ^= {k, l}
    return Literal(lit.alpha, "cdelta", lit.sign, delta=frozenset(delta))


def transpose(g, k, l):
    if k == l:
        raise ValueError("transposition needs distinct indices")
    return nf(g.alpha, [tuple(transpose_literal(lit, k, l) for lit in clause)
                        for clause in g.clauses])


def _substitute_1_0(x):
    # the substitution replacing slot 0 by slot 1: c_0(x meet d_01)
    return cylindrify(meet(x, literal_nf(diag_literal(x.alpha, 0, 1))), 0)


def tau(x, y):
    """tau(x, y) = c_1(c_0 x . s_1^0 c_1 y) . c_1 x . c_0 y."""
    part = cylindrify(meet(cylindrify(x, 0), _substitute_1_0(cylindrify(y, 1))), 1)
    return meet(meet(part, cylindrify(x, 1)), cylindrify(y, 0))


def singleton_nf(s):
    alpha = check_alpha(len(s))
    lits = []
    for i, v in enumerate(s):
        coeffs = [Fraction(0)] * alpha
        coeffs[i] = Fraction(1)
        lits.append(plane_literal(make_plane(alpha, -_frac(v), coeffs)))
    return nf(alpha, [tuple(lits)])


def tau_singletons(r, t):
    """Closed form on singletons of the base plane: None unless r_1 = t_0
    and r_i = t_i for i > 1, in which case the single point (r_0, t_1, ...)."""
    r, t = point(r), point(t)
    y = literal_nf(q_literal(len(r), 0))
    if not (membership(y, r) and membership(y, t)):
        raise ValueError("both points must lie on the base plane")
    if r[1] != t[0] or any(r[i] != t[i] for i in range(2, len(r))):
        return None
    return (r[0],) + t[1:]


# ----------------------------------------------------------------------
# the witness solver


def witness_solve(m, constraints):
    """A point s of length m+1 with s_0 + 2 = s_1 + 2 sum_{1<i<=m} s_i,
    violating every given constraint plane and every substituted copy
    of the base plane.

    Each constraint must have a nonzero 0-coefficient and some zero
    coefficient among slots 1..m.  Built by the recursion: pick each
    s_i dodging the finitely many values that would satisfy a
    substituted constraint, closing with the forced s_0.
    """
    if m < 2:
        raise ValueError("need m >= 2")
    alpha = m + 1
    rows = []
    for c in constraints:
        if isinstance(c, AffinePlane):
            t, coeffs = c.t, c.coeffs
        else:
            t, coeffs = _frac(c[0]), tuple(_frac(r) for r in c[1])
        if len(coeffs) != alpha:
            raise ValueError("constraint length must be m+1")
        if coeffs[0] == 0:
            raise ValueError("constraint needs a nonzero 0-coefficient")
        if all(coeffs[j] != 0 for j in range(1, alpha)):
            raise ValueError("constraint needs a zero coefficient past slot 0")
        rows.append((t, coeffs))

    s = [None] * alpha

    def bad_values(idx):
        # values for s_idx that would satisfy a substituted constraint
        out = set()
        for t, r in rows:
            # t - 2 r_0 + (r_0 + r_1) x_1 + sum_{1<j} (2 r_0 + r_j) x_j = 0
            coef = r[0] + r[1] if idx == 1 else 2 * r[0] + r[idx]
            if coef == 0:
                continue
            acc = t - 2 * r[0]
            for j in range(1, idx):
                cj = r[0] + r[1] if j == 1 else 2 * r[0] + r[j]
                acc += cj * s[j]
            out.add(-acc / coef)
        return out

    for idx in range(1, m + 1):
        bad = bad_values(idx)
        if idx == m:
            # dodge the substituted copies of the base plane as well:
            # slots 0 and 1 both reduce to sum_{1<j<=m} x_j = 1
            partial = sum(s[j] for j in range(2, m))
            bad.add(1 - partial)
            # slot k > 1: 3 - 2 x_1 - x_k - 3 sum_{1<j<=m, j!=k} x_j = 0
            for k in range(2, m + 1):
                acc = Fraction(3) - 2 * s[1]
                for jj in range(2, m):
                    acc += (Fraction(-1) if jj == k else Fraction(-3)) * s[jj]
                coef = Fraction(-1) if k == m else Fraction(-3)
                bad.add(acc / -coef)
        s[idx] = max(bad) + 1 if bad else Fraction(1)
    s[0] = -2 + s[1] + 2 * sum(s[i] for i in range(2, m + 1))
    out = tuple(s)
    _check_witness(out, rows)
    return out


def _check_witness(s, rows):
    assert s[0] + 2 == s[1] + 2 * sum(s[2:]), "target equation failed"
    for t, r in rows:
        assert t + sum(ri * si for ri, si in zip(r, s)) != 0, "constraint hit"
    alpha = len(s)
    for l in range(alpha):
        assert not q_plane(alpha, l).contains(s), f"hit substituted plane {l}"


# ----------------------------------------------------------------------
# the perturbation argument


def classify_clause(clause, alpha):
    """The three-way split of conjunctive clauses: under a substituted
    copy of the base plane; under a line not parallel to axis 0 (or the
    01 diagonal); or built solely from the remaining generators."""
    has_pls = any(
        l.kind == "plane" and l.sign > 0 and l.plane.in_pl_s for l in clause
    )
    if has_pls:
        return "G1"
    in_p0 = False
    for l in clause:
        if l.sign <= 0:
            continue
        if l.kind == "diag" and (l.i, l.j) == (0, 1):
            in_p0 = True
        if l.kind == "plane" and l.plane.in_pl_less and l.plane.coeffs[0] != 0:
            in_p0 = True
    return "G2" if in_p0 else "G3"


def perturb_outside_w(clause, z):
    """Given a clause of third-kind generators and a member z, move
    coordinate 0 past every special value: the result stays in the
    clause and leaves the base w plane."""
    if not clause:
        raise ValueError("empty clause")
    alpha = clause[0].alpha
    z = point(z)
    if not all(l.holds(z) for l in clause):
        raise ValueError("z is not a member of the clause")
    if classify_clause(clause, alpha) != "G3":
        raise ValueError("clause literals must avoid the first two kinds")
    for l in clause:
        if not literal_in_G(l):
            raise ValueError("clause contains a non-generator literal")
        if l.sign > 0 and l.kind != "cdelta":
            p = l.as_plane()
            if p.coeffs[0] != 0:
                raise ValueError("positive plane literal not parallel to axis 0")
    bad = set()
    for l in clause:
        if l.sign < 0 and l.kind != "cdelta":
            p = l.as_plane()
            if p.coeffs[0] != 0:
                rest = p.t + sum(r * x for r, x in list(zip(p.coeffs, z))[1:])
                bad.add(-rest / p.coeffs[0])
    wp = w_plane(alpha)
    bad.add(-(wp.t + sum(r * x for r, x in list(zip(wp.coeffs, z))[1:])))
    r = max(bad) + 1 if bad else Fraction(1)
    out = (r,) + z[1:]
    assert all(l.holds(out) for l in clause), "perturbation left the clause"
    assert not wp.contains(out), "perturbation stayed on the base plane"
    return out


# ----------------------------------------------------------------------
# serialization


def _frac_json(x):
    return {"num": x.numerator, "den": x.denominator}


def _frac_from_json(doc):
    return Fraction(doc["num"], doc["den"])


def literal_to_json(lit):
    doc = {"kind": lit.kind, "sign": lit.sign}
    if lit.kind == "plane":
        doc["t"] = _frac_json(lit.plane.t)
        doc["coeffs"] = [_frac_json(r) for r in lit.plane.coeffs]
    elif lit.kind == "diag":
        doc["i"], doc["j"] = lit.i, lit.j
    else:
        doc["delta"] = sorted(lit.delta)
    return doc


def literal_from_json(alpha, doc):
    if doc["kind"] == "plane":
        p = make_plane(alpha, _frac_from_json(doc["t"]),
                       [_frac_from_json(r) for r in doc["coeffs"]])
        return plane_literal(p, doc["sign"])
    if doc["kind"] == "diag":
        return diag_literal(alpha, doc["i"], doc["j"], doc["sign"])
    return Literal(alpha, "cdelta", doc["sign"], delta=frozenset(doc["delta"]))


def nf_to_json(g):
    return {
        "alpha": g.alpha,
        "clauses": [[literal_to_json(l) for l in clause] for clause in g.clauses],
    }


def nf_from_json(doc):
    alpha = doc["alpha"]
    return nf(alpha, [tuple(literal_from_json(alpha, l) for l in clause)
                      for clause in doc["clauses"]])

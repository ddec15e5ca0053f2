"""Finite n-dimensional cylindric atom structures and their complex algebras.

An atom structure holds a finite atom set together with the identity sets
E_ij and the accessibility equivalence relations T_i.  The complex algebra
is the powerset algebra with

    c_i(X) = {a : a T_i b for some b in X}        (cylindrification)
    d_ij   = E_ij                                 (diagonal)

Validation checks the standard CA_n equational schema on the complex
algebra (boolean axioms hold automatically in a field of sets):

    C1  c_i 0 = 0
    C2  x <= c_i x
    C3  c_i(x . c_i y) = c_i x . c_i y
    C4  c_i c_j x = c_j c_i x
    C5  d_ii = 1
    C6  d_ij = c_k(d_ik . d_kj)   for k not in {i, j}
    C7  c_i(d_ij . x) . c_i(d_ij . -x) = 0   for i != j
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field

import numpy as np

# atoms exhaustively checkable as bitmask tables up to this many atoms
EXHAUSTIVE_ATOM_LIMIT = 12


@dataclass(frozen=True)
class AtomStructure:
    """Explicit finite atom structure.

    atoms are opaque strings kept in canonical (lexicographic) order.
    identity maps (i, j) to the set of atoms below d_ij; accessibility
    maps i to the set of ordered pairs in T_i.
    """

    dimension: int
    atoms: tuple
    identity: dict = field(hash=False)
    accessibility: dict = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(sorted(self.atoms)))

    # -- basic views -------------------------------------------------

    def atom_index(self):
        return {a: i for i, a in enumerate(self.atoms)}

    def t_related(self, i, a, b):
        return (a, b) in self.accessibility.get(i, set())

    def in_identity(self, i, j, a):
        if i == j:
            return True
        return a in self.identity.get((i, j), self.identity.get((j, i), set()))

    def t_class(self, i, a):
        """All atoms T_i-related to a (includes a when T_i is reflexive)."""
        return {b for b in self.atoms if self.t_related(i, a, b)}

    def sample_atoms(self, k, rng):
        return [rng.choice(self.atoms) for _ in range(k)]

    # -- serialization ----------------------------------------------

    def to_json(self):
        return {
            "dimension": self.dimension,
            "atoms": list(self.atoms),
            "identity": {
                f"{i},{j}": sorted(v) for (i, j), v in sorted(self.identity.items())
            },
            "accessibility": {
                str(i): sorted([a, b] for (a, b) in v)
                for i, v in sorted(self.accessibility.items())
            },
        }

    @staticmethod
    def from_json(doc):
        identity = {}
        for key, atoms in doc["identity"].items():
            i, j = key.split(",")
            identity[(int(i), int(j))] = frozenset(atoms)
        accessibility = {}
        for key, pairs in doc["accessibility"].items():
            accessibility[int(key)] = {(a, b) for a, b in pairs}
        return AtomStructure(
            dimension=doc["dimension"],
            atoms=tuple(doc["atoms"]),
            identity=identity,
            accessibility=accessibility,
        )

    def dumps(self):
        return json.dumps(self.to_json(), indent=2, sort_keys=True)


@dataclass(frozen=True)
class CaElement:
    """Element of the complex algebra: a subset of the atoms."""

    structure: AtomStructure
    members: frozenset

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        stray = self.members - set(self.structure.atoms)
        if stray:
            raise ValueError(f"atoms not in structure: {sorted(stray)}")

    def __eq__(self, other):
        return (
            isinstance(other, CaElement)
            and self.structure is other.structure
            and self.members == other.members
        )

    def __hash__(self):
        return hash(self.members)


@dataclass(frozen=True)
class ScWord:
    """Finite string of substitution and cylindrification tokens.

    Tokens are ("s", i, j) and ("c", k); all indices below the dimension.
    """

    tokens: tuple

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(tuple(t) for t in self.tokens))
        for t in self.tokens:
            if t[0] not in ("s", "c"):
                raise ValueError(f"bad token {t}")


def subst_token(i, j):
    return ("s", i, j)


def cyl_token(k):
    return ("c", k)


def eval_sc_word(word, n):
    """The partial map induced by a word, built token by token.

    Empty word: identity on n.  Appending a substitution token (i, j)
    composes with the replacement [i|j]; appending a cylindrification
    token k restricts the domain to n minus {k}.
    """
    if isinstance(word, ScWord):
        tokens = word.tokens
    else:
        tokens = [tuple(t) for t in word]
    h = {x: x for x in range(n)}
    for t in tokens:
        if t[0] == "s":
            _, i, j = t
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"index out of range in token {t}")
            repl = {x: (j if x == i else x) for x in range(n)}
            h = {x: h[repl[x]] for x in range(n) if repl[x] in h}
        else:
            _, k = t
            if not 0 <= k < n:
                raise ValueError(f"index out of range in token {t}")
            h = {x: v for x, v in h.items() if x != k}
    return h


# ----------------------------------------------------------------------
# complex algebra operations


def ca_apply(structure, op, *args):
    """Apply a complex-algebra operation.

    op is "join", "meet", "complement", ("cyl", i) or ("diag", i, j).
    Arguments and result are CaElement values over the structure.
    """
    atoms = set(structure.atoms)
    if op == "join":
        members = frozenset().union(*(a.members for a in args)) if args else frozenset()
        return CaElement(structure, members)
    if op == "meet":
        members = atoms
        for a in args:
            members = members & a.members
        return CaElement(structure, frozenset(members))
    if op == "complement":
        (x,) = args
        return CaElement(structure, frozenset(atoms - x.members))
    kind = op[0]
    if kind == "cyl":
        i = op[1]
        if not 0 <= i < structure.dimension:
            raise IndexError(f"cylindrifier index {i} out of range")
        (x,) = args
        out = {a for a in structure.atoms if any(structure.t_related(i, a, b) for b in x.members)}
        return CaElement(structure, frozenset(out))
    if kind == "diag":
        i, j = op[1], op[2]
        if not (0 <= i < structure.dimension and 0 <= j < structure.dimension):
            raise IndexError(f"diagonal index ({i},{j}) out of range")
        out = {a for a in structure.atoms if structure.in_identity(i, j, a)}
        return CaElement(structure, frozenset(out))
    raise ValueError(f"unknown operation {op!r}")


def _bitmask_tables(structure):
    """Cylindrifier tables over bitmask-encoded elements.

    Returns (n_atoms, cyl, diag) where cyl[i] is a numpy array mapping a
    bitmask element to its cylindrification and diag[(i, j)] a bitmask.
    Only usable for small structures.
    """
    atoms = structure.atoms
    k = len(atoms)
    idx = {a: i for i, a in enumerate(atoms)}
    n = structure.dimension
    size = 1 << k

    cyl = {}
    for i in range(n):
        # saturation of a single atom
        atom_cyl = np.zeros(k, dtype=np.int64)
        for a in atoms:
            mask = 0
            for b in structure.t_class(i, a):
                mask |= 1 << idx[b]
            atom_cyl[idx[a]] = mask
        table = np.zeros(size, dtype=np.int64)
        for a_i in range(k):
            bit = 1 << a_i
            sat = atom_cyl[a_i]
            # all masks containing atom a_i pick up its saturation
            half = np.arange(size, dtype=np.int64)
            table |= np.where(half & bit != 0, sat, 0)
        cyl[i] = table
    diag = {}
    for i in range(n):
        for j in range(n):
            mask = 0
            for a in atoms:
                if structure.in_identity(i, j, a):
                    mask |= 1 << idx[a]
            diag[(i, j)] = mask
    return k, cyl, diag


def _check_axioms_bitmask(structure, report):
    k, cyl, diag = _bitmask_tables(structure)
    n = structure.dimension
    size = 1 << k
    full = size - 1
    X = np.arange(size, dtype=np.int64)

    for i in range(n):
        ci = cyl[i]
        if ci[0] != 0:
            report.append(f"C1 violated: c_{i} 0 != 0")
        bad = np.nonzero((X & ci) != X)[0]
        if bad.size:
            report.append(f"C2 violated: x not below c_{i} x at element mask {int(bad[0])}")
        bad = np.nonzero(ci[ci] != ci)[0]
        if bad.size:
            report.append(f"C2 violated: c_{i} not idempotent at element mask {int(bad[0])}")
        # C3 over all pairs, one y per pass
        for y in range(size):
            cy = int(ci[y])
            lhs = ci[X & cy]
            rhs = ci & cy
            bad = np.nonzero(lhs != rhs)[0]
            if bad.size:
                report.append(
                    f"C3 violated for i={i}: x mask {int(bad[0])}, y mask {y}"
                )
                break
    for i in range(n):
        for j in range(i + 1, n):
            ci, cj = cyl[i], cyl[j]
            bad = np.nonzero(ci[cj] != cj[ci])[0]
            if bad.size:
                report.append(f"C4 violated for i={i}, j={j} at element mask {int(bad[0])}")
    for i in range(n):
        if diag[(i, i)] != full:
            report.append(f"C5 violated: d_{i}{i} is not the unit")
    for i in range(n):
        for j in range(n):
            for kk in range(n):
                if kk in (i, j):
                    continue
                rhs = int(cyl[kk][diag[(i, kk)] & diag[(kk, j)]])
                if diag[(i, j)] != rhs:
                    report.append(f"C6 violated for i={i}, j={j}, k={kk}")
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            ci = cyl[i]
            dij = diag[(i, j)]
            lhs = ci[X & dij] & ci[(full & ~X) & dij]
            bad = np.nonzero(lhs != 0)[0]
            if bad.size:
                report.append(f"C7 violated for i={i}, j={j} at element mask {int(bad[0])}")
    return report


def _sampled_elements(structure, rng, pool_size=12, max_set=6):
    pool = structure.sample_atoms(pool_size, rng)
    size = rng.randint(0, max_set)
    return frozenset(rng.sample(pool, min(size, len(pool))))


def _in_cyl(structure, i, x_atoms, t):
    return any(structure.t_related(i, t, b) for b in x_atoms)


def _t_neighbours(structure, i, a, k, rng):
    """A few members of the T_i class of a, without full enumeration."""
    sampler = getattr(structure, "sample_t_class", None)
    if sampler is not None:
        return sampler(i, a, k, rng)
    cls = structure.t_class(i, a)
    if len(cls) <= k:
        return list(cls)
    return rng.sample(list(cls), k)


def _check_axioms_sampled(structure, budget, report, seed=0):
    """Pointwise probe checks; works for structures too big to enumerate.

    Elements are small random atom sets; axioms are tested at probe atoms
    drawn from the sets, their T_i-neighbourhoods and fresh samples.
    Since the T_i are equivalences, C3 reduces to exact finite scans over
    the element sets; C7 needs an outside witness and is only reported
    when one is actually found, so sampling cannot raise false alarms.
    """
    rng = random.Random(seed)
    n = structure.dimension
    for trial in range(budget):
        x = _sampled_elements(structure, rng)
        y = _sampled_elements(structure, rng)
        neighbours = set()
        for a in list(x)[:2]:
            for i in range(n):
                neighbours.update(_t_neighbours(structure, i, a, 3, rng))
        probes = set(x) | set(y) | set(structure.sample_atoms(3, rng)) | neighbours
        i = rng.randrange(n)
        j = rng.randrange(n)
        for t in probes:
            # T_i must be reflexive and symmetric at the probe
            if not structure.t_related(i, t, t):
                report.append(f"T_{i} not reflexive at sampled atom {t}")
            # C2: members of x lie in c_i x
            if t in x and not _in_cyl(structure, i, x, t):
                report.append(f"C2 violated at atom {t}, i={i}")
            # C3: t in c_i(x . c_i y) iff t in c_i x and t in c_i y;
            # with transitive T_i any member of x related to t witnesses
            # both sides, so the equality is decidable from x and y alone
            x_meet = {b for b in x if _in_cyl(structure, i, y, b)}
            lhs = _in_cyl(structure, i, x_meet, t)
            rhs = _in_cyl(structure, i, x, t) and _in_cyl(structure, i, y, t)
            if lhs != rhs:
                report.append(f"C3 violated at atom {t}, i={i}")
            # C5
            if not structure.in_identity(i, i, t):
                report.append(f"C5 violated at atom {t}, i={i}")
            if i != j:
                # C7: t cannot see both d_ij . x and d_ij . -x along T_i
                seen_in = any(
                    structure.in_identity(i, j, b) and structure.t_related(i, t, b)
                    for b in x
                )
                seen_out = any(
                    structure.in_identity(i, j, b)
                    and b not in x
                    and structure.t_related(i, t, b)
                    for b in probes | set(_t_neighbours(structure, i, t, 3, rng))
                )
                if seen_in and seen_out:
                    report.append(f"C7 violated at atom {t}, i={i}, j={j}")
        # symmetry and transitivity spot check along sampled neighbours
        for a in list(x)[:1]:
            for i in range(n):
                near = _t_neighbours(structure, i, a, 3, rng)
                for b in near:
                    if not structure.t_related(i, b, a):
                        report.append(f"T_{i} not symmetric at sampled pair")
                for b in near:
                    for c in near:
                        if not structure.t_related(i, b, c):
                            report.append(f"T_{i} not transitive at sampled triple")
        if report:
            return report
    return report


def check_ca_axioms(structure, budget=10000, seed=0):
    """Check the CA_n schema on the complex algebra.

    Exhaustive (via bitmask tables) when the structure has at most
    EXHAUSTIVE_ATOM_LIMIT atoms and an explicit atom list; otherwise
    `budget` random pointwise probes.  Returns the violations found.
    """
    report = []
    atoms = getattr(structure, "atoms", None)
    if atoms is not None and len(atoms) <= EXHAUSTIVE_ATOM_LIMIT:
        return _check_axioms_bitmask(structure, report)
    return _check_axioms_sampled(structure, budget, report, seed=seed)


def validate_atom_structure(structure):
    """Violation report for the structure-level invariants.

    Checks each T_i is an equivalence relation, E_ii is the full atom
    set, E_ij data is within the atom set, and (for small structures)
    that the complex algebra satisfies the CA_n schema.
    """
    report = []
    atoms = set(structure.atoms)
    n = structure.dimension
    if n < 2:
        report.append(f"dimension {n} below 2")
        return report
    for i in range(n):
        rel = structure.accessibility.get(i, set())
        for (a, b) in rel:
            if a not in atoms or b not in atoms:
                report.append(f"T_{i} mentions unknown atoms ({a},{b})")
        for a in structure.atoms:
            if (a, a) not in rel:
                report.append(f"T_{i} not reflexive: missing ({a},{a})")
        for (a, b) in rel:
            if (b, a) not in rel:
                report.append(f"T_{i} not symmetric: ({a},{b}) without ({b},{a})")
        for (a, b) in rel:
            for (b2, c) in rel:
                if b2 == b and (a, c) not in rel:
                    report.append(f"T_{i} not transitive: ({a},{b}),({b},{c}) without ({a},{c})")
    for i in range(n):
        eii = {a for a in structure.atoms if structure.in_identity(i, i, a)}
        if eii != atoms:
            report.append(f"E_{i}{i} is not the full atom set")
    for (i, j) in structure.identity:
        if not (0 <= i < n and 0 <= j < n):
            report.append(f"identity key ({i},{j}) out of range")
        for a in structure.identity[(i, j)]:
            if a not in atoms:
                report.append(f"E_{i}{j} mentions unknown atom {a}")
    if not report and len(structure.atoms) <= EXHAUSTIVE_ATOM_LIMIT:
        report.extend(check_ca_axioms(structure))
    return report


# ----------------------------------------------------------------------
# substitutions


def factor_substitution(tau, n):
    """Factor a total map tau on n into elementary substitution tokens.

    Non-injective parts are peeled off greedily (an index whose current
    value nobody else still needs can be overwritten).  Remaining cycles
    are routed through a scratch index fixed by tau; a permutation
    touching every index has no scratch and is rejected.
    """
    tau = {i: tau[i] for i in range(n)}
    for i, v in tau.items():
        if not 0 <= v < n:
            raise ValueError(f"tau({i})={v} out of range")
    pending = {i for i in range(n) if tau[i] != i}
    word = []
    changed = True
    while changed:
        changed = False
        for i in sorted(pending):
            if all(tau[j] != i for j in pending if j != i):
                word.append(subst_token(i, tau[i]))
                pending.discard(i)
                changed = True
                break
    if pending:
        # leftovers form disjoint cycles of the permutation part
        fixed = [kk for kk in range(n) if tau[kk] == kk]
        if not fixed:
            raise ValueError(
                "substitution is a permutation touching every index; "
                f"no scratch index available in dimension {n}"
            )
        scratch = fixed[0]
        seen = set()
        for start in sorted(pending):
            if start in seen:
                continue
            cycle = [start]
            cur = tau[start]
            while cur != start:
                cycle.append(cur)
                cur = tau[cur]
            seen.update(cycle)
            word.append(subst_token(scratch, cycle[0]))
            for a, b in zip(cycle, cycle[1:]):
                word.append(subst_token(a, b))
            word.append(subst_token(cycle[-1], scratch))
    return word


def apply_word_to_element(structure, word, x):
    """Run the operators of a word over a complex-algebra element.

    Operator composition is contravariant in the word, so tokens apply
    right to left; a substitution token (i, j) acts as c_i(x . d_ij).
    """
    for t in reversed(word):
        if t[0] == "s":
            _, i, j = t
            if i == j:
                continue
            dij = ca_apply(structure, ("diag", i, j))
            x = ca_apply(structure, ("cyl", i), ca_apply(structure, "meet", x, dij))
        else:
            x = ca_apply(structure, ("cyl", t[1]), x)
    return x


def substitution_apply(structure, tau, x):
    """s_tau(x) on the complex algebra, via elementary substitutions."""
    n = structure.dimension
    if isinstance(tau, dict):
        tau = [tau[i] for i in range(n)]
    word = factor_substitution(list(tau), n)
    return apply_word_to_element(structure, word, x)


def additivity_check(structure, tau):
    """True iff the join of s_tau over all atoms is the top element."""
    total = set()
    for a in structure.atoms:
        res = substitution_apply(structure, tau, CaElement(structure, frozenset([a])))
        total |= res.members
        if len(total) == len(structure.atoms):
            return True
    return total == set(structure.atoms)


# ----------------------------------------------------------------------
# fixtures


def one_atom_structure(n=2, atom="a"):
    """The smallest valid structure: one atom below every diagonal."""
    identity = {(i, j): frozenset([atom]) for i in range(n) for j in range(n)}
    accessibility = {i: {(atom, atom)} for i in range(n)}
    return AtomStructure(n, (atom,), identity, accessibility)


def random_small_structure(rng, n=2, max_atoms=4):
    """A random valid structure, built from random T_i partitions.

    E_ij for i != j is a union of blocks chosen so the CA axioms hold:
    we take the structure of a cartesian set algebra on a small base,
    which is always valid, and relabel its atoms.
    """
    base = rng.randint(1, max_atoms)
    points = list(itertools.product(range(base), repeat=n))
    # atoms are the n-tuples over a small base set (a cartesian set
    # algebra); T_i needs whole agreement classes, so all tuples stay
    prefix = "t%d_" % rng.randint(0, 999)
    atoms = tuple(prefix + "_".join(map(str, p)) for p in points)
    by_name = {a: p for a, p in zip(atoms, points)}
    identity = {}
    for i in range(n):
        for j in range(n):
            identity[(i, j)] = frozenset(a for a in atoms if by_name[a][i] == by_name[a][j])
    accessibility = {}
    for i in range(n):
        rel = set()
        for a in atoms:
            for b in atoms:
                pa, pb = by_name[a], by_name[b]
                if all(pa[k] == pb[k] for k in range(n) if k != i):
                    rel.add((a, b))
        accessibility[i] = rel
    return AtomStructure(n, atoms, identity, accessibility)

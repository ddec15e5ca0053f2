"""The rainbow coloured-graph universe.

Edge colours (all hashable tuples):

    ("gi", i)      greens g_i, 1 <= i <= n-2
    ("g0", i)      greens g_0^i, greenLow <= i <= 0
    ("w",)         plain white
    ("wf", f)      white w_f, f an order-preserving partial function
                   stored as a sorted tuple of (arg, value) pairs
    ("y",)         yellow
    ("b",)         black
    ("r", i, j)    reds r_ij, 0 <= i, j < redBound

Shades of yellow label ordered (n-1)-tuples of distinct nodes:

    ("all",)       the unbounded shade (contains every tint)
    ("s", S)       finite shade, S a sorted tuple within the yellow universe

The forbidden-triple table below forces red labels on edges joining two
apexes of cones with a common base: between two g_0-coloured edges only
index-matching reds survive.  (The two "extra" bans, w_f against a pair
of g_0 greens and against a pair of equal g_i greens, plus yellow/black
against a g_0 pair, close loopholes that would otherwise let an edge
dodge the red bookkeeping entirely.)
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from functools import lru_cache

# canonical colour family order used for sorting: green < white < yellow < black < red
_FAMILY_ORDER = {"gi": 0, "g0": 1, "w": 2, "wf": 3, "y": 4, "b": 5, "r": 6}

ALL_SHADE = ("all",)


def shade_set(values):
    return ("s", tuple(sorted(set(values))))


def is_green(c):
    return c[0] in ("gi", "g0")


def colour_sort_key(c):
    return (_FAMILY_ORDER[c[0]],) + tuple(c[1:])


def shade_contains(shade, tint):
    if shade == ALL_SHADE:
        return True
    return tint in shade[1]


# ----------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class RainbowParams:
    n: int = 3
    green_low: int = -6
    red_bound: int = 16
    yellow_universe: int = 8

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("dimension must be at least 3")
        if self.green_low > 0:
            raise ValueError("green_low must be <= 0")
        if self.red_bound < 1 or self.yellow_universe < 1:
            raise ValueError("red_bound and yellow_universe must be positive")

    def green_supers(self):
        return range(self.green_low, 1)

    def white_fns(self):
        """Order-preserving partial functions [greenLow,0] -> [0,redBound),
        domain size at most 2 (the set is closed under restriction)."""
        args = list(self.green_supers())
        vals = range(self.red_bound)
        fns = [()]
        for a in args:
            for v in vals:
                fns.append(((a, v),))
        for a1, a2 in itertools.combinations(args, 2):
            for v1, v2 in itertools.combinations(vals, 2):
                fns.append(((a1, v1), (a2, v2)))
        return fns

    def edge_colours(self):
        out = [("gi", i) for i in range(1, self.n - 1)]
        out += [("g0", i) for i in self.green_supers()]
        out.append(("w",))
        out += [("wf", f) for f in self.white_fns()]
        out += [("y",), ("b",)]
        out += [("r", i, j) for i in range(self.red_bound) for j in range(self.red_bound)]
        return out

    def shades(self):
        out = [ALL_SHADE]
        universe = range(self.yellow_universe)
        for size in range(self.yellow_universe + 1):
            for s in itertools.combinations(universe, size):
                out.append(("s", s))
        return out

    def check_colour(self, c):
        kind = c[0]
        if kind == "gi":
            return 1 <= c[1] <= self.n - 2
        if kind == "g0":
            return self.green_low <= c[1] <= 0
        if kind == "w":
            return True
        if kind == "wf":
            f = dict(c[1])
            if len(f) > 2:
                return False
            for a, v in f.items():
                if not (self.green_low <= a <= 0 and 0 <= v < self.red_bound):
                    return False
            items = sorted(f.items())
            return all(v1 < v2 for (_, v1), (_, v2) in zip(items, items[1:]))
        if kind in ("y", "b"):
            return True
        if kind == "r":
            return 0 <= c[1] < self.red_bound and 0 <= c[2] < self.red_bound
        return False

    def check_shade(self, s):
        if s == ALL_SHADE:
            return True
        return s[0] == "s" and all(0 <= v < self.yellow_universe for v in s[1])


MINIMAL_PARAMS = RainbowParams(n=3, green_low=-1, red_bound=2, yellow_universe=1)


# ----------------------------------------------------------------------
# forbidden triples


def _order_preserving_pairing(pairs):
    """Is the set of pairs an order-preserving partial function?"""
    (i, k), (j, l) = pairs
    if i == j:
        return k == l
    if i < j:
        return k < l
    return k > l


def forbidden_triple(a, b, c):
    """True iff the unordered colour triple can never form a triangle."""
    tri = sorted([a, b, c], key=colour_sort_key)
    kinds = [t[0] for t in tri]
    greens = [t for t in tri if is_green(t)]
    if len(greens) == 3:
        return True
    if len(greens) == 2:
        other = next(t for t in tri if not is_green(t))
        g1, g2 = greens
        if g1[0] == "gi" and g2[0] == "gi" and g1[1] == g2[1]:
            # equal-index greens admit no white of any kind
            if other[0] in ("w", "wf"):
                return True
        if g1[0] == "g0" and g2[0] == "g0":
            if other[0] in ("w", "wf", "y", "b"):
                return True
            if other[0] == "r":
                return not (
                    _order_preserving_pairing([(g1[1], other[1]), (g2[1], other[2])])
                    or _order_preserving_pairing([(g1[1], other[2]), (g2[1], other[1])])
                )
        return False
    if len(greens) == 1 and greens[0][0] == "g0":
        # (g_0^j, y, w_f) needs j in dom(f)
        rest = [t for t in tri if not is_green(t)]
        if sorted(t[0] for t in rest) == ["wf", "y"]:
            f = dict(next(t for t in rest if t[0] == "wf")[1])
            return greens[0][1] not in f
        return False
    if kinds == ["y", "y", "y"] or sorted(kinds) == ["b", "y", "y"]:
        return True
    if kinds == ["r", "r", "r"]:
        reds = [(t[1], t[2]) for t in tri]
        for p, q, r in itertools.permutations(reds):
            if p[1] == q[0] and p[0] == r[0] and q[1] == r[1]:
                return False
        return True
    return False


# ----------------------------------------------------------------------
# coloured graphs


@dataclass(frozen=True)
class ColouredGraph:
    """Complete or partially built coloured graph.

    edges maps unordered node pairs (stored as sorted 2-tuples) to edge
    colours; tuple_labels maps ordered (n-1)-tuples of distinct nodes to
    shades of yellow.
    """

    n: int
    nodes: frozenset
    edges: dict = field(hash=False)
    tuple_labels: dict = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))
        fixed = {}
        for (u, v), col in self.edges.items():
            if u == v:
                raise ValueError("self loop")
            fixed[(min(u, v), max(u, v))] = col
        object.__setattr__(self, "edges", fixed)

    def colour(self, u, v):
        return self.edges.get((min(u, v), max(u, v)))

    def shade(self, tup):
        return self.tuple_labels.get(tuple(tup))

    def with_edge(self, u, v, colour):
        edges = dict(self.edges)
        edges[(min(u, v), max(u, v))] = colour
        return ColouredGraph(self.n, self.nodes | {u, v}, edges, dict(self.tuple_labels))

    def with_shade(self, tup, shade):
        labels = dict(self.tuple_labels)
        labels[tuple(tup)] = shade
        return ColouredGraph(self.n, self.nodes, dict(self.edges), labels)

    def with_node(self, u):
        return ColouredGraph(self.n, self.nodes | {u}, dict(self.edges), dict(self.tuple_labels))

    def restrict(self, keep):
        keep = set(keep) & self.nodes
        edges = {e: c for e, c in self.edges.items() if set(e) <= keep}
        labels = {t: s for t, s in self.tuple_labels.items() if set(t) <= keep}
        return ColouredGraph(self.n, keep, edges, labels)

    def key(self):
        return (
            self.n,
            tuple(sorted(self.nodes)),
            tuple(sorted(self.edges.items())),
            tuple(sorted(self.tuple_labels.items())),
        )

    def __eq__(self, other):
        return isinstance(other, ColouredGraph) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    # -- JSON --------------------------------------------------------

    def to_json(self):
        return {
            "nodes": sorted(self.nodes),
            "edges": [
                {"u": u, "v": v, "colour": colour_to_json(c)}
                for (u, v), c in sorted(self.edges.items())
            ],
            "tuples": [
                {"nodes": list(t), "shade": shade_to_json(s)}
                for t, s in sorted(self.tuple_labels.items())
            ],
        }

    @staticmethod
    def from_json(doc, n):
        edges = {}
        for e in doc.get("edges", []):
            edges[(e["u"], e["v"])] = colour_from_json(e["colour"])
        labels = {}
        for t in doc.get("tuples", []):
            labels[tuple(t["nodes"])] = shade_from_json(t["shade"])
        return ColouredGraph(n, frozenset(doc["nodes"]), edges, labels)


def empty_graph(n):
    return ColouredGraph(n, frozenset(), {}, {})


def colour_to_json(c):
    kind = c[0]
    if kind == "gi":
        return {"kind": "greenI", "index": c[1]}
    if kind == "g0":
        return {"kind": "greenSuper", "index": c[1]}
    if kind == "w":
        return {"kind": "white"}
    if kind == "wf":
        return {"kind": "whiteF", "fn": [[a, v] for a, v in c[1]]}
    if kind == "y":
        return {"kind": "yellow"}
    if kind == "b":
        return {"kind": "black"}
    if kind == "r":
        return {"kind": "red", "i": c[1], "j": c[2]}
    raise ValueError(f"bad colour {c!r}")


def colour_from_json(doc):
    kind = doc["kind"]
    if kind == "greenI":
        return ("gi", doc["index"])
    if kind == "greenSuper":
        return ("g0", doc["index"])
    if kind == "white":
        return ("w",)
    if kind == "whiteF":
        return ("wf", tuple(sorted((a, v) for a, v in doc["fn"])))
    if kind == "yellow":
        return ("y",)
    if kind == "black":
        return ("b",)
    if kind == "red":
        return ("r", doc["i"], doc["j"])
    raise ValueError(f"bad colour doc {doc!r}")


def shade_to_json(s):
    if s == ALL_SHADE:
        return {"all": True}
    return {"set": list(s[1])}


def shade_from_json(doc):
    if doc.get("all"):
        return ALL_SHADE
    return ("s", tuple(sorted(doc["set"])))


# ----------------------------------------------------------------------
# cones and class J


def find_cones(graph):
    """All (base tuple, apex, tint) triples whose induced subgraph is a cone.

    The base is ordered: position 0 carries the g_0 edge to the apex and
    position j (j >= 1) carries g_j; no other edge of the induced
    subgraph may be green.
    """
    n = graph.n
    out = []
    nodes = sorted(graph.nodes)
    for apex in nodes:
        g0_partners = []
        gi_partners = {j: [] for j in range(1, n - 1)}
        for x in nodes:
            if x == apex:
                continue
            c = graph.colour(x, apex)
            if c is None:
                continue
            if c[0] == "g0":
                g0_partners.append((x, c[1]))
            elif c[0] == "gi":
                gi_partners[c[1]].append(x)
        for (x0, tint) in g0_partners:
            pools = [gi_partners[j] for j in range(1, n - 1)]
            for rest in itertools.product(*pools):
                base = (x0,) + rest
                if len(set(base)) != n - 1:
                    continue
                ok = True
                for u, v in itertools.combinations(base, 2):
                    c = graph.colour(u, v)
                    if c is not None and is_green(c):
                        ok = False
                        break
                if ok:
                    out.append((base, apex, tint))
    return out


def check_J_membership(graph, params):
    """Violation list for membership of the class of full rainbow graphs."""
    violations = []
    n = params.n
    if graph.n != n:
        violations.append(f"graph dimension {graph.n} != params dimension {n}")
        return violations
    nodes = sorted(graph.nodes)
    for u, v in itertools.combinations(nodes, 2):
        c = graph.colour(u, v)
        if c is None:
            violations.append(f"edge ({u},{v}) unlabelled (graph must be complete)")
        elif not params.check_colour(c):
            violations.append(f"edge ({u},{v}) colour {c} outside parameter bounds")
    for tri in itertools.combinations(nodes, 3):
        cols = [graph.colour(u, v) for u, v in itertools.combinations(tri, 2)]
        if any(c is None for c in cols):
            continue
        if forbidden_triple(*cols):
            violations.append(f"forbidden triple {tuple(cols)} on nodes {tri}")
    for tup in itertools.permutations(nodes, n - 1):
        greenless = all(
            (graph.colour(u, v) is None or not is_green(graph.colour(u, v)))
            for u, v in itertools.combinations(tup, 2)
        )
        shade = graph.shade(tup)
        if greenless and shade is None:
            violations.append(f"tuple {tup} has no green edge but carries no shade")
        if not greenless and shade is not None:
            violations.append(f"tuple {tup} contains a green edge but carries shade {shade}")
        if shade is not None and not params.check_shade(shade):
            violations.append(f"tuple {tup} shade {shade} outside parameter bounds")
    for base, apex, tint in find_cones(graph):
        shade = graph.shade(base)
        if shade is not None and not shade_contains(shade, tint):
            violations.append(
                f"{tint}-cone with apex {apex} over base {base} whose shade {shade} "
                f"does not contain the tint"
            )
    return violations


def triangles_ok(graph, u, v, colour):
    """Would labelling edge (u, v) with colour keep all triangles legal?"""
    for z in graph.nodes:
        if z in (u, v):
            continue
        c1 = graph.colour(z, u)
        c2 = graph.colour(z, v)
        if c1 is not None and c2 is not None and forbidden_triple(c1, c2, colour):
            return False
    return True


# ----------------------------------------------------------------------
# atoms


@dataclass(frozen=True)
class RainbowAtom:
    """An equivalence class of surjections n -> Gamma, Gamma a J-member.

    eq[i] is the class index of position i (classes numbered by first
    occurrence), edges and tuples describe the induced labelled graph on
    the class indices.
    """

    eq: tuple
    edges: tuple
    tuples: tuple

    def node_count(self):
        return max(self.eq) + 1

    def graph(self, n):
        return ColouredGraph(
            n, frozenset(range(self.node_count())), dict(self.edges), dict(self.tuples)
        )

    def encode(self):
        return json.dumps(
            [list(self.eq), [[list(e), colour_to_json(c)] for e, c in self.edges],
             [[list(t), shade_to_json(s)] for t, s in self.tuples]],
            separators=(",", ":"),
        )

    @staticmethod
    def decode(text):
        eq, edges, tuples = json.loads(text)
        return RainbowAtom(
            tuple(eq),
            tuple(sorted((tuple(e), colour_from_json(c)) for e, c in edges)),
            tuple(sorted((tuple(t), shade_from_json(s)) for t, s in tuples)),
        )


def atom_from_graph(graph, assignment):
    """The atom [a] for a: n -> graph given by the node assignment tuple.

    The assignment must hit every node of the graph (the surjection
    requirement); nodes are renumbered by first occurrence.
    """
    n = graph.n
    if len(assignment) != n:
        raise ValueError("assignment length must equal the dimension")
    if set(assignment) != set(graph.nodes):
        raise ValueError("assignment must be a surjection onto the graph nodes")
    rename = {}
    eq = []
    for node in assignment:
        if node not in rename:
            rename[node] = len(rename)
        eq.append(rename[node])
    edges = {}
    for (u, v), c in graph.edges.items():
        if u in rename and v in rename:
            a, b = rename[u], rename[v]
            edges[(min(a, b), max(a, b))] = c
    tuples = {}
    for t, s in graph.tuple_labels.items():
        if all(x in rename for x in t):
            tuples[tuple(rename[x] for x in t)] = s
    return RainbowAtom(tuple(eq), tuple(sorted(edges.items())), tuple(sorted(tuples.items())))


@lru_cache(maxsize=200000)
def _restriction_key(atom, i, n):
    """Canonical form of the atom restricted to indices other than i."""
    order = [j for j in range(n) if j != i]
    rename = {}
    eq = []
    for j in order:
        c = atom.eq[j]
        if c not in rename:
            rename[c] = len(rename)
        eq.append(rename[c])
    used = set(rename)
    edges = tuple(
        sorted(
            ((min(rename[u], rename[v]), max(rename[u], rename[v])), c)
            for (u, v), c in atom.edges
            if u in used and v in used
        )
    )
    tuples = tuple(
        sorted(
            (tuple(rename[x] for x in t), s)
            for t, s in atom.tuples
            if all(x in used for x in t)
        )
    )
    return (tuple(eq), edges, tuples)


class RainbowStructure:
    """Lazy atom structure over the rainbow graphs.

    Atoms are RainbowAtom values; the full atom set is enumerable only
    for small parameter sets, but E_ij membership and T_i relatedness
    are decidable directly from the atom data.
    """

    is_rainbow = True

    def __init__(self, params):
        self.params = params
        self.dimension = params.n
        self._tclass_cache = {}

    def in_identity(self, i, j, atom):
        return atom.eq[i] == atom.eq[j]

    def t_key(self, i, atom):
        return _restriction_key(atom, i, self.dimension)

    def t_related(self, i, a, b):
        return self.t_key(i, a) == self.t_key(i, b)

    def validate_atom(self, atom):
        graph = atom.graph(self.dimension)
        return check_J_membership(graph, self.params)

    # -- enumeration -------------------------------------------------

    def enumerate_graphs(self, max_nodes=None, limit=None):
        """All J-members with nodes {0..m-1}, m <= max_nodes (default n)."""
        n = self.dimension
        max_nodes = max_nodes or n
        count = 0
        for m in range(1, max_nodes + 1):
            for graph in _enumerate_complete_graphs(self.params, m):
                yield graph
                count += 1
                if limit is not None and count >= limit:
                    return

    def enumerate_atoms(self, limit=None):
        n = self.dimension
        count = 0
        for graph in self.enumerate_graphs():
            m = len(graph.nodes)
            for assignment in _surjections(n, m):
                atom = atom_from_graph(graph, assignment)
                # only first-occurrence-ordered assignments are canonical
                if tuple(atom.eq) == assignment:
                    yield atom
                    count += 1
                    if limit is not None and count >= limit:
                        return

    def sample_atoms(self, k, rng):
        out = []
        for _ in range(k):
            out.append(self.random_atom(rng))
        return out

    def random_atom(self, rng, max_tries=2000):
        n = self.dimension
        for _ in range(max_tries):
            m = rng.randint(1, n)
            graph = _random_complete_graph(self.params, m, rng)
            if graph is None:
                continue
            assignment = _random_surjection(n, m, rng)
            return atom_from_graph(graph, assignment)
        raise RuntimeError("could not sample a rainbow atom")

    def t_class(self, i, atom):
        """All atoms T_i-related to atom (slot i relabelled every legal way)."""
        key = (i, atom)
        got = self._tclass_cache.get(key)
        if got is None:
            got = self.complete_slot(i, atom)
            self._tclass_cache[key] = got
        return got

    def _slot_base(self, i, atom):
        """The graph restricted away from slot i, plus bookkeeping."""
        n = self.dimension
        graph = atom.graph(n)
        used = sorted({atom.eq[j] for j in range(n) if j != i})
        return graph.restrict(used), used

    def complete_slot(self, i, atom):
        """Enumerate atoms agreeing with atom off slot i."""
        return list(self.iter_t_class(i, atom))

    def iter_t_class(self, i, atom):
        """Lazy T_i class in the same deterministic order as t_class.

        The class can be astronomically large for wide palettes, so
        callers that only need a prefix must not force the whole list.
        """
        n = self.dimension
        base, used = self._slot_base(i, atom)
        seen = set()
        # slot i re-attached to an existing node
        for node in used:
            assignment = tuple(node if j == i else atom.eq[j] for j in range(n))
            cand = atom_from_graph(base, assignment)
            if cand not in seen:
                seen.add(cand)
                yield cand
        # slot i sent to a fresh node, edges and shades freely completed
        fresh = max(used) + 1 if used else 0
        target = base.with_node(fresh)
        for completed in complete_graph_extensions(target, self.params):
            assignment = tuple(fresh if j == i else atom.eq[j] for j in range(n))
            cand = atom_from_graph(completed, assignment)
            if cand not in seen:
                seen.add(cand)
                yield cand

    def sample_t_class(self, i, atom, k, rng):
        """Up to k random members of the T_i class (cheap, non-exhaustive)."""
        n = self.dimension
        base, used = self._slot_base(i, atom)
        out = []
        seen = set()
        for _ in range(4 * k):
            if len(out) >= k:
                break
            if used and rng.random() < 0.4:
                node = rng.choice(used)
                assignment = tuple(node if j == i else atom.eq[j] for j in range(n))
                cand = atom_from_graph(base, assignment)
            else:
                fresh = max(used) + 1 if used else 0
                completed = random_completion(base.with_node(fresh), self.params, rng)
                if completed is None:
                    continue
                assignment = tuple(fresh if j == i else atom.eq[j] for j in range(n))
                cand = atom_from_graph(completed, assignment)
            if cand not in seen:
                seen.add(cand)
                out.append(cand)
        return out

    def materialize(self, max_atoms=200000):
        """Explicit AtomStructure (usable only for tiny parameter sets)."""
        from .atom_structure import AtomStructure

        atoms = []
        for atom in self.enumerate_atoms():
            atoms.append(atom)
            if len(atoms) > max_atoms:
                raise ValueError("too many atoms to materialize")
        ids = {a: a.encode() for a in atoms}
        n = self.dimension
        identity = {
            (i, j): frozenset(ids[a] for a in atoms if a.eq[i] == a.eq[j])
            for i in range(n)
            for j in range(n)
        }
        accessibility = {}
        for i in range(n):
            groups = {}
            for a in atoms:
                groups.setdefault(self.t_key(i, a), []).append(a)
            rel = set()
            for members in groups.values():
                for a in members:
                    for b in members:
                        rel.add((ids[a], ids[b]))
            accessibility[i] = rel
        return AtomStructure(n, tuple(ids.values()), identity, accessibility)


def build_rainbow_atom_structure(params):
    """The rainbow atom structure for the given parameters (lazy form)."""
    structure = RainbowStructure(params)
    # degenerate bounds yield no single-node atoms only if nothing exists
    probe = next(structure.enumerate_atoms(limit=1), None)
    if probe is None:
        raise ValueError("parameter set yields zero atoms")
    return structure


# ----------------------------------------------------------------------
# graph enumeration / completion helpers


def _surjections(n, m):
    for assignment in itertools.product(range(m), repeat=n):
        if len(set(assignment)) == m:
            yield assignment


def greenless_tuples(graph):
    """Ordered (n-1)-tuples of distinct nodes with no green edge inside."""
    n = graph.n
    out = []
    for tup in itertools.permutations(sorted(graph.nodes), n - 1):
        if all(
            not is_green(graph.colour(u, v))
            for u, v in itertools.combinations(tup, 2)
            if graph.colour(u, v) is not None
        ):
            out.append(tup)
    return out


def complete_graph_extensions(graph, params):
    """All J-members extending a partially labelled graph.

    Missing edges take every colour passing the triangle test; then
    every greenless tuple missing a shade takes every legal shade.
    Yields complete graphs in deterministic order.
    """
    nodes = sorted(graph.nodes)
    missing = [
        (u, v)
        for u, v in itertools.combinations(nodes, 2)
        if graph.colour(u, v) is None
    ]
    palette = _palette(params)

    def fill_edges(g, idx):
        if idx == len(missing):
            yield from _fill_shades(g, params)
            return
        u, v = missing[idx]
        for c in palette:
            if triangles_ok(g, u, v, c):
                yield from fill_edges(g.with_edge(u, v, c), idx + 1)

    yield from fill_edges(graph, 0)


def _fill_shades(graph, params):
    greenless = set(greenless_tuples(graph))
    # tuples that carry shades but contain green edges are unfixable
    if any(t not in greenless for t in graph.tuple_labels):
        return
    cone_tints = _cone_tints(graph)
    for base, tints in cone_tints.items():
        s = graph.shade(base)
        if s is not None and any(not shade_contains(s, v) for v in tints):
            return
    need = [t for t in sorted(greenless) if graph.shade(t) is None]
    shades = _shades(params)

    def fill(g, idx):
        if idx == len(need):
            yield g
            return
        t = need[idx]
        req = cone_tints.get(t, ())
        for s in shades:
            if all(shade_contains(s, v) for v in req):
                yield from fill(g.with_shade(t, s), idx + 1)

    yield from fill(graph, 0)


def _cone_tints(graph):
    out = {}
    for base, apex, tint in find_cones(graph):
        out.setdefault(base, set()).add(tint)
    return out


@lru_cache(maxsize=None)
def _palette(params):
    return tuple(params.edge_colours())


@lru_cache(maxsize=None)
def _shades(params):
    return tuple(params.shades())


def _enumerate_complete_graphs(params, m):
    base = ColouredGraph(params.n, frozenset(range(m)), {}, {})
    yield from complete_graph_extensions(base, params)


def random_completion(graph, params, rng):
    """One random J-member extending the graph, or None on a dead end."""
    palette = _palette(params)
    g = graph
    for u, v in itertools.combinations(sorted(g.nodes), 2):
        if g.colour(u, v) is not None:
            continue
        # rejection sampling first; the full palette scan is a last resort
        picked = None
        for _ in range(24):
            c = palette[rng.randrange(len(palette))]
            if triangles_ok(g, u, v, c):
                picked = c
                break
        if picked is None:
            choices = [c for c in palette if triangles_ok(g, u, v, c)]
            if not choices:
                return None
            picked = rng.choice(choices)
        g = g.with_edge(u, v, picked)
    greenless = set(greenless_tuples(g))
    if any(t not in greenless for t in g.tuple_labels):
        return None
    cone_tints = _cone_tints(g)
    for base, tints in cone_tints.items():
        s = g.shade(base)
        if s is not None and any(not shade_contains(s, v) for v in tints):
            return None
    for t in sorted(greenless):
        if g.shade(t) is not None:
            continue
        req = cone_tints.get(t, ())
        # the unbounded shade always qualifies, so options never run dry
        opts = [s for s in _shades(params) if all(shade_contains(s, v) for v in req)]
        g = g.with_shade(t, rng.choice(opts))
    return g


def _random_complete_graph(params, m, rng, max_tries=300):
    for _ in range(max_tries):
        base = ColouredGraph(params.n, frozenset(range(m)), {}, {})
        g = random_completion(base, params, rng)
        if g is not None:
            return g
    return None


def _random_surjection(n, m, rng):
    while True:
        assignment = tuple(rng.randrange(m) for _ in range(n))
        if len(set(assignment)) == m:
            # canonicalize to first-occurrence order
            rename = {}
            out = []
            for x in assignment:
                if x not in rename:
                    rename[x] = len(rename)
                out.append(rename[x])
            return tuple(out)

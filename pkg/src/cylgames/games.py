"""The witness games over atom structures.

Two players build a growing sequence of (hyper)networks.  Abelard (A)
demands witnesses: an initial atom, then cylindrifier moves asking for a
node whose tuple through a face carries a chosen atom; in the H variant
he may also transform and amalgamate earlier positions.  Eloise (E) must
answer each demand with a legal extension; she wins a bounded game by
surviving every round.

Rainbow positions are kept in coloured-graph form; response enumeration
completes the missing edges and shades directly on the graph.  Positions
over small explicit structures fall back to labelling enumeration.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field, replace

from .networks import (
    Hypernetwork,
    LAMBDA0,
    Network,
    apply_map,
    graph_to_network,
    network_to_graph,
    is_lambda0_neat,
    partial_isomorphism_check,
    validate_hypernetwork,
    validate_network,
)
from .rainbow import (
    ALL_SHADE,
    ColouredGraph,
    atom_from_graph,
    check_J_membership,
    complete_graph_extensions,
    find_cones,
    is_green,
    shade_contains,
    triangles_ok,
)


@dataclass(frozen=True)
class GameKind:
    game: str  # "F" or "H"
    node_bound: int | None = None  # m for F; None means unbounded
    rounds: int | None = None  # bounded-round variant

    def __post_init__(self):
        if self.game not in ("F", "H"):
            raise ValueError("game must be 'F' or 'H'")

    def to_json(self):
        return {"game": self.game, "nodeBound": self.node_bound, "rounds": self.rounds}


def F_game(m, rounds=None):
    return GameKind("F", node_bound=m, rounds=rounds)


def H_game(rounds=None):
    return GameKind("H", rounds=rounds)


class BudgetExceeded(RuntimeError):
    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial or {}


# ----------------------------------------------------------------------
# positions


@dataclass(frozen=True)
class Position:
    """One played hypernetwork.

    Rainbow positions carry a coloured graph over representative nodes
    plus aliases for nodes demanded equal to an existing one; generic
    positions carry an explicit network.  hyperlabels lists long
    hyperedges only; short ones are implicitly λ0.
    """

    structure: object = field(hash=False)
    graph: object = None  # ColouredGraph for rainbow positions
    network: object = None  # Network for generic positions
    aliases: tuple = ()
    hyperlabels: tuple = ()

    @property
    def nodes(self):
        base = self.graph.nodes if self.graph is not None else self.network.nodes
        return frozenset(base) | {a for a, _ in self.aliases}

    def rep(self, x):
        return dict(self.aliases).get(x, x)

    def label(self, tup):
        if self.network is not None:
            return self.network.label(tup)
        mapped = tuple(self.rep(x) for x in tup)
        sub = self.graph.restrict(set(mapped))
        return atom_from_graph(sub, mapped)

    def hyperlabel(self, seq):
        seq = tuple(seq)
        n = self.structure.dimension
        if len(seq) <= n:
            return LAMBDA0
        return dict(self.hyperlabels).get(seq)

    def key(self):
        base = self.graph.key() if self.graph is not None else self.network.key()
        return (base, self.aliases, self.hyperlabels)

    def as_network(self):
        if self.network is not None:
            return self.network
        net = graph_to_network(self.graph, self.structure)
        if self.aliases:
            theta = {x: x for x in self.graph.nodes}
            theta.update({a: r for a, r in self.aliases})
            from .networks import apply_map_network

            net = apply_map_network(net, theta)
        return net

    def as_hypernetwork(self):
        return Hypernetwork(self.as_network(), dict(self.hyperlabels))

    def to_json(self):
        doc = self.as_network().to_json()
        doc["hyperlabels"] = [
            {"seq": list(s), "label": l} for s, l in self.hyperlabels
        ]
        return doc


def initial_position(structure, atom):
    """E's forced reply to the initial move: the atom's own pattern."""
    if getattr(structure, "is_rainbow", False):
        return Position(structure, graph=atom.graph(structure.dimension))
    n = structure.dimension
    classes = _atom_classes(structure, atom)
    nodes = sorted(set(classes))
    labels = {}
    todo = [t for t in itertools.product(nodes, repeat=n)]
    # search a coherent labelling; the demanded tuple is pinned
    pinned = {tuple(classes): atom}
    solution = _complete_network_labels(structure, nodes, pinned)
    if solution is None:
        return None
    return Position(structure, network=Network(structure, frozenset(nodes), solution))


def _atom_classes(structure, atom):
    n = structure.dimension
    classes = []
    for i in range(n):
        for j in range(i):
            if structure.in_identity(i, j, atom):
                classes.append(classes[j])
                break
        else:
            classes.append(len(set(classes)))
    return classes


def _complete_network_labels(structure, nodes, pinned):
    """Backtracking label completion for small explicit structures."""
    n = structure.dimension
    atoms = getattr(structure, "atoms", None)
    if atoms is None:
        raise ValueError("generic completion needs an explicit atom list")
    tuples = list(itertools.product(nodes, repeat=n))
    assignment = dict(pinned)

    def consistent(tup, a):
        for i in range(n):
            for j in range(n):
                if tup[i] == tup[j] and not structure.in_identity(i, j, a):
                    return False
        for other, b in assignment.items():
            diff = [i for i in range(n) if other[i] != tup[i]]
            if len(diff) == 1 and not structure.t_related(diff[0], a, b):
                return False
        return True

    def solve_from(idx):
        if idx == len(tuples):
            return dict(assignment)
        tup = tuples[idx]
        if tup in assignment:
            return solve_from(idx + 1)
        for a in atoms:
            if consistent(tup, a):
                assignment[tup] = a
                got = solve_from(idx + 1)
                if got is not None:
                    return got
                del assignment[tup]
        return None

    for tup, a in pinned.items():
        if not consistent(tup, a):
            return None
    return solve_from(0)


# ----------------------------------------------------------------------
# state


@dataclass(frozen=True)
class GameState:
    structure: object = field(hash=False)
    kind: GameKind
    positions: tuple = ()
    round: int = 0
    restricted: bool = True

    def current(self):
        return self.positions[-1]

    def append(self, pos):
        return replace(self, positions=self.positions + (pos,), round=self.round + 1)


def new_game(structure, kind, restricted=True):
    return GameState(structure, kind, (), 0, restricted)


# ----------------------------------------------------------------------
# moves
#
# ("initial", atom)
# ("cyl", net_index, face, k, atom, l)
# ("transform", net_index, theta-items)
# ("amalg", index_m, index_n)


def move_to_json(move, atom_id=None):
    from .networks import default_atom_id

    atom_id = atom_id or default_atom_id
    if move[0] == "initial":
        return {"move": "initial", "atom": atom_id(move[1])}
    if move[0] == "cyl":
        _, s, face, k, b, l = move
        return {
            "move": "cylindrifier",
            "net": s,
            "face": list(face),
            "k": k,
            "atom": atom_id(b),
            "l": l,
        }
    if move[0] == "transform":
        return {"move": "transformation", "net": move[1], "theta": [list(p) for p in move[2]]}
    if move[0] == "amalg":
        return {"move": "amalgamation", "m": move[1], "n": move[2]}
    raise ValueError(f"unknown move {move!r}")


def move_from_json(structure, doc):
    from .rainbow import RainbowAtom

    def atom_decode(text):
        if getattr(structure, "is_rainbow", False):
            return RainbowAtom.decode(text)
        return text

    kind = doc.get("move")
    if kind == "initial":
        return ("initial", atom_decode(doc["atom"]))
    if kind == "cylindrifier":
        return ("cyl", doc["net"], tuple(doc["face"]), doc["k"],
                atom_decode(doc["atom"]), doc["l"])
    if kind == "transformation":
        return ("transform", doc["net"], tuple(tuple(p) for p in doc["theta"]))
    if kind == "amalgamation":
        return ("amalg", doc["m"], doc["n"])
    raise ValueError(f"unknown move document {doc!r}")


def fresh_node(pos):
    k = 0
    while k in pos.nodes:
        k += 1
    return k


def cylindrifier_ok(pos, face, k, b, l, kind):
    """Structural legality of a cylindrifier demand."""
    structure = pos.structure
    n = structure.dimension
    if len(face) != n - 1 or not (0 <= l < n):
        return False
    if not set(face) <= pos.nodes:
        return False
    # a witness demand at a face node is degenerate: the tuple it pins
    # has a forced repeat the demanded atom need not respect
    if k in face:
        return False
    if kind.game == "F":
        if kind.node_bound is not None:
            if k >= kind.node_bound or any(x >= kind.node_bound for x in face):
                return False
    else:
        if k in pos.nodes:
            return False
    probe = face[:l] + (face[0],) + face[l:]
    return structure.t_related(l, b, pos.label(probe))


def has_existing_witness(pos, face, b, l):
    for w in sorted(pos.nodes):
        tup = face[:l] + (w,) + face[l:]
        if pos.label(tup) == b:
            return True
    return False


def amalgamation_ok(state, im, jn):
    pm, pn = state.positions[im], state.positions[jn]
    common = pm.nodes & pn.nodes
    if not common:
        return False
    ident = {x: x for x in sorted(common)}
    if not partial_isomorphism_check(
        _pos_view(pm), _pos_view(pn), ident
    ):
        return False
    if state.restricted:
        # every cross pair must fail to extend the identity isomorphism
        for m in sorted(pm.nodes - pn.nodes):
            for x in sorted(pn.nodes - pm.nodes):
                theta = dict(ident)
                theta[m] = x
                if partial_isomorphism_check(_pos_view(pm), _pos_view(pn), theta):
                    return False
    return True


class _pos_view:
    """Adapter giving a Position the network duck interface."""

    def __init__(self, pos):
        self.pos = pos
        self.nodes = pos.nodes
        self.n = pos.structure.dimension
        self.hyperlabels = dict(pos.hyperlabels)

    def label(self, tup):
        return self.pos.label(tup)


# ----------------------------------------------------------------------
# move enumeration for Abelard


def legal_moves_abelard(state, atom_limit=None, face_limit=None):
    """Ordered lazy enumeration of A's legal moves.

    Cone-style demands (green atoms over already shaded faces) come
    first so that refutation lines are met early.  The generator sets
    .exhausted on its driving _MoveStream once the enumeration is
    complete, which solve() uses to distinguish a true E-win from a cap.
    """
    stream = _MoveStream(state, atom_limit, face_limit)
    return stream


class _MoveStream:
    def __init__(self, state, atom_limit=None, face_limit=None):
        self.state = state
        self.atom_limit = atom_limit
        self.face_limit = face_limit
        self.exhausted = False
        self._gen = self._generate()

    def __iter__(self):
        return self._gen

    def _generate(self):
        state = self.state
        structure = state.structure
        if not state.positions:
            count = 0
            seen = set()
            if getattr(structure, "is_rainbow", False):
                for a in _rainbow_initial_priority(structure):
                    seen.add(a)
                    yield ("initial", a)
            for a in _atoms_iter(structure):
                if a in seen:
                    continue
                yield ("initial", a)
                count += 1
                if self.atom_limit is not None and count >= self.atom_limit:
                    return  # capped: not exhausted
            self.exhausted = True
            return
        moves = self._cylindrifiers()
        if state.kind.game == "H":
            moves = itertools.chain(moves, self._transformations(), self._amalgamations())
        for mv in moves:
            yield mv
        self.exhausted = not self._capped
        return

    _capped = False

    def _cylindrifiers(self):
        state = self.state
        structure = state.structure
        n = structure.dimension
        kind = state.kind
        # cone demands over shaded bases first: the refuting lines for a
        # rainbow position live there, and OR-node search order is the
        # difference between minutes and days
        if getattr(structure, "is_rainbow", False):
            for mv in self._cone_demands():
                yield mv
        for s in range(len(state.positions) - 1, -1, -1):
            pos = state.positions[s]
            nodes = sorted(pos.nodes)
            all_faces = list(itertools.product(nodes, repeat=n - 1))
            faces = all_faces
            if self.face_limit is not None:
                faces = faces[: self.face_limit]
            if len(faces) < len(all_faces):
                self._capped = True
            for face in faces:
                for l in range(n):
                    probe = face[:l] + (face[0],) + face[l:]
                    anchor = pos.label(probe)
                    candidates, exhausted = _t_candidates(
                        structure, l, anchor, self.atom_limit
                    )
                    if not exhausted:
                        self._capped = True
                    for b in candidates:
                        if state.restricted and has_existing_witness(pos, face, b, l):
                            continue
                        if kind.game == "H":
                            ks = [fresh_node(pos)]
                        else:
                            bound = kind.node_bound or (max(nodes) + 2)
                            ks = [k for k in range(bound)]
                        for k in ks:
                            mv = ("cyl", s, face, k, b, l)
                            if cylindrifier_ok(pos, face, k, b, l, kind):
                                yield mv

    def _cone_demands(self):
        """Ordered cone demands on the latest position (rainbow only)."""
        state = self.state
        structure = state.structure
        n = structure.dimension
        kind = state.kind
        s = len(state.positions) - 1
        pos = state.positions[s]
        if pos.graph is None:
            return
        g = pos.graph
        apex_tints_by_base = {}
        for base, apex, tint in find_cones(g):
            apex_tints_by_base.setdefault(base, {})[apex] = tint
        for face in sorted(g.tuple_labels):
            shade = g.shade(face)
            tints = apex_tints_by_base.get(face, {})
            start = (min(tints.values()) - 1) if tints else 0
            cand_tints = list(range(start, structure.params.green_low - 1, -1))
            cand_tints += list(range(0, start, -1))
            l = n - 1
            ks = self._k_order(pos, kind, face, tints)
            for t in cand_tints:
                if not shade_contains(shade, t):
                    continue
                b = _cone_demand_atom(structure, pos, face, t)
                if b is None:
                    continue
                for k in ks:
                    if not cylindrifier_ok(pos, face, k, b, l, kind):
                        continue
                    if state.restricted and has_existing_witness(pos, face, b, l):
                        continue
                    yield ("cyl", s, face, k, b, l)

    def _k_order(self, pos, kind, face, apex_tints):
        if kind.game == "H":
            return [fresh_node(pos)]
        out = []
        fresh = fresh_node(pos)
        out.append(fresh)
        # reuse apexes, highest tint (least constraining to drop) first
        for apex in sorted(apex_tints, key=lambda a: -apex_tints[a]):
            if apex not in face:
                out.append(apex)
        for x in sorted(pos.nodes):
            if x not in out and x not in face:
                out.append(x)
        if kind.node_bound is not None:
            out = [k for k in out if k < kind.node_bound]
        return out

    def _transformations(self):
        state = self.state
        for s in range(len(state.positions)):
            pos = state.positions[s]
            nodes = sorted(pos.nodes)
            pool = list(range(max(nodes) + 2)) if nodes else [0]
            # surjections from small domains onto the node set
            for size in range(len(nodes), len(nodes) + 1):
                for dom in itertools.combinations(pool, size):
                    for images in itertools.permutations(nodes):
                        theta = tuple(zip(dom, images))
                        if state.restricted and len(set(images)) != len(images):
                            continue
                        if dict(theta) == {x: x for x in nodes}:
                            continue
                        yield ("transform", s, theta)

    def _amalgamations(self):
        state = self.state
        for im in range(len(state.positions)):
            for jn in range(len(state.positions)):
                if im == jn:
                    continue
                if state.positions[im].key() == state.positions[jn].key():
                    continue
                if amalgamation_ok(state, im, jn):
                    yield ("amalg", im, jn)


def _rainbow_initial_priority(structure):
    """The scripted opening atom: a tint-0 cone over an all-white base
    whose base tuples carry the unbounded shade."""
    n = structure.dimension
    params = structure.params
    if params.green_low > 0:
        return
    g = ColouredGraph(n, frozenset(range(n)), {}, {})
    apex = n - 1
    g = g.with_edge(0, apex, ("g0", 0))
    for i in range(1, n - 1):
        g = g.with_edge(i, apex, ("gi", i))
    for u, v in itertools.combinations(range(n - 1), 2):
        g = g.with_edge(u, v, ("w",))
    for t in itertools.permutations(range(n - 1), n - 1):
        g = g.with_shade(t, ALL_SHADE)
    if check_J_membership(g, params):
        return
    yield atom_from_graph(g, tuple(range(n)))


def _cone_demand_atom(structure, pos, face, tint):
    """The atom demanding a tint cone apex over the given base face."""
    n = structure.dimension
    g = pos.graph
    mapped = tuple(pos.rep(x) for x in face)
    if len(set(mapped)) != n - 1:
        return None
    sub = g.restrict(set(mapped))
    for u, v in itertools.combinations(mapped, 2):
        c = sub.colour(u, v)
        if c is None or is_green(c):
            return None
    fresh = max(sub.nodes) + 1
    sub = sub.with_node(fresh)
    sub = sub.with_edge(mapped[0], fresh, ("g0", tint))
    for i in range(1, n - 1):
        sub = sub.with_edge(mapped[i], fresh, ("gi", i))
    if check_J_membership(sub, structure.params):
        return None
    return atom_from_graph(sub, mapped + (fresh,))


def _atoms_iter(structure, limit=None):
    atoms = getattr(structure, "atoms", None)
    if atoms is not None:
        yield from atoms
        return
    yield from structure.enumerate_atoms(limit=limit)


def _t_candidates(structure, l, anchor, limit):
    """Atoms T_l-related to the anchor; exhausted flag tells if complete."""
    lazy = getattr(structure, "iter_t_class", None)
    if lazy is not None and limit is not None:
        out = []
        for b in lazy(l, anchor):
            if len(out) >= limit:
                return out, False
            out.append(b)
        return out, True
    cls = structure.t_class(l, anchor)
    if limit is not None and len(cls) > limit:
        return cls[:limit], False
    return cls, True


# ----------------------------------------------------------------------
# Eloise's responses


def legal_responses_eloise(state, move, cap=None):
    """All legal replies to a move, newest position(s) only.

    Raises BudgetExceeded when a cap cuts the enumeration, since a
    truncated response list poisons A-win verdicts.
    """
    structure = state.structure
    if move[0] == "initial":
        pos = initial_position(structure, move[1])
        return [] if pos is None else [pos]
    if move[0] == "transform":
        _, s, theta_items = move
        theta = dict(theta_items)
        pos = state.positions[s]
        hyper = apply_map(pos.as_hypernetwork(), theta)
        if getattr(structure, "is_rainbow", False):
            graph = network_to_graph(hyper.base)
            new = Position(structure, graph=graph,
                           hyperlabels=tuple(sorted(hyper.hyperlabels.items())))
        else:
            new = Position(structure, network=hyper.base,
                           hyperlabels=tuple(sorted(hyper.hyperlabels.items())))
        return [new]
    if move[0] == "cyl":
        _, s, face, k, b, l = move
        pos = state.positions[s]
        if getattr(structure, "is_rainbow", False):
            return _rainbow_cyl_responses(state, pos, face, k, b, l, cap)
        return _generic_cyl_responses(state, pos, face, k, b, l, cap)
    if move[0] == "amalg":
        _, im, jn = move
        return _amalg_responses(state, im, jn, cap)
    raise ValueError(f"unknown move {move!r}")


def rainbow_cyl_seed(state, pos, face, k, b, l):
    """The forced part of a reply to a cylindrifier move.

    Returns ("pos", position) when the reply is fully determined (node
    collapse), ("graph", graph, aliases, new_node) when E still has
    edges and shades to choose, or ("dead", None) when the demand is
    inconsistent with the present position.
    """
    structure = state.structure
    n = structure.dimension
    g = pos.graph
    aliases = dict(pos.aliases)
    if k in aliases:
        del aliases[k]
    elif k in g.nodes:
        # node reuse erases k's edges and shades
        promote = [a for a, r in aliases.items() if r == k]
        if promote:
            # a clone takes over as representative
            new_rep = promote[0]
            del aliases[new_rep]
            rename = {x: (new_rep if x == k else x) for x in g.nodes}
            g = ColouredGraph(
                n,
                frozenset(rename[x] for x in g.nodes),
                {tuple(sorted((rename[u], rename[v]))): c for (u, v), c in g.edges.items()},
                {tuple(rename[x] for x in t): sh for t, sh in g.tuple_labels.items()},
            )
            aliases = {a: (new_rep if r == k else r) for a, r in aliases.items()}
        else:
            g = g.restrict(g.nodes - {k})
    tup = face[:l] + (k,) + face[l:]
    mapped = tuple(pos.rep(x) if x != k else k for x in tup)
    # a demand identifying k with a face node makes k an alias
    collapse = None
    for i in range(n):
        if i != l and b.eq[i] == b.eq[l]:
            collapse = mapped[i]
    if collapse is not None:
        aliases[k] = collapse
        new = Position(structure, graph=g, aliases=tuple(sorted(aliases.items())),
                       hyperlabels=pos.hyperlabels)
        return ("pos", new)
    g = g.with_node(k)
    bg = b.graph(n)
    ok = True
    for i, j in itertools.combinations(range(n), 2):
        u, v = mapped[i], mapped[j]
        if u == v:
            if b.eq[i] != b.eq[j]:
                ok = False
            continue
        if b.eq[i] == b.eq[j]:
            ok = False
            continue
        want = bg.colour(b.eq[i], b.eq[j])
        have = g.colour(u, v)
        if have is None:
            g = g.with_edge(u, v, want)
        elif have != want:
            ok = False
    if not ok:
        return ("dead", None)
    for perm in itertools.permutations(range(n), n - 1):
        nodes_t = tuple(mapped[i] for i in perm)
        if len(set(nodes_t)) != n - 1:
            continue
        shade = bg.shade(tuple(b.eq[i] for i in perm))
        have = g.shade(nodes_t)
        if shade is not None:
            if have is None:
                g = g.with_shade(nodes_t, shade)
            elif have != shade:
                return ("dead", None)
        elif have is not None:
            return ("dead", None)
    return ("graph", g, tuple(sorted(aliases.items())), k)


def _rainbow_cyl_responses(state, pos, face, k, b, l, cap):
    tag, *rest = rainbow_cyl_seed(state, pos, face, k, b, l)
    if tag == "dead":
        return []
    if tag == "pos":
        return [rest[0]]
    g, aliases, _ = rest
    hyper = _extend_hyperlabels(state, pos, k, g.nodes)
    out = []
    for completed in complete_graph_extensions(g, state.structure.params):
        out.append(Position(state.structure, graph=completed,
                            aliases=aliases, hyperlabels=hyper))
        if cap is not None and len(out) > cap:
            raise BudgetExceeded("response enumeration exceeded cap")
    return out


def _extend_hyperlabels(state, pos, k, nodes):
    """Default scheme: long edges keep labels; those through k go fresh."""
    n = state.structure.dimension
    labels = dict(pos.hyperlabels)
    counter = sum(len(p.hyperlabels) for p in state.positions)
    others = sorted(set(nodes) - {k})
    if len(others) >= n:
        for combo in itertools.combinations(others, n):
            seq = combo + (k,)
            labels[seq] = f"h{counter}"
            counter += 1
    return tuple(sorted(labels.items()))


def _generic_cyl_responses(state, pos, face, k, b, l, cap):
    structure = state.structure
    n = structure.dimension
    net = pos.network
    nodes = sorted(set(net.nodes) | {k})
    tup = face[:l] + (k,) + face[l:]
    pinned = {tup: b}
    for t, a in net.labels.items():
        if k not in t or k in net.nodes:
            pinned.setdefault(t, a)
    if k in net.nodes:
        # reuse: forget labels through k
        pinned = {t: a for t, a in net.labels.items() if k not in t}
        pinned[tup] = b
    solutions = _all_network_completions(structure, nodes, pinned, cap)
    return [
        Position(structure, network=Network(structure, frozenset(nodes), sol),
                 hyperlabels=pos.hyperlabels)
        for sol in solutions
    ]


def _all_network_completions(structure, nodes, pinned, cap):
    n = structure.dimension
    atoms = getattr(structure, "atoms", None)
    if atoms is None:
        raise ValueError("generic completion needs an explicit atom list")
    tuples = [t for t in itertools.product(nodes, repeat=n)]
    assignment = dict(pinned)
    out = []

    def consistent(tup, a):
        for i in range(n):
            for j in range(n):
                if tup[i] == tup[j] and not structure.in_identity(i, j, a):
                    return False
        for other, bb in assignment.items():
            diff = [i for i in range(n) if other[i] != tup[i]]
            if len(diff) == 1 and not structure.t_related(diff[0], a, bb):
                return False
        return True

    for tup, a in pinned.items():
        if not consistent(tup, a):
            return []

    def fill(idx):
        if idx == len(tuples):
            out.append(dict(assignment))
            if cap is not None and len(out) > cap:
                raise BudgetExceeded("response enumeration exceeded cap")
            return
        tup = tuples[idx]
        if tup in assignment:
            fill(idx + 1)
            return
        for a in atoms:
            if consistent(tup, a):
                assignment[tup] = a
                fill(idx + 1)
                del assignment[tup]

    fill(0)
    return out


def _amalg_responses(state, im, jn, cap):
    structure = state.structure
    pm, pn = state.positions[im], state.positions[jn]
    if not getattr(structure, "is_rainbow", False):
        raise ValueError("amalgamation implemented for rainbow structures")
    gm = _dealias_graph(pm)
    gn = _dealias_graph(pn)
    merged = ColouredGraph(structure.dimension, gm.nodes | gn.nodes, {}, {})
    for g in (gm, gn):
        for (u, v), c in g.edges.items():
            have = merged.colour(u, v)
            if have is not None and have != c:
                return []
            merged = merged.with_edge(u, v, c)
        for t, sh in g.tuple_labels.items():
            have = merged.shade(t)
            if have is not None and have != sh:
                return []
            merged = merged.with_shade(t, sh)
    labels = dict(pm.hyperlabels)
    for seq, lab in pn.hyperlabels:
        labels.setdefault(seq, lab)
    out = []
    for completed in complete_graph_extensions(merged, structure.params):
        out.append(Position(structure, graph=completed,
                            hyperlabels=tuple(sorted(labels.items()))))
        if cap is not None and len(out) > cap:
            raise BudgetExceeded("response enumeration exceeded cap")
    return out


def _dealias_graph(pos):
    if pos.graph is None:
        raise ValueError("expected a graph-backed position")
    return pos.graph


# ----------------------------------------------------------------------
# canonicalization


def canonical_state_key(state):
    perm = _canonical_perm(state)
    parts = []
    for pos in state.positions:
        parts.append(_permuted_key(pos, perm))
    return (state.kind, state.restricted, state.round, tuple(parts))


def _canonical_perm(state):
    if not state.positions:
        return {}
    nodes = sorted(set().union(*[set(p.nodes) for p in state.positions]))
    if len(nodes) > 8:
        return {x: x for x in nodes}
    latest = state.positions[-1]
    cells = _refine(latest, nodes)
    total = 1
    for c in cells:
        f = 1
        for i in range(2, len(c) + 1):
            f *= i
        total *= f
    if total > 5040:
        return {x: x for x in nodes}
    best = None
    best_perm = None
    for perm in _cell_permutations(cells, nodes):
        key = tuple(_permuted_key(p, perm) for p in state.positions)
        if best is None or key < best:
            best = key
            best_perm = perm
    return best_perm


def _refine(pos, nodes):
    """Partition nodes by iterated local colour signatures."""
    colour = {x: 0 for x in nodes}
    graphs = [pos.graph] if pos.graph is not None else []
    for _ in range(3):
        sig = {}
        for x in nodes:
            incident = []
            for g in graphs:
                for (u, v), c in g.edges.items():
                    if x == u:
                        incident.append((c, colour.get(v, -1)))
                    elif x == v:
                        incident.append((c, colour.get(u, -1)))
            sig[x] = (colour[x], tuple(sorted(incident, key=repr)))
        ranks = {s: i for i, s in enumerate(sorted(set(sig.values()), key=repr))}
        colour = {x: ranks[sig[x]] for x in nodes}
    cells = {}
    for x in nodes:
        cells.setdefault(colour[x], []).append(x)
    return [sorted(c) for _, c in sorted(cells.items())]


def _cell_permutations(cells, nodes):
    pools = [list(itertools.permutations(c)) for c in cells]
    for combo in itertools.product(*pools):
        perm = {}
        for cell, image in zip(cells, combo):
            for src, dst in zip(cell, image):
                perm[src] = dst
        yield perm


def _permuted_key(pos, perm):
    if pos.graph is not None:
        g = pos.graph
        edges = tuple(sorted(
            ((tuple(sorted((perm.get(u, u), perm.get(v, v))))), c)
            for (u, v), c in g.edges.items()
        ))
        labels = tuple(sorted(
            (tuple(perm.get(x, x) for x in t), sh) for t, sh in g.tuple_labels.items()
        ))
        nodes = tuple(sorted(perm.get(x, x) for x in g.nodes))
        aliases = tuple(sorted(
            (perm.get(a, a), perm.get(r, r)) for a, r in pos.aliases
        ))
        hyper = tuple(sorted(
            (tuple(perm.get(x, x) for x in s), l) for s, l in pos.hyperlabels
        ))
        return (nodes, edges, labels, aliases, hyper)
    return pos.key()


# ----------------------------------------------------------------------
# solving


@dataclass
class SolveResult:
    winner: str  # "A" or "E"
    table: dict
    stats: dict
    kind: GameKind
    rounds: int
    restricted: bool


class Solver:
    """Bounded-round AND-OR search with a canonical transposition table.

    winner "A": some A move all of whose E replies lose within the
    remaining rounds.  winner "E": every A move (fully enumerated) has a
    surviving reply.  A capped A enumeration can never produce an E
    verdict; BudgetExceeded is raised instead.
    """

    def __init__(self, structure, kind, rounds, restricted=True,
                 abelard_cap=None, response_cap=20000, node_budget=2000000):
        self.structure = structure
        self.kind = kind
        self.rounds = rounds
        self.restricted = restricted
        self.abelard_cap = abelard_cap
        self.response_cap = response_cap
        self.node_budget = node_budget
        self.table = {}
        self.stats = {"nodes": 0}

    def a_wins(self, state):
        if state.round >= self.rounds:
            return False
        key = canonical_state_key(state)
        if key in self.table:
            return self.table[key]
        self.stats["nodes"] += 1
        if self.stats["nodes"] > self.node_budget:
            raise BudgetExceeded("solve node budget exceeded", {"stats": self.stats})
        move, any_move, exhausted = self._search_moves(state)
        if move is not _NO_MOVE:
            result = True
        elif not any_move and self.restricted and state.positions:
            # A cannot move under the restrictions: he loses
            result = False
        elif exhausted:
            result = False
        else:
            raise BudgetExceeded(
                "abelard move enumeration capped before an E verdict",
                {"stats": self.stats},
            )
        self.table[key] = result
        return result

    def _search_moves(self, state):
        stream = legal_moves_abelard(state, atom_limit=self.abelard_cap)
        any_move = False
        capped = False
        for move in stream:
            any_move = True
            try:
                responses = legal_responses_eloise(state, move, cap=self.response_cap)
            except BudgetExceeded:
                # cannot verify this move refutes E; it may still exist,
                # so an E verdict is off the table
                capped = True
                continue
            if not responses:
                return move, any_move, stream.exhausted and not capped
            if all(self.a_wins(state.append(r)) for r in responses):
                return move, any_move, stream.exhausted and not capped
        return _NO_MOVE, any_move, stream.exhausted and not capped

    def winning_move(self, state):
        """The first A move whose every E reply loses, or _NO_MOVE."""
        move, _, _ = self._search_moves(state)
        return move

    def surviving_response(self, state, move):
        responses = legal_responses_eloise(state, move, cap=self.response_cap)
        for r in responses:
            if not self.a_wins(state.append(r)):
                return r
        return responses[0] if responses else None


_NO_MOVE = object()


def solve(structure, kind, rounds, restricted=True,
          abelard_cap=None, response_cap=20000, node_budget=2000000):
    solver = Solver(structure, kind, rounds, restricted,
                    abelard_cap, response_cap, node_budget)
    start = new_game(structure, kind, restricted)
    winner = "A" if solver.a_wins(start) else "E"
    result = SolveResult(winner, solver.table, solver.stats, kind, rounds, restricted)
    result.solver = solver
    return result


def strategy_from_solve(result, structure, player):
    """Replay strategies backed by the solver's table."""
    solver = result.solver

    def pick_a(state):
        if state.round >= result.rounds:
            return None
        move = solver.winning_move(state)
        return None if move is _NO_MOVE else move

    def pick_e(state, move):
        return solver.surviving_response(state, move)

    return pick_a if player == "A" else pick_e


# ----------------------------------------------------------------------
# match running


def run_match(structure, kind, strat_a, strat_e, rounds, restricted=True):
    """Play the two strategies against each other; returns a trace dict."""
    state = new_game(structure, kind, restricted)
    trace = {
        "kind": kind.to_json(),
        "rounds": rounds,
        "moves": [],
        "winner": None,
        "haltReason": None,
    }
    states = [state]
    for _ in range(rounds):
        move = strat_a(state)
        if move is None:
            trace["winner"] = "E"
            trace["haltReason"] = "abelard cannot move"
            break
        if not _move_is_legal(state, move):
            trace["winner"] = "E"
            trace["haltReason"] = "abelard played an illegal move"
            break
        response = strat_e(state, move)
        if response is None:
            trace["moves"].append({"by": "A", "move": move_to_json(move), "state": None})
            trace["winner"] = "A"
            trace["haltReason"] = "eloise has no response"
            break
        state = state.append(response)
        states.append(state)
        trace["moves"].append(
            {"by": "A", "move": move_to_json(move), "state": None}
        )
        trace["moves"].append(
            {"by": "E", "move": {"move": "respond"}, "state": response.to_json()}
        )
    else:
        trace["winner"] = "E"
        trace["haltReason"] = "eloise survived all rounds"
    if trace["winner"] is None:
        trace["winner"] = "E"
        trace["haltReason"] = trace["haltReason"] or "eloise survived all rounds"
    trace["states"] = states
    return trace


def _move_is_legal(state, move):
    if move[0] == "initial":
        return not state.positions
    if not state.positions:
        return False
    if move[0] == "cyl":
        _, s, face, k, b, l = move
        if not (0 <= s < len(state.positions)):
            return False
        pos = state.positions[s]
        if not cylindrifier_ok(pos, face, k, b, l, state.kind):
            return False
        if state.restricted and has_existing_witness(pos, face, b, l):
            return False
        return True
    if move[0] == "transform":
        _, s, theta_items = move
        if not (0 <= s < len(state.positions)):
            return False
        theta = dict(theta_items)
        if state.restricted and len(set(theta.values())) != len(theta):
            return False
        return set(theta.values()) <= set(state.positions[s].nodes)
    if move[0] == "amalg":
        _, im, jn = move
        if not (0 <= im < len(state.positions) and 0 <= jn < len(state.positions)):
            return False
        return amalgamation_ok(state, im, jn)
    return False


# ----------------------------------------------------------------------
# scripted strategies


class StrategyError(RuntimeError):
    pass


class ParameterExhausted(StrategyError):
    """The red index range is too small for the required spacing."""


def _gap(remaining):
    return 3 ** max(remaining, 0)


def abelard_rainbow_script(structure, kind, rounds=None, solver=None):
    """A's scripted attack: a tint-0 cone, then ever lower cones on the
    same base, reusing the highest-tint apex when the node bound bites.
    Falls back to the solver when the script runs out of tints."""
    if not getattr(structure, "is_rainbow", False):
        raise ValueError("the script needs a rainbow structure")
    params = structure.params
    if params.green_low > -3:
        raise ValueError("script needs green superscripts down to -3")

    def pick(state):
        if not state.positions:
            for a in _rainbow_initial_priority(structure):
                return ("initial", a)
            return None
        s = len(state.positions) - 1
        pos = state.positions[s]
        g = pos.graph
        if g is None:
            return None
        cones = {}
        for base, apex, tint in find_cones(g):
            cones.setdefault(base, {})[apex] = tint
        for face in sorted(g.tuple_labels):
            tints = cones.get(face)
            if not tints:
                continue
            t = min(tints.values()) - 1
            if t < params.green_low:
                continue
            b = _cone_demand_atom(structure, pos, face, t)
            if b is None:
                continue
            l = structure.dimension - 1
            ks = [fresh_node(pos)]
            ks += [a for a in sorted(tints, key=lambda a: -tints[a]) if a not in face]
            for k in ks:
                if not cylindrifier_ok(pos, face, k, b, l, state.kind):
                    continue
                if state.restricted and has_existing_witness(pos, face, b, l):
                    continue
                return ("cyl", s, face, k, b, l)
        if solver is not None:
            move = solver.winning_move(state)
            return None if move is _NO_MOVE else move
        return None

    return pick


def random_abelard(structure, rng, samples=40):
    """A random restricted opponent: samples legal demands instead of
    enumerating the whole move space."""

    def pick(state):
        if not state.positions:
            if getattr(structure, "is_rainbow", False):
                return ("initial", structure.random_atom(rng))
            atoms = list(_atoms_iter(structure))
            return ("initial", rng.choice(atoms))
        n = structure.dimension
        candidates = []
        for _ in range(samples):
            s = rng.randrange(len(state.positions))
            pos = state.positions[s]
            nodes = sorted(pos.nodes)
            face = tuple(rng.choice(nodes) for _ in range(n - 1))
            l = rng.randrange(n)
            probe = face[:l] + (face[0],) + face[l:]
            anchor = pos.label(probe)
            sampler = getattr(structure, "sample_t_class", None)
            if sampler is not None:
                bs = sampler(l, anchor, 3, rng)
            else:
                bs = structure.t_class(l, anchor)[:3]
            k = fresh_node(pos)
            for b in bs:
                mv = ("cyl", s, face, k, b, l)
                if not cylindrifier_ok(pos, face, k, b, l, state.kind):
                    continue
                if state.restricted and has_existing_witness(pos, face, b, l):
                    continue
                candidates.append(mv)
            if candidates:
                break
        return candidates[0] if candidates else None

    return pick


@dataclass
class StrategyRecord:
    """One round of E's bookkeeping, kept for invariant checking."""

    rho: dict
    owners: dict  # frozenset({u, v}) -> "A" | "E"
    envelopes: dict  # long hyperedge -> frozenset of nodes


class EloiseStrategy:
    """E's scripted survival strategy for the hypernetwork game.

    Keeps the order-preserving red index map with 3^(rounds remaining)
    spacing, edge ownership, and long-hyperedge envelopes; chooses
    whites, blacks and reds by the fixed priority rules.
    """

    def __init__(self, structure, total_rounds):
        if not getattr(structure, "is_rainbow", False):
            raise ValueError("the strategy needs a rainbow structure")
        self.structure = structure
        self.params = structure.params
        self.total = total_rounds
        self.rho = {}
        self.history = []

    # -- red index map ------------------------------------------------

    def _extend_rho(self, tints, remaining):
        gap = _gap(remaining)
        rb = self.params.red_bound
        for t in sorted(tints, reverse=True):
            if t in self.rho:
                continue
            lows = [v for u, v in self.rho.items() if u < t]
            highs = [v for u, v in self.rho.items() if u > t]
            if not self.rho:
                # middle of the range: later tints may fall on either side
                v = (rb - 1) // 2
            elif not highs:
                v = max(lows) + gap
            elif not lows:
                v = min(highs) - gap
            else:
                v = min(highs) - gap
                if v < max(lows) + gap:
                    raise ParameterExhausted(
                        f"no room for tint {t} with gap {gap}")
            if not (0 <= v < rb):
                raise ParameterExhausted(
                    f"index {v} for tint {t} outside [0,{rb})")
            self.rho[t] = v

    def _graph_tints(self, g):
        return {c[1] for c in g.edges.values() if c[0] == "g0"}

    # -- edge labelling -----------------------------------------------

    def _edge_choice(self, g, common, x, k):
        """The label for the free edge (x, k), scanning the common nodes."""
        col = g.colour
        apex_pair = None
        for c in common:
            a, b = col(c, x), col(c, k)
            if a is not None and b is not None and a[0] == "g0" and b[0] == "g0":
                apex_pair = (c, a[1], b[1])
                break
        if apex_pair is not None:
            c0, p, q = apex_pair
            base_edge = None
            for c1 in common:
                if c1 == c0:
                    continue
                a, b = col(c1, x), col(c1, k)
                if a is not None and b is not None and is_green(a) and is_green(b):
                    base_edge = col(c0, c1)
                    break
            self._extend_rho([p, q], self._remaining)
            f = dict(base_edge[1]) if base_edge is not None and base_edge[0] == "wf" else {}
            # the base function where defined, the index map for tints
            # coned after the white edge was laid down
            candidates = [("r", f.get(p, self.rho[p]), f.get(q, self.rho[q])),
                          ("r", self.rho[p], self.rho[q])]
            for cand in candidates:
                if triangles_ok(g, x, k, cand):
                    return cand
            raise StrategyError(
                f"scripted red {candidates[0]} is illegal at ({x},{k})")
        # white with a domain collecting green-vs-yellow tints
        S = set()
        f = None
        for side in (x, k):
            for c, c2 in itertools.combinations(common, 2):
                e = col(c, c2)
                a, a2 = col(side, c), col(side, c2)
                if (e is not None and e[0] == "r"
                        and a is not None and a2 is not None
                        and a[0] == "g0" and a2[0] == "g0"):
                    pairs = sorted([(a[1], e[1]), (a2[1], e[2])])
                    if all(v1 < v2 for (_, v1), (_, v2) in zip(pairs, pairs[1:])):
                        f = dict(pairs)
                    break
            if f is not None:
                break
        for c in common:
            a, b = col(c, x), col(c, k)
            if a is None or b is None:
                continue
            if a[0] == "g0" and b == ("y",):
                S.add(a[1])
            elif a == ("y",) and b[0] == "g0":
                S.add(b[1])
        if len(S) > 2:
            raise StrategyError(f"white domain {sorted(S)} has more than 2 tints")
        if f is None:
            f = {t: i for i, t in enumerate(sorted(S))}
        else:
            for t in sorted(S):
                f.setdefault(t, max(f.values(), default=-1) + 1)
        cand = ("wf", tuple(sorted(f.items())))
        if self.params.check_colour(cand) and triangles_ok(g, x, k, cand):
            return cand
        if triangles_ok(g, x, k, ("b",)):
            return ("b",)
        rb = self.params.red_bound
        values = sorted(set(self.rho.values()))
        pool = [(a, b) for a in values for b in values]
        pool += [(a, b) for a in range(rb) for b in range(rb)]
        for a, b in pool:
            if triangles_ok(g, x, k, ("r", a, b)):
                return ("r", a, b)
        raise StrategyError(f"no legal label for edge ({x},{k})")

    def _fill_shades(self, g):
        cones = {}
        for base, apex, tint in find_cones(g):
            cones.setdefault(base, set()).add(tint)
        from .rainbow import greenless_tuples

        for t in sorted(greenless_tuples(g)):
            if g.shade(t) is not None:
                continue
            tints = cones.get(t, set())
            if all(0 <= v < self.params.yellow_universe for v in tints):
                g = g.with_shade(t, ("s", tuple(sorted(tints))))
            else:
                g = g.with_shade(t, ALL_SHADE)
        return g

    # -- move handling ------------------------------------------------

    def __call__(self, state, move):
        self._remaining = self.total - (state.round + 1)
        if move[0] == "initial":
            return self._initial(state, move[1])
        if move[0] == "cyl":
            return self._cyl(state, move)
        if move[0] == "transform":
            return self._transform(state, move)
        if move[0] == "amalg":
            return self._amalg(state, move)
        raise ValueError(f"unknown move {move!r}")

    def _record(self, owners, envelopes):
        self.history.append(StrategyRecord(dict(self.rho), owners, envelopes))

    def _initial(self, state, atom):
        pos = initial_position(self.structure, atom)
        if pos is None:
            raise StrategyError("initial atom admits no position")
        self._extend_rho(self._graph_tints(pos.graph), self._remaining)
        owners = {frozenset(e): "A" for e in pos.graph.edges}
        self._record(owners, {})
        return pos

    def _cyl(self, state, move):
        _, s, face, k, b, l = move
        pos = state.positions[s]
        tag, *rest = rainbow_cyl_seed(state, pos, face, k, b, l)
        if tag == "dead":
            raise StrategyError("demand inconsistent with the position")
        prior = self.history[-1] if self.history else StrategyRecord({}, {}, {})
        if tag == "pos":
            self._record(dict(prior.owners), dict(prior.envelopes))
            return rest[0]
        g, aliases, _ = rest
        self._extend_rho(self._graph_tints(b.graph(self.structure.dimension)),
                         self._remaining)
        owners = dict(prior.owners)
        for e in g.edges:
            owners.setdefault(frozenset(e), "A")
        common = sorted(x for x in g.nodes if x != k and g.colour(x, k) is not None)
        for x in sorted(g.nodes):
            if x == k or g.colour(x, k) is not None:
                continue
            c = self._edge_choice(g, common, x, k)
            g = g.with_edge(x, k, c)
            owners[frozenset((x, k))] = "E"
        g = self._fill_shades(g)
        report = check_J_membership(g, self.params)
        if report:
            raise StrategyError("response leaves the graph class: " + report[0])
        hyper = _extend_hyperlabels(state, pos, k, g.nodes)
        envelopes = dict(prior.envelopes)
        for seq, _lab in hyper:
            if k in seq:
                envelopes[seq] = frozenset(g.nodes)
        new = Position(self.structure, graph=g, aliases=aliases, hyperlabels=hyper)
        self._record(owners, envelopes)
        return new

    def _transform(self, state, move):
        _, s, theta_items = move
        resp = legal_responses_eloise(state, move)
        theta = dict(theta_items)
        prior = self.history[-1] if self.history else StrategyRecord({}, {}, {})
        owners = {}
        for pair, who in prior.owners.items():
            pre = [x for x in theta if theta[x] in pair]
            if len(pre) >= 2:
                owners[frozenset(pre[:2])] = who
        envelopes = {}
        self._record(owners, envelopes)
        return resp[0]

    def _amalg(self, state, move):
        _, im, jn = move
        pm, pn = state.positions[im], state.positions[jn]
        gm, gn = pm.graph, pn.graph
        n = self.structure.dimension
        merged = ColouredGraph(n, gm.nodes | gn.nodes, {}, {})
        for g in (gm, gn):
            for (u, v), c in g.edges.items():
                have = merged.colour(u, v)
                if have is not None and have != c:
                    raise StrategyError("amalgamation with conflicting edges")
                merged = merged.with_edge(u, v, c)
            for t, sh in g.tuple_labels.items():
                have = merged.shade(t)
                if have is not None and have != sh:
                    raise StrategyError("amalgamation with conflicting shades")
                merged = merged.with_shade(t, sh)
        prior = self.history[-1] if self.history else StrategyRecord({}, {}, {})
        owners = dict(prior.owners)
        for g in (gm, gn):
            for e in g.edges:
                owners.setdefault(frozenset(e), "A")
        common = sorted(gm.nodes & gn.nodes)
        for i in sorted(gm.nodes - gn.nodes):
            for j in sorted(gn.nodes - gm.nodes):
                if merged.colour(i, j) is not None:
                    continue
                c = self._edge_choice(merged, common, i, j)
                merged = merged.with_edge(i, j, c)
                owners[frozenset((i, j))] = "E"
        merged = self._fill_shades(merged)
        report = check_J_membership(merged, self.params)
        if report:
            raise StrategyError("amalgam leaves the graph class: " + report[0])
        labels = dict(pm.hyperlabels)
        for seq, lab in pn.hyperlabels:
            labels.setdefault(seq, lab)
        self._record(owners, dict(prior.envelopes))
        return Position(self.structure, graph=merged,
                        hyperlabels=tuple(sorted(labels.items())))


def eloise_rainbow_strategy(structure, total_rounds):
    return EloiseStrategy(structure, total_rounds)


def check_strategy_invariants(trace, strategy=None):
    """Audit a played match against E's book-keeping invariants.

    Checks, round by round: green/yellow edges belong to A; the red
    index map only grows, covers exactly the green superscripts seen,
    and keeps its order with 3^(rounds remaining) spacing; E's red
    choices agree with the map (or the white function on the relevant
    edge); positions stay valid lambda0-neat hypernetworks; white
    function domains have at most two tints; equally hyperlabelled
    long edges induce local isomorphisms.  Returns a report with every
    failure found and the first one separately.
    """
    strategy = strategy if strategy is not None else trace.get("eloise")
    if strategy is None:
        raise ValueError("no strategy records attached to the trace")
    states = trace["states"]
    final = states[-1]
    failures = []

    def fail(s, prop, msg):
        failures.append({"round": s, "property": prop, "message": msg})

    history = strategy.history
    for s, rec in enumerate(history):
        if s >= len(final.positions):
            break
        pos = final.positions[s]
        g = pos.graph
        if g is None:
            continue
        # property I: demanded colours belong to A
        for (u, v), c in sorted(g.edges.items()):
            if c[0] in ("g0", "gi", "y"):
                if rec.owners.get(frozenset((u, v))) != "A":
                    fail(s, "I", f"green/yellow edge ({u},{v}) not owned by A")
        # property II: the map only grows
        if s > 0:
            prev = history[s - 1].rho
            for t, v in prev.items():
                if rec.rho.get(t) != v:
                    fail(s, "II", f"map entry for tint {t} changed or vanished")
        # property III: domain is exactly the green superscripts seen
        seen = set()
        for p in final.positions[: s + 1]:
            if p.graph is not None:
                seen |= {c[1] for c in p.graph.edges.values() if c[0] == "g0"}
        if set(rec.rho) != seen:
            fail(s, "III", f"map domain {sorted(rec.rho)} != tints seen {sorted(seen)}")
        # property IV: order preserving with geometric spacing
        gap = _gap(strategy.total - (s + 1))
        items = sorted(rec.rho.items())
        for (t1, v1), (t2, v2) in zip(items, items[1:]):
            if v2 - v1 < gap:
                fail(s, "IV", f"indices for tints {t1},{t2} closer than {gap}")
        # property V: E's reds agree with the map or the white function
        col = g.colour
        for (u, v), c in sorted(g.edges.items()):
            if c[0] != "r" or rec.owners.get(frozenset((u, v))) != "E":
                continue
            for x in sorted(g.nodes - {u, v}):
                a, b2 = col(x, u), col(x, v)
                if not (a is not None and b2 is not None
                        and a[0] == "g0" and b2[0] == "g0"):
                    continue
                i, j = a[1], b2[1]
                for y in sorted(g.nodes - {u, v, x}):
                    if col(y, u) != ("y",) or col(y, v) != ("y",):
                        continue
                    w = col(x, y)
                    allowed = [{rec.rho.get(i), rec.rho.get(j)}]
                    if w is not None and w[0] == "wf":
                        # the white function wins where defined, the index
                        # map fills in tints coned after it was laid down
                        f = dict(w[1])
                        allowed.insert(0, {f.get(i, rec.rho.get(i)),
                                           f.get(j, rec.rho.get(j))})
                    if {c[1], c[2]} not in allowed:
                        fail(s, "V", f"red ({u},{v})={c} vs expected indices "
                                     f"{sorted(allowed[0], key=repr)} for tints {i},{j}")
        # property VI: a valid lambda0-neat hypernetwork
        hyp = pos.as_hypernetwork()
        problems = validate_hypernetwork(hyp)
        if problems:
            fail(s, "VI", problems[0])
        elif not is_lambda0_neat(hyp):
            fail(s, "VI", "hypernetwork is not lambda0-neat")
        # claim: white function domains stay small
        for (u, v), c in sorted(g.edges.items()):
            if c[0] == "wf" and rec.owners.get(frozenset((u, v))) == "E":
                if len(c[1]) > 2:
                    fail(s, "S", f"white function on ({u},{v}) has domain {c[1]}")
    # claim: matching hyperlabels give local isomorphisms
    hypers = []
    for s, pos in enumerate(final.positions):
        if pos.graph is None:
            continue
        net = pos.as_hypernetwork()
        for seq, lab in pos.hyperlabels:
            hypers.append((s, seq, lab, net))
    for (s1, q1, l1, n1), (s2, q2, l2, n2) in itertools.combinations(hypers, 2):
        if l1 != l2 or len(q1) != len(q2):
            continue
        theta = dict(zip(q1, q2))
        if len(set(theta.values())) != len(theta):
            continue
        if not partial_isomorphism_check(n1, n2, theta):
            fail(max(s1, s2), "iso",
                 f"hyperlabel {l1} on {q1} and {q2} fails local isomorphism")
    return {
        "rounds": len(history),
        "ok": not failures,
        "failures": failures,
        "firstFailure": failures[0] if failures else None,
    }

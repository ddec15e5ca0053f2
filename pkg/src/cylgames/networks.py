"""Atomic networks and hypernetworks over an atom structure.

A network assigns an atom to every n-tuple of its nodes so that tuples
with a repeated coordinate land in the matching identity set and tuples
differing in one coordinate are accessibility-related there.  Over a
rainbow structure, networks and complete rainbow graphs carry exactly
the same information and translate back and forth.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .rainbow import ColouredGraph, atom_from_graph, check_J_membership, is_green

LAMBDA0 = "λ0"


@dataclass(frozen=True)
class Network:
    structure: object = field(hash=False)
    nodes: frozenset
    labels: dict = field(hash=False)  # n-tuple of nodes -> atom

    def __post_init__(self):
        object.__setattr__(self, "nodes", frozenset(self.nodes))

    @property
    def n(self):
        return self.structure.dimension

    def label(self, tup):
        return self.labels[tuple(tup)]

    def tuples(self):
        return itertools.product(sorted(self.nodes), repeat=self.n)

    def key(self):
        return (tuple(sorted(self.nodes)), tuple(sorted(self.labels.items(), key=repr)))

    def __eq__(self, other):
        return (
            isinstance(other, Network)
            and self.structure is other.structure
            and self.key() == other.key()
        )

    def __hash__(self):
        return hash((id(self.structure),) + (tuple(sorted(self.nodes)),))

    def to_json(self, structure_id="structure", atom_id=None):
        atom_id = atom_id or default_atom_id
        return {
            "structure": structure_id,
            "nodes": sorted(self.nodes),
            "labels": [
                {"tuple": list(t), "atom": atom_id(a)}
                for t, a in sorted(self.labels.items())
            ],
        }


def default_atom_id(atom):
    if isinstance(atom, str):
        return atom
    return atom.encode()


def network_from_json(doc, structure, atom_decode=None):
    labels = {}
    for entry in doc["labels"]:
        a = entry["atom"]
        if atom_decode is not None:
            a = atom_decode(a)
        labels[tuple(entry["tuple"])] = a
    return Network(structure, frozenset(doc["nodes"]), labels)


@dataclass(frozen=True)
class Hypernetwork:
    base: Network
    hyperlabels: dict = field(hash=False)  # node sequence (tuple) -> label string

    @property
    def structure(self):
        return self.base.structure

    @property
    def nodes(self):
        return self.base.nodes

    @property
    def n(self):
        return self.base.n

    def label(self, tup):
        return self.base.label(tup)

    def hyperlabel(self, seq):
        return self.hyperlabels.get(tuple(seq))

    def key(self):
        return (self.base.key(), tuple(sorted(self.hyperlabels.items())))

    def __eq__(self, other):
        return (
            isinstance(other, Hypernetwork)
            and self.base == other.base
            and sorted(self.hyperlabels.items()) == sorted(other.hyperlabels.items())
        )

    def __hash__(self):
        return hash(self.base)

    def to_json(self, structure_id="structure", atom_id=None):
        doc = self.base.to_json(structure_id, atom_id)
        doc["hyperlabels"] = [
            {"seq": list(s), "label": l} for s, l in sorted(self.hyperlabels.items())
        ]
        return doc


# ----------------------------------------------------------------------
# validation


def validate_network(network):
    out = []
    s = network.structure
    n = s.dimension
    nodes = sorted(network.nodes)
    for tup in itertools.product(nodes, repeat=n):
        if tuple(tup) not in network.labels:
            out.append(f"missing label at {tup}")
    if out:
        return out
    for t in network.labels:
        if not set(t) <= network.nodes or len(t) != n:
            out.append(f"label tuple {t} outside the node set")
    for tup in itertools.product(nodes, repeat=n):
        a = network.label(tup)
        for i in range(n):
            for j in range(n):
                if tup[i] == tup[j] and not s.in_identity(i, j, a):
                    out.append(f"label at {tup} not in E_{i}{j}")
    # one-coordinate changes must stay T_i-related
    for tup in itertools.product(nodes, repeat=n):
        a = network.label(tup)
        for i in range(n):
            for d in nodes:
                moved = tuple(d if k == i else tup[k] for k in range(n))
                if not s.t_related(i, a, network.label(moved)):
                    out.append(f"labels at {tup} and {moved} not T_{i}-related")
    return out


def nodes_equivalent(network, x, y):
    """x ~ y iff some tuple (x, y, ...) carries an identity atom."""
    s = network.structure
    n = s.dimension
    for z in itertools.product(sorted(network.nodes), repeat=n - 2):
        if s.in_identity(0, 1, network.label((x, y) + z)):
            return True
    return False


def sequences_equivalent(network, xs, ys):
    if len(xs) != len(ys):
        return False
    return all(nodes_equivalent(network, x, y) for x, y in zip(xs, ys))


def validate_hypernetwork(hyper):
    out = list(validate_network(hyper.base))
    for seq in hyper.hyperlabels:
        if not set(seq) <= hyper.nodes:
            out.append(f"hyperedge {seq} outside the node set")
    if out:
        return out
    edges = sorted(hyper.hyperlabels)
    for a, b in itertools.combinations(edges, 2):
        if sequences_equivalent(hyper.base, a, b):
            if hyper.hyperlabels[a] != hyper.hyperlabels[b]:
                out.append(
                    f"equivalent hyperedges {a} and {b} carry different labels"
                )
    return out


def is_lambda0_neat(hyper):
    """Every short hyperedge (length <= dimension) is labelled λ0."""
    n = hyper.n
    for seq, label in hyper.hyperlabels.items():
        if len(seq) <= n and label != LAMBDA0:
            return False
    return True


# ----------------------------------------------------------------------
# maps


def apply_map(hyper, theta):
    """Pull a hypernetwork back along a node map theta."""
    if not set(theta.values()) <= set(hyper.nodes):
        raise ValueError("range of theta must lie inside the node set")
    nodes = frozenset(theta)
    n = hyper.n
    labels = {}
    for tup in itertools.product(sorted(nodes), repeat=n):
        labels[tup] = hyper.label(tuple(theta[x] for x in tup))
    hyperlabels = {}
    for seq, label in hyper.hyperlabels.items():
        for pre in _preimages(seq, theta, nodes):
            hyperlabels[pre] = label
    base = Network(hyper.structure, nodes, labels)
    return Hypernetwork(base, hyperlabels)


def _preimages(seq, theta, nodes):
    pools = [[x for x in sorted(nodes) if theta[x] == v] for v in seq]
    yield from itertools.product(*pools)


def apply_map_network(network, theta):
    if not set(theta.values()) <= set(network.nodes):
        raise ValueError("range of theta must lie inside the node set")
    nodes = frozenset(theta)
    labels = {}
    for tup in itertools.product(sorted(nodes), repeat=network.n):
        labels[tup] = network.label(tuple(theta[x] for x in tup))
    return Network(network.structure, nodes, labels)


def partial_isomorphism_check(m, n, theta):
    """Does theta preserve atomic labels and hyperlabels on its domain?"""
    dom = sorted(theta)
    if not set(dom) <= set(m.nodes) or not set(theta.values()) <= set(n.nodes):
        return False
    dim = m.n
    for tup in itertools.product(dom, repeat=dim):
        if m.label(tup) != n.label(tuple(theta[x] for x in tup)):
            return False
    m_hyper = getattr(m, "hyperlabels", None)
    n_hyper = getattr(n, "hyperlabels", None)
    if m_hyper is not None and n_hyper is not None:
        for seq, label in m_hyper.items():
            if set(seq) <= set(dom):
                if n_hyper.get(tuple(theta[x] for x in seq)) != label:
                    return False
    return True


# ----------------------------------------------------------------------
# rainbow translation


def network_to_graph(network):
    """The coloured graph carrying the same data as a rainbow network."""
    s = network.structure
    if not getattr(s, "is_rainbow", False):
        raise ValueError("translation needs a rainbow structure")
    n = s.dimension
    nodes = sorted(network.nodes)
    edges = {}
    for x, y in itertools.combinations(nodes, 2):
        pad = (x,) * (n - 2)
        atom = network.label((x, y) + pad)
        g = atom.graph(n)
        cx, cy = atom.eq[0], atom.eq[1]
        if cx != cy:
            col = g.colour(cx, cy)
            if col is not None:
                edges[(x, y)] = col
    tuple_labels = {}
    for tup in itertools.permutations(nodes, n - 1):
        atom = network.label(tup + (tup[0],))
        g = atom.graph(n)
        classes = tuple(atom.eq[i] for i in range(n - 1))
        shade = g.shade(classes)
        if shade is not None:
            tuple_labels[tup] = shade
    return ColouredGraph(n, frozenset(nodes), edges, tuple_labels)


def graph_to_network(graph, structure):
    """The network whose label at a tuple is the atom of the induced graph."""
    if not getattr(structure, "is_rainbow", False):
        raise ValueError("translation needs a rainbow structure")
    violations = check_J_membership(graph, structure.params)
    if violations:
        raise ValueError("graph is not a rainbow member: " + "; ".join(violations[:3]))
    n = structure.dimension
    labels = {}
    for tup in itertools.product(sorted(graph.nodes), repeat=n):
        sub = graph.restrict(set(tup))
        labels[tup] = atom_from_graph(sub, tup)
    return Network(structure, frozenset(graph.nodes), labels)

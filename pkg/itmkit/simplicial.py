#!/usr/bin/env python
#
# Copyright 2019-2020 Flavio Garcia
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#    http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
The induction graph over combinatorial states, its simplicial system with
the win-lose induction, and the strongly non-degenerating verifier.
"""

from . import ALPHABET
from .errors import (CapExceeded, GapPositionUnsupported, InvalidPermutation,
                     NegativeCoordinate, NonComposable, TieOnCellBoundary)
from .induction import compared_symbols, is_structural_tie, right_words
from .model import ITMPermutation, is_gap, letter_of, validate_words

from collections import deque, namedtuple
from fractions import Fraction
from itertools import combinations
import logging
import networkx as nx
import numpy as np

logger = logging.getLogger(__name__)

DEFAULT_GRAPH_CAP = 4096
GRAPH_FORMAT_VERSION = 1
GRAPH_HEADER = "# itmkit graph v1"

ROTATION = "ROTATION"

PASS = "PASS"
FAIL = "FAIL"
FAIL_STRONG = "FAIL-STRONG"

SEED_WORDS = (
    (("A", "D", "B", "C", "D"), ("C", "D", "B", "D_", "A")),
    (("A", "B", "C", "B", "D"), ("C", "B", "D", "B_", "A")),
)


def _index(letter):
    return ALPHABET.index(letter)


def _elementary(winner, loser, coefficient=1):
    matrix = np.identity(len(ALPHABET), dtype=int).astype(object)
    matrix[_index(winner), _index(loser)] = coefficient
    return matrix


class Vertex(namedtuple("Vertex", ["w0", "w1"])):
    """ A combinatorial state, stored with the gap in the last two
    positions of the bottom word.
    """

    __slots__ = ()

    @staticmethod
    def normalize(w0, w1):
        """ Returns the normalized vertex and whether a flip was needed. """
        w0, w1 = tuple(w0), tuple(w1)
        validate_words(w0, w1)
        position = [is_gap(symbol) for symbol in w1].index(True) + 1
        if position <= 2:
            return Vertex(w0[::-1], w1[::-1]), True
        return Vertex(w0, w1), False

    @staticmethod
    def of(p):
        return Vertex.normalize(p.w0, p.w1)[0]

    @property
    def gap_position(self):
        return [is_gap(symbol) for symbol in self.w1].index(True) + 1

    @property
    def label(self):
        return "{} / {}".format(" ".join(self.w0), " ".join(self.w1))

    @property
    def key(self):
        return "{}/{}".format("".join(self.w0), "".join(self.w1))

    def __repr__(self):
        return "Vertex({})".format(self.label)


def vertex_shape(v):
    """ Positions of the repeated letter in w0 and of the gap in w1, e.g.
    ``((2, 5), 4)`` for A D B C D / C D B D_ A.
    """
    repeated = validate_words(v.w0, v.w1)
    positions = tuple(index + 1 for index, letter in enumerate(v.w0)
                      if letter == repeated)
    return positions, v.gap_position


def format_shape(shape):
    positions, gap = shape
    return "{}/{}".format("".join(str(item) for item in positions), gap)


class Edge(namedtuple("Edge", ["source", "target", "winner", "label",
                               "loser_is_gap", "flipped"])):
    """ An induction step. ``label`` is the losing letter and the matrix is
    Id + E[winner, label].
    """

    __slots__ = ()

    @property
    def loser(self):
        return self.label

    @property
    def is_terminal(self):
        return self.target == ROTATION

    @property
    def matrix(self):
        return _elementary(self.winner, self.label)

    @property
    def inverse(self):
        return _elementary(self.winner, self.label, -1)

    def __repr__(self):
        target = self.target if self.is_terminal else self.target.key
        return "Edge({} -> {}, {}/{})".format(self.source.key, target,
                                              self.label, self.winner)


def step_edge(v, top_wins):
    """ The edge leaving ``v`` when the last top symbol wins (or loses). """
    x, y = compared_symbols(v.w0, v.w1)
    move = right_words(v.w0, v.w1, top_wins)
    if move is None:
        return Edge(v, ROTATION, letter_of(y), x, False, False)
    target, flipped = Vertex.normalize(move.w0, move.w1)
    return Edge(v, target, move.winner, move.loser, move.loser_is_gap,
                flipped)


class SimplicialSystem:
    """ Vertices, edges and the outgoing label sets taken from the full
    graph G. ``exchanges`` holds the structurally tied vertices, where the
    induced map is an exchange of intervals.
    """

    def __init__(self, vertices, edges, labels=None, exchanges=(),
                 pruned=False):
        self.vertices = tuple(vertices)
        self.edges = tuple(edges)
        self.exchanges = frozenset(exchanges)
        self.pruned = pruned
        if labels is None:
            labels = {}
            for edge in self.edges:
                labels.setdefault(edge.source, set()).add(edge.label)
        self.labels = {vertex: frozenset(labels.get(vertex, ()))
                       for vertex in self.vertices}
        self._outgoing = {vertex: [] for vertex in self.vertices}
        for edge in self.edges:
            self._outgoing[edge.source].append(edge)

    def out_edges(self, v):
        return tuple(self._outgoing.get(v, ()))

    def out_labels(self, v):
        """ Labels of the edges leaving ``v`` in this system. """
        return frozenset(edge.label for edge in self.out_edges(v))

    @property
    def rotation_edges(self):
        return tuple(edge for edge in self.edges if edge.is_terminal)

    def shape_counts(self):
        counts = {}
        for vertex in self.vertices:
            shape = format_shape(vertex_shape(vertex))
            counts[shape] = counts.get(shape, 0) + 1
        return dict(sorted(counts.items()))

    def to_networkx(self, edges=None):
        """ A MultiDiGraph over the vertices; terminal edges are left out.
        Each edge keeps the Edge object under the ``edge`` attribute.
        """
        graph = nx.MultiDiGraph()
        graph.add_nodes_from(self.vertices)
        for key, edge in enumerate(self.edges if edges is None else edges):
            if not edge.is_terminal:
                graph.add_edge(edge.source, edge.target, key=key, edge=edge)
        return graph

    def serialize(self):
        index = {vertex: position for position, vertex in
                 enumerate(self.vertices)}
        lines = [GRAPH_HEADER,
                 "format-version {}".format(GRAPH_FORMAT_VERSION),
                 "pruned {}".format(int(self.pruned))]
        for position, vertex in enumerate(self.vertices):
            lines.append("vertex {} {} / {} labels={}".format(
                position, " ".join(vertex.w0), " ".join(vertex.w1),
                ",".join(sorted(self.labels[vertex]))))
        for vertex in self.vertices:
            if vertex in self.exchanges:
                lines.append("exchange {}".format(index[vertex]))
        for edge in self.edges:
            target = ROTATION if edge.is_terminal else index[edge.target]
            lines.append(
                "edge {} {} winner={} label={} loser_is_gap={} flipped={} "
                "matrix={}".format(
                    index[edge.source], target, edge.winner, edge.label,
                    int(edge.loser_is_gap), int(edge.flipped),
                    ",".join(str(entry) for entry in edge.matrix.flatten())))
        return "\n".join(lines) + "\n"

    @staticmethod
    def deserialize(data):
        try:
            if not isinstance(data, str):
                data = data.decode("utf-8")
            vertices, edges, labels, exchanges = [], [], {}, []
            pruned = None
            version = None
            for line in data.splitlines():
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                fields = line.split()
                record = dict(field.split("=", 1) for field in fields
                              if "=" in field)
                if fields[0] == "format-version":
                    version = int(fields[1])
                    if version != GRAPH_FORMAT_VERSION:
                        raise ValueError("Unsupported format-version "
                                         "{}.".format(version))
                elif fields[0] == "pruned":
                    pruned = bool(int(fields[1]))
                elif fields[0] == "vertex":
                    if int(fields[1]) != len(vertices):
                        raise ValueError("Vertices out of order.")
                    vertex = Vertex(tuple(fields[2:7]), tuple(fields[8:13]))
                    validate_words(vertex.w0, vertex.w1)
                    vertices.append(vertex)
                    labels[vertex] = {letter for letter in
                                      record['labels'].split(",") if letter}
                elif fields[0] == "exchange":
                    exchanges.append(vertices[int(fields[1])])
                elif fields[0] == "edge":
                    target = (ROTATION if fields[2] == ROTATION
                              else vertices[int(fields[2])])
                    edge = Edge(vertices[int(fields[1])], target,
                                record['winner'], record['label'],
                                bool(int(record['loser_is_gap'])),
                                bool(int(record['flipped'])))
                    matrix = [int(entry) for entry in
                              record['matrix'].split(",")]
                    if matrix != list(edge.matrix.flatten()):
                        raise ValueError("Edge matrix does not match its "
                                         "winner and label.")
                    edges.append(edge)
                else:
                    raise ValueError("Unknown record '{}'.".format(
                        fields[0]))
            if version is None or pruned is None:
                raise ValueError("Missing format-version or pruned record.")
            return SimplicialSystem(vertices, edges, labels, exchanges,
                                    pruned)
        except (IndexError, KeyError, TypeError, ValueError,
                InvalidPermutation) as e:
            raise IOError("Invalid graph structure: {}".format(e))

    def __repr__(self):
        return "SimplicialSystem({} vertices, {} edges{})".format(
            len(self.vertices), len(self.edges),
            ", pruned" if self.pruned else "")


def _as_vertex(seed):
    if isinstance(seed, Vertex):
        return Vertex.normalize(seed.w0, seed.w1)[0]
    if isinstance(seed, ITMPermutation):
        return Vertex.of(seed)
    w0, w1 = seed
    return Vertex.normalize(w0, w1)[0]


def build_graph(seeds=SEED_WORDS, cap=DEFAULT_GRAPH_CAP):
    """ Close ``seeds`` under right steps, breadth first. Every vertex gets
    one edge for each ordering of the two compared lengths.
    """
    vertices = []
    seen = set()
    pending = deque()
    for seed in seeds:
        vertex = _as_vertex(seed)
        if vertex not in seen:
            seen.add(vertex)
            vertices.append(vertex)
            pending.append(vertex)
    edges = []
    exchanges = []
    while pending:
        vertex = pending.popleft()
        if vertex.gap_position == 3:
            raise GapPositionUnsupported(3)
        if is_structural_tie(vertex.w0, vertex.w1):
            exchanges.append(vertex)
            continue
        for top_wins in (True, False):
            edge = step_edge(vertex, top_wins)
            edges.append(edge)
            if edge.is_terminal or edge.target in seen:
                continue
            seen.add(edge.target)
            vertices.append(edge.target)
            pending.append(edge.target)
            if len(vertices) > cap:
                raise CapExceeded(cap)
    logger.debug("Graph closed with %s vertices and %s edges.",
                 len(vertices), len(edges))
    return SimplicialSystem(vertices, edges, exchanges=exchanges)


def prune(S):
    """ F: the system without terminals, the exchange vertices and the
    edges into either of them. Labels stay those of G.
    """
    vertices = [vertex for vertex in S.vertices
                if vertex not in S.exchanges]
    edges = [edge for edge in S.edges if not edge.is_terminal and
             edge.target not in S.exchanges and
             edge.source not in S.exchanges]
    return SimplicialSystem(vertices, edges, S.labels, pruned=True)


def _as_vector(lam):
    if isinstance(lam, dict):
        values = [Fraction(lam[letter]) for letter in ALPHABET]
    else:
        values = [Fraction(value) for value in lam]
    if len(values) != len(ALPHABET):
        raise ValueError("Expected {} coordinates.".format(len(ALPHABET)))
    if any(value <= 0 for value in values) or sum(values) != 1:
        raise ValueError("Lengths must be positive and sum to 1.")
    return np.array(values, dtype=object)


def winlose_apply(S, v, lam):
    """ One step of the win-lose induction from ``v``.

    Returns (target, new lengths as a letter dict, edge); the target is
    ROTATION when the step ends the induction.
    """
    if v not in S.labels:
        raise ValueError("{!r} is not a vertex of the system.".format(v))
    vector = _as_vector(lam)
    x, y = compared_symbols(v.w0, v.w1)
    top, bottom = vector[_index(x)], vector[_index(letter_of(y))]
    if is_structural_tie(v.w0, v.w1) or top == bottom:
        raise TieOnCellBoundary(v, (x, letter_of(y)))
    edge = step_edge(v, top > bottom)
    following = edge.inverse.dot(vector)
    for letter, value in zip(ALPHABET, following):
        if value <= 0:
            raise NegativeCoordinate(letter)
    following = following / sum(following)
    return (edge.target, dict(zip(ALPHABET, following)), edge)


def path_matrix(path):
    product = np.identity(len(ALPHABET), dtype=int).astype(object)
    for index, edge in enumerate(path):
        if index and path[index - 1].target != edge.source:
            raise NonComposable(index)
        product = product.dot(edge.matrix)
    return product


def _cycle(graph):
    try:
        found = nx.find_cycle(graph)
    except nx.NetworkXNoCycle:
        return None
    return [graph.edges[u, v, key]['edge'] for u, v, key in found]


class LetterReport:
    """ Per letter, a cycle that avoids the letter as loser (``loses``) or
    as winner (``wins``); ``None`` when no such cycle exists.
    """

    def __init__(self, loses, wins):
        self.loses = loses
        self.wins = wins

    @property
    def passed(self):
        return all(self.loses[letter] is None and self.wins[letter] is None
                   for letter in ALPHABET)

    def failures(self):
        found = []
        for letter in ALPHABET:
            if self.loses[letter] is not None:
                found.append((letter, "loses", self.loses[letter]))
            if self.wins[letter] is not None:
                found.append((letter, "wins", self.wins[letter]))
        return found


def check_every_letter_wins_loses(S):
    edges = [edge for edge in S.edges if not edge.is_terminal]
    loses, wins = {}, {}
    for letter in ALPHABET:
        loses[letter] = _cycle(S.to_networkx(
            [edge for edge in edges if edge.label != letter]))
        wins[letter] = _cycle(S.to_networkx(
            [edge for edge in edges if edge.winner != letter]))
    return LetterReport(loses, wins)


def proper_subsets():
    for size in range(1, len(ALPHABET)):
        for letters in combinations(ALPHABET, size):
            yield frozenset(letters)


def subgraph_GL(S, letters):
    letters = frozenset(letters)
    if not letters or not letters < frozenset(ALPHABET):
        raise ValueError("L must be a proper non empty set of letters.")
    kept = []
    for vertex in S.vertices:
        outgoing = S.out_edges(vertex)
        labelled = [edge for edge in outgoing if edge.label in letters]
        kept.extend(labelled or outgoing)
    return SimplicialSystem(S.vertices, kept, S.labels, S.exchanges,
                            S.pruned)


class Escape(namedtuple("Escape", ["letters", "vertex", "escapes",
                                   "reason"])):

    __slots__ = ()


class VerdictReport:
    """ Condition 1 is the per letter cycle check, condition 2 the escape
    check. The verdict is PASS when both hold, FAIL-STRONG when only the
    cycle check fails and FAIL when an escape is missing.
    """

    def __init__(self, letters, escapes):
        self.letters = letters
        self.escapes = escapes

    @property
    def condition_one(self):
        return self.letters.passed

    @property
    def condition_two(self):
        return all(item.escapes for item in self.escapes)

    @property
    def passed(self):
        return self.condition_one and self.condition_two

    @property
    def verdict(self):
        if not self.condition_two:
            return FAIL
        if not self.condition_one:
            return FAIL_STRONG
        return PASS

    def summary(self):
        failures = self.letters.failures()
        if self.condition_one:
            first = PASS
        else:
            first = "{} (letters {})".format(FAIL_STRONG, " ".join(
                sorted({letter for letter, _, _ in failures})))
        lines = ["condition 1: {}".format(first),
                 "condition 2: {} ({} vertex checks)".format(
                     PASS if self.condition_two else FAIL,
                     len(self.escapes)),
                 "verdict: {}".format(self.verdict)]
        for letter, kind, cycle in failures:
            lines.append("  letter {} never {} on the cycle {}".format(
                letter, kind, " ".join(edge.source.label for edge in cycle)))
        for item in self.escapes:
            if not item.escapes:
                lines.append("  L={} stuck at {}".format(
                    "".join(sorted(item.letters)), item.vertex.label))
        return "\n".join(lines) + "\n"


def verify_strongly_nondegenerating(S):
    """ Condition 1 asks every letter to win and to lose on every cycle.
    Condition 2 asks every vertex of a component of G_L with two or more
    L labels out to reach outside the component along L edges. Both read
    the labels of ``S`` itself.
    """
    letters = check_every_letter_wins_loses(S)
    escapes = []
    for subset in proper_subsets():
        gl = subgraph_GL(S, subset)
        graph = gl.to_networkx()
        along = S.to_networkx([edge for edge in S.edges
                               if edge.label in subset])
        order = {vertex: index for index, vertex in enumerate(S.vertices)}
        for component in nx.strongly_connected_components(graph):
            if len(component) == 1:
                vertex = next(iter(component))
                if not graph.has_edge(vertex, vertex):
                    continue
            for vertex in sorted(component, key=order.get):
                count = len(S.out_labels(vertex) & subset)
                if count <= 1:
                    escapes.append(Escape(subset, vertex, True,
                                          "{} L labels".format(count)))
                    continue
                outside = nx.descendants(along, vertex) - component
                escapes.append(Escape(subset, vertex, bool(outside),
                                      "reaches {} vertices outside".format(
                                          len(outside))))
    report = VerdictReport(letters, escapes)
    logger.debug("Verdict: %s.", report.verdict)
    return report

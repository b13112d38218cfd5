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

from behave import given, when, then
from itmkit import ALPHABET
from itmkit.dot import export_dot
from itmkit.errors import CapExceeded, NonComposable, TieOnCellBoundary
from itmkit.helpers import parse_scalar
from itmkit.induction import (PERIODIC, Continue, StopRotation, StopTie,
                              iterate, r_step)
from itmkit.model import ITMPermutation
from itmkit.simplicial import (Edge, SimplicialSystem, Vertex, build_graph,
                               format_shape, path_matrix, subgraph_GL,
                               verify_strongly_nondegenerating, vertex_shape,
                               winlose_apply)
from fractions import Fraction
import numpy as np


def vertex_from(text):
    w0, w1 = text.split("/")
    return Vertex(tuple(w0.split()), tuple(w1.split()))


def lengths_from(text):
    lengths = {}
    for token in text.split():
        letter, value = token.split("=")
        lengths[letter] = parse_scalar(value)
    return lengths


@given("the induction graph")
def step_the_induction_graph(context):
    context.system = context.graph


@given("the pruned induction graph")
def step_the_pruned_induction_graph(context):
    context.system = context.pruned_graph


@given("an empty system")
def step_an_empty_system(context):
    context.system = SimplicialSystem([], [])


@given("a one vertex system where {first} and {second} beat each other")
def step_a_one_vertex_system(context, first, second):
    vertex = vertex_from("A D B C D / C D B D_ A")
    context.system = SimplicialSystem([vertex], [
        Edge(vertex, vertex, second, first, False, False),
        Edge(vertex, vertex, first, second, False, False),
    ])


@given("a four vertex cycle where every letter beats the next one")
def step_a_four_vertex_cycle(context):
    vertices = [vertex_from(text) for text in (
        "A D B C D / C D B D_ A", "A B C B D / C B D B_ A",
        "A D B D C / B C A D_ D", "D A B D C / C A B D D_")]
    context.system = SimplicialSystem(vertices, [
        Edge(vertices[index], vertices[(index + 1) % 4], winner, label,
             False, False)
        for index, (winner, label) in enumerate(
            (("A", "B"), ("B", "C"), ("C", "D"), ("D", "A")))])


@then("the system has {vertices:d} vertices and {edges:d} edges")
def step_the_system_has_vertices_and_edges(context, vertices, edges):
    context.tester.assertEqual(vertices, len(context.system.vertices))
    context.tester.assertEqual(edges, len(context.system.edges))


@then("{count:d} edges end on the rotation terminal")
def step_edges_end_on_the_rotation_terminal(context, count):
    context.tester.assertEqual(count, len(context.system.rotation_edges))


@then("{count:d} vertices are exchanges")
def step_vertices_are_exchanges(context, count):
    context.tester.assertEqual(count, len(context.system.exchanges))


@then("{count:d} edges need a flip")
def step_edges_need_a_flip(context, count):
    context.tester.assertEqual(count, sum(
        1 for edge in context.system.edges if edge.flipped))


@then("{count:d} edges are loops")
def step_edges_are_loops(context, count):
    context.tester.assertEqual(count, sum(
        1 for edge in context.system.edges if edge.source == edge.target))


@then("every vertex has its gap in the last two positions")
def step_every_vertex_has_its_gap_at_the_end(context):
    for vertex in context.system.vertices:
        context.tester.assertIn(vertex.gap_position, (4, 5))


@then("every vertex has an outgoing edge")
def step_every_vertex_has_an_outgoing_edge(context):
    for vertex in context.system.vertices:
        context.tester.assertTrue(context.system.out_edges(vertex))


@then("the labels are those of the full graph")
def step_the_labels_are_those_of_the_full_graph(context):
    for vertex in context.system.vertices:
        context.tester.assertEqual(context.graph.labels[vertex],
                                   context.system.labels[vertex])


@then("the system is pruned")
def step_the_system_is_pruned(context):
    context.tester.assertTrue(context.system.pruned)


@then("the vertex shapes are counted as")
def step_the_vertex_shapes_are_counted_as(context):
    expected = {row['shape']: int(row['count']) for row in context.table}
    context.tester.assertEqual(expected, context.system.shape_counts())


@then("the vertex {words} has the shape {shape}")
def step_the_vertex_has_the_shape(context, words, shape):
    vertex = vertex_from(words)
    context.tester.assertIn(vertex, context.system.labels)
    context.tester.assertEqual(shape, format_shape(vertex_shape(vertex)))


@then("the vertex {words} is keyed {key}")
def step_the_vertex_is_keyed(context, words, key):
    context.tester.assertEqual(key, vertex_from(words).key)


@when("we apply the win-lose step at {words} to {lengths}")
def step_we_apply_the_win_lose_step(context, words, lengths):
    context.target, context.lengths, context.edge = winlose_apply(
        context.system, vertex_from(words), lengths_from(lengths))


@then("the win-lose step goes to {words}")
def step_the_win_lose_step_goes_to(context, words):
    context.tester.assertEqual(vertex_from(words), context.target)


@then("the win-lose step has {winner} winning over {loser}")
def step_the_win_lose_step_has_winning(context, winner, loser):
    context.tester.assertEqual(winner, context.edge.winner)
    context.tester.assertEqual(loser, context.edge.label)


@then("the new lengths are {lengths}")
def step_the_new_lengths_are(context, lengths):
    context.tester.assertEqual(lengths_from(lengths), context.lengths)


@then("the product of the step path is its edge matrix")
def step_the_product_of_the_step_path(context):
    context.tester.assertEqual(context.edge.matrix.tolist(),
                               path_matrix([context.edge]).tolist())


@then("the win-lose step at {words} to {lengths} fails on a cell boundary")
def step_the_win_lose_step_fails_on_a_boundary(context, words, lengths):
    with context.tester.assertRaises(TieOnCellBoundary):
        winlose_apply(context.system, vertex_from(words),
                      lengths_from(lengths))


@then("the win-lose step at {words} to {lengths} fails as invalid")
def step_the_win_lose_step_fails_as_invalid(context, words, lengths):
    with context.tester.assertRaises(ValueError):
        winlose_apply(context.system, vertex_from(words),
                      lengths_from(lengths))


@then("composing the first edge of {words} twice fails at {index:d}")
def step_composing_the_first_edge_twice_fails(context, words, index):
    edge = context.system.out_edges(vertex_from(words))[0]
    with context.tester.assertRaises(NonComposable) as raised:
        path_matrix([edge, edge])
    context.tester.assertEqual(index, raised.exception.index)


@then("building the graph with a cap of {cap:d} vertices fails")
def step_building_the_graph_with_a_cap_fails(context, cap):
    with context.tester.assertRaises(CapExceeded):
        build_graph(cap=cap)


@when("we write the system to text and read it back")
def step_we_write_the_system_and_read_it_back(context):
    context.system = SimplicialSystem.deserialize(
        context.system.serialize())


@then("reading the system with format-version {version:d} fails")
def step_reading_the_system_with_version_fails(context, version):
    data = context.system.serialize().replace(
        "format-version 1", "format-version {}".format(version))
    with context.tester.assertRaises(IOError):
        SimplicialSystem.deserialize(data)


@when("we verify the system")
def step_we_verify_the_system(context):
    context.verdict = verify_strongly_nondegenerating(context.system)


@then("the cycle check fails for every letter")
def step_the_cycle_check_fails_for_every_letter(context):
    report = context.verdict.letters
    context.tester.assertFalse(report.passed)
    for letter in ("A", "B", "C", "D"):
        context.tester.assertIsNotNone(report.loses[letter])
        context.tester.assertIsNotNone(report.wins[letter])


@then("letter {letter} never loses on a cycle of the {winner} edges")
def step_letter_never_loses_on_a_cycle(context, letter, winner):
    cycle = context.verdict.letters.loses[letter]
    context.tester.assertIsNotNone(cycle)
    context.tester.assertTrue(all(edge.winner == winner and
                                  edge.label != letter for edge in cycle))


@then("condition one holds")
def step_condition_one_holds(context):
    context.tester.assertTrue(context.verdict.condition_one)


@then("condition one fails")
def step_condition_one_fails(context):
    context.tester.assertFalse(context.verdict.condition_one)


@then("condition two holds")
def step_condition_two_holds(context):
    context.tester.assertTrue(context.verdict.condition_two)


@then("condition two fails")
def step_condition_two_fails(context):
    context.tester.assertFalse(context.verdict.condition_two)


@then("the summary reads {line}")
def step_the_summary_reads(context, line):
    context.tester.assertIn(line, context.verdict.summary().splitlines())


@then("the verdict is {verdict}")
def step_the_verdict_is(context, verdict):
    context.tester.assertEqual(verdict, context.verdict.verdict)
    context.tester.assertEqual(verdict == "PASS", context.verdict.passed)
    context.tester.assertIn("verdict: {}".format(verdict),
                            context.verdict.summary().splitlines())


@when("we take the subgraph of the letters {letters}")
def step_we_take_the_subgraph_of_the_letters(context, letters):
    context.system = subgraph_GL(context.system, letters.split())


@when("we export the system as DOT")
def step_we_export_the_system_as_dot(context):
    context.dot = export_dot(context.system)


@then("the DOT text has {count:d} edges")
def step_the_dot_text_has_edges(context, count):
    context.tester.assertEqual(count, context.dot.count(" -> "))


@then("the DOT text has the rotation terminal")
def step_the_dot_text_has_the_rotation_terminal(context):
    context.tester.assertIn('"ROTATION" [shape=doublecircle', context.dot)


@then("the DOT text is an empty digraph")
def step_the_dot_text_is_an_empty_digraph(context):
    context.tester.assertEqual("// itmkit dot v1\ndigraph itmkit {\n}\n",
                               context.dot)


def determinant(rows):
    """ Exact Laplace expansion along the first row. """
    if len(rows) == 1:
        return rows[0][0]
    return sum((-1) ** column * rows[0][column] * determinant(
        [row[:column] + row[column + 1:] for row in rows[1:]])
        for column in range(len(rows)))


def random_lengths(rng):
    weights = [int(value) for value in
               rng.integers(1, 1 << 10, size=len(ALPHABET))]
    total = sum(weights)
    return {letter: Fraction(weight, total)
            for letter, weight in zip(ALPHABET, weights)}


def random_vertex(rng, system):
    return system.vertices[int(rng.integers(0, len(system.vertices)))]


@then("exporting the system as DOT twice gives the same text")
def step_exporting_as_dot_twice(context):
    context.tester.assertEqual(export_dot(context.system),
                               export_dot(context.system))


@then("{count:d} random paths of {length:d} edges with seed {seed:d} have "
      "unimodular matrices")
def step_random_paths_have_unimodular_matrices(context, count, length, seed):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        vertex = random_vertex(rng, context.system)
        path = []
        for _ in range(length):
            edges = context.system.out_edges(vertex)
            edge = edges[int(rng.integers(0, len(edges)))]
            path.append(edge)
            vertex = edge.target
        rows = path_matrix(path).tolist()
        context.tester.assertTrue(all(entry >= 0 for row in rows
                                      for entry in row))
        context.tester.assertEqual(1, determinant(rows))


@then("{count:d} win-lose steps from random lengths with seed {seed:d} "
      "follow the R-step")
def step_win_lose_steps_follow_the_r_step(context, count, seed):
    rng = np.random.default_rng(seed)
    moved = 0
    for _ in range(count):
        vertex = random_vertex(rng, context.system)
        lengths = random_lengths(rng)
        outcome = r_step(ITMPermutation(vertex.w0, vertex.w1, lengths))
        if isinstance(outcome, StopTie):
            with context.tester.assertRaises(TieOnCellBoundary):
                winlose_apply(context.system, vertex, lengths)
            continue
        target, following, edge = winlose_apply(context.system, vertex,
                                                lengths)
        context.tester.assertIn(edge, context.system.out_edges(vertex))
        if isinstance(outcome, StopRotation):
            context.tester.assertTrue(edge.is_terminal)
            continue
        context.tester.assertIsInstance(outcome, Continue)
        context.tester.assertEqual(outcome.winner, edge.winner)
        context.tester.assertEqual(outcome.loser, edge.label)
        context.tester.assertEqual(Vertex.of(outcome.next), target)
        total = sum(outcome.next.lengths[letter] for letter in ALPHABET)
        context.tester.assertEqual(
            {letter: outcome.next.lengths[letter] / total
             for letter in ALPHABET}, following)
        moved += 1
    context.tester.assertGreater(moved, 0)


@then("{count:d} induction paths from random lengths with seed {seed:d} "
      "never repeat a projective state")
def step_induction_paths_never_repeat(context, count, seed):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        vertex = random_vertex(rng, context.system)
        path = iterate(ITMPermutation(vertex.w0, vertex.w1,
                                      random_lengths(rng)), 200)
        context.tester.assertIsNone(path.period)
        context.tester.assertNotEqual(PERIODIC, path.outcome)

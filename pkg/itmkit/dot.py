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

from .simplicial import ROTATION

DOT_HEADER = "// itmkit dot v1"


def _gvquote(s):
    return '"{}"'.format(s.replace('"', r'\"'))


def graphviz(S):
    """
    Produce the DOT text of a simplicial system as an iterable of lines.

    Use like so::

        with open('graph.dot', 'w') as f:
            f.writelines(graphviz(system))
    """
    yield "{}\n".format(DOT_HEADER)
    yield "digraph itmkit {\n"
    if S.vertices:
        yield "  node [shape=box];\n"
    index = {vertex: position for position, vertex in enumerate(S.vertices)}
    for vertex in S.vertices:
        if vertex in S.exchanges:
            style = ' style=filled fillcolor="grey80"'
        else:
            style = ""
        yield "  v{} [label={}{}];\n".format(index[vertex],
                                             _gvquote(vertex.label), style)
    if S.rotation_edges:
        yield '  {} [shape=doublecircle style=filled fillcolor="grey60"];\n' \
            .format(_gvquote(ROTATION))
    for edge in S.edges:
        if edge.is_terminal:
            target = _gvquote(ROTATION)
        else:
            target = "v{}".format(index[edge.target])
        yield "  v{} -> {} [label={}];\n".format(
            index[edge.source], target,
            _gvquote("{}/{}".format(edge.label, edge.winner)))
    yield "}\n"


def export_dot(S):
    return "".join(graphviz(S))

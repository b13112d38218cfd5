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

from behave import fixture, use_fixture
from itmkit.intervals import Interval, PiecewiseTranslation
from itmkit.simplicial import build_graph, prune
from unittest.case import TestCase


def worked_branches():
    return [
        (Interval(0, "1/10"), "9/10"),
        (Interval("1/10", "11/20"), "1/10"),
        (Interval("11/20", 1), "-11/20"),
    ]


@fixture
def worked_map(context, timeout=1, **kwargs):
    context.worked_map = PiecewiseTranslation(Interval(0, 1),
                                              worked_branches())
    yield context.worked_map


@fixture
def induction_graph(context, timeout=1, **kwargs):
    context.graph = build_graph()
    context.pruned_graph = prune(context.graph)
    yield context.graph


@fixture
def tester(context, timeout=1, **kwargs):
    context.tester = TestCase()
    yield context.tester


def before_all(context):
    use_fixture(worked_map, context)
    use_fixture(induction_graph, context)
    use_fixture(tester, context)

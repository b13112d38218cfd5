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
from itmkit.experiments import (DEGENERATE, BoxDimConfig, BoxDimResult,
                                SurvivorRecord, SweepConfig, accel_suite,
                                boxdim, classify_one, contradicts,
                                oracle_suite, random_itm3, render_slice,
                                sweep)
from itmkit.helpers import parse_scalar
from itmkit.intervals import ClassificationReport, Interval, IntervalSet
import numpy as np


@when("we classify the double rotation with the attractor check")
def step_we_classify_with_the_attractor_check(context):
    context.record = classify_one(context.rotation,
                                  SweepConfig(cross_check=True))


@when("we classify the double rotation at depth {depth:d}")
def step_we_classify_at_depth(context, depth):
    context.record = classify_one(context.rotation, SweepConfig(depth=depth))


@when("we classify the double rotation")
def step_we_classify_the_double_rotation(context):
    context.record = classify_one(context.rotation)


@then("the classification is {outcome} after {steps:d} steps")
def step_the_classification_is(context, outcome, steps):
    context.tester.assertEqual(outcome, context.record.outcome)
    context.tester.assertEqual(steps, context.record.steps)


@then("the attractor check is finite after {steps:d} steps with measure "
      "{measure}")
def step_the_attractor_check_is_finite(context, steps, measure):
    report = context.record.attractor
    context.tester.assertTrue(report.finite)
    context.tester.assertEqual(steps, report.steps)
    context.tester.assertEqual(parse_scalar(measure), report.measure)


@then("the double rotation survives depth {depth:d}")
def step_the_double_rotation_survives(context, depth):
    context.tester.assertTrue(context.record.survives(depth))


@then("the double rotation does not survive depth {depth:d}")
def step_the_double_rotation_does_not_survive(context, depth):
    context.tester.assertFalse(context.record.survives(depth))


@then("a sweep with dyadic precision {precision} is refused")
def step_a_sweep_with_precision_is_refused(context, precision):
    with context.tester.assertRaises(ValueError):
        SweepConfig(dyadic_precision=int(precision))


@then("a sweep with seed {seed} is refused")
def step_a_sweep_with_seed_is_refused(context, seed):
    with context.tester.assertRaises(ValueError):
        SweepConfig(rng_seed=int(seed))


@then("a sweep with depth {depth} is refused")
def step_a_sweep_with_depth_is_refused(context, depth):
    with context.tester.assertRaises(ValueError):
        SweepConfig(depth=int(depth))


@then("box counting with resolutions {resolutions} is refused")
def step_box_counting_with_resolutions_is_refused(context, resolutions):
    with context.tester.assertRaises(ValueError):
        BoxDimConfig(resolutions=[int(k) for k in resolutions.split()])


@then("a sweep at depth {depth:d} checks survivors at {checkpoints}")
def step_a_sweep_checks_survivors_at(context, depth, checkpoints):
    context.tester.assertEqual(
        tuple(int(item) for item in checkpoints.split(",")),
        SweepConfig(depth=depth).checkpoints)


@when("we sweep {samples:d} samples at depth {depth:d} with seed {seed:d}")
def step_we_sweep_samples(context, samples, depth, seed):
    context.sweep_config = SweepConfig(sample_count=samples, depth=depth,
                                       rng_seed=seed)
    context.sweep = sweep(context.sweep_config)
    context.csv = context.sweep.to_csv().splitlines()


@then("the sweep classified {samples:d} samples")
def step_the_sweep_classified(context, samples):
    context.tester.assertEqual(samples, len(context.sweep.records))
    context.tester.assertEqual(samples, sum(context.sweep.counts().values()))


@then("the sweep CSV starts with {header}")
def step_the_sweep_csv_starts_with(context, header):
    context.tester.assertEqual(header, context.csv[0])


@then("the sweep CSV has the columns {columns}")
def step_the_sweep_csv_has_the_columns(context, columns):
    context.tester.assertEqual(columns, context.csv[1])


@then("the sweep CSV has the summary row {outcome}")
def step_the_sweep_csv_has_the_summary_row(context, outcome):
    rows = [line for line in context.csv
            if line.startswith("summary,,,,{},".format(outcome))]
    context.tester.assertEqual(1, len(rows))


@then("sweeping again with the same seed gives the same CSV")
def step_sweeping_again_gives_the_same_csv(context):
    context.tester.assertEqual("\n".join(context.csv) + "\n",
                               sweep(context.sweep_config).to_csv())


@then("the sweep samples are dyadic with precision {precision:d}")
def step_the_sweep_samples_are_dyadic(context, precision):
    for record in context.sweep.records:
        d = record.rotation
        for value in (d.alpha, d.beta, d.c):
            context.tester.assertEqual(0, (1 << precision) %
                                       value.denominator)


@given("box counts of {first:d} at k={k1:d} and {second:d} at k={k2:d}")
def step_box_counts_of(context, first, k1, second, k2):
    context.boxdim = BoxDimResult(BoxDimConfig(resolutions=(k1, k2)),
                                  {k1: first, k2: second})


@then("the box counting slope is about {slope:d}")
def step_the_box_counting_slope_is_about(context, slope):
    context.tester.assertAlmostEqual(slope, context.boxdim.slope, places=6)


@when("we count boxes at resolution {k:d} and depth {depth:d}")
def step_we_count_boxes(context, k, depth):
    context.boxdim = boxdim(BoxDimConfig(resolutions=(k,), depth=depth))


@then("{count:d} boxes survive at k={k:d}")
def step_boxes_survive_at(context, count, k):
    context.tester.assertEqual(count, context.boxdim.counts[k])


@then("the box counting CSV ends with the row {row}")
def step_the_box_counting_csv_ends_with(context, row):
    context.tester.assertEqual(row,
                               context.boxdim.to_csv().splitlines()[-1])


@when("we render the slice c={c} at resolution {resolution:d} and depth "
      "{depth:d}")
def step_we_render_the_slice(context, c, resolution, depth):
    context.resolution = resolution
    context.slice_c, context.slice_depth = c, depth
    context.raster = render_slice(parse_scalar(c), resolution, depth)


@then("the raster header is")
def step_the_raster_header_is(context):
    header = "{}\n".format(context.text.strip()).encode("ascii")
    context.tester.assertTrue(context.raster.startswith(header))
    context.pixels = context.raster[len(header):]


@then("the raster has {count:d} pixels")
def step_the_raster_has_pixels(context, count):
    context.tester.assertEqual(count, len(context.pixels))


@then("the raster diagonal is white")
def step_the_raster_diagonal_is_white(context):
    side = context.resolution
    for index in range(side):
        context.tester.assertEqual(255, context.pixels[index * side + index])


@then("the raster off the diagonal is black")
def step_the_raster_off_the_diagonal_is_black(context):
    side = context.resolution
    for row in range(side):
        for column in range(side):
            if row != column:
                context.tester.assertEqual(
                    0, context.pixels[row * side + column])


@then("rendering the slice c={c} fails")
def step_rendering_the_slice_fails(context, c):
    with context.tester.assertRaises(ValueError):
        render_slice(parse_scalar(c), 4, 0)


@when("we run the oracle suite on {count:d} samples at depth {depth:d}")
def step_we_run_the_oracle_suite(context, count, depth):
    context.suite = oracle_suite(count, seed=0, depth=depth)


@then("the suite reports no failures")
def step_the_suite_reports_no_failures(context):
    context.tester.assertTrue(context.suite.ok, context.suite.summary())


@when("we run the acceleration suite on {count:d} samples")
def step_we_run_the_acceleration_suite(context, count):
    context.suite_count = count
    context.suite = accel_suite(count, seed=0)


@then("every sample of the suite is passed, skipped or failed")
def step_every_sample_is_accounted_for(context):
    suite = context.suite
    context.tester.assertEqual(
        context.suite_count,
        suite.passed + suite.skipped + len(suite.failures))
    context.tester.assertEqual(suite.passed, sum(suite.histogram.values()))


@then("at least {count:d} samples of the suite passed")
def step_at_least_samples_passed(context, count):
    context.tester.assertGreaterEqual(context.suite.passed, count)


@then("rendering the slice again gives the same bytes")
def step_rendering_again_gives_the_same_bytes(context):
    context.tester.assertEqual(context.raster, render_slice(
        parse_scalar(context.slice_c), context.resolution,
        context.slice_depth))


@then("counting boxes again gives the same CSV")
def step_counting_boxes_again_gives_the_same_csv(context):
    context.tester.assertEqual(context.boxdim.to_csv(),
                               boxdim(context.boxdim.cfg).to_csv())


@then("{count:d} random 3-ITMs with seed {seed:d} never use the image order "
      "{order}")
def step_random_itms_never_use_the_image_order(context, count, seed, order):
    refused = tuple(int(value) for value in order.split())
    rng = np.random.default_rng(seed)
    drawn = 0
    for _ in range(count):
        m = random_itm3(rng, precision=8)
        if m is None:
            continue
        drawn += 1
        context.tester.assertNotEqual(refused, tuple(
            m.pi1[letter] for letter in sorted(m.pi0, key=m.pi0.get)))
    context.tester.assertGreater(drawn, 0)


@then("a {outcome} record next to a {kind} attractor is a contradiction")
def step_a_record_next_to_an_attractor_contradicts(context, outcome, kind):
    report = ClassificationReport(kind, 3, IntervalSet([Interval(0, 1)]))
    context.tester.assertTrue(contradicts(SurvivorRecord(None, outcome),
                                          report))


@then("a {outcome} record next to a {kind} attractor is consistent")
def step_a_record_next_to_an_attractor_is_consistent(context, outcome, kind):
    report = ClassificationReport(kind, 3, IntervalSet([Interval(0, 1)]))
    context.tester.assertFalse(contradicts(SurvivorRecord(None, outcome),
                                           report))


@when("we sweep {samples:d} samples at depth {depth:d} with precision "
      "{precision:d} and the attractor check")
def step_we_sweep_with_the_attractor_check(context, samples, depth,
                                           precision):
    context.sweep = sweep(SweepConfig(
        sample_count=samples, depth=depth, rng_seed=3,
        dyadic_precision=precision, max_steps=64, max_pieces=256,
        cross_check=True))


@then("every degenerate sample has the whole circle as attractor")
def step_every_degenerate_sample_has_the_whole_circle(context):
    degenerate = [record for record in context.sweep.records
                  if record.outcome == DEGENERATE]
    context.tester.assertGreater(len(degenerate), 0)
    for record in degenerate:
        context.tester.assertTrue(record.attractor.finite)
        context.tester.assertEqual(1, record.attractor.measure)

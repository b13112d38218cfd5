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
Experiments over the double rotation parameter space: classification of a
single triple, seeded sweeps, a box-counting dimension estimate and slice
rasters.
"""

from . import ALPHABET
from .convert import convert_double_rotation, dr_to_piecewise, split
from .errors import (AccelFailure, BudgetExceeded, ClassifierContradiction,
                     CoincidentImages, DegenerateRotation,
                     GapPositionUnsupported, InvalidITM, NonReturning,
                     NoOverlap, NotReducibleTo3ITM, NotThreeBranches,
                     OracleMismatch, SingularityInGap, TieDegenerate,
                     UnsupportedStep)
from .helpers import format_scalar
from .induction import (DEFAULT_ACCEL_CAP, PERIODIC, ROTATION, SURVIVOR, TIE,
                        check_acceleration, iterate)
from .intervals import (DEFAULT_MAX_PIECES, DEFAULT_MAX_STEPS,
                        DEFAULT_TRANSIT_CAP, DEFAULT_TRIM_CAP,
                        attractor_classify, reduce_if_singularity_in_gap)
from .model import ITM3, DoubleRotation, ITMPermutation
from .simplicial import SEED_WORDS

from fractions import Fraction
import csv
import io
import logging
import numpy as np

logger = logging.getLogger(__name__)

FINITE = "finite"
DEGENERATE = "rotation-degenerate"
GAP3 = "gap3-error"
UNCONVERTED = "unconverted"
UNSUPPORTED = "unsupported-step"

OUTCOMES = (FINITE, TIE, DEGENERATE, SURVIVOR, PERIODIC, GAP3, UNCONVERTED,
            UNSUPPORTED)

CHECKPOINTS = (10, 50, 200)
DEFAULT_DEPTH = 200
DEFAULT_PRECISION = 53
MAX_PRECISION = 62
DEFAULT_RESOLUTIONS = (4, 5, 6, 7)
SURVIVOR_THRESHOLD = 0.05

SWEEP_HEADER = "# itmkit sweep v1"
BOXDIM_HEADER = "# itmkit boxdim v1"
RASTER_HEADER = "# itmkit raster v1"
SWEEP_COLUMNS = ("index", "alpha", "beta", "c", "outcome", "steps",
                 "fraction")

_PATH_OUTCOMES = {ROTATION: FINITE, TIE: TIE, PERIODIC: PERIODIC,
                  SURVIVOR: SURVIVOR}


class SweepConfig:

    def __init__(self, sample_count=1000, depth=DEFAULT_DEPTH, rng_seed=0,
                 dyadic_precision=DEFAULT_PRECISION,
                 max_steps=DEFAULT_MAX_STEPS, max_pieces=DEFAULT_MAX_PIECES,
                 transit_cap=DEFAULT_TRANSIT_CAP, trim_cap=DEFAULT_TRIM_CAP,
                 cross_check=False):
        self.sample_count = sample_count
        self.depth = depth
        self.rng_seed = rng_seed
        self.dyadic_precision = dyadic_precision
        self.max_steps = max_steps
        self.max_pieces = max_pieces
        self.transit_cap = transit_cap
        self.trim_cap = trim_cap
        self.cross_check = cross_check
        if sample_count < 0 or depth < 0:
            raise ValueError("Sample count and depth must be non "
                             "negative.")
        if not 0 <= rng_seed < 2 ** 64:
            raise ValueError("The seed must be a 64 bit unsigned integer.")
        if not 1 <= dyadic_precision <= MAX_PRECISION:
            raise ValueError("Dyadic precision must lie in 1..{}.".format(
                MAX_PRECISION))
        if min(max_steps, max_pieces, transit_cap, trim_cap) < 1:
            raise ValueError("Budgets must be positive.")

    @property
    def checkpoints(self):
        return tuple(sorted({point for point in CHECKPOINTS
                             if point <= self.depth} | {self.depth}))


class BoxDimConfig(SweepConfig):

    def __init__(self, resolutions=DEFAULT_RESOLUTIONS, depth=DEFAULT_DEPTH,
                 **kwargs):
        super().__init__(sample_count=0, depth=depth, **kwargs)
        self.resolutions = tuple(resolutions)
        if not self.resolutions:
            raise ValueError("At least one resolution is needed.")
        if any(k < 2 for k in self.resolutions):
            raise ValueError("Resolutions must be at least 2.")
        if list(self.resolutions) != sorted(set(self.resolutions)):
            raise ValueError("Resolutions must be strictly ascending.")


class SurvivorRecord:

    def __init__(self, rotation, outcome, steps=0, detail=""):
        self.rotation = rotation
        self.outcome = outcome
        self.steps = steps
        self.detail = detail
        self.attractor = None

    def survives(self, depth):
        """ Whether no stop happened within the first ``depth`` steps. A stop
        counts as the step it happened at.
        """
        if self.outcome in (SURVIVOR, PERIODIC):
            return True
        if self.outcome in (FINITE, TIE):
            return self.steps > depth
        return False

    def __repr__(self):
        return "SurvivorRecord({}, {}({}){})".format(
            self.rotation.serialize(), self.outcome, self.steps,
            ", {}".format(self.detail) if self.detail else "")


def _classify(d, cfg):
    if d.is_degenerate:
        return SurvivorRecord(d, DEGENERATE)
    if cfg.depth == 0:
        return SurvivorRecord(d, SURVIVOR)
    try:
        conversion = convert_double_rotation(d, cfg.trim_cap)
    except DegenerateRotation as e:
        return SurvivorRecord(d, FINITE, detail=e.detail)
    except NotReducibleTo3ITM as e:
        return SurvivorRecord(d, UNCONVERTED, detail=e.detail)
    try:
        reduced = reduce_if_singularity_in_gap(
            conversion.itm.to_piecewise(), cfg.trim_cap)
    except BudgetExceeded as e:
        return SurvivorRecord(d, UNCONVERTED, detail=str(e))
    if reduced is not None:
        return SurvivorRecord(d, FINITE, detail=repr(reduced))
    try:
        p = split(conversion.itm)
    except CoincidentImages as e:
        return SurvivorRecord(d, TIE, detail=str(e))
    except NoOverlap:
        return SurvivorRecord(d, FINITE, detail="interval exchange")
    except InvalidITM as e:
        return SurvivorRecord(d, UNCONVERTED, detail=e.detail)
    try:
        path = iterate(p, cfg.depth, transit_cap=cfg.transit_cap)
    except GapPositionUnsupported as e:
        return SurvivorRecord(d, GAP3, detail=str(e))
    except UnsupportedStep as e:
        return SurvivorRecord(d, UNSUPPORTED, detail=e.detail)
    return SurvivorRecord(d, _PATH_OUTCOMES[path.outcome], path.depth)


def contradicts(record, report):
    """ Whether an induction record and an attractor report can not both
    hold. A periodic induction means infinite type, so its attractor can
    not settle; a degenerate double rotation is a rotation, so its image is
    the whole circle from the start. Stops, survivors and an undetermined
    attractor are budget bound and never contradict anything.
    """
    if record.outcome == PERIODIC:
        return report.finite
    if record.outcome == DEGENERATE:
        return not report.finite or report.steps != 0
    return False


def classify_one(d, cfg=None):
    """ Classify one double rotation. With ``cfg.cross_check`` the nested
    image iteration runs too and a pair of outcomes refused by contradicts
    raises ClassifierContradiction.
    """
    if cfg is None:
        cfg = SweepConfig()
    record = _classify(d, cfg)
    if cfg.cross_check:
        report = attractor_classify(dr_to_piecewise(d), cfg.max_steps,
                                    cfg.max_pieces)
        record.attractor = report
        if contradicts(record, report):
            raise ClassifierContradiction(d.serialize(), record.outcome,
                                          report)
        if record.outcome in (FINITE, TIE) and not report.finite:
            logger.debug("Attractor of %s undetermined after %s steps.",
                         d.serialize(), report.steps)
    return record


def sample_rotations(cfg):
    rng = np.random.default_rng(cfg.rng_seed)
    numerators = rng.integers(0, 1 << cfg.dyadic_precision,
                              size=(cfg.sample_count, 3), dtype=np.int64)
    scale = 1 << cfg.dyadic_precision
    for alpha, beta, c in numerators:
        yield DoubleRotation(Fraction(int(alpha), scale),
                             Fraction(int(beta), scale),
                             Fraction(int(c), scale))


class SweepResult:

    def __init__(self, cfg, records):
        self.cfg = cfg
        self.records = list(records)

    def survivors(self, depth):
        return sum(1 for record in self.records if record.survives(depth))

    def fraction(self, depth):
        if not self.records:
            return Fraction(0)
        return Fraction(self.survivors(depth), len(self.records))

    def counts(self):
        found = {outcome: 0 for outcome in OUTCOMES}
        for record in self.records:
            found[record.outcome] += 1
        return found

    def to_csv(self):
        buffer = io.StringIO()
        buffer.write("{} seed={} samples={} depth={} precision={}\n".format(
            SWEEP_HEADER, self.cfg.rng_seed, self.cfg.sample_count,
            self.cfg.depth, self.cfg.dyadic_precision))
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(SWEEP_COLUMNS)
        for index, record in enumerate(self.records):
            d = record.rotation
            writer.writerow([index, format_scalar(d.alpha),
                             format_scalar(d.beta), format_scalar(d.c),
                             record.outcome, record.steps, ""])
        if self.records:
            for depth in self.cfg.checkpoints:
                writer.writerow(["summary", "", "", "",
                                 "survivor@{}".format(depth),
                                 self.survivors(depth),
                                 format_scalar(self.fraction(depth))])
            for outcome, count in self.counts().items():
                writer.writerow(["summary", "", "", "", outcome, count,
                                 format_scalar(Fraction(
                                     count, len(self.records)))])
        return buffer.getvalue()


def sweep(cfg):
    records = [classify_one(d, cfg) for d in sample_rotations(cfg)]
    result = SweepResult(cfg, records)
    for depth in cfg.checkpoints:
        logger.info("Survivors at depth %s: %s of %s (%.4f).", depth,
                    result.survivors(depth), len(records),
                    float(result.fraction(depth)))
    return result


def _clamp(value, precision):
    low = Fraction(1, 1 << precision)
    return min(max(value, low), 1 - low)


def _sample_points(box, k, precision):
    size = Fraction(1, 1 << k)
    lows = [index * size for index in box]
    for corner in range(8):
        yield tuple(_clamp(low + size * ((corner >> axis) & 1), precision)
                    for axis, low in enumerate(lows))
    yield tuple(low + size / 2 for low in lows)


class BoxDimResult:

    def __init__(self, cfg, counts):
        self.cfg = cfg
        self.counts = dict(counts)

    @property
    def slope(self):
        """ Least squares slope of log2 N(k) against k. """
        ks = np.array(self.cfg.resolutions, dtype=float)
        counts = np.array([self.counts[k] for k in self.cfg.resolutions],
                          dtype=float)
        if len(ks) < 2 or not counts.all():
            return None
        return float(np.polyfit(ks, np.log2(counts), 1)[0])

    def to_csv(self):
        buffer = io.StringIO()
        buffer.write("{} depth={} precision={}\n".format(
            BOXDIM_HEADER, self.cfg.depth, self.cfg.dyadic_precision))
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(("k", "boxes", "surviving"))
        for k in self.cfg.resolutions:
            writer.writerow((k, 1 << (3 * k), self.counts[k]))
        slope = self.slope
        writer.writerow(("slope", "", "" if slope is None else
                         "{:.6f}".format(slope)))
        return buffer.getvalue()


def boxdim(cfg):
    """ Count the boxes of the 2^k grid on [0, 1)^3 where one of the eight
    corners or the center survives ``cfg.depth`` steps. This bounds the
    depth limited survivor set from above.
    """
    cache = {}

    def survives(point):
        if point not in cache:
            cache[point] = _classify(DoubleRotation(*point), cfg).survives(
                cfg.depth)
        return cache[point]

    counts = {}
    for k in cfg.resolutions:
        side = 1 << k
        found = 0
        for box in np.ndindex(side, side, side):
            if any(survives(point) for point in
                   _sample_points(box, k, cfg.dyadic_precision)):
                found += 1
        counts[k] = found
        logger.info("k=%s: %s of %s boxes survive depth %s.", k, found,
                    side ** 3, cfg.depth)
    return BoxDimResult(cfg, counts)


def _shade(record):
    if record.outcome == DEGENERATE:
        return 255
    if record.outcome in (SURVIVOR, PERIODIC):
        return 0
    if record.outcome in (FINITE, TIE):
        return int(254 - min(190, 24 * np.log2(record.steps + 1)))
    return 128


def render_slice(c, resolution, depth, cfg=None):
    """ Binary PGM of the slice at ``c``: alpha along the columns, beta
    along the rows, sampled at pixel centers.
    """
    c = Fraction(c)
    if not 0 < c < 1:
        raise ValueError("The slice needs 0 < c < 1.")
    if resolution < 1:
        raise ValueError("Resolution must be positive.")
    if cfg is None:
        cfg = SweepConfig(sample_count=0, depth=depth)
    raster = np.zeros((resolution, resolution), dtype=np.uint8)
    for row in range(resolution):
        beta = Fraction(2 * row + 1, 2 * resolution)
        for column in range(resolution):
            alpha = Fraction(2 * column + 1, 2 * resolution)
            raster[row, column] = _shade(_classify(
                DoubleRotation(alpha, beta, c), cfg))
    header = "P5\n{}\n{} {}\n255\n".format(RASTER_HEADER, resolution,
                                              resolution)
    return header.encode("ascii") + raster.tobytes()


IRREDUCIBLE_COMBINATORICS = ((2, 3, 1), (3, 2, 1))


def random_itm3(rng, precision=DEFAULT_PRECISION):
    """ A random irreducible 3-ITM with dyadic lengths summing to 1, or
    ``None`` when the draw is degenerate.
    """
    scale = 1 << precision
    combinatorics = IRREDUCIBLE_COMBINATORICS[
        int(rng.integers(0, len(IRREDUCIBLE_COMBINATORICS)))]
    weights = [int(value) + 1 for value in
               rng.integers(0, scale, size=3, dtype=np.int64)]
    total = sum(weights)
    letters = ("A", "B", "C")
    lengths = {letter: Fraction(weight, total)
               for letter, weight in zip(letters, weights)}
    middle = letters[combinatorics.index(2)]
    t = Fraction(int(rng.integers(0, scale, dtype=np.int64)), scale) * (
        1 - lengths[middle])
    try:
        return ITM3({letter: index + 1 for index, letter in
                     enumerate(letters)},
                    dict(zip(letters, combinatorics)), lengths, t)
    except InvalidITM:
        return None


class SuiteReport:

    def __init__(self):
        self.passed = 0
        self.skipped = 0
        self.failures = []
        self.histogram = {}

    @property
    def ok(self):
        return not self.failures

    def summary(self):
        lines = ["passed: {}".format(self.passed),
                 "skipped: {}".format(self.skipped),
                 "failed: {}".format(len(self.failures))]
        for key in sorted(self.histogram):
            lines.append("  {}: {}".format(key, self.histogram[key]))
        for subject, error in self.failures:
            lines.append("  {!r}: {}".format(subject, error))
        return "\n".join(lines) + "\n"


def accel_suite(count, seed=0, cap=DEFAULT_ACCEL_CAP,
                precision=DEFAULT_PRECISION):
    """ check_acceleration on random 3-ITMs; draws without an overlap, with
    a singularity in the gap, with a tie or with two images sharing an
    endpoint are skipped.
    """
    rng = np.random.default_rng(seed)
    report = SuiteReport()
    for _ in range(count):
        m = random_itm3(rng, precision)
        if m is None:
            report.skipped += 1
            continue
        try:
            accel = check_acceleration(m, cap)
        except (NoOverlap, SingularityInGap, TieDegenerate,
                CoincidentImages, NotThreeBranches, InvalidITM):
            report.skipped += 1
            continue
        except (AccelFailure, UnsupportedStep, NonReturning) as e:
            report.failures.append((m, e))
            continue
        report.passed += 1
        report.histogram[accel.n] = report.histogram.get(accel.n, 0) + 1
    logger.info("Acceleration: %s passed, %s skipped, %s failed.",
                report.passed, report.skipped, len(report.failures))
    return report


def oracle_suite(count, seed=0, depth=DEFAULT_DEPTH,
                 precision=DEFAULT_PRECISION):
    """ Random lengths on the seed words, iterated with every step checked
    against the first return map. Counts checked steps in ``passed``.
    """
    rng = np.random.default_rng(seed)
    scale = 1 << precision
    report = SuiteReport()
    for index in range(count):
        w0, w1 = SEED_WORDS[index % len(SEED_WORDS)]
        weights = rng.integers(1, scale, size=len(ALPHABET), dtype=np.int64)
        p = ITMPermutation(w0, w1, {letter: Fraction(int(weight), scale)
                                    for letter, weight in
                                    zip(ALPHABET, weights)})
        try:
            path = iterate(p, depth, check=True)
        except (OracleMismatch, NonReturning) as e:
            report.failures.append((p, e))
            continue
        except (GapPositionUnsupported, UnsupportedStep):
            report.skipped += 1
            continue
        report.passed += len(path.steps)
        report.histogram[path.outcome] = report.histogram.get(
            path.outcome, 0) + 1
    logger.info("Oracle: %s steps checked, %s failures.", report.passed,
                len(report.failures))
    return report

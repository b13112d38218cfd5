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
Conversions between double rotations, 3-ITMs and ITM permutations.
"""

from . import ALPHABET
from .errors import (BudgetExceeded, CoincidentImages, DegenerateRotation,
                     InvalidITM, NoOverlap, NotReducibleTo3ITM,
                     SingularityInGap)
from .intervals import (DEFAULT_TRIM_CAP, Interval, PiecewiseTranslation,
                        gaps, image, overlaps, rescale, singularities_in_gaps,
                        trim_extremal_gaps)
from .model import ITM3, ITMPermutation, check_in_support, gap_symbol

from fractions import Fraction
import logging

logger = logging.getLogger(__name__)

ONE = Fraction(1)


class Conversion:
    """ A double rotation read as a 3-ITM.

    The circle is cut at ``offset`` and the resulting map trimmed to
    ``base``; ``itm`` is that map rescaled to [0, 1). A point u of the 3-ITM
    sits at ``(offset + base.lo + u * base.length) mod 1`` on the circle.
    """

    def __init__(self, rotation, offset, base, itm):
        self.rotation = rotation
        self.offset = offset
        self.base = base
        self.itm = itm

    def to_circle(self, u):
        return (self.offset + self.base.lo + u * self.base.length) % 1

    def __repr__(self):
        return "Conversion({} -> {}, offset={}, base={})".format(
            self.rotation.serialize(), self.itm, self.offset, self.base)


def dr_to_piecewise(d):
    branches = []
    wrap = ONE - d.alpha
    if d.c > 0:
        if d.alpha == 0:
            branches.append((Interval(0, d.c), 0))
        else:
            branches.append((Interval(0, min(d.c, wrap)), d.alpha))
            if wrap < d.c:
                branches.append((Interval(wrap, d.c), d.alpha - 1))
    wrap = ONE - d.beta
    if d.c < 1:
        if d.beta == 0:
            branches.append((Interval(d.c, 1), 0))
        else:
            if d.c < wrap:
                branches.append((Interval(d.c, wrap), d.beta))
            branches.append((Interval(max(d.c, wrap), 1), d.beta - 1))
    return PiecewiseTranslation(Interval(0, 1), branches)


def rotate_circle(T, offset):
    """ Conjugate a map of the circle [0, 1) by the rotation x -> x -
    offset, cutting branches again where they cross 0.
    """
    branches = []
    for branch in T.branches:
        lo, hi = branch.domain.lo - offset, branch.domain.hi - offset
        if lo < 0 < hi:
            parts = [(lo + 1, ONE), (Fraction(0), hi)]
        elif hi <= 0:
            parts = [(lo + 1, hi + 1)]
        else:
            parts = [(lo, hi)]
        for part_lo, part_hi in parts:
            start = part_lo + branch.shift
            shift = branch.shift + (start % 1 - start)
            cut = ONE - shift
            if part_lo < cut < part_hi:
                branches.append((Interval(part_lo, cut), shift))
                branches.append((Interval(cut, part_hi), shift - 1))
            else:
                branches.append((Interval(part_lo, part_hi), shift))
    return PiecewiseTranslation(Interval(0, 1), branches)


def _gap_end(T):
    holes = gaps(T).pieces
    if not holes:
        return None
    if len(holes) == 2:
        # The gap arc runs through 0.
        return holes[0].hi
    return holes[0].hi % 1


def convert_double_rotation(d, cap=DEFAULT_TRIM_CAP):
    if d.is_degenerate:
        raise DegenerateRotation("alpha equals beta or c is an endpoint")
    T = dr_to_piecewise(d)
    offset = _gap_end(T)
    if offset is None:
        raise DegenerateRotation("the map is a bijection of the circle")
    S = rotate_circle(T, offset)
    try:
        S = trim_extremal_gaps(S, cap)
    except BudgetExceeded:
        raise NotReducibleTo3ITM("trimming did not settle within {} "
                                 "rounds".format(cap))
    if len(S.branches) <= 2:
        raise DegenerateRotation("the map reduces to {} branches".format(
            len(S.branches)))
    if len(S.branches) > 3:
        raise NotReducibleTo3ITM("{} branches persist".format(
            len(S.branches)))
    try:
        itm = ITM3.from_piecewise(rescale(S))
    except InvalidITM as e:
        raise NotReducibleTo3ITM(e.detail)
    logger.debug("%s cut at %s and trimmed to %s.", d, offset, S.support)
    return Conversion(d, offset, S.support, itm)


def dr_to_itm3(d, cap=DEFAULT_TRIM_CAP):
    return convert_double_rotation(d, cap).itm


def split_map(T, repeated="D"):
    """ Cut the two overlapping images of a gap free 3-branch map at the
    overlap, giving the five cells of an ITM permutation.

    The overlap cells carry ``repeated``; the other cells take the remaining
    letters alphabetically, in domain order. When two images end at an
    overlap edge together the cell between them would be empty and
    CoincidentImages is raised instead.
    """
    if repeated not in ALPHABET:
        raise ValueError("Unknown letter {}".format(repeated))
    if T.support.lo != 0:
        raise InvalidITM("the support must start at 0")
    holes = gaps(T)
    if holes.is_empty:
        raise NoOverlap()
    hits = singularities_in_gaps(T)
    if hits:
        raise SingularityInGap(*hits[0])
    doubled = overlaps(T)
    if len(doubled) != 1 or len(holes) != 1:
        raise InvalidITM("expected one overlap and one gap")
    overlap = doubled.pieces[0]
    cells = []
    cuts = {overlap.lo: 0, overlap.hi: 0}
    for branch in T.branches:
        points = {branch.domain.lo, branch.domain.hi}
        for edge in (overlap.lo, overlap.hi):
            point = edge - branch.shift
            if branch.domain.lo < point < branch.domain.hi:
                points.add(point)
                cuts[edge] += 1
        points = sorted(points)
        for lo, hi in zip(points, points[1:]):
            cell = Interval(lo, hi)
            cells.append((cell, branch.shift,
                          overlap.covers(cell.shifted(branch.shift))))
    for edge in (overlap.lo, overlap.hi):
        # An overlap edge cutting no domain ends two images at once.
        if not cuts[edge]:
            raise CoincidentImages(edge)
    if len(cells) != 5:
        raise InvalidITM("expected five cells, got {}".format(len(cells)))
    names = iter(letter for letter in ALPHABET if letter != repeated)
    w0 = []
    lengths = {}
    bottom = []
    for cell, shift, doubled_cell in cells:
        letter = repeated if doubled_cell else next(names)
        w0.append(letter)
        lengths[letter] = cell.length
        if not doubled_cell or letter not in [item[1] for item in bottom]:
            bottom.append((cell.lo + shift, letter))
    bottom.append((holes.pieces[0].lo, gap_symbol(repeated)))
    w1 = [symbol for _, symbol in sorted(bottom)]
    return ITMPermutation(w0, w1, lengths)


def split(m, repeated="D"):
    return split_map(m.to_piecewise(), repeated)


def eval_perm(p, x):
    x = Fraction(x)
    check_in_support(p, x)
    cursor = Fraction(0)
    for position, symbol in enumerate(p.w0, 1):
        length = p.length(symbol)
        if x < cursor + length:
            target = p.w1.index(symbol) + 1
            return (x + p.prefix_length(p.w1, target) -
                    p.prefix_length(p.w0, position))
        cursor += length


def perm_to_piecewise(p):
    branches = []
    for symbol, cell in p.cells():
        target = p.w1.index(symbol) + 1
        branches.append((cell, p.prefix_length(p.w1, target) - cell.lo))
    return PiecewiseTranslation(Interval(0, p.total_length), branches)


def flip(p):
    return ITMPermutation(tuple(reversed(p.w0)), tuple(reversed(p.w1)),
                          p.lengths)


def permutation_image(p):
    return image(perm_to_piecewise(p))

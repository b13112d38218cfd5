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
Exact interval arithmetic and piecewise translations.

Every position and length is a ``fractions.Fraction`` and every interval is
half-open, [lo, hi). A singularity belongs to the piece on its right.
"""

from .errors import (BudgetExceeded, NonReturning, NotThreeBranches,
                     OutOfSupport)
from .helpers import format_interval, format_scalar

from collections import namedtuple
from fractions import Fraction
import logging

logger = logging.getLogger(__name__)

DEFAULT_MAX_STEPS = 2 ** 12
DEFAULT_MAX_PIECES = 2 ** 14
DEFAULT_TRANSIT_CAP = 2 ** 12
DEFAULT_TRIM_CAP = 2 ** 12

FINITE = "finite"
UNDETERMINED = "undetermined"


class Interval:

    __slots__ = ("lo", "hi")

    def __init__(self, lo, hi):
        lo = Fraction(lo)
        hi = Fraction(hi)
        if not lo < hi:
            raise ValueError("Empty interval [{}, {})".format(lo, hi))
        self.lo = lo
        self.hi = hi

    @property
    def length(self):
        return self.hi - self.lo

    @property
    def midpoint(self):
        return (self.lo + self.hi) / 2

    def contains(self, x):
        return self.lo <= x < self.hi

    def covers(self, other):
        return self.lo <= other.lo and other.hi <= self.hi

    def intersection(self, other):
        lo = max(self.lo, other.lo)
        hi = min(self.hi, other.hi)
        if lo < hi:
            return Interval(lo, hi)
        return None

    def shifted(self, shift):
        return Interval(self.lo + shift, self.hi + shift)

    def __eq__(self, other):
        if not isinstance(other, Interval):
            return NotImplemented
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self):
        return hash((self.lo, self.hi))

    def __repr__(self):
        return format_interval(self.lo, self.hi)


class IntervalSet:
    """ A finite union of disjoint half-open intervals, kept sorted and
    maximal: touching pieces are fused on construction.
    """

    __slots__ = ("pieces",)

    def __init__(self, pieces=()):
        items = []
        for piece in pieces:
            if not isinstance(piece, Interval):
                lo, hi = piece
                if not Fraction(lo) < Fraction(hi):
                    continue
                piece = Interval(lo, hi)
            items.append(piece)
        items.sort(key=lambda item: item.lo)
        merged = []
        for piece in items:
            if merged and piece.lo <= merged[-1].hi:
                if piece.hi > merged[-1].hi:
                    merged[-1] = Interval(merged[-1].lo, piece.hi)
            else:
                merged.append(piece)
        self.pieces = tuple(merged)

    @property
    def total_length(self):
        return sum((piece.length for piece in self.pieces), Fraction(0))

    @property
    def is_empty(self):
        return not self.pieces

    def hull(self):
        if not self.pieces:
            return None
        return Interval(self.pieces[0].lo, self.pieces[-1].hi)

    def contains(self, x):
        return any(piece.contains(x) for piece in self.pieces)

    def component_of(self, x):
        for index, piece in enumerate(self.pieces):
            if piece.contains(x):
                return index
        return None

    def intersection(self, other):
        if isinstance(other, Interval):
            other = IntervalSet([other])
        found = []
        for mine in self.pieces:
            for theirs in other.pieces:
                common = mine.intersection(theirs)
                if common is not None:
                    found.append(common)
        return IntervalSet(found)

    def union(self, other):
        return IntervalSet(self.pieces + other.pieces)

    def issubset(self, other):
        return self.intersection(other) == self

    def complement_in(self, interval):
        holes = []
        cursor = interval.lo
        for piece in self.intersection(interval).pieces:
            if cursor < piece.lo:
                holes.append(Interval(cursor, piece.lo))
            cursor = piece.hi
        if cursor < interval.hi:
            holes.append(Interval(cursor, interval.hi))
        return IntervalSet(holes)

    def __iter__(self):
        return iter(self.pieces)

    def __len__(self):
        return len(self.pieces)

    def __eq__(self, other):
        if not isinstance(other, IntervalSet):
            return NotImplemented
        return self.pieces == other.pieces

    def __hash__(self):
        return hash(self.pieces)

    def __repr__(self):
        if not self.pieces:
            return "{}"
        return " U ".join(repr(piece) for piece in self.pieces)


class Branch(namedtuple("Branch", ["domain", "shift"])):

    __slots__ = ()

    @property
    def image(self):
        return self.domain.shifted(self.shift)

    def __repr__(self):
        sign = "+" if self.shift >= 0 else ""
        return "{}{}{}".format(self.domain, sign, format_scalar(self.shift))


class PiecewiseTranslation:
    """ A map on ``support`` that translates each branch domain rigidly.

    Branch domains tile the support without holes, every image stays inside
    the support and neighbouring branches with the same shift are merged, so
    two equal maps always have equal branch tuples.
    """

    __slots__ = ("support", "branches")

    def __init__(self, support, branches):
        items = []
        for branch in branches:
            if not isinstance(branch, Branch):
                domain, shift = branch
                if not isinstance(domain, Interval):
                    domain = Interval(*domain)
                branch = Branch(domain, Fraction(shift))
            items.append(branch)
        items.sort(key=lambda item: item.domain.lo)
        merged = []
        for branch in items:
            if (merged and merged[-1].shift == branch.shift and
                    merged[-1].domain.hi == branch.domain.lo):
                merged[-1] = Branch(Interval(merged[-1].domain.lo,
                                             branch.domain.hi), branch.shift)
            else:
                merged.append(branch)
        cursor = support.lo
        for branch in merged:
            if branch.domain.lo != cursor:
                raise ValueError("Branch domains do not tile {} at {}".format(
                    support, format_scalar(cursor)))
            if not support.covers(branch.image):
                raise ValueError("Branch {} maps outside {}".format(
                    branch, support))
            cursor = branch.domain.hi
        if cursor != support.hi:
            raise ValueError("Branch domains do not reach the end of "
                             "{}".format(support))
        self.support = support
        self.branches = tuple(merged)

    @classmethod
    def identity(cls, support):
        return cls(support, [(support, 0)])

    @classmethod
    def rotation(cls, angle, support=None):
        """ The rotation x -> x + angle modulo the support length. """
        if support is None:
            support = Interval(0, 1)
        angle = Fraction(angle) % support.length
        if angle == 0:
            return cls.identity(support)
        cut = support.hi - angle
        return cls(support, [
            (Interval(support.lo, cut), angle),
            (Interval(cut, support.hi), angle - support.length),
        ])

    @property
    def singularities(self):
        return tuple(branch.domain.lo for branch in self.branches[1:])

    def branch_at(self, x):
        for branch in self.branches:
            if branch.domain.contains(x):
                return branch
        raise OutOfSupport(x, self.support)

    def __call__(self, x):
        return evaluate(self, x)

    def __eq__(self, other):
        if not isinstance(other, PiecewiseTranslation):
            return NotImplemented
        return (self.support == other.support and
                self.branches == other.branches)

    def __hash__(self):
        return hash((self.support, self.branches))

    def __repr__(self):
        return "PiecewiseTranslation({}: {})".format(
            self.support, ", ".join(repr(branch) for branch in self.branches))


class ReturnPiece(namedtuple("ReturnPiece", ["domain", "shift", "time"])):

    __slots__ = ()


class ReturnMap:

    def __init__(self, base, pieces):
        self.base = base
        self.pieces = tuple(pieces)
        self.map = PiecewiseTranslation(
            base, [(piece.domain, piece.shift) for piece in self.pieces])

    @property
    def return_times(self):
        return tuple(piece.time for piece in self.pieces)

    def return_time(self, x):
        for piece in self.pieces:
            if piece.domain.contains(x):
                return piece.time
        raise OutOfSupport(x, self.base)

    def __call__(self, x):
        return evaluate(self.map, x)

    def __repr__(self):
        return "ReturnMap({}: {})".format(self.base, ", ".join(
            "{}{}{} (t={})".format(piece.domain,
                                   "+" if piece.shift >= 0 else "",
                                   format_scalar(piece.shift), piece.time)
            for piece in self.pieces))


class ClassificationReport:

    def __init__(self, kind, steps, attractor):
        self.kind = kind
        self.steps = steps
        self.attractor = attractor

    @property
    def finite(self):
        return self.kind == FINITE

    @property
    def measure(self):
        return self.attractor.total_length

    @property
    def components(self):
        return len(self.attractor)

    def __repr__(self):
        if self.finite:
            return "Finite{{N={}, attractor={}}}".format(self.steps,
                                                       self.attractor)
        return "Undetermined{{steps={}, last_set={}}}".format(
            self.steps, self.attractor)


class RotationReport:
    """ Outcome of the singularity-in-gap reduction: ``map`` is a rotation
    of ``base`` with one branch when the angle is 0 and two otherwise.
    """

    def __init__(self, source, singularity, gap, map, rounds, steps=0):
        self.source = source
        self.singularity = singularity
        self.gap = gap
        self.map = map
        self.rounds = rounds
        self.steps = steps

    @property
    def base(self):
        return self.map.support

    @property
    def angle(self):
        return self.map.branches[0].shift

    def __repr__(self):
        return "Rotation{{base={}, angle={}}}".format(
            self.base, format_scalar(self.angle))


def _as_set(value):
    if isinstance(value, IntervalSet):
        return value
    if isinstance(value, Interval):
        return IntervalSet([value])
    return IntervalSet(value)


def evaluate(T, x):
    x = Fraction(x)
    return x + T.branch_at(x).shift


def orbit(T, x, n):
    points = [Fraction(x)]
    for _ in range(n):
        points.append(evaluate(T, points[-1]))
    return points


def image(T, S=None):
    """ Image of ``S`` (the whole support when omitted) under ``T``. """
    if S is None:
        S = IntervalSet([T.support])
    S = _as_set(S)
    found = []
    for piece in S:
        for branch in T.branches:
            common = piece.intersection(branch.domain)
            if common is not None:
                found.append(common.shifted(branch.shift))
    return IntervalSet(found)


def gaps(T):
    return image(T).complement_in(T.support)


def overlaps(T):
    found = []
    for i, first in enumerate(T.branches):
        for second in T.branches[i + 1:]:
            common = first.image.intersection(second.image)
            if common is not None:
                found.append(common)
    return IntervalSet(found)


def has_extremal_gaps(T):
    return image(T).hull() != T.support


def singularities_in_gaps(T):
    """ Pairs (singularity, gap) with the singularity strictly inside. """
    found = []
    for gap in gaps(T):
        for point in T.singularities:
            if gap.lo < point < gap.hi:
                found.append((point, gap))
    return found


def attractor_classify(T, max_steps=DEFAULT_MAX_STEPS,
                       max_pieces=DEFAULT_MAX_PIECES):
    current = IntervalSet([T.support])
    for step in range(max_steps):
        following = image(T, current)
        if following == current:
            return ClassificationReport(FINITE, step, current)
        if len(following) > max_pieces:
            logger.debug("Attractor iteration exceeded %s pieces at step "
                         "%s.", max_pieces, step + 1)
            return ClassificationReport(UNDETERMINED, step + 1, following)
        current = following
    return ClassificationReport(UNDETERMINED, max_steps, current)


def first_return(T, base, transit_cap=DEFAULT_TRANSIT_CAP):
    """ First return map of ``T`` to ``base``.

    The base is refined by pulling back branch boundaries along the
    itineraries, so the pieces come out maximal without sampling.
    """
    if not T.support.covers(base):
        raise OutOfSupport(base, T.support)
    pending = [(base.lo, base.hi, Fraction(0))]
    returned = []
    time = 0
    while pending:
        time += 1
        if time > transit_cap:
            lo, hi, _ = pending[0]
            raise NonReturning(Interval(lo, hi), transit_cap)
        wandering = []
        for lo, hi, shift in pending:
            for branch in T.branches:
                a = max(lo + shift, branch.domain.lo)
                b = min(hi + shift, branch.domain.hi)
                if a >= b:
                    continue
                total = shift + branch.shift
                a, b = a + branch.shift, b + branch.shift
                inside_lo, inside_hi = max(a, base.lo), min(b, base.hi)
                if inside_lo < inside_hi:
                    returned.append((inside_lo - total, inside_hi - total,
                                     total, time))
                if a < min(b, base.lo):
                    wandering.append((a - total, min(b, base.lo) - total,
                                      total))
                if max(a, base.hi) < b:
                    wandering.append((max(a, base.hi) - total, b - total,
                                      total))
        pending = wandering
    returned.sort()
    pieces = []
    for lo, hi, shift, time in returned:
        if (pieces and pieces[-1].shift == shift and pieces[-1].time == time
                and pieces[-1].domain.hi == lo):
            pieces[-1] = ReturnPiece(Interval(pieces[-1].domain.lo, hi),
                                     shift, time)
        else:
            pieces.append(ReturnPiece(Interval(lo, hi), shift, time))
    return ReturnMap(base, pieces)


def restrict(T, base):
    """ Restriction of ``T`` to ``base``; the image of ``base`` must stay
    inside it, which makes the restriction the first return map.
    """
    branches = []
    for branch in T.branches:
        common = branch.domain.intersection(base)
        if common is not None:
            branches.append((common, branch.shift))
    return PiecewiseTranslation(base, branches)


def trim_extremal_gaps(T, cap=DEFAULT_TRIM_CAP):
    for _ in range(cap + 1):
        hull = image(T).hull()
        if hull == T.support:
            return T
        logger.debug("Trimming %s down to %s.", T.support, hull)
        T = restrict(T, hull)
    raise BudgetExceeded("trim_extremal_gaps", cap)


def reflect(T):
    """ Conjugation by x -> lo + hi - x, read back in the half-open
    convention. Agrees with the exact conjugate away from singularities.
    """
    total = T.support.lo + T.support.hi
    return PiecewiseTranslation(T.support, [
        (Interval(total - branch.domain.hi, total - branch.domain.lo),
         -branch.shift) for branch in T.branches])


def rescale(T, length=1):
    """ Affine conjugate of ``T`` living on [0, length). """
    offset = T.support.lo
    ratio = Fraction(length) / T.support.length

    def move(x):
        return (x - offset) * ratio

    return PiecewiseTranslation(Interval(0, length), [
        (Interval(move(branch.domain.lo), move(branch.domain.hi)),
         branch.shift * ratio) for branch in T.branches])


def collapse(T, U):
    """ The map induced on the invariant union ``U`` with the holes between
    its components squeezed out, living on [0, |U|).
    """
    U = _as_set(U)
    offsets = []
    consumed = Fraction(0)
    for piece in U:
        offsets.append(piece.lo - consumed)
        consumed += piece.length
    branches = []
    for index, piece in enumerate(U):
        for branch in T.branches:
            common = piece.intersection(branch.domain)
            if common is None:
                continue
            target = U.component_of(common.lo + branch.shift)
            if (target is None or
                    not U.pieces[target].covers(common.shifted(
                        branch.shift))):
                raise ValueError("{} does not map into a single component "
                                 "of {}".format(common, U))
            branches.append((common.shifted(-offsets[index]),
                             branch.shift - offsets[target] +
                             offsets[index]))
    return PiecewiseTranslation(Interval(0, consumed), branches)


def reduce_if_singularity_in_gap(T, cap=DEFAULT_TRIM_CAP):
    """ Collapse a 3-branch map with a singularity in an image gap onto its
    image until it is a bijection, then cut the base by the shorter of the
    last domain and the last image until two branches at most are left.
    The result is a rotation of the base.
    """
    if len(T.branches) != 3:
        raise NotThreeBranches(len(T.branches))
    hits = singularities_in_gaps(T)
    if not hits:
        return None
    singularity, gap = hits[0]
    current = T
    rounds = 0
    while True:
        covered = image(current)
        if covered == IntervalSet([current.support]):
            break
        rounds += 1
        if rounds > cap:
            raise BudgetExceeded("reduce_if_singularity_in_gap", cap)
        current = collapse(current, covered)
    steps = 0
    while len(current.branches) > 2:
        steps += 1
        if steps > cap:
            raise BudgetExceeded("reduce_if_singularity_in_gap", cap)
        top = current.branches[-1].domain.length
        bottom = max((branch.image for branch in current.branches),
                     key=lambda piece: piece.hi).length
        cut = current.support.hi - min(top, bottom)
        current = first_return(current,
                               Interval(current.support.lo, cut)).map
    logger.debug("Singularity %s in gap %s reduced in %s rounds and %s "
                 "steps.", format_scalar(singularity), gap, rounds, steps)
    return RotationReport(T, singularity, gap, current, rounds, steps)

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
Renormalization of 3-ITMs: Rauzy steps on ITM permutations, the R-induction
built from them and the accelerated Z-induction.
"""

from . import ALPHABET
from .convert import flip, perm_to_piecewise, split_map
from .errors import (AccelFailure, GapPositionUnsupported, InvalidITM,
                     ItmkitError, NoOverlap, NotThreeBranches,
                     OracleMismatch, SingularityInGap, TieDegenerate,
                     UnsupportedStep)
from .helpers import format_scalar, parse_scalar
from .intervals import (DEFAULT_TRANSIT_CAP, DEFAULT_TRIM_CAP, Interval,
                        first_return, gaps, reflect, rescale,
                        singularities_in_gaps, trim_extremal_gaps)
from .model import (ITM3, ITMPermutation, is_gap, letter_of, toggle_gap)

from collections import namedtuple
from fractions import Fraction
import logging

logger = logging.getLogger(__name__)

RIGHT = "right"
LEFT = "left"

DEFAULT_ACCEL_CAP = 64
PATH_HEADER = "# itmkit path v1"

ROTATION = "rotation"
TIE = "tie"
PERIODIC = "periodic"
SURVIVOR = "survivor"


class WordMove(namedtuple("WordMove", ["w0", "w1", "winner", "loser",
                                       "loser_is_gap"])):
    """ The combinatorial half of a right step. """

    __slots__ = ()


class Continue:

    kind = "continue"

    def __init__(self, next, winner, loser, loser_is_gap, side):
        self.next = next
        self.winner = winner
        self.loser = loser
        self.loser_is_gap = loser_is_gap
        self.side = side

    def serialize(self):
        return "step side={} winner={} loser={} loser_is_gap={} {}".format(
            self.side, self.winner, self.loser, int(self.loser_is_gap),
            " ".join("{}={}".format(letter, format_scalar(
                self.next.lengths[letter])) for letter in ALPHABET))

    def __repr__(self):
        return "Continue({} beats {}{}, {}: {})".format(
            self.winner, self.loser, " (gap)" if self.loser_is_gap else "",
            self.side, self.next)


class StopRotation:

    kind = ROTATION

    def __init__(self, reason):
        self.reason = reason

    def __repr__(self):
        return "StopRotation({})".format(self.reason)


class StopTie:

    kind = TIE

    def __init__(self, length):
        self.length = length

    def __repr__(self):
        return "StopTie({})".format(format_scalar(self.length))


def compared_symbols(w0, w1):
    return w0[-1], w1[-1]


def is_structural_tie(w0, w1):
    """ The two compared symbols share their letter, so the comparison is a
    tie for every length vector.
    """
    top, bottom = compared_symbols(w0, w1)
    return letter_of(bottom) == top


def _substitute(word, letter, inserted):
    found = []
    for symbol in word:
        found.append(symbol)
        if symbol == letter:
            found.append(inserted)
    return tuple(found)


def right_words(w0, w1, top_wins):
    """ Words after a right step where the last top symbol wins when
    ``top_wins`` is set and the last bottom symbol wins otherwise.

    Returns ``None`` when the gap wins, which ends the induction on a
    rotation.
    """
    x, y = compared_symbols(w0, w1)
    if top_wins:
        if w0.count(x) == 1:
            return WordMove(tuple(w0), _substitute(w1[:4], x, y), x,
                            letter_of(y), is_gap(y))
        return WordMove(_substitute(w0[:4], x, y),
                        _substitute(w1[:3], x, y) + (toggle_gap(y),), x,
                        letter_of(y), is_gap(y))
    if is_gap(y):
        return None
    if w0.count(y) != 1:
        raise UnsupportedStep("bottom letter {} wins while repeated in the "
                              "top word".format(y))
    return WordMove(_substitute(w0[:4], y, x), tuple(w1), y, x, False)


def right_rauzy_step(p):
    if p.gap_position < 4:
        raise GapPositionUnsupported(p.gap_position)
    x, y = compared_symbols(p.w0, p.w1)
    top, bottom = p.length(x), p.length(y)
    if is_structural_tie(p.w0, p.w1) or top == bottom:
        return StopTie(top)
    move = right_words(p.w0, p.w1, top > bottom)
    if move is None:
        return StopRotation("the gap {} beats {}".format(y, x))
    lengths = dict(p.lengths)
    lengths[move.winner] -= lengths[move.loser]
    following = ITMPermutation(move.w0, move.w1, lengths)
    return Continue(following, move.winner, move.loser, move.loser_is_gap,
                    RIGHT)


def r_step(p):
    position = p.gap_position
    if position >= 4:
        return right_rauzy_step(p)
    if position <= 2:
        outcome = right_rauzy_step(flip(p))
        if isinstance(outcome, Continue):
            outcome.next = flip(outcome.next)
            outcome.side = LEFT
        return outcome
    raise GapPositionUnsupported(position)


def _witness_points(*maps):
    points = set()
    for T in maps:
        for branch in T.branches:
            points.add(branch.domain.lo)
    ordered = sorted(points)
    hi = maps[0].support.hi
    for lo, next_lo in zip(ordered, ordered[1:] + [hi]):
        points.add((lo + next_lo) / 2)
    return sorted(points)


def oracle_check_step(p, outcome, transit_cap=DEFAULT_TRANSIT_CAP):
    """ Compare a Continue outcome with the first return of ``p`` to the
    interval it claims to induce on.

    Right steps induce on the left part [0, L'), left steps on the right part
    [L - L', L), which is translated back to 0. Raises OracleMismatch with
    the first disagreeing point.
    """
    if not isinstance(outcome, Continue):
        raise ValueError("Only Continue outcomes can be checked, got "
                         "{!r}".format(outcome))
    T = perm_to_piecewise(p)
    total = p.total_length
    induced = outcome.next.total_length
    offset = Fraction(0) if outcome.side == RIGHT else total - induced
    returned = first_return(T, Interval(offset, offset + induced),
                            transit_cap).map
    claimed = perm_to_piecewise(outcome.next)
    translated = [branch.domain.shifted(-offset)
                  for branch in returned.branches]
    points = set(_witness_points(claimed))
    for domain in translated:
        points.add(domain.lo)
        points.add(domain.midpoint)
    for x in sorted(points):
        expected = returned(x + offset) - offset
        got = claimed(x)
        if expected != got:
            raise OracleMismatch(x, expected, got)
    return True


class InductionPath:

    def __init__(self, start, steps=(), stop=None, period=None):
        self.start = start
        self.steps = list(steps)
        self.stop = stop
        self.period = period

    @property
    def depth(self):
        """ Steps taken, the one that stopped the induction included. """
        return len(self.steps) + (1 if self.stop is not None else 0)

    @property
    def final(self):
        if self.steps:
            return self.steps[-1].next
        return self.start

    @property
    def outcome(self):
        if self.stop is not None:
            return self.stop.kind
        if self.period is not None:
            return PERIODIC
        return SURVIVOR

    @property
    def states(self):
        return [self.start] + [step.next for step in self.steps]

    def serialize(self):
        lines = [PATH_HEADER, "start {} / {} {}".format(
            " ".join(self.start.w0), " ".join(self.start.w1),
            " ".join("{}={}".format(letter, format_scalar(
                self.start.lengths[letter])) for letter in ALPHABET))]
        for step in self.steps:
            lines.append(step.serialize())
        if self.stop is not None:
            lines.append("stop {}".format(self.stop.kind))
        elif self.period is not None:
            lines.append("periodic from={} period={}".format(*self.period))
        return "\n".join(lines) + "\n"

    def __repr__(self):
        return "InductionPath(depth={}, outcome={})".format(self.depth,
                                                            self.outcome)


def _projective_key(p):
    total = p.total_length
    return p.w0, p.w1, tuple(p.lengths[letter] / total
                             for letter in ALPHABET)


def iterate(p, depth, check=False, transit_cap=DEFAULT_TRANSIT_CAP):
    """ Apply r_step until a stop, a repeated projective state or ``depth``
    steps. With ``check`` every step goes through oracle_check_step.
    """
    if depth < 0:
        raise ValueError("Depth must be non negative.")
    path = InductionPath(p)
    seen = {_projective_key(p): 0}
    current = p
    for index in range(1, depth + 1):
        outcome = r_step(current)
        if not isinstance(outcome, Continue):
            logger.debug("Induction stopped at step %s: %s.", index, outcome)
            path.stop = outcome
            break
        if check:
            oracle_check_step(current, outcome, transit_cap)
        logger.debug("Step %s: %s.", index, outcome)
        path.steps.append(outcome)
        current = outcome.next
        key = _projective_key(current)
        if key in seen:
            path.period = (seen[key], index - seen[key])
            logger.debug("State of step %s repeats projectively at step %s.",
                         seen[key], index)
            break
        seen[key] = index
    return path


def _parse_lengths(tokens):
    lengths = {}
    for token in tokens:
        key, value = token.split("=", 1)
        lengths[key] = parse_scalar(value)
    return lengths


def parse_path_log(data):
    """ Read a path written by InductionPath.serialize, replaying every step
    so a log that does not match the induction is refused.
    """
    try:
        if not isinstance(data, str):
            data = data.decode("utf-8")
        lines = [line.strip() for line in data.splitlines()]
        lines = [line for line in lines if line and not line.startswith("#")]
        if not lines or not lines[0].startswith("start "):
            raise ValueError("Missing the start record.")
        head = lines[0].split()[1:]
        w0, w1 = head[:5], head[6:11]
        if head[5] != "/":
            raise ValueError("Malformed start record.")
        current = ITMPermutation(w0, w1, _parse_lengths(head[11:]))
        path = InductionPath(current)
        for line in lines[1:]:
            fields = line.split()
            record = dict(field.split("=", 1) for field in fields[1:]
                          if "=" in field)
            outcome = r_step(current)
            if fields[0] == "step":
                if not isinstance(outcome, Continue):
                    raise ValueError("Step {} does not continue.".format(
                        path.depth + 1))
                lengths = _parse_lengths(
                    "{}={}".format(letter, record[letter])
                    for letter in ALPHABET)
                if (record['side'] != outcome.side or
                        record['winner'] != outcome.winner or
                        record['loser'] != outcome.loser or
                        lengths != outcome.next.lengths):
                    raise ValueError("Step {} does not replay.".format(
                        path.depth + 1))
                path.steps.append(outcome)
                current = outcome.next
            elif fields[0] == "stop":
                if outcome.kind != fields[1]:
                    raise ValueError("Recorded stop {} but replay gives "
                                     "{}.".format(fields[1], outcome.kind))
                path.stop = outcome
            elif fields[0] == "periodic":
                path.period = (int(record['from']), int(record['period']))
            else:
                raise ValueError("Unknown record '{}'.".format(fields[0]))
        return path
    except (IndexError, KeyError, TypeError, ValueError, ZeroDivisionError,
            ItmkitError) as e:
        raise IOError("Invalid path structure: {}".format(e))


class ZOutcome:
    """ One Z-step: the 3-branch map induced on ``base``, read in the
    flipped frame when the overlap of the input sat on the right.
    """

    def __init__(self, winner, base, induced, flipped):
        self.winner = winner
        self.base = base
        self.induced = induced
        self.flipped = flipped

    def to_itm3(self):
        return ITM3.from_piecewise(rescale(self.induced))

    def __repr__(self):
        return "ZOutcome({} wins, base={}, induced={}{})".format(
            self.winner, self.base, self.induced,
            ", flipped" if self.flipped else "")


def _z_frame(m):
    T = m.to_piecewise()
    if len(T.branches) != 3:
        raise NotThreeBranches(len(T.branches))
    hits = singularities_in_gaps(T)
    if hits:
        raise SingularityInGap(*hits[0])
    side = m.overlap_side()
    if side == "none":
        raise NoOverlap()
    if side == "right":
        return reflect(T), True
    return T, False


def z_step(m, transit_cap=DEFAULT_TRANSIT_CAP, trim_cap=DEFAULT_TRIM_CAP):
    """ Compare the rightmost domain interval (top) with the rightmost image
    interval (bottom) and induce on what is left once the loser is cut off.
    """
    T, flipped = _z_frame(m)
    top = T.branches[-1].domain.length
    rightmost = max((branch.image for branch in T.branches),
                    key=lambda item: (item.hi, item.lo))
    bottom = rightmost.length
    if top == bottom:
        raise TieDegenerate(top)
    hi = T.support.hi
    if top > bottom:
        winner = "top"
        cut = hi - bottom
        for gap in gaps(T):
            if gap.hi == cut:
                cut = gap.lo
    else:
        winner = "bottom"
        cut = hi - top
    base = Interval(T.support.lo, cut)
    induced = trim_extremal_gaps(first_return(T, base, transit_cap).map,
                                 trim_cap)
    logger.debug("Z-step: %s wins, inducing on %s.", winner, base)
    return ZOutcome(winner, base, induced, flipped)


def z_iterate(m, depth, transit_cap=DEFAULT_TRANSIT_CAP):
    """ Repeated Z-steps, renormalizing every output to [0, 1). Returns the
    outcomes and the error that ended the run, if any.
    """
    outcomes = []
    current = m
    for _ in range(depth):
        try:
            outcome = z_step(current, transit_cap)
            current = outcome.to_itm3()
        except (TieDegenerate, SingularityInGap, NoOverlap, InvalidITM,
                NotThreeBranches) as e:
            logger.debug("Z-induction stopped: %s", e)
            return outcomes, e
        outcomes.append(outcome)
    return outcomes, None


class AccelReport:

    def __init__(self, z, steps):
        self.z = z
        self.steps = steps

    @property
    def n(self):
        return len(self.steps)

    @property
    def winner(self):
        return self.z.winner

    def __repr__(self):
        return "AccelReport(n={}, winner={})".format(self.n, self.winner)


def check_acceleration(m, cap=DEFAULT_ACCEL_CAP,
                       transit_cap=DEFAULT_TRANSIT_CAP):
    """ Find the number of right steps after which the R-path of ``m``
    induces the same map as one Z-step.
    """
    z = z_step(m, transit_cap)
    T, _ = _z_frame(m)
    state = split_map(T)
    steps = []
    for n in range(1, cap + 1):
        if state.gap_position < 4:
            raise AccelFailure(cap, "step {} is a left step".format(n))
        outcome = right_rauzy_step(state)
        if not isinstance(outcome, Continue):
            raise AccelFailure(cap, "the R-path stopped at step {}: "
                                    "{!r}".format(n, outcome))
        steps.append(outcome)
        state = outcome.next
        if trim_extremal_gaps(perm_to_piecewise(state)) == z.induced:
            logger.debug("R-path matches the Z-step after %s steps.", n)
            return AccelReport(z, steps)
        if state.total_length < z.base.hi:
            raise AccelFailure(cap, "the R-path went past the Z cut at "
                                    "step {}".format(n))
    raise AccelFailure(cap, "no match")

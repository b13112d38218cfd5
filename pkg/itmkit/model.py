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
Double rotations, 3-ITMs and five symbol ITM permutations.
"""

from . import ALPHABET
from .errors import InvalidITM, InvalidPermutation, OutOfSupport
from .helpers import format_scalar, parse_scalar
from .intervals import (Interval, PiecewiseTranslation, has_extremal_gaps,
                        reflect)

from fractions import Fraction

GAP_MARK = "_"
PERMUTATION_HEADER = "# itmkit permutation v1"
ITM3_ALPHABET = ("A", "B", "C")


def gap_symbol(letter):
    return "{}{}".format(letter, GAP_MARK)


def is_gap(symbol):
    return symbol.endswith(GAP_MARK)


def letter_of(symbol):
    return symbol[:-len(GAP_MARK)] if is_gap(symbol) else symbol


def toggle_gap(symbol):
    return letter_of(symbol) if is_gap(symbol) else gap_symbol(symbol)


def _parse_assignments(text):
    values = {}
    for token in text.split():
        if "=" not in token:
            raise ValueError("Expected key=value, got '{}'.".format(token))
        key, value = token.split("=", 1)
        values[key.strip()] = parse_scalar(value)
    return values


class DoubleRotation:
    """ The circle map y -> y + alpha on [0, c) and y -> y + beta on
    [c, 1), both modulo 1.
    """

    def __init__(self, alpha, beta, c):
        self.alpha = Fraction(alpha)
        self.beta = Fraction(beta)
        self.c = Fraction(c)
        if not (0 <= self.alpha < 1 and 0 <= self.beta < 1):
            raise ValueError("Rotation angles must lie in [0, 1).")
        if not 0 <= self.c <= 1:
            raise ValueError("The cut point must lie in [0, 1].")

    @property
    def is_degenerate(self):
        return self.alpha == self.beta or self.c in (0, 1)

    def serialize(self):
        return "alpha={} beta={} c={}".format(format_scalar(self.alpha),
                                              format_scalar(self.beta),
                                              format_scalar(self.c))

    @staticmethod
    def deserialize(data):
        try:
            if not isinstance(data, str):
                data = data.decode("utf-8")
            values = _parse_assignments(data)
            for key in ("alpha", "beta", "c"):
                if key not in values:
                    raise ValueError("Missing '{}' field.".format(key))
            return DoubleRotation(values['alpha'], values['beta'],
                                  values['c'])
        except (TypeError, ValueError, ZeroDivisionError) as e:
            raise IOError("Invalid double rotation structure: {}".format(e))

    def __eq__(self, other):
        if not isinstance(other, DoubleRotation):
            return NotImplemented
        return ((self.alpha, self.beta, self.c) ==
                (other.alpha, other.beta, other.c))

    def __hash__(self):
        return hash((self.alpha, self.beta, self.c))

    def __repr__(self):
        return "DoubleRotation({})".format(self.serialize())


class ITM3:
    """ A 3-ITM given by its domain order ``pi0``, image order ``pi1``,
    lengths and the translation ``t`` of the interval whose image is second.

    The first image starts at 0 and the third one ends at the total length,
    so the map has no gap on the extremal sides as long as the middle image
    fits, which is what the constructor checks.
    """

    def __init__(self, pi0, pi1, lengths, t):
        self.pi0 = dict(pi0)
        self.pi1 = dict(pi1)
        self.lengths = {letter: Fraction(value)
                        for letter, value in lengths.items()}
        self.t = Fraction(t)
        self._validate()

    def _validate(self):
        letters = set(self.pi0)
        if len(letters) != 3 or set(self.pi1) != letters or \
                set(self.lengths) != letters:
            raise InvalidITM("pi0, pi1 and lengths must share three letters")
        for name, pi in (("pi0", self.pi0), ("pi1", self.pi1)):
            if sorted(pi.values()) != [1, 2, 3]:
                raise InvalidITM("{} is not a bijection onto 1, 2, 3".format(
                    name))
        if any(value <= 0 for value in self.lengths.values()):
            raise InvalidITM("lengths must be positive")
        if not self.is_irreducible:
            raise InvalidITM("the permutation is reducible")
        middle = self.lengths[self.image_order[1]]
        if self.t < 0 or self.t + middle > self.total_length:
            raise InvalidITM("the middle image leaves an extremal gap")

    @property
    def domain_order(self):
        return tuple(sorted(self.pi0, key=self.pi0.get))

    @property
    def image_order(self):
        return tuple(sorted(self.pi1, key=self.pi1.get))

    @property
    def total_length(self):
        return sum(self.lengths.values(), Fraction(0))

    @property
    def combinatorics(self):
        """ pi1 read along the domain order, e.g. (3, 2, 1). """
        return tuple(self.pi1[letter] for letter in self.domain_order)

    @property
    def is_irreducible(self):
        order = self.domain_order
        return ({self.pi1[order[0]]} != {1} and
                {self.pi1[order[0]], self.pi1[order[1]]} != {1, 2})

    def image_start(self, letter):
        if self.pi1[letter] == 2:
            return self.t
        return sum((self.lengths[other] for other in self.pi1
                    if self.pi1[other] < self.pi1[letter]), Fraction(0))

    def to_piecewise(self):
        branches = []
        cursor = Fraction(0)
        for letter in self.domain_order:
            domain = Interval(cursor, cursor + self.lengths[letter])
            branches.append((domain, self.image_start(letter) - cursor))
            cursor = domain.hi
        return PiecewiseTranslation(Interval(0, cursor), branches)

    def overlap_side(self):
        first = self.image_order[0]
        if self.t < self.lengths[first]:
            return "left"
        if self.t > self.lengths[first]:
            return "right"
        return "none"

    def flip(self):
        return ITM3.from_piecewise(reflect(self.to_piecewise()))

    @staticmethod
    def from_piecewise(T, letters=ITM3_ALPHABET):
        """ Read a gap free 3-branch map as a 3-ITM, naming the branches
        in domain order. A support not starting at 0 is translated there.
        """
        if len(T.branches) != 3:
            raise InvalidITM("expected 3 branches, got {}".format(
                len(T.branches)))
        if has_extremal_gaps(T):
            raise InvalidITM("the map has an extremal gap")
        lo, hi = T.support.lo, T.support.hi
        images = [(index, branch.image)
                  for index, branch in enumerate(T.branches)]
        first = max((item for item in images if item[1].lo == lo),
                    key=lambda item: item[1].length)
        rest = [item for item in images if item is not first]
        third = max((item for item in rest if item[1].hi == hi),
                    key=lambda item: item[1].length)
        middle = [item for item in rest if item is not third][0]
        pi1 = {letters[first[0]]: 1, letters[middle[0]]: 2,
               letters[third[0]]: 3}
        pi0 = {letter: index + 1 for index, letter in enumerate(letters)}
        lengths = {letters[index]: branch.domain.length
                   for index, branch in enumerate(T.branches)}
        return ITM3(pi0, pi1, lengths, middle[1].lo - lo)

    def __eq__(self, other):
        if not isinstance(other, ITM3):
            return NotImplemented
        return (self.pi0 == other.pi0 and self.pi1 == other.pi1 and
                self.lengths == other.lengths and self.t == other.t)

    def __hash__(self):
        return hash((tuple(sorted(self.pi0.items())),
                     tuple(sorted(self.pi1.items())),
                     tuple(sorted(self.lengths.items())), self.t))

    def __repr__(self):
        return "ITM3(pi1={}, lengths={}, t={})".format(
            self.combinatorics,
            " ".join("{}={}".format(letter, format_scalar(
                self.lengths[letter])) for letter in self.domain_order),
            format_scalar(self.t))


def validate_words(w0, w1):
    """ Check the word invariants shared by permutations and graph
    vertices; returns the repeated letter.
    """
    if len(w0) != 5 or len(w1) != 5:
        raise InvalidPermutation("both words need five symbols")
    if any(letter not in ALPHABET for letter in w0):
        raise InvalidPermutation("top word uses letters outside {}".format(
            " ".join(ALPHABET)))
    repeated = [letter for letter in ALPHABET if w0.count(letter) == 2]
    if len(repeated) != 1 or any(w0.count(letter) != 1
                                 for letter in ALPHABET
                                 if letter != repeated[0]):
        raise InvalidPermutation("top word must repeat exactly one letter")
    gap_symbols = [symbol for symbol in w1 if is_gap(symbol)]
    if len(gap_symbols) != 1:
        raise InvalidPermutation("bottom word needs exactly one gap")
    plain = sorted(symbol for symbol in w1 if not is_gap(symbol))
    if tuple(plain) != ALPHABET:
        raise InvalidPermutation("bottom word must hold every letter once")
    if letter_of(gap_symbols[0]) != repeated[0]:
        raise InvalidPermutation("gap letter must be the repeated letter")
    return repeated[0]


class ITMPermutation:

    def __init__(self, w0, w1, lengths):
        self.w0 = tuple(w0)
        self.w1 = tuple(w1)
        self.repeated = validate_words(self.w0, self.w1)
        self.lengths = {letter: Fraction(lengths[letter])
                        for letter in ALPHABET if letter in lengths}
        if len(self.lengths) != len(ALPHABET):
            raise InvalidPermutation("every letter needs a length")
        if any(value <= 0 for value in self.lengths.values()):
            raise InvalidPermutation("lengths must be positive")

    @property
    def gap_position(self):
        return [is_gap(symbol) for symbol in self.w1].index(True) + 1

    @property
    def total_length(self):
        return sum((self.length(symbol) for symbol in self.w0), Fraction(0))

    @property
    def words(self):
        return self.w0, self.w1

    def length(self, symbol):
        return self.lengths[letter_of(symbol)]

    def prefix_length(self, word, position):
        """ Length of the first ``position - 1`` symbols of ``word``. """
        return sum((self.length(symbol) for symbol in word[:position - 1]),
                   Fraction(0))

    def cells(self):
        """ Domain cells as (symbol, Interval) in the top word order. """
        found = []
        cursor = Fraction(0)
        for symbol in self.w0:
            found.append((symbol, Interval(cursor,
                                           cursor + self.length(symbol))))
            cursor += self.length(symbol)
        return found

    def gap_interval(self):
        start = self.prefix_length(self.w1, self.gap_position)
        return Interval(start, start + self.lengths[self.repeated])

    def serialize(self):
        lines = [PERMUTATION_HEADER, " ".join(self.w0), " ".join(self.w1)]
        for letter in ALPHABET:
            lines.append("{}={}".format(letter,
                                        format_scalar(self.lengths[letter])))
        return "\n".join(lines) + "\n"

    @staticmethod
    def deserialize(data):
        try:
            if not isinstance(data, str):
                data = data.decode("utf-8")
            lines = [line.strip() for line in data.splitlines()]
            lines = [line for line in lines
                     if line and not line.startswith("#")]
            if len(lines) < 2:
                raise ValueError("Missing the two words.")
            lengths = _parse_assignments(" ".join(lines[2:]))
            return ITMPermutation(lines[0].split(), lines[1].split(),
                                  lengths)
        except (TypeError, ValueError, ZeroDivisionError,
                InvalidPermutation) as e:
            raise IOError("Invalid permutation structure: {}".format(e))

    def __eq__(self, other):
        if not isinstance(other, ITMPermutation):
            return NotImplemented
        return (self.w0 == other.w0 and self.w1 == other.w1 and
                self.lengths == other.lengths)

    def __hash__(self):
        return hash((self.w0, self.w1, tuple(sorted(self.lengths.items()))))

    def __repr__(self):
        return "{} / {} ({})".format(
            " ".join(self.w0), " ".join(self.w1),
            " ".join("{}={}".format(letter, format_scalar(value))
                     for letter, value in sorted(self.lengths.items())))


def check_in_support(p, x):
    if not 0 <= x < p.total_length:
        raise OutOfSupport(x, Interval(0, p.total_length))

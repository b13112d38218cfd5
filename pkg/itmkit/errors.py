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

class ItmkitError(Exception):
    pass


class UsageError(ItmkitError):
    """ Command line arguments a command can not work with. """


class OutOfSupport(ItmkitError):

    def __init__(self, x, support):
        super().__init__("Point {} is outside the support {}.".format(
            x, support))
        self.x = x
        self.support = support


class NonReturning(ItmkitError):

    def __init__(self, piece, cap):
        super().__init__("Piece {} did not return to the base within {} "
                         "steps.".format(piece, cap))
        self.piece = piece
        self.cap = cap


class NotThreeBranches(ItmkitError):

    def __init__(self, count):
        super().__init__("Expected a map with 3 branches, got {}.".format(
            count))
        self.count = count


class BudgetExceeded(ItmkitError):

    def __init__(self, what, cap):
        super().__init__("{} did not settle within {} rounds.".format(
            what, cap))
        self.what = what
        self.cap = cap


class NotReducibleTo3ITM(ItmkitError):

    def __init__(self, detail):
        super().__init__("Could not reduce to a 3-ITM: {}.".format(detail))
        self.detail = detail


class DegenerateRotation(ItmkitError):

    def __init__(self, detail="the map is a rotation"):
        super().__init__("Degenerate double rotation: {}.".format(detail))
        self.detail = detail


class SingularityInGap(ItmkitError):

    def __init__(self, singularity, gap):
        super().__init__("Singularity {} lies inside the gap {}.".format(
            singularity, gap))
        self.singularity = singularity
        self.gap = gap


class NoOverlap(ItmkitError):

    def __init__(self):
        super().__init__("The map is injective, there is no overlap to "
                         "split.")


class InvalidITM(ItmkitError):

    def __init__(self, detail):
        super().__init__("Invalid 3-ITM: {}.".format(detail))
        self.detail = detail


class CoincidentImages(ItmkitError):

    def __init__(self, point):
        super().__init__("Two image intervals share the endpoint {}.".format(
            point))
        self.point = point


class InvalidPermutation(ItmkitError):

    def __init__(self, detail):
        super().__init__("Invalid ITM permutation: {}.".format(detail))
        self.detail = detail


class GapPositionUnsupported(ItmkitError):

    def __init__(self, position):
        super().__init__("Gap at position {} of the bottom word is not "
                         "supported by the induction.".format(position))
        self.position = position


class UnsupportedStep(ItmkitError):

    def __init__(self, detail):
        super().__init__("Unsupported induction step: {}.".format(detail))
        self.detail = detail


class OracleMismatch(ItmkitError):

    def __init__(self, witness, expected, got):
        super().__init__("Induced map disagrees at x={}: first return gives "
                         "{}, next state gives {}.".format(witness, expected,
                                                           got))
        self.witness = witness
        self.expected = expected
        self.got = got


class TieDegenerate(ItmkitError):

    def __init__(self, length):
        super().__init__("Compared intervals have the same length {}."
                         .format(length))
        self.length = length


class AccelFailure(ItmkitError):

    def __init__(self, cap, detail):
        super().__init__("No prefix of the R-path matched the Z-step within "
                         "{} steps: {}.".format(cap, detail))
        self.cap = cap
        self.detail = detail


class CapExceeded(ItmkitError):

    def __init__(self, cap):
        super().__init__("The graph grew past {} vertices.".format(cap))
        self.cap = cap


class TieOnCellBoundary(ItmkitError):

    def __init__(self, vertex, letters):
        super().__init__("Length vector lies on a cell boundary at {}: "
                         "{} and {} are equal.".format(vertex, *letters))
        self.vertex = vertex
        self.letters = letters


class NegativeCoordinate(ItmkitError):

    def __init__(self, letter):
        super().__init__("Win-lose update produced a non positive "
                         "coordinate for {}.".format(letter))
        self.letter = letter


class NonComposable(ItmkitError):

    def __init__(self, index):
        super().__init__("Edge {} does not start where the previous one "
                         "ends.".format(index))
        self.index = index


class ClassifierContradiction(ItmkitError):

    def __init__(self, parameters, induction, attractor):
        super().__init__("Classifiers disagree on {}: induction says {}, "
                         "attractor says {}.".format(parameters, induction,
                                                     attractor))
        self.parameters = parameters
        self.induction = induction
        self.attractor = attractor

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

from fractions import Fraction


def parse_scalar(value):
    """ Parse an exact rational from p/q, an integer or a finite decimal.
    Floats are refused so no binary rounding sneaks in.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise ValueError("Expected a rational, got {!r}".format(value))
    text = value.strip()
    if not text:
        raise ValueError("Empty rational")
    return Fraction(text)


def format_scalar(value):
    value = Fraction(value)
    if value.denominator == 1:
        return "{}".format(value.numerator)
    return "{}/{}".format(value.numerator, value.denominator)


def format_interval(lo, hi):
    return "[{}, {})".format(format_scalar(lo), format_scalar(hi))

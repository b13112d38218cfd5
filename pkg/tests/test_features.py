"""Collect the behave feature suite under pytest."""

import os

from behave.__main__ import main as behave_main

FEATURES = os.path.join(os.path.dirname(os.path.abspath(__file__)),
                        "features")


def test_features():
    assert behave_main([FEATURES, "--format", "progress"]) == 0

import os
from fractions import Fraction

import hypothesis
import numpy as np
import pytest

from pcover.family import WeightedFamily
from pcover.multiset import Multiset

np.seterr(all="warn")

hypothesis.settings.register_profile("default", max_examples=50, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.load_profile(os.getenv("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture
def singletons():
    """{{0}, {1}, {2}, {3}} with unit weights at p = 1/8."""
    return WeightedFamily.from_sets(4, [[0], [1], [2], [3]], Fraction(1, 8))


@pytest.fixture
def single_singleton():
    return WeightedFamily.from_sets(4, [[0]], Fraction(1, 4))


@pytest.fixture
def two_point_law():
    """mu = (1/2, 1/2) over {a, b} with N = 2."""
    return (Fraction(1, 2), Fraction(1, 2)), 2


@pytest.fixture
def double_a():
    return Multiset.of({0: 2})

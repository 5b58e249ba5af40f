from __future__ import annotations

from fractions import Fraction

import pytest

from kaplansky import QQ, GroupContext, HahnRing, Weight
from kaplansky.examples import pi_context


@pytest.fixture
def Z():
    return GroupContext.rational(1)


@pytest.fixture
def Zpi():
    return pi_context()


@pytest.fixture
def ring_pi(Zpi):
    return HahnRing(Zpi, QQ)


@pytest.fixture
def ring_z(Z):
    return HahnRing(Z, QQ)


def half_ints():
    return GroupContext((Weight(Fraction(1, 2)),))

import dataclasses
import math

import pytest

from pilotwave.constants import DEFAULT_CONSTANTS, PhysicalConstants


def test_default_values():
    c = DEFAULT_CONSTANTS
    assert c.hbar == 1.054571817e-34
    assert c.electron_mass == 9.1093837015e-31
    assert c.silver_mass == 1.8e-25
    assert c.bohr_magneton == 9.2740100783e-24


def test_h_is_derived_exactly():
    c = PhysicalConstants()
    assert c.h == 2.0 * math.pi * c.hbar


def test_frozen():
    with pytest.raises(dataclasses.FrozenInstanceError):
        DEFAULT_CONSTANTS.hbar = 1.0


def test_positivity_enforced():
    with pytest.raises(ValueError):
        PhysicalConstants(hbar=0.0)
    with pytest.raises(ValueError):
        PhysicalConstants(electron_mass=-1.0)


def test_with_hbar_divisor():
    c = DEFAULT_CONSTANTS.with_hbar_divisor(10.0)
    assert c.hbar == DEFAULT_CONSTANTS.hbar / 10.0
    assert c.h == 2.0 * math.pi * c.hbar
    assert c.electron_mass == DEFAULT_CONSTANTS.electron_mass
    with pytest.raises(ValueError):
        DEFAULT_CONSTANTS.with_hbar_divisor(0.0)

from __future__ import annotations

import math
import os

import pytest
from hypothesis import settings

from qreg.model import PhysicalParams, QuantumNumbers, SystemSpec

settings.register_profile("default", max_examples=40, deadline=None)
settings.register_profile("stress", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

SQRT2 = math.sqrt(2.0)


@pytest.fixture
def unit():
    return PhysicalParams(1.0, 1.0)


def ground(system: SystemSpec) -> QuantumNumbers:
    return QuantumNumbers(0, 0) if system.polar else QuantumNumbers(0)


ALL_SYSTEMS = [
    SystemSpec.free1d(),
    SystemSpec.harmonic1d(1.0),
    SystemSpec.coulomb1d(1.0),
    SystemSpec.const2d(0.0),
    SystemSpec.harmonic2d(1.0),
    SystemSpec.coulomb2d(1.0),
]

"""Shared fixtures: the expensive tables are built once per session."""

from __future__ import annotations

from fractions import Fraction

import pytest

from blochlab.harness import branch_codes
from blochlab.tables import ConstantProfile, build_block_table, build_exponent_table

#: ĉ used wherever a fixed tail constant is needed; criterion tests that
#: estimate their own constant do so independently.
C_HAT = 2.31

#: The standard branch family: all eighths, explored to depth 64.
EIGHTHS = tuple(Fraction(i, 8) for i in range(8))
BRANCH_DEPTH = 64


@pytest.fixture(scope="session")
def triangle12():
    return build_exponent_table(12)


@pytest.fixture(scope="session")
def triangle24():
    return build_exponent_table(24)


@pytest.fixture(scope="session")
def column_table():
    """Single-column table deep enough for the union of all eighth codes."""
    union = set()
    for alpha in EIGHTHS:
        union |= set(branch_codes(alpha, BRANCH_DEPTH))
    return build_exponent_table(len(union), max_columns=1)


@pytest.fixture(scope="session")
def relaxed_block():
    return build_block_table(4, ConstantProfile.relaxed(), C_HAT)

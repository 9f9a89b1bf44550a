import pathlib

import pytest

from nutriquest.anthro import CutoffTable, GrowthReference, bundled_reference

HERE = pathlib.Path(__file__).parent


@pytest.fixture(scope="session")
def reference() -> GrowthReference:
    return bundled_reference()


@pytest.fixture(scope="session")
def cutoffs() -> CutoffTable:
    return CutoffTable.default()

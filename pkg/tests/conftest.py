import pytest
from hypothesis import settings

from covermonoid.abelian_group import FiniteAbelianGroup
from covermonoid.graded_algebra import ScalarField

settings.register_profile("covermonoid", max_examples=40, deadline=None)
settings.load_profile("covermonoid")


@pytest.fixture
def group():
    return FiniteAbelianGroup.parse


@pytest.fixture
def gf7():
    return ScalarField(7)


@pytest.fixture
def gf101():
    return ScalarField(101)

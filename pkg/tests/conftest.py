import pytest

from tangent_bigness.corpus import load_surface


@pytest.fixture
def surface():
    return load_surface

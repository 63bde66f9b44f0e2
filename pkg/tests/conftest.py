import pytest

from support import make_landmarks


@pytest.fixture
def frontal_landmarks():
    return make_landmarks()

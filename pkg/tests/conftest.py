import pytest

from fridgeqa.lexicon import default_lexicon
from fridgeqa.templates import default_templates

from helpers import fig_5b_scene


@pytest.fixture(scope="session")
def templates():
    return default_templates()


@pytest.fixture(scope="session")
def lexicon():
    return default_lexicon()


@pytest.fixture()
def fig5b():
    return fig_5b_scene()

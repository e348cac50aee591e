import pytest

from fpn import F2, F3, example_12_pattern, example_13_pattern


@pytest.fixture
def p12():
    return example_12_pattern(F2)


@pytest.fixture
def p13():
    return example_13_pattern(F2)


@pytest.fixture
def p13_f3():
    return example_13_pattern(F3)

import pytest

from vcind.trace import Row


@pytest.fixture
def row():
    return Row.from_str

import pytest

from quadorders import new_field

TEST_FIELD_DS = (-1, -3, -5, 2, 5)


@pytest.fixture(scope="session")
def fields():
    return [new_field(d) for d in TEST_FIELD_DS]


@pytest.fixture(scope="session")
def real_fields():
    return [new_field(d) for d in TEST_FIELD_DS if d > 0]


@pytest.fixture(scope="session")
def imaginary_fields():
    return [new_field(d) for d in TEST_FIELD_DS if d < 0]

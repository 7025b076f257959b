import pytest

from spinelab.spine import match_names, quotient_complex, singular_graphs


@pytest.fixture(scope="session")
def rank4_classes():
    return match_names(singular_graphs(3, 4))


@pytest.fixture(scope="session")
def rank4_complex(rank4_classes):
    return quotient_complex(3, 4, rank4_classes)

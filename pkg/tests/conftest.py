import numpy as np
import pytest

import instances


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def tree7():
    return instances.tree7_system()


@pytest.fixture
def tree7_graph(tree7):
    from odg import detect_pairwise

    return detect_pairwise(tree7)


@pytest.fixture
def paw():
    return instances.paw_graph()


@pytest.fixture
def paw_system(paw):
    from odg import graph_system

    return graph_system(paw)

import sys
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import strategies as st

from costshare import Instance, fixtures

sys.path.insert(0, str(Path(__file__).parent))

DATA = Path(__file__).resolve().parent.parent / "data"


@pytest.fixture
def fig1():
    return fixtures.figure1()


@pytest.fixture
def fig2():
    return fixtures.figure2()


@pytest.fixture
def fig3():
    return fixtures.figure3()


@pytest.fixture
def fig4():
    return fixtures.figure4()


@pytest.fixture
def data_dir():
    return DATA


def make_instance(edges, budgets=None, extra_nodes=()):
    nodes = {"s", *extra_nodes}
    for u, v, _ in edges:
        nodes.update((u, v))
    return Instance(
        tuple(sorted(nodes)),
        "s",
        tuple((u, v, Fraction(c)) for u, v, c in edges),
        {k: Fraction(b) for k, b in (budgets or {}).items()},
    )


@st.composite
def small_instances(draw, max_nodes=5, min_nodes=1, budgets=False, costs=st.integers(0, 12)):
    """Arbitrary (possibly disconnected) small graphs, optionally with budgets."""
    n = draw(st.integers(min_nodes, max_nodes))
    names = [chr(ord("A") + k) for k in range(n)]
    everyone = ["s", *names]
    edges = []
    for i, u in enumerate(everyone):
        for v in everyone[i + 1:]:
            if draw(st.booleans()):
                edges.append((u, v, draw(costs)))
    bud = {}
    if budgets:
        for name in names:
            bud[name] = draw(st.integers(1, 20))
    return make_instance(edges, bud, extra_nodes=names)

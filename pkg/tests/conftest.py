import pytest
from hypothesis import settings, strategies as st

from matroid_modulus import Graphic, Linear
from matroid_modulus.formats import k4, path3, triangle_pendant, u12

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


@pytest.fixture
def tp():
    return triangle_pendant()


@pytest.fixture
def U12():
    return u12()


@pytest.fixture
def K4():
    return k4()


@pytest.fixture
def P3():
    return path3()


@st.composite
def graphic_matroids(draw, max_vertices=5, max_edges=7):
    """Small loopless graphic matroids (parallel edges allowed)."""
    nv = draw(st.integers(2, max_vertices))
    pair = st.tuples(st.integers(0, nv - 1), st.integers(0, nv - 1)).filter(lambda p: p[0] != p[1])
    pairs = draw(st.lists(pair, min_size=1, max_size=max_edges))
    return Graphic([(u, v, f"e{i}") for i, (u, v) in enumerate(pairs, start=1)])


@st.composite
def linear_matroids(draw, max_rows=3, max_cols=6):
    rows = draw(st.integers(1, max_rows))
    cols = draw(st.integers(1, max_cols))
    col = st.lists(st.integers(-2, 2), min_size=rows, max_size=rows).filter(any)
    columns = draw(st.lists(col, min_size=cols, max_size=cols))
    return Linear([[c[i] for c in columns] for i in range(rows)])


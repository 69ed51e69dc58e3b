"""Hypothesis strategies for small complex matrices."""

import numpy as np
from hypothesis import strategies as st

# rounded entries keep hypothesis away from subnormal/underflow corners
_entry = st.floats(-3, 3, allow_nan=False).map(lambda x: round(x, 3))


@st.composite
def complex_matrices(draw, min_dim=1, max_dim=5, dim=None):
    n = dim if dim is not None else draw(st.integers(min_dim, max_dim))
    re = draw(st.lists(_entry, min_size=n * n, max_size=n * n))
    im = draw(st.lists(_entry, min_size=n * n, max_size=n * n))
    return (np.array(re) + 1j * np.array(im)).reshape(n, n)


@st.composite
def matrix_tuples(draw, count, min_dim=1, max_dim=4):
    n = draw(st.integers(min_dim, max_dim))
    return [draw(complex_matrices(dim=n)) for _ in range(count)]


@st.composite
def vectors(draw, dim):
    re = draw(st.lists(_entry, min_size=dim, max_size=dim))
    im = draw(st.lists(_entry, min_size=dim, max_size=dim))
    return np.array(re) + 1j * np.array(im)

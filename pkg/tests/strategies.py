"""Hypothesis strategies for small random networks."""

from hypothesis import strategies as st

from trapcegar.generate import random_marker, random_network


@st.composite
def networks(draw, min_n=1, max_n=6):
    n = draw(st.integers(min_n, max_n))
    seed = draw(st.integers(0, 2**32 - 1))
    rate = draw(st.sampled_from([0.0, 0.0, 0.2]))
    return random_network(n, 3, seed, constant_rate=rate)


@st.composite
def instances(draw, min_n=2, max_n=5):
    f = draw(networks(min_n, max_n))
    size = draw(st.integers(1, min(3, f.n)))
    marker = random_marker(f, size, draw(st.integers(0, 2**32 - 1)))
    return f, marker

from functools import lru_cache
from pathlib import Path

import numpy as np
import pytest

from trapcegar import parse_bnet, parse_influence_graph
from trapcegar.generate import random_marker, random_network

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


def load(name):
    return parse_bnet((DATA / name).read_text())


@pytest.fixture
def ex1():
    return load("ex1.bnet")


@pytest.fixture
def ex2():
    return load("ex2.bnet")


@pytest.fixture
def sat_net():
    return load("saturation.bnet")


@pytest.fixture
def complete3():
    return parse_influence_graph((DATA / "complete3.graph").read_text())


def key(perturbations):
    """Order-free form of a list of perturbations."""
    return sorted(sorted(p.items()) for p in perturbations)


@lru_cache(maxsize=None)
def small_suite(count=200, seed=2024):
    """Deterministic random instances: n in [3, 8], in-degree <= 3, marker of 1-3 nodes, k <= 2."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(3, 9))
        f = random_network(n, 3, rng)
        marker = random_marker(f, int(rng.integers(1, 4)), rng, outputs_first=bool(rng.integers(2)))
        k = int(rng.integers(0, 3))
        forbid = bool(rng.integers(2))
        out.append((f, marker, k, forbid))
    return tuple(out)


from hypothesis import settings  # noqa: E402

settings.register_profile("repo", deadline=None, max_examples=60)
settings.load_profile("repo")

import itertools

import numpy as np
import pytest

from psentropy.graph import Graph, metric_from_edges

CATALOG = ["theta", "dumbbell", "K4", "rose(2)"]
DATA = __import__("pathlib").Path(__file__).parent / "data"


def random_metric(g: Graph, rng: np.random.Generator, low: float = 0.05, volume_one: bool = True):
    x = rng.uniform(low, 1.0, g.num_edges)
    if volume_one:
        x /= x.sum()
    return metric_from_edges(g, x)


def brute_force_paths(g: Graph, t: int, origin: str | None = None):
    """All reduced paths with exactly ``t`` edges, by filtering every edge sequence."""
    out = []
    for seq in itertools.product(g.edges, repeat=t):
        if origin is not None and g.origin(seq[0]) != origin:
            continue
        ok = all(g.terminus(e) == g.origin(f) and f != g.inverse(e) for e, f in zip(seq, seq[1:]))
        if ok:
            out.append(seq)
    return out


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)

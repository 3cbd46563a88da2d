import numpy as np

from privquant import Pmf, QuantizerSpec
from oracles import random_simplex


def pmf_pair(py, pz, first_level=0.0, step=1.0):
    spec = QuantizerSpec(first_level, step, len(py))
    return Pmf(spec.levels, py), Pmf(spec.levels, pz), spec


def random_instance(rng, n, interior=False):
    """Random levels plus random measurement and noise PMFs on them."""
    first_level = rng.uniform(-3, 3)
    step = rng.uniform(0.2, 2.0)
    floor = 1e-3 if interior else 0.0
    py = random_simplex(rng, n, alpha=rng.choice([0.3, 1.0, 3.0]), floor=floor)
    pz = random_simplex(rng, n, alpha=rng.choice([0.3, 1.0, 3.0]), floor=floor)
    return pmf_pair(py, pz, first_level, step)

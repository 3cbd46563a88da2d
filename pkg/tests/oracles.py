"""Reference computations that share no code with the package.

Everything here is plain Python over dictionaries, so a bug in the library's
vectorised paths cannot cancel out in a comparison.
"""

import itertools
import math

import numpy as np


def entropy_bits(probs):
    return -sum(p * math.log2(p) for p in probs if p > 0)


def mi_from_joint(joint):
    """Mutual information of a dict ``{(a, b): p}`` in bits."""
    pa, pb = {}, {}
    for (a, b), p in joint.items():
        pa[a] = pa.get(a, 0.0) + p
        pb[b] = pb.get(b, 0.0) + p
    return sum(
        p * (math.log2(p) - math.log2(pa[a]) - math.log2(pb[b]))
        for (a, b), p in joint.items()
        if p > 0
    )


def sum_probs_two_branch(py, pz):
    """Convolution written out with the two index ranges of the V table (1-based)."""
    n = len(py)
    out = []
    for j in range(1, 2 * n):
        if j <= n:
            ks = range(1, j + 1)
        else:
            ks = range(j + 1 - n, n + 1)
        out.append(sum(py[j + 1 - k - 1] * pz[k - 1] for k in ks))
    return out


def sensor_joint_mi(components):
    """``I[(V_1..V_m); (Y_1..Y_m)]`` by enumerating every (y, z) combination.

    ``components`` is a list of ``(levels, py, pz)`` triples; all variables
    are mutually independent.
    """
    joint = {}
    ranges = [range(len(c[0])) for c in components]
    for ys in itertools.product(*ranges):
        for zs in itertools.product(*ranges):
            p = 1.0
            for (lv, py, pz), i, k in zip(components, ys, zs):
                p *= py[i] * pz[k]
            if p == 0:
                continue
            v = tuple(round(lv[i] + lv[k], 9) for (lv, _, _), i, k in zip(components, ys, zs))
            y = tuple(round(lv[i], 9) for (lv, _, _), i in zip(components, ys))
            joint[(v, y)] = joint.get((v, y), 0.0) + p
    return mi_from_joint(joint)


def unnormalized_objective(py, pz):
    """``H[V] - H[Z]`` extended to positive, not necessarily normalised ``pz``."""
    n = len(py)
    pv = [0.0] * (2 * n - 1)
    for i in range(n):
        for k in range(n):
            pv[i + k] += py[i] * pz[k]
    return entropy_bits(pv) - entropy_bits(pz)


def central_difference_gradient(py, pz, h=1e-6):
    g = np.zeros(len(pz))
    for k in range(len(pz)):
        up = np.array(pz, dtype=float)
        dn = np.array(pz, dtype=float)
        up[k] += h
        dn[k] -= h
        g[k] = (unnormalized_objective(py, up) - unnormalized_objective(py, dn)) / (2 * h)
    return g


def random_simplex(rng, n, alpha=1.0, floor=0.0):
    p = rng.dirichlet(np.full(n, alpha))
    if floor:
        p = (1 - n * floor) * p + floor
    return p / p.sum()

"""Gauss-Hermite rules for expectations over Gaussian noise."""
from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def hermite_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights for E[h(Z)], Z ~ N(0, 1): sum(w * h(z))."""
    t, w = np.polynomial.hermite.hermgauss(order)
    z = np.sqrt(2.0) * t
    w = w / np.sqrt(np.pi)
    z.setflags(write=False)
    w.setflags(write=False)
    return z, w

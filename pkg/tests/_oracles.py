"""Independent reference computations shared by several test modules."""
import math

import numpy as np

from steklov.numerics import bracketed_root


def bc_determinant(eps, n, s):
    """Determinant of the boundary conditions in the raw (a, b) unknowns."""
    if n == 0:
        # u = a + b log r
        top = [-s, 1.0]
        bottom = [-s, -1 / eps - s * math.log(eps)]
    else:
        # u = a r^n + b r^-n
        top = [n - s, -n - s]
        bottom = [-n * eps ** (n - 1) - s * eps ** n, n * eps ** (-n - 1) - s * eps ** (-n)]
    return top[0] * bottom[1] - top[1] * bottom[0]


def oracle_roots(eps, n):
    """Nonzero roots of the determinant by scanning for sign changes and bracketing."""
    f = (lambda s: bc_determinant(eps, n, s) / s) if n == 0 else (lambda s: bc_determinant(eps, n, s))
    grid = np.linspace(1e-6, 10 * (n + 1) / eps, 40001)
    vals = np.array([f(s) for s in grid])
    idx = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    return [bracketed_root(f, grid[i], grid[i + 1], 1e-15) for i in idx]

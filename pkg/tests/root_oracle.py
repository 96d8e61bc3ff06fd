"""Independent dense-scan plus bisection root finder for the critical equation.

Works directly in F2 with plain numpy; shares no code with the package solver.
"""

import numpy as np

LO, HI = 3.0 / 7.0, 1.0


def lhs(f2):
    f2 = np.asarray(f2, dtype=float)
    return f2**-0.5 * (1.0 - f2) ** (-1.0 / 3.0) * (7.0 * f2 - 3.0)


def scan_bisect(rhs: float, step: float = 1e-6, tol: float = 1e-15) -> float:
    grid = np.arange(LO + step, HI, step)
    vals = lhs(grid) - rhs
    above = np.nonzero(vals > 0)[0]
    if above.size == 0:
        a, b = grid[-1], HI - 1e-16
    elif above[0] == 0:
        a, b = LO, grid[0]
    else:
        a, b = grid[above[0] - 1], grid[above[0]]
    fa = (lhs(a) - rhs) if a > LO else -rhs
    while b - a > tol:
        mid = 0.5 * (a + b)
        fm = lhs(mid) - rhs
        if (fm > 0) == (fa > 0):
            a, fa = mid, fm
        else:
            b = mid
    return 0.5 * (a + b)

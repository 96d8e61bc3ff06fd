"""Selection of the reference weights by extremizing the Cramer-Rao product.

For the quartic case (orders 2 and 4) the Cramer-Rao product and the
normalization constraint on the weights reduce to

    f(F2, F4)   = F2 + 2 sqrt(F2) F4^(1/3) |lambda2|^(-1/2) |lambda4|^(1/3)
    phi(F2, F4) = F2 + sqrt(F4) = 1

and the Lagrange system ``grad f = mu grad phi`` collapses to one scalar equation

    F2^(-1/2) (1 - F2)^(-1/3) (7 F2 - 3) = 3 |lambda2|^(1/2) |lambda4|^(-1/3)

with ``F4 = (1 - F2)^2``. The left side increases strictly from 0 to infinity
on ``(3/7, 1)`` so the root is unique. The mean ``<x>`` is taken to be zero
(even potential), so the variance in the product is ``<x^2>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import DomainError, FisherQuarticError
from .fisher_core import MultiplierVector, ReferenceWeights

__all__ = [
    "CrProblem",
    "CrSolution",
    "cr_objective",
    "cr_constraint",
    "critical_equation_lhs",
    "critical_equation_rhs",
    "solve_critical_point",
    "lagrange_multiplier",
    "stationarity_residual",
    "PURE_QUARTIC_F2",
]

PURE_QUARTIC_F2 = 3.0 / 7.0
_EPS = np.finfo(float).eps


@dataclass(frozen=True)
class CrProblem:
    """Multipliers of a quartic problem, ``lambda2 <= 0`` and ``lambda4 <= 0``, not both zero."""

    lambda2: float
    lambda4: float

    def __post_init__(self):
        if not (math.isfinite(self.lambda2) and math.isfinite(self.lambda4)):
            raise DomainError("multipliers must be finite")
        if self.lambda2 > 0 or self.lambda4 > 0:
            raise DomainError(
                f"multipliers must be non-positive, got ({self.lambda2!r}, {self.lambda4!r})"
            )
        if self.lambda2 == 0 and self.lambda4 == 0:
            raise DomainError("at least one multiplier must be strictly negative")

    @classmethod
    def from_multipliers(cls, multipliers: MultiplierVector) -> "CrProblem":
        if set(multipliers.orders) - {2, 4}:
            raise DomainError(f"quartic problem needs orders {{2, 4}}, got {multipliers.orders}")
        return cls(multipliers.values.get(2, 0.0), multipliers.values.get(4, 0.0))

    def multipliers(self) -> MultiplierVector:
        return MultiplierVector({2: self.lambda2, 4: self.lambda4})


@dataclass(frozen=True)
class CrSolution:
    """Critical weights of the constrained Cramer-Rao product.

    Attributes:
        f2: Weight of the second moment, in ``(0, 1]``.
        f4: Weight of the fourth moment, ``(1 - f2)**2``.
        multiplier_mu: Lagrange multiplier of the normalization constraint
            (``nan`` when the solution sits on the boundary of the weight domain).
        f_value: Cramer-Rao product at the critical weights.
    """

    f2: float
    f4: float
    multiplier_mu: float
    f_value: float

    def weights(self) -> ReferenceWeights:
        """Weights for use with the closed forms; requires ``f4 > 0``."""
        return ReferenceWeights({2: self.f2, 4: self.f4})


def cr_objective(weights: ReferenceWeights, multipliers: MultiplierVector) -> float:
    """Cramer-Rao product ``I * <x^2>`` as a function of the quartic weights.

    A missing or zero ``lambda4`` gives the harmonic value ``F2``.
    """
    f2 = weights.values.get(2)
    f4 = weights.values.get(4, 0.0)
    lam2 = multipliers.values.get(2, 0.0)
    lam4 = multipliers.values.get(4, 0.0)
    if f2 is None or lam2 >= 0:
        raise DomainError("objective needs F2 > 0 and lambda2 < 0")
    if f4 < 0:
        raise DomainError(f"F4 must be non-negative, got {f4!r}")
    return f2 + 2.0 * math.sqrt(f2) * f4 ** (1 / 3) * abs(lam2) ** -0.5 * abs(lam4) ** (1 / 3)


def cr_constraint(weights: ReferenceWeights) -> float:
    """``sum_k F_k^(2/k)``; equals 1 on the admissible weight manifold."""
    return sum(f ** (2.0 / k) for k, f in weights.items())


def critical_equation_lhs(f2: float) -> float:
    """Left side ``F2^(-1/2) (1-F2)^(-1/3) (7 F2 - 3)`` of the critical equation.

    Defined on ``[3/7, 1)``; the lower end is included as the zero of the
    factor ``7 F2 - 3``.
    """
    if not (PURE_QUARTIC_F2 <= f2 < 1.0):
        raise DomainError(f"F2 = {f2!r} outside [3/7, 1)")
    return f2**-0.5 * (1.0 - f2) ** (-1 / 3) * (7.0 * f2 - 3.0)


def critical_equation_rhs(lambda2: float, lambda4: float) -> float:
    """Right side ``3 |lambda2|^(1/2) |lambda4|^(-1/3)``; ``inf`` when ``lambda4 == 0``."""
    if lambda4 == 0:
        return math.inf
    return 3.0 * math.sqrt(abs(lambda2)) * abs(lambda4) ** (-1 / 3)


def _lhs_in_gap(u: float) -> float:
    # same function with u = 1 - F2; keeps full relative precision in F4 = u^2 near F2 -> 1
    return (1.0 - u) ** -0.5 * u ** (-1 / 3) * (4.0 - 7.0 * u)


def _solve_gap(rhs: float) -> float:
    """Root ``u`` of ``_lhs_in_gap(u) = rhs`` on ``(0, 4/7]``."""
    hi = 4.0 / 7.0
    # small-u asymptote lhs ~ 4 u^(-1/3) puts the root near (4/rhs)^3
    lo = min(0.5 * (4.0 / rhs) ** 3, 0.5 * hi)
    while lo > 0 and _lhs_in_gap(lo) <= rhs:
        lo *= 0.125
    if lo == 0.0:
        return 0.0
    u, info = brentq(
        lambda t: _lhs_in_gap(t) - rhs,
        lo,
        hi,
        xtol=1e-300,
        rtol=4 * _EPS,
        maxiter=500,
        full_output=True,
    )
    if not info.converged:
        raise FisherQuarticError(f"critical-point root solve failed: {info.flag}")
    return u


def lagrange_multiplier(weights: ReferenceWeights, multipliers: MultiplierVector) -> float:
    """Least-squares ``mu`` for ``grad f = mu grad phi`` at the given weights."""
    grad_f, grad_phi = _gradients(weights, multipliers)
    return float(grad_f @ grad_phi / (grad_phi @ grad_phi))


def solve_critical_point(problem: CrProblem) -> CrSolution:
    """Critical weights of the Cramer-Rao product on the normalization manifold.

    ``lambda4 == 0`` returns the harmonic boundary solution ``F2 = 1``;
    ``lambda2 == 0`` returns the pure-quartic solution ``F2 = 3/7``.
    """
    if problem.lambda4 == 0:
        return CrSolution(f2=1.0, f4=0.0, multiplier_mu=math.nan, f_value=1.0)

    if problem.lambda2 == 0:
        # rhs = 0; <x^2> diverges so the product is unbounded
        return CrSolution(
            f2=PURE_QUARTIC_F2, f4=(4.0 / 7.0) ** 2, multiplier_mu=math.nan, f_value=math.inf
        )

    rhs = critical_equation_rhs(problem.lambda2, problem.lambda4)
    u = _solve_gap(rhs)
    f2, f4 = 1.0 - u, u * u
    if f4 == 0.0:
        return CrSolution(f2=1.0, f4=0.0, multiplier_mu=math.nan, f_value=1.0)

    multipliers = problem.multipliers()
    weights = ReferenceWeights({2: f2, 4: f4})
    return CrSolution(
        f2=f2,
        f4=f4,
        # d f / d F2 equals mu at a critical point, since d phi / d F2 = 1
        multiplier_mu=1.0 + f2**-0.5 * f4 ** (1 / 3) * abs(problem.lambda2) ** -0.5 * abs(problem.lambda4) ** (1 / 3),
        f_value=cr_objective(weights, multipliers),
    )


def _gradients(
    weights: ReferenceWeights, multipliers: MultiplierVector, rel_step: float = 1e-5
) -> tuple[np.ndarray, np.ndarray]:
    orders = (2, 4)
    grad_f = np.empty(2)
    grad_phi = np.empty(2)
    for i, k in enumerate(orders):
        v = weights[k]
        h = rel_step * v
        up, down = weights.replace(k, v + h), weights.replace(k, v - h)
        grad_f[i] = (cr_objective(up, multipliers) - cr_objective(down, multipliers)) / (2 * h)
        grad_phi[i] = (cr_constraint(up) - cr_constraint(down)) / (2 * h)
    return grad_f, grad_phi


def stationarity_residual(
    weights: ReferenceWeights,
    multipliers: MultiplierVector,
    mu: float | None = None,
    rel_step: float = 1e-5,
) -> np.ndarray:
    """Components of ``grad f - mu grad phi`` (partials in ``F2``, ``F4``) by central differences.

    When ``mu`` is omitted the least-squares multiplier at ``weights`` is used.
    """
    if weights.orders != (2, 4):
        raise DomainError(f"stationarity needs weights on orders (2, 4), got {weights.orders}")
    grad_f, grad_phi = _gradients(weights, multipliers, rel_step)
    if mu is None:
        mu = float(grad_f @ grad_phi / (grad_phi @ grad_phi))
    return grad_f - mu * grad_phi

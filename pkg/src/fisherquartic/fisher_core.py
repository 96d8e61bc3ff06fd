"""Closed-form Fisher information and normalization multiplier for moment constraints.

Two dual descriptions of the same variational state are handled here:

* the moment scenario, where the Fisher information ``I`` is a function of the
  moments ``<x^k>``;
* the multiplier scenario, where the normalization multiplier ``alpha`` is a
  function of the Lagrange multipliers ``lambda_k``.

Both are power-law solutions of first-order linear PDEs, parametrized by one
positive reference weight ``F_k`` per moment order, and are Legendre transforms
of each other::

    I     = sum_k (k/2)     * (F_k / |<x^k>|)   ** (2/k)
    alpha = sum_k ((k+2)/2) * (F_k * |lambda_k|) ** (2/(k+2))
    I     = alpha + sum_k lambda_k <x^k>

Every function is pure. Partial derivatives are taken by central differences
with a step relative to the coordinate magnitude.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Mapping

from .errors import DomainError, NumericPrecisionError

__all__ = [
    "MomentOrderSet",
    "OrderedValues",
    "MultiplierVector",
    "MomentVector",
    "ReferenceWeights",
    "ScenarioPoint",
    "fim_closed_form",
    "alpha_closed_form",
    "conjugate_multipliers",
    "conjugate_moments",
    "fim_from_multipliers",
    "self_consistent_point",
    "legendre_residual",
    "virial_residuals",
    "conjugacy_residuals",
    "pde_residual_i",
    "pde_residual_alpha",
    "fim_gradient",
    "alpha_gradient",
    "reciprocity_residuals",
    "DEFAULT_REL_STEP",
]

DEFAULT_REL_STEP = 1e-5


@dataclass(frozen=True)
class MomentOrderSet:
    """Strictly increasing tuple of positive integer moment orders."""

    orders: tuple[int, ...]

    def __post_init__(self):
        orders = tuple(self.orders)
        if not orders:
            raise DomainError("moment order set is empty")
        for k in orders:
            if isinstance(k, bool) or int(k) != k or k < 1:
                raise DomainError(f"moment order must be a positive integer, got {k!r}")
        if any(b <= a for a, b in zip(orders, orders[1:])):
            raise DomainError(f"moment orders must be strictly increasing: {orders}")
        object.__setattr__(self, "orders", tuple(int(k) for k in orders))

    def __iter__(self) -> Iterator[int]:
        return iter(self.orders)

    def __len__(self) -> int:
        return len(self.orders)


@dataclass(frozen=True)
class OrderedValues:
    """Real values keyed by moment order.

    Accepts any mapping ``{k: value}``; keys are sorted and validated through
    :class:`MomentOrderSet`.
    """

    values: Mapping[int, float]
    order_set: MomentOrderSet = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        items = sorted((int(k), float(v)) for k, v in dict(self.values).items())
        object.__setattr__(self, "order_set", MomentOrderSet(tuple(k for k, _ in items)))
        object.__setattr__(self, "values", dict(items))
        for k, v in items:
            if not math.isfinite(v):
                raise DomainError(f"non-finite value {v!r} at order {k}")
        self._validate()

    def _validate(self) -> None:
        pass

    @property
    def orders(self) -> tuple[int, ...]:
        return self.order_set.orders

    def __getitem__(self, k: int) -> float:
        return self.values[k]

    def __iter__(self) -> Iterator[int]:
        return iter(self.values)

    def __len__(self) -> int:
        return len(self.values)

    def items(self):
        return self.values.items()

    def replace(self, k: int, value: float):
        """Return a copy with the entry at order ``k`` set to ``value``."""
        new = dict(self.values)
        if k not in new:
            raise KeyError(k)
        new[k] = value
        return type(self)(new)


class MultiplierVector(OrderedValues):
    """Lagrange multipliers ``lambda_k``; the potential is ``-(1/8) sum lambda_k x^k``."""

    def is_confining(self) -> bool:
        return all(v < 0 for v in self.values.values())


class MomentVector(OrderedValues):
    """Expectation values ``<x^k>``; even orders must be strictly positive."""

    def _validate(self) -> None:
        for k, v in self.values.items():
            if k % 2 == 0 and v <= 0:
                raise DomainError(f"even moment <x^{k}> must be positive, got {v!r}")


class ReferenceWeights(OrderedValues):
    """Positive integration constants ``F_k`` of the closed-form solutions.

    ``c_values`` and ``d_values`` give the constants of the moment and
    multiplier forms, ``C_k = (k/2) F_k^(2/k)`` and ``D_k = ((k+2)/2) F_k^(2/(k+2))``.
    """

    def _validate(self) -> None:
        for k, v in self.values.items():
            if v <= 0:
                raise DomainError(f"reference weight F_{k} must be positive, got {v!r}")

    @property
    def f_values(self) -> dict[int, float]:
        return dict(self.values)

    @property
    def c_values(self) -> dict[int, float]:
        return {k: 0.5 * k * f ** (2.0 / k) for k, f in self.values.items()}

    @property
    def d_values(self) -> dict[int, float]:
        return {k: 0.5 * (k + 2) * f ** (2.0 / (k + 2)) for k, f in self.values.items()}


@dataclass(frozen=True)
class ScenarioPoint:
    """Multipliers, moments, Fisher information and normalization multiplier of one state."""

    multipliers: MultiplierVector
    moments: MomentVector
    fisher_info: float
    alpha: float

    def __post_init__(self):
        if self.multipliers.orders != self.moments.orders:
            raise DomainError(
                f"multiplier orders {self.multipliers.orders} do not match "
                f"moment orders {self.moments.orders}"
            )
        if self.fisher_info < 0:
            raise DomainError(f"Fisher information must be non-negative, got {self.fisher_info!r}")


def _require_same_orders(weights: OrderedValues, other: OrderedValues) -> None:
    if weights.orders != other.orders:
        raise DomainError(f"orders {other.orders} do not match weight orders {weights.orders}")


def fim_closed_form(weights: ReferenceWeights, moments: MomentVector) -> float:
    """Fisher information as a function of the moments.

    Raises:
        DomainError: if any moment is zero, where ``I`` diverges.
    """
    _require_same_orders(weights, moments)
    total = 0.0
    for k, m in moments.items():
        if m == 0:
            raise DomainError(f"<x^{k}> = 0 lies outside the Fisher-information domain")
        total += 0.5 * k * (weights[k] / abs(m)) ** (2.0 / k)
    return total


def alpha_closed_form(weights: ReferenceWeights, multipliers: MultiplierVector) -> float:
    """Normalization multiplier as a function of the Lagrange multipliers."""
    _require_same_orders(weights, multipliers)
    return sum(
        0.5 * (k + 2) * (weights[k] * abs(lam)) ** (2.0 / (k + 2))
        for k, lam in multipliers.items()
    )


def conjugate_multipliers(weights: ReferenceWeights, moments: MomentVector) -> MultiplierVector:
    """Multipliers ``lambda_k = dI/d<x^k>`` for positive moments."""
    _require_same_orders(weights, moments)
    c = weights.c_values
    out = {}
    for k, m in moments.items():
        if m <= 0:
            raise DomainError(f"<x^{k}> must be positive, got {m!r}")
        out[k] = -(2.0 / k) * c[k] * m ** (-(2.0 + k) / k)
    return MultiplierVector(out)


def conjugate_moments(weights: ReferenceWeights, multipliers: MultiplierVector) -> MomentVector:
    """Moments ``<x^k> = -d(alpha)/d(lambda_k)`` for negative multipliers."""
    _require_same_orders(weights, multipliers)
    d = weights.d_values
    out = {}
    for k, lam in multipliers.items():
        if lam >= 0:
            raise DomainError(f"lambda_{k} must be negative, got {lam!r}")
        out[k] = (2.0 / (2 + k)) * d[k] * abs(lam) ** (-k / (2.0 + k))
    return MomentVector(out)


def fim_from_multipliers(weights: ReferenceWeights, multipliers: MultiplierVector) -> float:
    """``I`` expressed through the multipliers via the conjugate moments."""
    return fim_closed_form(weights, conjugate_moments(weights, multipliers))


def self_consistent_point(weights: ReferenceWeights, multipliers: MultiplierVector) -> ScenarioPoint:
    """Build the state whose moments, ``I`` and ``alpha`` all derive from ``weights``."""
    moments = conjugate_moments(weights, multipliers)
    return ScenarioPoint(
        multipliers=multipliers,
        moments=moments,
        fisher_info=fim_closed_form(weights, moments),
        alpha=alpha_closed_form(weights, multipliers),
    )


def legendre_residual(point: ScenarioPoint) -> float:
    """``I - alpha - sum_k lambda_k <x^k>``."""
    coupling = sum(lam * point.moments[k] for k, lam in point.multipliers.items())
    return point.fisher_info - point.alpha - coupling


def virial_residuals(point: ScenarioPoint) -> tuple[float, float]:
    """Residuals of the virial forms ``I = -sum (k/2) lambda_k <x^k>`` and
    ``alpha = -sum (1 + k/2) lambda_k <x^k>``."""
    m = point.moments
    r_fisher = point.fisher_info + sum(0.5 * k * lam * m[k] for k, lam in point.multipliers.items())
    r_alpha = point.alpha + sum((1.0 + 0.5 * k) * lam * m[k] for k, lam in point.multipliers.items())
    return r_fisher, r_alpha


def conjugacy_residuals(
    weights: ReferenceWeights, multipliers: MultiplierVector, moments: MomentVector
) -> dict[int, float]:
    """Relative residual of ``F_k^2 = |lambda_k|^k |<x^k>|^(2+k)`` per order.

    The comparison is done on logarithms, so the result is a relative error
    that stays meaningful when the two sides span many decades.
    """
    _require_same_orders(weights, multipliers)
    _require_same_orders(weights, moments)
    out = {}
    for k, f in weights.items():
        lhs = 2.0 * math.log(f)
        rhs = k * math.log(abs(multipliers[k])) + (2 + k) * math.log(abs(moments[k]))
        out[k] = math.expm1(rhs - lhs)
    return out


def _central_partials(
    func: Callable[[OrderedValues], float],
    point: OrderedValues,
    rel_step: float,
) -> dict[int, float]:
    partials = {}
    for k, v in point.items():
        h = rel_step * abs(v)
        if h == 0.0 or v + h == v:
            raise NumericPrecisionError(f"finite-difference step underflows at order {k} (value {v!r})")
        if v != 0 and ((v - h) * v <= 0 or (v + h) * v <= 0):
            raise NumericPrecisionError(f"finite-difference stencil crosses zero at order {k}")
        partials[k] = (func(point.replace(k, v + h)) - func(point.replace(k, v - h))) / (2.0 * h)
    return partials


def fim_gradient(
    weights: ReferenceWeights, moments: MomentVector, rel_step: float = DEFAULT_REL_STEP
) -> dict[int, float]:
    """Central-difference ``dI/d<x^k>`` of the closed form."""
    return _central_partials(lambda m: fim_closed_form(weights, m), moments, rel_step)


def alpha_gradient(
    weights: ReferenceWeights, multipliers: MultiplierVector, rel_step: float = DEFAULT_REL_STEP
) -> dict[int, float]:
    """Central-difference ``d(alpha)/d(lambda_k)`` of the closed form."""
    return _central_partials(lambda lam: alpha_closed_form(weights, lam), multipliers, rel_step)


def pde_residual_i(
    weights: ReferenceWeights,
    moments: MomentVector,
    *,
    fisher: Callable[[ReferenceWeights, MomentVector], float] = fim_closed_form,
    rel_step: float = DEFAULT_REL_STEP,
) -> float:
    """Residual of ``I + sum_k (k/2) <x^k> dI/d<x^k> = 0``.

    ``fisher`` may be any candidate function of ``(weights, moments)``; the
    residual vanishes only for solutions of the PDE.
    """
    grad = _central_partials(lambda m: fisher(weights, m), moments, rel_step)
    return fisher(weights, moments) + sum(0.5 * k * moments[k] * g for k, g in grad.items())


def pde_residual_alpha(
    weights: ReferenceWeights,
    multipliers: MultiplierVector,
    *,
    alpha: Callable[[ReferenceWeights, MultiplierVector], float] = alpha_closed_form,
    rel_step: float = DEFAULT_REL_STEP,
) -> float:
    """Residual of ``alpha - sum_k (1 + k/2) lambda_k d(alpha)/d(lambda_k) = 0``."""
    grad = _central_partials(lambda lam: alpha(weights, lam), multipliers, rel_step)
    return alpha(weights, multipliers) - sum(
        (1.0 + 0.5 * k) * multipliers[k] * g for k, g in grad.items()
    )


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def reciprocity_residuals(
    weights: ReferenceWeights,
    multipliers: MultiplierVector,
    rel_step: float = DEFAULT_REL_STEP,
) -> dict[str, float]:
    """Worst relative mismatch of each reciprocity relation at a self-consistent point.

    Returns a mapping with keys ``"alpha_lambda"`` (``d alpha/d lambda_k = -<x^k>``),
    ``"fisher_moment"`` (``dI/d<x^k> = lambda_k``) and ``"euler"``
    (``dI/d lambda_i = sum_k lambda_k d<x^k>/d lambda_i``).
    """
    moments = conjugate_moments(weights, multipliers)
    d_alpha = alpha_gradient(weights, multipliers, rel_step)
    d_fisher = fim_gradient(weights, moments, rel_step)

    d_fisher_d_lam = _central_partials(
        lambda lam: fim_from_multipliers(weights, lam), multipliers, rel_step
    )
    euler = 0.0
    for i, lam_i in multipliers.items():
        h = rel_step * abs(lam_i)
        up = conjugate_moments(weights, multipliers.replace(i, lam_i + h))
        down = conjugate_moments(weights, multipliers.replace(i, lam_i - h))
        chained = sum(
            lam_k * (up[k] - down[k]) / (2.0 * h) for k, lam_k in multipliers.items()
        )
        euler = max(euler, _rel(d_fisher_d_lam[i], chained))

    return {
        "alpha_lambda": max(_rel(d_alpha[k], -moments[k]) for k in multipliers),
        "fisher_moment": max(_rel(d_fisher[k], multipliers[k]) for k in multipliers),
        "euler": euler,
    }

"""Ground-state inference for the quartic anharmonic oscillator.

The oscillator ``-psi'' + k y^2 psi + lam y^4 psi = E psi`` (literature form) is
mapped onto multipliers ``(lambda2, lambda4)``, the Cramer-Rao optimizer picks
the reference weights, and the closed forms give ``alpha``, moments and the
Fisher information. The eigenvalue is ``E = alpha / 8``.

Two unit conventions are supported:

``Convention.LITERATURE``
    ``lambda2 = -16 k``, ``lambda4 = -32 lam``. Energies are those of
    ``-d^2/dy^2 + k y^2 + lam y^4``.
``Convention.PAPER``
    ``lambda2 = -4 k``, ``lambda4 = -4 lam``. Energies are those of
    ``-(1/2) d^2/dx^2 + (k/2) x^2 + (lam/2) x^4`` and are exactly half the
    literature-form values.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .cr_optimizer import CrProblem, CrSolution, solve_critical_point
from .errors import DomainError, FisherQuarticError
from .fisher_core import (
    MomentVector,
    MultiplierVector,
    ReferenceWeights,
    ScenarioPoint,
    alpha_closed_form,
    conjugate_moments,
    fim_closed_form,
)

__all__ = [
    "Convention",
    "OscillatorSpec",
    "InferenceResult",
    "SweepEntry",
    "map_multipliers",
    "infer_ground_state",
    "sweep",
    "TABLE_LAMBDAS",
    "DEFAULT_SWEEP_LAMBDAS",
    "large_lambda_coefficient",
]

TABLE_LAMBDAS = (0.0001, 0.001, 0.01, 0.1, 1.0, 10.0, 100.0, 1000.0)
DEFAULT_SWEEP_LAMBDAS = TABLE_LAMBDAS + (10000.0,)


class Convention(str, enum.Enum):
    LITERATURE = "literature"
    PAPER = "paper"

    @property
    def scales(self) -> tuple[float, float]:
        """Factors mapping ``(k, lam)`` to ``(-lambda2, -lambda4)``."""
        return (16.0, 32.0) if self is Convention.LITERATURE else (4.0, 4.0)


@dataclass(frozen=True)
class OscillatorSpec:
    k_harmonic: float = 1.0
    lambda_anharmonic: float = 0.0
    convention: Convention = Convention.LITERATURE

    def __post_init__(self):
        object.__setattr__(self, "convention", Convention(self.convention))
        k, lam = self.k_harmonic, self.lambda_anharmonic
        if not (math.isfinite(k) and math.isfinite(lam)):
            raise DomainError("oscillator coefficients must be finite")
        if k < 0 or lam < 0:
            raise DomainError(f"coefficients must be non-negative, got k={k!r}, lambda={lam!r}")
        if k == 0 and lam == 0:
            raise DomainError("k and lambda cannot both be zero")

    def with_lambda(self, lam: float) -> "OscillatorSpec":
        return replace(self, lambda_anharmonic=lam)


@dataclass(frozen=True)
class InferenceResult:
    """Inferred ground state of one oscillator.

    ``x2`` is ``inf`` for a pure quartic (``k == 0``). ``x4`` at ``lambda == 0``
    is the ``lambda -> 0+`` limit ``16 / (9 |lambda2|)`` of the closed forms.
    """

    spec: OscillatorSpec
    multipliers: MultiplierVector
    f2: float
    f4: float
    alpha: float
    energy: float
    fisher_info: float
    x2: float
    x4: float
    cr_product: float
    mu: float

    def scenario_point(self) -> ScenarioPoint:
        """The inferred state as a point of the Legendre structure (needs ``k > 0``)."""
        return ScenarioPoint(
            multipliers=self.multipliers,
            moments=MomentVector({2: self.x2, 4: self.x4}),
            fisher_info=self.fisher_info,
            alpha=self.alpha,
        )


def map_multipliers(spec: OscillatorSpec) -> MultiplierVector:
    """Multipliers ``(lambda2, lambda4)`` for the oscillator in its convention."""
    s2, s4 = spec.convention.scales
    # 0.0 - x keeps +0.0 rather than -0.0 for vanishing coefficients
    return MultiplierVector({2: 0.0 - s2 * spec.k_harmonic, 4: 0.0 - s4 * spec.lambda_anharmonic})


def _assemble(spec: OscillatorSpec, multipliers: MultiplierVector, sol: CrSolution) -> InferenceResult:
    a2, a4 = abs(multipliers[2]), abs(multipliers[4])
    f2, f4 = sol.f2, sol.f4

    if a2 > 0 and a4 > 0 and f4 > 0:
        weights = ReferenceWeights({2: f2, 4: f4})
        moments = conjugate_moments(weights, multipliers)
        alpha = alpha_closed_form(weights, multipliers)
        fisher = fim_closed_form(weights, moments)
        x2, x4 = moments[2], moments[4]
    elif a4 == 0 or f4 == 0:
        # harmonic, or quartic coupling too weak to register: F4 = 0, the quartic terms vanish; <x^4> is the lambda -> 0+ limit
        alpha = 2.0 * math.sqrt(f2 * a2)
        fisher = math.sqrt(f2 * a2)
        x2 = math.sqrt(f2 / a2)
        x4 = 16.0 / (9.0 * a2)
    else:
        # pure quartic: <x^2> diverges while lambda2 <x^2> -> 0
        alpha = 3.0 * (f4 * a4) ** (1 / 3)
        fisher = 2.0 * (f4 * a4) ** (1 / 3)
        x2 = math.inf
        x4 = f4 ** (1 / 3) * a4 ** (-2 / 3)

    cr_product = fisher * x2 if math.isfinite(x2) else math.inf
    return InferenceResult(
        spec=spec,
        multipliers=multipliers,
        f2=f2,
        f4=f4,
        alpha=alpha,
        energy=alpha / 8.0,
        fisher_info=fisher,
        x2=x2,
        x4=x4,
        cr_product=cr_product,
        mu=sol.multiplier_mu,
    )


def infer_ground_state(spec: OscillatorSpec) -> InferenceResult:
    """Infer the ground-state energy without solving the Schrodinger equation.

    >>> round(infer_ground_state(OscillatorSpec(1.0, 1.0)).energy, 6)
    1.353533
    """
    multipliers = map_multipliers(spec)
    solution = solve_critical_point(CrProblem.from_multipliers(multipliers))
    return _assemble(spec, multipliers, solution)


@dataclass(frozen=True)
class SweepEntry:
    lambda_anharmonic: float
    result: InferenceResult | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.result is not None


def _sweep_one(template: OscillatorSpec, lam: float) -> SweepEntry:
    try:
        return SweepEntry(lam, infer_ground_state(template.with_lambda(lam)))
    except (FisherQuarticError, ValueError, ArithmeticError) as exc:
        return SweepEntry(lam, error=f"{type(exc).__name__}: {exc}")


def sweep(
    template: OscillatorSpec,
    lambda_values: Iterable[float],
    max_workers: int | None = None,
) -> list[SweepEntry]:
    """Run :func:`infer_ground_state` over a list of anharmonicities.

    Failures are captured per entry. Output order matches input order.
    """
    lams: Sequence[float] = list(lambda_values)
    if max_workers is None or max_workers <= 1:
        return [_sweep_one(template, lam) for lam in lams]
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(lambda lam: _sweep_one(template, lam), lams))


def large_lambda_coefficient(convention: Convention = Convention.LITERATURE) -> float:
    """Limit of ``E / lambda^(1/3)`` as ``lambda -> inf`` at fixed ``k``.

    The weights tend to ``F2 = 3/7``, ``F4 = (4/7)^2`` and only the quartic term
    of ``alpha`` grows like ``lambda^(1/3)``.
    """
    s4 = convention.scales[1]
    return 3.0 * (16.0 / 49.0) ** (1 / 3) * s4 ** (1 / 3) / 8.0

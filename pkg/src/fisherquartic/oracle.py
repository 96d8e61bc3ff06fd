"""Reference Schrodinger solver and wavefunction diagnostics.

The eigenproblem solved is the multiplier form of the Schrodinger equation,

    -4 psi'' - sum_k lambda_k x^k psi = alpha psi,      E = alpha / 8,

which for the quartic multipliers of :mod:`fisherquartic.quartic` reproduces the
oscillator energies of the chosen convention. Working in this coordinate keeps
the moments and Fisher information directly comparable with the closed forms.

The Hamiltonian is diagonalized in a harmonic-oscillator basis whose length
scale minimizes the Gaussian variational energy. Every solve is repeated at
twice the basis size and rejected if the ground-state energy moves by more than
the configured tolerance. Wavefunction and derivatives are then evaluated on a
uniform grid from the basis expansion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import eigh
from scipy.optimize import minimize_scalar

from .errors import ConvergenceError, DomainError
from .fisher_core import MultiplierVector
from .quartic import OscillatorSpec, map_multipliers

__all__ = [
    "SolverConfig",
    "SpectralSolution",
    "solve_multipliers",
    "solve_ground_state",
    "fisher_from_wavefunction",
    "fisher_from_second_derivative",
    "mean_momentum",
    "cramer_rao_check",
    "uncertainty_product",
    "hellmann_feynman_check",
    "virial_check",
    "legendre_residual_oracle",
    "gaussian_scale",
]


@dataclass(frozen=True)
class SolverConfig:
    """Discretization settings for the reference solver.

    Attributes:
        basis_size: Number of harmonic-oscillator basis functions.
        scale: Basis length scale in the solver coordinate; ``None`` picks the
            Gaussian variational optimum.
        grid_points: Samples of the uniform output grid (odd, so ``x = 0`` is a node).
        tolerance: Largest accepted energy shift between ``basis_size`` and
            ``2 * basis_size``.
        method: Discretization tag; only ``"ho-basis"`` is implemented.
    """

    basis_size: int = 256
    scale: float | None = None
    grid_points: int = 4097
    tolerance: float = 1e-7
    method: str = "ho-basis"

    def __post_init__(self):
        if self.basis_size < 16:
            raise DomainError(f"basis_size must be >= 16, got {self.basis_size}")
        if self.scale is not None and not self.scale > 0:
            raise DomainError(f"scale must be positive, got {self.scale!r}")
        if self.grid_points < 65 or self.grid_points % 2 == 0:
            raise DomainError("grid_points must be odd and >= 65")
        if self.method != "ho-basis":
            raise DomainError(f"unknown solver method {self.method!r}")


@dataclass(frozen=True, eq=False)
class SpectralSolution:
    """Ground state of the multiplier-form Schrodinger equation.

    ``moments`` holds ``<x^k>`` for ``k = 1..4`` and every multiplier order.
    ``fisher_info`` is ``4 * integral(psi'^2)`` by grid quadrature, while
    ``momentum_variance`` comes from the basis algebra; the two are
    independent routes to the same quantity.
    """

    multipliers: MultiplierVector
    eigenvalue: float
    alpha: float
    grid: np.ndarray = field(repr=False)
    psi: np.ndarray = field(repr=False)
    dpsi: np.ndarray = field(repr=False)
    d2psi: np.ndarray = field(repr=False)
    moments: dict[int, float]
    fisher_info: float
    momentum_variance: float
    basis_size: int
    scale: float
    refinement_shift: float

    @property
    def dx(self) -> float:
        return float(self.grid[1] - self.grid[0])

    @property
    def x2(self) -> float:
        return self.moments[2]

    @property
    def x4(self) -> float:
        return self.moments[4]

    @property
    def norm(self) -> float:
        return float(np.sum(self.psi**2) * self.dx)


def _gaussian_moment(k: int, s: float) -> float:
    # psi^2 ~ exp(-x^2/s^2): variance s^2/2
    if k % 2:
        return 0.0
    return math.prod(range(k - 1, 0, -2)) * (0.5 * s * s) ** (k // 2)


def _check_confining(multipliers: MultiplierVector) -> None:
    active = [k for k, lam in multipliers.items() if lam != 0]
    if not active:
        raise DomainError("all multipliers vanish; no bound state")
    top = max(active)
    if top % 2 or multipliers[top] > 0:
        raise DomainError(
            f"potential is not confining: leading order {top} with lambda={multipliers[top]!r}"
        )


def gaussian_scale(multipliers: MultiplierVector) -> float:
    """Width ``s`` of the Gaussian ``exp(-x^2/(2 s^2))`` minimizing the energy."""
    _check_confining(multipliers)

    def energy(log_s: float) -> float:
        s = math.exp(log_s)
        return 2.0 / (s * s) - sum(lam * _gaussian_moment(k, s) for k, lam in multipliers.items())

    res = minimize_scalar(energy, bracket=(-3.0, 0.0), tol=1e-10)
    return math.exp(res.x)


def _position_matrix(size: int) -> np.ndarray:
    off = np.sqrt(np.arange(1, size) / 2.0)
    return np.diag(off, 1) + np.diag(off, -1)


def _operators(multipliers: MultiplierVector, size: int, orders):
    """Dimensionless ``P^2`` and ``X^k`` (for each k in ``orders``) truncated to ``size``."""
    kmax = max(max(orders), 2)
    x_big = _position_matrix(size + kmax)
    powers = {}
    acc = np.eye(size + kmax)
    for k in range(1, kmax + 1):
        acc = acc @ x_big
        if k in orders or k == 2:
            powers[k] = acc[:size, :size].copy()
    p2 = np.diag(2.0 * np.arange(size) + 1.0) - powers[2]
    return p2, powers


def _ground_state(multipliers: MultiplierVector, size: int, s: float, orders):
    p2, xk = _operators(multipliers, size, orders)
    h = (4.0 / s**2) * p2
    for k, lam in multipliers.items():
        if lam != 0:
            h -= lam * s**k * xk[k]
    w, v = eigh(h, subset_by_index=[0, 0])
    return float(w[0]), v[:, 0], p2, xk


def _hermite_functions(xi: np.ndarray, count: int) -> np.ndarray:
    """Normalized Hermite functions ``phi_0 .. phi_{count-1}`` sampled at ``xi``."""
    out = np.empty((count, xi.size))
    out[0] = math.pi**-0.25 * np.exp(-0.5 * xi**2)
    if count > 1:
        out[1] = math.sqrt(2.0) * xi * out[0]
    for n in range(1, count - 1):
        out[n + 1] = math.sqrt(2.0 / (n + 1)) * xi * out[n] - math.sqrt(n / (n + 1)) * out[n - 1]
    return out


def solve_multipliers(
    multipliers: MultiplierVector, config: SolverConfig | None = None
) -> SpectralSolution:
    """Lowest eigenpair of ``-4 d^2/dx^2 - sum lambda_k x^k``.

    Raises:
        DomainError: if the potential is not confining.
        ConvergenceError: if doubling the basis moves the energy by more than
            ``config.tolerance``.
    """
    config = config or SolverConfig()
    _check_confining(multipliers)
    s = config.scale or gaussian_scale(multipliers)
    n = config.basis_size
    orders = sorted(set(multipliers.orders) | {1, 2, 3, 4})

    alpha, c, p2, xk = _ground_state(multipliers, n, s, orders)
    alpha_fine, *_ = _ground_state(multipliers, 2 * n, s, orders)
    shift = abs(alpha_fine - alpha) / 8.0
    if not shift <= config.tolerance:
        raise ConvergenceError(
            f"ground-state energy moved by {shift:.3e} on doubling the basis",
            {"basis_size": n, "scale": s, "energy": alpha / 8, "energy_refined": alpha_fine / 8, "shift": shift},
        )

    # deterministic sign: positive at the largest-amplitude coefficient
    if c[np.argmax(np.abs(c))] < 0:
        c = -c
    # even potentials: odd coefficients are round-off only
    if all(k % 2 == 0 or lam == 0 for k, lam in multipliers.items()):
        c = c.copy()
        c[1::2] = 0.0
        c /= np.linalg.norm(c)

    moments = {k: float(s**k * (c @ xk[k] @ c)) for k in orders}
    p2_mean = float(c @ p2 @ c) / s**2

    half = math.sqrt(2.0 * n + 1.0) + 6.0
    xi = np.linspace(-half, half, config.grid_points)
    phi = _hermite_functions(xi, n + 1)
    idx = np.arange(n)
    psi_xi = c @ phi[:n]
    dpsi_xi = (np.sqrt(idx / 2.0) * c) @ np.vstack([np.zeros_like(xi), phi[: n - 1]]) - (
        np.sqrt((idx + 1) / 2.0) * c
    ) @ phi[1 : n + 1]
    d2psi_xi = (xi**2) * psi_xi - ((2.0 * idx + 1.0) * c) @ phi[:n]

    grid = s * xi
    psi = psi_xi / math.sqrt(s)
    dpsi = dpsi_xi / s**1.5
    d2psi = d2psi_xi / s**2.5
    dx = float(grid[1] - grid[0])
    fisher = 4.0 * float(np.sum(dpsi**2)) * dx

    for arr in (grid, psi, dpsi, d2psi):
        arr.setflags(write=False)
    return SpectralSolution(
        multipliers=multipliers,
        eigenvalue=alpha / 8.0,
        alpha=alpha,
        grid=grid,
        psi=psi,
        dpsi=dpsi,
        d2psi=d2psi,
        moments=moments,
        fisher_info=fisher,
        momentum_variance=p2_mean,
        basis_size=n,
        scale=s,
        refinement_shift=shift,
    )


def solve_ground_state(spec: OscillatorSpec, config: SolverConfig | None = None) -> SpectralSolution:
    """Reference ground state of the oscillator in its convention's units.

    >>> round(solve_ground_state(OscillatorSpec(1.0, 1.0)).eigenvalue, 6)
    1.392352
    """
    return solve_multipliers(map_multipliers(spec), config)


def _require_normalized(sol: SpectralSolution, tol: float = 1e-6) -> None:
    if abs(sol.norm - 1.0) > tol:
        raise DomainError(f"wavefunction is not normalized (norm = {sol.norm!r})")


def _derivative(y: np.ndarray, h: float) -> np.ndarray:
    d = np.gradient(y, h, edge_order=2)
    d[2:-2] = (y[:-4] - 8 * y[1:-3] + 8 * y[3:-1] - y[4:]) / (12 * h)
    return d


def _second_derivative(y: np.ndarray, h: float) -> np.ndarray:
    d = np.zeros_like(y)
    d[1:-1] = (y[:-2] - 2 * y[1:-1] + y[2:]) / h**2
    d[2:-2] = (-y[:-4] + 16 * y[1:-3] - 30 * y[2:-2] + 16 * y[3:-1] - y[4:]) / (12 * h**2)
    return d


def fisher_from_wavefunction(sol: SpectralSolution, method: str = "central") -> float:
    """``4 * sum(psi'^2) * dx`` on the solution grid.

    ``method="central"`` differentiates the sampled ``psi`` with a fourth-order
    central stencil; ``"spectral"`` uses the derivative of the basis expansion.
    """
    _require_normalized(sol)
    if method == "spectral":
        d = sol.dpsi
    elif method == "central":
        d = _derivative(np.asarray(sol.psi), sol.dx)
    else:
        raise ValueError(f"unknown method {method!r}")
    return 4.0 * float(np.sum(d**2)) * sol.dx


def fisher_from_second_derivative(sol: SpectralSolution, method: str = "central") -> float:
    """``-4 * sum(psi psi'') * dx``, the integrated-by-parts form of the Fisher information."""
    _require_normalized(sol)
    if method == "spectral":
        d2 = sol.d2psi
    elif method == "central":
        d2 = _second_derivative(np.asarray(sol.psi), sol.dx)
    else:
        raise ValueError(f"unknown method {method!r}")
    return -4.0 * float(np.sum(sol.psi * d2)) * sol.dx


def mean_momentum(sol: SpectralSolution) -> float:
    """Real part of ``<p>/(-i) = sum(psi psi') dx``; zero for any real normalized state."""
    return float(np.sum(sol.psi * sol.dpsi)) * sol.dx


def cramer_rao_check(sol: SpectralSolution) -> float:
    """Cramer-Rao product ``I * (<x^2> - <x>^2)``; at least 1 for any state."""
    return sol.fisher_info * (sol.moments[2] - sol.moments[1] ** 2)


def uncertainty_product(sol: SpectralSolution) -> float:
    """``(dx)^2 (dp)^2`` with ``hbar = 1``; at least 1/4."""
    return (sol.moments[2] - sol.moments[1] ** 2) * (sol.momentum_variance - mean_momentum(sol) ** 2)


def legendre_residual_oracle(sol: SpectralSolution) -> float:
    """``I - alpha - sum_k lambda_k <x^k>`` from oracle quantities."""
    return sol.fisher_info - sol.alpha - sum(lam * sol.moments[k] for k, lam in sol.multipliers.items())


def virial_check(sol: SpectralSolution, multipliers: MultiplierVector) -> tuple[float, float]:
    """Residuals of ``I = -sum (k/2) lambda_k <x^k>`` and ``alpha = -sum (1+k/2) lambda_k <x^k>``.

    Raises:
        DomainError: if ``multipliers`` are not the ones the state was solved for.
    """
    if multipliers.values != sol.multipliers.values:
        raise DomainError(
            f"multipliers {multipliers.values} do not match the solved potential {sol.multipliers.values}"
        )
    m = sol.moments
    r_fisher = sol.fisher_info + sum(0.5 * k * lam * m[k] for k, lam in multipliers.items())
    r_alpha = sol.alpha + sum((1.0 + 0.5 * k) * lam * m[k] for k, lam in multipliers.items())
    return r_fisher, r_alpha


def hellmann_feynman_check(
    spec: OscillatorSpec | MultiplierVector,
    config: SolverConfig | None = None,
    order: int = 4,
    step: float | None = None,
) -> float:
    """``|d alpha/d lambda_k + <x^k>|`` with the derivative from two extra solves.

    ``step`` defaults to ``1e-4 * |lambda_k|``.
    """
    config = config or SolverConfig()
    multipliers = spec if isinstance(spec, MultiplierVector) else map_multipliers(spec)
    lam = multipliers[order]
    if step is None:
        step = 1e-4 * abs(lam)
    if not step > 0:
        raise DomainError(f"finite-difference step must be positive, got {step!r}")
    base = solve_multipliers(multipliers, config)
    up = solve_multipliers(multipliers.replace(order, lam + step), config)
    down = solve_multipliers(multipliers.replace(order, lam - step), config)
    slope = (up.alpha - down.alpha) / (2.0 * step)
    return abs(slope + base.moments[order])

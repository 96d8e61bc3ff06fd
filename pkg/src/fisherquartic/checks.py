"""Identity and table check suites behind ``fisherquartic check``.

Each check reduces to a worst-case residual compared against a fixed
tolerance. Random inputs come from a seeded generator so reports are
reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from . import cr_optimizer as cro
from . import fisher_core as fc
from . import oracle
from .quartic import (
    TABLE_LAMBDAS,
    Convention,
    OscillatorSpec,
    infer_ground_state,
    large_lambda_coefficient,
)
from .table import build_rows

__all__ = ["CheckResult", "identity_checks", "table_checks", "run_suite", "SUITES"]

SEED = 20241019
N_RANDOM = 100


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tolerance: float
    passed: bool
    detail: str = ""


def _leq(name: str, value: float, tol: float, detail: str = "") -> CheckResult:
    return CheckResult(name, float(value), tol, bool(value <= tol), detail)


def _random_weights(rng, orders=(2, 4)) -> fc.ReferenceWeights:
    return fc.ReferenceWeights({k: float(rng.uniform(0.05, 2.0)) for k in orders})


def _random_multipliers(rng, orders=(2, 4)) -> fc.MultiplierVector:
    return fc.MultiplierVector({k: -float(10 ** rng.uniform(-2, 3)) for k in orders})


def _random_moments(rng, orders=(2, 4)) -> fc.MomentVector:
    return fc.MomentVector({k: float(10 ** rng.uniform(-2, 1)) for k in orders})


def identity_checks(config: oracle.SolverConfig | None = None) -> list[CheckResult]:
    rng = np.random.default_rng(SEED)
    worst = {
        "conjugacy": 0.0, "legendre": 0.0, "round_trip": 0.0, "reciprocity": 0.0,
        "euler": 0.0, "pde_i": 0.0, "pde_alpha": 0.0, "virial": 0.0,
    }
    for _ in range(N_RANDOM):
        w = _random_weights(rng)
        lam = _random_multipliers(rng)
        mom = _random_moments(rng)
        point = fc.self_consistent_point(w, lam)
        worst["conjugacy"] = max(worst["conjugacy"], *map(abs, fc.conjugacy_residuals(w, lam, point.moments).values()))
        scale = max(abs(point.fisher_info), abs(point.alpha))
        worst["legendre"] = max(worst["legendre"], abs(fc.legendre_residual(point)) / scale)
        back = fc.conjugate_multipliers(w, point.moments)
        worst["round_trip"] = max(worst["round_trip"], max(abs(back[k] / lam[k] - 1) for k in lam))
        rec = fc.reciprocity_residuals(w, lam)
        worst["reciprocity"] = max(worst["reciprocity"], rec["alpha_lambda"], rec["fisher_moment"])
        worst["euler"] = max(worst["euler"], rec["euler"])
        worst["pde_i"] = max(worst["pde_i"], abs(fc.pde_residual_i(w, mom)) / fc.fim_closed_form(w, mom))
        worst["pde_alpha"] = max(worst["pde_alpha"], abs(fc.pde_residual_alpha(w, lam)) / fc.alpha_closed_form(w, lam))
        worst["virial"] = max(worst["virial"], max(map(abs, fc.virial_residuals(point))) / scale)

    results = [
        _leq("conjugacy F_k^2 = |lambda_k|^k <x^k>^(2+k) (rel)", worst["conjugacy"], 1e-10),
        _leq("legendre I = alpha + sum lambda_k <x^k> (rel)", worst["legendre"], 1e-10),
        _leq("conjugate round trip (rel)", worst["round_trip"], 1e-10),
        _leq("reciprocity by finite differences (rel)", worst["reciprocity"], 1e-5),
        _leq("fisher-euler relation (rel)", worst["euler"], 1e-4),
        _leq("I-PDE residual (rel)", worst["pde_i"], 1e-6),
        _leq("alpha-PDE residual (rel)", worst["pde_alpha"], 1e-6),
        _leq("virial closed forms (rel)", worst["virial"], 1e-10),
    ]

    # inference-level properties
    conv = 0.0
    for _ in range(20):
        k, lam = float(rng.uniform(0.1, 10)), float(10 ** rng.uniform(-4, 4))
        lit = infer_ground_state(OscillatorSpec(k, lam, Convention.LITERATURE))
        pap = infer_ground_state(OscillatorSpec(k, lam, Convention.PAPER))
        conv = max(conv, abs(lit.energy / (2 * pap.energy) - 1))
    results.append(_leq("convention factor E_lit = 2 E_paper (rel)", conv, 1e-12))

    harm = infer_ground_state(OscillatorSpec(2.0, 0.0))
    results.append(_leq("harmonic limit F2 = 1, E = sqrt(k)", max(abs(harm.f2 - 1), abs(harm.energy - math.sqrt(2))), 1e-12))
    pure = infer_ground_state(OscillatorSpec(0.0, 1.0))
    results.append(_leq("pure quartic F2 = 3/7", abs(pure.f2 - 3 / 7), 1e-15))
    asym = infer_ground_state(OscillatorSpec(1.0, 1e8))
    results.append(_leq("large-lambda asymptote (rel)", abs(asym.energy / 1e8 ** (1 / 3) / large_lambda_coefficient() - 1), 1e-2))

    u = np.linspace(3 / 7, 1, 10_002)[1:-1]
    g = np.array([cro.critical_equation_lhs(x) for x in u])
    results.append(CheckResult("critical equation strictly increasing", float(np.min(np.diff(g))), 0.0, bool(np.all(np.diff(g) > 0))))

    cr_min = min(infer_ground_state(OscillatorSpec(1.0, lam)).cr_product for lam in TABLE_LAMBDAS)
    results.append(CheckResult("Cramer-Rao bound on inference", cr_min, 1 - 1e-8, cr_min >= 1 - 1e-8))

    # wavefunction-level checks
    cr_oracle, dp, p_mean, leg, vir, vir_stiff = math.inf, 0.0, 0.0, 0.0, 0.0, 0.0
    for lam in TABLE_LAMBDAS:
        sol = oracle.solve_ground_state(OscillatorSpec(1.0, lam), config)
        cr_oracle = min(cr_oracle, oracle.cramer_rao_check(sol))
        dp = max(dp, abs(sol.momentum_variance - sol.fisher_info / 4))
        p_mean = max(p_mean, abs(oracle.mean_momentum(sol)))
        leg = max(leg, abs(oracle.legendre_residual_oracle(sol)))
        r = max(map(abs, oracle.virial_check(sol, sol.multipliers)))
        if lam >= 1000:
            vir_stiff = max(vir_stiff, r)
        else:
            vir = max(vir, r)
    results += [
        CheckResult("Cramer-Rao bound on oracle states", cr_oracle, 1 - 1e-8, cr_oracle >= 1 - 1e-8),
        _leq("(dp)^2 = I/4 on oracle states", dp, 1e-8),
        _leq("<p> = 0 on oracle states", p_mean, 1e-10),
        _leq("legendre identity on oracle states", leg, 1e-5),
        _leq("virial on oracle states (lambda < 1000)", vir, 1e-5),
        _leq("virial on oracle states (lambda = 1000)", vir_stiff, 1e-4),
    ]
    harmonic = oracle.solve_ground_state(OscillatorSpec(1.0, 0.0), config)
    results.append(_leq("harmonic oracle saturates Cramer-Rao", abs(oracle.cramer_rao_check(harmonic) - 1), 1e-6))
    results.append(_leq("Hellmann-Feynman order 4 at (1, 1)", oracle.hellmann_feynman_check(OscillatorSpec(1.0, 1.0), config, 4), 1e-4))
    results.append(_leq("Hellmann-Feynman order 2 at (1, 0.1)", oracle.hellmann_feynman_check(OscillatorSpec(1.0, 0.1), config, 2), 1e-4))
    return results


def table_checks(config: oracle.SolverConfig | None = None) -> list[CheckResult]:
    rows = build_rows(TABLE_LAMBDAS, config=config)
    worst = {"E_num": 0.0, "E_inferred": 0.0, "cr_product": 0.0}
    failed = [r.lam for r in rows if r.error]
    for row in rows:
        if row.error is None:
            for key, dev in row.deviations.items():
                worst[key] = max(worst[key], dev)
    return [
        CheckResult("table rows computed", float(len(failed)), 0.0, not failed, f"failed: {failed}" if failed else ""),
        _leq("max |E_inferred - table|", worst["E_inferred"], 1e-5),
        _leq("max |cr_product - table|", worst["cr_product"], 1e-5),
        _leq("max |E_num - table|", worst["E_num"], 1e-5),
    ]


SUITES: dict[str, Callable[..., list[CheckResult]]] = {
    "identities": identity_checks,
    "table": table_checks,
}


def run_suite(name: str, config: oracle.SolverConfig | None = None) -> list[CheckResult]:
    if name == "all":
        return identity_checks(config) + table_checks(config)
    try:
        return SUITES[name](config)
    except KeyError:
        raise ValueError(f"unknown suite {name!r}") from None

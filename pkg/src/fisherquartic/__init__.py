"""Ground states of the quartic anharmonic oscillator from Fisher-information inference.

The inference route (:mod:`.fisher_core`, :mod:`.cr_optimizer`, :mod:`.quartic`)
never solves a differential equation; :mod:`.oracle` is an independent
eigensolver used to validate it.
"""

from .cr_optimizer import CrProblem, CrSolution, solve_critical_point
from .errors import ConvergenceError, DomainError, FisherQuarticError, NumericPrecisionError
from .fisher_core import MomentVector, MultiplierVector, ReferenceWeights, ScenarioPoint
from .oracle import SolverConfig, SpectralSolution, solve_ground_state
from .quartic import Convention, InferenceResult, OscillatorSpec, infer_ground_state, sweep

__all__ = [
    "Convention",
    "ConvergenceError",
    "CrProblem",
    "CrSolution",
    "DomainError",
    "FisherQuarticError",
    "InferenceResult",
    "MomentVector",
    "MultiplierVector",
    "NumericPrecisionError",
    "OscillatorSpec",
    "ReferenceWeights",
    "ScenarioPoint",
    "SolverConfig",
    "SpectralSolution",
    "infer_ground_state",
    "solve_critical_point",
    "solve_ground_state",
    "sweep",
]

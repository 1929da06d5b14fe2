"""Positivity-preserving Kraus-form integrators for Lindblad master equations.

The core objects are :class:`LindbladModel` (Hamiltonian plus jump operators),
:class:`SchemeId` (which integrator) and :func:`step` / :func:`propagate`.
Exact reference propagators live in :mod:`lindblad_sp.oracle`, the
dephasing stability analysis in :mod:`lindblad_sp.stability`, quantum-jump
sampling in :mod:`lindblad_sp.unravel` and benchmark harnesses in
:mod:`lindblad_sp.bench`.
"""

from .errors import (
    BadOrdering, BadParameter, BoundViolation, DegenerateState, DimMismatch, IndefiniteState,
    InvalidStepSize, LindbladError, NonlinearMap, NonPositiveTrace, NotHermitian, TermExplosion,
    UnsupportedScheme,
)
from .model import (
    EffectiveGenerator, LindbladModel, effective_generator, lindbladian_apply, lj_apply, ll_apply,
)
from .schemes import (
    RK, SP1, SP2MP, SP2TR, SPM, SchemeId, StepOutcome, enumerate_spm_terms, error_constant,
    normalize, propagate, step, step_unnormalized,
)

__version__ = "0.1.0"

__all__ = [
    "BadOrdering", "BadParameter", "BoundViolation", "DegenerateState", "DimMismatch",
    "EffectiveGenerator", "IndefiniteState", "InvalidStepSize", "LindbladError", "LindbladModel",
    "NonPositiveTrace", "NonlinearMap", "NotHermitian", "RK", "SP1", "SP2MP", "SP2TR", "SPM",
    "SchemeId", "StepOutcome", "TermExplosion", "UnsupportedScheme", "effective_generator",
    "enumerate_spm_terms", "error_constant", "lindbladian_apply", "lj_apply", "ll_apply",
    "normalize", "propagate", "step", "step_unnormalized",
]

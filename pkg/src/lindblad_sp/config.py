"""Module-wide numerical tolerances and limits."""

HERMITIAN_TOL = 1e-12
"""Max-abs slack for ``A == A^dagger`` checks on model matrices and states."""

EIG_HERMITIAN_TOL = 1e-10
"""Relative slack accepted by :func:`lindblad_sp.linalg.hermitian_eigs`."""

PSD_TOL = 1e-10
"""Relative negative-eigenvalue slack for positive semidefinite checks."""

TRACE_TOL = 1e-12

INDEFINITE_WARN = 1e-8
"""RK outputs with a smaller minimum eigenvalue emit :class:`IndefiniteState`."""

MIN_TRACE = 1e-300

TERM_CAP = 10**6
"""Maximum number of midpoint tuples a high-order step may enumerate."""

EXPM_TOL = 1e-14

MAX_ORACLE_DIM = 128

MARGINAL_BAND = 1e-9
"""``|alpha^2 + beta^2 - 1|`` at or below this is reported as marginal."""

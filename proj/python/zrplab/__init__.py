"""Exact constructions and checks for multispecies zero range processes.

Rational inputs are Fractions, ints or "p/q" strings; outputs are Fractions.
"""

from ._zrplab import (  # noqa: F401
    G_k_exact_n2,
    Operator,
    PoleError,
    build_R,
    gillespie,
    hamiltonian,
    mixed_scriptT,
    mpf_trace,
    mpf_trace_exact_n2,
    periodic_scriptT,
    qbinom,
    qpoch,
    r3d,
    run_acceptance,
    script_S,
    stationary,
    verify_stu,
)

__all__ = [name for name in dir() if not name.startswith("_")]

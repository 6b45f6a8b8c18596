"""Solvers for the five-term equation, its special cases and the eta-Hermitian variant."""

from .basic import (
    AxybResult,
    FourTermResult,
    PairResult,
    solve_axyb,
    solve_four_term,
    solve_pair_system,
)
from .eta import EtaResult, solve_eta
from .main import (
    BRANCHES,
    MainDerived,
    SolveReport,
    assess_main,
    derive_main_quantities,
    solve_main,
    solve_three_term,
    three_term_instance,
)
from .params import (
    FreeParameters,
    axyb_parameter_shapes,
    four_term_parameter_shapes,
    main_parameter_shapes,
    pair_parameter_shapes,
)

__all__ = [
    "AxybResult", "BRANCHES", "EtaResult", "FourTermResult", "FreeParameters", "MainDerived",
    "PairResult", "SolveReport", "assess_main", "axyb_parameter_shapes", "derive_main_quantities",
    "four_term_parameter_shapes", "main_parameter_shapes", "pair_parameter_shapes", "solve_axyb",
    "solve_eta", "solve_four_term", "solve_main", "solve_pair_system", "solve_three_term",
    "three_term_instance",
]

"""Boundary expressions, Coxeter nerves, graphs of groups and dense-amalgam
approximations, backed by the dama C++ core."""

from ._core import (
    InputError,
    PreconditionError,
    __version__,
    approx_check,
    ball_sizes,
    characterize,
    coxeter_boundary,
    coxeter_classify,
    gog_boundary,
    is_finite_type,
    is_infinity_large,
    is_non_elementary,
    is_normal_form,
    normalize,
    terminal_factors,
)

__all__ = [
    "InputError",
    "PreconditionError",
    "__version__",
    "approx_check",
    "ball_sizes",
    "characterize",
    "coxeter_boundary",
    "coxeter_classify",
    "gog_boundary",
    "is_finite_type",
    "is_infinity_large",
    "is_non_elementary",
    "is_normal_form",
    "normalize",
    "terminal_factors",
]

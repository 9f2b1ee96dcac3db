"""quivstat: exact computations with static module subcategories.

Representations of bound quivers over Q or F_p, endomorphism-ring analysis,
minimal right approximations and static/adstatic module tests, kernel-cokernel
closures, and the tame/wild classification harnesses, all in exact arithmetic.
"""

from .fields import F2, QQ, PrimeField, Rationals, parse_field
from .linalg import Matrix, char_poly, psd_verdict, rank_kernel_image, solve_linear

__all__ = [
    "F2",
    "QQ",
    "PrimeField",
    "Rationals",
    "parse_field",
    "Matrix",
    "char_poly",
    "psd_verdict",
    "rank_kernel_image",
    "solve_linear",
]

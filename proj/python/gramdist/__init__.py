"""String distances computed on grammar-compressed inputs.

Every function taking strings also accepts ``Slp`` objects.
"""

from ._gramdist import (
    GramdistError,
    Slp,
    bounded_k_edit,
    center_edit_approx,
    compress,
    deletion_distance_bounded,
    edit_distance,
    edit_distance_approx,
    hamming,
    hamming_multi,
    lcs_approx,
    median_edit_approx,
    shift_bracket,
    shift_match,
)

__all__ = [
    "GramdistError",
    "Slp",
    "bounded_k_edit",
    "center_edit_approx",
    "compress",
    "deletion_distance_bounded",
    "edit_distance",
    "edit_distance_approx",
    "hamming",
    "hamming_multi",
    "lcs_approx",
    "median_edit_approx",
    "shift_bracket",
    "shift_match",
]

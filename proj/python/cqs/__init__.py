"""Cyclic quotient surface singularities and their deformation components."""

from ._core import (
    CqsError,
    classify,
    correspondence_table,
    discrepancies,
    dual,
    flip,
    hj_eval,
    hj_expand,
    homology_matrix,
    incidence_matrices,
    invariants,
    is_p_resolution,
    k_of_x,
    kollar_check,
    milnor_number,
    p_resolutions,
    phi_ik,
    phi_pi,
    t_recognize,
    verify_c_equals_sum_a,
    wahl_recognize,
    wpqr_families,
    zero_fractions,
)

__all__ = [
    "CqsError",
    "classify",
    "correspondence_table",
    "discrepancies",
    "dual",
    "flip",
    "hj_eval",
    "hj_expand",
    "homology_matrix",
    "incidence_matrices",
    "invariants",
    "is_p_resolution",
    "k_of_x",
    "kollar_check",
    "milnor_number",
    "p_resolutions",
    "phi_ik",
    "phi_pi",
    "t_recognize",
    "verify_c_equals_sum_a",
    "wahl_recognize",
    "wpqr_families",
    "zero_fractions",
]

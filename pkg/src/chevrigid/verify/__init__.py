"""Mechanical checks of the rigidity argument: splitting, normalisation, rigidity systems, generation."""

from .generation import ClosureResult, closure, generate_matrix_units, scripted_a2, subring_equality_check
from .golden import find_sign_normalization, golden_mismatches, reference_algebra
from .involution import SplitDecomposition, congruent_mod_radical, rank_match_residue, split_involution
from .rigidity import AffineForm, LinearSystem27, build_con_system, recover_torus, verify_torus_rigidity
from .suite import RunConfig, run_suite
from .weyl_normal import cartan_block, normalize_weyl_images

__all__ = [
    "AffineForm", "ClosureResult", "LinearSystem27", "RunConfig", "SplitDecomposition", "build_con_system",
    "cartan_block", "closure", "congruent_mod_radical", "find_sign_normalization", "generate_matrix_units",
    "golden_mismatches", "normalize_weyl_images", "rank_match_residue", "recover_torus", "reference_algebra",
    "run_suite", "scripted_a2", "split_involution", "subring_equality_check", "verify_torus_rigidity",
]

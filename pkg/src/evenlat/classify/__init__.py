"""Claim manifest, Table 1 data and the verification harness."""

from .harness import (CHECKERS, Claim, ClaimResult, Context, Report, THEOREMS, claims_for,
                      load_complete_list, load_manifest, load_table1, run_claim, verify_all,
                      verify_complete_list, verify_norm2_corollary, verify_table1, verify_theorem)

__all__ = [
    "CHECKERS", "Claim", "ClaimResult", "Context", "Report", "THEOREMS", "claims_for",
    "load_complete_list", "load_manifest", "load_table1", "run_claim", "verify_all",
    "verify_complete_list", "verify_norm2_corollary", "verify_table1", "verify_theorem",
]

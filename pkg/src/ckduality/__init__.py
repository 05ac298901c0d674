"""K-theoretic invariants and duality checks for Cuntz-Krieger algebras and their Toeplitz extensions."""

from .ckalg import CKMatrix, invariants, validate
from .classify import ck_iso, corollary_consistency, ext_w_pointed_iso, toeplitz_iso, toeplitz_triple
from .diagrams import build_6termA, build_ladder_xi, build_sixtermA1, strong_duality_report, verify
from .fgab import Decision, FgAbGroup, GroupHom, MarkedGroup, Verdict, cokernel, pointed_iso_exists
from .intmat import IntMatrix, hnf_rows, kernel_basis, snf, solve_in_column_lattice

__version__ = "0.1.0"

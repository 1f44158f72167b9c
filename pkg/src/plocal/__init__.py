"""Finite localities over ambient permutation groups.

Builds localities L_delta(G) inside a finite permutation group, computes the
subgroup collections and partial-normal-subgroup machinery (Sigma_T, N-perp,
F*(L), del/delta object sets, components, E(L)), and machine-verifies the
normal-structure, component-product, and balance theorems at desk scale.
"""

__version__ = "0.1.0"

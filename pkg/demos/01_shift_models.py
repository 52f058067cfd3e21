"""
Truncated shift models and their co-invariant subspaces
=======================================================

Every factor the library works with is a finite matrix model: a truncated
weighted shift (Hardy, Bergman, Dirichlet, or a one-parameter weighted
Bergman family) or multiplication by z on a polynomial quotient ring.
This walk-through builds each one and inspects its basic structure.
"""

import numpy as np

from shiftlab import (
    SpaceKind,
    ideal_subspace,
    kernel_vector,
    make_quotient,
    make_shift,
    prefix_coinvariant,
    shift_weights,
)

# --- weight sequences -------------------------------------------------------
# Hardy weights are constant 1; Bergman weights decay, Dirichlet weights grow.
m = 6
for kind in (SpaceKind.hardy(), SpaceKind.bergman(), SpaceKind.dirichlet()):
    print(f"{kind.label():<10} weights:", np.round(shift_weights(kind, m), 4))

# The weighted Bergman family interpolates: order 1 is Hardy, order 2 is
# Bergman, and fractional orders are allowed.
for alpha in (1, 2, 2.5):
    w = shift_weights(SpaceKind.weighted_bergman(alpha), m)
    print(f"weighted_bergman({alpha}) weights:", np.round(w, 4))

# --- the shift operator itself ----------------------------------------------
model = make_shift(SpaceKind.bergman(), 4)
print("\nBergman shift on C^4 (single subdiagonal, nilpotent):")
print(np.round(model.operator.real, 4))
print("T^4 = 0:", not np.linalg.matrix_power(model.operator, 4).any())

# --- co-invariant prefixes ----------------------------------------------------
# The span of e_0 .. e_{k-1} is invariant under T^H: it models the quotient
# by the invariant tail span(e_k .. e_{m-1}).
Q = prefix_coinvariant(model, 2)
leak = np.linalg.norm((np.eye(4) - Q.projector()) @ model.operator.conj().T @ Q.projector())
print(f"\nprefix k=2: dim Q = {Q.dim}, adjoint leakage = {leak:.1e}")

# --- kernel vectors -----------------------------------------------------------
# Truncations of reproducing kernels are near-eigenvectors of T^H; the defect
# measures how much the truncation cut off.
v, defect = kernel_vector(model, 0.4 - 0.2j)
print(f"kernel vector at 0.4-0.2i: leading coeffs {np.round(v[:3], 4)}, defect {defect:.2e}")

# --- quotient models ----------------------------------------------------------
# Multiplication by z on C[z]/(p) is a companion matrix; the roots of p are
# its spectrum.  Ideals (q)/(p) give exactly invariant subspaces.
qm = make_quotient([0.3, -0.5, (0.2j, 1)])
print(f"\nquotient model {qm.label()}: m = {qm.m}")
print("eigenvalues:", np.round(np.sort_complex(np.linalg.eigvals(qm.operator)), 6))
S = ideal_subspace(qm, [0.3])
print(f"ideal (z - 0.3): dim = {S.dim}")
v, defect = kernel_vector(qm, 0.3)
print(f"kernel vector at the root 0.3 has defect {defect:.1e} (exact eigenvector)")

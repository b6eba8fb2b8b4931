# %% [markdown]
# A 2x2 quaternion matrix, diag(3+i, k), taken through every invariant the
# library computes. Each number here can be checked by hand.

# %%
import numpy as np

from quatspec.invariants import fredholm_poly, standard_eigenvalues, trace_all, verify_identities
from quatspec.qmatrix import QMatrix, companion
from quatspec.quaternion import Quaternion

A = QMatrix.from_entries([[Quaternion(3, 1), Quaternion(0)], [Quaternion(0), Quaternion(0, 0, 0, 1)]])
print(A)

# %% The complex companion matrix is 4x4; its spectrum is closed under conjugation.
chi = companion(A)
print(np.round(chi, 12))
print("companion spectrum:", np.round(np.linalg.eigvals(chi), 12))

# %% Higher-order traces are the elementary symmetric functions of that spectrum.
print("T_0..T_4:", trace_all(A))

# %% det(I - zA) as a polynomial in z, lowest degree first.
print("det poly:", fredholm_poly(A).coeffs)

# %% One representative per conjugate pair.
print("standard eigenvalues:", standard_eigenvalues(A))

# %% The identity residuals all vanish to rounding.
report = verify_identities(A)
for name, value in report.residuals.items():
    print(f"{name}: {value:.2e}")

# %% [markdown]
# Singular values, Schatten norms, and how the standard eigenvalues sit
# underneath them.

# %%
import numpy as np

from quatspec.invariants import standard_eigenvalues
from quatspec.opmodel import lp_norm, schatten_norm, singular_values, trace_norm, weyl_check
from quatspec.qmatrix import q_matmul
from quatspec.sampling import random_qmatrix, trial_rng

rng = trial_rng(11)
A = random_qmatrix(rng, 5)
print("singular values:", np.round(singular_values(A), 6))
print("|standard eigenvalues|:", np.round([abs(l) for l in standard_eigenvalues(A)], 6))

# %% l^p norm of the eigenvalues never exceeds the Schatten-p norm.
for p in (0.5, 1.0, 1.5, 2.0, 4.0):
    lams = standard_eigenvalues(A)
    print(f"p = {p:3}: eig {lp_norm(np.abs(lams), p):9.5f}   schatten {schatten_norm(A, p):9.5f}")
print(weyl_check(A, 1.0))

# %% Trace norm of a product against the product of trace norms.
ratios = []
for t in range(200):
    r = trial_rng(12, t)
    X, Y = random_qmatrix(r, 4), random_qmatrix(r, 4)
    ratios.append(trace_norm(q_matmul(X, Y)) / (trace_norm(X) * trace_norm(Y)))
print(f"||XY||_1 / (||X||_1 ||Y||_1): max {max(ratios):.4f}, median {np.median(ratios):.4f}")

# %% [markdown]
# Determinants of infinite diagonal and kernel models, computed on
# truncations N = 2, 4, 8, ... until successive values agree.

# %%
from quatspec.errors import NotConvergedError
from quatspec.opmodel import DiagonalModel, EntrySpec, KernelModel, SequenceSpec, fredholm_det_limit, trace_limit

geometric = DiagonalModel(SequenceSpec.geometric(0.5))
limit = fredholm_det_limit(geometric, 1.0, tol=1e-13)
print(limit.table.to_csv())
print("closed form:", limit.closed_form)
print("trace limit:", trace_limit(geometric, 1, tol=1e-13).value)

# %% A kernel model: entries mu_m d_mn nu_n with seeded bounded d.
mu = SequenceSpec.power(2.5)
kernel = KernelModel(mu, mu, EntrySpec("seeded_bounded", seed=1), p=0.75)
natural = fredholm_det_limit(kernel, 1.0, tol=1e-9)
swapped = fredholm_det_limit(kernel, 1.0, tol=1e-9, enumeration="offset_swap")
print(natural.table.to_csv())
print(f"natural {natural.value:.12f}  reordered {swapped.value:.12f}")

# %% Eigenvalues 1/k are not summable, and the table shows the growth.
try:
    fredholm_det_limit(DiagonalModel(SequenceSpec.power(1.0)), 1.0, n_max=512)
except NotConvergedError as exc:
    print(exc)
    print(exc.table.to_csv())

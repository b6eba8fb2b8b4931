# %% [markdown]
# The determinant of I + zT is an entire function of z. Its order can be read
# off how fast the Taylor coefficients fall.

# %%
import math

import numpy as np

from quatspec.opmodel import (
    EntrySpec,
    KernelModel,
    SequenceSpec,
    coefficient_decay_check,
    det_coefficients,
    order_bound,
    order_estimate,
)

exp_coeffs = np.array([1 / math.factorial(n) for n in range(41)])
print("exp(z):", round(order_estimate(exp_coeffs), 3))
print("exp(z), envelope:", round(order_estimate(exp_coeffs, method="envelope"), 3))

# %% Kernel determinants: the estimate stays under the predicted order.
for s in (1.6, 2.0, 3.0):
    K = KernelModel(SequenceSpec.power(s), SequenceSpec.power(s), EntrySpec("seeded_bounded", seed=0), p=2 / 3)
    c = det_coefficients(K, 32)
    print(f"s = {s}: order {order_estimate(c):.3f}, bound {order_bound(K):.3f}, "
          f"decay at q=0.8 {coefficient_decay_check(c, K.p, 0.8)}")

# %% Magnitudes of the coefficients, every eighth one.
print(np.abs(c[::8]))

"""A bound-entangled Gaussian state of 2 x 2 modes.

The state below has a positive partial transpose, so the PPT test cannot see
its entanglement. The witness program finds a linear witness that does.
"""

import numpy as np

from cvwitness import fully_wit, is_valid_covariance, partial_transpose, ww_state

gamma = ww_state()
print("valid covariance:", is_valid_covariance(gamma))
print("partial transpose still valid (PPT):", is_valid_covariance(partial_transpose(gamma, [2, 3])))

res = fully_wit(gamma)
print(f"\nc = {res.c:.4f}   (negative: entangled across the 2|2 split)")
print(f"duality gap {res.gap:.1e} after {res.iterations} iterations")
print("witness conditions:", res.conditions)

np.set_printoptions(precision=4, suppress=True)
print("\nwitness Z:\n", res.Z)

"""Curved witnesses detect whole families that a fixed linear witness misses.

Squeezing x and anti-squeezing p locally leaves the product of the two
variance sums unchanged, while the linear witness value grows without bound.
"""

import numpy as np

from cvwitness import detects_product, duan_witness, product_value, scale_xp, two_mode_squeezed

Z = duan_witness(1.0)
gamma = two_mode_squeezed(0.5).entries
print(f"product value {product_value(Z, gamma):.6f} = e^-2 / 4 = {np.exp(-2) / 4:.6f}")
print("\n     a    linear Tr[Z g]   product   linear detects   product detects")
for k in range(-4, 5):
    a = 2.0**k
    g = scale_xp(gamma, a)
    lin = np.sum(Z * g)
    print(f"{a:7.4g}  {lin:14.4f}  {product_value(Z, g):9.4f}  {str(lin < 1):>15}  {str(detects_product(Z, g, [1, 1])):>16}")

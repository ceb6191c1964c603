"""
Nonuniform transform by truncated SVD
=====================================

The reference interval [0, 1/2) of angles has a numerically low-rank
exponential matrix once it is taken to the inverse-QFT domain. A few left
singular vectors serve every other interval after a shift.
"""

import numpy as np

from nuqft.engine import (
    NonuniformAngleSet,
    direct_nudft,
    interp_nudft_baseline,
    qsvd_nudft,
    reference_basis,
    relative_error,
)

N, K = 64, 128
rng = np.random.default_rng(7)
angles = NonuniformAngleSet.random(N, K, rng)
x = rng.normal(size=N) + 1j * rng.normal(size=N)
exact = direct_nudft(x, angles)

# the singular values fall off by many orders within a dozen indices
basis = reference_basis(N, 2 * N, rank=32)
print("sigma / sigma_1:", np.array2string(basis.singular_values[:14] / basis.singular_values[0], precision=1))

# error against the direct sum, next to Lagrange interpolation of the
# uniform coefficients with the same number of terms
for L in (2, 4, 8, 12, 16):
    e_svd = relative_error(qsvd_nudft(x, angles, basis.truncate(L)), exact)
    e_lag = relative_error(interp_nudft_baseline(x, angles, L), exact)
    print(f"L={L:2d}  svd {e_svd:.2e}  lagrange {e_lag:.2e}")

# past the numerical rank the extra columns only carry rounding noise, so
# the error stays at a floor of a few 1e-15 instead of decreasing further

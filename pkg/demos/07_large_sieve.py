import numpy as np

from bdhvar import large_sieve_check

# The large sieve bounds sum_{q<=Q} (q/phi q) sum*_chi |sum a_n chi(n)|^2
# by (N + Q^2) ||a||^2 over arbitrary coefficients.  Random Gaussian
# coefficients typically sit far below the bound; adversarial flat
# coefficients at N = 1 reach ratio 1/2.

rng = np.random.default_rng(42)
worst = (0.0, None)
for trial in range(200):
    n = int(rng.integers(1, 201))
    q = int(rng.integers(1, 201))
    m = int(rng.integers(0, 201))
    coeffs = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    res = large_sieve_check(m, n, q, coeffs)
    if res.ratio > worst[0]:
        worst = (res.ratio, (n, q, m))
print(f"200 random trials, N,Q <= 200: worst ratio {worst[0]:.4f} "
      f"at (N, Q, M) = {worst[1]}")

res = large_sieve_check(0, 1, 1, np.ones(1, dtype=complex))
print(f"single coefficient, Q = 1: ratio {res.ratio:.3f}")

# concentrating mass on one residue class pushes the ratio up
coeffs = np.zeros(120, dtype=complex)
coeffs[::7] = 1.0
res = large_sieve_check(0, 120, 35, coeffs)
print(f"mass on 1 mod 7, N = 120, Q = 35: ratio {res.ratio:.4f}")

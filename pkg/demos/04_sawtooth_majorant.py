"""Trigonometric approximation of the sawtooth psi(x) = {x} - 1/2.

The degree-H polynomial sum a(h) e(hx) approximates psi with an error
dominated pointwise by a nonnegative Fejer-type majorant whose coefficient
sum is exactly 1/2 -- so the worst case sits at the integers, where psi
jumps.  Doubling H roughly halves the typical error away from the jump.
"""

import numpy as np

from bdhvar import saw_psi, vaaler_eval, vaaler_expansion

exp = vaaler_expansion(3)
print("H = 3 coefficients:")
for h, ah in enumerate(exp.a, start=1):
    print(f"  a({h}) = {ah:.6f}   |a|*h = {abs(ah) * h:.4f}")
print(f"  b = {np.round(exp.b, 6).tolist()}  (sum with mirrors: "
      f"{exp.b[0] + 2 * exp.b[1:].sum():.3f})")

grid = np.linspace(-1.0, 2.0, 20001)
psi = saw_psi(grid)
print(f"\n{'H':>4} {'max |err|':>10} {'median |err|':>13} {'violations':>11}")
for H in (1, 5, 20, 100, 400):
    e = vaaler_expansion(H)
    approx, majorant = vaaler_eval(grid, e)
    err = np.abs(psi - approx)
    bad = int(np.sum(err > majorant + 1e-12))
    print(f"{H:>4} {err.max():>10.5f} {np.median(err):>13.6f} {bad:>11}")

# near a jump the error cannot shrink (psi is discontinuous), but the
# majorant knows: it peaks at exactly 1/2 on the integers
e = vaaler_expansion(50)
for x in (0.0, 0.01, 0.1, 0.5):
    a, m = vaaler_eval(x, e)
    print(f"x = {x:4}: approx {a:+.4f}, psi {saw_psi(x):+.4f}, majorant {m:.4f}")

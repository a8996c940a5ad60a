"""Lebesgue and Grand Lebesgue norms on a small atomic probability space.

Run with ``python demos/01_gls_norms.py``.
"""

import numpy as np

from glspace import GridFunction, MeasureSpace, gls_norm, lp_norm, natural_from_function, power, tail_function

# A four-atom probability space and a function with one large value on a light atom
X = MeasureSpace(np.array([0.5, 0.25, 0.2, 0.05]), label="X")
f = GridFunction(X, np.array([1.0, 2.0, -3.0, 40.0]), label="f")

# ||f||_p climbs from the mean of |f| towards max |f| = 40
for p in (1, 2, 4, 8, 32, 128, np.inf):
    print(f"||f||_{p:<4} = {lp_norm(f, p):10.5f}")

# The natural generating function psi(p) = ||f||_p makes the norm exactly one
print("\nnatural psi:", gls_norm(f, natural_from_function(f)))

# A power-law psi(p) = p**0.5 weighs large p less, so the sup settles on a finite p
psi = power(0.5)
print("psi(p) = sqrt(p):", gls_norm(f, psi))

# Tail function T(t) = mu{|f| >= t}
for t in (1.5, 5.0, 50.0):
    print(f"T({t}) = {tail_function(f, t):.3f}")

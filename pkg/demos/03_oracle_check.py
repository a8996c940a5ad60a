"""Compare the refined W(r) table against a brute-force dense scan.

The optimizer samples a log grid and zooms; the oracle evaluates 1e5 points
and three zoom levels of 1e4. Run with ``python demos/03_oracle_check.py``.
"""

import numpy as np

from glspace import nemytskii_table, power
from glspace.generating import constant
from glspace.oracle import dense_infimum_1d

psi, nu, beta = power(0.5), constant(1.0), 2.0
r_grid = np.geomspace(1.1, 20.0, 6)
table = nemytskii_table(psi, nu, beta, r_grid)

print(f"{'r':>8} {'table':>14} {'oracle':>14} {'rel diff':>10}")
for r, w in zip(table.r, table.value):
    dense, _ = dense_infimum_1d(lambda p: nu(p * r / (p - r)) * psi(beta * p) ** beta, r)
    print(f"{r:8.3f} {w:14.9f} {dense:14.9f} {abs(w - dense) / dense:10.1e}")

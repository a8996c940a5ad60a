"""Bounds for the Nemytskii, Urysohn and Hammerstein operators on the built-in fixtures.

Each fixture is a case where the bound is attained, so lhs and rhs should agree.
Run with ``python demos/02_operator_bounds.py``.
"""

from glspace.harness import fixture, random_scenario, verify_hammerstein, verify_nemytskii, verify_urysohn

rep = verify_nemytskii(fixture("example-2.1"))
print(f"Nemytskii, natural psi:   lhs {rep.lhs_gls:.12f}  rhs {rep.rhs_gls:.12f}")

rep = verify_urysohn(fixture("remark-3.1"))
print(f"Urysohn, constant g = 2:  lhs {rep.lhs_gls:.12f}  rhs {rep.rhs_gls:.12f}")

for mode in ("raw", "gls-majorant"):
    rep = verify_hammerstein(fixture("all-ones-4.1"), mode)
    print(f"Hammerstein ({mode}): lhs {rep.lhs_gls:.12f}  rhs 1")

# A random scenario whose maps meet the domination conditions with equality;
# the margin is rhs - lhs on the r-grid and must stay nonnegative
scen = random_scenario(3)
for rep in (verify_nemytskii(scen), verify_urysohn(scen), verify_hammerstein(scen)):
    print(f"{scen.name} {rep.theorem} {rep.mode:>12}: min margin {rep.min_margin:+.3e}, pass {rep.all_pass}")

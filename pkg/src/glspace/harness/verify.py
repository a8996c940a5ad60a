"""Verification drives for the Nemytskii, Urysohn and Hammerstein bounds.

Each drive compares two things:

* per r on the scenario's r-grid, the Lebesgue norm ``||f||_r`` of the
  operator output against ``rhs * B(r)`` where B is the tabulated bound;
* the Grand Lebesgue norm of f against B (re-solved at every exponent the
  supremum visits) against the right-hand constant of the theorem.

Computed infima are approximations from above, so a negative margin beyond
the tolerance can only come from the left-hand side or from a broken bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .. import bounds as B
from .._search import P_MAX
from ..generating import from_config, from_config2
from ..norms import PGrid, QRGrid, ess_sup, gls_sup, gls_sup_2d, lp_norm
from ..operators import (
    FactorizationWitness,
    check_factorization,
    default_z_grid,
    hammerstein_apply,
    nemytskii_apply,
    urysohn_apply,
)
from .scenario import Scenario

MODES = ("raw", "gls-majorant")
#: grid for the supremum of ||f||_r / B(r); B is re-solved at every sample
LHS_GRID_1D = PGrid(n=200)
LHS_GRID_2D = PGrid(n=40, xtol=1e-5)
#: the unit-mass slack allowed when checking nu(Y) <= 1
MASS_TOL = 1e-12


@dataclass
class BoundRow:
    r: float | str
    lhs_norm: float
    bound_value: float
    margin: float
    arg_p: float = math.nan
    arg_t: float | None = None
    finite: bool = True


@dataclass
class BoundReport:
    """Per-r rows plus the Grand Lebesgue comparison (row with ``r == "sup"``)."""

    scenario: str
    theorem: str
    mode: str
    rows: list = field(default_factory=list)
    lhs_gls: float = math.nan
    rhs_gls: float = math.nan
    scale: float = 1.0
    allowance: float = 0.0
    precondition_ok: bool = True
    notes: list = field(default_factory=list)

    @property
    def min_margin(self) -> float:
        vals = [row.margin for row in self.rows if row.finite]
        return min(vals) if vals else math.inf

    @property
    def all_pass(self) -> bool:
        return self.min_margin >= -self.allowance

    @property
    def gls_gap(self) -> float:
        """Relative gap ``|rhs - lhs| / rhs`` of the Grand Lebesgue comparison."""
        if not self.rhs_gls:
            return math.inf if self.lhs_gls else 0.0
        return abs(self.rhs_gls - self.lhs_gls) / abs(self.rhs_gls)

    def summary(self) -> dict:
        return {
            "scenario": self.scenario,
            "theorem": self.theorem,
            "mode": self.mode,
            "lhs_gls": self.lhs_gls,
            "rhs_gls": self.rhs_gls,
            "min_margin": self.min_margin,
            "all_pass": self.all_pass,
            "precondition_ok": self.precondition_ok,
        }


def _g_grid(beta):
    # the bounds evaluate psi at beta * p for p up to the search cap
    return PGrid(n=400, p_max=beta * P_MAX)


def _q_grid():
    # conjugate exponents q, s run far beyond the p cap as p -> r+
    return PGrid(n=400, p_max=B.Q_MAX)


def _finish(report: BoundReport, f, table, rhs, live_bound, lhs_grid):
    """Fill per-r rows and the sup row; set scale and allowance."""
    r_lhs = lp_norm(f, table.r)
    for i, r in enumerate(table.r):
        bound = rhs * table.value[i]
        finite = bool(np.isfinite(bound))
        t = None if table.arg_t is None else float(table.arg_t[i])
        report.rows.append(
            BoundRow(float(r), float(r_lhs[i]), float(bound), float(bound - r_lhs[i]) if finite else math.inf,
                     float(table.arg_p[i]), t, finite)
        )
    report.rhs_gls = float(rhs)
    if ess_sup(f) == 0:
        report.lhs_gls, arg = 0.0, math.nan
    else:
        try:
            res = gls_sup(f, live_bound(), lhs_grid)
            report.lhs_gls, arg = float(res.value), float(res.arg)
        except B.NowhereFiniteError as exc:
            report.precondition_ok = False
            report.notes.append(str(exc))
            report.lhs_gls, arg = math.inf, math.nan
    finite = math.isfinite(report.lhs_gls)
    report.rows.append(
        BoundRow("sup", report.lhs_gls, float(rhs), float(rhs - report.lhs_gls) if finite else math.inf,
                 arg, None, finite)
    )
    bounded = [abs(row.bound_value) for row in report.rows if row.finite]
    report.scale = max([1.0, *bounded])
    return report


def _allowance(report, scen):
    report.allowance = scen.tolerance.allowance(report.scale)
    return report


def _witness_note(report, w, what):
    if not w.certified:
        report.precondition_ok = False
        report.notes.append(f"{what} domination fails (worst margin {w.worst_margin:.3g})")


def _mass_note(report, space):
    if space.total_mass > 1 + MASS_TOL:
        report.precondition_ok = False
        report.notes.append(f"measure of {space.label or 'Y'} is {space.total_mass:.6g} > 1")


def verify_nemytskii(scen: Scenario) -> BoundReport:
    """``||N[g]||_{G W} <= ||phi||_{G nu} ||g||_{G psi}**beta``."""
    sec, inst, beta = scen.section("nemytskii"), scen.instance, scen.beta_for("nemytskii")
    g, phi, n = inst.function(sec["g"]), inst.function(sec["phi"]), inst.map(sec["n"])
    psi = from_config(sec.get("psi", "constant:1"), inst.resolve, default_of=g)
    nu = from_config(sec.get("nu", "constant:1"), inst.resolve, default_of=phi)
    report = BoundReport(scen.name, "2.1", "raw")
    _witness_note(report, check_factorization(n, FactorizationWitness(beta, phi=phi, z_grid=default_z_grid(g))), "n")

    f = nemytskii_apply(n, g)
    table = B.nemytskii_table(psi, nu, beta, scen.r_grid)
    rhs = gls_sup(phi, nu, _q_grid()).value * gls_sup(g, psi, _g_grid(beta)).value ** beta
    rows = lambda r, P: B._w_rows(psi, nu, beta, r, P)
    window = B.w_window(psi, nu, beta)
    live = lambda: B.live_generating(table, lambda r: B._solve_1d(rows, r, B.DEFAULT_TOL, 128, window)[0], "W")
    return _allowance(_finish(report, f, table, rhs, live, LHS_GRID_1D), scen)


def verify_urysohn(scen: Scenario) -> BoundReport:
    """``||U[g]||_{G theta} <= ||g||_{G psi}**beta``."""
    sec, inst, beta = scen.section("urysohn"), scen.instance, scen.beta_for("urysohn")
    g, u, u0 = inst.function(sec["g"]), inst.map(sec["u"]), inst.kernel(sec["u0"])
    psi = from_config(sec.get("psi", "constant:1"), inst.resolve, default_of=g)
    report = BoundReport(scen.name, "3.1", "raw")
    _witness_note(report, check_factorization(u, FactorizationWitness(beta, u0=u0, z_grid=default_z_grid(g))), "u")
    _mass_note(report, g.space)

    f = urysohn_apply(u, g, u0.space_x)
    table = B.urysohn_table(psi, u0, beta, scen.r_grid)
    rhs = gls_sup(g, psi, _g_grid(beta)).value ** beta
    kap = B.mixed_evaluator(u0)
    rows = lambda r, P: B._theta_rows(psi, kap, beta, r, P)
    window = B.theta_window(psi, beta)
    live = lambda: B.live_generating(table, lambda r: B._solve_1d(rows, r, B.DEFAULT_TOL, 128, window)[0], "theta")
    return _allowance(_finish(report, f, table, rhs, live, LHS_GRID_1D), scen)


def hammerstein_factors(scen: Scenario, mode: str = "raw"):
    """Upsilon factors for a scenario in raw or GLS-majorant mode."""
    sec, inst, beta = scen.section("hammerstein"), scen.instance, scen.beta_for("hammerstein")
    g, h, phi = inst.function(sec["g"]), inst.kernel(sec["h"]), inst.function(sec["phi"])
    if mode == "raw":
        return B.raw_factors(h, phi, g, beta)
    if mode != "gls-majorant":
        raise ValueError(f"unknown mode {mode!r}")
    psi = from_config(sec.get("psi", "constant:1"), inst.resolve, default_of=g)
    nu = from_config(sec.get("nu", "constant:1"), inst.resolve, default_of=phi)
    tau = from_config2(sec.get("tau", "constant:1"), inst.resolve, default_of=h)
    h_gls = gls_sup_2d(h, tau, QRGrid(q_max=B.Q_MAX)).value
    phi_gls = gls_sup(phi, nu, _q_grid()).value
    g_gls = gls_sup(g, psi, _g_grid(beta)).value
    return B.majorant_factors(tau, nu, psi, beta, h_gls, phi_gls, g_gls)


def verify_hammerstein(scen: Scenario, mode: str = "raw") -> BoundReport:
    """``||H[g]||_{G Delta} <= 1`` with Delta from raw norms or their GLS majorants."""
    sec, inst, beta = scen.section("hammerstein"), scen.instance, scen.beta_for("hammerstein")
    g, h, n, phi = inst.function(sec["g"]), inst.kernel(sec["h"]), inst.map(sec["n"]), inst.function(sec["phi"])
    report = BoundReport(scen.name, "4.1", mode)
    _witness_note(report, check_factorization(n, FactorizationWitness(beta, phi=phi, z_grid=default_z_grid(g))), "n")
    _mass_note(report, g.space)

    f = hammerstein_apply(h, n, g)
    factors = hammerstein_factors(scen, mode)
    table = B.hammerstein_table(factors, scen.r_grid)
    live = lambda: B.live_generating(table, lambda r: B._nested_minimize(factors, r)[0], "Delta")
    return _allowance(_finish(report, f, table, 1.0, live, LHS_GRID_2D), scen)


def verify(scen: Scenario, theorem: str, modes=MODES) -> list[BoundReport]:
    if theorem == "2.1":
        return [verify_nemytskii(scen)]
    if theorem == "3.1":
        return [verify_urysohn(scen)]
    if theorem == "4.1":
        return [verify_hammerstein(scen, m) for m in modes]
    raise ValueError(f"unknown theorem {theorem!r}")

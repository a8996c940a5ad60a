"""Scenarios bind the symbols of the three theorems to labelled instance data.

A scenario document looks like::

    name: demo
    instance: {spaces: [...], functions: [...], kernels: [...], maps: [...]}
    beta: 2
    r_grid: "geom:1.05:32:12"
    tolerance: {abs: 1e-12, rel: 1e-9}
    nemytskii:   {g: g, phi: phi, n: n, psi: "natural:g", nu: "constant:1"}
    urysohn:     {g: gy, u: u, u0: u0, psi: "constant:1"}
    hammerstein: {g: gy, h: h, n: ny, phi: phiy, psi: ..., nu: ..., tau: ...}

``instance`` may also be a path (resolved relative to the scenario file).
Sections may override ``beta``. Generating-function specs follow
:func:`glspace.generating.parse_spec`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from ..bounds import DEFAULT_R_GRID, parse_r_grid
from ..instance import Instance, load_instance, read_document

THEOREMS = {"2.1": "nemytskii", "3.1": "urysohn", "4.1": "hammerstein"}
ROLES = {
    "nemytskii": ("g", "phi", "n"),
    "urysohn": ("g", "u", "u0"),
    "hammerstein": ("g", "h", "n", "phi"),
}
#: flag that lets Example 2.1 run with 0 < beta < 1
EXAMPLE_FLAG = "example-2-1"


@dataclass(frozen=True)
class Tolerance:
    """Pass iff ``margin >= -(abs + rel * scale)``."""

    abs: float = 1e-12
    rel: float = 1e-9

    def allowance(self, scale: float) -> float:
        return self.abs + self.rel * scale


@dataclass
class Scenario:
    name: str
    instance: Instance
    sections: dict
    beta: float = 1.0
    r_grid: object = DEFAULT_R_GRID
    tolerance: Tolerance = field(default_factory=Tolerance)
    seed: int | None = None
    flags: tuple = ()

    def section(self, kind: str) -> dict:
        return self.sections.get(kind) or {}

    def beta_for(self, kind: str) -> float:
        return float(self.section(kind).get("beta", self.beta))

    def has(self, kind: str) -> bool:
        return kind in self.sections

    def problems(self) -> list[str]:
        """Unresolvable labels and disallowed beta values."""
        out = []
        for kind, sec in self.sections.items():
            if kind not in ROLES:
                out.append(f"unknown section {kind!r}")
                continue
            for role in ROLES[kind]:
                label = sec.get(role)
                if label is None:
                    out.append(f"{kind}: missing role {role!r}")
                elif label not in self.instance.functions and label not in self.instance.kernels and label not in self.instance.maps:
                    out.append(f"{kind}: role {role!r} names unknown label {label!r}")
            beta = self.beta_for(kind)
            if not beta > 0 or (beta < 1 and EXAMPLE_FLAG not in self.flags):
                out.append(f"{kind}: beta = {beta:g} not allowed (need beta >= 1)")
        try:
            parse_r_grid(self.r_grid)
        except ValueError as exc:
            out.append(f"r_grid: {exc}")
        return out


def scenario_from_payload(doc: dict, base: Path | None = None) -> Scenario:
    inst_src = doc.get("instance")
    if isinstance(inst_src, str):
        path = Path(inst_src)
        if base is not None and not path.is_absolute():
            path = base / path
        inst_src = str(path)
    tol = doc.get("tolerance") or {}
    sections = {k: dict(doc[k]) for k in ROLES if doc.get(k)}
    scen = Scenario(
        name=str(doc.get("name", "scenario")),
        instance=load_instance(inst_src),
        sections=sections,
        beta=float(doc.get("beta", 1.0)),
        r_grid=doc.get("r_grid", DEFAULT_R_GRID),
        tolerance=Tolerance(float(tol.get("abs", 1e-12)), float(tol.get("rel", 1e-9))),
        seed=doc.get("seed"),
        flags=tuple(doc.get("flags") or ()),
    )
    problems = scen.problems()
    if problems:
        raise ValueError(f"scenario {scen.name!r}: " + "; ".join(problems))
    return scen


def load_scenarios(path) -> list[Scenario]:
    """A scenario file holds one scenario or ``{scenarios: [...]}``."""
    path = Path(path)
    doc = read_document(path)
    docs = doc.get("scenarios", [doc]) if isinstance(doc, dict) else list(doc)
    return [scenario_from_payload(d, path.parent) for d in docs]

"""Generating functions: positive rules on an open exponent interval, +inf elsewhere."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Callable, Mapping

import numpy as np

from .norms import lp_norm, mixed_evaluator, mixed_norm, norm_evaluator
from .spaces import GridFunction, Kernel2

INF = math.inf


def _as_bound(x) -> float:
    if isinstance(x, str) and x.strip().lower() in ("inf", "+inf", "infinity", "∞"):
        return INF
    return float(x)


# -- one-dimensional rules -----------------------------------------------------
#
# A rule maps an array of exponents to values. Passing p = inf asks for the
# limit as p -> inf; NaN means "no limit available".


@dataclass(frozen=True)
class ConstantRule:
    value: float

    def __post_init__(self):
        if not (self.value > 0 and math.isfinite(self.value)):
            raise ValueError("constant generating function must be positive and finite")

    def __call__(self, p):
        return np.full(np.shape(p), float(self.value))

    def knots(self):
        return ()

    def config(self):
        return {"kind": "constant", "value": self.value}


@dataclass(frozen=True)
class PowerRule:
    """``scale * p**exponent``."""

    exponent: float
    scale: float = 1.0

    def __post_init__(self):
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ValueError("power rule scale must be positive and finite")

    def __call__(self, p):
        p = np.asarray(p, dtype=float)
        with np.errstate(over="ignore"):
            out = self.scale * p**self.exponent
        if self.exponent < 0:
            out = np.where(np.isinf(p), np.nan, out)
        return out

    def knots(self):
        return ()

    def config(self):
        return {"kind": "power", "exponent": self.exponent, "scale": self.scale}


@dataclass(frozen=True, eq=False)
class TabulatedRule:
    """Piecewise linear in (log p, log value); undefined outside the table."""

    p: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if p.ndim != 1 or p.shape != v.shape or p.size < 2:
            raise ValueError("tabulated rule needs matching 1-D node and value arrays (>= 2 nodes)")
        if not (np.all(np.isfinite(p)) and np.all(np.diff(p) > 0) and p[0] >= 1):
            raise ValueError("tabulated nodes must be finite, >= 1 and strictly increasing")
        if not (np.all(np.isfinite(v)) and np.all(v > 0)):
            raise ValueError("tabulated values must be positive and finite")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "_lp", np.log(p))
        object.__setattr__(self, "_lv", np.log(v))

    def __call__(self, p):
        p = np.asarray(p, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            lp = np.log(p)
        out = np.exp(np.interp(lp, self._lp, self._lv))
        inside = (p >= self.p[0]) & (p <= self.p[-1])
        out = np.where(inside, out, INF)
        return np.where(np.isinf(p), np.nan, out)

    def knots(self):
        return self.p

    def config(self):
        return {"kind": "tabulated", "p": self.p.tolist(), "values": self.values.tolist()}


@dataclass(frozen=True)
class NaturalRule:
    """``p -> ||f||_p``; its limit at infinity is the essential sup."""

    function: GridFunction

    def __post_init__(self):
        object.__setattr__(self, "_eval", norm_evaluator(self.function))

    def __call__(self, p):
        p = np.asarray(p, dtype=float)
        if np.any(p < 1):
            raise ValueError("natural rule needs p >= 1")
        return self._eval(p)

    def knots(self):
        return ()

    def config(self):
        return {"kind": "natural", "of": self.function.label}


@dataclass(frozen=True)
class BetaRule:
    """``p -> base(beta p)**beta``."""

    base: object
    beta: float

    def __call__(self, p):
        with np.errstate(over="ignore"):
            return self.base(self.beta * np.asarray(p, dtype=float)) ** self.beta

    def knots(self):
        return np.asarray(self.base.knots(), dtype=float) / self.beta

    def config(self):
        return {"kind": "beta_transform", "beta": self.beta, "base": self.base.config()}


@dataclass(frozen=True)
class CallableRule:
    """Extension point for programmatic rules."""

    fn: Callable
    limit: float = math.nan
    name: str = "callable"

    def __call__(self, p):
        p = np.asarray(p, dtype=float)
        safe = np.where(np.isinf(p), 1.0, p)
        out = np.asarray(self.fn(safe), dtype=float) * np.ones(p.shape)
        return np.where(np.isinf(p), self.limit, out)

    def knots(self):
        return ()

    def config(self):
        return {"kind": self.name}


@dataclass(frozen=True)
class GeneratingFunction:
    """A positive rule on the open interval ``support = (a, b)``, 1 <= a < b <= inf.

    Calling it returns +inf outside the support.
    """

    support: tuple
    rule: object
    label: str = ""

    def __post_init__(self):
        a, b = (_as_bound(x) for x in self.support)
        if not (1 <= a < b <= INF) or math.isnan(a) or math.isnan(b):
            raise ValueError(f"invalid support ({a}, {b}); need 1 <= a < b <= inf")
        object.__setattr__(self, "support", (a, b))

    def __call__(self, p):
        p = np.asarray(p, dtype=float)
        a, b = self.support
        inside = (p > a) & (p < b)
        safe = np.where(inside, p, 0.5 * (a + min(b, a + 2.0)))
        out = np.where(inside, self.rule(safe), INF)
        return float(out) if out.ndim == 0 else out

    def contains(self, p) -> np.ndarray:
        a, b = self.support
        return (np.asarray(p) > a) & (np.asarray(p) < b)

    def knots(self):
        return self.rule.knots()

    def at_infinity(self):
        """Limit of the rule as p -> inf when the support is unbounded, else None."""
        if self.support[1] != INF:
            return None
        val = float(np.asarray(self.rule(np.array(INF))))
        return None if math.isnan(val) else val

    def config(self) -> dict:
        cfg = dict(self.rule.config())
        cfg["support"] = [self.support[0], "inf" if self.support[1] == INF else self.support[1]]
        return cfg


def eval_gen(psi: GeneratingFunction, p: float) -> float:
    """Value of psi at p, +inf outside the support. Rejects p < 1."""
    if not p >= 1:
        raise ValueError(f"p must be >= 1, got {p}")
    return float(psi(p))


def constant(value: float, support=(1.0, INF), label="") -> GeneratingFunction:
    return GeneratingFunction(support, ConstantRule(float(value)), label)


def power(exponent: float, scale: float = 1.0, support=(1.0, INF), label="") -> GeneratingFunction:
    return GeneratingFunction(support, PowerRule(float(exponent), float(scale)), label)


def tabulated(p, values, support=None, label="") -> GeneratingFunction:
    rule = TabulatedRule(p, values)
    if support is None:
        support = (rule.p[0], rule.p[-1])
    a, b = (_as_bound(x) for x in support)
    if a < rule.p[0] or b > rule.p[-1]:
        raise ValueError("tabulated support may not extend beyond the table (no extrapolation)")
    return GeneratingFunction((a, b), rule, label)


def natural_from_function(f: GridFunction, support=(1.0, INF), label="") -> GeneratingFunction:
    """The natural generating function ``p -> ||f||_p``; f has unit norm against it."""
    if lp_norm(f, INF) == 0:
        raise ValueError(f"function {f.label!r} vanishes almost everywhere; its natural rule is not positive")
    return GeneratingFunction(support, NaturalRule(f), label or f"natural[{f.label}]")


def beta_transform(psi: GeneratingFunction, beta: float) -> GeneratingFunction:
    """``p -> psi(beta p)**beta`` on ``(a/beta, b/beta)`` intersected with (1, inf).

    This bounds ||P_beta g||_p whenever psi bounds the norms of g.
    """
    if not beta > 0:
        raise ValueError(f"beta must be positive, got {beta}")
    a, b = psi.support
    support = (max(a / beta, 1.0), b / beta)
    if not support[0] < support[1]:
        raise ValueError(f"beta transform of support {psi.support} with beta={beta} is empty")
    return GeneratingFunction(support, BetaRule(psi.rule, float(beta)), f"{psi.label}^{beta:g}")


# -- two-dimensional rules -------------------------------------------------------


@dataclass(frozen=True)
class Constant2:
    value: float

    def __call__(self, q, r):
        return np.full(np.broadcast_shapes(np.shape(q), np.shape(r)), float(self.value))

    def config(self):
        return {"kind": "constant", "value": self.value}


@dataclass(frozen=True)
class Power2:
    """``scale * q**exponents[0] * r**exponents[1]``."""

    exponents: tuple
    scale: float = 1.0

    def __call__(self, q, r):
        with np.errstate(over="ignore", invalid="ignore"):
            return self.scale * np.asarray(q, float) ** self.exponents[0] * np.asarray(r, float) ** self.exponents[1]

    def config(self):
        return {"kind": "power", "exponents": list(self.exponents), "scale": self.scale}


@dataclass(frozen=True)
class Natural2:
    """``(q, r) -> ||h||_{q,r}``."""

    kernel: Kernel2

    def __post_init__(self):
        object.__setattr__(self, "_eval", mixed_evaluator(self.kernel))

    def __call__(self, q, r):
        return self._eval(q, r)

    def config(self):
        return {"kind": "natural", "of": self.kernel.label}


@dataclass(frozen=True, eq=False)
class Tabulated2:
    """Bilinear in (log q, log r, log value) on a rectangular table."""

    q: np.ndarray
    r: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        q, r, v = (np.asarray(x, dtype=float) for x in (self.q, self.r, self.values))
        if v.shape != (q.size, r.size) or q.size < 2 or r.size < 2:
            raise ValueError("tabulated 2-D rule needs a (len(q), len(r)) value table")
        if not (np.all(np.diff(q) > 0) and np.all(np.diff(r) > 0) and q[0] >= 1 and r[0] >= 1):
            raise ValueError("tabulated 2-D nodes must be increasing and >= 1")
        if not (np.all(np.isfinite(v)) and np.all(v > 0)):
            raise ValueError("tabulated 2-D values must be positive and finite")
        for name, val in (("q", q), ("r", r), ("values", v)):
            object.__setattr__(self, name, val)

    def __call__(self, q, r):
        q, r = np.broadcast_arrays(np.asarray(q, float), np.asarray(r, float))
        lq, lr = np.log(self.q), np.log(self.r)
        lv = np.log(self.values)
        with np.errstate(divide="ignore", invalid="ignore"):
            xq, xr = np.log(q), np.log(r)
        i = np.clip(np.searchsorted(lq, xq) - 1, 0, lq.size - 2)
        j = np.clip(np.searchsorted(lr, xr) - 1, 0, lr.size - 2)
        tq = np.clip((xq - lq[i]) / (lq[i + 1] - lq[i]), 0, 1)
        tr = np.clip((xr - lr[j]) / (lr[j + 1] - lr[j]), 0, 1)
        val = (
            (1 - tq) * (1 - tr) * lv[i, j]
            + tq * (1 - tr) * lv[i + 1, j]
            + (1 - tq) * tr * lv[i, j + 1]
            + tq * tr * lv[i + 1, j + 1]
        )
        inside = (q >= self.q[0]) & (q <= self.q[-1]) & (r >= self.r[0]) & (r <= self.r[-1])
        out = np.where(inside, np.exp(val), INF)
        return np.where(np.isinf(q) | np.isinf(r), np.nan, out)

    def config(self):
        return {"kind": "tabulated", "q": self.q.tolist(), "r": self.r.tolist(), "values": self.values.tolist()}


@dataclass(frozen=True)
class GeneratingFunction2:
    """Positive bivariate rule on an open rectangle ``((qa, qb), (ra, rb))``."""

    support: tuple
    rule: object
    label: str = ""

    def __post_init__(self):
        (qa, qb), (ra, rb) = self.support
        qa, qb, ra, rb = (_as_bound(x) for x in (qa, qb, ra, rb))
        if not (1 <= qa < qb <= INF and 1 <= ra < rb <= INF):
            raise ValueError(f"invalid support rectangle {self.support}")
        object.__setattr__(self, "support", ((qa, qb), (ra, rb)))

    def evaluate(self, q, r, *, limits: bool = False):
        """Rule value inside the rectangle, +inf outside.

        With ``limits=True`` an infinite q or r is accepted on an unbounded
        side and mapped to the rule's limit there (or +inf if it has none).
        """
        q, r = np.broadcast_arrays(np.asarray(q, float), np.asarray(r, float))
        (qa, qb), (ra, rb) = self.support
        in_q = (q > qa) & (q < qb)
        in_r = (r > ra) & (r < rb)
        if limits:
            in_q |= np.isinf(q) & (qb == INF)
            in_r |= np.isinf(r) & (rb == INF)
        inside = in_q & in_r
        safe_q = np.where(inside, q, qa + 0.5)
        safe_r = np.where(inside, r, ra + 0.5)
        out = np.where(inside, self.rule(safe_q, safe_r), INF)
        out = np.where(np.isnan(out), INF, out)
        return float(out) if out.ndim == 0 else out

    def __call__(self, q, r):
        return self.evaluate(q, r)

    def config(self) -> dict:
        cfg = dict(self.rule.config())
        cfg["support"] = [[b if b != INF else "inf" for b in side] for side in self.support]
        return cfg


def constant2(value: float, support=((1.0, INF), (1.0, INF)), label="") -> GeneratingFunction2:
    if not value > 0:
        raise ValueError("constant must be positive")
    return GeneratingFunction2(support, Constant2(float(value)), label)


def natural2_from_kernel(h: Kernel2, support=((1.0, INF), (1.0, INF)), label="") -> GeneratingFunction2:
    if mixed_norm(h, INF, INF) == 0:
        raise ValueError(f"kernel {h.label!r} vanishes almost everywhere")
    return GeneratingFunction2(support, Natural2(h), label or f"natural[{h.label}]")


# -- configuration -----------------------------------------------------------------


def parse_spec(spec) -> dict:
    """Turn a compact spec such as ``"power:1"``, ``"natural:g@1:inf"`` or JSON into a config dict."""
    if isinstance(spec, Mapping):
        return dict(spec)
    spec = spec.strip()
    if spec.startswith("{"):
        return json.loads(spec)
    body, _, supp = spec.partition("@")
    kind, _, arg = body.partition(":")
    cfg: dict = {"kind": kind}
    if kind == "constant":
        cfg["value"] = float(arg or 1.0)
    elif kind == "power":
        cfg["exponent"] = float(arg or 1.0)
    elif kind == "natural" and arg:
        cfg["of"] = arg
    if supp:
        a, _, b = supp.partition(":")
        cfg["support"] = [a, b]
    return cfg


def from_config(cfg, resolve: Callable[[str], object] | None = None, default_of=None) -> GeneratingFunction:
    """Build a :class:`GeneratingFunction` from ``{kind, params..., support}``.

    ``resolve`` maps a label to a :class:`GridFunction` for natural rules;
    ``default_of`` is used when a natural spec names no function.
    """
    cfg = parse_spec(cfg)
    kind = cfg.get("kind")
    support = tuple(_as_bound(x) for x in cfg.get("support", (1.0, INF)))
    label = cfg.get("label", "")
    if kind == "constant":
        return constant(cfg.get("value", 1.0), support, label)
    if kind == "power":
        return power(cfg.get("exponent", 1.0), cfg.get("scale", 1.0), support, label)
    if kind == "tabulated":
        return tabulated(cfg["p"], cfg["values"], cfg.get("support"), label)
    if kind == "natural":
        ref = cfg.get("of")
        f = resolve(ref) if (ref is not None and resolve) else default_of
        if f is None:
            raise ValueError("natural generating function needs a function ('of')")
        return natural_from_function(f, support, label)
    if kind == "beta_transform":
        return beta_transform(from_config(cfg["base"], resolve, default_of), cfg["beta"])
    raise ValueError(f"unknown generating-function kind {kind!r}")


def from_config2(cfg, resolve: Callable[[str], object] | None = None, default_of=None) -> GeneratingFunction2:
    cfg = parse_spec(cfg)
    kind = cfg.get("kind")
    support = cfg.get("support", [[1.0, "inf"], [1.0, "inf"]])
    support = tuple(tuple(_as_bound(x) for x in side) for side in support)
    label = cfg.get("label", "")
    if kind == "constant":
        return constant2(cfg.get("value", 1.0), support, label)
    if kind == "power":
        ex = cfg.get("exponents", [0.0, 0.0])
        return GeneratingFunction2(support, Power2(tuple(map(float, ex)), float(cfg.get("scale", 1.0))), label)
    if kind == "tabulated":
        return GeneratingFunction2(support, Tabulated2(cfg["q"], cfg["r"], cfg["values"]), label)
    if kind == "natural":
        ref = cfg.get("of")
        h = resolve(ref) if (ref is not None and resolve) else default_of
        if h is None:
            raise ValueError("natural 2-D generating function needs a kernel ('of')")
        return natural2_from_kernel(h, support, label)
    raise ValueError(f"unknown 2-D generating-function kind {kind!r}")

"""Finite atomic measure spaces and the functions, kernels and maps living on them.

Every integral in the package is a weighted sum over the atoms of a
:class:`MeasureSpace`, so the objects here are deliberately small: a weight
vector, a value vector, a value matrix, and vectorised scalar maps.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping

import numpy as np


class InstanceError(ValueError):
    """Raised when a space, function or kernel violates its invariants."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def _frozen(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=float, ndmin=ndim)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class MeasureSpace:
    """A finite set of atoms with nonnegative masses.

    Zero-weight atoms are allowed; they model null sets and are ignored by
    essential suprema.
    """

    weights: np.ndarray
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "weights", _frozen(self.weights, 1))
        problems = _space_violations(self.label, self.weights)
        if problems:
            raise InstanceError(problems)

    @property
    def atom_count(self) -> int:
        return int(self.weights.shape[0])

    @property
    def support(self) -> np.ndarray:
        """Boolean mask of the positive-weight atoms."""
        return self.weights > 0

    @property
    def total_mass(self) -> float:
        return float(np.sum(self.weights))

    def is_probability(self, tol: float = 1e-12) -> bool:
        return abs(self.total_mass - 1.0) <= tol

    def __len__(self):
        return self.atom_count

    def __repr__(self):
        return f"MeasureSpace(label={self.label!r}, atoms={self.atom_count}, mass={self.total_mass:.6g})"


@dataclass(frozen=True, eq=False)
class GridFunction:
    """A real value per atom of ``space``."""

    space: MeasureSpace
    values: np.ndarray
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen(self.values, 1))
        problems = _function_violations(self.label, self.space.atom_count, self.values)
        if problems:
            raise InstanceError(problems)

    def with_values(self, values, label: str | None = None) -> "GridFunction":
        return GridFunction(self.space, values, self.label if label is None else label)

    def __mul__(self, other):
        if isinstance(other, GridFunction):
            other = other.values
        return self.with_values(self.values * other)

    __rmul__ = __mul__

    def __repr__(self):
        return f"GridFunction(label={self.label!r}, space={self.space.label!r}, values={self.values!r})"


@dataclass(frozen=True, eq=False)
class Kernel2:
    """A weight matrix indexed by (x-atom, y-atom)."""

    space_x: MeasureSpace
    space_y: MeasureSpace
    entries: np.ndarray
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "entries", _frozen(self.entries, 2))
        shape = (self.space_x.atom_count, self.space_y.atom_count)
        problems = _kernel_violations(self.label, shape, self.entries)
        if problems:
            raise InstanceError(problems)

    def scaled(self, factor: float) -> "Kernel2":
        return Kernel2(self.space_x, self.space_y, self.entries * factor, self.label)

    def row(self, i: int) -> GridFunction:
        """The fixed-x slice ``h(x_i, .)`` as a function on Y."""
        return GridFunction(self.space_y, self.entries[i], f"{self.label}[{i}]")

    def __repr__(self):
        return f"Kernel2(label={self.label!r}, shape={self.entries.shape})"


@dataclass(frozen=True)
class ScalarMap2:
    """Deterministic rule ``(x-atom index, z) -> real``, vectorised over numpy arrays."""

    fn: Callable[[np.ndarray, np.ndarray], np.ndarray]
    label: str = ""
    kind: str = "custom"
    params: Mapping[str, Any] = field(default_factory=dict)

    def __call__(self, x, z):
        x, z = np.broadcast_arrays(np.asarray(x, dtype=int), np.asarray(z, dtype=float))
        return np.asarray(self.fn(x, z), dtype=float) * np.ones(z.shape)


@dataclass(frozen=True)
class ScalarMap3:
    """Deterministic rule ``(x-atom index, y-atom index, z) -> real``, vectorised."""

    fn: Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]
    label: str = ""
    kind: str = "custom"
    params: Mapping[str, Any] = field(default_factory=dict)

    def __call__(self, x, y, z):
        x, y, z = np.broadcast_arrays(
            np.asarray(x, dtype=int), np.asarray(y, dtype=int), np.asarray(z, dtype=float)
        )
        return np.asarray(self.fn(x, y, z), dtype=float) * np.ones(z.shape)


# -- map presets -------------------------------------------------------------


def power_map(beta: float, c: float = 1.0, label: str = "") -> ScalarMap2:
    """``n(x, z) = c |z|**beta``."""
    return ScalarMap2(lambda x, z: c * np.abs(z) ** beta, label, "power", {"c": c, "beta": beta})


def affine_map(a: float, b: float, label: str = "") -> ScalarMap2:
    """``n(x, z) = a + b z``."""
    return ScalarMap2(lambda x, z: a + b * z, label, "affine", {"a": a, "b": b})


def product_map(phi: GridFunction, beta: float, c: float = 1.0, label: str = "") -> ScalarMap2:
    """``n(x, z) = c phi(x) |z|**beta``; equality case of the factorization condition when c = 1."""
    vals = phi.values
    return ScalarMap2(
        lambda x, z: c * vals[x] * np.abs(z) ** beta,
        label,
        "product",
        {"phi": phi.label, "beta": beta, "c": c},
    )


def constant_map(value: float, label: str = "") -> ScalarMap3:
    """``u(x, y, z) = value``."""
    return ScalarMap3(lambda x, y, z: np.full(z.shape, float(value)), label, "constant", {"value": value})


def lift_map(n: ScalarMap2, label: str = "") -> ScalarMap3:
    """View a two-argument map as ``u(x, y, z) = n(x, z)``."""
    return ScalarMap3(lambda x, y, z: n(x, z), label or n.label, "lift", {"n": n.label})


def kernel_product_map(u0: Kernel2, beta: float, c: float = 1.0, label: str = "") -> ScalarMap3:
    """``u(x, y, z) = c u0(x, y) |z|**beta``."""
    ent = u0.entries
    return ScalarMap3(
        lambda x, y, z: c * ent[x, y] * np.abs(z) ** beta,
        label,
        "kernel_product",
        {"u0": u0.label, "beta": beta, "c": c},
    )


def superposition_map(h: Kernel2, n: ScalarMap2, label: str = "") -> ScalarMap3:
    """``u(x, y, z) = h(x, y) n(y, z)``: the Urysohn kernel of a Hammerstein operator."""
    ent = h.entries
    return ScalarMap3(
        lambda x, y, z: ent[x, y] * n(y, z),
        label,
        "superposition",
        {"h": h.label, "n": n.label},
    )


def zero_map(label: str = "") -> ScalarMap2:
    return ScalarMap2(lambda x, z: np.zeros(z.shape), label, "zero", {})


# -- invariants ----------------------------------------------------------------


def total_mass(space: MeasureSpace) -> float:
    """Sum of the atom weights."""
    return space.total_mass


def _as_array(values, ndim):
    try:
        arr = np.array(values, dtype=float, ndmin=ndim)
    except (TypeError, ValueError):
        return None
    return arr if arr.ndim == ndim else None


def _space_violations(label, weights) -> list[str]:
    name = f"space {label!r}"
    if weights is None:
        return [f"{name}: weights are not a numeric sequence"]
    if weights.size == 0:
        return [f"{name}: no atoms"]
    out = []
    if not np.all(np.isfinite(weights)):
        out.append(f"{name}: non-finite weight")
    elif np.any(weights < 0):
        out.append(f"{name}: negative weight at atom {int(np.argmax(weights < 0))}")
    if np.all(np.isfinite(weights)) and not np.any(weights > 0):
        out.append(f"{name}: trivial measure (no positive weight)")
    return out


def _function_violations(label, n_atoms, values) -> list[str]:
    name = f"function {label!r}"
    if values is None:
        return [f"{name}: values are not a numeric sequence"]
    if values.shape[0] != n_atoms:
        return [f"{name}: {values.shape[0]} values on a {n_atoms}-atom space"]
    if not np.all(np.isfinite(values)):
        return [f"{name}: non-finite value"]
    return []


def _kernel_violations(label, shape, entries) -> list[str]:
    name = f"kernel {label!r}"
    if entries is None:
        return [f"{name}: entries are not a numeric matrix"]
    if entries.shape != tuple(shape):
        return [f"{name}: shape {entries.shape} differs from {tuple(shape)}"]
    if not np.all(np.isfinite(entries)):
        return [f"{name}: non-finite entry"]
    return []


def _get(entry, key, default=None):
    if isinstance(entry, Mapping):
        return entry.get(key, default)
    return getattr(entry, key, default)


def validate_instance(
    spaces: Iterable, functions: Iterable = (), kernels: Iterable = ()
) -> list[str]:
    """Return one readable message per invariant violation; never raises.

    Entries may be raw instance-file mappings (``{label, weights}``,
    ``{label, space, values}``, ``{label, space_x, space_y, entries}``) or
    already-built objects. Function and kernel ``space`` fields may name a
    space label or hold a :class:`MeasureSpace`.
    """
    violations: list[str] = []
    sizes: dict[str, int] = {}
    if isinstance(spaces, (Mapping, MeasureSpace)):
        spaces = [spaces]
    for entry in spaces:
        label = _get(entry, "label", "")
        weights = _as_array(_get(entry, "weights"), 1)
        found = _space_violations(label, weights)
        violations.extend(found)
        if weights is not None:
            sizes[label] = weights.shape[0]

    def size_of(ref, owner):
        if isinstance(ref, MeasureSpace):
            return ref.atom_count
        if ref in sizes:
            return sizes[ref]
        violations.append(f"{owner}: unknown space {ref!r}")
        return None

    for entry in functions:
        label = _get(entry, "label", "")
        n = size_of(_get(entry, "space"), f"function {label!r}")
        values = _as_array(_get(entry, "values"), 1)
        if n is not None:
            violations.extend(_function_violations(label, n, values))
    for entry in kernels:
        label = _get(entry, "label", "")
        nx = size_of(_get(entry, "space_x"), f"kernel {label!r}")
        ny = size_of(_get(entry, "space_y"), f"kernel {label!r}")
        entries = _as_array(_get(entry, "entries"), 2)
        if nx is not None and ny is not None:
            violations.extend(_kernel_violations(label, (nx, ny), entries))
    return violations

"""Instance documents: spaces, functions, kernels and named scalar-map presets.

The document is a key/value tree (JSON or YAML) with the fields

    spaces:    [{label, weights}]
    functions: [{label, space, values}]
    kernels:   [{label, space_x, space_y, entries}]
    maps:      [{label, kind, params}]
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .spaces import (
    GridFunction,
    InstanceError,
    Kernel2,
    MeasureSpace,
    ScalarMap2,
    ScalarMap3,
    affine_map,
    constant_map,
    kernel_product_map,
    lift_map,
    power_map,
    product_map,
    superposition_map,
    validate_instance,
    zero_map,
)

MAP_KINDS = ("power", "affine", "product", "zero", "constant", "kernel_product", "superposition", "lift")


@dataclass
class Instance:
    """Resolved objects of an instance document, addressed by label."""

    spaces: dict = field(default_factory=dict)
    functions: dict = field(default_factory=dict)
    kernels: dict = field(default_factory=dict)
    maps: dict = field(default_factory=dict)
    payload: dict = field(default_factory=dict, repr=False)

    def _lookup(self, table, label, what):
        try:
            return table[label]
        except KeyError:
            raise KeyError(f"unknown {what} {label!r}") from None

    def space(self, label) -> MeasureSpace:
        return self._lookup(self.spaces, label, "space")

    def function(self, label) -> GridFunction:
        return self._lookup(self.functions, label, "function")

    def kernel(self, label) -> Kernel2:
        return self._lookup(self.kernels, label, "kernel")

    def map(self, label):
        return self._lookup(self.maps, label, "map")

    def resolve(self, label):
        """A function or kernel by label (functions take precedence)."""
        if label in self.functions:
            return self.functions[label]
        if label in self.kernels:
            return self.kernels[label]
        raise KeyError(f"unknown function or kernel {label!r}")


def read_document(path) -> dict:
    """Parse a JSON or YAML file into a dict (YAML is a superset of JSON)."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise OSError(f"cannot read {path}: {exc.strerror}") from exc
    if path.suffix.lower() == ".json":
        return json.loads(text)
    import yaml

    return yaml.safe_load(text)


def build_map(entry: dict, inst: Instance):
    """Instantiate a map preset; references to functions, kernels and maps go through ``inst``."""
    kind = entry.get("kind")
    label = entry.get("label", "")
    p = dict(entry.get("params") or {})
    if kind == "power":
        return power_map(float(p.get("beta", 1.0)), float(p.get("c", 1.0)), label)
    if kind == "affine":
        return affine_map(float(p.get("a", 0.0)), float(p.get("b", 1.0)), label)
    if kind == "product":
        return product_map(inst.function(p["phi"]), float(p.get("beta", 1.0)), float(p.get("c", 1.0)), label)
    if kind == "zero":
        return zero_map(label)
    if kind == "constant":
        return constant_map(float(p.get("value", 0.0)), label)
    if kind == "kernel_product":
        return kernel_product_map(inst.kernel(p["u0"]), float(p.get("beta", 1.0)), float(p.get("c", 1.0)), label)
    if kind == "superposition":
        return superposition_map(inst.kernel(p["h"]), inst.map(p["n"]), label)
    if kind == "lift":
        return lift_map(inst.map(p["n"]), label)
    raise ValueError(f"unknown map kind {kind!r}; expected one of {', '.join(MAP_KINDS)}")


def load_instance(source) -> Instance:
    """Validate and build an :class:`Instance` from a dict or a file path."""
    doc = source if isinstance(source, dict) else read_document(source)
    spaces = doc.get("spaces") or []
    functions = doc.get("functions") or []
    kernels = doc.get("kernels") or []
    problems = validate_instance(spaces, functions, kernels)
    if problems:
        raise InstanceError(problems)
    inst = Instance(payload=doc)
    for s in spaces:
        inst.spaces[s["label"]] = MeasureSpace(np.asarray(s["weights"], dtype=float), s["label"])
    for f in functions:
        inst.functions[f["label"]] = GridFunction(inst.space(f["space"]), np.asarray(f["values"], dtype=float), f["label"])
    for k in kernels:
        inst.kernels[k["label"]] = Kernel2(
            inst.space(k["space_x"]), inst.space(k["space_y"]), np.asarray(k["entries"], dtype=float), k["label"]
        )
    # maps may refer to maps declared earlier in the list
    for m in doc.get("maps") or []:
        inst.maps[m["label"]] = build_map(m, inst)
    return inst


def is_map2(m) -> bool:
    return isinstance(m, ScalarMap2)


def is_map3(m) -> bool:
    return isinstance(m, ScalarMap3)

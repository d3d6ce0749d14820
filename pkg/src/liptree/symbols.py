"""Multiplier symbols and their JSON form.

Three kinds are supported::

    {"kind": "radial", "expr": "1/ell(1,x)", "root_value": [1, 0]}
    {"kind": "tabulated", "values": [[re, im], ...]}      # depths 0..D
    {"kind": "explicit", "values": [...]}                  # breadth-first order

Numbers may be given as plain reals or ``[re, im]`` pairs.  A radial
expression is evaluated at ``x = |v|`` for ``|v| >= 1``; its root value is
the expression at ``x = 1`` unless ``root_value`` is given.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence, Union

import numpy as np

from . import expr as _expr
from .spaces import TreeFunction
from .tree import TreeTruncation


class SymbolError(ValueError):
    pass


class SymbolEvalError(SymbolError):
    def __init__(self, message: str, depth: int):
        self.depth = depth
        super().__init__(f"{message} (at vertex depth {depth})")


def _complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise SymbolError(f"complex numbers are [re, im] pairs, got {value!r}")
        re_, im = value
        return complex(float(re_), float(im))
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SymbolError(f"not a number: {value!r}")
    return complex(float(value))


@dataclass(frozen=True)
class RadialSymbol:
    text: str
    root_value: complex | None = None

    def __post_init__(self):
        object.__setattr__(self, "ast", _expr.parse(self.text))

    @property
    def is_radial(self) -> bool:
        return True

    def at_depth(self, j: int) -> complex:
        if j == 0:
            if self.root_value is not None:
                return self.root_value
            j_eval = 1
        else:
            j_eval = j
        try:
            return complex(_expr.evaluate(self.ast, float(j_eval)))
        except _expr.ExprEvalError as e:
            raise SymbolEvalError(str(e), j) from None

    def on(self, tree: TreeTruncation) -> TreeFunction:
        return TreeFunction.radial(tree, [self.at_depth(j) for j in range(tree.depth + 1)])

    def as_dict(self) -> dict:
        out = {"kind": "radial", "expr": self.text}
        if self.root_value is not None:
            out["root_value"] = [self.root_value.real, self.root_value.imag]
        return out


@dataclass(frozen=True)
class TabulatedSymbol:
    values: tuple[complex, ...]

    @property
    def is_radial(self) -> bool:
        return True

    def on(self, tree: TreeTruncation) -> TreeFunction:
        if len(self.values) < tree.depth + 1:
            raise SymbolError(
                f"tabulated symbol covers depths 0..{len(self.values) - 1}, "
                f"truncation needs 0..{tree.depth}"
            )
        return TreeFunction.radial(tree, self.values[: tree.depth + 1])

    def as_dict(self) -> dict:
        return {"kind": "tabulated", "values": [[z.real, z.imag] for z in self.values]}


@dataclass(frozen=True)
class ExplicitSymbol:
    """Values per vertex in breadth-first order.

    A longer list is accepted for a shallower truncation of the same shape,
    since breadth-first orders of nested truncations are prefixes of one
    another.
    """

    values: tuple[complex, ...]

    @property
    def is_radial(self) -> bool:
        return False

    def on(self, tree: TreeTruncation) -> TreeFunction:
        if len(self.values) < tree.n_vertices:
            raise SymbolError(
                f"explicit symbol has {len(self.values)} values, truncation has {tree.n_vertices} vertices"
            )
        return TreeFunction(tree, self.values[: tree.n_vertices])

    def as_dict(self) -> dict:
        return {"kind": "explicit", "values": [[z.real, z.imag] for z in self.values]}


Symbol = Union[RadialSymbol, TabulatedSymbol, ExplicitSymbol]


def symbol_from_dict(obj: dict) -> Symbol:
    if not isinstance(obj, dict) or "kind" not in obj:
        raise SymbolError('symbol JSON must be an object with a "kind" field')
    kind = obj["kind"]
    if kind == "radial":
        if not isinstance(obj.get("expr"), str):
            raise SymbolError('radial symbol needs a string "expr"')
        root = obj.get("root_value")
        return RadialSymbol(obj["expr"], None if root is None else _complex(root))
    if kind in ("tabulated", "explicit"):
        vals = obj.get("values")
        if not isinstance(vals, list) or not vals:
            raise SymbolError(f'{kind} symbol needs a non-empty "values" list')
        vals = tuple(_complex(v) for v in vals)
        return TabulatedSymbol(vals) if kind == "tabulated" else ExplicitSymbol(vals)
    raise SymbolError(f"unknown symbol kind {kind!r}")


def load_symbol(path: str | Path) -> Symbol:
    """Read a symbol file; JSON errors propagate with line and column."""
    with open(path) as fh:
        return symbol_from_dict(json.load(fh))


def from_values(values: Sequence[complex] | np.ndarray, radial: bool = False) -> Symbol:
    vals = tuple(complex(v) for v in np.asarray(values, dtype=complex))
    return TabulatedSymbol(vals) if radial else ExplicitSymbol(vals)


def as_function(psi, tree: TreeTruncation) -> TreeFunction:
    """Materialize a symbol (or pass a :class:`TreeFunction` through)."""
    if isinstance(psi, TreeFunction):
        if psi.tree != tree:
            raise SymbolError("symbol function lives on a different truncation")
        return psi
    if isinstance(psi, str):
        psi = RadialSymbol(psi)
    return psi.on(tree)


def eval_symbol(psi, v: Sequence[int], tree: TreeTruncation) -> complex:
    if isinstance(psi, RadialSymbol):
        tree.index(v)
        return psi.at_depth(len(v))
    return as_function(psi, tree)(v)

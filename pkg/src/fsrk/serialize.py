"""Declarative text formats: tableaux, splitting tables, scheme spec files.

All coefficient entries are strings: "p/q" or a plain integer for exact
rationals (round-trips losslessly), or a decimal/exponent literal for
floats. Documents are JSON-compatible dictionaries.
"""

from __future__ import annotations

import json

from .errors import DimensionError, SpecFileError
from .gark import ExtendedTableau, FSRKScheme, scheme
from .rational import format_number, parse_number
from .splitting import SplittingMethod, catalogue_splitting, splitting
from .tableau import ButcherTableau, catalogue, tableau


def tableau_to_dict(t: ButcherTableau) -> dict:
    return {
        "name": t.name,
        "A": [[format_number(x) for x in row] for row in t.a],
        "b": [format_number(x) for x in t.b],
        "c": [format_number(x) for x in t.c],
    }


def tableau_from_dict(doc: dict) -> ButcherTableau:
    try:
        return tableau(doc.get("name", ""), doc["A"], doc["b"], doc.get("c"))
    except KeyError as exc:
        raise SpecFileError(f"tableau document missing key {exc}") from None


def splitting_to_dict(m: SplittingMethod) -> dict:
    return {
        "name": m.name,
        "order": m.declared_order,
        "alpha": [[format_number(x) for x in row] for row in m.alpha],
    }


def splitting_from_dict(doc: dict) -> SplittingMethod:
    try:
        return splitting(doc.get("name", ""), doc["alpha"], doc.get("order"))
    except KeyError as exc:
        raise SpecFileError(f"splitting document missing key {exc}") from None


def extended_to_dict(t: ExtendedTableau) -> dict:
    """Full extended-tableau document: blocks, weights, nodes, row map."""
    return {
        "scheme": t.scheme_name,
        "total_stages": t.total_stages,
        "operators": t.operators,
        "A": [[[format_number(x) for x in row] for row in mat] for mat in t.a],
        "b": [[format_number(x) for x in row] for row in t.b],
        "c": [[format_number(x) for x in col] for col in t.c],
        "blocks": [
            {"stage": k + 1, "operator": ell + 1, "rows": [lo, hi]}
            for k, row in enumerate(t.blocks)
            for ell, (lo, hi) in enumerate(row)
        ],
    }


# -- scheme spec files --------------------------------------------------------

def _resolve_integrator(entry) -> ButcherTableau:
    if isinstance(entry, str):
        return catalogue(entry)
    if isinstance(entry, dict):
        name = entry.get("name")
        if name is None:
            raise SpecFileError(f"integrator entry needs a name: {entry!r}")
        params = {k: parse_number(v) for k, v in entry.items() if k != "name"}
        return catalogue(name, **params)
    raise SpecFileError(f"cannot interpret integrator entry {entry!r}")


def scheme_from_spec(doc: dict) -> FSRKScheme:
    """Resolve a scheme spec document.

    ``splitting`` is a catalogue name or an inline table document;
    ``integrators`` is an s x N grid of catalogue entries (a single row is
    broadcast to all stages). Catalogue splittings need the operator
    count, taken from the grid width.
    """
    if "integrators" not in doc:
        raise SpecFileError("scheme spec needs an 'integrators' grid")
    grid_doc = doc["integrators"]
    if not grid_doc or not isinstance(grid_doc, list):
        raise SpecFileError("'integrators' must be a non-empty list")
    if not isinstance(grid_doc[0], list):
        grid_doc = [grid_doc]
    n_ops = len(grid_doc[0])
    if any(len(row) != n_ops for row in grid_doc):
        raise SpecFileError("ragged integrator grid")

    split_doc = doc.get("splitting")
    if split_doc is None:
        raise SpecFileError("scheme spec needs a 'splitting' entry")
    if isinstance(split_doc, str):
        try:
            method = catalogue_splitting(split_doc, n_ops)
        except DimensionError as exc:
            raise SpecFileError(
                f"splitting '{split_doc}' does not fit a {n_ops}-operator "
                f"grid: {exc}"
            ) from None
    elif isinstance(split_doc, dict):
        method = splitting_from_dict(split_doc)
    else:
        raise SpecFileError(f"cannot interpret splitting entry {split_doc!r}")

    grid = [[_resolve_integrator(e) for e in row] for row in grid_doc]
    if len(grid) == 1 and method.stages > 1:
        grid = grid * method.stages
    if len(grid) != method.stages:
        raise SpecFileError(
            f"integrator grid has {len(grid)} stage rows, splitting "
            f"'{method.name}' has {method.stages} stages"
        )
    if n_ops != method.operators:
        raise SpecFileError(
            f"integrator grid is {n_ops} operators wide, splitting "
            f"'{method.name}' has {method.operators} operators"
        )
    return scheme(method, grid, name=doc.get("name", ""))


def load_scheme(path) -> FSRKScheme:
    with open(path) as handle:
        try:
            doc = json.load(handle)
        except json.JSONDecodeError as exc:
            raise SpecFileError(f"{path}: not valid JSON ({exc})") from None
    return scheme_from_spec(doc)


def dump_json(doc: dict, path=None) -> str:
    """Deterministic JSON rendering (sorted keys, fixed separators)."""
    text = json.dumps(doc, indent=2, sort_keys=True)
    if path is not None:
        with open(path, "w") as handle:
            handle.write(text + "\n")
    return text

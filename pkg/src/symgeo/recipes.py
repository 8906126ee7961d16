"""Construction recipes as a strict, versioned text format.

A recipe document is the reproducibility artifact: a tree of registered
operations with typed parameters.  The format is line-based nested
key-value text, two-space indentation per nesting level, with ``note:``
lines carrying provenance strings and ``input:`` blocks holding child
recipes.  Parsing is strict: unknown operations or parameters, wrong
types, duplicates, out-of-order keys and over-deep nesting are all
rejected with the offending line number.  The format has no reference
syntax, so cyclic documents cannot be expressed; nesting is capped at 64.

Executing a parsed recipe replays the construction and yields a
descriptor identical to the original, including its provenance.
"""

from __future__ import annotations

import re
from dataclasses import replace
from typing import Callable

from . import coverings, manifolds, surgery
from .errors import RecipeError
from .lattice import ClassVector
from .manifolds import ConstructionRecipe, ManifoldDescriptor, ParamValue

SCHEMA_VERSION = 1
MAX_DEPTH = 64

_INT = "int"
_CLASS = "class"
_STR = "str"
_BOOL = "bool"

# op -> (ordered (param, type, required), input arity, builder)
_Builder = Callable[[ConstructionRecipe, list[ManifoldDescriptor]], ManifoldDescriptor]


def _build_elliptic(node, children):
    return manifolds.elliptic_surface(node.param("n"), node.param("p"), node.param("q"))


def _build_knot_product(node, children):
    return manifolds.knot_product(node.param("h"))


def _build_bundle(node, children):
    return manifolds.surface_bundle_y(node.param("g"), node.param("h"))


def _build_catalog(node, children):
    args = [value for key, value in node.params if key != "name"]
    return manifolds.catalog(node.param("name"), *args)


def _build_singular(node, children):
    return coverings.singular_double_cover(node.param("n"), node.param("m"))


def _build_fibre_sum(node, children):
    g = node.param("genus")
    sm = surgery.SurfaceRef(
        ClassVector(node.param("class_m")), g, 0,
        node.param("sign_m"), node.param("complement_m"),
    )
    sn = surgery.SurfaceRef(
        ClassVector(node.param("class_n")), g, 0,
        node.param("sign_n"), node.param("complement_n"),
    )
    return surgery.fibre_sum(children[0], sm, children[1], sn, node.param("no_rim_tori"))


def _build_knot_surgery(node, children):
    t = surgery.SurfaceRef(
        ClassVector(node.param("torus")), 1, 0, node.param("sign"), node.param("complement")
    )
    return surgery.knot_surgery(children[0], t, node.param("h"), node.param("sign"))


def _build_gks(node, children):
    s = surgery.SurfaceRef(
        ClassVector(node.param("surface")), node.param("genus"), 0, "+",
        node.param("complement"),
    )
    return surgery.generalized_knot_surgery(children[0], s, node.param("h"))


def _build_log_transform(node, children):
    return surgery.log_transform(children[0], node.param("p"))


def _build_blow_up(node, children):
    return surgery.blow_up(children[0])


def _build_triple(node, children):
    return surgery.lagrangian_triple_surgery(
        children[0],
        node.param("triple_index"),
        node.param("a"),
        node.param("em"),
        node.param("h1"),
        node.param("h2"),
        node.param("sign"),
    )


def _build_branched(node, children):
    return coverings.branched_cover(
        children[0], node.param("d_square"), node.param("k_dot_d"), node.param("deg")
    )


def _build_pluricanonical(node, children):
    p = coverings.CoverParams.from_degrees(node.param("cover_m"), node.param("cover_d"))
    return coverings.pluricanonical_cover(children[0], p)


REGISTRY: dict[str, tuple[tuple[tuple[str, str, bool], ...], int, _Builder]] = {
    "elliptic_surface": (
        (("n", _INT, True), ("p", _INT, True), ("q", _INT, True)), 0, _build_elliptic),
    "knot_product": ((("h", _INT, True),), 0, _build_knot_product),
    "surface_bundle_Y": ((("g", _INT, True), ("h", _INT, True)), 0, _build_bundle),
    "catalog": (
        (
            ("name", _STR, True),
            ("k_sq", _INT, False), ("p_g", _INT, False),
            ("r", _INT, False), ("s", _INT, False),
            ("x", _INT, False), ("y", _INT, False),
        ), 0, _build_catalog),
    "singular_double_cover": ((("n", _INT, True), ("m", _INT, True)), 0, _build_singular),
    "fibre_sum": (
        (
            ("genus", _INT, True),
            ("class_m", _CLASS, True), ("sign_m", _STR, True), ("complement_m", _BOOL, True),
            ("class_n", _CLASS, True), ("sign_n", _STR, True), ("complement_n", _BOOL, True),
            ("no_rim_tori", _BOOL, True),
        ), 2, _build_fibre_sum),
    "knot_surgery": (
        (
            ("torus", _CLASS, True), ("h", _INT, True),
            ("sign", _STR, True), ("complement", _BOOL, True),
        ), 1, _build_knot_surgery),
    "generalized_knot_surgery": (
        (
            ("surface", _CLASS, True), ("genus", _INT, True),
            ("h", _INT, True), ("complement", _BOOL, True),
        ), 1, _build_gks),
    "log_transform": ((("p", _INT, True),), 1, _build_log_transform),
    "blow_up": ((), 1, _build_blow_up),
    "lagrangian_triple_surgery": (
        (
            ("triple_index", _INT, True), ("a", _INT, True), ("em", _INT, True),
            ("h1", _INT, True), ("h2", _INT, True), ("sign", _STR, True),
        ), 1, _build_triple),
    "branched_cover": (
        (("d_square", _INT, True), ("k_dot_d", _INT, True), ("deg", _INT, True)),
        1, _build_branched),
    "pluricanonical_cover": (
        (("cover_m", _INT, True), ("cover_d", _INT, True)), 1, _build_pluricanonical),
}

_STR_VALUE = re.compile(r"^[A-Za-z0-9_.+-]+$")
_INT_VALUE = re.compile(r"^-?[0-9]+$")


def _format_value(value: ParamValue, kind: str) -> str:
    if kind == _INT:
        return str(value)
    if kind == _BOOL:
        return "true" if value else "false"
    if kind == _CLASS:
        return ",".join(str(c) for c in value)
    return str(value)


def serialize_recipe(recipe: ConstructionRecipe) -> str:
    """Render a recipe tree to the canonical text form."""
    lines = [f"version: {SCHEMA_VERSION}"]
    _serialize_node(recipe, 0, lines)
    return "\n".join(lines) + "\n"


def _serialize_node(node: ConstructionRecipe, depth: int, lines: list[str]) -> None:
    if depth >= MAX_DEPTH:
        raise RecipeError("recipe nesting exceeds the supported depth")
    if node.operation not in REGISTRY:
        raise RecipeError(f"unknown operation {node.operation!r}")
    schema, arity, _ = REGISTRY[node.operation]
    kinds = {name: kind for name, kind, _ in schema}
    pad = "  " * depth
    lines.append(f"{pad}op: {node.operation}")
    given = dict(node.params)
    for name, kind, required in schema:
        if name in given:
            lines.append(f"{pad}{name}: {_format_value(given[name], kind)}")
        elif required:
            raise RecipeError(f"operation {node.operation!r} missing parameter {name!r}")
    for note in node.notes:
        lines.append(f"{pad}note: {note}")
    if len(node.inputs) != arity:
        raise RecipeError(f"operation {node.operation!r} expects {arity} inputs")
    for child in node.inputs:
        lines.append(f"{pad}input:")
        _serialize_node(child, depth + 1, lines)


class _Line:
    __slots__ = ("number", "indent", "key", "value")

    def __init__(self, number: int, indent: int, key: str, value: str):
        self.number = number
        self.indent = indent
        self.key = key
        self.value = value


def _lex(text: str) -> list[_Line]:
    out = []
    for number, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        stripped = raw.lstrip(" ")
        pad = len(raw) - len(stripped)
        if pad % 2 != 0:
            raise RecipeError("indentation must be a multiple of two spaces", number)
        if "\t" in raw:
            raise RecipeError("tabs are not allowed", number)
        if ":" not in stripped:
            raise RecipeError("expected 'key: value'", number)
        key, _, value = stripped.partition(":")
        out.append(_Line(number, pad // 2, key.strip(), value.strip()))
    return out


def _parse_value(kind: str, raw: str, number: int) -> ParamValue:
    if kind == _INT:
        if not _INT_VALUE.match(raw):
            raise RecipeError(f"expected an integer, got {raw!r}", number)
        return int(raw)
    if kind == _BOOL:
        if raw == "true":
            return True
        if raw == "false":
            return False
        raise RecipeError(f"expected true or false, got {raw!r}", number)
    if kind == _CLASS:
        parts = raw.split(",")
        if not all(_INT_VALUE.match(p.strip()) for p in parts):
            raise RecipeError(f"expected a comma-separated integer vector, got {raw!r}", number)
        return tuple(int(p.strip()) for p in parts)
    if not _STR_VALUE.match(raw):
        raise RecipeError(f"invalid string value {raw!r}", number)
    return raw


def parse_recipe(text: str) -> ConstructionRecipe:
    """Parse the canonical text form back into a recipe tree."""
    lines = _lex(text)
    if not lines:
        raise RecipeError("empty document")
    head = lines[0]
    if head.indent != 0 or head.key != "version":
        raise RecipeError("document must start with a version line", head.number)
    if head.value != str(SCHEMA_VERSION):
        raise RecipeError(f"unsupported schema version {head.value!r}", head.number)
    node, rest = _parse_node(lines[1:], 0)
    if rest:
        raise RecipeError("trailing content after the root recipe", rest[0].number)
    return node


def _parse_node(lines: list[_Line], depth: int) -> tuple[ConstructionRecipe, list[_Line]]:
    if depth >= MAX_DEPTH:
        raise RecipeError("recipe nesting exceeds the supported depth",
                          lines[0].number if lines else None)
    if not lines:
        raise RecipeError("expected an 'op:' line, found end of document")
    first = lines[0]
    if first.indent != depth:
        raise RecipeError(f"expected indentation level {depth}", first.number)
    if first.key != "op":
        raise RecipeError("a recipe node must start with 'op:'", first.number)
    op = first.value
    if op not in REGISTRY:
        raise RecipeError(f"unknown operation {op!r}", first.number)
    schema, arity, _ = REGISTRY[op]

    params: list[tuple[str, ParamValue]] = []
    notes: list[str] = []
    inputs: list[ConstructionRecipe] = []
    rest = lines[1:]
    cursor = 0  # position in the schema; parameters must come in order
    stage = "params"
    while rest:
        line = rest[0]
        if line.indent < depth:
            break
        if line.indent > depth:
            raise RecipeError("unexpected indentation", line.number)
        if line.key == "op":
            break
        if line.key == "input":
            if line.value:
                raise RecipeError("'input:' takes no value", line.number)
            child, rest = _parse_node(rest[1:], depth + 1)
            inputs.append(child)
            stage = "inputs"
            continue
        if line.key == "note":
            if stage == "inputs":
                raise RecipeError("notes must precede inputs", line.number)
            if not line.value:
                raise RecipeError("empty note", line.number)
            notes.append(line.value)
            stage = "notes"
            rest = rest[1:]
            continue
        if stage != "params":
            raise RecipeError("parameters must precede notes and inputs", line.number)
        while cursor < len(schema) and schema[cursor][0] != line.key:
            if schema[cursor][2]:
                raise RecipeError(
                    f"operation {op!r} missing parameter {schema[cursor][0]!r}", line.number)
            cursor += 1
        if cursor >= len(schema):
            raise RecipeError(f"unknown or out-of-order parameter {line.key!r}", line.number)
        name, kind, _ = schema[cursor]
        params.append((name, _parse_value(kind, line.value, line.number)))
        cursor += 1
        rest = rest[1:]
    while cursor < len(schema):
        if schema[cursor][2]:
            raise RecipeError(f"operation {op!r} missing parameter {schema[cursor][0]!r}",
                              first.number)
        cursor += 1
    if len(inputs) != arity:
        raise RecipeError(
            f"operation {op!r} expects {arity} inputs, got {len(inputs)}", first.number)
    return ConstructionRecipe(op, tuple(params), tuple(inputs), tuple(notes)), rest


def execute_recipe(recipe: ConstructionRecipe, _depth: int = 0) -> ManifoldDescriptor:
    """Replay a recipe tree; the result carries the given tree as its
    provenance, so re-executing a descriptor's recipe reproduces it."""
    if _depth >= MAX_DEPTH:
        raise RecipeError("recipe nesting exceeds the supported depth")
    if recipe.operation not in REGISTRY:
        raise RecipeError(f"unknown operation {recipe.operation!r}")
    schema, arity, builder = REGISTRY[recipe.operation]
    if len(recipe.inputs) != arity:
        raise RecipeError(f"operation {recipe.operation!r} expects {arity} inputs")
    children = [execute_recipe(child, _depth + 1) for child in recipe.inputs]
    descriptor = builder(recipe, children)
    return replace(descriptor, recipe=recipe)

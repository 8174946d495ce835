"""JSON configuration and map files.

Configuration::

    {"version": 1, "dim": 2, "kind": "balls",
     "items": [{"label": "B1", "type": "sphere", "center": [0, 0], "radius": 1, "side": "inside"},
               {"label": "B2", "type": "halfspace", "normal": [1, 0], "offset": 0}]}

    {"version": 1, "dim": 2, "kind": "points",
     "items": [{"label": "p1", "type": "finite", "coords": [0, 0]},
               {"label": "p2", "type": "infinity"}]}

Map::

    {"version": 1, "dim": 2, "matrix": [[...], ...]}   # (dim+2) x (dim+2), row-major
"""

import json
import logging
from pathlib import Path

import numpy as np

from .errors import RigidityError
from .inversive import ExtendedPoint, HalfSpace, Side, Sphere
from .minkowski import LorentzMap, validate_lorentz
from .solver import Configuration, Kind

log = logging.getLogger(__name__)

VERSION = 1
MAP_RESIDUAL_MAX = 1e-6
MAP_RESIDUAL_WARN = 1e-9


class ParseError(RigidityError, ValueError):
    """Malformed input file (exit code 2)."""

    name = "ParseError"


class InvariantError(RigidityError, ValueError):
    """Well-formed input violating a semantic invariant (exit code 3)."""

    name = "InvariantError"


def _read_json(source):
    if isinstance(source, dict):
        return source
    try:
        text = Path(source).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {source}: {exc}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: invalid JSON ({exc})") from exc


def _numbers(value, what, length=None):
    if not isinstance(value, list) or not all(
        isinstance(x, (int, float)) and not isinstance(x, bool) for x in value
    ):
        raise ParseError(f"{what} must be a list of numbers")
    if length is not None and len(value) != length:
        raise ParseError(f"{what} has {len(value)} entries, expected {length}")
    return [float(x) for x in value]


def _number(value, what):
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ParseError(f"{what} must be a number")
    return float(value)


def _header(data, source):
    if not isinstance(data, dict):
        raise ParseError(f"{source}: top level must be an object")
    if "version" not in data:
        raise ParseError(f"{source}: missing 'version'")
    if data["version"] != VERSION:
        raise ParseError(f"{source}: unsupported version {data['version']!r}")
    dim = data.get("dim")
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise ParseError(f"{source}: 'dim' must be a positive integer")
    return dim


def _parse_item(rec, dim, kind, index):
    if not isinstance(rec, dict):
        raise ParseError(f"item {index} must be an object")
    label = rec.get("label")
    if not isinstance(label, str) or not label:
        raise ParseError(f"item {index} needs a non-empty string 'label'")
    typ = rec.get("type")
    where = f"item {label!r}"
    try:
        if kind is Kind.BALLS and typ == "sphere":
            side = rec.get("side", "inside")
            if side not in ("inside", "outside"):
                raise ParseError(f"{where}: side must be 'inside' or 'outside'")
            center = _numbers(rec.get("center"), f"{where}: center", dim)
            return label, Sphere(center, _number(rec.get("radius"), f"{where}: radius"), Side(side))
        if kind is Kind.BALLS and typ == "halfspace":
            normal = _numbers(rec.get("normal"), f"{where}: normal", dim)
            return label, HalfSpace(normal, _number(rec.get("offset"), f"{where}: offset"))
        if kind is Kind.POINTS and typ == "finite":
            return label, ExtendedPoint(dim, tuple(_numbers(rec.get("coords"), f"{where}: coords", dim)))
        if kind is Kind.POINTS and typ == "infinity":
            return label, ExtendedPoint.infinity(dim)
    except ParseError:
        raise
    except ValueError as exc:
        raise InvariantError(f"{where}: {exc}") from exc
    raise ParseError(f"{where}: unknown type {typ!r} for a {kind.value} configuration")


def load_config(source):
    """Parse a configuration file (path or already-decoded dict)."""
    data = _read_json(source)
    dim = _header(data, source)
    try:
        kind = Kind(data.get("kind"))
    except ValueError:
        raise ParseError(f"{source}: 'kind' must be 'balls' or 'points'") from None
    items = data.get("items")
    if not isinstance(items, list):
        raise ParseError(f"{source}: 'items' must be a list")
    parsed = [_parse_item(rec, dim, kind, i) for i, rec in enumerate(items)]
    if not parsed:
        raise InvariantError("empty configuration")
    labels = [p[0] for p in parsed]
    try:
        return Configuration(dim, kind, labels, [p[1] for p in parsed])
    except (ValueError, TypeError) as exc:
        raise InvariantError(str(exc)) from exc


def config_to_dict(conf):
    items = []
    for label, x in zip(conf.labels, conf.items):
        if isinstance(x, Sphere):
            items.append({"label": label, "type": "sphere", "center": list(x.center),
                          "radius": x.radius, "side": x.side.value})
        elif isinstance(x, HalfSpace):
            items.append({"label": label, "type": "halfspace", "normal": list(x.normal), "offset": x.offset})
        elif x.is_infinite:
            items.append({"label": label, "type": "infinity"})
        else:
            items.append({"label": label, "type": "finite", "coords": list(x.coords)})
    return {"version": VERSION, "dim": conf.dim, "kind": conf.kind.value, "items": items}


def dumps(obj):
    # json writes floats with repr, the shortest round-trip representation
    return json.dumps(obj, indent=2) + "\n"


def save_config(conf, path):
    Path(path).write_text(dumps(config_to_dict(conf)))


def map_to_dict(g, dim):
    return {"version": VERSION, "dim": dim, "matrix": g.matrix.tolist()}


def load_map(source):
    data = _read_json(source)
    dim = _header(data, source)
    rows = data.get("matrix")
    M = dim + 2
    if not isinstance(rows, list) or len(rows) != M:
        raise ParseError(f"{source}: 'matrix' must have {M} rows")
    matrix = np.array([_numbers(r, f"{source}: matrix row", M) for r in rows])
    g = LorentzMap(matrix)
    rep = validate_lorentz(g)
    if rep.residual > MAP_RESIDUAL_MAX:
        raise InvariantError(f"{source}: matrix is not a Lorentz map (residual {rep.residual:.3g})")
    if rep.residual > MAP_RESIDUAL_WARN:
        log.warning("%s: Lorentz residual %.3g above %.0e", source, rep.residual, MAP_RESIDUAL_WARN)
    return g


def save_map(g, dim, path):
    Path(path).write_text(dumps(map_to_dict(g, dim)))

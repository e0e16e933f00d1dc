"""Fixed-point data of torus actions: model, validation, JSON I/O, toric generators.

Moments are stored as plain integers. They are not shifted to satisfy a
mean-zero normalization: a common shift of all moments multiplies the
character by one monomial and changes no verdict.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as iproduct
from types import MappingProxyType
from typing import Mapping, Sequence, Union

import jsonschema

from .errors import InvariantError, NonIntegerVertex, NotDelzant, NotGeneric, SchemaError

Weight = tuple[int, ...]

_INT = {"type": "integer"}
_IVEC = {"type": "array", "items": _INT}

DATASET_SCHEMA = {
    "oneOf": [
        {
            "type": "object",
            "required": ["kind", "rank", "half_dim", "points"],
            "additionalProperties": False,
            "properties": {
                "kind": {"const": "points"},
                "rank": {"type": "integer", "minimum": 1},
                "half_dim": {"type": "integer", "minimum": 1},
                "points": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "type": "object",
                        "required": ["name", "moment", "weights"],
                        "additionalProperties": False,
                        "properties": {
                            "name": {"type": "string", "minLength": 1},
                            "moment": _IVEC,
                            "weights": {"type": "array", "items": _IVEC},
                        },
                    },
                },
            },
        },
        {
            "type": "object",
            "required": ["kind", "rank", "half_dim", "components"],
            "additionalProperties": False,
            "properties": {
                "kind": {"const": "components"},
                "rank": {"type": "integer", "minimum": 1},
                "half_dim": {"type": "integer", "minimum": 1},
                "components": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "type": "object",
                        "required": ["name", "moment", "weights"],
                        "additionalProperties": False,
                        "properties": {
                            "name": {"type": "string", "minLength": 1},
                            "moment": _IVEC,
                            "weights": {"type": "array", "items": _IVEC},
                            "char_numbers": {
                                "type": "object",
                                "additionalProperties": {"type": "string"},
                            },
                        },
                    },
                },
            },
        },
    ]
}

_RATIONAL = re.compile(r"^(-?\d+)(?:/(\d+))?$")


@dataclass(frozen=True)
class FixedPoint:
    name: str
    moment: tuple[int, ...]
    weights: tuple[Weight, ...]


@dataclass(frozen=True)
class FixedPointSet:
    """Isolated fixed points of a rank-``rank`` torus on a 2*half_dim manifold."""

    rank: int
    half_dim: int
    points: tuple[FixedPoint, ...]

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        _validate_points(self)

    @property
    def names(self) -> list[str]:
        return [p.name for p in self.points]

    def point(self, name: str) -> FixedPoint:
        for p in self.points:
            if p.name == name:
                return p
        raise KeyError(name)

    def all_weights(self) -> list[Weight]:
        return [w for p in self.points for w in p.weights]

    def without(self, *names: str) -> FixedPointSet:
        return FixedPointSet(self.rank, self.half_dim, tuple(p for p in self.points if p.name not in names))

    def negated(self) -> FixedPointSet:
        """Same moments, every weight replaced by its negative."""
        return FixedPointSet(
            self.rank,
            self.half_dim,
            tuple(FixedPoint(p.name, p.moment, tuple(tuple(-x for x in w) for w in p.weights)) for p in self.points),
        )


@dataclass(frozen=True)
class Component:
    """A fixed component F: moment J(F), normal weights, characteristic numbers.

    ``char_numbers`` maps exponent tuples (one entry per normal weight) to
    exact rationals; missing entries are zero, except the all-zeros entry of
    an isolated point, which defaults to one.
    """

    name: str
    moment: tuple[int, ...]
    weights: tuple[Weight, ...]
    char_numbers: Mapping[tuple[int, ...], Fraction] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "char_numbers", MappingProxyType(dict(self.char_numbers)))

    @property
    def codim_half(self) -> int:
        return len(self.weights)

    def char_number(self, nvec: Sequence[int], half_dim: int) -> Fraction:
        nvec = tuple(nvec)
        if nvec in self.char_numbers:
            return self.char_numbers[nvec]
        if len(self.weights) == half_dim and not any(nvec):
            return Fraction(1)
        return Fraction(0)

    def __eq__(self, other):
        if not isinstance(other, Component):
            return NotImplemented
        return (self.name, self.moment, self.weights, dict(self.char_numbers)) == (
            other.name,
            other.moment,
            other.weights,
            dict(other.char_numbers),
        )

    __hash__ = None


@dataclass(frozen=True)
class ComponentSet:
    rank: int
    half_dim: int
    components: tuple[Component, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        _validate_components(self)

    def component(self, name: str) -> Component:
        for c in self.components:
            if c.name == name:
                return c
        raise KeyError(name)

    @classmethod
    def from_points(cls, fps: FixedPointSet) -> ComponentSet:
        """Isolated points viewed as zero-dimensional components."""
        return cls(fps.rank, fps.half_dim, tuple(Component(p.name, p.moment, p.weights) for p in fps.points))


Dataset = Union[FixedPointSet, ComponentSet]


# validation


def _check_vector(vec, length: int, path: str) -> None:
    if len(vec) != length:
        raise InvariantError(f"{path}: expected length {length}, got {len(vec)}")
    for x in vec:
        if not isinstance(x, int) or isinstance(x, bool):
            raise InvariantError(f"{path}: entry {x!r} is not an integer")


def _validate_points(fps: FixedPointSet) -> None:
    if fps.rank < 1 or fps.half_dim < 1:
        raise InvariantError("rank and half_dim must be positive")
    if not fps.points:
        raise InvariantError("points: at least one fixed point is required")
    seen = set()
    for i, p in enumerate(fps.points):
        path = f"points/{i}"
        if p.name in seen:
            raise InvariantError(f"{path}/name: duplicate point name {p.name!r}")
        seen.add(p.name)
        _check_vector(p.moment, fps.rank, f"{path}/moment")
        if len(p.weights) != fps.half_dim:
            raise InvariantError(f"{path}/weights: expected {fps.half_dim} weights, got {len(p.weights)}")
        for j, w in enumerate(p.weights):
            _check_vector(w, fps.rank, f"{path}/weights/{j}")
            if not any(w):
                raise InvariantError(f"{path}/weights/{j}: zero weight at point {p.name!r}")


def _validate_components(cs: ComponentSet) -> None:
    if cs.rank < 1 or cs.half_dim < 1:
        raise InvariantError("rank and half_dim must be positive")
    if not cs.components:
        raise InvariantError("components: at least one component is required")
    seen = set()
    for i, c in enumerate(cs.components):
        path = f"components/{i}"
        if c.name in seen:
            raise InvariantError(f"{path}/name: duplicate component name {c.name!r}")
        seen.add(c.name)
        _check_vector(c.moment, cs.rank, f"{path}/moment")
        s = len(c.weights)
        if s > cs.half_dim:
            raise InvariantError(f"{path}/weights: {s} normal weights exceed half_dim {cs.half_dim}")
        for j, w in enumerate(c.weights):
            _check_vector(w, cs.rank, f"{path}/weights/{j}")
            if not any(w):
                raise InvariantError(f"{path}/weights/{j}: zero weight at component {c.name!r}")
        for key in c.char_numbers:
            if len(key) != s or any(not 0 <= x <= cs.half_dim for x in key):
                raise InvariantError(f"{path}/char_numbers: key {key} must have {s} entries in 0..{cs.half_dim}")


# JSON I/O


def _parse_rational(text: str, path: str) -> Fraction:
    m = _RATIONAL.match(text.strip())
    if not m:
        raise SchemaError(f"{path}: {text!r} is not a rational of the form p/q")
    p = int(m.group(1))
    q = int(m.group(2)) if m.group(2) is not None else 1
    if q == 0:
        raise SchemaError(f"{path}: zero denominator")
    value = Fraction(p, q)
    if (value.numerator, value.denominator) != (p, q):
        raise SchemaError(f"{path}: {text!r} is not in lowest terms")
    return value


def _format_rational(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _parse_key(key: str, path: str) -> tuple[int, ...]:
    if key.strip() == "":
        return ()
    try:
        return tuple(int(part) for part in key.split(","))
    except ValueError:
        raise SchemaError(f"{path}: key {key!r} is not a comma-separated integer tuple") from None


def dataset_from_obj(doc) -> Dataset:
    try:
        jsonschema.validate(doc, DATASET_SCHEMA)
    except jsonschema.ValidationError as exc:
        # oneOf hides the useful message; re-validate against the branch the kind selects
        kind = doc.get("kind") if isinstance(doc, dict) else None
        branch = {"points": 0, "components": 1}.get(kind)
        detail = exc
        if branch is not None:
            detail = next(jsonschema.Draft202012Validator(DATASET_SCHEMA["oneOf"][branch]).iter_errors(doc), exc)
        where = "/".join(str(p) for p in detail.absolute_path) or "<root>"
        raise SchemaError(f"{where}: {detail.message}") from None
    rank, half_dim = doc["rank"], doc["half_dim"]
    if doc["kind"] == "points":
        pts = tuple(
            FixedPoint(p["name"], tuple(p["moment"]), tuple(tuple(w) for w in p["weights"])) for p in doc["points"]
        )
        return FixedPointSet(rank, half_dim, pts)
    comps = []
    for i, c in enumerate(doc["components"]):
        chars = {}
        for key, val in c.get("char_numbers", {}).items():
            path = f"components/{i}/char_numbers/{key}"
            chars[_parse_key(key, path)] = _parse_rational(val, path)
        comps.append(Component(c["name"], tuple(c["moment"]), tuple(tuple(w) for w in c["weights"]), chars))
    return ComponentSet(rank, half_dim, tuple(comps))


def parse_dataset(text: str) -> Dataset:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"<root>: not valid JSON ({exc})") from None
    return dataset_from_obj(doc)


def dataset_to_obj(d: Dataset) -> dict:
    if isinstance(d, FixedPointSet):
        return {
            "kind": "points",
            "rank": d.rank,
            "half_dim": d.half_dim,
            "points": [
                {"name": p.name, "moment": list(p.moment), "weights": [list(w) for w in p.weights]} for p in d.points
            ],
        }
    return {
        "kind": "components",
        "rank": d.rank,
        "half_dim": d.half_dim,
        "components": [
            {
                "name": c.name,
                "moment": list(c.moment),
                "weights": [list(w) for w in c.weights],
                "char_numbers": {
                    ",".join(map(str, k)): _format_rational(v) for k, v in sorted(c.char_numbers.items())
                },
            }
            for c in d.components
        ],
    }


def serialize_dataset(d: Dataset) -> str:
    return _dump(dataset_to_obj(d)) + "\n"


def _dump(obj) -> str:
    """JSON with short integer lists kept on one line."""
    text = json.dumps(obj, indent=2)
    return re.sub(r"\[\s*(-?\d+(?:,\s*-?\d+)*)\s*\]", lambda m: "[" + ", ".join(re.split(r",\s*", m.group(1))) + "]", text)


def load_dataset(path) -> Dataset:
    with open(path, encoding="utf-8") as fh:
        return parse_dataset(fh.read())


def save_dataset(d: Dataset, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_dataset(d))


# toric generation


@dataclass(frozen=True)
class DelzantPolytope:
    """Vertices with the primitive edge directions leaving each of them."""

    dim: int
    vertices: tuple[tuple[int, ...], ...]
    edges: tuple[tuple[Weight, ...], ...]
    names: tuple[str, ...]


def _det(rows: Sequence[Sequence[int]]) -> int:
    """Integer determinant by fraction-free (Bareiss) elimination."""
    m = [list(r) for r in rows]
    n = len(m)
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if m[i][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1] if n else 1


def delzant_polytope(vertices, edges, names: Sequence[str] | None = None) -> DelzantPolytope:
    if not vertices:
        raise NotDelzant("polytope has no vertices")
    dim = len(vertices[0])
    verts = []
    for i, v in enumerate(vertices):
        if len(v) != dim:
            raise NotDelzant(f"vertex {i} has dimension {len(v)}, expected {dim}")
        coords = []
        for x in v:
            if isinstance(x, bool) or Fraction(x).denominator != 1:
                raise NonIntegerVertex(f"vertex {i} has non-integer coordinate {x!r}")
            coords.append(int(x))
        verts.append(tuple(coords))
    if names is None:
        names = _letters(len(verts))
    edge_lists = []
    for i, es in enumerate(edges):
        es = tuple(tuple(int(x) for x in e) for e in es)
        if len(es) != dim or any(len(e) != dim for e in es):
            raise NotDelzant(f"vertex {names[i]} needs {dim} edge vectors of length {dim}")
        if abs(_det(es)) != 1:
            raise NotDelzant(f"edge vectors at vertex {names[i]} do not form a basis of Z^{dim}")
        edge_lists.append(es)
    if len(edge_lists) != len(verts):
        raise NotDelzant("one edge list per vertex is required")
    return DelzantPolytope(dim, tuple(verts), tuple(edge_lists), tuple(names))


def _letters(count: int) -> tuple[str, ...]:
    alphabet = "pqrstuvwxyzabcdefghijklmno"
    if count <= len(alphabet):
        return tuple(alphabet[:count])
    return tuple(f"v{i}" for i in range(count))


def simplex(k: int = 1, dim: int = 2) -> DelzantPolytope:
    """k times the standard simplex: origin first, then k*e_1, ..., k*e_dim."""
    if k < 1:
        raise ValueError("dilation must be positive")
    eye = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    vertices = [(0,) * dim] + [tuple(k * x for x in e) for e in eye]
    edges = [tuple(eye)]
    for i in range(dim):
        es = []
        for j in range(dim):
            if j == i:
                es.append(tuple(-x for x in eye[i]))
            else:
                es.append(tuple(a - b for a, b in zip(eye[j], eye[i])))
        edges.append(tuple(es))
    return delzant_polytope(vertices, edges)


def segment(k: int = 1) -> DelzantPolytope:
    if k < 1:
        raise ValueError("length must be positive")
    return delzant_polytope([(0,), (k,)], [((1,),), ((-1,),)])


def product(a: DelzantPolytope, b: DelzantPolytope) -> DelzantPolytope:
    dim = a.dim + b.dim
    vertices, edges, names = [], [], []
    for (va, ea, na), (vb, eb, nb) in iproduct(zip(a.vertices, a.edges, a.names), zip(b.vertices, b.edges, b.names)):
        vertices.append(va + vb)
        edges.append(tuple(e + (0,) * b.dim for e in ea) + tuple((0,) * a.dim + e for e in eb))
        names.append(f"{na}.{nb}")
    poly = delzant_polytope(vertices, edges, names)
    assert poly.dim == dim
    return poly


def generate_toric(polytope: DelzantPolytope) -> FixedPointSet:
    """One fixed point per vertex: moment = vertex, weights = outgoing edges."""
    pts = tuple(
        FixedPoint(name, v, tuple(es)) for name, v, es in zip(polytope.names, polytope.vertices, polytope.edges)
    )
    return FixedPointSet(polytope.dim, polytope.dim, pts)


def restrict_to_circle(fps: FixedPointSet, X: Sequence[int]) -> FixedPointSet:
    """Fixed-point data of the circle generated by the integer vector X."""
    X = tuple(int(x) for x in X)
    if len(X) != fps.rank:
        raise NotGeneric(f"generator {X} has length {len(X)}, dataset rank is {fps.rank}")
    pts = []
    for p in fps.points:
        ws = []
        for j, w in enumerate(p.weights):
            a = sum(x * y for x, y in zip(w, X))
            if a == 0:
                raise NotGeneric(f"generator {X} is orthogonal to weight {j + 1} {w} at point {p.name!r}")
            ws.append((a,))
        pts.append(FixedPoint(p.name, (sum(x * y for x, y in zip(p.moment, X)),), tuple(ws)))
    return FixedPointSet(1, fps.half_dim, tuple(pts))

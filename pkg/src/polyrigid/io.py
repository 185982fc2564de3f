"""JSON mesh documents.

A document looks like::

    {"geometry": "euclidean", "vertices": 7,
     "triangles": [[0, 1, 2], ...],
     "metric": {"0-1": 1.0, ...},   # or "radii": {"0": 1.0, ...}
     "h": 0}
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DocumentError, InvalidMetric
from .mesh import CirclePackingMetric, PolyhedralMetric, Surface, build_surface, parse_edge_label
from .trig import Geometry


@dataclass
class MeshDocument:
    geometry: Geometry
    vertices: int
    triangles: list
    metric: dict | None = None
    radii: dict | None = None
    h: float = 0.0

    def surface(self) -> Surface:
        return build_surface(self.vertices, self.triangles)

    def polyhedral(self, surface: Surface | None = None) -> PolyhedralMetric:
        if self.metric is None:
            raise InvalidMetric("document has no edge lengths")
        return PolyhedralMetric.from_mapping(surface or self.surface(), self.metric, self.geometry)

    def packing(self, surface: Surface | None = None) -> CirclePackingMetric:
        if self.radii is None:
            raise InvalidMetric("document has no radii")
        return CirclePackingMetric.from_mapping(surface or self.surface(), self.radii, self.geometry)

    def to_dict(self) -> dict:
        out = {
            "geometry": self.geometry.value,
            "vertices": self.vertices,
            "triangles": [list(map(int, t)) for t in self.triangles],
        }
        if self.metric is not None:
            keys = sorted(self.metric, key=parse_edge_label)
            out["metric"] = {k: float(self.metric[k]) for k in keys}
        if self.radii is not None:
            out["radii"] = {str(k): float(self.radii[k]) for k in sorted(self.radii, key=int)}
        out["h"] = float(self.h)
        return out

    def to_json(self) -> str:
        return dumps(self.to_dict())


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _require(raw: dict, key: str, kind):
    if key not in raw:
        raise DocumentError(f"missing field {key!r}")
    val = raw[key]
    if not isinstance(val, kind) or isinstance(val, bool):
        raise DocumentError(f"field {key!r} has the wrong type")
    return val


def parse_document(raw) -> MeshDocument:
    if not isinstance(raw, dict):
        raise DocumentError("a mesh document is a JSON object")
    try:
        geometry = Geometry.parse(_require(raw, "geometry", str))
    except ValueError as exc:
        raise DocumentError(str(exc)) from None
    vertices = _require(raw, "vertices", int)
    triangles = _require(raw, "triangles", list)
    for t in triangles:
        if not (isinstance(t, list) and len(t) == 3 and all(isinstance(x, int) for x in t)):
            raise DocumentError("triangles must be lists of three integers")
    metric = raw.get("metric")
    radii = raw.get("radii")
    try:
        if metric is not None:
            if not isinstance(metric, dict):
                raise DocumentError("metric must be an object")
            for k in metric:
                parse_edge_label(k)
            metric = {k: float(v) for k, v in metric.items()}
        if radii is not None:
            if not isinstance(radii, dict):
                raise DocumentError("radii must be an object")
            radii = {str(int(k)): float(v) for k, v in radii.items()}
        h = float(raw.get("h", 0.0))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, DocumentError):
            raise
        raise DocumentError(f"malformed value: {exc}") from None
    if not np.isfinite(h):
        raise DocumentError("h must be finite")
    return MeshDocument(geometry, vertices, triangles, metric, radii, h)


def loads(text: str) -> MeshDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from None
    return parse_document(raw)


def load_document(path) -> MeshDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from None
    return loads(text)


def load_targets(path) -> dict:
    """Map of edge key (or vertex index) to target curvature."""
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise DocumentError("targets must be a JSON object")
    try:
        return {str(k): float(v) for k, v in raw.items()}
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"malformed target value: {exc}") from None


def document_from_metric(metric, h: float = 0.0) -> MeshDocument:
    s = metric.surface
    doc = MeshDocument(metric.geometry, s.vertex_count, s.triangles.tolist(), h=h)
    if isinstance(metric, CirclePackingMetric):
        doc.radii = metric.as_mapping()
    else:
        doc.metric = metric.as_mapping()
    return doc

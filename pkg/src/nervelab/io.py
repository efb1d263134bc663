"""JSON, CSV and DOT readers and writers for every artifact the CLI touches."""

from __future__ import annotations

import csv
import io as _io
import json
import math
from pathlib import Path
from typing import Any

import numpy as np

from .complex import SimplicialComplex, vertex_key
from .covers import Cover, CoverMap, FiniteMetric, RealInterval, TowerOfCovers
from .generators import SizedBasis
from .metrics import PseudoMetric
from .persistence import PersistenceDiagram
from .pullback import DomainFunction, Mapper


def _vid(x):
    """JSON vertex id -> Python id (lists become tuples)."""
    if isinstance(x, list):
        return tuple(_vid(y) for y in x)
    return x


def _jid(v):
    if isinstance(v, tuple):
        return [_jid(y) for y in v]
    if isinstance(v, np.integer):
        return int(v)
    return v


def read_json(path) -> Any:
    return json.loads(Path(path).read_text())


def write_json(path, data) -> None:
    Path(path).write_text(dumps(data))


def dumps(data) -> str:
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


# complexes -------------------------------------------------------------------

def complex_from_json(data: dict) -> SimplicialComplex:
    verts = [_vid(v) for v in data.get("vertices", [])]
    simplices = [[_vid(v) for v in s] for s in data.get("simplices", [])]
    return SimplicialComplex(verts, simplices, int(data.get("dim_cap", 2)))


def complex_to_json(K: SimplicialComplex) -> dict:
    return {
        "vertices": [_jid(v) for v in K.vertices],
        "simplices": [[_jid(v) for v in s] for s in K.maximal_simplices()],
        "dim_cap": K.dim_cap,
    }


# codomains, functions, covers, towers ------------------------------------------

def codomain_from_json(data: dict):
    kind = data.get("kind")
    if kind == "real":
        lo, hi = data["interval"]
        return RealInterval(float(lo), float(hi))
    if kind == "finite_metric":
        return FiniteMetric(tuple(_vid(p) for p in data["points"]), np.array(data["distances"], dtype=float))
    raise ValueError(f"unknown codomain kind {kind!r}")


def codomain_to_json(Z) -> dict:
    if isinstance(Z, RealInterval):
        return {"kind": "real", "interval": [Z.lo, Z.hi]}
    return {"kind": "finite_metric", "points": [_jid(p) for p in Z.points], "distances": Z.dist.tolist()}


def _resolve_keys(K: SimplicialComplex, values: dict) -> dict:
    by_str: dict = {}
    for v in K.vertices:
        key = json.dumps(_jid(v)) if isinstance(v, tuple) else str(v)
        if key in by_str:
            raise ValueError(f"vertex ids {by_str[key]!r} and {v!r} collide as JSON keys")
        by_str[key] = v
    out = {}
    for k, x in values.items():
        if k not in by_str:
            raise ValueError(f"function value for unknown vertex {k!r}")
        out[by_str[k]] = _vid(x)
    return out


def function_from_json(K: SimplicialComplex, data: dict) -> DomainFunction:
    Z = codomain_from_json(data["codomain"])
    return DomainFunction(K, Z, _resolve_keys(K, data["values"]))


def function_to_json(f: DomainFunction) -> dict:
    values = {}
    for v, x in zip(f.complex.vertices, f.values):
        key = json.dumps(_jid(v)) if isinstance(v, tuple) else str(v)
        values[key] = _jid(x)
    return {"codomain": codomain_to_json(f.codomain), "values": values}


def _elements_from_json(Z, items: list) -> Cover:
    ids, elems, centers = [], [], []
    for k, e in enumerate(items):
        ids.append(_vid(e.get("id", k)))
        if "interval" in e:
            elems.append(tuple(float(x) for x in e["interval"]))
        else:
            elems.append(frozenset(_vid(p) for p in e["points"]))
        centers.append(_vid(e["center"]) if "center" in e else None)
    cent = tuple(centers) if all(c is not None for c in centers) else None
    return Cover(Z, tuple(elems), tuple(ids), cent)


def _elements_to_json(U: Cover) -> list:
    out = []
    for k, e in enumerate(U.elements):
        item = {"id": _jid(U.ids[k])}
        if U.is_real:
            item["interval"] = list(e)
        else:
            item["points"] = [_jid(p) for p in sorted(e, key=vertex_key)]
            if U.centers is not None:
                item["center"] = _jid(U.centers[k])
        out.append(item)
    return out


def cover_from_json(data: dict, codomain=None) -> Cover:
    Z = codomain_from_json(data["codomain"]) if "codomain" in data else codomain
    if Z is None:
        raise ValueError("cover needs a codomain")
    return _elements_from_json(Z, data["elements"])


def cover_to_json(U: Cover) -> dict:
    return {"codomain": codomain_to_json(U.codomain), "elements": _elements_to_json(U)}


def tower_from_json(data: dict) -> TowerOfCovers:
    Z = codomain_from_json(data["codomain"])
    scales, covers = [], []
    for entry in data["scales"]:
        scales.append(float(entry["scale"]))
        covers.append(_elements_from_json(Z, entry["elements"]))
    maps = None
    if data.get("maps") is not None:
        maps = [CoverMap(covers[i], covers[i + 1], a) for i, a in enumerate(data["maps"])]
    return TowerOfCovers(scales, covers, maps)


def tower_to_json(T: TowerOfCovers) -> dict:
    return {
        "codomain": codomain_to_json(T.covers[0].codomain),
        "scales": [{"scale": e, "elements": _elements_to_json(U)} for e, U in zip(T.scales, T.covers)],
        "maps": [list(m.assignment) for m in T.maps],
    }


# matrices and diagrams -----------------------------------------------------------

def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf"
    return repr(float(x))


def _id_token(v) -> str:
    return json.dumps(_jid(v)) if isinstance(v, tuple) else str(v)


def metric_to_csv(d: PseudoMetric) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([_id_token(p) for p in d.points])
    for row in d.matrix:
        w.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def _parse_token(tok: str):
    if tok.startswith("["):
        return _vid(json.loads(tok))
    try:
        return int(tok)
    except ValueError:
        return tok


def metric_from_csv(text: str, K: SimplicialComplex | None = None) -> PseudoMetric:
    rows = list(csv.reader(_io.StringIO(text)))
    header = rows[0]
    if K is not None:
        lookup = {_id_token(v): v for v in K.vertices}
        points = tuple(lookup[t] for t in header)
    else:
        points = tuple(_parse_token(t) for t in header)
    M = np.array([[float(x) for x in r] for r in rows[1:]], dtype=float)
    return PseudoMetric(points, M)


def diagram_to_csv(diagrams: list[PersistenceDiagram]) -> str:
    lines = ["k,birth,death"]
    for D in diagrams:
        for b, d in D.points:
            lines.append(f"{D.dim},{_fmt(b)},{_fmt(d)}")
    return "\n".join(lines) + "\n"


def diagrams_from_csv(text: str) -> dict[int, PersistenceDiagram]:
    rows = list(csv.DictReader(_io.StringIO(text)))
    pts: dict[int, list] = {}
    for r in rows:
        pts.setdefault(int(r["k"]), []).append((float(r["birth"]), float(r["death"])))
    return {k: PersistenceDiagram(k, p) for k, p in pts.items()}


# generator bases -------------------------------------------------------------------

def basis_to_json(B: SizedBasis) -> dict:
    return {
        "mode": B.mode,
        "generators": [{"size": s, "edges": [[_jid(v) for v in e] for e in z.simplex_ids()]}
                       for z, s in zip(B.cycles, B.sizes)],
    }


# DOT exports ------------------------------------------------------------------------

def _dot_id(v) -> str:
    return json.dumps(str(v))


def nerve_to_dot(m: Mapper) -> str:
    pb = m.pullback
    sizes = {lab: len(s) for lab, s in zip(pb.labels, pb.sets)}
    lines = ["graph nerve {"]
    for v in m.nerve.vertices:
        label = f"({v[0]},{v[1]})"
        width = 0.3 + 0.1 * sizes.get(v, 1)
        lines.append(f"  {_dot_id(v)} [label={json.dumps(label)}, width={width:.2f}];")
    for a, b in m.nerve.simplex_ids(1):
        lines.append(f"  {_dot_id(a)} -- {_dot_id(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def reeb_to_json(R) -> dict:
    return {
        "nodes": [{"id": _jid(n), "value": R.values[n], "vertices": [_jid(v) for v in R.absorbed[n]]}
                  for n in R.complex.vertices],
        "edges": [[_jid(a), _jid(b)] for a, b in R.complex.simplex_ids(1)],
        "quotient": {_id_token(v): _jid(n) for v, n in sorted(R.q.items(), key=lambda t: vertex_key(t[0]))},
    }


def reeb_to_dot(R) -> str:
    lines = ["graph reeb {"]
    for n in R.complex.vertices:
        verts = ",".join(str(v) for v in R.absorbed[n])
        label = f"f={R.values[n]:g}" + (f" {{{verts}}}" if verts else "")
        shape = "ellipse" if R.absorbed[n] else "point"
        lines.append(f"  {_dot_id(n)} [label={json.dumps(label)}, shape={shape}];")
    for a, b in R.complex.simplex_ids(1):
        lines.append(f"  {_dot_id(a)} -- {_dot_id(b)};")
    lines.append("}")
    return "\n".join(lines) + "\n"

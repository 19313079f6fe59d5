"""JSON encodings.  Every rational is written as a "p/q" (or integer)
string; field order is fixed so output is deterministic."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .chisel import ChiselSchedule
from .defcone import BVector, Verdict
from .exactgeom import GeneralFan, HPolytope, Row, VPolytope, rat
from .fans import SimplicialFan, WallInequality
from .permutohedra import AlphaBeta
from .posets import PermPair


def q(x) -> str:
    return str(rat(x))


def qvec(v) -> list:
    return [q(x) for x in v]


def parse_ratvec(data) -> tuple:
    if isinstance(data, str):
        data = [p for p in data.split(",") if p.strip()]
    return tuple(rat(x) for x in data)


# ---------------------------------------------------------------------------
# polytopes


def hpolytope_to_json(P: HPolytope) -> dict:
    return {
        "dim": P.dim,
        "equality_rhs": None if P.equality_rhs is None else q(P.equality_rhs),
        "rows": [{"label": r.label, "normal": qvec(r.normal), "rhs": q(r.rhs)} for r in P.rows],
    }


def hpolytope_from_json(data: dict) -> HPolytope:
    rows = tuple(Row(str(r["label"]), parse_ratvec(r["normal"]), rat(r["rhs"]))
                 for r in data["rows"])
    eq = data.get("equality_rhs")
    dim = int(data.get("dim", len(rows[0].normal) if rows else 0))
    return HPolytope(dim, rows, None if eq is None else rat(eq))


def _label_to_json(label):
    if isinstance(label, PermPair):
        return {"pi": list(label.pi), "tau": list(label.tau)}
    if isinstance(label, tuple):
        return list(label)
    return label


def _label_from_json(data):
    if isinstance(data, dict) and "pi" in data:
        return PermPair(tuple(data["pi"]), tuple(data["tau"]))
    if isinstance(data, list):
        return tuple(data)
    return data


def vpolytope_to_json(P: VPolytope) -> dict:
    out = {"dim": P.dim, "vertices": [qvec(v) for v in P.vertices]}
    if P.labels is not None:
        out["labels"] = [_label_to_json(l) for l in P.labels]
    return out


def vpolytope_from_json(data: dict) -> VPolytope:
    verts = tuple(parse_ratvec(v) for v in data["vertices"])
    dim = int(data.get("dim", len(verts[0]) if verts else 0))
    labels = data.get("labels")
    if labels is not None:
        labels = tuple(_label_from_json(l) for l in labels)
    return VPolytope(dim, verts, labels)


# ---------------------------------------------------------------------------
# fans and inequalities


def fan_to_json(F: GeneralFan) -> dict:
    raw = F.raw_map() if isinstance(F, SimplicialFan) else {}
    rays = []
    for label, rep in F.rays:
        entry = {"label": label, "rep": list(rep)}
        if label in raw and tuple(raw[label]) != tuple(Fraction(x) for x in rep):
            entry["raw"] = qvec(raw[label])
        rays.append(entry)
    out = {"rays": rays, "cones": [list(c) for c in F.cones]}
    if not F.quotient:
        out["quotient"] = False
    if isinstance(F, SimplicialFan):
        out["provenance"] = F.provenance
        if F.top is not None:
            out["top"] = F.top
    return out


def fan_from_json(data: dict, simplicial: bool = None) -> GeneralFan:
    rays = tuple((str(r["label"]), tuple(int(x) for x in r["rep"])) for r in data["rays"])
    cones = tuple(tuple(str(l) for l in c) for c in data["cones"])
    quotient = bool(data.get("quotient", True))
    general = GeneralFan(rays, cones, quotient)
    if simplicial is False:
        return general
    dims = {len(c) for c in general.cones}
    if simplicial is None and dims != {general.fan_dim}:
        return general
    raw = tuple((str(r["label"]), parse_ratvec(r["raw"]) if "raw" in r else tuple(r["rep"]))
                for r in data["rays"])
    return SimplicialFan(rays, cones, quotient, raw, data.get("provenance", "custom"),
                         data.get("top"))


def wall_to_json(w: WallInequality) -> dict:
    out = {"lhs": {l: q(c) for l, c in w.lhs},
           "rhs": [[l, q(c)] for l, c in w.rhs]}
    if w.top:
        out["top"] = q(w.top)
        out["top_label"] = w.top_label
    return out


def wall_from_json(data: dict) -> WallInequality:
    lhs = tuple((str(l), rat(c)) for l, c in data.get("lhs", {}).items())
    rhs = tuple((str(l), rat(c)) for l, c in data["rhs"])
    if len(rhs) != 2:
        raise ValueError("rhs needs exactly two terms")
    top = rat(data.get("top", 0))
    return WallInequality(lhs, rhs, top, data.get("top_label"))


def system_to_json(ineqs, **meta) -> dict:
    out = dict(meta)
    out["count"] = len(ineqs)
    out["inequalities"] = [wall_to_json(w) for w in ineqs]
    return out


def system_from_json(data) -> list:
    if isinstance(data, dict):
        data = data["inequalities"]
    return [wall_from_json(w) for w in data]


# ---------------------------------------------------------------------------
# b-vectors, verdicts, parameters


def bvector_to_json(b: BVector) -> dict:
    return {"domain": b.domain, "d": b.d, "values": {l: q(v) for l, v in b.values.items()}}


def bvector_from_json(data) -> BVector:
    if isinstance(data, list):
        raise ValueError("a b-vector needs labels: use {'domain', 'd', 'values'}")
    domain = data.get("domain", "custom")
    return BVector(domain, int(data.get("d", 0)), dict(data["values"]))


def verdict_to_json(v: Verdict) -> dict:
    return {"member": v.member, "certificate": v.certificate}


def verdict_from_json(data: dict) -> Verdict:
    return Verdict(bool(data["member"]), data.get("certificate"))


def alphabeta_to_json(ab: AlphaBeta) -> dict:
    out = {"alpha": qvec(ab.alpha)}
    if ab.beta is not None:
        out["beta"] = qvec(ab.beta)
    if ab.M is not None:
        out["M"] = q(ab.M)
    if ab.N is not None:
        out["N"] = q(ab.N)
    return out


def alphabeta_from_json(data: dict) -> AlphaBeta:
    beta = data.get("beta")
    return AlphaBeta(parse_ratvec(data["alpha"]),
                     None if beta is None else parse_ratvec(beta),
                     None if data.get("M") is None else rat(data["M"]),
                     None if data.get("N") is None else rat(data["N"]))


def schedule_to_json(s: ChiselSchedule) -> dict:
    return {"epsilons": qvec(s.epsilons), "mode": s.mode}


def schedule_from_json(data: dict) -> ChiselSchedule:
    return ChiselSchedule(parse_ratvec(data["epsilons"]), int(data.get("mode", 1)))


def permpair_to_json(p: PermPair) -> dict:
    return {"pi": list(p.pi), "tau": list(p.tau)}


def permpair_from_json(data: dict) -> PermPair:
    return PermPair(tuple(data["pi"]), tuple(data["tau"]))


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2)


def load(path: str):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)

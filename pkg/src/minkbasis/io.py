"""JSON documents emitted by the CLI, and readers that turn them back into objects.

Every document carries a ``"kind"`` tag.  Rationals are written as integers
when integral and as ``"p/q"`` strings otherwise; divisor classes are written
in (a; b) coordinates ``[a, b1, ..., br]`` for del Pezzo surfaces and as raw
coefficient lists for custom surfaces (``"coords"`` says which).
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any

from .cones import Face, FaceLattice
from .errors import InvalidSurface
from .exact_linalg import fmt_rat, rat
from .minkowski import CardinalityReport, MinkowskiBasis
from .ns_lattice import DivisorClass, SurfaceDatum, surface_from_json, surface_to_json
from .okounkov import Polygon
from .zariski import ZariskiDecomposition

KINDS = ("surface", "curves", "chambers", "faces", "zariski", "basis", "report", "decomposition", "okounkov", "tables")


def q(x) -> int | str:
    x = rat(x)
    return int(x) if x.denominator == 1 else fmt_rat(x)


def coords_name(S: SurfaceDatum) -> str:
    return "paper" if S.is_del_pezzo() else "basis"


def class_out(S: SurfaceDatum, D: DivisorClass) -> list:
    return [q(x) for x in (D.paper() if S.is_del_pezzo() else D.coeffs)]


def class_in(coords: str, v) -> DivisorClass:
    vals = [rat(x) for x in v]
    if coords == "paper":
        return DivisorClass.from_paper(*vals)
    return DivisorClass(vals)


def _header(kind: str, S: SurfaceDatum) -> dict:
    return {"kind": kind, "surface": S.name, "rank": S.rank, "coords": coords_name(S)}


# -- writers ---------------------------------------------------------------


def surface_doc(S: SurfaceDatum) -> dict:
    doc = surface_to_json(S)
    doc["kind"] = "surface"
    doc["name"] = S.name
    return doc


def curves_doc(S: SurfaceDatum, curves, nef_nonbig) -> dict:
    doc = _header("curves", S)
    doc["negative_curves"] = [class_out(S, N) for N in curves]
    doc["nef_nonbig"] = [class_out(S, R) for R in nef_nonbig]
    return doc


def chambers_doc(S: SurfaceDatum, count: int, supports=None) -> dict:
    doc = _header("chambers", S)
    doc["count"] = count
    if supports is not None:
        doc["chambers"] = [list(c) for c in supports]
    return doc


def faces_doc(S: SurfaceDatum, F: FaceLattice) -> dict:
    doc = _header("faces", S)
    doc.update(
        f_vector=list(F.f_vector),
        big_vertices=F.big_vertices,
        nonbig_vertices=F.nonbig_vertices,
        rays=[class_out(S, R) for R in F.rays],
        faces=[{"dim": f.dim, "orthogonal_curves": list(f.orthogonal_curves), "rays": list(f.rays)} for f in F.faces],
    )
    return doc


def zariski_doc(S: SurfaceDatum, z: ZariskiDecomposition) -> dict:
    doc = _header("zariski", S)
    doc.update(
        divisor=class_out(S, z.D),
        P=class_out(S, z.P),
        N=class_out(S, z.N),
        support=[class_out(S, S.negative_curves[i]) for i in z.support],
        support_indices=list(z.support),
        coefficients=[q(a) for a in z.coefficients],
    )
    return doc


def basis_doc(S: SurfaceDatum, flag_curve: DivisorClass, B: MinkowskiBasis, provenance: bool = False) -> dict:
    doc = _header("basis", S)
    doc["flag"] = class_out(S, flag_curve)
    doc["elements"] = [class_out(S, E) for E in B.elements]
    if provenance:
        doc["provenance"] = [
            {"element": class_out(S, E), "sources": [s if isinstance(s, str) else list(s) for s in B.provenance[E]]}
            for E in B.elements
        ]
    return doc


def report_doc(S: SurfaceDatum, R: CardinalityReport) -> dict:
    doc = _header("report", S)
    doc.update(NnB=R.NnB, Zar=R.Zar, mb_count=R.mb_count, paper_formula_value=R.paper_formula_value, sum_f=R.sum_f)
    doc["matches"] = R.matches
    return doc


def decomposition_doc(S: SurfaceDatum, D: DivisorClass, terms) -> dict:
    doc = _header("decomposition", S)
    doc["divisor"] = class_out(S, D)
    doc["terms"] = [{"element": class_out(S, E), "coefficient": q(c)} for E, c in terms]
    return doc


def polygon_doc(S: SurfaceDatum, D: DivisorClass, flag_curve: DivisorClass, P: Polygon, area) -> dict:
    doc = _header("okounkov", S)
    doc.update(divisor=class_out(S, D), flag=class_out(S, flag_curve), vertices=P.to_json(), area=q(area))
    return doc


# -- readers ---------------------------------------------------------------


def read_document(doc: dict | str | Path) -> Any:
    """Parse any document written above back into library objects.

    Returns a :class:`SurfaceDatum` for surfaces, otherwise a ``(kind, payload)``
    pair whose payload uses the library's own types.
    """
    if isinstance(doc, (str, Path)):
        doc = json.loads(Path(doc).read_text())
    kind = doc.get("kind")
    if kind is None and "intersection_matrix" in doc:
        kind = "surface"  # hand-written surface files need no tag
    if kind == "surface":
        return surface_from_json(doc, name=doc.get("name", "custom"))
    if kind not in KINDS:
        raise InvalidSurface(f"unknown document kind {kind!r}")
    coords = doc.get("coords", "paper")
    cls = lambda v: class_in(coords, v)  # noqa: E731
    if kind == "curves":
        return kind, ([cls(v) for v in doc["negative_curves"]], [cls(v) for v in doc["nef_nonbig"]])
    if kind == "chambers":
        return kind, (doc["count"], [tuple(c) for c in doc["chambers"]] if "chambers" in doc else None)
    if kind == "faces":
        F = FaceLattice(
            faces=tuple(Face(f["dim"], tuple(f["orthogonal_curves"]), tuple(f["rays"])) for f in doc["faces"]),
            f_vector=tuple(doc["f_vector"]),
            big_vertices=doc["big_vertices"],
            nonbig_vertices=doc["nonbig_vertices"],
            rays=tuple(cls(v) for v in doc["rays"]),
        )
        return kind, F
    if kind == "zariski":
        z = ZariskiDecomposition(
            D=cls(doc["divisor"]),
            P=cls(doc["P"]),
            N=cls(doc["N"]),
            support=tuple(doc["support_indices"]),
            coefficients=tuple(rat(a) for a in doc["coefficients"]),
        )
        return kind, z
    if kind == "basis":
        vecs = [tuple(int(x) for x in cls(v).coeffs) for v in doc["elements"]]
        prov = {}
        for entry in doc.get("provenance", ()):
            prov[cls(entry["element"])] = [s if isinstance(s, str) else tuple(s) for s in entry["sources"]]
        return kind, (cls(doc["flag"]), MinkowskiBasis(vecs, prov))
    if kind == "report":
        keys = ("NnB", "Zar", "mb_count", "paper_formula_value", "sum_f")
        return kind, CardinalityReport(**{k: doc[k] for k in keys})
    if kind == "decomposition":
        return kind, (cls(doc["divisor"]), [(cls(t["element"]), rat(t["coefficient"])) for t in doc["terms"]])
    if kind == "okounkov":
        return kind, (cls(doc["divisor"]), cls(doc["flag"]), Polygon.from_json(doc["vertices"]), rat(doc["area"]))
    return kind, doc  # tables: plain data


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False)


__all__ = [
    "Fraction",
    "read_document",
    "dumps",
    "class_out",
    "class_in",
]

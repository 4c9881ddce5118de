"""JSON readers and writers for matrices, graphs, certificates and points."""

from __future__ import annotations

from .chains import TruncatedPoint, chain_from_json, chain_to_json
from .fields import field_from_name
from .graphs import (
    MigrateEdge,
    Multigraph,
    ReductionCertificate,
    RemoveEdge,
    RemoveLoopedVertex,
)
from .matrix import Matrix


def matrix_to_json(M: Matrix) -> dict:
    f = M.field
    return {
        "field": f.name,
        "rows": [[f.format(M.entry(i, j)) for j in range(M.cols)] for i in range(M.rows)],
    }


def matrix_from_json(obj, field=None) -> Matrix:
    f = field_from_name(obj["field"]) if "field" in obj else field
    if f is None:
        raise ValueError("matrix JSON needs a field")
    rows = [[f.parse(str(v)) for v in row] for row in obj["rows"]]
    return Matrix.from_rows(f, rows)


def graph_to_json(g: Multigraph) -> dict:
    return {"vertices": list(g.vertices), "edges": [[a, b] for a, b in g.edges]}


def graph_from_json(obj) -> Multigraph:
    return Multigraph.make(obj["vertices"], [tuple(e) for e in obj["edges"]])


def certificate_to_json(cert: ReductionCertificate) -> list:
    out = []
    for step in cert.steps:
        if isinstance(step, RemoveEdge):
            out.append({"rule": "remove_edge", "edge": list(step.edge)})
        elif isinstance(step, RemoveLoopedVertex):
            out.append({"rule": "remove_looped_vertex", "vertex": step.vertex})
        else:
            out.append({"rule": "migrate_edge", "edge": list(step.edge), "looped": step.looped})
    return out


def certificate_from_json(obj) -> ReductionCertificate:
    steps = []
    for item in obj:
        rule = item["rule"]
        if rule == "remove_edge":
            steps.append(RemoveEdge(tuple(item["edge"])))
        elif rule == "remove_looped_vertex":
            steps.append(RemoveLoopedVertex(item["vertex"]))
        elif rule == "migrate_edge":
            steps.append(MigrateEdge(tuple(item["edge"]), item["looped"]))
        else:
            raise ValueError(f"unknown rule {rule!r}")
    return ReductionCertificate(tuple(steps))


def point_to_json(pt: TruncatedPoint) -> dict:
    return {
        "chain": chain_to_json(pt.chain),
        "levels": [matrix_to_json(M) for M in pt.reps],
    }


def point_from_json(obj) -> TruncatedPoint:
    chain = chain_from_json(obj["chain"])
    reps = [matrix_from_json(m) for m in obj["levels"]]
    return TruncatedPoint.make(chain, reps)

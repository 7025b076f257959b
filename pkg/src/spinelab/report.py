"""Deterministic markdown and JSON rendering of computed results."""

from __future__ import annotations

import json

from spinelab.spine import QuotientComplex, cell_rows, corpus_json


def dumps(data) -> str:
    """The one JSON format used everywhere, so round-trips are byte-identical."""
    return json.dumps(data, sort_keys=True, indent=2) + "\n"


def census_markdown(cx: QuotientComplex) -> str:
    lines = [
        f"# Census: p = {cx.p}, rank = {cx.rank}",
        "",
        "## Graph classes",
        "",
        "| name | vertices | edges | |Aut| |",
        "|---|---|---|---|",
    ]
    for cls in sorted(cx.classes, key=lambda c: (c.graph.edge_count, c.name)):
        lines.append(
            f"| {cls.name} | {cls.graph.vertex_count} | {cls.graph.edge_count} | {cls.aut_order} |"
        )
    for dim, label in ((1, "1-cells"), (2, "2-cells"), (3, "3-cells")):
        rows = cell_rows(cx, dim)
        if not rows:
            continue
        lines += ["", f"## {label}", "", "| cell | isotropy order |", "|---|---|"]
        for names, iso in rows:
            lines.append(f"| {', '.join(names)} | {iso} |")
    counts = cx.component_vertex_counts()
    lines += ["", f"## Components: {cx.component_count} with vertex counts {sorted(counts)}", ""]
    return "\n".join(lines)


def dims_markdown(title: str, columns: dict, start: int, bound: int) -> str:
    keys = list(columns)
    lines = [f"# {title}", "", "| degree | " + " | ".join(keys) + " |"]
    lines.append("|" + "---|" * (len(keys) + 1))
    for d in range(start, bound + 1):
        lines.append(
            f"| {d} | " + " | ".join(str(columns[k][d]) for k in keys) + " |"
        )
    lines.append("")
    return "\n".join(lines)


def verification_markdown(results) -> str:
    lines = ["# Verification report", "", "| criterion | status | detail |", "|---|---|---|"]
    for r in results:
        status = "pass" if r.passed else "FAIL"
        lines.append(f"| {r.name} | {status} | {r.detail} |")
    lines.append("")
    failed = [r.name for r in results if not r.passed]
    lines.append(
        "All criteria passed." if not failed else f"Failed: {', '.join(failed)}"
    )
    lines.append("")
    return "\n".join(lines)


def corpus_document(cx: QuotientComplex) -> str:
    return dumps(corpus_json(cx))

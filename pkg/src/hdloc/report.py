"""CSV and Markdown renderings of table artifacts and test results."""

from __future__ import annotations

import csv
import io

from .tables import TableArtifact

ARE_RATIO_LABELS = {"ss_cq": "ARE(SS,CQ)", "sr_cq": "ARE(SR,CQ)", "sr_ss": "ARE(SR,SS)"}


def artifact_to_csv(art: TableArtifact) -> str:
    buf = io.StringIO()
    if not art.rows:
        return ""
    fields = list(art.rows[0].keys())
    writer = csv.DictWriter(buf, fieldnames=fields)
    writer.writeheader()
    for row in art.rows:
        writer.writerow(row)
    return buf.getvalue()


def parse_power_csv(text: str) -> list[dict]:
    """Inverse of artifact_to_csv for size/power artifacts."""
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        parsed = dict(row)
        for k in ("n", "p"):
            if k in parsed:
                parsed[k] = int(parsed[k])
        for k in ("value", "stderr", "reference", "deviation", "se", "rel_deviation"):
            if k in parsed and parsed[k] not in ("", None):
                parsed[k] = float(parsed[k])
        out.append(parsed)
    return out


def _md_table(header: list[str], body: list[list[str]]) -> list[str]:
    lines = ["| " + " | ".join(header) + " |",
             "|" + "|".join("---" for _ in header) + "|"]
    for row in body:
        lines.append("| " + " | ".join(row) + " |")
    return lines


def artifact_to_markdown(art: TableArtifact) -> str:
    if art.kind == "are":
        return _are_markdown(art)
    return _size_power_markdown(art)


def _are_markdown(art: TableArtifact) -> str:
    dists = []
    for r in art.rows:
        if r["distribution"] not in dists:
            dists.append(r["distribution"])
    values = {(r["distribution"], r["ratio"]): r for r in art.rows}
    lines = [f"# Table {art.table_id}: asymptotic relative efficiencies", ""]
    lines += [f"p={art.meta.get('p')}, reps={art.meta.get('reps')}, "
              f"seed={art.meta.get('master_seed')}", ""]
    header = ["ratio"] + dists
    body = []
    for ratio in ("ss_cq", "sr_cq", "sr_ss"):
        body.append([ARE_RATIO_LABELS[ratio]] + [f"{values[(d, ratio)]['value']:.2f}" for d in dists])
    lines += _md_table(header, body)
    lines += ["", "Deviation from reference:", ""]
    body = []
    for ratio in ("ss_cq", "sr_cq", "sr_ss"):
        body.append([ARE_RATIO_LABELS[ratio]]
                    + [f"{values[(d, ratio)]['deviation']:+.2f}" for d in dists])
    lines += _md_table(header, body)
    return "\n".join(lines) + "\n"


def _size_power_markdown(art: TableArtifact) -> str:
    rows = {(r["scenario"], r["n"], r["p"], r["allocation"], r["test"]): r for r in art.rows}
    scenarios, cells, tests, allocations = [], [], [], []
    for r in art.rows:
        if r["scenario"] not in scenarios:
            scenarios.append(r["scenario"])
        if (r["n"], r["p"]) not in cells:
            cells.append((r["n"], r["p"]))
        if r["test"] not in tests:
            tests.append(r["test"])
        if r["allocation"] not in allocations:
            allocations.append(r["allocation"])
    alloc_title = {"null": "Size", "dense": "Dense", "sparse": "Sparse"}

    lines = [f"# Table {art.table_id}: empirical rejection rates (%) at "
             f"alpha={art.meta.get('alpha')}", ""]
    lines += [f"reps={art.meta.get('reps')}, signal={art.meta.get('signal')}, "
              f"seed={art.meta.get('master_seed')}", ""]
    header = ["n", "p"] + [f"{alloc_title[a]} {t.upper()}" for a in allocations for t in tests]
    for scen in scenarios:
        lines.append(f"## Scenario {scen}")
        lines.append("")
        body, dev_body = [], []
        for (n, p) in cells:
            vals, devs = [str(n), str(p)], [str(n), str(p)]
            for a in allocations:
                for t in tests:
                    r = rows.get((scen, n, p, a, t))
                    vals.append("" if r is None else f"{r['value']:.1f}")
                    devs.append("" if r is None or r["deviation"] is None
                                else f"{r['deviation']:+.1f}")
            body.append(vals)
            dev_body.append(devs)
        lines += _md_table(header, body)
        lines += ["", "Deviation from reference:", ""]
        lines += _md_table(header, dev_body)
        lines.append("")
    return "\n".join(lines) + "\n"

"""CSV and Markdown emission for verification reports."""

from __future__ import annotations

import csv
import io
import math
from pathlib import Path

from .verify import MODES, BoundReport, verify

CSV_FIELDS = (
    "scenario", "theorem", "mode", "r", "lhs_norm", "bound_value", "margin", "arg_p", "arg_t", "finite", "pass",
)
THEOREM_ORDER = ("2.1", "3.1", "4.1")
SECTION_OF = {"2.1": "nemytskii", "3.1": "urysohn", "4.1": "hammerstein"}


def fmt(x) -> str:
    """Numbers at 12 significant digits; strings pass through, None is empty."""
    if x is None:
        return ""
    if isinstance(x, str):
        return x
    if isinstance(x, bool):
        return "true" if x else "false"
    x = float(x)
    if math.isnan(x):
        return "nan"
    return "%.12g" % x


def report_rows(report: BoundReport):
    for row in report.rows:
        ok = (not row.finite) or row.margin >= -report.allowance
        yield {
            "scenario": report.scenario,
            "theorem": report.theorem,
            "mode": report.mode,
            "r": fmt(row.r),
            "lhs_norm": fmt(row.lhs_norm),
            "bound_value": fmt(row.bound_value),
            "margin": fmt(row.margin),
            "arg_p": fmt(row.arg_p),
            "arg_t": fmt(row.arg_t),
            "finite": fmt(row.finite),
            "pass": fmt(ok),
        }


def to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for rep in reports:
        writer.writerows(report_rows(rep))
    return buf.getvalue()


def to_markdown(reports) -> str:
    lines = [
        "| scenario | theorem | mode | GLS lhs | GLS rhs | min margin | precondition | pass |",
        "|---|---|---|---|---|---|---|---|",
    ]
    for rep in reports:
        pre = "ok" if rep.precondition_ok else "failed: " + "; ".join(rep.notes)
        lines.append(
            f"| {rep.scenario} | {rep.theorem} | {rep.mode} | {fmt(rep.lhs_gls)} | {fmt(rep.rhs_gls)} "
            f"| {fmt(rep.min_margin)} | {pre} | {'yes' if rep.all_pass else 'NO'} |"
        )
    passed = sum(r.all_pass for r in reports)
    lines.append("")
    lines.append(f"{passed} of {len(reports)} reports pass.")
    return "\n".join(lines) + "\n"


def verify_all(scenarios, theorems=THEOREM_ORDER, modes=MODES) -> list[BoundReport]:
    """Reports in (scenario index, theorem, mode) order; scenarios lacking a section are skipped."""
    out = []
    for scen in scenarios:
        for th in theorems:
            if scen.has(SECTION_OF[th]):
                out.extend(verify(scen, th, modes))
    return out


def run_report(scenarios, theorems=THEOREM_ORDER, out_dir=None, formats=("csv", "md"), modes=MODES):
    """Verify, write ``report.csv`` / ``report.md`` under ``out_dir`` and return (reports, status, texts).

    The status is 0 iff every report passes; ``texts`` maps format to content.
    """
    reports = verify_all(scenarios, theorems, modes)
    texts = {"csv": to_csv(reports), "md": to_markdown(reports)}
    if out_dir is not None:
        out = Path(out_dir)
        try:
            out.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise OSError(f"cannot create {out}: {exc.strerror}") from exc
        for kind in formats:
            path = out / f"report.{kind}"
            try:
                path.write_text(texts[kind])
            except OSError as exc:
                raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    status = 0 if all(r.all_pass for r in reports) else 1
    return reports, status, texts

"""Render experiment reports as aligned text, JSON, CSV and SVG files."""
from __future__ import annotations

import json
import os
import shutil
import tempfile
from pathlib import Path

from . import network as nn
from .evaluation import RocCurve, roc_svg
from .harness import ExperimentReport, PhaseRecord, RunRecord

ALL_FORMATS = ("text", "json", "csv", "svg", "model")


def pct(v: float | None) -> str:
    return "undefined" if v is None else f"{100.0 * v:.3f} %"


def num(v: float | None, digits: int = 4) -> str:
    return "undefined" if v is None else f"{v:.{digits}f}"


def _table(header: list[str], rows: list[list[str]]) -> str:
    cols = [header] + rows
    widths = [max(len(r[i]) for r in cols) for i in range(len(header))]
    fmt = lambda r: "  ".join(c.ljust(w) if i == 0 else c.rjust(w) for i, (c, w) in enumerate(zip(r, widths)))
    rule = "-" * len(fmt(header))
    return "\n".join([fmt(header), rule] + [fmt(r) for r in rows]) + "\n"


def _label(run: RunRecord, many: bool) -> str:
    return f"{run.model} [seed {run.seed}]" if many else run.model


def table1(report: ExperimentReport) -> str:
    many = len(report.runs) > len(report.models())
    rows = [[_label(r, many), str(r.samples), str(r.dimensions), f"{r.run_time:.3f}s",
             pct(r.train.rate), pct(r.test.rate)] for r in report.runs]
    if many:
        rows += [[f"{s['model']} [median]", str(s["samples"]), str(s["dimensions"]), f"{s['run_time']:.3f}s",
                  pct(s["training_rate"]), pct(s["testing_rate"])] for s in report.summary()]
    return _table(["Model", "Samples", "Dimensions", "Run time", "Training rate", "Testing rate"], rows)


def _phase_row(name: str, p: PhaseRecord) -> list[str]:
    return [name, "Tr." if p.phase == "train" else "Ts.", str(p.pos_cases), str(p.pos_correct),
            pct(p.pos_accuracy), str(p.neg_cases), str(p.neg_correct), pct(p.neg_accuracy),
            f"{p.mse:.5f}", pct(p.rate)]


def table2(report: ExperimentReport) -> str:
    many = len(report.runs) > len(report.models())
    rows = []
    for r in report.runs:
        rows.append(_phase_row(_label(r, many), r.train))
        rows.append(_phase_row("", r.test))
    return _table(["Model", "Train/Test", "Pos. case", "Correct predicts", "Accuracy", "Neg. case",
                   "Correct predicts", "Accuracy", "MSE", "Rate"], rows)


def table3(report: ExperimentReport) -> str:
    many = len(report.runs) > len(report.models())
    rows = [[_label(r, many), num(r.metrics["sensitivity"]), num(r.metrics["specificity"]),
             num(r.metrics["ppv"]), num(r.metrics["npv"]), pct(r.metrics["accuracy"])] for r in report.runs]
    return _table(["Model", "Sensitivity", "Specificity", "PPV", "NPV", "Accuracy"], rows)


def render_text(report: ExperimentReport) -> str:
    sp = report.split
    head = (f"split: {sp.mode.value} seed {sp.seed}; train {len(sp.train)} "
            f"({sp.train.n_positive} pos / {sp.train.n_negative} neg), test {len(sp.test)} "
            f"({sp.test.n_positive} pos / {sp.test.n_negative} neg)\n")
    return "\n".join([
        head,
        "Correct classification rates\n" + table1(report),
        "Per-class performance\n" + table2(report),
        "Test-set reliability metrics\n" + table3(report),
    ])


def dumps_json(doc) -> str:
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def metrics_csv(run: RunRecord) -> str:
    m = run.metrics
    keys = ["tp", "fp", "tn", "fn", "sensitivity", "specificity", "ppv", "npv", "accuracy", "mse"]
    vals = ["" if m[k] is None else repr(m[k]) for k in keys]
    return ",".join(["model", "seed"] + keys) + "\n" + ",".join([run.model, str(run.seed)] + vals) + "\n"


def history_csv(run: RunRecord) -> str:
    return "iteration,best_fitness\n" + "".join(f"{t},{f!r}\n" for t, f in run.history)


def _curve(run: RunRecord) -> RocCurve | None:
    if run.roc_auc is None:
        return None
    return RocCurve(tuple(run.roc_fpr), tuple(run.roc_tpr), run.roc_auc)


def render_files(report: ExperimentReport, formats) -> dict[str, str]:
    """Map of file name to content for the requested formats."""
    formats = set(formats)
    unknown = formats - set(ALL_FORMATS)
    if unknown:
        raise ValueError(f"unknown report format(s): {', '.join(sorted(unknown))}")
    files = {}
    if "text" in formats:
        files["tables.txt"] = render_text(report)
    if "json" in formats:
        files["report.json"] = dumps_json(report.as_dict())
        for r in report.runs:
            files[f"{r.stem}.json"] = dumps_json(r.as_dict())
    if "csv" in formats:
        for r in report.runs:
            files[f"{r.stem}_metrics.csv"] = metrics_csv(r)
            files[f"{r.stem}_history.csv"] = history_csv(r)
            if _curve(r):
                files[f"{r.stem}_roc.csv"] = _curve(r).to_csv()
    if "svg" in formats:
        curves = {}
        for r in report.runs:
            c = _curve(r)
            if c:
                files[f"{r.stem}_roc.svg"] = roc_svg({r.model: c}, title=f"ROC {r.model}")
                curves.setdefault(r.model, c)
        if len(curves) > 1:
            files["roc_all.svg"] = roc_svg(curves, title="ROC (test split)")
    if "model" in formats:
        for r in report.runs:
            files[f"{r.stem}.model"] = nn.dumps_model(r.spec, r.params)
        files["split_manifest.json"] = dumps_json(report.split.manifest())
    return files


def emit_reports(report: ExperimentReport, formats, outdir: str | os.PathLike) -> list[Path]:
    """Write all files or none: content is staged in a scratch directory and
    moved into ``outdir`` once everything rendered and was written."""
    files = render_files(report, formats)
    if not files:
        return []
    outdir = Path(outdir)
    try:
        outdir.mkdir(parents=True, exist_ok=True)
        stage = Path(tempfile.mkdtemp(prefix=".staging-", dir=outdir))
    except OSError as exc:
        raise OSError(f"cannot write reports to {outdir}: {exc}") from exc
    written = []
    try:
        for name, text in files.items():
            (stage / name).write_text(text, encoding="utf-8")
        for name in files:
            os.replace(stage / name, outdir / name)
            written.append(outdir / name)
        return written
    except OSError as exc:
        for path in written:
            path.unlink(missing_ok=True)
        raise OSError(f"cannot write reports to {outdir}: {exc}") from exc
    finally:
        shutil.rmtree(stage, ignore_errors=True)


def strip_run_time(doc):
    """Copy of a report document without wall-clock fields."""
    if isinstance(doc, dict):
        return {k: strip_run_time(v) for k, v in doc.items() if k != "run_time"}
    if isinstance(doc, list):
        return [strip_run_time(v) for v in doc]
    return doc


__all__ = ["ALL_FORMATS", "emit_reports", "render_files", "render_text", "strip_run_time",
           "table1", "table2", "table3"]

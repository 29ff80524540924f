"""Serialization of campaign reports to json, csv and plain text.

Numbers are written as strings so nothing is lost on the way through a
json parser: exact values as ``"p/q"`` (or ``"p"``), floats with 17
significant digits.  Which of the two a field holds follows from the
``mode`` of its instance, so :func:`load_report` can rebuild every value
exactly.
"""
from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction

from .bounds import BoundRecord, Check
from .campaign import InstanceReport, Report
from .errors import InvalidArgument, IoFailure
from .graph import FLOAT

FORMATS = ("json", "csv", "text")

CSV_COLUMNS = ("instance", "name", "mode", "source", "target", "kind", "exact", "bound", "slack", "passed")


def encode_number(x):
    """Fraction/int to ``"p/q"``; float to 17 significant digits; None stays None."""
    if x is None or isinstance(x, bool):
        return x
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".17g")
    return str(Fraction(x))


def decode_number(s, mode: str):
    if s is None:
        return None
    return float(s) if mode == FLOAT else Fraction(s)


def _record(r: BoundRecord) -> dict:
    return {
        "source": r.source, "target": r.target, "kind": r.kind,
        "exact": encode_number(r.exact), "bound": encode_number(r.bound),
        "slack": encode_number(r.slack), "passed": r.passed,
    }


def _check(c: Check) -> dict:
    return {"name": c.name, "target": c.target, "passed": c.passed, "detail": c.detail}


def _simulation(s: dict) -> dict:
    return {k: (encode_number(v) if k in ("exact", "mean", "half_width") else v) for k, v in s.items()}


def _instance(i: InstanceReport) -> dict:
    return {
        "index": i.index, "name": i.name, "family": i.family, "n": i.n, "m": i.m,
        "mode": i.mode, "simple": i.simple, "tau": encode_number(i.tau), "target": i.target,
        "max_hitting": encode_number(i.max_hitting), "sharp": i.sharp, "unit_path": i.unit_path,
        "residual": encode_number(i.residual), "passed": i.passed, "error": i.error,
        "records": [_record(r) for r in i.records],
        "checks": [_check(c) for c in i.checks],
        "simulations": [_simulation(s) for s in i.simulations],
    }


def _summary(report: Report) -> dict:
    s = report.summary()
    s["min_slack"] = encode_number(s["min_slack"])
    s["max_slack"] = encode_number(s["max_slack"])
    s["version"] = report.version
    return s


def to_document(report: Report) -> dict:
    return {
        "config": report.config,
        "instances": [_instance(i) for i in report.instances],
        "summary": _summary(report),
    }


def emit_report(report: Report, format: str = "json") -> str:
    """Render ``report`` as a json, csv or text document (a string)."""
    if format == "json":
        return json.dumps(to_document(report), indent=2) + "\n"
    if format == "csv":
        return _csv(report)
    if format == "text":
        return _text(report)
    raise InvalidArgument(f"unknown format {format!r}; expected one of {', '.join(FORMATS)}")


def _csv(report: Report) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for i in report.instances:
        for r in i.records:
            w.writerow([i.index, i.name, i.mode, r.source, r.target, r.kind,
                        encode_number(r.exact), encode_number(r.bound), encode_number(r.slack),
                        "pass" if r.passed else "FAIL"])
    return buf.getvalue()


def _text(report: Report) -> str:
    s = report.summary()
    lines = [
        f"walkbound {report.version}: {s['instances']} instance(s), {s['records']} bound evaluations, "
        f"{s['checks']} checks",
        f"violations: {s['violations']}  failed checks: {s['failed_checks']}  errors: {s['errors']}",
        f"slack: min {encode_number(s['min_slack'])}  max {encode_number(s['max_slack'])}",
    ]
    for i in report.instances:
        status = "PASS" if i.passed else "FAIL"
        slack = max((r.slack for r in i.records), default=None)
        lines.append(f"[{status}] #{i.index} {i.name}: n={i.n} m={i.m} a={i.target} mode={i.mode} "
                     f"max H={encode_number(i.max_hitting)} max slack={encode_number(slack)}"
                     + (f" sharp={i.sharp}" if i.sharp is not None else ""))
        if i.error:
            lines.append(f"    error: {i.error}")
        for r in i.violations:
            lines.append(f"    violation: {r.kind} H({r.source},{r.target})={encode_number(r.exact)} "
                         f"> {encode_number(r.bound)}")
        for c in i.failed_checks:
            lines.append(f"    failed check: {c.name} at {c.target} {c.detail}".rstrip())
        for sim in i.simulations:
            lines.append(f"    simulated H({sim['source']},{sim['target']}): mean {sim['mean']:.6g} "
                         f"+- {sim['half_width']:.3g} vs exact {encode_number(sim['exact'])}")
    lines.append("PASS" if report.passed else "FAIL")
    return "\n".join(lines) + "\n"


def write_document(text: str, path=None, stream=None):
    """Write ``text`` to ``path``, or to ``stream`` (stdout) when no path is given."""
    if path is None:
        import sys
        (stream or sys.stdout).write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def load_report(text: str) -> Report:
    """Inverse of ``emit_report(report, "json")``."""
    doc = json.loads(text)
    instances = []
    for d in doc["instances"]:
        mode = d["mode"]
        num = lambda s: decode_number(s, mode)  # noqa: E731
        inst = InstanceReport(
            d["index"], d["name"], d["family"], d["n"], d["m"], mode, d["simple"], num(d["tau"]),
            d["target"], num(d["max_hitting"]), d["sharp"], d["unit_path"],
            None if d["residual"] is None else float(d["residual"]),
            error=d["error"],
        )
        inst.records = [BoundRecord(r["source"], r["target"], r["kind"], num(r["exact"]), num(r["bound"]),
                                    num(r["slack"]), r["passed"]) for r in d["records"]]
        inst.checks = [Check(c["name"], c["target"], c["passed"], c["detail"]) for c in d["checks"]]
        inst.simulations = [
            {k: (float(v) if k in ("mean", "half_width") else num(v) if k == "exact" else v)
             for k, v in s.items()}
            for s in d["simulations"]
        ]
        instances.append(inst)
    return Report(doc["config"], doc["summary"]["version"], instances)

"""CSV and JSON output of verification records.

Output is byte-identical for identical records: floats are written with
``repr`` and the JSON keys are sorted.
"""

import csv
import io
import json
import os
from collections import Counter

from .verify import VerificationRecord

CSV_COLUMNS = ("check_id", "domain", "beta", "func_id", "lhs", "rhs", "constants",
               "margin", "status", "err_estimate", "runtime_ms")
CSV_NAME = "records.csv"
JSON_NAME = "records.json"


def _num(x):
    return "" if x is None else repr(float(x))


def _json_num(x):
    # JSON has no infinities or NaNs; keep them readable as strings
    if x is None:
        return None
    x = float(x)
    return x if x == x and abs(x) != float("inf") else repr(x)


def records_to_csv(records):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow([r.check_id, r.domain, _num(r.beta), r.func_id, _num(r.lhs),
                         _num(r.rhs), r.constants_text(), _num(r.margin), r.status,
                         _num(r.err_estimate), _num(r.runtime_ms)])
    return buf.getvalue()


def summarize(records):
    """``{check_id: {"pass": n, "fail": m}}`` in check order of appearance."""
    out = {}
    for r in records:
        out.setdefault(r.check_id, Counter())[r.status] += 1
    return {k: {"pass": v["pass"], "fail": v["fail"]} for k, v in out.items()}


def records_to_json(records):
    rows = []
    for r in records:
        rows.append({
            "check_id": r.check_id, "domain": r.domain, "beta": _json_num(r.beta),
            "func_id": r.func_id, "lhs": _json_num(r.lhs), "rhs": _json_num(r.rhs),
            "constants": {k: _json_num(v) for k, v in r.constants},
            "margin": _json_num(r.margin), "status": r.status,
            "err_estimate": _json_num(r.err_estimate), "runtime_ms": _json_num(r.runtime_ms),
            "note": r.note,
        })
    doc = {"records": rows, "summary": summarize(records)}
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def write_reports(records, directory, formats=("csv", "json")):
    """Write the requested formats into ``directory``; returns the paths."""
    if not records:
        raise ValueError("no records to report")
    try:
        os.makedirs(directory, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create report directory {directory}: {exc.strerror}") from None
    paths = []
    for fmt in formats:
        name, text = {"csv": (CSV_NAME, records_to_csv),
                      "json": (JSON_NAME, records_to_json)}[fmt]
        path = os.path.join(directory, name)
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text(records))
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror}") from None
        paths.append(path)
    return paths


def _float(x):
    return float(x) if x is not None else None


def read_records(directory):
    """Load records back from ``records.json`` in ``directory``."""
    path = os.path.join(directory, JSON_NAME)
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    out = []
    for row in doc["records"]:
        out.append(VerificationRecord(
            row["check_id"], row["domain"], _float(row["beta"]), row["func_id"],
            _float(row["lhs"]), _float(row["rhs"]),
            tuple((k, _float(v)) for k, v in row["constants"].items()),
            _float(row["margin"]), row["status"], _float(row["err_estimate"]),
            _float(row["runtime_ms"]), row.get("note", "")))
    return out

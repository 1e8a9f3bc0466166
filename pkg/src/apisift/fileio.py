"""On-disk formats shared across commands.

All artifacts are plain text with deterministic byte layout: JSON uses
sorted keys, JSON Lines and CSV rows are emitted in sorted signature
order, and every file ends with a newline.  Writes go through a
temporary file in the target directory followed by an atomic rename, so
readers never observe partial output.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .corpus import MethodRecord
from .errors import FormatError
from .evalkit import LABELS


# ---------------------------------------------------------------------------
# atomic writes and digests


def write_text_atomic(path: str | os.PathLike, text: str) -> None:
    """Write via a sibling temp file and rename into place."""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def json_text(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def write_json_atomic(path: str | os.PathLike, doc) -> None:
    write_text_atomic(path, json_text(doc))


def read_json(path: str | os.PathLike) -> dict:
    try:
        with open(path, encoding="utf-8") as handle:
            return json.load(handle)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: invalid JSON ({exc})") from exc


def file_digest(path: str | os.PathLike) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()


# ---------------------------------------------------------------------------
# vector store (JSON Lines, one {"sig": ..., "vec": [...]} per line)


def vector_store_text(vectors: dict[str, np.ndarray], dim: int) -> str:
    out = io.StringIO()
    for sig in sorted(vectors):
        values = np.asarray(vectors[sig], dtype=np.float64)
        if values.shape != (dim,):
            raise FormatError(f"vector for {sig} has shape {values.shape}, expected ({dim},)")
        row = {"sig": sig, "vec": [float(v) for v in values]}
        out.write(json.dumps(row, sort_keys=True) + "\n")
    return out.getvalue()


def write_vector_store(path: str | os.PathLike, vectors: dict[str, np.ndarray], dim: int) -> None:
    write_text_atomic(path, vector_store_text(vectors, dim))


def read_vector_store(path: str | os.PathLike, dim: int) -> dict[str, np.ndarray]:
    """Validated signature -> vector map; rejects duplicates and bad rows."""
    vectors: dict[str, np.ndarray] = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}:{lineno}: invalid JSON ({exc})") from exc
            if not isinstance(row, dict) or "sig" not in row or "vec" not in row:
                raise FormatError(f"{path}:{lineno}: expected an object with sig and vec")
            sig = row["sig"]
            if not isinstance(sig, str):
                raise FormatError(f"{path}:{lineno}: sig must be a string")
            if sig in vectors:
                raise FormatError(f"{path}:{lineno}: duplicate signature {sig}")
            vec = row["vec"]
            if not isinstance(vec, list) or len(vec) != dim:
                raise FormatError(
                    f"{path}:{lineno}: vector must have {dim} values, got "
                    f"{len(vec) if isinstance(vec, list) else type(vec).__name__}"
                )
            values = np.empty(dim, dtype=np.float64)
            for i, v in enumerate(vec):
                if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
                    raise FormatError(f"{path}:{lineno}: component {i} is not a finite number")
                values[i] = float(v)
            vectors[sig] = values
    return vectors


# ---------------------------------------------------------------------------
# corpus (JSON Lines, one method record per line)

_CORPUS_FIELDS = (
    "fqcn",
    "name",
    "params",
    "returnType",
    "modifiers",
    "bodyText",
    "docText",
    "docOrigin",
)


def corpus_text(records: list[MethodRecord]) -> str:
    out = io.StringIO()
    for record in sorted(records, key=lambda r: r.signature):
        row = {
            "fqcn": record.fqcn,
            "name": record.name,
            "params": list(record.params),
            "returnType": record.return_type,
            "modifiers": sorted(record.modifiers),
            "bodyText": record.body_text,
            "docText": record.doc_text,
            "docOrigin": record.doc_origin,
        }
        out.write(json.dumps(row, sort_keys=True) + "\n")
    return out.getvalue()


def write_corpus(path: str | os.PathLike, records: list[MethodRecord]) -> None:
    write_text_atomic(path, corpus_text(records))


def read_corpus(path: str | os.PathLike) -> list[MethodRecord]:
    records: list[MethodRecord] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}:{lineno}: invalid JSON ({exc})") from exc
            missing = [f for f in _CORPUS_FIELDS if f not in row]
            if missing:
                raise FormatError(f"{path}:{lineno}: missing fields {missing}")
            record = MethodRecord(
                fqcn=row["fqcn"],
                name=row["name"],
                params=tuple(row["params"]),
                return_type=row["returnType"],
                modifiers=frozenset(row["modifiers"]),
                body_text=row["bodyText"],
                doc_text=row["docText"],
                doc_origin=row["docOrigin"],
            )
            if record.signature in seen:
                raise FormatError(f"{path}:{lineno}: duplicate signature {record.signature}")
            seen.add(record.signature)
            records.append(record)
    return records


# ---------------------------------------------------------------------------
# labels CSV (signature,label,rater)

LABELS_HEADER = ["signature", "label", "rater"]


def labels_text(rows: list[tuple[str, str, str]]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(LABELS_HEADER)
    for signature, label, rater in rows:
        writer.writerow([signature, label, rater])
    return out.getvalue()


def write_labels(path: str | os.PathLike, rows: list[tuple[str, str, str]]) -> None:
    write_text_atomic(path, labels_text(rows))


def read_labels(path: str | os.PathLike) -> list[tuple[str, str, str]]:
    rows: list[tuple[str, str, str]] = []
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != LABELS_HEADER:
            raise FormatError(f"{path}: expected header {','.join(LABELS_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise FormatError(f"{path}:{lineno}: expected 3 columns, got {len(row)}")
            signature, label, rater = row
            if label not in LABELS:
                raise FormatError(f"{path}:{lineno}: unknown label {label!r}")
            rows.append((signature, label, rater))
    return rows


def training_labels(rows: list[tuple[str, str, str]]) -> dict[str, str]:
    """Collapse rater rows to one label per signature; raters must agree."""
    out: dict[str, str] = {}
    for signature, label, _rater in rows:
        if signature in out and out[signature] != label:
            raise FormatError(
                f"conflicting labels for {signature}: {out[signature]} vs {label}"
            )
        out[signature] = label
    return out


# ---------------------------------------------------------------------------
# predictions CSV (signature,label,p_source,p_sink,p_neither)

PREDICTIONS_HEADER = ["signature", "label", "p_source", "p_sink", "p_neither"]


def predictions_text(predictions: dict[str, tuple[str, np.ndarray]]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(PREDICTIONS_HEADER)
    for sig in sorted(predictions):
        label, probs = predictions[sig]
        probs = np.asarray(probs, dtype=np.float64)
        if probs.shape != (len(LABELS),):
            raise FormatError(
                f"prediction for {sig} needs {len(LABELS)} probabilities, got {probs.shape}"
            )
        writer.writerow([sig, label] + [repr(float(p)) for p in probs])
    return out.getvalue()


def write_predictions(path: str | os.PathLike, predictions: dict[str, tuple[str, np.ndarray]]) -> None:
    write_text_atomic(path, predictions_text(predictions))


def read_predictions(path: str | os.PathLike) -> dict[str, tuple[str, np.ndarray]]:
    out: dict[str, tuple[str, np.ndarray]] = {}
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != PREDICTIONS_HEADER:
            raise FormatError(f"{path}: expected header {','.join(PREDICTIONS_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 5:
                raise FormatError(f"{path}:{lineno}: expected 5 columns, got {len(row)}")
            sig, label = row[0], row[1]
            if label not in LABELS:
                raise FormatError(f"{path}:{lineno}: unknown label {label!r}")
            if sig in out:
                raise FormatError(f"{path}:{lineno}: duplicate signature {sig}")
            try:
                probs = np.array([float(v) for v in row[2:]], dtype=np.float64)
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: bad probability ({exc})") from exc
            if not np.all(np.isfinite(probs)):
                raise FormatError(f"{path}:{lineno}: probabilities must be finite")
            out[sig] = (label, probs)
    return out


# ---------------------------------------------------------------------------
# flows CSV (program,sourceSig,sourceSite,sinkSig,sinkSite)

FLOWS_HEADER = ["program", "sourceSig", "sourceSite", "sinkSig", "sinkSite"]


def flows_text(rows: list[tuple[str, str, int, str, int]]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(FLOWS_HEADER)
    for program, source_sig, source_site, sink_sig, sink_site in rows:
        writer.writerow([program, source_sig, source_site, sink_sig, sink_site])
    return out.getvalue()


def write_flows(path: str | os.PathLike, rows: list[tuple[str, str, int, str, int]]) -> None:
    write_text_atomic(path, flows_text(rows))


def read_flows(path: str | os.PathLike) -> list[tuple[str, str, int, str, int]]:
    rows: list[tuple[str, str, int, str, int]] = []
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != FLOWS_HEADER:
            raise FormatError(f"{path}: expected header {','.join(FLOWS_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 5:
                raise FormatError(f"{path}:{lineno}: expected 5 columns, got {len(row)}")
            try:
                rows.append((row[0], row[1], int(row[2]), row[3], int(row[4])))
            except ValueError as exc:
                raise FormatError(f"{path}:{lineno}: bad site index ({exc})") from exc
    return rows


# ---------------------------------------------------------------------------
# TP/FP triage oracle CSV (signature,verdict)

TRIAGE_HEADER = ["signature", "verdict"]


def triage_text(verdicts: dict[str, str]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(TRIAGE_HEADER)
    for sig in sorted(verdicts):
        writer.writerow([sig, verdicts[sig]])
    return out.getvalue()


def write_triage(path: str | os.PathLike, verdicts: dict[str, str]) -> None:
    write_text_atomic(path, triage_text(verdicts))


def read_triage(path: str | os.PathLike) -> dict[str, str]:
    out: dict[str, str] = {}
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != TRIAGE_HEADER:
            raise FormatError(f"{path}: expected header {','.join(TRIAGE_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 2:
                raise FormatError(f"{path}:{lineno}: expected 2 columns, got {len(row)}")
            sig, verdict = row
            if verdict not in ("TP", "FP"):
                raise FormatError(f"{path}:{lineno}: verdict must be TP or FP, got {verdict!r}")
            if sig in out:
                raise FormatError(f"{path}:{lineno}: duplicate signature {sig}")
            out[sig] = verdict
    return out

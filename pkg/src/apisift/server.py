"""HTTP API for browser-based labeling and prediction triage.

The server owns a single append-only decision store (one JSON line per
decision, corrections recorded as superseding entries) and exposes:

    GET  /api/methods?cursor=&mode=&order=   paged corpus listing
    POST /api/labels                         {rater, signature, label}
    GET  /api/agreement                      {n, kappa, perLabelConfusion}
    GET  /api/export                         labels CSV, latest per rater
    POST /api/triage                         {rater, signature, verdict}
    GET  /api/triage/export                  verdict CSV (signature,verdict)

Static assets (the browser app) are served from the same port.
"""

from __future__ import annotations

import json
import mimetypes
import threading
from datetime import datetime, timezone
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from pathlib import Path
from urllib.parse import parse_qs, urlparse

from . import fileio
from .errors import ConfigError
from .evalkit import LABELS, cohen_kappa

VERDICTS = ("TP", "FP")
MODES = ("labeling", "triage")
ORDERS = ("forward", "reverse")


class LabelStore:
    """Append-only decision log with an in-memory snapshot.

    One writer (the server process) serializes appends under a lock;
    readers copy the entry list, which is atomic enough under the GIL
    to act as a lock-free snapshot.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._entries: list[dict] = []
        if self.path.exists():
            for lineno, line in enumerate(
                self.path.read_text(encoding="utf-8").splitlines(), start=1
            ):
                if not line.strip():
                    continue
                try:
                    entry = json.loads(line)
                except json.JSONDecodeError as exc:
                    raise ConfigError(f"{self.path}:{lineno}: corrupt store line: {exc}")
                self._entries.append(entry)

    def _append(self, entry: dict) -> None:
        with self._lock:
            with open(self.path, "a", encoding="utf-8") as handle:
                handle.write(json.dumps(entry, sort_keys=True) + "\n")
                handle.flush()
            self._entries.append(entry)

    def add_label(self, rater: str, signature: str, label: str) -> dict:
        entry = {
            "kind": "label",
            "rater": rater,
            "signature": signature,
            "label": label,
            "at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        }
        self._append(entry)
        return entry

    def add_verdict(self, rater: str, signature: str, verdict: str) -> dict:
        entry = {
            "kind": "triage",
            "rater": rater,
            "signature": signature,
            "verdict": verdict,
            "at": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        }
        self._append(entry)
        return entry

    def snapshot(self) -> list[dict]:
        return list(self._entries)

    def latest_labels(self) -> dict[tuple[str, str], str]:
        """(rater, signature) -> label, later entries superseding earlier."""
        out: dict[tuple[str, str], str] = {}
        for entry in self.snapshot():
            if entry.get("kind") == "label":
                out[(entry["rater"], entry["signature"])] = entry["label"]
        return out

    def latest_verdicts(self) -> dict[str, str]:
        """signature -> verdict, later entries superseding earlier."""
        out: dict[str, str] = {}
        for entry in self.snapshot():
            if entry.get("kind") == "triage":
                out[entry["signature"]] = entry["verdict"]
        return out

    def history(self, rater: str, signature: str) -> list[dict]:
        return [
            e
            for e in self.snapshot()
            if e.get("kind") == "label"
            and e["rater"] == rater
            and e["signature"] == signature
        ]


def agreement_between_raters(labels: dict[tuple[str, str], str]):
    """Kappa and confusion over the two most prolific raters' overlap.

    Returns None when fewer than two raters have decisions or their
    decision sets do not intersect.
    """
    by_rater: dict[str, dict[str, str]] = {}
    for (rater, signature), label in labels.items():
        by_rater.setdefault(rater, {})[signature] = label
    if len(by_rater) < 2:
        return None
    ranked = sorted(by_rater, key=lambda r: (-len(by_rater[r]), r))
    rater_a, rater_b = ranked[0], ranked[1]
    common = sorted(set(by_rater[rater_a]) & set(by_rater[rater_b]))
    if not common:
        return None
    seq_a = [by_rater[rater_a][s] for s in common]
    seq_b = [by_rater[rater_b][s] for s in common]
    confusion = {row: {col: 0 for col in LABELS} for row in LABELS}
    for a, b in zip(seq_a, seq_b):
        confusion[a][b] += 1
    return {
        "raters": [rater_a, rater_b],
        "n": len(common),
        "kappa": cohen_kappa(seq_a, seq_b),
        "perLabelConfusion": confusion,
    }


class ApiServer(ThreadingHTTPServer):
    daemon_threads = True

    def __init__(
        self,
        address,
        corpus_path: str | Path,
        store_path: str | Path,
        predictions_path: str | Path | None = None,
        page_size: int = 20,
        static_dir: str | Path | None = None,
    ):
        self.records = {r.signature: r for r in fileio.read_corpus(corpus_path)}
        self.signatures = sorted(self.records)
        self.predictions = (
            fileio.read_predictions(predictions_path) if predictions_path else None
        )
        self.store = LabelStore(store_path)
        self.page_size = page_size
        self.static_dir = Path(static_dir) if static_dir else None
        super().__init__(address, ApiHandler)


class ApiHandler(BaseHTTPRequestHandler):
    server: ApiServer

    # -- plumbing ---------------------------------------------------------

    def log_message(self, fmt, *args):  # quiet by default
        pass

    def _send_json(self, status: int, doc) -> None:
        body = json.dumps(doc, sort_keys=True).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _send_text(self, status: int, text: str, content_type: str) -> None:
        body = text.encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _error(self, status: int, message: str) -> None:
        self._send_json(status, {"error": message})

    def _read_body(self):
        length = int(self.headers.get("Content-Length") or 0)
        raw = self.rfile.read(length) if length else b""
        try:
            doc = json.loads(raw.decode("utf-8")) if raw else None
        except (json.JSONDecodeError, UnicodeDecodeError):
            return None
        return doc if isinstance(doc, dict) else None

    # -- GET --------------------------------------------------------------

    def do_GET(self):
        url = urlparse(self.path)
        query = parse_qs(url.query)
        route = url.path.rstrip("/") or "/"
        if route == "/api/methods":
            self._get_methods(query)
        elif route == "/api/agreement":
            self._get_agreement()
        elif route == "/api/export":
            self._get_export()
        elif route == "/api/triage/export":
            self._get_triage_export()
        elif route.startswith("/api"):
            self._error(404, f"no such endpoint: {url.path}")
        else:
            self._get_static(url.path)

    def _get_methods(self, query) -> None:
        raw_cursor = query.get("cursor", ["0"])[0]
        try:
            cursor = int(raw_cursor)
        except ValueError:
            return self._error(400, f"cursor must be an integer, got {raw_cursor!r}")
        if cursor < 0:
            return self._error(400, f"cursor must be >= 0, got {cursor}")
        mode = query.get("mode", ["labeling"])[0]
        if mode not in MODES:
            return self._error(400, f"mode must be one of {MODES}, got {mode!r}")
        order = query.get("order", ["forward"])[0]
        if order not in ORDERS:
            return self._error(400, f"order must be one of {ORDERS}, got {order!r}")
        if mode == "triage" and self.server.predictions is None:
            return self._error(409, "triage mode needs a predictions file (serve --preds)")
        signatures = self.server.signatures
        if order == "reverse":
            signatures = signatures[::-1]
        page = signatures[cursor : cursor + self.server.page_size]
        items = []
        for sig in page:
            record = self.server.records[sig]
            item = {"signature": sig, "docText": record.doc_text, "bodyText": record.body_text}
            if mode == "triage":
                pred = self.server.predictions.get(sig)
                if pred is not None:
                    label, probs = pred
                    item["prediction"] = {"label": label, "probs": [float(p) for p in probs]}
            items.append(item)
        next_cursor = cursor + len(page)
        self._send_json(
            200,
            {
                "items": items,
                "nextCursor": next_cursor if next_cursor < len(signatures) else None,
                "total": len(signatures),
            },
        )

    def _get_agreement(self) -> None:
        result = agreement_between_raters(self.server.store.latest_labels())
        if result is None:
            return self._error(409, "no signature labeled by two raters yet")
        self._send_json(200, result)

    def _get_export(self) -> None:
        latest = self.server.store.latest_labels()
        rows = sorted(
            (signature, label, rater) for (rater, signature), label in latest.items()
        )
        self._send_text(200, fileio.labels_text(rows), "text/csv; charset=utf-8")

    def _get_triage_export(self) -> None:
        verdicts = self.server.store.latest_verdicts()
        self._send_text(200, fileio.triage_text(verdicts), "text/csv; charset=utf-8")

    def _get_static(self, path: str) -> None:
        root = self.server.static_dir
        if root is None or not root.is_dir():
            return self._error(404, "no static assets configured")
        rel = path.lstrip("/") or "index.html"
        target = (root / rel).resolve()
        if root.resolve() not in target.parents and target != root.resolve():
            return self._error(404, "not found")
        if target.is_dir():
            target = target / "index.html"
        if not target.is_file():
            return self._error(404, "not found")
        content_type = mimetypes.guess_type(str(target))[0] or "application/octet-stream"
        body = target.read_bytes()
        self.send_response(200)
        self.send_header("Content-Type", content_type)
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    # -- POST -------------------------------------------------------------

    def do_POST(self):
        route = urlparse(self.path).path.rstrip("/")
        if route == "/api/labels":
            self._post_label()
        elif route == "/api/triage":
            self._post_triage()
        else:
            self._error(404, f"no such endpoint: {self.path}")

    def _post_label(self) -> None:
        doc = self._read_body()
        if doc is None:
            return self._error(400, "body must be a JSON object")
        rater = doc.get("rater")
        signature = doc.get("signature")
        label = doc.get("label")
        if not isinstance(rater, str) or not rater.strip():
            return self._error(422, "rater must be a non-empty string")
        if not isinstance(signature, str):
            return self._error(422, "signature must be a string")
        if label not in LABELS:
            return self._error(422, f"label must be one of {LABELS}, got {label!r}")
        if signature not in self.server.records:
            return self._error(404, f"unknown signature: {signature}")
        entry = self.server.store.add_label(rater, signature, label)
        entry = dict(entry)
        entry["history"] = len(self.server.store.history(rater, signature))
        self._send_json(201, entry)

    def _post_triage(self) -> None:
        doc = self._read_body()
        if doc is None:
            return self._error(400, "body must be a JSON object")
        rater = doc.get("rater")
        signature = doc.get("signature")
        verdict = doc.get("verdict")
        if not isinstance(rater, str) or not rater.strip():
            return self._error(422, "rater must be a non-empty string")
        if not isinstance(signature, str):
            return self._error(422, "signature must be a string")
        if verdict not in VERDICTS:
            return self._error(422, f"verdict must be one of {VERDICTS}, got {verdict!r}")
        if self.server.predictions is None:
            return self._error(409, "triage needs a predictions file (serve --preds)")
        if signature not in self.server.records:
            return self._error(404, f"unknown signature: {signature}")
        self._send_json(201, self.server.store.add_verdict(rater, signature, verdict))


def build_server(
    port: int,
    corpus_path: str | Path,
    store_path: str | Path,
    predictions_path: str | Path | None = None,
    page_size: int = 20,
    static_dir: str | Path | None = None,
) -> ApiServer:
    if static_dir is None:
        bundled = Path(__file__).resolve().parents[2] / "frontend" / "dist"
        static_dir = bundled if bundled.is_dir() else None
    return ApiServer(
        ("127.0.0.1", port),
        corpus_path=corpus_path,
        store_path=store_path,
        predictions_path=predictions_path,
        page_size=page_size,
        static_dir=static_dir,
    )


def serve(
    port: int,
    corpus_path: str | Path,
    store_path: str | Path,
    predictions_path: str | Path | None = None,
    page_size: int = 20,
) -> None:
    server = build_server(port, corpus_path, store_path, predictions_path, page_size)
    host, actual_port = server.server_address[:2]
    print(f"serving on http://{host}:{actual_port} (Ctrl-C to stop)")
    try:
        server.serve_forever()
    finally:
        server.server_close()

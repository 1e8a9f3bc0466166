"""Tests for the labeling/triage HTTP API."""

import json
import threading
import urllib.error
import urllib.request

import numpy as np
import pytest

from apisift import fileio
from apisift.evalkit import cohen_kappa
from apisift.server import LabelStore, agreement_between_raters, build_server
from apisift.synthdata import make_rule_corpus


@pytest.fixture(scope="module")
def corpus_path(tmp_path_factory):
    root = tmp_path_factory.mktemp("server-corpus")
    records, _ = make_rule_corpus(30, seed=5)
    path = root / "corpus.jsonl"
    fileio.write_corpus(path, records)
    return path


@pytest.fixture()
def api(corpus_path, tmp_path):
    """A live server on an ephemeral port; yields a small request client."""
    preds_path = tmp_path / "preds.csv"
    records = fileio.read_corpus(corpus_path)
    preds = {
        r.signature: ("SOURCE", np.array([0.7, 0.2, 0.1])) for r in records
    }
    fileio.write_predictions(preds_path, preds)
    server = build_server(
        0, corpus_path, tmp_path / "store.jsonl",
        predictions_path=preds_path, page_size=8, static_dir=tmp_path / "static",
    )
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    base = f"http://127.0.0.1:{server.server_address[1]}"

    class Client:
        base_url = base
        store_path = tmp_path / "store.jsonl"

        def request(self, method, path, body=None):
            data = json.dumps(body).encode() if body is not None else None
            req = urllib.request.Request(base + path, data=data, method=method)
            if data is not None:
                req.add_header("Content-Type", "application/json")
            try:
                with urllib.request.urlopen(req) as resp:
                    return resp.status, resp.read().decode()
            except urllib.error.HTTPError as exc:
                return exc.code, exc.read().decode()

        def get(self, path):
            return self.request("GET", path)

        def get_json(self, path):
            status, text = self.get(path)
            return status, json.loads(text)

        def post(self, path, body):
            status, text = self.request("POST", path, body)
            return status, json.loads(text)

    try:
        yield Client()
    finally:
        server.shutdown()
        server.server_close()
        thread.join(timeout=5)


class TestMethodsEndpoint:
    def test_first_page_is_signature_sorted_prefix(self, api, corpus_path):
        status, doc = api.get_json("/api/methods")
        assert status == 200
        signatures = sorted(r.signature for r in fileio.read_corpus(corpus_path))
        assert [item["signature"] for item in doc["items"]] == signatures[:8]
        assert doc["total"] == len(signatures)
        assert doc["nextCursor"] == 8
        assert {"signature", "docText", "bodyText"} <= set(doc["items"][0])
        assert "prediction" not in doc["items"][0]

    def test_pagination_walks_the_whole_corpus(self, api, corpus_path):
        seen = []
        cursor = 0
        while cursor is not None:
            status, doc = api.get_json(f"/api/methods?cursor={cursor}")
            assert status == 200
            seen.extend(item["signature"] for item in doc["items"])
            cursor = doc["nextCursor"]
        assert seen == sorted(r.signature for r in fileio.read_corpus(corpus_path))

    def test_reverse_order(self, api, corpus_path):
        status, doc = api.get_json("/api/methods?order=reverse")
        assert status == 200
        signatures = sorted(r.signature for r in fileio.read_corpus(corpus_path))
        assert [item["signature"] for item in doc["items"]] == signatures[::-1][:8]

    def test_bad_cursor_is_400(self, api):
        for cursor in ("abc", "-1", "1.5"):
            status, _ = api.get_json(f"/api/methods?cursor={cursor}")
            assert status == 400, cursor

    def test_triage_mode_includes_predictions(self, api):
        status, doc = api.get_json("/api/methods?mode=triage")
        assert status == 200
        pred = doc["items"][0]["prediction"]
        assert pred["label"] == "SOURCE"
        assert pred["probs"] == [0.7, 0.2, 0.1]

    def test_triage_without_predictions_is_409(self, corpus_path, tmp_path):
        server = build_server(0, corpus_path, tmp_path / "s.jsonl")
        thread = threading.Thread(target=server.serve_forever, daemon=True)
        thread.start()
        try:
            url = f"http://127.0.0.1:{server.server_address[1]}/api/methods?mode=triage"
            with pytest.raises(urllib.error.HTTPError) as exc:
                urllib.request.urlopen(url)
            assert exc.value.code == 409
        finally:
            server.shutdown()
            server.server_close()
            thread.join(timeout=5)


class TestLabelEndpoint:
    def sig(self, api):
        _, doc = api.get_json("/api/methods")
        return doc["items"][0]["signature"]

    def test_valid_post_echoes_201(self, api):
        sig = self.sig(api)
        status, doc = api.post(
            "/api/labels", {"rater": "r1", "signature": sig, "label": "SOURCE"}
        )
        assert status == 201
        assert doc["rater"] == "r1" and doc["signature"] == sig
        assert doc["label"] == "SOURCE" and doc["history"] == 1

    def test_superseding_label_appends_history(self, api):
        sig = self.sig(api)
        api.post("/api/labels", {"rater": "r1", "signature": sig, "label": "SOURCE"})
        status, doc = api.post(
            "/api/labels", {"rater": "r1", "signature": sig, "label": "SINK"}
        )
        assert status == 201 and doc["history"] == 2
        lines = api.store_path.read_text().strip().splitlines()
        assert len(lines) == 2  # both entries kept in the append-only log

    def test_unknown_signature_is_404(self, api):
        status, _ = api.post(
            "/api/labels", {"rater": "r1", "signature": "no.Such#m()", "label": "SINK"}
        )
        assert status == 404

    def test_invalid_label_is_422(self, api):
        sig = self.sig(api)
        status, _ = api.post(
            "/api/labels", {"rater": "r1", "signature": sig, "label": "MAYBE"}
        )
        assert status == 422

    def test_malformed_body_is_400(self, api):
        req = urllib.request.Request(
            api.base_url + "/api/labels", data=b"not json", method="POST"
        )
        with pytest.raises(urllib.error.HTTPError) as exc:
            urllib.request.urlopen(req)
        assert exc.value.code == 400


class TestAgreementAndExport:
    def label_all(self, api, rater, labels):
        _, doc = api.get_json("/api/methods?cursor=0")
        cursor = 0
        i = 0
        while cursor is not None:
            _, doc = api.get_json(f"/api/methods?cursor={cursor}")
            for item in doc["items"]:
                api.post(
                    "/api/labels",
                    {"rater": rater, "signature": item["signature"], "label": labels[i % len(labels)]},
                )
                i += 1
            cursor = doc["nextCursor"]

    def test_no_overlap_is_409(self, api):
        status, _ = api.get_json("/api/agreement")
        assert status == 409
        sig = json.loads(api.get("/api/methods")[1])["items"][0]["signature"]
        api.post("/api/labels", {"rater": "only", "signature": sig, "label": "SINK"})
        status, _ = api.get_json("/api/agreement")
        assert status == 409  # one rater is not an overlap

    def test_identical_raters_have_kappa_one(self, api):
        self.label_all(api, "r1", ["SOURCE", "SINK", "NEITHER"])
        self.label_all(api, "r2", ["SOURCE", "SINK", "NEITHER"])
        status, doc = api.get_json("/api/agreement")
        assert status == 200
        assert doc["kappa"] == 1.0 and doc["n"] == 30
        confusion = doc["perLabelConfusion"]
        assert all(
            confusion[row][col] == 0
            for row in confusion
            for col in confusion[row]
            if row != col
        )

    def test_agreement_matches_direct_kappa(self, api):
        rng = np.random.default_rng(99)
        _, doc = api.get_json("/api/methods?cursor=0")
        labels = ("SOURCE", "SINK", "NEITHER")
        assigned = {}
        cursor = 0
        while cursor is not None:
            _, doc = api.get_json(f"/api/methods?cursor={cursor}")
            for item in doc["items"]:
                a, b = rng.choice(labels, size=2)
                assigned[item["signature"]] = (str(a), str(b))
                api.post("/api/labels", {"rater": "ra", "signature": item["signature"], "label": str(a)})
                api.post("/api/labels", {"rater": "rb", "signature": item["signature"], "label": str(b)})
            cursor = doc["nextCursor"]
        status, doc = api.get_json("/api/agreement")
        assert status == 200
        common = sorted(assigned)
        expected = cohen_kappa(
            [assigned[s][0] for s in common], [assigned[s][1] for s in common]
        )
        assert doc["kappa"] == expected

    def test_export_is_latest_per_rater_and_reimports(self, api, tmp_path):
        self.label_all(api, "r1", ["SOURCE"])
        self.label_all(api, "r2", ["SOURCE"])
        sig = json.loads(api.get("/api/methods")[1])["items"][0]["signature"]
        api.post("/api/labels", {"rater": "r1", "signature": sig, "label": "SINK"})
        status, text = api.get("/api/export")
        assert status == 200
        out = tmp_path / "export.csv"
        out.write_text(text)
        rows = fileio.read_labels(out)
        by_key = {(rater, signature): label for signature, label, rater in rows}
        assert by_key[("r1", sig)] == "SINK"  # superseded decision exports latest only
        assert by_key[("r2", sig)] == "SOURCE"
        assert len(rows) == 60  # 30 signatures x 2 raters

    def test_empty_store_exports_header_only(self, api):
        status, text = api.get("/api/export")
        assert status == 200
        assert text == "signature,label,rater\n"


class TestTriageEndpoints:
    def test_verdicts_export_in_oracle_format(self, api, tmp_path):
        _, doc = api.get_json("/api/methods?mode=triage")
        sigs = [item["signature"] for item in doc["items"][:3]]
        for sig, verdict in zip(sigs, ("TP", "FP", "TP")):
            status, echoed = api.post(
                "/api/triage", {"rater": "r1", "signature": sig, "verdict": verdict}
            )
            assert status == 201 and echoed["verdict"] == verdict
        status, text = api.get("/api/triage/export")
        assert status == 200
        out = tmp_path / "triage.csv"
        out.write_text(text)
        verdicts = fileio.read_triage(out)
        assert verdicts == {sigs[0]: "TP", sigs[1]: "FP", sigs[2]: "TP"}

    def test_bad_verdict_is_422(self, api):
        _, doc = api.get_json("/api/methods")
        sig = doc["items"][0]["signature"]
        status, _ = api.post(
            "/api/triage", {"rater": "r1", "signature": sig, "verdict": "MAYBE"}
        )
        assert status == 422


class TestStorePersistence:
    def test_store_reloads_after_restart(self, tmp_path):
        path = tmp_path / "store.jsonl"
        store = LabelStore(path)
        store.add_label("r1", "a.B#c()", "SOURCE")
        store.add_label("r1", "a.B#c()", "SINK")
        store.add_verdict("r1", "a.B#c()", "FP")
        reloaded = LabelStore(path)
        assert reloaded.latest_labels() == {("r1", "a.B#c()"): "SINK"}
        assert reloaded.latest_verdicts() == {"a.B#c()": "FP"}
        assert len(reloaded.history("r1", "a.B#c()")) == 2

    def test_agreement_prefers_most_prolific_raters(self):
        labels = {
            ("a", "s1"): "SOURCE",
            ("a", "s2"): "SINK",
            ("b", "s1"): "SOURCE",
            ("b", "s2"): "SOURCE",
            ("c", "s1"): "NEITHER",
        }
        result = agreement_between_raters(labels)
        assert result["raters"] == ["a", "b"]
        assert result["n"] == 2

    def test_agreement_none_without_two_raters(self):
        assert agreement_between_raters({}) is None
        assert agreement_between_raters({("a", "s1"): "SOURCE"}) is None
        assert (
            agreement_between_raters(
                {("a", "s1"): "SOURCE", ("b", "s2"): "SINK"}
            )
            is None
        )

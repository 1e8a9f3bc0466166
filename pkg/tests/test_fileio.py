"""Tests for on-disk artifact formats."""

import numpy as np
import pytest

from apisift.corpus import MethodRecord
from apisift.errors import FormatError
from apisift.fileio import (
    file_digest,
    flows_text,
    json_text,
    labels_text,
    read_corpus,
    read_flows,
    read_json,
    read_labels,
    read_predictions,
    read_triage,
    read_vector_store,
    training_labels,
    write_corpus,
    write_flows,
    write_json_atomic,
    write_labels,
    write_predictions,
    write_text_atomic,
    write_triage,
    write_vector_store,
)


def sample_record(name="getImei", doc="Returns the IMEI."):
    return MethodRecord(
        fqcn="android.telephony.TelephonyManager",
        name=name,
        params=("int",),
        return_type="String",
        modifiers=frozenset(["public"]),
        body_text="return imei;",
        doc_text=doc,
        doc_origin="self",
    )


class TestAtomicWrites:
    def test_text_round_trip(self, tmp_path):
        path = tmp_path / "nested" / "out.txt"
        write_text_atomic(path, "hello\n")
        assert path.read_text() == "hello\n"

    def test_no_temp_files_left(self, tmp_path):
        path = tmp_path / "out.txt"
        write_text_atomic(path, "one\n")
        write_text_atomic(path, "two\n")
        assert [p.name for p in tmp_path.iterdir()] == ["out.txt"]
        assert path.read_text() == "two\n"

    def test_json_sorted_keys_trailing_newline(self, tmp_path):
        path = tmp_path / "doc.json"
        write_json_atomic(path, {"zeta": 1, "alpha": 2})
        text = path.read_text()
        assert text.index('"alpha"') < text.index('"zeta"')
        assert text.endswith("\n")
        assert read_json(path) == {"zeta": 1, "alpha": 2}

    def test_read_json_rejects_garbage(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text("{not json")
        with pytest.raises(FormatError):
            read_json(path)

    def test_digest_tracks_content(self, tmp_path):
        path = tmp_path / "x.txt"
        write_text_atomic(path, "payload\n")
        first = file_digest(path)
        assert file_digest(path) == first
        write_text_atomic(path, "payload2\n")
        assert file_digest(path) != first
        other = tmp_path / "y.txt"
        write_text_atomic(other, "payload2\n")
        assert file_digest(path) == file_digest(other)


class TestVectorStore:
    def test_round_trip_sorted(self, tmp_path):
        rng = np.random.default_rng(0)
        vectors = {f"p.C#m{i}():v": rng.normal(size=8) for i in (3, 1, 2)}
        path = tmp_path / "vecs.jsonl"
        write_vector_store(path, vectors, 8)
        lines = path.read_text().splitlines()
        assert len(lines) == 3
        assert '"p.C#m1():v"' in lines[0]
        loaded = read_vector_store(path, 8)
        for sig, vec in vectors.items():
            np.testing.assert_array_equal(loaded[sig], vec)

    def test_wrong_dim_on_write(self, tmp_path):
        with pytest.raises(FormatError):
            write_vector_store(tmp_path / "v.jsonl", {"a#b()": np.zeros(3)}, 4)

    def test_wrong_dim_on_read(self, tmp_path):
        path = tmp_path / "v.jsonl"
        path.write_text('{"sig": "a#b()", "vec": [1.0, 2.0]}\n')
        with pytest.raises(FormatError):
            read_vector_store(path, 3)

    def test_non_finite_rejected(self, tmp_path):
        path = tmp_path / "v.jsonl"
        path.write_text('{"sig": "a#b()", "vec": [1.0, NaN]}\n')
        with pytest.raises(FormatError):
            read_vector_store(path, 2)

    def test_missing_keys_rejected(self, tmp_path):
        path = tmp_path / "v.jsonl"
        path.write_text('{"sig": "a#b()"}\n')
        with pytest.raises(FormatError):
            read_vector_store(path, 2)

    def test_duplicate_rejected(self, tmp_path):
        path = tmp_path / "v.jsonl"
        path.write_text(
            '{"sig": "a#b()", "vec": [1.0, 2.0]}\n{"sig": "a#b()", "vec": [3.0, 4.0]}\n'
        )
        with pytest.raises(FormatError):
            read_vector_store(path, 2)


class TestCorpusFile:
    def test_round_trip(self, tmp_path):
        records = [sample_record("getImei"), sample_record("getMeid")]
        path = tmp_path / "corpus.jsonl"
        write_corpus(path, records)
        loaded = read_corpus(path)
        assert loaded == sorted(records, key=lambda r: r.signature)

    def test_duplicate_signature_rejected(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        line = (
            '{"fqcn": "a.B", "name": "m", "params": [], "returnType": "void", '
            '"modifiers": ["public"], "bodyText": "", "docText": "d", "docOrigin": "self"}'
        )
        path.write_text(line + "\n" + line + "\n")
        with pytest.raises(FormatError):
            read_corpus(path)

    def test_missing_field_rejected(self, tmp_path):
        path = tmp_path / "corpus.jsonl"
        path.write_text('{"fqcn": "a.B", "name": "m"}\n')
        with pytest.raises(FormatError):
            read_corpus(path)


class TestLabelsFile:
    def test_round_trip(self, tmp_path):
        rows = [("a.B#x():int", "SOURCE", "r1"), ("a.B#y():int", "SINK", "r2")]
        path = tmp_path / "labels.csv"
        write_labels(path, rows)
        assert read_labels(path) == rows
        assert labels_text(rows).splitlines()[0] == "signature,label,rater"

    def test_unknown_label_rejected(self, tmp_path):
        path = tmp_path / "labels.csv"
        path.write_text("signature,label,rater\na.B#x():int,MAYBE,r1\n")
        with pytest.raises(FormatError):
            read_labels(path)

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "labels.csv"
        path.write_text("sig,lab\n")
        with pytest.raises(FormatError):
            read_labels(path)

    def test_training_labels_agreeing_raters_collapse(self):
        rows = [
            ("a.B#x():int", "SOURCE", "r1"),
            ("a.B#x():int", "SOURCE", "r2"),
            ("a.B#y():int", "SINK", "r1"),
        ]
        assert training_labels(rows) == {"a.B#x():int": "SOURCE", "a.B#y():int": "SINK"}

    def test_training_labels_conflict_rejected(self):
        rows = [("a.B#x():int", "SOURCE", "r1"), ("a.B#x():int", "SINK", "r2")]
        with pytest.raises(FormatError):
            training_labels(rows)


class TestPredictionsFile:
    def test_round_trip_exact_floats(self, tmp_path):
        predictions = {
            "a.B#x():int": ("SOURCE", np.array([0.7, 0.2, 0.1])),
            "a.B#y():int": ("NEITHER", np.array([1.0 / 3, 1.0 / 3, 1.0 / 3])),
        }
        path = tmp_path / "preds.csv"
        write_predictions(path, predictions)
        loaded = read_predictions(path)
        assert set(loaded) == set(predictions)
        for sig in predictions:
            assert loaded[sig][0] == predictions[sig][0]
            # repr round-trips float64 exactly
            np.testing.assert_array_equal(loaded[sig][1], predictions[sig][1])

    def test_header(self, tmp_path):
        path = tmp_path / "preds.csv"
        write_predictions(path, {})
        assert path.read_text() == "signature,label,p_source,p_sink,p_neither\n"

    def test_bad_probability_rejected(self, tmp_path):
        path = tmp_path / "preds.csv"
        path.write_text(
            "signature,label,p_source,p_sink,p_neither\na.B#x():int,SOURCE,0.5,oops,0.2\n"
        )
        with pytest.raises(FormatError):
            read_predictions(path)

    def test_unknown_label_rejected(self, tmp_path):
        path = tmp_path / "preds.csv"
        path.write_text(
            "signature,label,p_source,p_sink,p_neither\na.B#x():int,MAYBE,0.5,0.3,0.2\n"
        )
        with pytest.raises(FormatError):
            read_predictions(path)


class TestFlowsFile:
    def test_round_trip(self, tmp_path):
        rows = [
            ("leak.tiny", "a.B#src():int", 1, "a.B#snk(int)", 2),
            ("other.tiny", "a.B#src2():int", 0, "a.B#snk(int)", 4),
        ]
        path = tmp_path / "flows.csv"
        write_flows(path, rows)
        assert read_flows(path) == rows
        assert flows_text(rows).splitlines()[0] == "program,sourceSig,sourceSite,sinkSig,sinkSite"

    def test_bad_site_rejected(self, tmp_path):
        path = tmp_path / "flows.csv"
        path.write_text("program,sourceSig,sourceSite,sinkSig,sinkSite\np,a#b(),x,a#c(),2\n")
        with pytest.raises(FormatError):
            read_flows(path)


class TestTriageFile:
    def test_round_trip(self, tmp_path):
        verdicts = {"a.B#x():int": "TP", "a.B#y():int": "FP"}
        path = tmp_path / "triage.csv"
        write_triage(path, verdicts)
        assert read_triage(path) == verdicts

    def test_bad_verdict_rejected(self, tmp_path):
        path = tmp_path / "triage.csv"
        path.write_text("signature,verdict\na.B#x():int,UNSURE\n")
        with pytest.raises(FormatError):
            read_triage(path)


class TestDeterminism:
    def test_identical_content_identical_bytes(self, tmp_path):
        rng = np.random.default_rng(5)
        vectors = {f"p.C#m{i}():v": rng.normal(size=6) for i in range(10)}
        a = tmp_path / "a.jsonl"
        b = tmp_path / "b.jsonl"
        write_vector_store(a, dict(reversed(list(vectors.items()))), 6)
        write_vector_store(b, vectors, 6)
        assert a.read_bytes() == b.read_bytes()

    def test_json_text_deterministic(self):
        assert json_text({"b": [1, 2], "a": {"y": 1, "x": 2}}) == json_text(
            {"a": {"x": 2, "y": 1}, "b": [1, 2]}
        )

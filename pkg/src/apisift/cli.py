"""Command-line entry point wiring the full pipeline.

extract -> embed-doc / train-embedder -> embed-code -> train / crossval /
ablate -> predict -> compare / kappa / sample -> taint -> report, plus a
`serve` command for the browser labeling workflow.  Every artifact-
producing invocation writes a run manifest next to its output; artifacts
themselves are byte-deterministic for equal seeds.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__, fileio
from .baseline import (
    BaselineConfig,
    baseline_from_doc,
    baseline_to_doc,
    features_for_records,
    predict_baseline,
    train_baseline,
)
from .classifier import (
    Dataset,
    build_model,
    model_from_doc,
    model_to_doc,
    predict_batch,
    run_ablation,
    run_crossval,
    train_model,
)
from .codevec import (
    EmbedderConfig,
    embed_code,
    params_from_doc,
    params_to_doc,
    train_code_embedder,
)
from .corpus import build_hierarchy, select_candidates
from .docvec import (
    DocPipelineConfig,
    embed_doc,
    idf_from_corpus,
    load_external_vectors,
    normalize_doc,
)
from .docvec import DOC_DIM
from .codevec import CODE_DIM
from .errors import ApisiftError, ConfigError, CorpusError
from .evalkit import (
    LABELS,
    cohen_kappa_details,
    meets_sample_rule,
    overlap,
    required_sample_size,
    sample_for_review,
)
from .classifier import complementarity
from .javasrc import parse_unit
from .manifest import RunManifest
from .nnet import TrainConfig
from .taint import Flow, flow_report, fp_rate, parse_program, parse_signature_list, propagate


# ---------------------------------------------------------------------------
# shared helpers


def _resolve_seed(args) -> int:
    """--seed, unless the APISIFT_SEED environment variable overrides it."""
    env = os.environ.get("APISIFT_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ConfigError(f"APISIFT_SEED must be an integer, got {env!r}")
    return args.seed


def _train_config(args, seed: int) -> TrainConfig:
    return TrainConfig(
        learning_rate=args.learning_rate,
        epochs=args.epochs,
        batch_size=args.batch_size,
        seed=seed,
        optimizer=args.optimizer,
    )


def _add_train_flags(parser, lr=1e-3, epochs=30, batch_size=32, optimizer="adam"):
    parser.add_argument("--learning-rate", type=float, default=lr)
    parser.add_argument("--epochs", type=int, default=epochs)
    parser.add_argument("--batch-size", type=int, default=batch_size)
    parser.add_argument("--optimizer", choices=("sgd", "adam"), default=optimizer)
    parser.add_argument("--seed", type=int, default=0)


def _emit(doc: dict, out: str | None, manifest: RunManifest | None = None) -> None:
    """Write a JSON document to a file (with manifest) or stdout."""
    if out is None:
        print(json.dumps(doc, sort_keys=True, indent=2))
    else:
        fileio.write_json_atomic(out, doc)
        if manifest is not None:
            manifest.write_next_to(out)


def _load_dataset(labels_path: str, doc_path: str, code_path: str) -> Dataset:
    """Join the labels CSV with the two vector stores into a dataset."""
    label_map = fileio.training_labels(fileio.read_labels(labels_path))
    if not label_map:
        raise CorpusError(f"{labels_path}: no labeled methods")
    doc_vectors = fileio.read_vector_store(doc_path, DOC_DIM)
    code_vectors = fileio.read_vector_store(code_path, CODE_DIM)
    if set(doc_vectors) != set(code_vectors):
        only_doc = sorted(set(doc_vectors) - set(code_vectors))[:3]
        only_code = sorted(set(code_vectors) - set(doc_vectors))[:3]
        raise CorpusError(
            "doc and code vector stores cover different methods "
            f"(doc-only starts {only_doc}, code-only starts {only_code})"
        )
    missing = sorted(set(label_map) - set(doc_vectors))
    if missing:
        raise CorpusError(f"labeled methods missing from vector stores: {missing[:5]}")
    signatures = sorted(label_map)
    doc = np.stack([doc_vectors[s] for s in signatures])
    code = np.stack([code_vectors[s] for s in signatures])
    labels = np.array([LABELS.index(label_map[s]) for s in signatures], dtype=np.int64)
    return Dataset(signatures, doc, code, labels)


def _class_metrics_doc(per_class) -> dict:
    return {
        name: {
            "precision": m.precision,
            "recall": m.recall,
            "f1": m.f1,
            "support": m.support,
            "zeroDivisionFlags": list(m.zero_division_flags),
        }
        for name, m in per_class.items()
    }


def _report_doc(report) -> dict:
    doc = {
        "perClass": _class_metrics_doc(report.per_class),
        "accuracy": report.accuracy,
        "macroPrecision": report.macro_precision,
        "macroRecall": report.macro_recall,
        "macroF1": report.macro_f1,
        "weightedPrecision": report.weighted_precision,
        "weightedRecall": report.weighted_recall,
        "weightedF1": report.weighted_f1,
        "total": report.total,
    }
    if report.kappa is not None:
        doc["kappa"] = report.kappa
    return doc


def _crossval_doc(result, seed: int, k: int, mode: str, target: str | None) -> dict:
    return {
        "k": k,
        "seed": seed,
        "mode": mode,
        "target": target or "all",
        "folds": [_report_doc(r) for r in result.fold_reports],
        "aggregate": _report_doc(result.aggregate),
        "foldAssignment": dict(sorted(result.plan.assignment.items())),
        "predictions": {
            sig: {"label": label, "probs": [float(p) for p in probs]}
            for sig, (label, probs) in sorted(result.predictions.items())
        },
    }


# ---------------------------------------------------------------------------
# command handlers


def cmd_extract(args) -> None:
    src_root = Path(args.srcdir)
    if not src_root.is_dir():
        raise CorpusError(f"{args.srcdir} is not a directory")
    paths = sorted(src_root.rglob("*.java"))
    if not paths:
        raise CorpusError(f"no .java files under {args.srcdir}")
    units = [parse_unit(p.read_text(encoding="utf-8"), str(p)) for p in paths]
    hierarchy = build_hierarchy(units)
    records = select_candidates(units, hierarchy)
    manifest = RunManifest(
        command="extract",
        config={"srcdir": str(src_root), "files": len(paths), "candidates": len(records)},
    )
    for p in paths:
        manifest.record_input(p)
    fileio.write_corpus(args.output, records)
    manifest.write_next_to(args.output)
    print(f"extracted {len(records)} candidate methods from {len(paths)} files")


def cmd_train_embedder(args) -> None:
    seed = _resolve_seed(args)
    records = fileio.read_corpus(args.corpus)
    cfg = _train_config(args, seed)
    ecfg = EmbedderConfig(context_cap=args.context_cap, seed=seed)
    params = train_code_embedder(records, cfg, ecfg)
    manifest = RunManifest(
        command="train-embedder",
        config={
            "learningRate": cfg.learning_rate,
            "epochs": cfg.epochs,
            "optimizer": cfg.optimizer,
            "contextCap": ecfg.context_cap,
        },
        seed=seed,
    )
    manifest.record_input(args.corpus)
    fileio.write_json_atomic(args.output, params_to_doc(params))
    manifest.write_next_to(args.output)
    print(f"trained code embedder on {len(records)} methods")


def cmd_embed_code(args) -> None:
    records = fileio.read_corpus(args.corpus)
    params = params_from_doc(fileio.read_json(args.params))
    vectors = {}
    empty = 0
    for record in records:
        vec = embed_code(record, params)
        vectors[record.signature] = vec.values
        empty += int(vec.empty_bag)
    manifest = RunManifest(
        command="embed-code",
        config={"methods": len(records), "emptyContextBags": empty},
        seed=params.cfg.seed,
    )
    manifest.record_input(args.corpus)
    manifest.record_input(args.params)
    fileio.write_vector_store(args.output, vectors, CODE_DIM)
    manifest.write_next_to(args.output)
    print(f"embedded {len(vectors)} methods ({empty} empty context bags)")


def cmd_embed_doc(args) -> None:
    seed = _resolve_seed(args)
    records = fileio.read_corpus(args.corpus)
    bags = [normalize_doc(r.doc_text) for r in records]
    idf = None if args.no_idf else idf_from_corpus(bags)
    cfg = DocPipelineConfig(projection_seed=seed, idf_table=idf)
    imported = {}
    if args.import_vectors:
        imported = load_external_vectors(args.import_vectors)
    vectors = {}
    zero = 0
    used_external = 0
    for record, bag in zip(records, bags):
        if record.signature in imported:
            ext = imported[record.signature]
            vectors[record.signature] = ext.values
            zero += int(ext.zero_doc)
            used_external += 1
        else:
            vec = embed_doc(bag, cfg)
            vectors[record.signature] = vec.values
            zero += int(vec.zero_doc)
    manifest = RunManifest(
        command="embed-doc",
        config={
            "methods": len(records),
            "idf": not args.no_idf,
            "zeroDocs": zero,
            "importedVectors": used_external,
        },
        seed=seed,
    )
    manifest.record_input(args.corpus)
    if args.import_vectors:
        manifest.record_input(args.import_vectors)
    fileio.write_vector_store(args.output, vectors, DOC_DIM)
    manifest.write_next_to(args.output)
    print(f"embedded documentation for {len(vectors)} methods ({zero} empty docs)")


def cmd_train(args) -> None:
    seed = _resolve_seed(args)
    dataset = _load_dataset(args.labels, args.doc, args.code)
    cfg = _train_config(args, seed)
    model = build_model(seed=seed)
    history = train_model(model, dataset.doc, dataset.code, dataset.labels, cfg)
    doc = {
        "kind": "dual-branch-model",
        "schema": 1,
        "model": model_to_doc(model),
        "inputs": {
            "labels": fileio.file_digest(args.labels),
            "docVec": fileio.file_digest(args.doc),
            "codeVec": fileio.file_digest(args.code),
        },
        "finalLoss": history[-1] if history else None,
    }
    manifest = RunManifest(
        command="train",
        config={
            "learningRate": cfg.learning_rate,
            "epochs": cfg.epochs,
            "batchSize": cfg.batch_size,
            "optimizer": cfg.optimizer,
            "examples": len(dataset),
        },
        seed=seed,
    )
    for path in (args.labels, args.doc, args.code):
        manifest.record_input(path)
    fileio.write_json_atomic(args.output, doc)
    manifest.write_next_to(args.output)
    print(f"trained on {len(dataset)} labeled methods")


def cmd_crossval(args) -> None:
    seed = _resolve_seed(args)
    dataset = _load_dataset(args.labels, args.doc, args.code)
    cfg = _train_config(args, seed)
    result = run_crossval(dataset, args.k, cfg)
    doc = _crossval_doc(result, seed, args.k, "both", None)
    manifest = RunManifest(
        command="crossval",
        config={"k": args.k, "epochs": cfg.epochs, "examples": len(dataset)},
        seed=seed,
    )
    for path in (args.labels, args.doc, args.code):
        manifest.record_input(path)
    _emit(doc, args.output, manifest)
    agg = result.aggregate
    print(f"crossval k={args.k}: accuracy {agg.accuracy:.4f}, weighted F1 {agg.weighted_f1:.4f}")


def cmd_ablate(args) -> None:
    seed = _resolve_seed(args)
    dataset = _load_dataset(args.labels, args.doc, args.code)
    cfg = _train_config(args, seed)
    report = run_ablation(dataset, args.mode, args.k, cfg, target=args.target)
    doc = _crossval_doc(report.result, seed, args.k, args.mode, args.target)
    doc["summary"] = report.summary
    manifest = RunManifest(
        command="ablate",
        config={"k": args.k, "mode": args.mode, "target": args.target or "all"},
        seed=seed,
    )
    for path in (args.labels, args.doc, args.code):
        manifest.record_input(path)
    _emit(doc, args.output, manifest)
    print(
        f"ablation mode={args.mode}: accuracy {report.summary['accuracy']:.4f}, "
        f"F1 {report.summary['f1']:.4f}"
    )


def cmd_predict(args) -> None:
    checkpoint = fileio.read_json(args.model)
    if checkpoint.get("kind") != "dual-branch-model":
        raise ConfigError(f"{args.model} is not a trained model checkpoint")
    model = model_from_doc(checkpoint["model"])
    doc_vectors = fileio.read_vector_store(args.doc, DOC_DIM)
    code_vectors = fileio.read_vector_store(args.code, CODE_DIM)
    if set(doc_vectors) != set(code_vectors):
        raise CorpusError("doc and code vector stores cover different methods")
    recorded = checkpoint.get("inputs", {})
    current = {"docVec": fileio.file_digest(args.doc), "codeVec": fileio.file_digest(args.code)}
    for key in ("docVec", "codeVec"):
        if key in recorded and recorded[key] != current[key]:
            print(
                f"note: {key} differs from the training input (predicting on new data)",
                file=sys.stderr,
            )
    signatures = sorted(doc_vectors)
    if not signatures:
        raise CorpusError("vector stores are empty")
    doc = np.stack([doc_vectors[s] for s in signatures])
    code = np.stack([code_vectors[s] for s in signatures])
    indices, probs = predict_batch(model, doc, code)
    predictions = {
        sig: (LABELS[int(indices[i])], probs[i]) for i, sig in enumerate(signatures)
    }
    manifest = RunManifest(command="predict", config={"methods": len(signatures)})
    for path in (args.model, args.doc, args.code):
        manifest.record_input(path)
    fileio.write_predictions(args.output, predictions)
    manifest.write_next_to(args.output)
    print(f"predicted {len(predictions)} methods")


def cmd_compare(args) -> None:
    preds_a = fileio.read_predictions(args.preds_a)
    preds_b = fileio.read_predictions(args.preds_b)
    truth = fileio.training_labels(fileio.read_labels(args.labels))
    common = sorted(set(preds_a) & set(preds_b) & set(truth))
    if not common:
        raise CorpusError("no signatures shared by both prediction files and the labels")
    seq_a = [preds_a[s][0] for s in common]
    seq_b = [preds_b[s][0] for s in common]
    seq_t = [truth[s] for s in common]
    doc: dict = {"common": len(common)}
    for target in LABELS[:2]:
        set_a = {s for s, (label, _) in preds_a.items() if label == target}
        set_b = {s for s, (label, _) in preds_b.items() if label == target}
        ov = overlap(set_a, set_b)
        only_a, only_b, both, neither = complementarity(seq_a, seq_b, seq_t, target)
        doc[target] = {
            "overlap": {
                "sizeA": ov.size_a,
                "sizeB": ov.size_b,
                "intersection": ov.intersection,
                "onlyA": ov.only_a,
                "onlyB": ov.only_b,
            },
            "complementarity": {
                "onlyA": only_a,
                "onlyB": only_b,
                "both": both,
                "neither": neither,
            },
        }
    manifest = RunManifest(command="compare", config={"common": len(common)})
    for path in (args.preds_a, args.preds_b, args.labels):
        manifest.record_input(path)
    _emit(doc, args.output, manifest)


def _ratings_from_file(path: str) -> dict[str, str]:
    """signature -> label from either a labels CSV or a predictions CSV."""
    with open(path, encoding="utf-8") as handle:
        header = handle.readline().strip()
    if header == ",".join(fileio.PREDICTIONS_HEADER):
        return {sig: label for sig, (label, _) in fileio.read_predictions(path).items()}
    return fileio.training_labels(fileio.read_labels(path))


def cmd_kappa(args) -> None:
    ratings_a = _ratings_from_file(args.file_a)
    ratings_b = _ratings_from_file(args.file_b)
    common = sorted(set(ratings_a) & set(ratings_b))
    if not common:
        raise CorpusError("the two rating files share no signatures")
    result = cohen_kappa_details([ratings_a[s] for s in common], [ratings_b[s] for s in common])
    doc = {
        "n": len(common),
        "kappa": result.kappa,
        "observedAgreement": result.observed_agreement,
        "expectedAgreement": result.expected_agreement,
        "degenerate": result.degenerate,
    }
    manifest = RunManifest(command="kappa", config={"n": len(common)})
    for path in (args.file_a, args.file_b):
        manifest.record_input(path)
    _emit(doc, args.output, manifest)


def cmd_sample(args) -> None:
    seed = _resolve_seed(args)
    predictions = fileio.read_predictions(args.predictions)
    population = sorted(sig for sig, (label, _) in predictions.items() if label == args.label)
    if not population:
        raise CorpusError(f"no methods predicted {args.label}")
    picked = sample_for_review(population, args.n, seed)
    required = required_sample_size(len(population))
    doc = {
        "label": args.label,
        "population": len(population),
        "requiredSampleSize": required,
        "n": args.n,
        "satisfiesRule": meets_sample_rule(len(population), args.n),
        "sample": picked,
    }
    manifest = RunManifest(
        command="sample", config={"label": args.label, "n": args.n}, seed=seed
    )
    manifest.record_input(args.predictions)
    _emit(doc, args.output, manifest)


def cmd_taint(args) -> None:
    program_root = Path(args.programs)
    if not program_root.is_dir():
        raise CorpusError(f"{args.programs} is not a directory")
    paths = sorted(program_root.rglob("*.tiny"))
    if not paths:
        raise CorpusError(f"no .tiny programs under {args.programs}")
    sources = parse_signature_list(Path(args.sources).read_text(encoding="utf-8"))
    sinks = parse_signature_list(Path(args.sinks).read_text(encoding="utf-8"))
    rows = []
    for path in paths:
        program = parse_program(path.read_text(encoding="utf-8"), name=path.name)
        for flow in propagate(program, sources, sinks):
            rows.append(
                (path.name, flow.source_sig, flow.source_site, flow.sink_sig, flow.sink_site)
            )
    manifest = RunManifest(
        command="taint",
        config={"programs": len(paths), "sources": len(sources), "sinks": len(sinks)},
    )
    for path in paths:
        manifest.record_input(path)
    manifest.record_input(args.sources)
    manifest.record_input(args.sinks)
    fileio.write_flows(args.output, rows)
    manifest.write_next_to(args.output)
    print(f"found {len(rows)} flows across {len(paths)} programs")


def cmd_report(args) -> None:
    rows = fileio.read_flows(args.flows)
    flows = [Flow(src, s_site, snk, k_site) for _, src, s_site, snk, k_site in rows]
    doc: dict = {
        "flowCount": len(flows),
        "sources": [
            {"signature": e.signature, "count": e.count, "share": e.share}
            for e in flow_report(flows, role="source")
        ],
        "sinks": [
            {"signature": e.signature, "count": e.count, "share": e.share}
            for e in flow_report(flows, role="sink")
        ],
    }
    manifest = RunManifest(command="report", config={"flows": len(flows)})
    manifest.record_input(args.flows)
    if args.oracle:
        verdicts = fileio.read_triage(args.oracle)
        used_sources = {f.source_sig for f in flows}
        used_sinks = {f.sink_sig for f in flows}
        doc["fpRate"] = {
            "sources": fp_rate(used_sources, verdicts),
            "sinks": fp_rate(used_sinks, verdicts),
        }
        manifest.record_input(args.oracle)
    _emit(doc, args.output, manifest)


def cmd_baseline_train(args) -> None:
    seed = _resolve_seed(args)
    records = fileio.read_corpus(args.corpus)
    label_map = fileio.training_labels(fileio.read_labels(args.labels))
    by_sig = {r.signature: r for r in records}
    missing = sorted(set(label_map) - set(by_sig))
    if missing:
        raise CorpusError(f"labeled methods missing from corpus: {missing[:5]}")
    signatures = sorted(label_map)
    features = features_for_records([by_sig[s] for s in signatures])
    labels = np.array([LABELS.index(label_map[s]) for s in signatures], dtype=np.int64)
    cfg = BaselineConfig(learning_rate=args.learning_rate, epochs=args.epochs)
    model = train_baseline(features, labels, cfg)
    manifest = RunManifest(
        command="baseline-train",
        config={"examples": len(signatures), "epochs": cfg.epochs},
        seed=seed,
    )
    manifest.record_input(args.corpus)
    manifest.record_input(args.labels)
    fileio.write_json_atomic(args.output, baseline_to_doc(model))
    manifest.write_next_to(args.output)
    print(f"trained baseline on {len(signatures)} methods")


def cmd_baseline_predict(args) -> None:
    records = fileio.read_corpus(args.corpus)
    model = baseline_from_doc(fileio.read_json(args.model))
    predictions = {}
    for record in records:
        label, probs = predict_baseline(model, features_for_records([record])[0])
        predictions[record.signature] = (label, probs)
    manifest = RunManifest(command="baseline-predict", config={"methods": len(records)})
    manifest.record_input(args.corpus)
    manifest.record_input(args.model)
    fileio.write_predictions(args.output, predictions)
    manifest.write_next_to(args.output)
    print(f"predicted {len(predictions)} methods with the signature baseline")


def cmd_serve(args) -> None:
    from .server import serve

    serve(
        port=args.port,
        corpus_path=args.corpus,
        store_path=args.store,
        predictions_path=args.preds,
        page_size=args.page_size,
    )


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="apisift",
        description="Classify framework API methods as sources, sinks, or neither.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("extract", help="parse Java sources into a method corpus")
    p.add_argument("srcdir")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_extract)

    p = sub.add_parser("train-embedder", help="fit the path-context code embedder")
    p.add_argument("corpus")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--context-cap", type=int, default=200)
    _add_train_flags(p, lr=0.05, epochs=12, optimizer="adam")
    p.set_defaults(handler=cmd_train_embedder)

    p = sub.add_parser("embed-code", help="embed method bodies with trained parameters")
    p.add_argument("corpus")
    p.add_argument("--params", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_embed_code)

    p = sub.add_parser("embed-doc", help="embed documentation text")
    p.add_argument("corpus")
    p.add_argument("--import", dest="import_vectors", default=None, metavar="VEC")
    p.add_argument("--no-idf", action="store_true")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_embed_doc)

    p = sub.add_parser("train", help="train the dual-branch classifier")
    p.add_argument("--labels", required=True)
    p.add_argument("--doc", required=True)
    p.add_argument("--code", required=True)
    p.add_argument("-o", "--output", required=True)
    _add_train_flags(p)
    p.set_defaults(handler=cmd_train)

    p = sub.add_parser("crossval", help="stratified k-fold cross-validation")
    p.add_argument("--labels", required=True)
    p.add_argument("--doc", required=True)
    p.add_argument("--code", required=True)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("-o", "--output", default=None)
    _add_train_flags(p)
    p.set_defaults(handler=cmd_crossval)

    p = sub.add_parser("ablate", help="branch-ablation cross-validation")
    p.add_argument("--labels", required=True)
    p.add_argument("--doc", required=True)
    p.add_argument("--code", required=True)
    p.add_argument("--mode", choices=("doc-only", "code-only", "both"), required=True)
    p.add_argument("--target", choices=("SOURCE", "SINK"), default=None)
    p.add_argument("--k", type=int, default=10)
    p.add_argument("-o", "--output", default=None)
    _add_train_flags(p)
    p.set_defaults(handler=cmd_ablate)

    p = sub.add_parser("predict", help="classify methods with a trained model")
    p.add_argument("--model", required=True)
    p.add_argument("--doc", required=True)
    p.add_argument("--code", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_predict)

    p = sub.add_parser("compare", help="overlap and complementarity of two prediction files")
    p.add_argument("preds_a")
    p.add_argument("preds_b")
    p.add_argument("--labels", required=True)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("kappa", help="inter-rater agreement between two rating files")
    p.add_argument("file_a")
    p.add_argument("file_b")
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(handler=cmd_kappa)

    p = sub.add_parser("sample", help="draw a review sample from predictions")
    p.add_argument("predictions")
    p.add_argument("--label", choices=LABELS, required=True)
    p.add_argument("--n", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(handler=cmd_sample)

    p = sub.add_parser("taint", help="run taint propagation over tiny programs")
    p.add_argument("--programs", required=True)
    p.add_argument("--sources", required=True)
    p.add_argument("--sinks", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_taint)

    p = sub.add_parser("report", help="summarize a flows file, optionally with a TP/FP oracle")
    p.add_argument("flows")
    p.add_argument("--oracle", default=None)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(handler=cmd_report)

    p = sub.add_parser("baseline-train", help="train the signature-feature baseline")
    p.add_argument("corpus")
    p.add_argument("--labels", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--learning-rate", type=float, default=0.5)
    p.add_argument("--epochs", type=int, default=300)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(handler=cmd_baseline_train)

    p = sub.add_parser("baseline-predict", help="classify methods with the baseline")
    p.add_argument("corpus")
    p.add_argument("--model", required=True)
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(handler=cmd_baseline_predict)

    p = sub.add_parser("serve", help="serve the labeling and triage HTTP API")
    p.add_argument("--port", type=int, default=8321)
    p.add_argument("--corpus", required=True)
    p.add_argument("--store", required=True)
    p.add_argument("--preds", default=None)
    p.add_argument("--page-size", type=int, default=20)
    p.set_defaults(handler=cmd_serve)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if not hasattr(args, "handler"):
        parser.print_usage(sys.stderr)
        return 2
    try:
        args.handler(args)
    except ApisiftError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except KeyboardInterrupt:
        return 130
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal-error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())

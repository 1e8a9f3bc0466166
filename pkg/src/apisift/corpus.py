"""Candidate method corpus: selection, doc inheritance, and length stats.

A corpus is built from parsed source units.  The selection rule keeps
methods that are public, documented (directly or through a supertype)
and implemented (non-abstract, non-native, with a body).  Documentation
is resolved breadth-first through the declared supertypes, following
declaration order at equal depth.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .docvec import strip_markup
from .errors import CorpusError
from .javasrc import MethodDecl, SourceUnit, TypeDecl


@dataclass(frozen=True)
class MethodRecord:
    fqcn: str
    name: str
    params: tuple[str, ...]
    return_type: str
    modifiers: frozenset[str]
    body_text: str | None
    doc_text: str | None
    doc_origin: str | None  # "self" or "inherited(<fqcn>)"

    @property
    def signature(self) -> str:
        return f"{self.fqcn}#{self.name}({','.join(self.params)}):{self.return_type}"


@dataclass
class TypeHierarchy:
    edges: dict[str, list[str]] = field(default_factory=dict)  # fqcn -> supertype fqcns
    methods_by_type: dict[str, list[MethodDecl]] = field(default_factory=dict)

    def supertypes(self, fqcn: str) -> list[str]:
        return self.edges.get(fqcn, [])

    def declared(self, fqcn: str, name: str, params: tuple[str, ...]) -> MethodDecl | None:
        for m in self.methods_by_type.get(fqcn, []):
            if m.name == name and tuple(t for t, _ in m.params) == params:
                return m
        return None


@dataclass
class DocLengthStats:
    count: int
    mean_words: float
    median_words: float
    histogram: dict[int, int]  # bucket lower bound (width 10) -> count


def _resolve_name(name: str, unit: SourceUnit, known: set[str]) -> str:
    """Map a declared supertype name to a fully-qualified name.

    Resolution tries, in order: the name as written (already qualified),
    an explicit import ending in the simple name, then the unit's own
    package.  Unresolvable names stay as written.
    """
    if name in known:
        return name
    simple = name.split("<")[0]
    if "." in simple:
        return simple
    for imp in unit.imports:
        if imp.endswith("." + simple):
            return imp
    if unit.package:
        candidate = f"{unit.package}.{simple}"
        if candidate in known:
            return candidate
    return simple


def _fqcn(unit: SourceUnit, decl: TypeDecl) -> str:
    return f"{unit.package}.{decl.name}" if unit.package else decl.name


def build_hierarchy(units: list[SourceUnit]) -> TypeHierarchy:
    """Assemble the supertype graph and per-type method tables."""
    known = {_fqcn(u, d) for u in units for d in u.types}
    h = TypeHierarchy()
    for unit in units:
        for decl in unit.types:
            fqcn = _fqcn(unit, decl)
            if fqcn in h.edges:
                raise CorpusError(f"type {fqcn} declared more than once")
            h.edges[fqcn] = [_resolve_name(s, unit, known) for s in decl.supertypes]
            h.methods_by_type[fqcn] = list(decl.methods)
    _check_acyclic(h)
    return h


def _check_acyclic(h: TypeHierarchy):
    state: dict[str, int] = {}  # 0 visiting, 1 done

    def visit(node: str, trail: list[str]):
        if state.get(node) == 1:
            return
        if state.get(node) == 0:
            cycle = " -> ".join(trail + [node])
            raise CorpusError(f"supertype cycle: {cycle}")
        state[node] = 0
        for nxt in h.supertypes(node):
            visit(nxt, trail + [node])
        state[node] = 1

    for start in list(h.edges):
        visit(start, [])


def resolve_documentation(
    fqcn: str, method: MethodDecl, h: TypeHierarchy
) -> tuple[str, str] | None:
    """Find documentation for a method, walking supertypes breadth-first.

    Returns (docText, docOrigin) or None.  The method's own doc wins;
    otherwise the nearest supertype declaring a method with the same name
    and parameter types, visiting supertypes in declaration order.
    """
    if method.doc:
        return method.doc, "self"
    params = tuple(t for t, _ in method.params)
    queue = list(h.supertypes(fqcn))
    seen = set(queue)
    while queue:
        current = queue.pop(0)
        declared = h.declared(current, method.name, params)
        if declared is not None and declared.doc:
            return declared.doc, f"inherited({current})"
        for nxt in h.supertypes(current):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return None


def is_implemented(method: MethodDecl) -> bool:
    return (
        method.body is not None
        and "abstract" not in method.modifiers
        and "native" not in method.modifiers
    )


def select_candidates(units: list[SourceUnit], h: TypeHierarchy) -> list[MethodRecord]:
    """Keep public, documented, implemented methods; sorted by signature."""
    records: list[MethodRecord] = []
    for unit in units:
        for decl in unit.types:
            fqcn = _fqcn(unit, decl)
            for method in decl.methods:
                if "public" not in method.modifiers:
                    continue
                if not is_implemented(method):
                    continue
                resolved = resolve_documentation(fqcn, method, h)
                if resolved is None:
                    continue
                doc, origin = resolved
                records.append(
                    MethodRecord(
                        fqcn=fqcn,
                        name=method.name,
                        params=tuple(t for t, _ in method.params),
                        return_type=method.return_type,
                        modifiers=method.modifiers,
                        body_text=method.body,
                        doc_text=doc,
                        doc_origin=origin,
                    )
                )
    records.sort(key=lambda r: r.signature)
    for a, b in zip(records, records[1:]):
        if a.signature == b.signature:
            raise CorpusError(f"duplicate signature in corpus: {a.signature}")
    return records


def doc_word_count(text: str) -> int:
    return len(strip_markup(text).split())


def corpus_stats(records: list[MethodRecord]) -> DocLengthStats:
    """Word-count statistics over resolved documentation."""
    counts = sorted(doc_word_count(r.doc_text or "") for r in records)
    n = len(counts)
    if n == 0:
        return DocLengthStats(0, 0.0, 0.0, {})
    mean = sum(counts) / n
    # lower middle for even counts
    median = float(counts[(n - 1) // 2])
    histogram: dict[int, int] = {}
    for c in counts:
        bucket = (c // 10) * 10
        histogram[bucket] = histogram.get(bucket, 0) + 1
    return DocLengthStats(n, mean, median, histogram)


def all_methods(units: list[SourceUnit]) -> list[tuple[str, MethodDecl]]:
    """Every parsed method as (declaring fqcn, decl), in source order."""
    out = []
    for unit in units:
        for decl in unit.types:
            for method in decl.methods:
                out.append((_fqcn(unit, decl), method))
    return out

"""Taint propagation over a tiny straight-line language.

Programs are one statement per line: constant assignment, variable copy,
a binary operation on two variables, and calls (with or without a result
variable).  A call whose callee is on the source list taints its result
with the call site; plain assignments propagate the union of their
operands' taints; a call whose callee is on the sink list reports one
flow per (origin site, sink site) pair over its tainted arguments.

Calls never forward argument taint to their result: only listed sources
introduce taint, and an assignment overwrites (kills) the target's
previous taint.  This keeps list quality — not alias analysis — the only
variable under study.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import MissingLabel, ParseError


# ---------------------------------------------------------------------------
# expressions and statements


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Binop:
    op: str
    left: "Const | Var | Binop"
    right: "Const | Var | Binop"


Expr = Const | Var | Binop


@dataclass(frozen=True)
class Assign:
    target: str
    expr: Expr


@dataclass(frozen=True)
class CallAssign:
    target: str
    callee: str
    args: tuple[str, ...]


@dataclass(frozen=True)
class CallVoid:
    callee: str
    args: tuple[str, ...]


Statement = Assign | CallAssign | CallVoid


@dataclass
class TinyProgram:
    statements: list[Statement]
    name: str = "<program>"


@dataclass(frozen=True, order=True)
class Flow:
    source_sig: str
    source_site: int
    sink_sig: str
    sink_site: int


# ---------------------------------------------------------------------------
# parsing

_IDENT = r"[A-Za-z_$][A-Za-z0-9_$]*"
_SIG_RE = re.compile(
    rf"{_IDENT}(\.{_IDENT})*#{_IDENT}(\([^()]*\))?(:[^\s;()]+)?$"
)
_CONST_RE = re.compile(rf"({_IDENT})\s*=\s*const\s+(-?\d+)$")
_COPY_RE = re.compile(rf"({_IDENT})\s*=\s*({_IDENT})$")
_BINOP_RE = re.compile(rf"({_IDENT})\s*=\s*({_IDENT})\s*([+\-*/])\s*({_IDENT})$")
_CALL_RE = re.compile(rf"(?:({_IDENT})\s*=\s*)?call\s+(.+)\(([^()]*)\)$")

_KEYWORDS = {"call", "const"}


def expr_variables(expr: Expr) -> list[str]:
    """Variables read by an expression, in left-to-right order."""
    if isinstance(expr, Const):
        return []
    if isinstance(expr, Var):
        return [expr.name]
    return expr_variables(expr.left) + expr_variables(expr.right)


def _statement_uses(stmt: Statement) -> list[str]:
    if isinstance(stmt, Assign):
        return expr_variables(stmt.expr)
    return list(stmt.args)


def _statement_defines(stmt: Statement) -> str | None:
    if isinstance(stmt, (Assign, CallAssign)):
        return stmt.target
    return None


def check_program(program: TinyProgram) -> None:
    """Validate define-before-use and callee signature syntax."""
    defined: set[str] = set()
    for line, stmt in enumerate(program.statements, start=1):
        for used in _statement_uses(stmt):
            if used not in defined:
                raise ParseError(
                    f"variable {used!r} used before definition",
                    line=line,
                    path=program.name,
                )
        if isinstance(stmt, (CallAssign, CallVoid)) and not _SIG_RE.fullmatch(stmt.callee):
            raise ParseError(
                f"malformed callee signature {stmt.callee!r}", line=line, path=program.name
            )
        target = _statement_defines(stmt)
        if target is not None:
            if target in _KEYWORDS:
                raise ParseError(
                    f"{target!r} is reserved and cannot name a variable",
                    line=line,
                    path=program.name,
                )
            defined.add(target)


def parse_program(text: str, name: str = "<program>") -> TinyProgram:
    """Parse one statement per line; validates define-before-use."""
    statements: list[Statement] = []
    defined: set[str] = set()

    def finish(stmt: Statement, lineno: int) -> None:
        for used in _statement_uses(stmt):
            if used not in defined:
                raise ParseError(
                    f"variable {used!r} used before definition", line=lineno, path=name
                )
        target = _statement_defines(stmt)
        if target in _KEYWORDS:
            raise ParseError(
                f"{target!r} is reserved and cannot name a variable", line=lineno, path=name
            )
        if target is not None:
            defined.add(target)
        statements.append(stmt)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if not line.endswith(";"):
            raise ParseError("statement must end with ';'", line=lineno, path=name)
        body = line[:-1].strip()

        m = _CALL_RE.fullmatch(body)
        if m:
            target, callee, arg_text = m.group(1), m.group(2).strip(), m.group(3).strip()
            if not _SIG_RE.fullmatch(callee):
                raise ParseError(
                    f"malformed callee signature {callee!r}", line=lineno, path=name
                )
            args = tuple(a.strip() for a in arg_text.split(",")) if arg_text else ()
            for a in args:
                if not re.fullmatch(_IDENT, a):
                    raise ParseError(f"bad call argument {a!r}", line=lineno, path=name)
            if target is None:
                finish(CallVoid(callee, args), lineno)
            else:
                finish(CallAssign(target, callee, args), lineno)
            continue

        m = _CONST_RE.fullmatch(body)
        if m:
            finish(Assign(m.group(1), Const(int(m.group(2)))), lineno)
            continue

        m = _BINOP_RE.fullmatch(body)
        if m:
            finish(
                Assign(m.group(1), Binop(m.group(3), Var(m.group(2)), Var(m.group(4)))),
                lineno,
            )
            continue

        m = _COPY_RE.fullmatch(body)
        if m and m.group(2) not in _KEYWORDS:
            finish(Assign(m.group(1), Var(m.group(2))), lineno)
            continue

        raise ParseError(f"unrecognized statement {line!r}", line=lineno, path=name)

    return TinyProgram(statements, name=name)


def program_to_text(program: TinyProgram) -> str:
    """Render back to the one-statement-per-line format."""

    def expr_text(expr: Expr) -> str:
        if isinstance(expr, Const):
            return f"const {expr.value}"
        if isinstance(expr, Var):
            return expr.name
        return f"{expr_text(expr.left)} {expr.op} {expr_text(expr.right)}"

    lines = []
    for stmt in program.statements:
        if isinstance(stmt, Assign):
            lines.append(f"{stmt.target} = {expr_text(stmt.expr)};")
        elif isinstance(stmt, CallAssign):
            lines.append(f"{stmt.target} = call {stmt.callee}({', '.join(stmt.args)});")
        else:
            lines.append(f"call {stmt.callee}({', '.join(stmt.args)});")
    return "\n".join(lines) + ("\n" if lines else "")


# ---------------------------------------------------------------------------
# propagation


def propagate(program: TinyProgram, sources: set[str], sinks: set[str]) -> list[Flow]:
    """Forward taint pass; flows are deduplicated by (origin, sink) site."""
    taint: dict[str, frozenset[int]] = {}
    flows: list[Flow] = []
    seen: set[tuple[int, int]] = set()
    empty: frozenset[int] = frozenset()
    for site, stmt in enumerate(program.statements):
        if isinstance(stmt, (CallAssign, CallVoid)):
            if stmt.callee in sinks:
                incoming: set[int] = set()
                for arg in stmt.args:
                    incoming |= taint.get(arg, empty)
                for origin in sorted(incoming):
                    if (origin, site) not in seen:
                        seen.add((origin, site))
                        origin_stmt = program.statements[origin]
                        assert isinstance(origin_stmt, CallAssign)
                        flows.append(Flow(origin_stmt.callee, origin, stmt.callee, site))
        if isinstance(stmt, Assign):
            union: set[int] = set()
            for used in expr_variables(stmt.expr):
                union |= taint.get(used, empty)
            taint[stmt.target] = frozenset(union)
        elif isinstance(stmt, CallAssign):
            if stmt.callee in sources:
                taint[stmt.target] = frozenset({site})
            else:
                taint[stmt.target] = empty
    return flows


# ---------------------------------------------------------------------------
# list reduction and reporting


def reduce_lists(
    flows: list[Flow], sources: set[str], sinks: set[str]
) -> tuple[set[str], set[str]]:
    """Keep exactly the signatures that appear in at least one flow."""
    used_sources = {f.source_sig for f in flows} & sources
    used_sinks = {f.sink_sig for f in flows} & sinks
    return used_sources, used_sinks


@dataclass(frozen=True)
class FlowShare:
    signature: str
    count: int
    share: float


def flow_report(flows: list[Flow], role: str = "source") -> list[FlowShare]:
    """Per-signature flow counts and shares, most common first."""
    if role not in ("source", "sink"):
        raise ValueError(f"role must be 'source' or 'sink', got {role!r}")
    counts: dict[str, int] = {}
    for f in flows:
        sig = f.source_sig if role == "source" else f.sink_sig
        counts[sig] = counts.get(sig, 0) + 1
    total = sum(counts.values())
    ordered = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return [FlowShare(sig, n, n / total) for sig, n in ordered]


def fp_rate(used_list: set[str], oracle_labels: dict[str, str]) -> float:
    """FP / (FP + TP) over a used-signature list; empty list counts 0."""
    fp = tp = 0
    for sig in sorted(used_list):
        if sig not in oracle_labels:
            raise MissingLabel(f"no oracle label for {sig}")
        verdict = oracle_labels[sig]
        if verdict == "FP":
            fp += 1
        elif verdict == "TP":
            tp += 1
        else:
            raise MissingLabel(f"oracle label for {sig} must be TP or FP, got {verdict!r}")
    if fp + tp == 0:
        return 0.0
    return fp / (fp + tp)


# ---------------------------------------------------------------------------
# signature list files


def parse_signature_list(text: str) -> set[str]:
    """One signature per line; blank lines and # comments ignored."""
    out: set[str] = set()
    for raw in text.splitlines():
        line = raw.strip()
        if line and not line.startswith("#"):
            out.add(line)
    return out

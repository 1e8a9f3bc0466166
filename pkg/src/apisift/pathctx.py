"""AST path contexts: terminal-to-terminal paths through a method body tree.

A path context pairs two terminals (in source order) with the simple
path between them: node kinds walked upward from the left terminal to
the lowest common ancestor, then downward to the right terminal.  The
common ancestor contributes one ``up`` and one ``down`` entry, so the
entry count equals the number of edges on the path and reversing a
context while flipping directions yields the opposite-direction context
exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import MethodRecord
from .errors import ConfigError
from .javasrc import AstNode, parse_body

UP = "up"
DOWN = "down"


@dataclass(frozen=True)
class PathContext:
    left: str  # terminal token text
    path: tuple[tuple[str, str], ...]  # (node kind, direction) entries
    right: str  # terminal token text


def build_ast(record: MethodRecord) -> AstNode:
    """Method-level AST: parameters then body statements under one root.

    The method name is deliberately not part of the tree; the embedder
    trains on predicting it, so including it would leak the label.
    """
    children: list[AstNode] = []
    for ptype, pname in zip(record.params, _param_names(record)):
        type_names = [AstNode("Name", [], t) for t in _type_identifiers(ptype)]
        children.append(
            AstNode("Param", [AstNode("TypeRef", type_names), AstNode("Name", [], pname)])
        )
    if record.body_text is not None:
        children.extend(parse_body(record.body_text))
    return AstNode("MethodDecl", children)


def _param_names(record: MethodRecord) -> list[str]:
    return [f"p{i}" for i in range(len(record.params))]


def _type_identifiers(type_text: str) -> list[str]:
    """Identifier tokens of a canonical type string, in order."""
    out: list[str] = []
    current: list[str] = []
    for ch in type_text:
        if ch.isalnum() or ch in "_$":
            current.append(ch)
        else:
            if current:
                out.append("".join(current))
                current = []
    if current:
        out.append("".join(current))
    return out


def collect_terminals(root: AstNode) -> list[tuple[str, list[tuple[AstNode, int]]]]:
    """Terminals in source (depth-first) order with their ancestor chains.

    Each entry is (token, chain) where chain runs root..terminal as
    (node, index-in-parent) pairs; the root's index is 0.
    """
    out: list[tuple[str, list[tuple[AstNode, int]]]] = []

    def walk(node: AstNode, chain: list[tuple[AstNode, int]]):
        if node.is_terminal:
            out.append((node.token, list(chain)))
            return
        for i, child in enumerate(node.children):
            chain.append((child, i))
            walk(child, chain)
            chain.pop()

    walk(root, [(root, 0)])
    return out


def extract_path_contexts(
    root: AstNode, max_len: int = 8, max_width: int = 2
) -> list[PathContext]:
    """All terminal pairs within the length and width limits, source order."""
    if max_len < 2:
        raise ConfigError(f"max_len must be >= 2, got {max_len}")
    if max_width < 1:
        raise ConfigError(f"max_width must be >= 1, got {max_width}")
    terminals = collect_terminals(root)
    contexts: list[PathContext] = []
    for i in range(len(terminals)):
        tok_a, chain_a = terminals[i]
        for j in range(i + 1, len(terminals)):
            tok_b, chain_b = terminals[j]
            # longest common prefix of the ancestor chains
            limit = min(len(chain_a), len(chain_b))
            common = 0
            while common < limit and chain_a[common][0] is chain_b[common][0]:
                common += 1
            length = (len(chain_a) - common) + (len(chain_b) - common)
            if length > max_len:
                continue
            spread = abs(chain_a[common][1] - chain_b[common][1])
            if spread > max_width:
                continue
            ups = [
                (chain_a[k][0].kind, UP) for k in range(len(chain_a) - 2, common - 2, -1)
            ]
            downs = [(chain_b[k][0].kind, DOWN) for k in range(common - 1, len(chain_b) - 1)]
            contexts.append(PathContext(tok_a, tuple(ups + downs), tok_b))
    return contexts


def path_key(path: tuple[tuple[str, str], ...]) -> str:
    """Canonical string form of a path (vocabulary key)."""
    return "|".join(f"{kind}:{'u' if d == UP else 'd'}" for kind, d in path)


def flip_context(ctx: PathContext) -> PathContext:
    """Reverse a context: swap endpoints, reverse entries, flip directions."""
    flipped = tuple(
        (kind, DOWN if d == UP else UP) for kind, d in reversed(ctx.path)
    )
    return PathContext(ctx.right, flipped, ctx.left)

"""Tokenizer and parsers for the supported Java-like source subset.

Two layers share one token stream:

* declaration parsing (:func:`parse_unit`) recovers package/import headers,
  class and interface declarations with extends/implements, method headers
  with modifiers, verbatim body text, and attached doc comments;
* body parsing (:func:`parse_body`) turns method body text into a generic
  :class:`AstNode` tree used for path-context extraction.

Generics are captured as raw text inside type names; annotations are
skipped.  Anything outside the subset raises :class:`ParseError` with a
location -- there is no partial output.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import ParseError

MODIFIERS = frozenset(
    ["public", "private", "protected", "static", "abstract", "native", "final", "synchronized"]
)

PRIMITIVES = frozenset(
    ["void", "boolean", "byte", "char", "short", "int", "long", "float", "double"]
)

# Java keywords that never become AST terminals.  'this', 'true', 'false'
# and 'null' are deliberately absent: they map to terminal nodes.
KEYWORDS = frozenset(
    [
        "if", "else", "while", "for", "return", "new", "throw", "break",
        "continue", "instanceof", "class", "interface", "extends",
        "implements", "package", "import", "throws",
    ]
    + sorted(MODIFIERS)
)

WORD_LITERALS = frozenset(["true", "false", "null"])


# ---------------------------------------------------------------------------
# tokens


@dataclass(frozen=True)
class Token:
    kind: str  # ident | number | string | char | punct | doc | eof
    text: str
    line: int
    col: int
    start: int  # char offset in source
    end: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<doc>/\*\*.*?\*/)
  | (?P<comment>/\*.*?\*/|//[^\n]*)
  | (?P<number>0[xX][0-9a-fA-F]+[lL]?
        |\d+\.\d*(?:[eE][+-]?\d+)?[fFdD]?
        |\.\d+(?:[eE][+-]?\d+)?[fFdD]?
        |\d+(?:[eE][+-]?\d+)?[fFdDlL]?)
  | (?P<ident>[A-Za-z_$][A-Za-z0-9_$]*)
  | (?P<string>"(?:\\.|[^"\\])*")
  | (?P<char>'(?:\\.|[^'\\])')
  | (?P<punct>>>>=|>>>|>>=|<<=|==|!=|<=|>=|&&|\|\||\+\+|--|\+=|-=|\*=|/=|%=|&=|\|=|\^=|<<|>>
        |[{}()\[\];,.<>=+\-*/%!~&|^?:@])
    """,
    re.VERBOSE | re.DOTALL,
)


def tokenize(text: str, path: str | None = None) -> list[Token]:
    """Scan source text into tokens, keeping doc comments and dropping the rest."""
    tokens: list[Token] = []
    pos = 0
    line = 1
    line_start = 0
    n = len(text)
    while pos < n:
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(
                f"unsupported character {text[pos]!r}", line, pos - line_start + 1, path
            )
        kind = m.lastgroup
        tok_text = m.group()
        col = pos - line_start + 1
        if kind not in ("ws", "comment"):
            if kind == "doc":
                body = tok_text[3:-2]  # strip /** and */
                tokens.append(Token("doc", body, line, col, pos, m.end()))
            else:
                tokens.append(Token(kind, tok_text, line, col, pos, m.end()))
        newlines = tok_text.count("\n")
        if newlines:
            line += newlines
            line_start = pos + tok_text.rfind("\n") + 1
        pos = m.end()
    tokens.append(Token("eof", "", line, n - line_start + 1, n, n))
    return tokens


def clean_doc(raw: str) -> str:
    """Strip the leading '*' gutter from doc-comment content."""
    lines = []
    for ln in raw.split("\n"):
        stripped = ln.strip()
        if stripped.startswith("*"):
            stripped = stripped[1:].strip()
        lines.append(stripped)
    return "\n".join(lines).strip()


# ---------------------------------------------------------------------------
# declaration structures


@dataclass
class MethodDecl:
    name: str
    modifiers: frozenset[str]
    return_type: str
    params: list[tuple[str, str]]  # (type, name)
    body: str | None  # verbatim text between braces, None if abstract/native
    doc: str | None
    line: int


@dataclass
class TypeDecl:
    name: str
    kind: str  # class | interface
    modifiers: frozenset[str]
    supertypes: list[str]  # extends then implements, declaration order
    doc: str | None
    methods: list[MethodDecl] = field(default_factory=list)


@dataclass
class SourceUnit:
    package: str
    imports: list[str]
    types: list[TypeDecl]
    path: str | None = None


def method_header(m: MethodDecl) -> str:
    """Render a method header that reparses to the same identity."""
    mods = " ".join(sorted(m.modifiers))
    params = ", ".join(f"{t} p{i}" for i, (t, _) in enumerate(m.params))
    head = f"{m.return_type} {m.name}({params})"
    return f"{mods} {head}" if mods else head


# ---------------------------------------------------------------------------
# AST nodes for method bodies


@dataclass
class AstNode:
    kind: str
    children: list["AstNode"] = field(default_factory=list)
    token: str | None = None

    @property
    def is_terminal(self) -> bool:
        return self.token is not None


def _node(kind: str, *children: AstNode) -> AstNode:
    return AstNode(kind, list(children))


def _term(kind: str, token: str) -> AstNode:
    return AstNode(kind, [], token)


_BINOP_KINDS = {
    "||": "Or", "&&": "And", "|": "BitOr", "^": "BitXor", "&": "BitAnd",
    "==": "Eq", "!=": "Ne", "<": "Lt", ">": "Gt", "<=": "Le", ">=": "Ge",
    "<<": "Shl", ">>": "Shr", ">>>": "UShr",
    "+": "Add", "-": "Sub", "*": "Mul", "/": "Div", "%": "Mod",
}

_BINARY_LEVELS = [
    ("||",),
    ("&&",),
    ("|",),
    ("^",),
    ("&",),
    ("==", "!="),
    ("<", ">", "<=", ">=", "instanceof"),
    ("<<", ">>", ">>>"),
    ("+", "-"),
    ("*", "/", "%"),
]

_ASSIGN_OPS = {
    "=": "Assign", "+=": "AssignAdd", "-=": "AssignSub", "*=": "AssignMul",
    "/=": "AssignDiv", "%=": "AssignMod", "&=": "AssignAnd", "|=": "AssignOr",
    "^=": "AssignXor", "<<=": "AssignShl", ">>=": "AssignShr", ">>>=": "AssignUShr",
}

_UNARY_KINDS = {"!": "Not", "~": "BitNot", "-": "Neg", "+": "Pos", "++": "PreInc", "--": "PreDec"}

_GENERIC_OK = {".", ",", "<", ">", ">>", "[", "]"}


class _TypeFail(Exception):
    """Internal backtracking signal for type capture attempts."""


class _Parser:
    def __init__(self, text: str, path: str | None = None):
        self.text = text
        self.path = path
        self.tokens = tokenize(text, path)
        self.pos = 0

    # -- stream helpers ----------------------------------------------------

    def peek(self, ahead: int = 0) -> Token:
        i = min(self.pos + ahead, len(self.tokens) - 1)
        return self.tokens[i]

    def next(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().kind in ("punct", "ident")

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if not self.at(text):
            self.fail(f"expected {text!r}, found {tok.text!r}")
        return self.next()

    def expect_ident(self) -> Token:
        tok = self.peek()
        if tok.kind != "ident" or tok.text in KEYWORDS:
            self.fail(f"expected identifier, found {tok.text!r}")
        return self.next()

    def fail(self, message: str):
        tok = self.peek()
        raise ParseError(message, tok.line, tok.col, self.path)

    # -- types -------------------------------------------------------------

    def capture_type(self) -> tuple[str, list[str]]:
        """Parse a type; returns (canonical text, identifier tokens).

        Canonical text concatenates tokens without whitespace, so the
        same type always renders identically.  Raises _TypeFail when the
        upcoming tokens are not a type (callers backtrack).
        """
        parts: list[str] = []
        idents: list[str] = []
        tok = self.peek()
        if tok.kind != "ident" or (tok.text in KEYWORDS):
            raise _TypeFail()
        if tok.text in WORD_LITERALS or tok.text == "this":
            raise _TypeFail()
        self.next()
        parts.append(tok.text)
        idents.append(tok.text)
        if tok.text not in PRIMITIVES:
            while self.peek().text == "." and self.peek(1).kind == "ident" and self.peek(1).text not in KEYWORDS:
                self.next()
                seg = self.next()
                parts.append("." + seg.text)
                idents.append(seg.text)
            if self.peek().text == "<":
                depth = 0
                while True:
                    t = self.peek()
                    if t.kind == "eof":
                        raise _TypeFail()
                    if t.kind == "ident":
                        if t.text in KEYWORDS or t.text in WORD_LITERALS:
                            raise _TypeFail()
                        idents.append(t.text)
                    elif not (t.kind == "punct" and t.text in _GENERIC_OK):
                        raise _TypeFail()
                    if t.text == "<":
                        depth += 1
                    elif t.text == ">":
                        depth -= 1
                    elif t.text == ">>":
                        depth -= 2
                    if depth < 0:
                        raise _TypeFail()
                    parts.append(t.text)
                    self.next()
                    if depth == 0:
                        break
        while self.peek().text == "[":
            if self.peek(1).text != "]":
                break
            self.next()
            self.next()
            parts.append("[]")
        return "".join(parts), idents

    def try_type(self) -> tuple[str, list[str]] | None:
        saved = self.pos
        try:
            return self.capture_type()
        except _TypeFail:
            self.pos = saved
            return None

    def type_ref(self) -> AstNode:
        canonical, idents = self.capture_type()
        del canonical
        return AstNode("TypeRef", [_term("Name", t) for t in idents])

    # -- declarations ------------------------------------------------------

    def skip_annotation(self):
        self.expect("@")
        self.expect_ident()
        while self.accept("."):
            self.expect_ident()
        if self.at("("):
            self.skip_balanced("(", ")")

    def skip_balanced(self, open_text: str, close_text: str):
        self.expect(open_text)
        depth = 1
        while depth > 0:
            tok = self.next()
            if tok.kind == "eof":
                self.fail(f"unterminated {open_text!r}")
            if tok.text == open_text:
                depth += 1
            elif tok.text == close_text:
                depth -= 1

    def qualified_name(self) -> str:
        parts = [self.expect_ident().text]
        while self.accept("."):
            if self.accept("*"):
                parts.append("*")
                break
            parts.append(self.expect_ident().text)
        return ".".join(parts)

    def parse_unit(self) -> SourceUnit:
        package = ""
        imports: list[str] = []
        types: list[TypeDecl] = []
        pending_doc: str | None = None
        if self.at("package"):
            self.next()
            package = self.qualified_name()
            self.expect(";")
        while self.at("import"):
            self.next()
            if self.at("static"):
                self.next()
            imports.append(self.qualified_name())
            self.expect(";")
        while self.peek().kind != "eof":
            tok = self.peek()
            if tok.kind == "doc":
                pending_doc = clean_doc(tok.text)
                self.next()
                continue
            if tok.text == "@":
                self.skip_annotation()
                continue
            types.append(self.parse_type_decl(pending_doc))
            pending_doc = None
        return SourceUnit(package, imports, types, self.path)

    def parse_type_decl(self, doc: str | None) -> TypeDecl:
        modifiers = self.parse_modifiers()
        if self.at("class"):
            kind = "class"
        elif self.at("interface"):
            kind = "interface"
        else:
            self.fail(f"expected class or interface, found {self.peek().text!r}")
        self.next()
        name = self.expect_ident().text
        if self.at("<"):
            self.fail("generic type declarations are not supported")
        supertypes: list[str] = []
        if self.accept("extends"):
            supertypes.append(self.declared_type())
            while kind == "interface" and self.accept(","):
                supertypes.append(self.declared_type())
        if kind == "class" and self.accept("implements"):
            supertypes.append(self.declared_type())
            while self.accept(","):
                supertypes.append(self.declared_type())
        self.expect("{")
        decl = TypeDecl(name, kind, modifiers, supertypes, doc)
        pending_doc: str | None = None
        while not self.at("}"):
            tok = self.peek()
            if tok.kind == "eof":
                self.fail("unterminated type declaration")
            if tok.kind == "doc":
                pending_doc = clean_doc(tok.text)
                self.next()
                continue
            if tok.text == "@":
                self.skip_annotation()
                continue
            member = self.parse_member(decl, pending_doc)
            pending_doc = None
            if member is not None:
                decl.methods.append(member)
        self.expect("}")
        return decl

    def declared_type(self) -> str:
        try:
            canonical, _ = self.capture_type()
        except _TypeFail:
            self.fail(f"expected type name, found {self.peek().text!r}")
        return canonical

    def parse_modifiers(self) -> frozenset[str]:
        mods = set()
        while True:
            tok = self.peek()
            if tok.kind == "ident" and tok.text in MODIFIERS:
                mods.add(tok.text)
                self.next()
            elif tok.text == "@":
                self.skip_annotation()
            else:
                return frozenset(mods)

    def parse_member(self, decl: TypeDecl, doc: str | None) -> MethodDecl | None:
        """Parse one member; methods are returned, fields and initializers dropped."""
        modifiers = self.parse_modifiers()
        if self.at("{"):  # static or instance initializer
            self.skip_balanced("{", "}")
            return None
        if self.at("class") or self.at("interface"):
            self.fail("nested type declarations are not supported")
        line = self.peek().line
        if (
            self.peek().kind == "ident"
            and self.peek().text == decl.name
            and self.peek(1).text == "("
        ):
            # constructor: recorded as a void method under the class name
            name = self.next().text
            return self.finish_method(name, modifiers, "void", doc, line)
        try:
            return_type, _ = self.capture_type()
        except _TypeFail:
            self.fail(f"expected member declaration, found {self.peek().text!r}")
        name_tok = self.expect_ident()
        if self.at("("):
            return self.finish_method(name_tok.text, modifiers, return_type, doc, line)
        # field declaration: skip to ';' at bracket depth zero
        depth = 0
        while True:
            tok = self.next()
            if tok.kind == "eof":
                self.fail("unterminated field declaration")
            if tok.text in ("{", "(", "["):
                depth += 1
            elif tok.text in ("}", ")", "]"):
                depth -= 1
            elif tok.text == ";" and depth == 0:
                return None

    def finish_method(
        self, name: str, modifiers: frozenset[str], return_type: str, doc: str | None, line: int
    ) -> MethodDecl:
        self.expect("(")
        params: list[tuple[str, str]] = []
        if not self.at(")"):
            while True:
                self.accept("final")
                try:
                    ptype, _ = self.capture_type()
                except _TypeFail:
                    self.fail(f"expected parameter type, found {self.peek().text!r}")
                if self.at("."):
                    self.fail("varargs parameters are not supported")
                pname = self.expect_ident().text
                params.append((ptype, pname))
                if not self.accept(","):
                    break
        self.expect(")")
        if self.accept("throws"):
            self.qualified_name()
            while self.accept(","):
                self.qualified_name()
        if self.accept(";"):
            return MethodDecl(name, modifiers, return_type, params, None, doc, line)
        open_tok = self.expect("{")
        depth = 1
        while depth > 0:
            tok = self.next()
            if tok.kind == "eof":
                self.fail("unterminated method body")
            if tok.text == "{":
                depth += 1
            elif tok.text == "}":
                depth -= 1
        close_tok = self.tokens[self.pos - 1]
        body = self.text[open_tok.end : close_tok.start]
        return MethodDecl(name, modifiers, return_type, params, body, doc, line)

    # -- statements --------------------------------------------------------

    def parse_statements_until(self, terminator: str | None) -> list[AstNode]:
        out: list[AstNode] = []
        while True:
            tok = self.peek()
            if tok.kind == "eof":
                if terminator is None:
                    return out
                self.fail(f"expected {terminator!r} before end of input")
            if terminator is not None and self.at(terminator):
                return out
            if tok.kind == "doc":  # stray doc comment inside a body
                self.next()
                continue
            out.extend(self.parse_statement())

    def parse_statement(self) -> list[AstNode]:
        tok = self.peek()
        if self.at("{"):
            self.next()
            stmts = self.parse_statements_until("}")
            self.expect("}")
            return [AstNode("Block", stmts)]
        if self.at(";"):
            self.next()
            return [AstNode("Empty")]
        if self.at("if"):
            self.next()
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            then = self.branch_body()
            if self.accept("else"):
                other = self.branch_body()
                return [_node("If", cond, then, other)]
            return [_node("If", cond, then)]
        if self.at("while"):
            self.next()
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            return [_node("While", cond, self.branch_body())]
        if self.at("for"):
            return [self.parse_for()]
        if self.at("return"):
            self.next()
            if self.accept(";"):
                return [AstNode("Return")]
            value = self.parse_expr()
            self.expect(";")
            return [_node("Return", value)]
        if self.at("throw"):
            self.next()
            value = self.parse_expr()
            self.expect(";")
            return [_node("Throw", value)]
        if self.at("break") or self.at("continue"):
            kind = "Break" if tok.text == "break" else "Continue"
            self.next()
            self.expect(";")
            return [AstNode(kind)]
        decl = self.try_local_var()
        if decl is not None:
            return decl
        expr = self.parse_expr()
        self.expect(";")
        return [expr]

    def branch_body(self) -> AstNode:
        stmts = self.parse_statement()
        if len(stmts) == 1:
            return stmts[0]
        return AstNode("Block", stmts)

    def parse_for(self) -> AstNode:
        self.next()
        self.expect("(")
        saved = self.pos
        # enhanced for: Type name : expr
        got = self.try_type()
        if got is not None and self.peek().kind == "ident" and self.peek(1).text == ":":
            self.pos = saved
            type_node = self.type_ref()
            name = _term("Name", self.expect_ident().text)
            self.expect(":")
            iterable = self.parse_expr()
            self.expect(")")
            return _node("ForEach", type_node, name, iterable, self.branch_body())
        self.pos = saved
        init: list[AstNode] = []
        if not self.at(";"):
            decl = self.try_local_var()  # consumes trailing ';'
            if decl is not None:
                init = decl
            else:
                init = [self.parse_expr()]
                self.expect(";")
        else:
            self.next()
        cond: list[AstNode] = []
        if not self.at(";"):
            cond = [self.parse_expr()]
        self.expect(";")
        update: list[AstNode] = []
        if not self.at(")"):
            update.append(self.parse_expr())
            while self.accept(","):
                update.append(self.parse_expr())
        self.expect(")")
        body = self.branch_body()
        return AstNode("For", init + cond + update + [body])

    def try_local_var(self) -> list[AstNode] | None:
        saved = self.pos
        got = self.try_type()
        if got is None:
            return None
        _, idents = got
        if self.peek().kind != "ident" or self.peek().text in KEYWORDS:
            self.pos = saved
            return None
        follow = self.peek(1).text
        if follow not in ("=", ",", ";"):
            self.pos = saved
            return None
        # one LocalVar node per statement; the shared type appears once so
        # terminal counts line up with the token stream
        type_node = AstNode("TypeRef", [_term("Name", t) for t in idents])
        children: list[AstNode] = [type_node]
        while True:
            name = self.expect_ident().text
            declarator = [_term("Name", name)]
            if self.accept("="):
                declarator.append(self.parse_assignment())
            children.append(AstNode("Declarator", declarator))
            if self.accept(","):
                continue
            self.expect(";")
            return [AstNode("LocalVar", children)]

    # -- expressions -------------------------------------------------------

    def parse_expr(self) -> AstNode:
        return self.parse_assignment()

    def parse_assignment(self) -> AstNode:
        lhs = self.parse_ternary()
        tok = self.peek()
        if tok.kind == "punct" and tok.text in _ASSIGN_OPS:
            kind = _ASSIGN_OPS[tok.text]
            self.next()
            rhs = self.parse_assignment()
            return _node(kind, lhs, rhs)
        return lhs

    def parse_ternary(self) -> AstNode:
        cond = self.parse_binary(0)
        if self.accept("?"):
            then = self.parse_expr()
            self.expect(":")
            other = self.parse_ternary()
            return _node("Ternary", cond, then, other)
        return cond

    def parse_binary(self, level: int) -> AstNode:
        if level >= len(_BINARY_LEVELS):
            return self.parse_unary()
        ops = _BINARY_LEVELS[level]
        node = self.parse_binary(level + 1)
        while True:
            tok = self.peek()
            if tok.text in ops and tok.kind in ("punct", "ident"):
                self.next()
                if tok.text == "instanceof":
                    node = _node("InstanceOf", node, self.type_ref())
                else:
                    rhs = self.parse_binary(level + 1)
                    node = _node(_BINOP_KINDS[tok.text], node, rhs)
            else:
                return node

    def parse_unary(self) -> AstNode:
        tok = self.peek()
        if tok.kind == "punct" and tok.text in ("!", "~", "-", "+", "++", "--"):
            self.next()
            return _node(_UNARY_KINDS[tok.text], self.parse_unary())
        return self.parse_postfix()

    def parse_postfix(self) -> AstNode:
        node = self.parse_primary()
        while True:
            tok = self.peek()
            if tok.text == ".":
                self.next()
                name = self.expect_ident()
                if self.at("("):
                    args = self.parse_args()
                    node = AstNode("Call", [node, _term("Name", name.text)] + args)
                else:
                    node = _node("FieldAccess", node, _term("Name", name.text))
            elif tok.text == "[":
                self.next()
                index = self.parse_expr()
                self.expect("]")
                node = _node("ArrayAccess", node, index)
            elif tok.text == "(" and node.kind == "Name":
                args = self.parse_args()
                node = AstNode("Call", [node] + args)
            elif tok.text in ("++", "--"):
                self.next()
                kind = "PostInc" if tok.text == "++" else "PostDec"
                node = _node(kind, node)
            else:
                return node

    def parse_args(self) -> list[AstNode]:
        self.expect("(")
        args: list[AstNode] = []
        if not self.at(")"):
            args.append(self.parse_expr())
            while self.accept(","):
                args.append(self.parse_expr())
        self.expect(")")
        return args

    def parse_primary(self) -> AstNode:
        tok = self.peek()
        if tok.kind in ("number", "string", "char"):
            self.next()
            return _term("Literal", tok.text)
        if tok.kind == "ident":
            if tok.text in WORD_LITERALS:
                self.next()
                return _term("Literal", tok.text)
            if tok.text == "this":
                self.next()
                return _term("This", "this")
            if tok.text == "new":
                return self.parse_new()
            if tok.text in KEYWORDS:
                self.fail(f"unexpected keyword {tok.text!r} in expression")
            self.next()
            return _term("Name", tok.text)
        if tok.text == "(":
            cast = self.try_cast()
            if cast is not None:
                return cast
            self.next()
            inner = self.parse_expr()
            self.expect(")")
            return inner
        self.fail(f"unexpected token {tok.text!r} in expression")

    def parse_new(self) -> AstNode:
        self.next()
        try:
            canonical, idents = self.capture_type()
        except _TypeFail:
            self.fail(f"expected type after 'new', found {self.peek().text!r}")
        type_node = AstNode("TypeRef", [_term("Name", t) for t in idents])
        if canonical.endswith("[]") or self.at("["):
            if not self.at("["):
                self.fail("array initializers are not supported")
            dims: list[AstNode] = []
            while self.accept("["):
                if self.at("]"):
                    self.next()
                    continue
                dims.append(self.parse_expr())
                self.expect("]")
            return AstNode("ArrayNew", [type_node] + dims)
        args = self.parse_args()
        return AstNode("New", [type_node] + args)

    def try_cast(self) -> AstNode | None:
        saved = self.pos
        self.expect("(")
        got = self.try_type()
        if got is None or not self.at(")"):
            self.pos = saved
            return None
        canonical, idents = got
        self.next()  # ')'
        follow = self.peek()
        primitive = canonical.split("[")[0] in PRIMITIVES
        starts_operand = (
            follow.kind in ("number", "string", "char")
            or (follow.kind == "ident" and (follow.text not in KEYWORDS or follow.text == "new"))
            or follow.text in ("(", "!", "~")
            or (primitive and follow.text in ("-", "+"))
        )
        if not starts_operand:
            self.pos = saved
            return None
        type_node = AstNode("TypeRef", [_term("Name", t) for t in idents])
        return _node("Cast", type_node, self.parse_unary())


# ---------------------------------------------------------------------------
# public entry points


def parse_unit(text: str, path: str | None = None) -> SourceUnit:
    """Parse one source file into its declarations.

    Every method declaration appears exactly once with modifiers, header,
    body text and the nearest preceding doc comment attached.
    """
    parser = _Parser(text, path)
    unit = parser.parse_unit()
    if parser.peek().kind != "eof":
        parser.fail("trailing input after last type declaration")
    return unit


def parse_body(text: str, path: str | None = None) -> list[AstNode]:
    """Parse method body text into a list of statement nodes."""
    parser = _Parser(text, path)
    stmts = parser.parse_statements_until(None)
    return stmts


def count_countable_tokens(text: str) -> int:
    """Token-level count of identifiers and literals in body text.

    Independent of the AST builder: scans tokens and counts everything
    that is not a keyword or punctuation.  Used as an oracle for the
    terminal count of parsed bodies.
    """
    count = 0
    for tok in tokenize(text):
        if tok.kind in ("number", "string", "char"):
            count += 1
        elif tok.kind == "ident" and tok.text not in KEYWORDS:
            count += 1
    return count

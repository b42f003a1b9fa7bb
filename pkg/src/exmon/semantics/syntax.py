"""ExpLang concrete syntax: lexer, recursive-descent parser, and query parsing.

The surface language:

    program  := decl* stmt
    decl     := "var" IDENT ":" INT ".." INT ";"
    stmt     := "skip" | IDENT ":=" (aexpr | dist) | stmt ";" stmt
              | "if" bexpr "then" block "else" block
              | "choose" "{" (RATIONAL ":" block [","])+ "}"
              | "while" bexpr "do" block
    block    := "{" stmt "}"          (a bare simple statement is also accepted)
    dist     := "{" INT ":" RATIONAL ("," INT ":" RATIONAL)* "}"
    bexpr    := and/or/not over comparisons (=, ==, !=, <, <=, >, >=), true, false
    aexpr    := +, -, * over integer literals and variables
    RATIONAL := INT "/" INT | INT

Whitespace (including newlines) only separates tokens.  All variables must
be declared; probabilistic weights are validated to sum to exactly 1, and
distribution literals must stay within the target variable's range.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

# --- AST ---


@dataclass(frozen=True)
class VarDecl:
    name: str
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty range {self.lo}..{self.hi} for {self.name}")
        if self.hi - self.lo > 255:
            raise ValueError(f"range of {self.name} wider than 256 values")

    @property
    def size(self) -> int:
        return self.hi - self.lo + 1


@dataclass(frozen=True)
class Lit:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class BinOp:
    op: str  # + - *
    left: object
    right: object


@dataclass(frozen=True)
class BoolLit:
    value: bool


@dataclass(frozen=True)
class Cmp:
    op: str  # = != < <= > >=
    left: object
    right: object


@dataclass(frozen=True)
class And:
    left: object
    right: object


@dataclass(frozen=True)
class Or:
    left: object
    right: object


@dataclass(frozen=True)
class Not:
    inner: object


@dataclass(frozen=True)
class Skip:
    pass


@dataclass(frozen=True)
class DetAssign:
    var: str
    expr: object


@dataclass(frozen=True)
class ProbAssign:
    var: str
    entries: tuple[tuple[int, Fraction], ...]


@dataclass(frozen=True)
class Seq:
    first: object
    second: object


@dataclass(frozen=True)
class If:
    cond: object
    then_branch: object
    else_branch: object


@dataclass(frozen=True)
class Choose:
    branches: tuple[tuple[Fraction, object], ...]


@dataclass(frozen=True)
class While:
    cond: object
    body: object


@dataclass(frozen=True)
class QueryPredicate:
    """A [0,1]-valued observation on final states.

    Value at a state: const + sum of weight * indicator(bexpr).  Parse-time
    interval analysis guarantees the total stays within [0,1].
    """

    const: Fraction
    terms: tuple[tuple[Fraction, object], ...]


@dataclass(frozen=True)
class ParsedProgram:
    decls: tuple[VarDecl, ...]
    program: object
    queries: tuple[QueryPredicate, ...] = ()


class ParseError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        self.line = line
        self.col = col
        super().__init__(f"{line}:{col}: {message}")


# --- lexer ---

KEYWORDS = {
    "var", "skip", "if", "then", "else", "choose", "while", "do",
    "and", "or", "not", "true", "false",
}
TWO_CHAR = (":=", "..", "==", "!=", "<=", ">=")
ONE_CHAR = ":;=<>+-*{}()[],/"


@dataclass(frozen=True)
class Token:
    kind: str  # keyword text, symbol text, 'IDENT', 'INT', 'EOF'
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    line, col = 1, 1
    i = 0
    n = len(source)
    while i < n:
        ch = source[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "#":  # comment to end of line
            while i < n and source[i] != "\n":
                i += 1
            continue
        two = source[i : i + 2]
        if two in TWO_CHAR:
            tokens.append(Token(two, two, line, col))
            i += 2
            col += 2
            continue
        if ch.isdigit():
            j = i
            while j < n and source[j].isdigit():
                j += 1
            tokens.append(Token("INT", source[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            word = source[i:j]
            kind = word if word in KEYWORDS else "IDENT"
            tokens.append(Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        if ch in ONE_CHAR:
            tokens.append(Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("EOF", "", line, col))
    return tokens


# --- parser ---


class _Parser:
    def __init__(self, tokens: list[Token], decls: dict[str, VarDecl] | None = None):
        self.tokens = tokens
        self.pos = 0
        self.decls: dict[str, VarDecl] = decls if decls is not None else {}

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def error(self, message: str) -> ParseError:
        tok = self.current
        return ParseError(message, tok.line, tok.col)

    def eat(self, kind: str) -> Token:
        tok = self.current
        if tok.kind != kind:
            shown = tok.text or "end of input"
            raise self.error(f"expected {kind!r}, got {shown!r}")
        self.pos += 1
        return tok

    def accept(self, kind: str) -> Token | None:
        if self.current.kind == kind:
            return self.eat(kind)
        return None

    # -- literals --

    def signed_int(self) -> int:
        neg = self.accept("-") is not None
        tok = self.eat("INT")
        value = int(tok.text)
        return -value if neg else value

    def rational(self) -> Fraction:
        num = self.signed_int()
        if self.accept("/"):
            den_tok = self.current
            den = self.signed_int()
            if den <= 0:
                raise ParseError("denominator must be positive", den_tok.line, den_tok.col)
            return Fraction(num, den)
        return Fraction(num)

    # -- declarations --

    def declarations(self) -> tuple[VarDecl, ...]:
        decls = []
        while self.current.kind == "var":
            self.eat("var")
            name_tok = self.eat("IDENT")
            if name_tok.text in self.decls:
                raise ParseError(
                    f"variable {name_tok.text!r} declared twice",
                    name_tok.line,
                    name_tok.col,
                )
            self.eat(":")
            lo = self.signed_int()
            self.eat("..")
            hi = self.signed_int()
            self.eat(";")
            try:
                decl = VarDecl(name_tok.text, lo, hi)
            except ValueError as exc:
                raise ParseError(str(exc), name_tok.line, name_tok.col) from None
            self.decls[decl.name] = decl
            decls.append(decl)
        return tuple(decls)

    def declared(self, tok: Token) -> VarDecl:
        decl = self.decls.get(tok.text)
        if decl is None:
            raise ParseError(f"undeclared variable {tok.text!r}", tok.line, tok.col)
        return decl

    # -- arithmetic expressions --

    def aexpr(self):
        node = self.aterm()
        while self.current.kind in ("+", "-"):
            op = self.eat(self.current.kind).kind
            node = BinOp(op, node, self.aterm())
        return node

    def aterm(self):
        node = self.afactor()
        while self.current.kind == "*":
            self.eat("*")
            node = BinOp("*", node, self.afactor())
        return node

    def afactor(self):
        tok = self.current
        if tok.kind == "INT" or tok.kind == "-":
            return Lit(self.signed_int())
        if tok.kind == "IDENT":
            self.eat("IDENT")
            self.declared(tok)
            return Var(tok.text)
        if tok.kind == "(":
            self.eat("(")
            node = self.aexpr()
            self.eat(")")
            return node
        raise self.error(f"expected arithmetic expression, got {tok.text!r}")

    # -- boolean expressions --

    def bexpr(self):
        node = self.band()
        while self.current.kind == "or":
            self.eat("or")
            node = Or(node, self.band())
        return node

    def band(self):
        node = self.bnot()
        while self.current.kind == "and":
            self.eat("and")
            node = And(node, self.bnot())
        return node

    def bnot(self):
        if self.accept("not"):
            return Not(self.bnot())
        return self.batom()

    def batom(self):
        tok = self.current
        if tok.kind == "true":
            self.eat("true")
            return BoolLit(True)
        if tok.kind == "false":
            self.eat("false")
            return BoolLit(False)
        if tok.kind == "(":
            # either a parenthesized bexpr or the left side of a comparison
            saved = self.pos
            try:
                return self.comparison()
            except ParseError:
                self.pos = saved
            self.eat("(")
            node = self.bexpr()
            self.eat(")")
            return node
        return self.comparison()

    def comparison(self):
        left = self.aexpr()
        tok = self.current
        if tok.kind in ("=", "==", "!=", "<", "<=", ">", ">="):
            op = self.eat(tok.kind).kind
            if op == "==":
                op = "="
            return Cmp(op, left, self.aexpr())
        raise self.error(f"expected comparison operator, got {tok.text!r}")

    # -- statements --

    def statement(self):
        node = self.simple_statement()
        while self.accept(";"):
            if self.current.kind in ("EOF", "}"):  # tolerate a trailing separator
                break
            node = Seq(node, self.simple_statement())
        return node

    def block(self):
        """A braced statement, or a bare simple statement."""
        if self.accept("{"):
            node = self.statement()
            self.eat("}")
            return node
        return self.simple_statement()

    def simple_statement(self):
        tok = self.current
        if tok.kind == "skip":
            self.eat("skip")
            return Skip()
        if tok.kind == "if":
            self.eat("if")
            cond = self.bexpr()
            self.eat("then")
            then_branch = self.block()
            self.eat("else")
            else_branch = self.block()
            return If(cond, then_branch, else_branch)
        if tok.kind == "while":
            self.eat("while")
            cond = self.bexpr()
            self.eat("do")
            return While(cond, self.block())
        if tok.kind == "choose":
            return self.choose()
        if tok.kind == "IDENT":
            self.eat("IDENT")
            decl = self.declared(tok)
            self.eat(":=")
            if self.current.kind == "{":
                return self.prob_assign(decl)
            return DetAssign(decl.name, self.aexpr())
        raise self.error(f"expected a statement, got {tok.text or 'end of input'!r}")

    def choose(self):
        open_tok = self.eat("choose")
        self.eat("{")
        branches = []
        while True:
            weight = self.rational()
            if weight <= 0:
                raise self.error("branch weights must be positive")
            self.eat(":")
            branches.append((weight, self.block()))
            self.accept(",")
            if self.current.kind == "}":
                break
        self.eat("}")
        total = sum(w for w, _ in branches)
        if total != 1:
            raise ParseError(
                f"choose weights sum to {total}, expected exactly 1",
                open_tok.line,
                open_tok.col,
            )
        return Choose(tuple(branches))

    def prob_assign(self, decl: VarDecl):
        open_tok = self.eat("{")
        entries = []
        seen = set()
        while True:
            val_tok = self.current
            value = self.signed_int()
            if not decl.lo <= value <= decl.hi:
                raise ParseError(
                    f"value {value} outside range {decl.lo}..{decl.hi} of {decl.name!r}",
                    val_tok.line,
                    val_tok.col,
                )
            if value in seen:
                raise ParseError(
                    f"duplicate value {value} in distribution", val_tok.line, val_tok.col
                )
            seen.add(value)
            self.eat(":")
            weight = self.rational()
            if weight <= 0:
                raise self.error("distribution weights must be positive")
            entries.append((value, weight))
            if not self.accept(","):
                break
        self.eat("}")
        total = sum(w for _, w in entries)
        if total != 1:
            raise ParseError(
                f"distribution weights sum to {total}, expected exactly 1",
                open_tok.line,
                open_tok.col,
            )
        return ProbAssign(decl.name, tuple(entries))

    # -- queries --

    def query(self) -> QueryPredicate:
        # a full bexpr is an indicator; otherwise a weighted sum of
        # rational constants and bracketed indicators
        start = self.current
        saved = self.pos
        try:
            cond = self.bexpr()
            if self.current.kind == "EOF":
                return QueryPredicate(Fraction(0), ((Fraction(1), cond),))
        except ParseError:
            pass
        self.pos = saved
        const = Fraction(0)
        terms: list[tuple[Fraction, object]] = []
        while True:
            if self.current.kind in ("INT", "-"):
                weight = self.rational()
                if self.accept("*"):
                    terms.append((weight, self.indicator()))
                else:
                    const += weight
            else:
                terms.append((Fraction(1), self.indicator()))
            if not self.accept("+"):
                break
        tok = self.current
        if tok.kind != "EOF":
            raise self.error(f"unexpected {tok.text!r} after query")
        if const < 0 or any(w < 0 for w, _ in terms):
            raise ParseError("query weights must be nonnegative", start.line, start.col)
        upper = const + sum((w for w, _ in terms), start=Fraction(0))
        if upper > 1:
            raise ParseError(
                f"query can reach {upper} > 1; weights must keep it within [0,1]",
                start.line,
                start.col,
            )
        return QueryPredicate(const, tuple(terms))

    def indicator(self):
        if self.accept("["):
            cond = self.bexpr()
            self.eat("]")
            return cond
        if self.accept("("):
            cond = self.bexpr()
            self.eat(")")
            return cond
        return self.comparison()


def render_expr(node) -> str:
    """Concrete-syntax rendering of arithmetic and boolean expressions."""
    if isinstance(node, Lit):
        return str(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, BinOp):
        return f"({render_expr(node.left)} {node.op} {render_expr(node.right)})"
    if isinstance(node, BoolLit):
        return "true" if node.value else "false"
    if isinstance(node, Cmp):
        return f"{render_expr(node.left)} {node.op} {render_expr(node.right)}"
    if isinstance(node, And):
        return f"({render_expr(node.left)} and {render_expr(node.right)})"
    if isinstance(node, Or):
        return f"({render_expr(node.left)} or {render_expr(node.right)})"
    if isinstance(node, Not):
        return f"not {render_expr(node.inner)}"
    raise TypeError(f"not an expression node: {node!r}")


def parse(source: str) -> ParsedProgram:
    """Parse a full ExpLang program text; raises ParseError at line:col."""
    parser = _Parser(tokenize(source))
    decls = parser.declarations()
    program = parser.statement()
    tok = parser.current
    if tok.kind != "EOF":
        raise ParseError(f"unexpected {tok.text!r} after program", tok.line, tok.col)
    return ParsedProgram(decls, program)


def parse_query(source: str, decls: tuple[VarDecl, ...]) -> QueryPredicate:
    """Parse a query predicate against the given declarations."""
    parser = _Parser(tokenize(source), {d.name: d for d in decls})
    return parser.query()

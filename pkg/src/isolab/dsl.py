"""Text format for quasi-equational theories.

Example::

    theory monoid
    sort M;
    op e : -> M;
    op mul : M, M -> M;
    axiom assoc: forall x:M, y:M, z:M. |- mul(mul(x, y), z) = mul(x, mul(y, z));

The grammar is in ``docs/theory.ebnf``.  ``def(t)`` is sugar for ``t = t``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .phl import (
    App,
    Equation,
    Horn,
    OpSymbol,
    Sequent,
    Signature,
    SortError,
    Term,
    Theory,
    Var,
    infer_sort,
)

KEYWORDS = {"theory", "sort", "op", "axiom", "forall", "def", "true"}

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<turnstile>\|-)
  | (?P<arrow>->)
  | (?P<const>@[^\s(),;=\#]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<punct>[;:,().=])
    """,
    re.VERBOSE,
)


class DSLError(ValueError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(source: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN_RE.match(source, pos)
        if m is None:
            raise DSLError(f"unexpected character {source[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        text = m.group()
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            if kind == "ident" and text in KEYWORDS:
                kind = "kw"
            elif kind == "const":
                kind = "ident"
            tokens.append(Token(kind, text, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.toks = tokenize(source)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k=1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        raise DSLError(msg, tok.line, tok.col)

    def accept(self, text) -> bool:
        if self.tok.text == text and self.tok.kind != "eof":
            self.i += 1
            return True
        return False

    def expect(self, text) -> Token:
        tok = self.tok
        if not self.accept(text):
            self.error(f"expected {text!r}, found {tok.text or 'end of input'!r}")
        return tok

    def ident(self, what="identifier") -> Token:
        tok = self.tok
        if tok.kind != "ident":
            self.error(f"expected {what}, found {tok.text or 'end of input'!r}")
        self.i += 1
        return tok

    # theory ::= "theory" IDENT { decl }
    def theory(self) -> Theory:
        self.expect("theory")
        name = self.ident("theory name").text
        sorts: list[str] = []
        ops: list[OpSymbol] = []
        pending: list[tuple[Token, ...]] = []
        while self.tok.kind != "eof":
            if self.accept("sort"):
                tok = self.ident("sort name")
                if tok.text in sorts:
                    self.error(f"duplicate sort {tok.text!r}", tok)
                sorts.append(tok.text)
                self.expect(";")
            elif self.accept("op"):
                ops.append(self.op_decl(sorts, ops))
            elif self.tok.text == "axiom":
                start = self.i
                self._skip_to_semicolon()
                pending.append((start, self.i))
            else:
                self.error(f"expected 'sort', 'op' or 'axiom', found {self.tok.text!r}")
        signature = Signature(tuple(sorts), tuple(ops))
        axioms = []
        end = self.i
        for start, stop in pending:
            self.i = start
            axioms.append(self.axiom(signature))
            assert self.i == stop
        self.i = end
        return Theory(name, signature, tuple(axioms))

    def _skip_to_semicolon(self):
        while self.tok.text != ";":
            if self.tok.kind == "eof":
                self.error("unterminated axiom, expected ';'")
            self.i += 1
        self.i += 1

    def op_decl(self, sorts, ops) -> OpSymbol:
        tok = self.ident("operation name")
        if any(o.name == tok.text for o in ops):
            self.error(f"duplicate operation {tok.text!r}", tok)
        self.expect(":")
        args = []
        if self.tok.text != "->":
            args.append(self.sort_ref(sorts))
            while self.accept(","):
                args.append(self.sort_ref(sorts))
        self.expect("->")
        result = self.sort_ref(sorts)
        self.expect(";")
        return OpSymbol(tok.text, tuple(args), result)

    def sort_ref(self, sorts) -> str:
        tok = self.ident("sort name")
        if tok.text not in sorts:
            self.error(f"unknown sort {tok.text!r}", tok)
        return tok.text

    # axiom ::= "axiom" [IDENT ":"] ["forall" vdecl {"," vdecl} "."] [formula] "|-" formula ";"
    def axiom(self, signature: Signature) -> Sequent:
        self.expect("axiom")
        label = None
        if self.tok.kind == "ident" and self.peek().text == ":":
            label = self.ident().text
            self.expect(":")
        context: list[Var] = []
        if self.accept("forall"):
            context.append(self.var_decl(signature, context))
            while self.accept(","):
                context.append(self.var_decl(signature, context))
            self.expect(".")
        ctx = {v.name: v for v in context}
        premise = Horn(())
        if self.tok.kind != "turnstile":
            premise = self.formula(signature, ctx)
        if self.tok.kind != "turnstile":
            self.error(f"expected '|-', found {self.tok.text!r}")
        self.i += 1
        conclusion = self.formula(signature, ctx)
        self.expect(";")
        return Sequent(tuple(context), premise, conclusion, label)

    def var_decl(self, signature, context) -> Var:
        tok = self.ident("variable name")
        if signature.has_op(tok.text):
            self.error(f"variable {tok.text!r} clashes with an operation symbol", tok)
        if any(v.name == tok.text for v in context):
            self.error(f"duplicate variable {tok.text!r}", tok)
        self.expect(":")
        stok = self.ident("sort name")
        if stok.text not in signature.sorts:
            self.error(f"unknown sort {stok.text!r}", stok)
        return Var(tok.text, stok.text)

    # formula ::= "true" | atom {"," atom}
    def formula(self, signature, ctx) -> Horn:
        if self.accept("true"):
            return Horn(())
        eqs = [self.atom(signature, ctx)]
        while self.accept(","):
            eqs.append(self.atom(signature, ctx))
        return Horn(tuple(eqs))

    # atom ::= "def" "(" term ")" | term "=" term
    def atom(self, signature, ctx) -> Equation:
        if self.accept("def"):
            self.expect("(")
            t = self.term(signature, ctx)
            self.expect(")")
            return Equation(t, t)
        tok = self.tok
        lhs = self.term(signature, ctx)
        self.expect("=")
        rhs = self.term(signature, ctx)
        a, b = infer_sort(lhs), infer_sort(rhs)
        if a != b:
            self.error(f"sort error: {lhs} has sort {a} but {rhs} has sort {b}", tok)
        return Equation(lhs, rhs)

    # term ::= IDENT [ "(" [term {"," term}] ")" ]
    def term(self, signature, ctx) -> Term:
        tok = self.ident("term")
        has_args = self.tok.text == "("
        if tok.text in ctx and not has_args:
            return ctx[tok.text]
        if not signature.has_op(tok.text):
            self.error(f"unknown variable or operation {tok.text!r}", tok)
        op = signature.op(tok.text)
        args: list[Term] = []
        if self.accept("("):
            if self.tok.text != ")":
                args.append(self.term(signature, ctx))
                while self.accept(","):
                    args.append(self.term(signature, ctx))
            self.expect(")")
        t = App(op, tuple(args))
        try:
            infer_sort(t)
        except SortError as exc:
            self.error(f"sort error: {exc}", tok)
        return t


def parse_theory(source: str) -> Theory:
    return _Parser(source).theory()


def parse_term(source: str, signature: Signature, context=()) -> Term:
    """Parse a single term; ``context`` is an iterable of :class:`Var`."""
    p = _Parser(source)
    t = p.term(signature, {v.name: v for v in context})
    if p.tok.kind != "eof":
        p.error(f"trailing input {p.tok.text!r}")
    return t


def format_term(t: Term) -> str:
    return str(t)


def format_sequent(ax: Sequent) -> str:
    parts = ["axiom "]
    if ax.label:
        parts.append(f"{ax.label}: ")
    if ax.context:
        parts.append("forall " + ", ".join(f"{v.name}:{v.sort}" for v in ax.context) + ". ")
    if ax.premise.conjuncts:
        parts.append(f"{ax.premise} ")
    parts.append(f"|- {ax.conclusion};")
    return "".join(parts)


def format_theory(theory: Theory) -> str:
    lines = [f"theory {theory.name}", ""]
    lines += [f"sort {s};" for s in theory.sorts]
    lines.append("")
    for op in theory.ops:
        lines.append(f"op {op.name} : {', '.join(op.arg_sorts)}{' ' if op.arg_sorts else ''}-> {op.result_sort};")
    lines.append("")
    lines += [format_sequent(ax) for ax in theory.axioms]
    return "\n".join(lines) + "\n"

"""Concrete syntax: parsing and canonical printing.

Grammar (``*`` binds tighter than ``+``; both associate to the right)::

    type   ::= 'mu' IDENT '.' type | sum
    sum    ::= prod ('+' sum)?
    prod   ::= atom ('*' prod)?
    atom   ::= '0' | '1' | IDENT | '(' type ')'

    comb   ::= plus (';' comb)?            -- diagram order, left runs first
    plus   ::= times ('(+)' plus)?
    times  ::= catom ('(*)' times)?
    catom  ::= KEYWORD | 'fold' '[' type ']' | 'unfold' '[' type ']'
             | 'trace' '(' comb ')' | 'inv' '(' comb ')' | IDENT | '(' comb ')'

    value  ::= '()' | 'inl' value | 'inr' value | 'fold' value
             | '(' value ',' value ')' | '(' value ')'

Program files (``.pio``) hold one declaration per line, ``name : A <-> B =
expr``; indented lines continue the previous declaration, ``--`` starts a
comment and ``main = name`` selects the entry point.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .syntax import (
    KEYWORDS, ONE, UNIT, ZERO, Combinator, CombinatorType, Comp, Fold, FoldC,
    InL, InR, Inv, Mu, One, Pair, ProdC, Prod, Ref, Sum, SumC, Trace, Unit,
    UnfoldC, Value, ValueType, Var, Zero, Meta,
)


class ParseError(SyntaxError):
    """Malformed input; carries 1-based ``line`` and ``column``."""

    def __init__(self, message: str, line: int, column: int, source: str | None = None):
        super().__init__(f"{line}:{column}: {message}")
        self.message = message
        self.line = line
        self.column = column
        self.lineno = line
        self.offset = column
        self.source = source


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*")
_BASIC_KW = re.compile(r"(?:assocl|assocr|unitl|unitr|swap)[+*]")
_RESERVED = {"mu", "fold", "unfold", "trace", "inv", "inl", "inr", "main"} | {
    k for k in KEYWORDS if k[-1] not in "+*"
}


class _Scanner:
    def __init__(self, text: str, line: int = 1, column: int = 1):
        self.text = text
        self.pos = 0
        self.line0 = line
        self.col0 = column

    def where(self, pos: int | None = None) -> tuple[int, int]:
        pos = self.pos if pos is None else pos
        before = self.text[:pos]
        nl = before.count("\n")
        if nl:
            return self.line0 + nl, pos - before.rfind("\n")
        return self.line0, self.col0 + pos

    def error(self, message: str, pos: int | None = None) -> ParseError:
        line, col = self.where(pos)
        return ParseError(message, line, col)

    def skip(self) -> None:
        while True:
            m = re.compile(r"\s+").match(self.text, self.pos)
            if m:
                self.pos = m.end()
            if self.text.startswith("--", self.pos):
                end = self.text.find("\n", self.pos)
                self.pos = len(self.text) if end < 0 else end
                continue
            return

    def peek(self, literal: str) -> bool:
        self.skip()
        return self.text.startswith(literal, self.pos)

    def accept(self, literal: str) -> bool:
        if self.peek(literal):
            self.pos += len(literal)
            return True
        return False

    def expect(self, literal: str) -> None:
        if not self.accept(literal):
            raise self.error(f"expected {literal!r}, found {self.lookahead()!r}")

    def peek_word(self, word: str) -> bool:
        self.skip()
        m = _IDENT.match(self.text, self.pos)
        return bool(m) and m.group() == word

    def accept_word(self, word: str) -> bool:
        if self.peek_word(word):
            self.pos += len(word)
            return True
        return False

    def ident(self) -> str:
        self.skip()
        m = _IDENT.match(self.text, self.pos)
        if not m:
            raise self.error(f"expected identifier, found {self.lookahead()!r}")
        self.pos = m.end()
        return m.group()

    def lookahead(self) -> str:
        self.skip()
        if self.pos >= len(self.text):
            return "end of input"
        return self.text[self.pos:self.pos + 10].split("\n")[0]

    def at_end(self) -> bool:
        self.skip()
        return self.pos >= len(self.text)

    def finish(self) -> None:
        if not self.at_end():
            raise self.error(f"unexpected trailing input {self.lookahead()!r}")


# -- types -------------------------------------------------------------------


def _type(s: _Scanner) -> ValueType:
    if s.accept_word("mu"):
        binder = s.ident()
        s.expect(".")
        return Mu(binder, _type(s))
    left = _prod(s)
    if s.accept("+"):
        return Sum(left, _type(s))
    return left


def _prod(s: _Scanner) -> ValueType:
    left = _tatom(s)
    if s.accept("*"):
        if s.peek_word("mu"):
            return Prod(left, _type(s))
        return Prod(left, _prod(s))
    return left


def _tatom(s: _Scanner) -> ValueType:
    if s.accept("0"):
        return ZERO
    if s.accept("1"):
        return ONE
    if s.accept("("):
        t = _type(s)
        s.expect(")")
        return t
    start = s.pos
    name = s.ident()
    if name in _RESERVED:
        raise s.error(f"reserved word {name!r} used as a type variable", start)
    return Var(name)


def parse_type(text: str) -> ValueType:
    s = _Scanner(text)
    t = _type(s)
    s.finish()
    return t


# -- combinators -------------------------------------------------------------


def _comb(s: _Scanner) -> Combinator:
    left = _plus(s)
    if s.accept(";"):
        return Comp(left, _comb(s))
    return left


def _plus(s: _Scanner) -> Combinator:
    left = _times(s)
    if s.accept("(+)"):
        return SumC(left, _plus(s))
    return left


def _times(s: _Scanner) -> Combinator:
    left = _catom(s)
    if s.accept("(*)"):
        return ProdC(left, _times(s))
    return left


def _annotation(s: _Scanner, word: str) -> ValueType:
    if not s.peek("["):
        raise s.error(f"{word} requires a bracketed mu-type annotation")
    s.expect("[")
    start = s.pos
    t = _type(s)
    s.expect("]")
    if not isinstance(t, Mu):
        raise s.error(f"{word} annotation must be a mu type", start)
    return t


def _catom(s: _Scanner) -> Combinator:
    s.skip()
    m = _BASIC_KW.match(s.text, s.pos)
    if m:
        s.pos = m.end()
        return KEYWORDS[m.group()]
    if s.accept("("):
        c = _comb(s)
        s.expect(")")
        return c
    start = s.pos
    name = s.ident()
    if name == "fold":
        return FoldC(_annotation(s, "fold"))
    if name == "unfold":
        return UnfoldC(_annotation(s, "unfold"))
    if name in ("trace", "inv"):
        s.expect("(")
        body = _comb(s)
        s.expect(")")
        return Trace(body) if name == "trace" else Inv(body)
    if name in KEYWORDS:
        return KEYWORDS[name]
    if name in _RESERVED:
        raise s.error(f"unexpected keyword {name!r}", start)
    return Ref(name)


def parse_combinator(text: str) -> Combinator:
    s = _Scanner(text)
    c = _comb(s)
    s.finish()
    return c


# -- values ------------------------------------------------------------------


def _value(s: _Scanner) -> Value:
    if s.accept("("):
        if s.accept(")"):
            return UNIT
        first = _value(s)
        if s.accept(","):
            second = _value(s)
            s.expect(")")
            return Pair(first, second)
        s.expect(")")
        return first
    start = s.pos
    word = s.ident()
    if word == "inl":
        return InL(_value(s))
    if word == "inr":
        return InR(_value(s))
    if word == "fold":
        return Fold(_value(s))
    raise s.error(f"expected a value, found {word!r}", start)


def parse_value(text: str) -> Value:
    s = _Scanner(text)
    v = _value(s)
    s.finish()
    return v


# -- printing ----------------------------------------------------------------


def print_type(t: ValueType) -> str:
    return _pt(t, 0, True)


def _pt(t: ValueType, ctx: int, tail: bool) -> str:
    # ctx: 0 = free, 1 = left of '+', 2 = right of '*', 3 = left of '*'.
    # A mu body extends to the end of input, so a mu needs parentheses
    # unless nothing follows it.
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, One):
        return "1"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Meta):
        return f"?{t.ident}"
    if isinstance(t, Mu):
        if ctx > 0 and not tail:
            return f"(mu {t.binder}. {_pt(t.body, 0, True)})"
        return f"mu {t.binder}. {_pt(t.body, 0, True)}"
    if isinstance(t, Sum):
        if ctx >= 1:
            return f"({_pt(t.left, 1, False)} + {_pt(t.right, 0, True)})"
        return f"{_pt(t.left, 1, False)} + {_pt(t.right, 0, tail)}"
    if isinstance(t, Prod):
        if ctx >= 3:
            return f"({_pt(t.left, 3, False)} * {_pt(t.right, 2, True)})"
        return f"{_pt(t.left, 3, False)} * {_pt(t.right, 2, tail)}"
    raise TypeError(f"not a type: {t!r}")


def print_value(v: Value) -> str:
    if isinstance(v, Unit):
        return "()"
    if isinstance(v, Pair):
        return f"({print_value(v.first)}, {print_value(v.second)})"
    for cls, word in ((InL, "inl"), (InR, "inr"), (Fold, "fold")):
        if isinstance(v, cls):
            inner = v.value
            arg = print_value(inner)
            if not isinstance(inner, (Unit, Pair)):
                arg = f"({arg})"
            return f"{word} {arg}"
    raise TypeError(f"not a value: {v!r}")


def print_combinator(c: Combinator) -> str:
    return _pc(c, 0)


def _pc(c: Combinator, prec: int) -> str:
    # prec: 0 = any, 1 = operand of ';', 2 = operand of (+), 3 = operand of (*)
    kw = getattr(type(c), "keyword", None)
    if kw is not None:
        return kw
    if isinstance(c, FoldC):
        return f"fold[{print_type(c.annotation)}]"
    if isinstance(c, UnfoldC):
        return f"unfold[{print_type(c.annotation)}]"
    if isinstance(c, Trace):
        return f"trace({_pc(c.body, 0)})"
    if isinstance(c, Inv):
        return f"inv({_pc(c.body, 0)})"
    if isinstance(c, Ref):
        return c.name
    if isinstance(c, Comp):
        text = f"{_pc(c.first, 1)} ; {_pc(c.second, 0)}"
        return f"({text})" if prec > 0 else text
    if isinstance(c, SumC):
        text = f"{_pc(c.left, 2)} (+) {_pc(c.right, 1)}"
        return f"({text})" if prec > 1 else text
    if isinstance(c, ProdC):
        text = f"{_pc(c.left, 3)} (*) {_pc(c.right, 2)}"
        return f"({text})" if prec > 2 else text
    raise TypeError(f"not a combinator: {c!r}")


# -- programs ----------------------------------------------------------------


@dataclass
class Declaration:
    name: str
    ascription: CombinatorType | None
    body: Combinator
    line: int = 1
    column: int = 1


@dataclass
class SourceProgram:
    declarations: list[Declaration] = field(default_factory=list)
    entry: str | None = None
    path: str | None = None

    def __post_init__(self):
        self._by_name = {d.name: d for d in self.declarations}

    def get(self, name: str) -> Declaration:
        try:
            return self._by_name[name]
        except KeyError:
            raise KeyError(f"no declaration named {name!r}") from None

    @property
    def names(self) -> list[str]:
        return [d.name for d in self.declarations]

    def main(self) -> Declaration:
        if self.entry is not None:
            return self.get(self.entry)
        if not self.declarations:
            raise KeyError("program has no declarations")
        return self.declarations[-1]

    def inline(self, c: Combinator) -> Combinator:
        """Replace every ``Ref`` by the (recursively inlined) body it names."""
        if isinstance(c, Ref):
            return self.inline(self.get(c.name).body)
        if isinstance(c, Comp):
            return Comp(self.inline(c.first), self.inline(c.second))
        if isinstance(c, SumC):
            return SumC(self.inline(c.left), self.inline(c.right))
        if isinstance(c, ProdC):
            return ProdC(self.inline(c.left), self.inline(c.right))
        if isinstance(c, Trace):
            return Trace(self.inline(c.body))
        if isinstance(c, Inv):
            return Inv(self.inline(c.body))
        return c

    def resolved(self, name: str) -> Combinator:
        return self.inline(self.get(name).body)


def _refs(c: Combinator):
    if isinstance(c, Ref):
        yield c.name
    for attr in ("first", "second", "left", "right", "body"):
        sub = getattr(c, attr, None)
        if isinstance(sub, Combinator):
            yield from _refs(sub)


def _logical_lines(text: str):
    """Group physical lines into declarations: indented lines continue."""
    group: list[tuple[int, str]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("--", 1)[0]
        if not stripped.strip():
            continue
        if raw[:1].isspace() and group:
            group.append((lineno, stripped))
            continue
        if group:
            yield group
        group = [(lineno, stripped)]
    if group:
        yield group


def parse_program(text: str, path: str | None = None) -> SourceProgram:
    decls: list[Declaration] = []
    seen: set[str] = set()
    entry = None
    for group in _logical_lines(text):
        line0 = group[0][0]
        body_text = "\n".join(part for _, part in group)
        s = _Scanner(body_text, line=line0, column=1)
        if s.accept_word("main"):
            s.expect("=")
            entry = s.ident()
            s.finish()
            continue
        start = s.pos
        s.skip()
        col = s.where()[1]
        name = s.ident()
        if name in _RESERVED or name in KEYWORDS:
            raise s.error(f"cannot declare reserved name {name!r}", start)
        if name in seen:
            raise s.error(f"duplicate declaration {name!r}", start)
        ascription = None
        if s.accept(":"):
            dom = _type(s)
            s.expect("<->")
            cod = _type(s)
            ascription = CombinatorType(dom, cod)
        s.expect("=")
        body = _comb(s)
        s.finish()
        for ref in _refs(body):
            if ref not in seen:
                raise ParseError(f"reference to undeclared or later name {ref!r}", line0, col)
        seen.add(name)
        decls.append(Declaration(name, ascription, body, line0, col))
    if entry is not None and entry not in seen:
        raise ParseError(f"main refers to unknown declaration {entry!r}", 1, 1)
    return SourceProgram(decls, entry, path)


def print_program(p: SourceProgram) -> str:
    lines = []
    for d in p.declarations:
        head = d.name
        if d.ascription is not None:
            head += f" : {print_type(d.ascription.domain)} <-> {print_type(d.ascription.codomain)}"
        lines.append(f"{head} = {print_combinator(d.body)}")
    if p.entry is not None:
        lines.append(f"main = {p.entry}")
    return "\n".join(lines) + "\n"

"""Text format for formulas.

Grammar (UTF-8 text):

    formula   :=  imp ( '<->' imp )?          biconditional, non-associative
    imp       :=  or ( '->' imp )?            right-associative
    or        :=  and ( '|' and )*            left-associative
    and       :=  unary ( '&' unary )*        left-associative
    unary     :=  '~' unary | primary
    primary   :=  '(' formula ')'
               |  'forall' VAR '.' formula    body extends to the right
               |  'exists' VAR '.' formula
               |  'bot'
               |  'M(' term ')' | 'A(' term ')' | 'T(' term ')'
               |  'H(' term ',' term ')' | 'sim(' term ',' term ')'
               |  IDENT ( '(' term ( ',' term )* ')' )?
    term      :=  '`' IDENT '`' | IDENT

`~p` is sugar for `p -> bot`, `a <-> b` for `(a -> b) & (b -> a)`.  A bare
identifier in term position is an object constant if declared, otherwise a
variable.  Predicates are registered in the symbol table at first use and
checked for consistent arity afterwards.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from .syntax import (
    AApp,
    And,
    Atom,
    BOT,
    Const,
    Environment,
    Formula,
    HApp,
    MApp,
    Or,
    Implies,
    Exists,
    Forall,
    Quote,
    SimApp,
    TApp,
    Term,
    Var,
    iff,
    neg,
)


class ParseError(Exception):
    def __init__(self, message: str, position: int, text: str = "") -> None:
        super().__init__(f"{message} (at position {position})")
        self.position = position
        self.text = text


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<quote>`[A-Za-z_][A-Za-z0-9_]*`)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op><->|->|:=|[()\{\},;.&|~=])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # quote | ident | op | end
    value: str
    pos: int


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", i, text)
        kind = m.lastgroup
        assert kind is not None
        if kind != "ws":
            out.append(Token(kind, m.group(), i))
        i = m.end()
    out.append(Token("end", "", len(text)))
    return out


class _Cursor:
    def __init__(self, tokens: list[Token], text: str) -> None:
        self.tokens = tokens
        self.text = text
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def expect(self, value: str) -> Token:
        t = self.peek()
        if t.value != value:
            raise ParseError(f"expected {value!r}, found {t.value!r}", t.pos, self.text)
        return self.next()

    def fail(self, message: str) -> ParseError:
        t = self.peek()
        return ParseError(message, t.pos, self.text)


class FormulaParser:
    """Parses formulas and terms against an Environment's symbol table.

    ``self_name`` allows the name currently being defined to appear quoted
    inside its own body.
    """

    def __init__(self, env: Environment, self_name: Optional[str] = None) -> None:
        self.env = env
        self.self_name = self_name

    # -- entry points

    def formula(self, text: str) -> Formula:
        cur = _Cursor(tokenize(text), text)
        phi = self._formula(cur)
        if cur.peek().kind != "end":
            raise cur.fail(f"trailing input {cur.peek().value!r}")
        self._check(phi, cur)
        return phi

    def term(self, text: str) -> Term:
        cur = _Cursor(tokenize(text), text)
        t = self._term(cur)
        if cur.peek().kind != "end":
            raise cur.fail(f"trailing input {cur.peek().value!r}")
        return t

    def _check(self, phi: Formula, cur: _Cursor) -> None:
        # arity discipline; quote binding was checked during parsing.  A body
        # quoting the name being defined is checked by Environment.define
        # after the provisional binding exists.
        if self.self_name is None:
            self.env.check_formula(phi)

    # -- grammar

    def _formula(self, cur: _Cursor) -> Formula:
        left = self._imp(cur)
        if cur.peek().value == "<->":
            cur.next()
            right = self._imp(cur)
            if cur.peek().value == "<->":
                raise cur.fail("'<->' is non-associative; add parentheses")
            return iff(left, right)
        return left

    def _imp(self, cur: _Cursor) -> Formula:
        left = self._or(cur)
        if cur.peek().value == "->":
            cur.next()
            return Implies(left, self._imp(cur))
        return left

    def _or(self, cur: _Cursor) -> Formula:
        out = self._and(cur)
        while cur.peek().value == "|":
            cur.next()
            out = Or(out, self._and(cur))
        return out

    def _and(self, cur: _Cursor) -> Formula:
        out = self._unary(cur)
        while cur.peek().value == "&":
            cur.next()
            out = And(out, self._unary(cur))
        return out

    def _unary(self, cur: _Cursor) -> Formula:
        if cur.peek().value == "~":
            cur.next()
            return neg(self._unary(cur))
        return self._primary(cur)

    def _primary(self, cur: _Cursor) -> Formula:
        tok = cur.peek()
        if tok.value == "(":
            cur.next()
            phi = self._formula(cur)
            cur.expect(")")
            return phi
        if tok.value in ("forall", "exists"):
            cur.next()
            v = cur.next()
            if v.kind != "ident":
                raise cur.fail("expected a variable after quantifier")
            cur.expect(".")
            body = self._formula(cur)
            return (Forall if tok.value == "forall" else Exists)(v.value, body)
        if tok.value == "bot":
            cur.next()
            return BOT
        if tok.kind == "ident":
            name = cur.next().value
            if name in ("M", "A", "T"):
                cur.expect("(")
                t = self._term(cur)
                cur.expect(")")
                return {"M": MApp, "A": AApp, "T": TApp}[name](t)
            if name in ("H", "sim"):
                cur.expect("(")
                t1 = self._term(cur)
                cur.expect(",")
                t2 = self._term(cur)
                cur.expect(")")
                return HApp(t1, t2) if name == "H" else SimApp(t1, t2)
            args: list[Term] = []
            if cur.peek().value == "(":
                cur.next()
                args.append(self._term(cur))
                while cur.peek().value == ",":
                    cur.next()
                    args.append(self._term(cur))
                cur.expect(")")
            self.env.register_predicate(name, len(args))
            return Atom(name, tuple(args))
        raise cur.fail(f"expected a formula, found {tok.value!r}")

    def _term(self, cur: _Cursor) -> Term:
        tok = cur.next()
        if tok.kind == "quote":
            name = tok.value[1:-1]
            if name != self.self_name and not self.env.is_bound(name):
                raise ParseError(f"unbound quotation name `{name}`", tok.pos, cur.text)
            return Quote(name)
        if tok.kind == "ident":
            if tok.value in self.env.constants:
                return Const(tok.value)
            return Var(tok.value)
        raise ParseError(f"expected a term, found {tok.value!r}", tok.pos, cur.text)


def parse_formula(text: str, env: Environment,
                  self_name: Optional[str] = None) -> Formula:
    return FormulaParser(env, self_name).formula(text)


def parse_term(text: str, env: Environment) -> Term:
    return FormulaParser(env).term(text)

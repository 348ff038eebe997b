"""Lattice expressions such as "2U+E8(2)" or "U+U(3)+E6'(3)".

    expr := term ('+' term)*
    term := [int] atom ['(' int ')']
    atom := 'U' | ('A' | 'D' | 'E') int ["'"] | 'Leech'

Whitespace is ignored; the Unicode forms '⊕' and '−' are accepted for '+'
and '-'.  Parsing canonicalises: equal blocks are merged and terms are
sorted (U blocks, then unscaled blocks by rank, then rescaled blocks), so
parse(to_string(e)) == e.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lattice import Lattice, LatticeError, catalog, direct_sum


class ExprError(LatticeError):
    def __init__(self, message: str, text: str = "", pos: int = -1):
        self.text = text
        self.pos = pos
        if pos >= 0:
            message = f"{message} at position {pos}\n  {text}\n  {' ' * pos}^"
        super().__init__(message)


class ExprSyntaxError(ExprError):
    pass


class ExprSemanticError(ExprError):
    pass


_KIND_ORDER = {"E": 0, "D": 1, "A": 2, "Leech": 3}


@dataclass(frozen=True)
class Term:
    mult: int
    kind: str          # "U", "A", "D", "E" or "Leech"
    rank: int = 0      # 0 for U and Leech
    dual: bool = False
    scale: int = 1

    @property
    def atom(self) -> str:
        s = self.kind + (str(self.rank) if self.rank else "") + ("'" if self.dual else "")
        if self.scale != 1:
            s += f"({self.scale})"
        return s

    def __str__(self) -> str:
        return (str(self.mult) if self.mult != 1 else "") + self.atom

    def sort_key(self):
        if self.kind == "U":
            return (0, self.scale, 0, 0, self.dual)
        size = 24 if self.kind == "Leech" else self.rank
        group = 1 if (self.scale == 1 and not self.dual) else 2
        return (group, abs(self.scale), self.scale < 0, -size, _KIND_ORDER[self.kind], self.dual)


@dataclass(frozen=True)
class LatticeExpr:
    terms: tuple[Term, ...]

    def __str__(self) -> str:
        return "+".join(str(t) for t in self.terms)

    @property
    def block_count(self) -> int:
        return sum(t.mult for t in self.terms)


def canonical(terms) -> LatticeExpr:
    merged: dict[tuple, int] = {}
    for t in terms:
        key = (t.kind, t.rank, t.dual, t.scale)
        merged[key] = merged.get(key, 0) + t.mult
    out = [Term(m, *k) for k, m in merged.items()]
    out.sort(key=Term.sort_key)
    return LatticeExpr(tuple(out))


class _Parser:
    def __init__(self, text: str):
        self.raw = text
        self.text = text.replace("⊕", "+").replace("−", "-")
        self.pos = 0

    def error(self, msg, pos=None):
        raise ExprSyntaxError(msg, self.raw, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self, signed=False):
        self.skip()
        start = self.pos
        if signed and self.peek() == "-":
            self.pos += 1
            self.skip()
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            return None
        body = self.text[digits:self.pos]
        return -int(body) if self.text[start] == "-" else int(body)

    def term(self) -> Term:
        start = self.peek() and self.pos
        mult = self.integer()
        if mult is not None and mult < 1:
            raise ExprSemanticError("multiplicity must be positive", self.raw, start)
        mult = 1 if mult is None else mult
        self.skip()
        at = self.pos
        if self.text.startswith("Leech", self.pos):
            self.pos += 5
            kind, rank = "Leech", 0
        elif self.peek() == "U":
            self.pos += 1
            kind, rank = "U", 0
        elif self.peek() in ("A", "D", "E"):
            kind = self.peek()
            self.pos += 1
            if not (self.pos < len(self.text) and self.text[self.pos].isdigit()):
                self.error(f"expected a rank after {kind!r}")
            rank = self.integer()
        else:
            self.error("expected U, A<n>, D<n>, E<n> or Leech")
        dual = False
        if self.peek() == "'":
            if kind in ("U", "Leech"):
                self.error(f"{kind} has no rescaled-dual form")
            self.pos += 1
            dual = True
        scale = 1
        if self.peek() == "(":
            self.pos += 1
            spos = self.pos
            scale = self.integer(signed=True)
            if scale is None:
                self.error("expected an integer scale")
            if scale == 0:
                raise ExprSemanticError("scale must be nonzero", self.raw, spos)
            if self.peek() != ")":
                self.error("expected ')'")
            self.pos += 1
        _check_atom(kind, rank, self.raw, at)
        return Term(mult, kind, rank, dual, scale)

    def parse(self) -> LatticeExpr:
        if not self.peek():
            self.error("empty expression")
        terms = [self.term()]
        while self.peek() == "+":
            self.pos += 1
            terms.append(self.term())
        if self.peek():
            self.error(f"unexpected {self.peek()!r}")
        return canonical(terms)


def _check_atom(kind, rank, text, pos):
    if kind == "A" and rank < 1:
        raise ExprSemanticError("A_n needs n >= 1", text, pos)
    if kind == "D" and rank < 2:
        raise ExprSemanticError("D_n needs n >= 2", text, pos)
    if kind == "E" and rank not in (6, 7, 8):
        raise ExprSemanticError(f"E{rank} does not exist (n must be 6, 7 or 8)", text, pos)


def parse(text: str) -> LatticeExpr:
    return _Parser(text).parse()


def to_string(e: LatticeExpr) -> str:
    return str(e)


def elaborate(e: LatticeExpr) -> Lattice:
    """Gram matrix of the direct sum, blocks in the printed order."""
    blocks = []
    for t in e.terms:
        try:
            block = catalog(t.atom)
        except LatticeError as err:
            raise ExprSemanticError(f"{t.atom}: {err}") from err
        blocks.extend([block] * t.mult)
    return direct_sum(*blocks, name=str(e))


def lattice(text: str) -> Lattice:
    """parse + elaborate."""
    return elaborate(parse(text))

"""Sparse multivariate polynomials with rational coefficients.

Only what superpotentials need: parsing, printing, ``+``, ``*``, formal
partial derivatives, restriction to a coordinate subspace, and weighted
degrees.

Grammar accepted by :func:`parse` (and emitted by ``str``)::

    expr    := term (('+' | '-') term)*
    term    := unary ('*' unary)*
    unary   := ('+' | '-') unary | power
    power   := atom (('^' | '**') INT)?
    atom    := INT ('/' INT)? | NAME | '(' expr ')'
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Exponent = tuple[int, ...]


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at column {pos + 1}: {text!r}")
        self.column = pos + 1


class _ZeroPolynomial:
    """Weighted degree of the zero polynomial (distinct from every number)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ZERO_POLYNOMIAL"

    def __bool__(self):
        return False


ZERO_POLYNOMIAL = _ZeroPolynomial()


class Polynomial:
    """Immutable sparse polynomial over Q in a fixed ordered list of variables."""

    __slots__ = ("variables", "terms")

    def __init__(self, variables: Sequence[str], terms: Mapping[Exponent, Fraction] | None = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean = {}
        for exp, coeff in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != n:
                raise ValueError(f"exponent {exp} has length {len(exp)}, expected {n}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            coeff = Fraction(coeff)
            if coeff:
                clean[exp] = clean.get(exp, Fraction(0)) + coeff
                if not clean[exp]:
                    del clean[exp]
        self.terms = dict(sorted(clean.items(), reverse=True))

    @classmethod
    def constant(cls, variables, c) -> Polynomial:
        return cls(variables, {(0,) * len(variables): Fraction(c)})

    @classmethod
    def variable(cls, variables, name: str) -> Polynomial:
        variables = tuple(variables)
        i = variables.index(name)
        return cls(variables, {tuple(int(j == i) for j in range(len(variables))): Fraction(1)})

    def is_zero(self) -> bool:
        return not self.terms

    def _check(self, other: Polynomial):
        if self.variables != other.variables:
            raise ValueError("polynomials live in different variable lists")

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.variables == other.variables and self.terms == other.terms

    def __hash__(self):
        return hash((self.variables, tuple(self.terms.items())))

    def __add__(self, other: Polynomial) -> Polynomial:
        self._check(other)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return Polynomial(self.variables, terms)

    def __neg__(self) -> Polynomial:
        return Polynomial(self.variables, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: Polynomial) -> Polynomial:
        return self + (-other)

    def __mul__(self, other: Polynomial) -> Polynomial:
        self._check(other)
        terms: dict[Exponent, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return Polynomial(self.variables, terms)

    def __pow__(self, k: int) -> Polynomial:
        if k < 0:
            raise ValueError("negative exponent")
        out = Polynomial.constant(self.variables, 1)
        for _ in range(k):
            out = out * self
        return out

    def partial(self, i: int | str) -> Polynomial:
        """Formal partial derivative in variable ``i`` (index or name)."""
        if isinstance(i, str):
            i = self.variables.index(i)
        terms = {}
        for e, c in self.terms.items():
            if e[i]:
                terms[e[:i] + (e[i] - 1,) + e[i + 1:]] = c * e[i]
        return Polynomial(self.variables, terms)

    def restrict(self, support: Iterable[int]) -> Polynomial:
        """Set every variable outside ``support`` to zero."""
        support = set(support)
        return Polynomial(
            self.variables,
            {e: c for e, c in self.terms.items() if all(k in support for k, x in enumerate(e) if x)},
        )

    def used_variables(self) -> set[int]:
        return {k for e in self.terms for k, x in enumerate(e) if x}

    def weighted_degree(self, weights: Sequence):
        return weighted_degree(self, weights)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms.items():
            mono = "*".join(
                name if k == 1 else f"{name}^{k}" for name, k in zip(self.variables, e) if k
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r}, variables={list(self.variables)})"


def weighted_degree(P: Polynomial, weights: Sequence):
    """Common weighted degree of all monomials of P.

    Returns a Fraction, ``None`` if P is not quasihomogeneous for these
    weights, or :data:`ZERO_POLYNOMIAL` when P is zero.
    """
    if len(weights) != len(P.variables):
        raise ValueError(f"weight vector has length {len(weights)}, expected {len(P.variables)}")
    if P.is_zero():
        return ZERO_POLYNOMIAL
    w = [Fraction(x) for x in weights]
    degrees = {sum((a * b for a, b in zip(e, w)), Fraction(0)) for e in P.terms}
    if len(degrees) != 1:
        return None
    return degrees.pop()


# --------------------------------------------------------------------------
# parser

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    pos = 0
    tokens = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            col = len(text) - len(text[pos:].lstrip())
            raise PolynomialSyntaxError("unexpected character", text, col)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("int", int(m.group(1)), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            tokens.append(("op", m.group(3), start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: Sequence[str]):
        self.text = text
        self.variables = tuple(variables)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, message, tok=None):
        tok = tok or self.peek()
        raise PolynomialSyntaxError(message, self.text, tok[2])

    def accept(self, op):
        tok = self.peek()
        if tok[0] == "op" and tok[1] == op:
            self.i += 1
            return True
        return False

    def parse(self) -> Polynomial:
        p = self.expr()
        if self.peek()[0] != "end":
            self.error("unexpected token")
        return p

    def expr(self) -> Polynomial:
        p = self.term()
        while True:
            if self.accept("+"):
                p = p + self.term()
            elif self.accept("-"):
                p = p - self.term()
            else:
                return p

    def term(self) -> Polynomial:
        p = self.unary()
        while self.accept("*"):
            p = p * self.unary()
        return p

    def unary(self) -> Polynomial:
        if self.accept("-"):
            return -self.unary()
        if self.accept("+"):
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.accept("^") or self.accept("**"):
            if self.peek()[0] == "op" and self.peek()[1] == "-":
                self.error("negative exponent")
            tok = self.take()
            if tok[0] != "int":
                self.error("exponent must be a nonnegative integer", tok)
            return base ** tok[1]
        return base

    def atom(self) -> Polynomial:
        tok = self.take()
        kind, value, _ = tok
        if kind == "int":
            c = Fraction(value)
            if self.accept("/"):
                den = self.take()
                if den[0] != "int" or den[1] == 0:
                    self.error("rational literal needs a nonzero integer denominator", den)
                c = Fraction(value, den[1])
            return Polynomial.constant(self.variables, c)
        if kind == "name":
            if value not in self.variables:
                self.error(f"unknown variable {value!r}", tok)
            return Polynomial.variable(self.variables, value)
        if kind == "op" and value == "(":
            p = self.expr()
            if not self.accept(")"):
                self.error("expected ')'")
            return p
        self.error("expected a number, variable or '('", tok)


def parse(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse ``text`` as a polynomial in the declared ``variables``."""
    if len(set(variables)) != len(variables):
        raise ValueError("duplicate variable names")
    return _Parser(text, variables).parse()

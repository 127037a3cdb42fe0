"""Exact sparse (Laurent) polynomials over the rationals.

A :class:`RingDescriptor` fixes an ordered list of variables, the subset of
them that are inverted, and a monomial order.  :class:`Polynomial` values are
immutable maps from exponent tuples to :class:`fractions.Fraction`
coefficients; negative exponents are allowed only at inverted variables.

>>> R = RingDescriptor.make("x y u v")
>>> f = R.parse("x*v - y*u - 1")
>>> print(f * R.var("x"))
x^2*v - x*y*u - x
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Callable, Iterable, Iterator, Mapping, Union

from .errors import (
    LaurentInput,
    NonUnitImageForInvertedVariable,
    NotUnivariateAfterSpecialization,
    ParseError,
    RingMismatch,
    UnknownVariable,
)

Rational = Fraction
Monomial = tuple[int, ...]
Scalar = Union[int, Fraction]

ORDERS = ("lex", "degrevlex")


def _lex_key(m: Monomial) -> Monomial:
    return m


def _degrevlex_key(m: Monomial) -> tuple:
    return (sum(m),) + tuple(-e for e in reversed(m))


def order_key(order: str) -> Callable[[Monomial], tuple]:
    if order == "lex":
        return _lex_key
    if order == "degrevlex":
        return _degrevlex_key
    raise ValueError(f"unknown monomial order {order!r}")


@dataclass(frozen=True)
class RingDescriptor:
    """Variables in precedence order, inverted subset and monomial order."""

    variables: tuple[str, ...]
    inverted: frozenset[str] = field(default_factory=frozenset)
    order: str = "degrevlex"

    def __post_init__(self) -> None:
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate variables in {self.variables}")
        bad = set(self.inverted) - set(self.variables)
        if bad:
            raise UnknownVariable(f"inverted variables not in ring: {sorted(bad)}")
        if self.order not in ORDERS:
            raise ValueError(f"unknown monomial order {self.order!r}")
        for v in self.variables:
            if not _IDENT.fullmatch(v):
                raise ValueError(f"bad variable name {v!r}")

    @classmethod
    def make(cls, variables: str | Iterable[str], inverted: str | Iterable[str] = (),
             order: str = "degrevlex") -> "RingDescriptor":
        if isinstance(variables, str):
            variables = variables.replace(",", " ").split()
        if isinstance(inverted, str):
            inverted = inverted.replace(",", " ").split()
        return cls(tuple(variables), frozenset(inverted), order)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise UnknownVariable(f"{name!r} is not a variable of the ring") from None

    def is_inverted(self, i: int) -> bool:
        return self.variables[i] in self.inverted

    def key(self) -> Callable[[Monomial], tuple]:
        return order_key(self.order)

    def zero(self) -> "Polynomial":
        return Polynomial(self, {})

    def one(self) -> "Polynomial":
        return self.const(1)

    def const(self, c: Scalar) -> "Polynomial":
        c = Fraction(c)
        return Polynomial(self, {(0,) * self.nvars: c} if c else {})

    def var(self, name: str) -> "Polynomial":
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return Polynomial(self, {tuple(e): Fraction(1)})

    def gens(self) -> list["Polynomial"]:
        return [self.var(v) for v in self.variables]

    def monomial(self, exps: Monomial, coeff: Scalar = 1) -> "Polynomial":
        return Polynomial(self, {tuple(exps): Fraction(coeff)})

    def parse(self, text: str) -> "Polynomial":
        return parse(text, self)

    def with_order(self, order: str) -> "RingDescriptor":
        return RingDescriptor(self.variables, self.inverted, order)

    def extend(self, names: Iterable[str], front: bool = False,
               inverted: Iterable[str] = ()) -> "RingDescriptor":
        names = tuple(names)
        vs = names + self.variables if front else self.variables + names
        return RingDescriptor(vs, self.inverted | frozenset(inverted), self.order)

    def fresh(self, base: str) -> str:
        name, k = base, 0
        while name in self.variables:
            k += 1
            name = f"{base}{k}"
        return name


class Polynomial:
    """Immutable sparse Laurent polynomial with rational coefficients."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingDescriptor, terms: Mapping[Monomial, Scalar],
                 _check: bool = True):
        if _check:
            clean: dict[Monomial, Fraction] = {}
            n = ring.nvars
            for m, c in terms.items():
                m = tuple(m)
                if len(m) != n:
                    raise ValueError(f"exponent {m} has wrong length for {ring.variables}")
                for i, e in enumerate(m):
                    if e < 0 and not ring.is_inverted(i):
                        raise ValueError(
                            f"negative exponent at non-inverted variable {ring.variables[i]}")
                c = Fraction(c)
                if c:
                    clean[m] = c
            terms = clean
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "terms", terms)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, *_):
        raise AttributeError("Polynomial is immutable")

    # -- basic queries -------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_coeff(self) -> Fraction:
        return self.terms.get((0,) * self.ring.nvars, Fraction(0))

    def coeff(self, m: Monomial) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def is_laurent(self) -> bool:
        return any(e < 0 for m in self.terms for e in m)

    def support(self) -> set[str]:
        used = set()
        for m in self.terms:
            for i, e in enumerate(m):
                if e:
                    used.add(self.ring.variables[i])
        return used

    def total_degree(self) -> int:
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def degree_in(self, name: str) -> int:
        i = self.ring.index(name)
        if not self.terms:
            return -1
        return max(m[i] for m in self.terms)

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        key = self.ring.key()
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_monomial(self) -> Monomial:
        if not self.terms:
            raise ValueError("zero polynomial has no leading monomial")
        return max(self.terms, key=self.ring.key())

    def leading_coeff(self) -> Fraction:
        return self.terms[self.leading_monomial()]

    def monic(self) -> "Polynomial":
        if not self.terms:
            return self
        return self * (1 / self.leading_coeff())

    def is_unit_monomial(self) -> bool:
        """True when self is c * (monomial in inverted variables), c != 0."""
        if len(self.terms) != 1:
            return False
        m = next(iter(self.terms))
        return all(e == 0 or self.ring.is_inverted(i) for i, e in enumerate(m))

    # -- arithmetic ----------------------------------------------------
    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.ring != self.ring:
                raise RingMismatch(f"{self.ring.variables} vs {other.ring.variables}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial(self.ring, out, _check=False)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.ring, {m: -c for m, c in self.terms.items()}, _check=False)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return self.ring.zero()
            return Polynomial(self.ring, {m: a * c for m, a in self.terms.items()}, _check=False)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial(self.ring, out, _check=False)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (1 / Fraction(other))
        if isinstance(other, Polynomial) and other.is_unit_monomial():
            return self * other.inverse()
        return NotImplemented

    def inverse(self) -> "Polynomial":
        if not self.is_unit_monomial():
            raise ValueError(f"{self} is not a unit")
        (m, c), = self.terms.items()
        return Polynomial(self.ring, {tuple(-e for e in m): 1 / c}, _check=False)

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            return self == self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        h = self._hash
        if h is None:
            h = hash((self.ring, frozenset(self.terms.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __str__(self) -> str:
        return format_polynomial(self)

    def __repr__(self) -> str:
        return f"Polynomial({format_polynomial(self)!r})"

    # -- structural helpers ---------------------------------------------
    def map_coeffs(self, fn: Callable[[Fraction], Scalar]) -> "Polynomial":
        return Polynomial(self.ring, {m: fn(c) for m, c in self.terms.items()})

    def change_ring(self, ring: RingDescriptor) -> "Polynomial":
        """Re-express in another ring, matching variables by name.

        Variables of ours that are absent from ``ring`` must not occur in self.
        """
        idx = [ring.variables.index(v) if v in ring.variables else -1
               for v in self.ring.variables]
        out = {}
        for m, c in self.terms.items():
            e = [0] * ring.nvars
            for v, i, a in zip(self.ring.variables, idx, m):
                if i >= 0:
                    e[i] = a
                elif a:
                    raise UnknownVariable(f"{v} occurs in {self} but not in {ring.variables}")
            out[tuple(e)] = c
        return Polynomial(ring, out)

    def evaluate(self, point: Mapping[str, Scalar]) -> Fraction:
        values = [Fraction(point[v]) if v in point else None for v in self.ring.variables]
        total = Fraction(0)
        for m, c in self.terms.items():
            t = c
            for i, e in enumerate(m):
                if e:
                    if values[i] is None:
                        raise UnknownVariable(f"no value for {self.ring.variables[i]}")
                    t *= values[i] ** e
            total += t
        return total

    def monomial_content(self) -> Monomial:
        """Componentwise minimum exponent over all terms (zero vector for 0)."""
        if not self.terms:
            return (0,) * self.ring.nvars
        return tuple(min(col) for col in zip(*self.terms))

    def shift(self, m: Monomial) -> "Polynomial":
        """Multiply by the monomial with exponent m (allowed to be negative)."""
        return Polynomial(self.ring, {tuple(a + b for a, b in zip(k, m)): c
                                      for k, c in self.terms.items()})


# -- operations -----------------------------------------------------------

def poly_arith(op: str, f: Polynomial, g: Polynomial) -> Polynomial:
    if f.ring != g.ring:
        raise RingMismatch(f"{f.ring.variables} vs {g.ring.variables}")
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    raise ValueError(f"unknown operation {op!r}")


def substitute(f: Polynomial, images: Mapping[str, Polynomial | Scalar],
               target: RingDescriptor | None = None) -> Polynomial:
    """Apply the ring map sending each variable to its image.

    Variables missing from ``images`` go to the variable of the same name in
    the target ring.  Images of inverted variables must be units of the
    target, i.e. a nonzero rational times a monomial in inverted variables.
    """
    if target is None:
        target = next((p.ring for p in images.values() if isinstance(p, Polynomial)), f.ring)
    imgs: list[Polynomial] = []
    for v in f.ring.variables:
        if v in images:
            p = images[v]
            if isinstance(p, Polynomial):
                if p.ring != target:
                    raise RingMismatch(f"image of {v} lives in {p.ring.variables}")
            else:
                p = target.const(p)
        else:
            p = target.var(v)
        if v in f.ring.inverted and not p.is_unit_monomial():
            raise NonUnitImageForInvertedVariable(f"{v} -> {p}")
        imgs.append(p)
    cache: dict[tuple[int, int], Polynomial] = {}

    def power(i: int, e: int) -> Polynomial:
        k = (i, e)
        if k not in cache:
            cache[k] = imgs[i] ** e
        return cache[k]

    out: dict[Monomial, Fraction] = {}
    for m, c in f.terms.items():
        t = target.const(c)
        for i, e in enumerate(m):
            if e:
                t = t * power(i, e)
        for mm, cc in t.terms.items():
            s = out.get(mm, 0) + cc
            if s:
                out[mm] = s
            else:
                out.pop(mm, None)
    return Polynomial(target, out, _check=False)


def homogeneous_decompose(f: Polynomial, weights: Mapping[str, int] | None = None
                          ) -> dict[int, Polynomial]:
    """Split f into weighted-homogeneous components keyed by degree.

    The zero polynomial maps to an empty dict (its degree is undefined).
    """
    if f.is_laurent():
        raise LaurentInput(f"{f} has negative exponents")
    w = [1 if weights is None else weights.get(v, 0) for v in f.ring.variables]
    parts: dict[int, dict[Monomial, Fraction]] = {}
    for m, c in f.terms.items():
        d = sum(a * b for a, b in zip(m, w))
        parts.setdefault(d, {})[m] = c
    return {d: Polynomial(f.ring, t, _check=False) for d, t in sorted(parts.items())}


def partial_derivative(f: Polynomial, var: str) -> Polynomial:
    i = f.ring.index(var)
    out = {}
    for m, c in f.terms.items():
        if m[i]:
            mm = list(m)
            mm[i] -= 1
            out[tuple(mm)] = c * m[i]
    return Polynomial(f.ring, out, _check=False)


# -- univariate helpers (dense lists, low degree first) ----------------------

def _to_dense(f: Polynomial, var: str) -> list[Fraction]:
    i = f.ring.index(var)
    if f.is_laurent():
        raise LaurentInput(f"{f} has negative exponents")
    deg = max((m[i] for m in f.terms), default=-1)
    coeffs = [Fraction(0)] * (deg + 1)
    for m, c in f.terms.items():
        if any(e for j, e in enumerate(m) if j != i):
            raise NotUnivariateAfterSpecialization(f"{f} involves variables besides {var}")
        coeffs[m[i]] += c
    return coeffs


def _trim(a: list[Fraction]) -> list[Fraction]:
    while a and not a[-1]:
        a.pop()
    return a


def _dense_rem(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a = list(a)
    db = len(b) - 1
    while len(_trim(a)) - 1 >= db:
        q = a[-1] / b[-1]
        shift = len(a) - 1 - db
        for k, bk in enumerate(b):
            a[shift + k] -= q * bk
        a.pop()
    return _trim(a)


def dense_gcd(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        a, b = b, _dense_rem(a, b)
    if a:
        lc = a[-1]
        a = [c / lc for c in a]
    return a


def univariate_squarefree(f: Polynomial, var: str) -> bool:
    """True iff gcd(f, f') is a nonzero constant (f must involve only var)."""
    a = _trim(_to_dense(f, var))
    if not a:
        return False
    da = _trim([a[k] * k for k in range(1, len(a))])
    return len(dense_gcd(a, da)) <= 1


# -- text syntax ----------------------------------------------------------

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()/]))")


def _locate(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


class _Parser:
    def __init__(self, text: str, ring: RingDescriptor):
        self.text = text
        self.ring = ring
        self.toks: list[tuple[str, str, int]] = []
        pos = 0
        n = len(text)
        while True:
            while pos < n and text[pos].isspace():
                pos += 1
            if pos >= n:
                break
            m = _TOKEN.match(text, pos)
            if not m:
                raise ParseError(f"unexpected character {text[pos]!r}", *_locate(text, pos))
            kind = m.lastgroup
            start = m.start(kind)
            self.toks.append((kind, m.group(kind), start))
            pos = m.end()
        self.i = 0

    def error(self, msg: str) -> ParseError:
        pos = self.toks[self.i][2] if self.i < len(self.toks) else len(self.text)
        return ParseError(msg, *_locate(self.text, pos))

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self) -> Polynomial:
        if not self.toks:
            raise self.error("empty expression")
        p = self.expr()
        if self.peek() is not None:
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self) -> Polynomial:
        sign = 1
        t = self.peek()
        if t and t[1] in "+-" and t[0] == "op":
            self.take()
            sign = -1 if t[1] == "-" else 1
        acc = self.term() * sign
        while True:
            t = self.peek()
            if t and t[0] == "op" and t[1] in "+-":
                self.take()
                rhs = self.term()
                acc = acc + rhs if t[1] == "+" else acc - rhs
            else:
                return acc

    def _starts_factor(self, t) -> bool:
        return t is not None and (t[0] in ("num", "id") or t[1] == "(")

    def term(self) -> Polynomial:
        acc = self.power()
        while True:
            t = self.peek()
            if t and t[0] == "op" and t[1] == "*":
                self.take()
                acc = acc * self.power()
            elif t and t[0] == "op" and t[1] == "/":
                self.take()
                d = self.power()
                if not d.is_unit_monomial():
                    raise self.error("division only by nonzero rationals or units")
                acc = acc * d.inverse()
            elif self._starts_factor(t):
                acc = acc * self.power()
            else:
                return acc

    def power(self) -> Polynomial:
        base = self.atom()
        t = self.peek()
        if t and t[0] == "op" and t[1] == "^":
            self.take()
            neg = False
            t = self.peek()
            if t and t[1] == "-":
                self.take()
                neg = True
            t = self.take()
            if t is None or t[0] != "num" or "/" in t[1]:
                self.i -= 1
                raise self.error("exponent must be an integer")
            e = int(t[1])
            if neg:
                if not base.is_unit_monomial():
                    self.i -= 1
                    raise self.error("negative power of a non-unit")
                return base.inverse() ** e
            return base ** e
        return base

    def atom(self) -> Polynomial:
        t = self.take()
        if t is None:
            raise self.error("unexpected end of input")
        kind, val, _ = t
        if kind == "num":
            return self.ring.const(Fraction(val))
        if kind == "id":
            if val not in self.ring.variables:
                self.i -= 1
                raise self.error(f"unknown variable {val!r}")
            return self.ring.var(val)
        if val == "(":
            p = self.expr()
            t = self.take()
            if t is None or t[1] != ")":
                self.i -= 1
                raise self.error("expected ')'")
            return p
        self.i -= 1
        raise self.error(f"unexpected token {val!r}")


def parse(text: str, ring: RingDescriptor) -> Polynomial:
    """Parse e.g. ``x^2*(x-1)*v + y*u^2 - x``; ``*`` may be omitted."""
    return _Parser(text, ring).parse()


def format_monomial(ring: RingDescriptor, m: Monomial) -> str:
    parts = []
    for v, e in zip(ring.variables, m):
        if e == 1:
            parts.append(v)
        elif e:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def format_polynomial(f: Polynomial) -> str:
    if not f.terms:
        return "0"
    out = []
    for k, (m, c) in enumerate(f.sorted_terms()):
        sign = "-" if c < 0 else "+"
        a = abs(c)
        mono = format_monomial(f.ring, m)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if k == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f"{sign} {body}")
    return " ".join(out)


def iter_monomials(nvars: int, degree: int) -> Iterator[Monomial]:
    """All exponent vectors of total degree exactly ``degree``."""
    if nvars == 0:
        if degree == 0:
            yield ()
        return
    for first in range(degree, -1, -1):
        for rest in iter_monomials(nvars - 1, degree - first):
            yield (first,) + rest


def content_lcm_denominator(f: Polynomial) -> int:
    d = 1
    for c in f.terms.values():
        d = d * c.denominator // gcd(d, c.denominator)
    return d

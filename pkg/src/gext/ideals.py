"""Gröbner bases and ideal-theoretic predicates.

Buchberger's algorithm with the normal selection strategy and both
Buchberger criteria.  Every top-level call draws from a reduction-step budget
(default 10**6, see :func:`reduction_budget`); running out raises
:class:`ResourceBudgetExceeded` instead of returning a partial answer.

Rings with inverted variables are handled by adjoining, for each inverted
``u``, a fresh variable ``u_inv`` together with the relation ``u*u_inv - 1``.
"""
from __future__ import annotations

import contextlib
import contextvars
import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Iterable, Iterator, Sequence

from .errors import BadCodim, RingMismatch, ResourceBudgetExceeded
from .polycore import Monomial, Polynomial, RingDescriptor, partial_derivative

DEFAULT_BUDGET = 10**6

_budget_limit: contextvars.ContextVar[int] = contextvars.ContextVar(
    "reduction_budget", default=DEFAULT_BUDGET)

EPoly = dict  # engine polynomial: Monomial -> Fraction
KeyFn = Callable[[Monomial], tuple]


@contextlib.contextmanager
def reduction_budget(steps: int) -> Iterator[None]:
    """Temporarily change the per-call reduction-step cap."""
    token = _budget_limit.set(steps)
    try:
        yield
    finally:
        _budget_limit.reset(token)


def current_budget() -> int:
    return _budget_limit.get()


class _Budget:
    __slots__ = ("limit", "used")

    def __init__(self, limit: int | None = None):
        self.limit = current_budget() if limit is None else limit
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise ResourceBudgetExceeded(
                f"more than {self.limit} reduction steps; raise the budget to continue")


# -- monomial orders as flat integer keys ------------------------------------

def _block_key(blocks: Sequence[Sequence[int]]) -> KeyFn:
    """Product of degrevlex orders on the given index blocks, first block largest."""
    rev = [tuple(reversed(b)) for b in blocks]

    def key(m: Monomial) -> tuple:
        out: list[int] = []
        for b, r in zip(blocks, rev):
            out.append(sum(m[i] for i in b))
            out.extend(-m[i] for i in r)
        return tuple(out)
    return key


def _order_keyfn(order: str, n: int) -> KeyFn:
    if order == "lex":
        return lambda m: m
    if order == "degrevlex":
        return _block_key([range(n)])
    raise ValueError(f"unknown order {order!r}")


# -- engine -----------------------------------------------------------------

def _divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _lm(f: EPoly, key: KeyFn) -> Monomial:
    return max(f, key=key)


def _monic(f: EPoly, key: KeyFn) -> EPoly:
    c = f[_lm(f, key)]
    if c == 1:
        return f
    inv = 1 / c
    return {m: a * inv for m, a in f.items()}


def _reduce(f: EPoly, G: Sequence[tuple[Monomial, EPoly]], key: KeyFn,
            budget: _Budget) -> EPoly:
    """Full normal form of f modulo the monic polynomials G."""
    if not f or not G:
        return dict(f)
    f = dict(f)
    cache: dict[Monomial, tuple] = {}

    def nk(m: Monomial) -> tuple:
        k = cache.get(m)
        if k is None:
            k = cache[m] = tuple(-x for x in key(m))
        return k

    heap = [(nk(m), m) for m in f]
    heapq.heapify(heap)
    rem: EPoly = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = f.pop(m, None)
        if c is None:
            continue
        for lm, g in G:
            if _divides(lm, m):
                budget.tick()
                q = tuple(a - b for a, b in zip(m, lm))
                for gm, gc in g.items():
                    if gm == lm:
                        continue
                    mm = tuple(a + b for a, b in zip(gm, q))
                    old = f.get(mm)
                    if old is None:
                        f[mm] = -c * gc
                        heapq.heappush(heap, (nk(mm), mm))
                    else:
                        new = old - c * gc
                        if new:
                            f[mm] = new
                        else:
                            del f[mm]
                break
        else:
            rem[m] = c
    return rem


def _spoly(f: EPoly, lf: Monomial, g: EPoly, lg: Monomial) -> EPoly:
    l = _lcm(lf, lg)
    qf = tuple(a - b for a, b in zip(l, lf))
    qg = tuple(a - b for a, b in zip(l, lg))
    out: EPoly = {}
    for m, c in f.items():
        out[tuple(a + b for a, b in zip(m, qf))] = c
    for m, c in g.items():
        mm = tuple(a + b for a, b in zip(m, qg))
        s = out.get(mm, 0) - c
        if s:
            out[mm] = s
        else:
            out.pop(mm, None)
    return out


def buchberger(gens: Iterable[EPoly], key: KeyFn, budget: _Budget) -> list[EPoly]:
    """Reduced Gröbner basis (monic, sorted by decreasing leading monomial)."""
    G: list[tuple[Monomial, EPoly]] = []
    seen = set()
    for f in gens:
        if not f:
            continue
        f = _monic(f, key)
        sig = frozenset(f.items())
        if sig in seen:
            continue
        seen.add(sig)
        G.append((_lm(f, key), f))
    if not G:
        return []
    heap: list[tuple[tuple, int, int]] = []
    pending: set[tuple[int, int]] = set()

    def add_pairs(j: int) -> None:
        for i in range(j):
            p = (i, j)
            pending.add(p)
            heapq.heappush(heap, (key(_lcm(G[i][0], G[j][0])), j, i))

    for j in range(len(G)):
        add_pairs(j)
    # heapq pops the smallest key first: the normal selection strategy
    while heap:
        _, j, i = heapq.heappop(heap)
        pending.discard((i, j))
        li, lj = G[i][0], G[j][0]
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue  # first criterion: coprime leading monomials
        l = _lcm(li, lj)
        chain = False
        for k in range(len(G)):
            if k in (i, j):
                continue
            if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
                continue
            if _divides(G[k][0], l):
                chain = True
                break
        if chain:
            continue  # second criterion
        h = _reduce(_spoly(G[i][1], li, G[j][1], lj), G, key, budget)
        if h:
            h = _monic(h, key)
            lh = _lm(h, key)
            if not any(lh):
                return [h]  # unit ideal
            G.append((lh, h))
            add_pairs(len(G) - 1)
    return _interreduce(G, key, budget)


def _interreduce(G: list[tuple[Monomial, EPoly]], key: KeyFn, budget: _Budget) -> list[EPoly]:
    G = sorted(G, key=lambda t: key(t[0]))
    minimal: list[tuple[Monomial, EPoly]] = []
    for idx, (lm, g) in enumerate(G):
        if any(_divides(lm2, lm) for lm2, _ in minimal):
            continue
        if any(_divides(G[k][0], lm) and G[k][0] != lm for k in range(len(G)) if k != idx):
            continue
        minimal.append((lm, g))
    out = []
    for idx, (lm, g) in enumerate(minimal):
        others = [t for k, t in enumerate(minimal) if k != idx]
        r = _reduce(g, others, key, budget)
        out.append((lm, _monic(r, key)))
    out.sort(key=lambda t: key(t[0]), reverse=True)
    return [g for _, g in out]


# -- working rings for Laurent inputs ----------------------------------------

@dataclass(frozen=True)
class _Work:
    ring: RingDescriptor           # the user-facing ring (may invert variables)
    wring: RingDescriptor          # polynomial ring with hats appended
    hats: tuple[int, ...]          # for each ring index: index of its hat, or -1

    def to_work(self, f: Polynomial) -> EPoly:
        if f.ring != self.ring:
            raise RingMismatch(f"{f.ring.variables} vs {self.ring.variables}")
        n = self.wring.nvars
        out: EPoly = {}
        for m, c in f.terms.items():
            e = [0] * n
            for i, a in enumerate(m):
                if a >= 0:
                    e[i] = a
                else:
                    e[self.hats[i]] = -a
            e = tuple(e)
            out[e] = out.get(e, 0) + c
        return {m: c for m, c in out.items() if c}

    def from_work(self, f: EPoly) -> Polynomial:
        k = self.ring.nvars
        out: dict[Monomial, Fraction] = {}
        for m, c in f.items():
            e = list(m[:k])
            for i, h in enumerate(self.hats):
                if h >= 0:
                    e[i] -= m[h]
            e = tuple(e)
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial(self.ring, out, _check=False)

    def unit_relations(self) -> list[EPoly]:
        rels = []
        n = self.wring.nvars
        for i, h in enumerate(self.hats):
            if h >= 0:
                e = [0] * n
                e[i] = 1
                e[h] = 1
                rels.append({tuple(e): Fraction(1), (0,) * n: Fraction(-1)})
        return rels


@lru_cache(maxsize=None)
def _work(ring: RingDescriptor) -> _Work:
    names = list(ring.variables)
    hats = []
    for v in ring.variables:
        if v in ring.inverted:
            h = v + "_inv"
            while h in names:
                h += "_"
            hats.append(len(names))
            names.append(h)
        else:
            hats.append(-1)
    wring = RingDescriptor(tuple(names), frozenset(), ring.order)
    return _Work(ring, wring, tuple(hats))


# -- public types -----------------------------------------------------------

@dataclass(frozen=True)
class Ideal:
    """Ideal of a (possibly Laurent) polynomial ring given by generators."""

    ring: RingDescriptor
    generators: tuple[Polynomial, ...]

    def __post_init__(self) -> None:
        gens = tuple(self.generators)
        for g in gens:
            if g.ring != self.ring:
                raise RingMismatch(f"generator {g} not in {self.ring.variables}")
        if not gens:
            gens = (self.ring.zero(),)
        object.__setattr__(self, "generators", gens)

    @classmethod
    def of(cls, ring: RingDescriptor, *gens: Polynomial | str) -> "Ideal":
        return cls(ring, tuple(ring.parse(g) if isinstance(g, str) else g for g in gens))

    def __add__(self, other: "Ideal | Iterable[Polynomial]") -> "Ideal":
        more = other.generators if isinstance(other, Ideal) else tuple(other)
        return Ideal(self.ring, tuple(g for g in self.generators + more if g))

    def is_zero(self) -> bool:
        return all(not g for g in self.generators)

    def groebner(self, order: str | None = None) -> "GroebnerBasis":
        return groebner(self, order)

    def contains(self, f: Polynomial) -> bool:
        return ideal_membership(f, self)

    def is_unit(self) -> bool:
        return self.groebner().is_unit()

    def __str__(self) -> str:
        return "(" + ", ".join(str(g) for g in self.generators) + ")"


@dataclass(frozen=True)
class GroebnerBasis:
    ideal: Ideal
    order: str
    polys: tuple[tuple[tuple[Monomial, Fraction], ...], ...] = field(repr=False)

    @property
    def work(self) -> _Work:
        return _work(self.ideal.ring)

    def engine(self) -> list[tuple[Monomial, EPoly]]:
        key = _order_keyfn(self.order, self.work.wring.nvars)
        out = []
        for p in self.polys:
            d = dict(p)
            out.append((_lm(d, key), d))
        return out

    @property
    def basis(self) -> list[Polynomial]:
        """Basis elements in the working polynomial ring (hats for inverses)."""
        wr = self.work.wring.with_order(self.order)
        return [Polynomial(wr, dict(p), _check=False) for p in self.polys]

    def is_unit(self) -> bool:
        return len(self.polys) == 1 and not any(self.polys[0][0][0])

    def reduce(self, f: Polynomial, budget: _Budget | None = None) -> Polynomial:
        w = self.work
        key = _order_keyfn(self.order, w.wring.nvars)
        r = _reduce(w.to_work(f), self.engine(), key, budget or _Budget())
        return w.from_work(r)

    def __str__(self) -> str:
        return "{" + ", ".join(str(p) for p in self.basis) + "}"


@lru_cache(maxsize=4096)
def _groebner_cached(ring: RingDescriptor, gens: tuple[Polynomial, ...], order: str,
                     limit: int) -> tuple:
    w = _work(ring)
    key = _order_keyfn(order, w.wring.nvars)
    epolys = [w.to_work(g) for g in gens] + w.unit_relations()
    G = buchberger(epolys, key, _Budget(limit))
    return tuple(tuple(sorted(g.items(), key=lambda t: key(t[0]), reverse=True)) for g in G)


def groebner(I: Ideal, order: str | None = None) -> GroebnerBasis:
    order = order or I.ring.order
    polys = _groebner_cached(I.ring, I.generators, order, current_budget())
    return GroebnerBasis(I, order, polys)


def normal_form(f: Polynomial, G: GroebnerBasis) -> Polynomial:
    if f.ring != G.ideal.ring:
        raise RingMismatch(f"{f.ring.variables} vs {G.ideal.ring.variables}")
    return G.reduce(f)


def ideal_membership(f: Polynomial, I: Ideal) -> bool:
    return not normal_form(f, groebner(I))


def ideal_equality(I: Ideal, J: Ideal) -> bool:
    if I.ring != J.ring:
        raise RingMismatch(f"{I.ring.variables} vs {J.ring.variables}")
    return groebner(I).polys == groebner(J).polys


def _eliminate_engine(w: RingDescriptor, gens: list[EPoly], drop: set[int]) -> list[EPoly]:
    n = w.nvars
    first = [i for i in range(n) if i in drop]
    rest = [i for i in range(n) if i not in drop]
    key = _block_key([first, rest])
    G = buchberger(gens, key, _Budget())
    return [g for g in G if all(m[i] == 0 for m in g for i in first)]


def eliminate(I: Ideal, keep: Iterable[str]) -> Ideal:
    """I ∩ ℚ[keep], computed with a block order (eliminated block first)."""
    keep = set(keep)
    for v in keep:
        I.ring.index(v)
    w = _work(I.ring)
    drop = set()
    for i, v in enumerate(I.ring.variables):
        if v not in keep:
            drop.add(i)
            if w.hats[i] >= 0:
                drop.add(w.hats[i])
    gens = [w.to_work(g) for g in I.generators] + w.unit_relations()
    kept = _eliminate_engine(w.wring, gens, drop)
    full = [w.from_work(g) for g in kept]
    sub = RingDescriptor(tuple(v for v in I.ring.variables if v in keep),
                         frozenset(v for v in I.ring.inverted if v in keep), I.ring.order)
    out = [p.change_ring(sub) for p in full if p]
    return Ideal(sub, tuple(out))


def saturate(I: Ideal, f: Polynomial) -> Ideal:
    """(I : f^∞) via 1 - T*f and elimination of T."""
    if not f:
        raise ValueError("cannot saturate with respect to 0")
    w = _work(I.ring)
    n = w.wring.nvars
    ext = n + 1  # T is the last engine variable

    def lift(p: EPoly) -> EPoly:
        return {m + (0,): c for m, c in p.items()}

    gens = [lift(w.to_work(g)) for g in I.generators] + [lift(r) for r in w.unit_relations()]
    tf = {m[:n] + (1,): -c for m, c in lift(w.to_work(f)).items()}
    tf[(0,) * ext] = tf.get((0,) * ext, 0) + 1
    gens.append({m: c for m, c in tf.items() if c})
    T = w.wring.fresh("T")
    kept = _eliminate_engine(w.wring.extend([T]), gens, {n})
    out = [w.from_work({m[:n]: c for m, c in g.items()}) for g in kept]
    return Ideal(I.ring, tuple(p for p in out if p))


def radical_membership(f: Polynomial, I: Ideal) -> bool:
    """Rabinowitsch trick: f ∈ √I iff 1 ∈ I + (1 - T*f)."""
    if f.ring != I.ring:
        raise RingMismatch(f"{f.ring.variables} vs {I.ring.variables}")
    if not f:
        return True
    T = I.ring.fresh("T")
    R = I.ring.extend([T])
    gens = [g.change_ring(R) for g in I.generators]
    gens.append(R.one() - R.var(T) * f.change_ring(R))
    return Ideal(R, tuple(gens)).is_unit()


# -- Jacobian criterion -------------------------------------------------------

def jacobian_matrix(relations: Sequence[Polynomial], variables: Sequence[str]
                    ) -> list[list[Polynomial]]:
    return [[partial_derivative(r, v) for v in variables] for r in relations]


def _det(M: list[list[Polynomial]], rows: tuple[int, ...], cols: tuple[int, ...],
         memo: dict) -> Polynomial:
    k = (rows, cols)
    if k in memo:
        return memo[k]
    if len(rows) == 1:
        d = M[rows[0]][cols[0]]
    else:
        r0, rest = rows[0], rows[1:]
        d = None
        for j, c in enumerate(cols):
            e = M[r0][c]
            if not e:
                continue
            sub = _det(M, rest, cols[:j] + cols[j + 1:], memo)
            if not sub:
                continue
            t = e * sub
            if j % 2:
                t = -t
            d = t if d is None else d + t
        if d is None:
            d = M[r0][cols[0]].ring.zero()
    memo[k] = d
    return d


@dataclass
class SmoothnessResult:
    smooth: bool
    minors_used: int
    witness: str

    def __bool__(self) -> bool:
        return self.smooth


def jacobian_smooth_along(A, F: Ideal, codim: int, batch: int = 12) -> SmoothnessResult:
    """Is Spec A smooth at every point of V(F)?

    ``A`` is any object with ``ring`` and ``relations``.  The ideal
    relations + F + (codim x codim minors) is tested for being the unit
    ideal; Jacobian entries are first reduced modulo relations + F, which does
    not change the generated ideal.
    """
    ring = A.ring
    rels = A.relations.generators if isinstance(A.relations, Ideal) else A.relations
    rels = [r for r in rels if r]
    nv = ring.nvars
    if codim < 0 or codim > min(len(rels), nv):
        raise BadCodim(f"no {codim}x{codim} minors in a {len(rels)}x{nv} Jacobian")
    base = Ideal(ring, tuple(rels)) + F
    G = groebner(base)
    if G.is_unit():
        return SmoothnessResult(True, 0, "V(F) does not meet Spec A")
    if codim == 0:
        return SmoothnessResult(True, 0, "no relations")
    J = [[normal_form(e, G) for e in row] for row in jacobian_matrix(rels, ring.variables)]
    memo: dict = {}
    extra: list[Polynomial] = []
    used = 0
    for rows in combinations(range(len(rels)), codim):
        for cols in combinations(range(nv), codim):
            d = _det(J, rows, cols, memo)
            if not d:
                continue
            d = normal_form(d, G)
            if not d:
                continue
            used += 1
            if d.is_constant():
                return SmoothnessResult(
                    True, used, f"minor rows={list(rows)} cols={[ring.variables[c] for c in cols]} "
                                f"is a nonzero constant modulo relations + F")
            extra.append(d)
            if len(extra) >= batch:
                base = base + extra
                extra = []
                G = groebner(base)
                if G.is_unit():
                    return SmoothnessResult(True, used, "relations + F + minors = (1)")
    if extra:
        base = base + extra
        G = groebner(base)
        if G.is_unit():
            return SmoothnessResult(True, used, "relations + F + minors = (1)")
    return SmoothnessResult(False, used, f"singular locus along V(F) cut out by {G}")

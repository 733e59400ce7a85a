"""Buchberger Groebner engine: normal forms, ideal membership, ideal
quotients, and module syzygies.

This is the proof oracle for every "lies in the ideal" claim in the
package.  Scalar ideals use the classic Buchberger loop with the normal
pair-selection strategy (minimal lcm) plus the product and chain
criteria.  Over the rationals the inner loop runs on primitive integer
coefficient dictionaries with gcd-scaled pseudo-reduction, which avoids
per-operation Fraction overhead; the exact rational normal form is
recovered by tracking the accumulated scale factor.  Prime-field input
reduces directly with machine-int modular arithmetic.

Syzygies use the elimination variant of the extended-Buchberger
construction: augment each column with a unit bookkeeping component,
run module Buchberger under a position-over-term order whose first
block dominates, and read off the basis elements supported entirely in
the bookkeeping block.

Budgets: every reduction step counts against ``Budget.max_steps`` and
monomials are checked against ``Budget.max_degree``.  Exceeding either
raises :class:`BudgetExceeded` -- a resource report, never a wrong
answer.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from .errors import BudgetExceeded, StructuralError
from .exactpoly import (
    DEGREVLEX,
    QQ,
    CoefficientRing,
    Mono,
    MonomialOrder,
    Polynomial,
    elimination_order,
    mono_deg,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
    mono_one,
)


@dataclass
class Budget:
    """Resource limits shared by all engine entry points."""

    max_steps: int = 1_000_000
    max_degree: int = 40

    def fresh_counter(self) -> "_Counter":
        return _Counter(self)


class _Counter:
    __slots__ = ("budget", "steps")

    def __init__(self, budget: Budget):
        self.budget = budget
        self.steps = 0

    def tick(self, n: int = 1):
        self.steps += n
        if self.steps > self.budget.max_steps:
            raise BudgetExceeded(
                f"Groebner step budget exceeded ({self.budget.max_steps})"
            )

    def check_mono(self, m: Mono):
        if mono_deg(m) > self.budget.max_degree:
            raise BudgetExceeded(
                f"degree cap exceeded ({mono_deg(m)} > {self.budget.max_degree})"
            )


DEFAULT_BUDGET = Budget()


class _Rev:
    """Max-heap adapter: reverses comparisons of an arbitrary sort key."""

    __slots__ = ("k",)

    def __init__(self, k):
        self.k = k

    def __lt__(self, other):
        return other.k < self.k


@dataclass(frozen=True)
class IdealSpec:
    """Generator list plus the monomial order used to present the ideal."""

    generators: tuple[Polynomial, ...]
    order: MonomialOrder = DEGREVLEX

    def __init__(self, generators: Sequence[Polynomial], order: MonomialOrder = DEGREVLEX):
        gens = tuple(g for g in generators if not g.is_zero())
        if gens:
            ring, table = gens[0].ring, gens[0].table
            for g in gens:
                if g.ring != ring or g.table != table:
                    raise StructuralError("ideal generators must share ring and table")
        object.__setattr__(self, "generators", gens)
        object.__setattr__(self, "order", order)

    @property
    def ring(self):
        return self.generators[0].ring if self.generators else None

    @property
    def table(self):
        return self.generators[0].table if self.generators else None


# ---------------------------------------------------------------------------
# Integer pseudo-reduction core (QQ and ZZ input).

def _int_terms(f: Polynomial) -> dict:
    """Primitive integer coefficient dict of a QQ/ZZ polynomial (content
    removed; sign of the degrevlex-leading coefficient positive)."""
    g = f.content_free()
    if g.ring.kind == "QQ":
        return {m: int(c) for m, c in g.terms.items()}
    return dict(g.terms)


def _strip_content(terms: dict) -> dict:
    g = 0
    for c in terms.values():
        g = gcd(g, c)
        if g == 1:
            return terms
    if g in (0, 1):
        return terms
    return {m: c // g for m, c in terms.items()}


def _zz_reduce(
    terms: dict,
    reducers: list[tuple[Mono, int, dict]],
    order: MonomialOrder,
    counter: _Counter,
    head_only: bool = False,
) -> tuple[dict, int]:
    """Pseudo-reduce an integer term dict by primitive integer reducers.

    Returns (remainder, scale) with scale > 0 and
    scale * input = (combination of reducers) + remainder.
    In head_only mode reduction stops once the leading monomial is
    irreducible; the untouched tail is returned as part of the remainder.
    """
    if not terms or not reducers:
        return dict(terms), 1
    keycache: dict[Mono, object] = {}
    okey = order.key

    def K(m):
        k = keycache.get(m)
        if k is None:
            k = okey(m)
            keycache[m] = k
        return k

    work = dict(terms)
    heap = [(_Rev(K(m)), m) for m in work]
    heapq.heapify(heap)
    remainder: dict[Mono, tuple[int, int]] = {}  # mono -> (value, scale at extraction)
    scale = 1
    max_deg = counter.budget.max_degree
    while heap:
        m = heapq.heappop(heap)[1]
        c = work.get(m)
        if c is None:
            continue
        hit = None
        for lm, lc, gterms in reducers:
            if mono_divides(lm, m):
                hit = (lm, lc, gterms)
                break
        if hit is None:
            if head_only:
                work_final = work
                out = {k: v for k, v in work_final.items()}
                for mm, (v, s) in remainder.items():
                    out[mm] = out.get(mm, 0) + v * (scale // s)
                return out, scale
            del work[m]
            remainder[m] = (c, scale)
            continue
        lm, lc, gterms = hit
        counter.tick()
        del work[m]
        g0 = gcd(c, lc)
        a = lc // g0
        b = c // g0
        if a < 0:
            a, b = -a, -b
        if a != 1:
            scale *= a
            for k in work:
                work[k] *= a
        shift = mono_div(m, lm)
        for mt, ct in gterms.items():
            if mt == lm:
                continue
            mm = mono_mul(mt, shift)
            if sum(mm) > max_deg:
                raise BudgetExceeded("degree cap exceeded during reduction")
            prev = work.get(mm)
            if prev is None:
                v = -b * ct
                if v:
                    work[mm] = v
                    heapq.heappush(heap, (_Rev(K(mm)), mm))
            else:
                v = prev - b * ct
                if v:
                    work[mm] = v
                else:
                    del work[mm]
    out = {}
    for mm, (v, s) in remainder.items():
        out[mm] = v * (scale // s)
    return out, scale


def _zz_spoly(
    f: tuple[Mono, int, dict], g: tuple[Mono, int, dict], counter: _Counter
) -> dict:
    """Integer S-polynomial of two primitive reducer records."""
    mf, cf, ft = f
    mg, cg, gt = g
    lcm = mono_lcm(mf, mg)
    counter.check_mono(lcm)
    uf, ug = mono_div(lcm, mf), mono_div(lcm, mg)
    g0 = gcd(cf, cg)
    a, b = cg // g0, cf // g0
    out: dict = {}
    for mt, ct in ft.items():
        out[mono_mul(mt, uf)] = a * ct
    for mt, ct in gt.items():
        mm = mono_mul(mt, ug)
        v = out.get(mm, 0) - b * ct
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)
    return out


def _record(terms: dict, order: MonomialOrder) -> tuple[Mono, int, dict]:
    terms = _strip_content(terms)
    lm = max(terms, key=order.key)
    return (lm, terms[lm], terms)


# ---------------------------------------------------------------------------
# Prime-field reduction core.

def _gf_reduce(
    terms: dict,
    reducers: list[tuple[Mono, int, dict]],
    order: MonomialOrder,
    counter: _Counter,
    p: int,
    head_only: bool = False,
) -> dict:
    if not terms or not reducers:
        return dict(terms)
    keycache: dict[Mono, object] = {}
    okey = order.key

    def K(m):
        k = keycache.get(m)
        if k is None:
            k = okey(m)
            keycache[m] = k
        return k

    work = dict(terms)
    heap = [(_Rev(K(m)), m) for m in work]
    heapq.heapify(heap)
    remainder: dict = {}
    max_deg = counter.budget.max_degree
    while heap:
        m = heapq.heappop(heap)[1]
        c = work.get(m)
        if c is None:
            continue
        hit = None
        for lm, lc_inv, gterms in reducers:
            if mono_divides(lm, m):
                hit = (lm, lc_inv, gterms)
                break
        if hit is None:
            if head_only:
                out = dict(work)
                out.update(remainder)
                return out
            del work[m]
            remainder[m] = c
            continue
        lm, lc_inv, gterms = hit
        counter.tick()
        del work[m]
        factor = (c * lc_inv) % p
        shift = mono_div(m, lm)
        for mt, ct in gterms.items():
            if mt == lm:
                continue
            mm = mono_mul(mt, shift)
            if sum(mm) > max_deg:
                raise BudgetExceeded("degree cap exceeded during reduction")
            prev = work.get(mm)
            if prev is None:
                v = (-factor * ct) % p
                if v:
                    work[mm] = v
                    heapq.heappush(heap, (_Rev(K(mm)), mm))
            else:
                v = (prev - factor * ct) % p
                if v:
                    work[mm] = v
                else:
                    del work[mm]
    return remainder


def _gf_record(terms: dict, order: MonomialOrder, p: int) -> tuple[Mono, int, dict]:
    lm = max(terms, key=order.key)
    return (lm, pow(terms[lm], p - 2, p), terms)


def _gf_spoly(f, g, counter: _Counter, p: int) -> dict:
    mf, cf_inv, ft = f
    mg, cg_inv, gt = g
    lcm = mono_lcm(mf, mg)
    counter.check_mono(lcm)
    uf, ug = mono_div(lcm, mf), mono_div(lcm, mg)
    out: dict = {}
    for mt, ct in ft.items():
        out[mono_mul(mt, uf)] = (ct * cf_inv) % p
    for mt, ct in gt.items():
        mm = mono_mul(mt, ug)
        v = (out.get(mm, 0) - ct * cg_inv) % p
        if v:
            out[mm] = v
        else:
            out.pop(mm, None)
    return out


# ---------------------------------------------------------------------------
# The Buchberger loop, shared by both coefficient cores.

class _Engine:
    """Coefficient-core adapter: ZZ pseudo-arithmetic or GF(p)."""

    def __init__(self, ring: CoefficientRing, order: MonomialOrder):
        self.order = order
        self.gf = ring.kind == "GF"
        self.p = ring.p
        self.ring = ring

    def record(self, terms: dict):
        return _gf_record(terms, self.order, self.p) if self.gf else _record(terms, self.order)

    def reduce(self, terms, reducers, counter, head_only=False) -> dict:
        if self.gf:
            return _gf_reduce(terms, reducers, self.order, counter, self.p, head_only)
        return _zz_reduce(terms, reducers, self.order, counter, head_only)[0]

    def spoly(self, f, g, counter) -> dict:
        if self.gf:
            return _gf_spoly(f, g, counter, self.p)
        return _zz_spoly(f, g, counter)

    def to_terms(self, f: Polynomial) -> dict:
        if self.gf:
            return dict(f.terms)
        return _int_terms(f)

    def to_polynomial(self, terms: dict, table) -> Polynomial:
        """Monic polynomial over the engine's field."""
        if not terms:
            return Polynomial.zero(self.ring if self.gf else QQ, table)
        lm = max(terms, key=self.order.key)
        if self.gf:
            inv = pow(terms[lm], self.p - 2, self.p)
            return Polynomial(self.ring, table, {m: (c * inv) % self.p for m, c in terms.items()})
        lc = terms[lm]
        return Polynomial(QQ, table, {m: Fraction(c, lc) for m, c in terms.items()})


def _engine_for(gens: Sequence[Polynomial], order: MonomialOrder) -> tuple[_Engine, list[Polynomial]]:
    lifted = []
    for g in gens:
        if g.ring.kind == "ZZ":
            g = g.change_ring(QQ)
        if not g.ring.is_field:
            raise StructuralError("Groebner engine needs field coefficients")
        lifted.append(g)
    ring = lifted[0].ring
    for g in lifted:
        if g.ring != ring:
            raise StructuralError("mixed coefficient rings")
    return _Engine(ring, order), lifted


@dataclass
class GroebnerBasis:
    """Reduced Groebner basis (monic over field coefficients)."""

    basis: tuple[Polynomial, ...]
    order: MonomialOrder
    source: IdealSpec
    _records: list = field(default=None, repr=False, compare=False)
    _engine: _Engine = field(default=None, repr=False, compare=False)

    def _prepared(self):
        if self._records is None:
            eng, lifted = _engine_for(self.basis, self.order) if self.basis else (None, [])
            self._engine = eng
            self._records = [eng.record(eng.to_terms(g)) for g in lifted] if eng else []
        return self._engine, self._records

    def normal_form(self, f: Polynomial, budget: Budget = DEFAULT_BUDGET) -> Polynomial:
        """Fully reduced remainder; exact over the basis field."""
        if not self.basis:
            return f
        eng, records = self._prepared()
        f = _match_field(f, self.basis[0].ring)
        counter = budget.fresh_counter()
        if eng.gf:
            rem = _gf_reduce(dict(f.terms), records, self.order, counter, eng.p)
            return Polynomial(f.ring, f.table, rem)
        denom = 1
        for c in f.terms.values():
            denom = denom * c.denominator // gcd(denom, c.denominator)
        int_terms = {m: int(c * denom) for m, c in f.terms.items()}
        rem, scale = _zz_reduce(int_terms, records, self.order, counter)
        total = Fraction(1, scale * denom)
        return Polynomial(QQ, f.table, {m: c * total for m, c in rem.items()})

    def contains(self, f: Polynomial, budget: Budget = DEFAULT_BUDGET) -> bool:
        if f.is_zero():
            return True
        if not self.basis:
            return False
        return self.normal_form(f, budget).is_zero()

    def verify(self, budget: Budget = DEFAULT_BUDGET) -> bool:
        """Re-check the defining invariants: every S-polynomial of basis
        pairs reduces to 0 and every source generator is a member."""
        eng, records = self._prepared()
        if eng is None:
            return not self.source.generators
        counter = budget.fresh_counter()
        for i in range(len(records)):
            for j in range(i + 1, len(records)):
                s = eng.spoly(records[i], records[j], counter)
                if eng.reduce(s, records, counter):
                    return False
        for g in self.source.generators:
            if not self.contains(g, budget):
                return False
        return True


def _match_field(f: Polynomial, ring: CoefficientRing) -> Polynomial:
    if f.ring == ring:
        return f
    if f.ring.kind == "ZZ" and ring.kind == "QQ":
        return f.change_ring(QQ)
    raise StructuralError(f"cannot move polynomial from {f.ring} to {ring}")


def buchberger(spec: IdealSpec, budget: Budget = DEFAULT_BUDGET) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal presented by ``spec``.

    ZZ generators are lifted to QQ.  Selection follows the normal
    strategy (minimal lcm in the active order); the product criterion
    and the pending-pair chain criterion prune S-pairs.  On completion
    every source generator is reduced to zero against the result,
    certifying two-way ideal equality (each basis element is built from
    the source generators by ring operations).
    """
    order = spec.order
    if not spec.generators:
        return GroebnerBasis((), order, spec)
    eng, lifted = _engine_for(spec.generators, order)
    counter = budget.fresh_counter()
    table = lifted[0].table

    G: list[tuple[Mono, int, dict]] = []
    pair_heap: list = []
    pending: set[tuple[int, int]] = set()
    okey = order.key

    def push_pairs(idx: int):
        lm_new = G[idx][0]
        for i in range(idx):
            l = mono_lcm(G[i][0], lm_new)
            heapq.heappush(pair_heap, (okey(l), i, idx))
            pending.add((i, idx))

    def add(terms: dict):
        rec = eng.record(terms)
        counter.check_mono(rec[0])
        G.append(rec)
        push_pairs(len(G) - 1)

    seen = set()
    for g in lifted:
        t = eng.to_terms(g)
        key = frozenset(t.items())
        if key in seen:
            continue
        seen.add(key)
        add(t)

    while pair_heap:
        _, i, j = heapq.heappop(pair_heap)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        mi, mj = G[i][0], G[j][0]
        lcm = mono_lcm(mi, mj)
        if lcm == mono_mul(mi, mj):  # product criterion
            continue
        skip = False
        for k in range(len(G)):  # chain criterion, pending-pair form
            if k == i or k == j:
                continue
            if mono_divides(G[k][0], lcm):
                a = (min(i, k), max(i, k))
                b = (min(j, k), max(j, k))
                if a not in pending and b not in pending:
                    skip = True
                    break
        if skip:
            continue
        s = eng.spoly(G[i], G[j], counter)
        if not s:
            continue
        r = eng.reduce(s, G, counter, head_only=True)
        if r:
            add(r)

    # Minimalize: drop elements whose leading monomial is divisible by the
    # leading monomial of an element kept earlier (ascending scan).
    order_idx = sorted(range(len(G)), key=lambda k: okey(G[k][0]))
    kept: list[tuple[Mono, int, dict]] = []
    for k in order_idx:
        lm = G[k][0]
        if any(mono_divides(h[0], lm) for h in kept):
            continue
        kept.append(G[k])
    # Tail-reduce each survivor against the others and make monic.
    final: list[Polynomial] = []
    for i, rec in enumerate(kept):
        others = kept[:i] + kept[i + 1 :]
        rem = eng.reduce(rec[2], others, counter)
        if rem:
            final.append(eng.to_polynomial(rem, table))
    final.sort(key=lambda p: okey(p.leading_term(order)[0]), reverse=True)
    gb = GroebnerBasis(tuple(final), order, spec)
    for g in lifted:
        if not gb.contains(g, budget):
            raise StructuralError("internal error: source generator escaped its ideal")
    return gb


def normal_form(f: Polynomial, gb: GroebnerBasis, budget: Budget = DEFAULT_BUDGET) -> Polynomial:
    """Fully reduced remainder; zero iff f lies in the ideal."""
    return gb.normal_form(f, budget)


def reduce_by(
    f: Polynomial,
    gens: Sequence[Polynomial],
    order: MonomialOrder = DEGREVLEX,
    budget: Budget = DEFAULT_BUDGET,
) -> Polynomial:
    """Division remainder by a raw generator list (not necessarily a
    Groebner basis).  A zero remainder certifies ideal membership; a
    nonzero remainder proves nothing."""
    gens = [g for g in gens if not g.is_zero()]
    if not gens or f.is_zero():
        return f
    eng, lifted = _engine_for(gens, order)
    f = _match_field(f, lifted[0].ring)
    records = [eng.record(eng.to_terms(g)) for g in lifted]
    counter = budget.fresh_counter()
    rem = eng.reduce(eng.to_terms(f), records, counter)
    return eng.to_polynomial(rem, f.table) if rem else Polynomial.zero(f.ring, f.table)


def in_ideal(
    f: Polynomial,
    spec: IdealSpec,
    budget: Budget = DEFAULT_BUDGET,
    gb: GroebnerBasis | None = None,
) -> bool:
    """Ideal membership.  Tries a plain division certificate first (cheap,
    sound when it hits zero) and falls back to a Groebner basis."""
    if f.is_zero():
        return True
    if gb is None:
        if not spec.generators:
            return False
        if reduce_by(f, spec.generators, spec.order, budget).is_zero():
            return True
        gb = buchberger(spec, budget)
    return gb.contains(f, budget)


def spec_to_record(spec: IdealSpec) -> dict:
    """Report-friendly form: generator texts under the active order."""
    from .exactpoly import to_text

    return {
        "order": spec.order.name,
        "generators": [to_text(g, spec.order) for g in spec.generators],
    }


def gb_to_record(gb: GroebnerBasis) -> dict:
    from .exactpoly import to_text

    return {
        "order": gb.order.name,
        "basis": [to_text(g, gb.order) for g in gb.basis],
        "source": spec_to_record(gb.source),
    }


# ---------------------------------------------------------------------------
# Ideal quotient via the tag-variable trick: I : f is computed from the
# elimination presentation of I \cap (f), then exact division by f.

def exact_div(g: Polynomial, f: Polynomial, order: MonomialOrder = DEGREVLEX) -> Polynomial:
    """Quotient g / f when f divides g exactly."""
    if g.is_zero():
        return g
    ring = g.ring
    mf, cf = f.leading_term(order)
    work = dict(g.terms)
    quot: dict[Mono, object] = {}
    while work:
        m = max(work, key=order.key)
        c = work.pop(m)
        if not mono_divides(mf, m):
            raise StructuralError("exact division failed")
        shift = mono_div(m, mf)
        factor = ring.div(c, cf)
        quot[shift] = factor
        for mt, ct in f.terms.items():
            if mt == mf:
                continue
            mm = mono_mul(mt, shift)
            s = ring.sub(work.get(mm, ring.zero()), ring.mul(factor, ct))
            if s == 0:
                work.pop(mm, None)
            else:
                work[mm] = s
    return Polynomial(ring, g.table, quot)


def ideal_quotient(spec: IdealSpec, f: Polynomial, budget: Budget = DEFAULT_BUDGET) -> IdealSpec:
    """Generators of (I : f) = {x : x f in I}."""
    if f.is_zero():
        table = spec.table if spec.generators else f.table
        ring = spec.ring if spec.generators else f.ring
        if not ring.is_field:
            ring = QQ
        return IdealSpec([Polynomial.one(ring, table)], spec.order)
    if not spec.generators:
        return IdealSpec([], spec.order)
    _, lifted = _engine_for(list(spec.generators) + [f], spec.order)
    gens, f = lifted[:-1], lifted[-1]
    table = f.table
    ext = table.extend(["_u"], ["param"])
    u = Polynomial.var(f.ring, ext, len(table))
    one = Polynomial.one(f.ring, ext)
    H = [u * g.lift(ext) for g in gens] + [(one - u) * f.lift(ext)]
    elim = elimination_order([len(table)], len(ext))
    gb = buchberger(IdealSpec(H, elim), budget)
    quots = []
    for g in gb.basis:
        if all(m[len(table)] == 0 for m in g.terms):
            back = Polynomial(g.ring, table, {m[: len(table)]: c for m, c in g.terms.items()})
            quots.append(exact_div(back, f, spec.order))
    return IdealSpec(quots, spec.order)


# ---------------------------------------------------------------------------
# Free modules and syzygies.

@dataclass(frozen=True)
class FreeModuleMatrix:
    """Rectangular matrix of polynomials sharing one ring and table."""

    entries: tuple[tuple[Polynomial, ...], ...]

    def __init__(self, entries: Sequence[Sequence[Polynomial]]):
        rows = tuple(tuple(r) for r in entries)
        if rows:
            width = len(rows[0])
            if any(len(r) != width for r in rows):
                raise StructuralError("matrix must be rectangular")
            probe = rows[0][0] if width else None
            if probe is not None:
                for r in rows:
                    for e in r:
                        if e.ring != probe.ring or e.table != probe.table:
                            raise StructuralError("matrix entries must share ring and table")
        object.__setattr__(self, "entries", rows)

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def column(self, j: int) -> list[Polynomial]:
        return [self.entries[i][j] for i in range(self.rows)]

    def apply(self, v: Sequence[Polynomial]) -> list[Polynomial]:
        if len(v) != self.cols:
            raise StructuralError("vector length mismatch")
        out = []
        for i in range(self.rows):
            acc = None
            for j in range(self.cols):
                t = self.entries[i][j] * v[j]
                acc = t if acc is None else acc + t
            out.append(acc)
        return out

    def matmul(self, other: "FreeModuleMatrix") -> "FreeModuleMatrix":
        if self.cols != other.rows:
            raise StructuralError("matrix dimension mismatch")
        out = []
        for i in range(self.rows):
            row = []
            for j in range(other.cols):
                acc = None
                for k in range(self.cols):
                    t = self.entries[i][k] * other.entries[k][j]
                    acc = t if acc is None else acc + t
                row.append(acc)
            out.append(row)
        return FreeModuleMatrix(out)

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)


# Internal module-element representation: dict[(component, mono)] -> coeff.
_VP = dict


def _vp_from_vector(v: Sequence[Polynomial], offset: int = 0) -> _VP:
    out: _VP = {}
    for c_idx, poly in enumerate(v):
        for m, c in poly.terms.items():
            out[(c_idx + offset, m)] = c
    return out


def _vp_key(order: MonomialOrder):
    k = order.key
    return lambda t: (-t[0], k(t[1]))


def _vp_lead(v: _VP, keyfn):
    return max(v, key=keyfn)


def _vp_scale_shift(v: _VP, ring, coeff, shift: Mono) -> _VP:
    return {(c, mono_mul(m, shift)): ring.mul(x, coeff) for (c, m), x in v.items()}


def _vp_sub(a: _VP, b: _VP, ring) -> _VP:
    out = dict(a)
    for key, x in b.items():
        s = ring.sub(out.get(key, ring.zero()), x)
        if s == 0:
            out.pop(key, None)
        else:
            out[key] = s
    return out


def _vp_monic(v: _VP, ring, keyfn) -> _VP:
    lt = _vp_lead(v, keyfn)
    inv = ring.inv(v[lt])
    if inv == ring.one():
        return v
    return {k: ring.mul(x, inv) for k, x in v.items()}


def _vp_reduce(v: _VP, G: list[_VP], ring, keyfn, counter: _Counter) -> _VP:
    leads = [(_vp_lead(g, keyfn), g) for g in G]
    work = dict(v)
    remainder: _VP = {}
    while work:
        key = max(work, key=keyfn)
        coeff = work.pop(key)
        comp, m = key
        hit = None
        for (gc, gm), g in leads:
            if gc == comp and mono_divides(gm, m):
                hit = ((gc, gm), g)
                break
        if hit is None:
            remainder[key] = coeff
            continue
        (gc, gm), g = hit
        counter.tick()
        shift = mono_div(m, gm)
        factor = ring.div(coeff, g[(gc, gm)])
        for (tc, tm), tx in g.items():
            if (tc, tm) == (gc, gm):
                continue
            kk = (tc, mono_mul(tm, shift))
            s = ring.sub(work.get(kk, ring.zero()), ring.mul(factor, tx))
            if s == 0:
                work.pop(kk, None)
            else:
                work[kk] = s
    return remainder


def _module_buchberger(vectors: list[_VP], ring, order: MonomialOrder, counter: _Counter) -> list[_VP]:
    keyfn = _vp_key(order)
    G = [_vp_monic(v, ring, keyfn) for v in vectors if v]
    pairs = {(i, j) for i in range(len(G)) for j in range(i + 1, len(G))}
    while pairs:
        best, best_key = None, None
        for p in pairs:
            (ci, mi) = _vp_lead(G[p[0]], keyfn)
            (cj, mj) = _vp_lead(G[p[1]], keyfn)
            if ci != cj:
                continue
            k = keyfn((ci, mono_lcm(mi, mj)))
            if best is None or k < best_key:
                best, best_key = p, k
        if best is None:
            break
        pairs.discard(best)
        i, j = best
        (ci, mi) = _vp_lead(G[i], keyfn)
        (cj, mj) = _vp_lead(G[j], keyfn)
        lcm = mono_lcm(mi, mj)
        ui, uj = mono_div(lcm, mi), mono_div(lcm, mj)
        s = _vp_sub(
            _vp_scale_shift(G[i], ring, ring.one(), ui),
            _vp_scale_shift(G[j], ring, ring.one(), uj),
            ring,
        )
        if not s:
            continue
        r = _vp_reduce(s, G, ring, keyfn, counter)
        if r:
            for (_c, mono) in r:
                if mono_deg(mono) > counter.budget.max_degree:
                    raise BudgetExceeded("module degree cap exceeded")
            idx = len(G)
            G.append(_vp_monic(r, ring, keyfn))
            pairs.update((k, idx) for k in range(idx))
    return G


def _field_columns(columns) -> list[list[Polynomial]]:
    out = []
    for col in columns:
        out.append([e.change_ring(QQ) if e.ring.kind == "ZZ" else e for e in col])
    return out


def module_gb(
    columns: list[list[Polynomial]],
    order: MonomialOrder = DEGREVLEX,
    budget: Budget = DEFAULT_BUDGET,
) -> list[_VP]:
    """Groebner basis of the submodule of R^m generated by the columns."""
    cols = _field_columns(columns)
    ring = cols[0][0].ring
    counter = budget.fresh_counter()
    vectors = [_vp_from_vector(c) for c in cols]
    return _module_buchberger([v for v in vectors if v], ring, order, counter)


def module_contains(
    v: list[Polynomial],
    gb_vectors: list[_VP],
    order: MonomialOrder = DEGREVLEX,
    budget: Budget = DEFAULT_BUDGET,
) -> bool:
    v = _field_columns([v])[0]
    ring = v[0].ring
    vp = _vp_from_vector(v)
    if not vp:
        return True
    if not gb_vectors:
        return False
    r = _vp_reduce(vp, gb_vectors, ring, _vp_key(order), budget.fresh_counter())
    return not r


def syzygies(
    M: FreeModuleMatrix,
    order: MonomialOrder = DEGREVLEX,
    budget: Budget = DEFAULT_BUDGET,
) -> list[list[Polynomial]]:
    """Generating set of {v : M v = 0}; every returned v satisfies
    M v = 0 exactly (asserted before returning)."""
    m, k = M.rows, M.cols
    if k == 0:
        return []
    cols = _field_columns([M.column(j) for j in range(k)])
    ring = cols[0][0].ring
    table = cols[0][0].table
    counter = budget.fresh_counter()
    vectors = []
    for j, col in enumerate(cols):
        vp = _vp_from_vector(col)
        vp[(m + j, mono_one(len(table)))] = ring.one()
        vectors.append(vp)
    G = _module_buchberger(vectors, ring, order, counter)
    out = []
    for g in G:
        if all(c >= m for (c, _mono) in g):
            vec = []
            for j in range(k):
                terms = {mono: x for (c, mono), x in g.items() if c == m + j}
                vec.append(Polynomial(ring, table, terms))
            out.append(vec)
    lifted = FreeModuleMatrix([[cols[j][i] for j in range(k)] for i in range(m)])
    for v in out:
        for e in lifted.apply(v):
            if not e.is_zero():
                raise StructuralError("internal error: syzygy check failed")
    return out

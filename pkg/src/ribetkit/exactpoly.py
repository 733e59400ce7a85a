"""Sparse exact multivariate polynomial arithmetic.

A polynomial is a dictionary mapping dense exponent tuples (one entry per
variable of its table) to nonzero coefficients in an exact coefficient
ring: arbitrary-precision integers, rationals (``fractions.Fraction``),
or a prime field with p < 2**31 (plain Python ints reduced mod p).
There is no floating point anywhere.

The zero polynomial is the empty term map; equal polynomials have
identical term maps, so ``==`` is canonical-form comparison.  Values are
immutable after construction and safe to share between threads.

Variables are identified by their integer index into a ``VariableTable``;
names exist only for I/O.  Tables also carry a role tag and a torus
weight per variable (b-tagged variables weigh +1, c-tagged -1, all
others 0 unless overridden), which is what ``Polynomial.torus_weight``
grades by.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import StructuralError

# Degree of the zero polynomial.
NEG_INF = float("-inf")

Mono = tuple  # dense exponent tuple, one int per table variable

ROLES = ("a", "b", "c", "d", "nu", "eps", "delta", "x_sigma", "param", "other")

_DEFAULT_ROLE_WEIGHT = {"b": 1, "c": -1}


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


class CoefficientRing:
    """Exact coefficient ring: integers, rationals, or a prime field.

    Prime fields require p < 2**31 so products of two reduced elements
    fit in a machine word before reduction.
    """

    __slots__ = ("kind", "p")

    def __init__(self, kind: str, p: int | None = None):
        if kind not in ("ZZ", "QQ", "GF"):
            raise StructuralError(f"unknown coefficient ring kind {kind!r}")
        if kind == "GF":
            if p is None or p >= 2**31 or not _is_prime(p):
                raise StructuralError(f"GF modulus must be a prime < 2**31, got {p!r}")
        elif p is not None:
            raise StructuralError("modulus only makes sense for GF")
        self.kind = kind
        self.p = p

    # -- structure ----------------------------------------------------
    def __eq__(self, other):
        return (
            isinstance(other, CoefficientRing)
            and self.kind == other.kind
            and self.p == other.p
        )

    def __hash__(self):
        return hash((self.kind, self.p))

    def __repr__(self):
        return self.kind if self.p is None else f"GF({self.p})"

    @property
    def is_field(self) -> bool:
        return self.kind in ("QQ", "GF")

    # -- element operations -------------------------------------------
    def normalize(self, c):
        if self.kind == "GF":
            return int(c) % self.p
        if self.kind == "QQ":
            return c if isinstance(c, Fraction) else Fraction(c)
        if isinstance(c, Fraction):
            if c.denominator != 1:
                raise StructuralError(f"{c} is not an integer")
            return c.numerator
        return int(c)

    def zero(self):
        return 0 if self.kind != "QQ" else Fraction(0)

    def one(self):
        return 1 if self.kind != "QQ" else Fraction(1)

    def add(self, a, b):
        return (a + b) % self.p if self.kind == "GF" else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.kind == "GF" else a - b

    def mul(self, a, b):
        return (a * b) % self.p if self.kind == "GF" else a * b

    def neg(self, a):
        return (-a) % self.p if self.kind == "GF" else -a

    def inv(self, a):
        if self.kind == "GF":
            if a % self.p == 0:
                raise ZeroDivisionError("inverse of 0 in GF(p)")
            return pow(a, self.p - 2, self.p)
        if self.kind == "QQ":
            return Fraction(1) / a
        raise StructuralError("ZZ is not a field")

    def div(self, a, b):
        return self.mul(a, self.inv(b))


ZZ = CoefficientRing("ZZ")
QQ = CoefficientRing("QQ")


def GF(p: int) -> CoefficientRing:
    return CoefficientRing("GF", p)


class VariableTable:
    """Ordered list of distinct variable names with role tags and weights.

    Tables compare structurally: two independently built tables with the
    same names, roles, and weights are interchangeable.
    """

    __slots__ = ("names", "roles", "weights", "_index", "_hash")

    def __init__(
        self,
        names: Sequence[str],
        roles: Sequence[str] | None = None,
        weights: Sequence[int] | None = None,
    ):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise StructuralError("variable names must be distinct")
        roles = tuple(roles) if roles is not None else ("other",) * len(names)
        if len(roles) != len(names):
            raise StructuralError("one role per variable required")
        for r in roles:
            if r not in ROLES:
                raise StructuralError(f"unknown role tag {r!r}")
        if weights is None:
            weights = tuple(_DEFAULT_ROLE_WEIGHT.get(r, 0) for r in roles)
        else:
            weights = tuple(int(w) for w in weights)
            if len(weights) != len(names):
                raise StructuralError("one weight per variable required")
        self.names = names
        self.roles = roles
        self.weights = weights
        self._index = {n: i for i, n in enumerate(names)}
        self._hash = hash((names, roles, weights))

    def __len__(self):
        return len(self.names)

    def __repr__(self):
        return f"VariableTable({list(self.names)!r})"

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, VariableTable):
            return NotImplemented
        return (
            self._hash == other._hash
            and self.names == other.names
            and self.roles == other.roles
            and self.weights == other.weights
        )

    def __hash__(self):
        return self._hash

    def extends(self, other: "VariableTable") -> bool:
        """True iff this table starts with all of ``other``'s columns."""
        return self.names[: len(other.names)] == other.names

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise StructuralError(f"unknown variable {name!r}") from None

    def extend(
        self,
        names: Sequence[str],
        roles: Sequence[str] | None = None,
        weights: Sequence[int] | None = None,
    ) -> "VariableTable":
        """New table with extra variables appended (old indices unchanged)."""
        roles = tuple(roles) if roles is not None else ("other",) * len(names)
        if weights is None:
            new_weights = tuple(_DEFAULT_ROLE_WEIGHT.get(r, 0) for r in roles)
        else:
            new_weights = tuple(int(w) for w in weights)
        return VariableTable(
            self.names + tuple(names),
            self.roles + roles,
            self.weights + new_weights,
        )

    def indices_with_role(self, role: str) -> list[int]:
        return [i for i, r in enumerate(self.roles) if r == role]


# ---------------------------------------------------------------------------
# Monomials: dense exponent tuples.

def mono_one(n: int) -> Mono:
    return (0,) * n


def mono_mul(a: Mono, b: Mono) -> Mono:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Mono, b: Mono) -> bool:
    """True iff a | b componentwise."""
    return all(x <= y for x, y in zip(a, b))


def mono_div(a: Mono, b: Mono) -> Mono:
    """a / b, assuming b | a."""
    return tuple(x - y for x, y in zip(a, b))


def mono_lcm(a: Mono, b: Mono) -> Mono:
    return tuple(max(x, y) for x, y in zip(a, b))


def mono_deg(a: Mono) -> int:
    return sum(a)


def mono_is_one(a: Mono) -> bool:
    return not any(a)


# ---------------------------------------------------------------------------
# Monomial orders.  Each order exposes key(mono) -> sortable; larger keys
# mean larger monomials.  1 is minimal and keys are multiplication
# compatible for all orders defined here.

class MonomialOrder:
    name = "abstract"

    def key(self, m: Mono):  # pragma: no cover - interface
        raise NotImplementedError

    def leading(self, monos: Iterable[Mono]) -> Mono:
        return max(monos, key=self.key)

    def __repr__(self):
        return f"<order {self.name}>"


class Lex(MonomialOrder):
    name = "lex"

    def key(self, m: Mono):
        return m


class DegRevLex(MonomialOrder):
    name = "degrevlex"

    def key(self, m: Mono):
        return (sum(m), tuple(-e for e in reversed(m)))


@dataclass(frozen=True)
class Block:
    """One block of a block order: variable indices plus a local mode."""

    vars: tuple[int, ...]
    mode: str = "degrevlex"  # or "lex"
    weights: tuple[int, ...] | None = None  # per-variable weights for degree

    def key(self, m: Mono):
        sub = tuple(m[i] for i in self.vars)
        if self.mode == "lex":
            return sub
        if self.weights is None:
            d = sum(sub)
        else:
            d = sum(w * e for w, e in zip(self.weights, sub))
        return (d, tuple(-e for e in reversed(sub)))


class WeightedBlock(MonomialOrder):
    """Block order: compare block keys left to right.

    Every table variable must appear in exactly one block; blocks listed
    first dominate (elimination orders put the variables to eliminate in
    the first block).
    """

    name = "weighted_block"

    def __init__(self, blocks: Sequence[Block]):
        self.blocks = tuple(blocks)

    def key(self, m: Mono):
        return tuple(b.key(m) for b in self.blocks)


LEX = Lex()
DEGREVLEX = DegRevLex()


def elimination_order(first_vars: Sequence[int], nvars: int) -> WeightedBlock:
    """Order eliminating ``first_vars``: anything containing them is larger."""
    first = tuple(first_vars)
    rest = tuple(i for i in range(nvars) if i not in set(first))
    return WeightedBlock([Block(first), Block(rest)])


# ---------------------------------------------------------------------------
# Polynomials.

class Polynomial:
    """Immutable sparse polynomial over a CoefficientRing and VariableTable."""

    __slots__ = ("ring", "table", "terms", "_hash")

    def __init__(self, ring: CoefficientRing, table: VariableTable, terms: Mapping[Mono, object]):
        clean = {}
        n = len(table)
        for m, c in terms.items():
            if len(m) != n:
                raise StructuralError("monomial width does not match table")
            c = ring.normalize(c)
            if c == 0:
                continue
            if m in clean:
                c = ring.add(clean[m], c)
                if c == 0:
                    del clean[m]
                    continue
            clean[m] = c
        self.ring = ring
        self.table = table
        self.terms = clean
        self._hash = None

    # -- constructors ---------------------------------------------------
    @staticmethod
    def zero(ring, table) -> "Polynomial":
        return Polynomial(ring, table, {})

    @staticmethod
    def const(ring, table, c) -> "Polynomial":
        return Polynomial(ring, table, {mono_one(len(table)): c})

    @staticmethod
    def one(ring, table) -> "Polynomial":
        return Polynomial.const(ring, table, 1)

    @staticmethod
    def var(ring, table, i) -> "Polynomial":
        if isinstance(i, str):
            i = table.index(i)
        if not 0 <= i < len(table):
            raise StructuralError(f"variable index {i} out of range")
        e = [0] * len(table)
        e[i] = 1
        return Polynomial(ring, table, {tuple(e): 1})

    # -- basic structure --------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (
            self.ring == other.ring
            and self.table == other.table
            and self.terms == other.terms
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self.table, frozenset(self.terms.items())))
        return self._hash

    def total_degree(self):
        if not self.terms:
            return NEG_INF
        return max(mono_deg(m) for m in self.terms)

    def num_terms(self) -> int:
        return len(self.terms)

    def variables(self) -> set[int]:
        used: set[int] = set()
        for m in self.terms:
            used.update(i for i, e in enumerate(m) if e)
        return used

    def _check_compatible(self, other: "Polynomial"):
        if self.ring != other.ring:
            raise StructuralError("coefficient ring mismatch")
        if self.table != other.table:
            raise StructuralError("variable table mismatch")

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(self.ring, self.table, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_compatible(other)
        out = dict(self.terms)
        ring = self.ring
        for m, c in other.terms.items():
            s = ring.add(out.get(m, ring.zero()), c)
            if s == 0:
                out.pop(m, None)
            else:
                out[m] = s
        return Polynomial._trusted(ring, self.table, out)

    __radd__ = __add__

    def __neg__(self):
        ring = self.ring
        return Polynomial._trusted(ring, self.table, {m: ring.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(self.ring, self.table, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = self.ring.normalize(other)
            if c == 0:
                return Polynomial.zero(self.ring, self.table)
            ring = self.ring
            return Polynomial._trusted(
                ring, self.table, {m: ring.mul(k, c) for m, k in self.terms.items()}
            )
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check_compatible(other)
        ring = self.ring
        out: dict[Mono, object] = {}
        a, b = self.terms, other.terms
        if len(a) > len(b):
            a, b = b, a
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = mono_mul(m1, m2)
                s = ring.add(out.get(m, ring.zero()), ring.mul(c1, c2))
                if s == 0:
                    out.pop(m, None)
                else:
                    out[m] = s
        return Polynomial._trusted(ring, self.table, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise StructuralError("negative powers are not polynomial")
        result = Polynomial.one(self.ring, self.table)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    @staticmethod
    def _trusted(ring, table, terms: dict) -> "Polynomial":
        p = object.__new__(Polynomial)
        p.ring = ring
        p.table = table
        p.terms = terms
        p._hash = None
        return p

    # -- term access -------------------------------------------------------
    def sorted_terms(self, order: MonomialOrder = DEGREVLEX) -> list[tuple[Mono, object]]:
        """Terms sorted descending by the given order."""
        return sorted(self.terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_term(self, order: MonomialOrder = DEGREVLEX) -> tuple[Mono, object]:
        if not self.terms:
            raise StructuralError("zero polynomial has no leading term")
        m = max(self.terms, key=order.key)
        return m, self.terms[m]

    def coefficient(self, m: Mono):
        return self.terms.get(m, self.ring.zero())

    # -- substitution / evaluation ------------------------------------------
    def substitute(self, mapping: Mapping[int, "Polynomial"]) -> "Polynomial":
        """Simultaneous substitution; unmapped variables stay fixed.

        Images must share a ring, and a table extending this polynomial's
        table (same leading names).  The result lives in the image table.
        """
        if not mapping:
            return self
        images = list(mapping.values())
        target = images[0].table
        ring = self.ring
        for g in images:
            if g.ring != ring:
                raise StructuralError("substitution image ring mismatch")
            if g.table != target:
                raise StructuralError("substitution images must share one table")
        if target != self.table and not target.extends(self.table):
            raise StructuralError("image table must extend the source table")
        nt = len(target)
        one = Polynomial.one(ring, target)
        acc = Polynomial.zero(ring, target)
        # Cache powers of each mapped image.
        powers: dict[int, list[Polynomial]] = {i: [one, g] for i, g in mapping.items()}

        def power(i: int, e: int) -> Polynomial:
            ps = powers[i]
            while len(ps) <= e:
                ps.append(ps[-1] * ps[1])
            return ps[e]

        for m, c in self.terms.items():
            fixed = [0] * nt
            term = None
            for i, e in enumerate(m):
                if e == 0:
                    continue
                if i in mapping:
                    term = power(i, e) if term is None else term * power(i, e)
                else:
                    fixed[i] = e
            base = Polynomial._trusted(ring, target, {tuple(fixed): c})
            acc = acc + (base if term is None else base * term)
        return acc

    def evaluate(self, point: Mapping[int, object]):
        """Exact value at a full assignment of this polynomial's variables."""
        ring = self.ring
        need = self.variables()
        missing = [self.table.names[i] for i in need if i not in point]
        if missing:
            raise StructuralError(f"missing assignment for {missing}")
        vals = {i: ring.normalize(v) for i, v in point.items()}
        total = ring.zero()
        for m, c in self.terms.items():
            acc = c
            for i, e in enumerate(m):
                if e:
                    acc = ring.mul(acc, pow(vals[i], e, ring.p) if ring.kind == "GF" else vals[i] ** e)
            total = ring.add(total, acc)
        return total

    # -- grading -------------------------------------------------------------
    def term_weight(self, m: Mono) -> int:
        w = self.table.weights
        return sum(e * w[i] for i, e in enumerate(m) if e)

    def torus_weight(self):
        """Common torus weight of all terms, or None if not isobaric.

        The zero polynomial has weight 0 by convention.
        """
        if not self.terms:
            return 0
        it = iter(self.terms)
        w = self.term_weight(next(it))
        for m in it:
            if self.term_weight(m) != w:
                return None
        return w

    # -- ring/table moves ------------------------------------------------------
    def lift(self, table: VariableTable) -> "Polynomial":
        """Re-host in an extended table (appended variables get exponent 0)."""
        if table is self.table:
            return self
        if not table.extends(self.table):
            raise StructuralError("target table must extend the source table")
        pad = (0,) * (len(table) - len(self.table))
        return Polynomial._trusted(
            self.ring, table, {m + pad: c for m, c in self.terms.items()}
        )

    def change_ring(self, ring: CoefficientRing) -> "Polynomial":
        """Map coefficients into another ring (ZZ -> QQ, ZZ/QQ -> GF(p))."""
        if ring == self.ring:
            return self
        out = {}
        for m, c in self.terms.items():
            if ring.kind == "GF" and isinstance(c, Fraction):
                den = c.denominator % ring.p
                if den == 0:
                    raise StructuralError("denominator not invertible mod p")
                v = c.numerator * pow(den, ring.p - 2, ring.p)
            else:
                v = c
            v = ring.normalize(v)
            if v != 0:
                out[m] = v
        return Polynomial._trusted(ring, self.table, out)

    def map_coefficients(self, fn: Callable) -> "Polynomial":
        return Polynomial(self.ring, self.table, {m: fn(c) for m, c in self.terms.items()})

    def content_free(self) -> "Polynomial":
        """Divide out content (ZZ/QQ) and make the degrevlex-leading
        coefficient positive.  No-op over prime fields."""
        if not self.terms or self.ring.kind == "GF":
            return self
        from math import gcd

        if self.ring.kind == "QQ":
            g = 0
            l = 1
            for c in self.terms.values():
                g = gcd(g, c.numerator)
                l = l * c.denominator // gcd(l, c.denominator)
            scale = Fraction(l, g)
            terms = {m: c * scale for m, c in self.terms.items()}
        else:
            g = 0
            for c in self.terms.values():
                g = gcd(g, c)
            terms = {m: c // g for m, c in self.terms.items()}
        f = Polynomial._trusted(self.ring, self.table, terms)
        _, lc = f.leading_term(DEGREVLEX)
        return -f if lc < 0 else f

    # -- text form --------------------------------------------------------------
    def __repr__(self):
        return to_text(self)


# ---------------------------------------------------------------------------
# Text serialization.  Deterministic: terms in descending order of the
# active monomial order, each term "coef*name^e*...", joined by " + ".
# Negative coefficients keep their sign on the coefficient, which makes
# round-tripping trivial and bit-exact.

def to_text(f: Polynomial, order: MonomialOrder = DEGREVLEX) -> str:
    if not f.terms:
        return "0"
    parts = []
    names = f.table.names
    for m, c in f.sorted_terms(order):
        factors = [str(c)]
        for i, e in enumerate(m):
            if e == 1:
                factors.append(names[i])
            elif e > 1:
                factors.append(f"{names[i]}^{e}")
        parts.append("*".join(factors))
    return " + ".join(parts)


def from_text(text: str, ring: CoefficientRing, table: VariableTable) -> Polynomial:
    """Parse the output of :func:`to_text` back, bit-exactly."""
    text = text.strip()
    if text == "0":
        return Polynomial.zero(ring, table)
    terms: dict[Mono, object] = {}
    n = len(table)
    for part in text.split(" + "):
        factors = part.strip().split("*")
        coef_text = factors[0].strip()
        if ring.kind == "QQ":
            c = Fraction(coef_text)
        else:
            c = int(coef_text)
        e = [0] * n
        for fac in factors[1:]:
            fac = fac.strip()
            if "^" in fac:
                name, _, exp = fac.partition("^")
                e[table.index(name)] += int(exp)
            else:
                e[table.index(fac)] += 1
        m = tuple(e)
        c = ring.normalize(c)
        if m in terms:
            c = ring.add(terms[m], c)
        if c == 0:
            terms.pop(m, None)
        else:
            terms[m] = c
    return Polynomial(ring, table, terms)

"""Formal-ring side of a relation shape: the auxiliary matrices, the
relation ideals, and the symbolic identity checks.

For a shape with r generators the formal ring carries

    nu_1..nu_r                     trace shifts
    eps_k_1..eps_k_r               one block per TypeI row
    delta_i_j_1..delta_i_j_r       one block per TypeII row (i, j)
    x_g                            one per generator in some B_v, v != v0
    a_i, b_i, c_i, d_i             generic matrix entries

with b_sigma for sigma in B_{v0} deleted outright: the quotient by
(b_sigma) is realized by never creating the variable, and every formula
reads those entries as the zero polynomial.

The auxiliary square matrix E has t place columns, then r generator
columns, then s bookkeeping columns; its first t rows carry
x_{sigma_v} + nu_{sigma_v} on the place diagonal and a unit in the
column of the dedicated generator sigma_v.  E' applies the
determinant-killing alterations row kind by row kind, and D is the
lower-right (r+s) block of E.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as iproduct

from ..borel import TauAction
from ..errors import StructuralError
from ..exactpoly import DEGREVLEX, QQ, CoefficientRing, Polynomial, VariableTable
from ..genmat import Mat2
from ..groebner import (
    Budget,
    DEFAULT_BUDGET,
    FreeModuleMatrix,
    IdealSpec,
    in_ideal,
    reduce_by,
)
from .shapes import RibetShape, shape_r2_two_type2


@dataclass
class FormalRing:
    """Variable table and accessors for one shape."""

    shape: RibetShape
    ring: CoefficientRing = QQ
    table: VariableTable = field(init=False)

    def __post_init__(self):
        shape = self.shape
        names: list[str] = []
        roles: list[str] = []
        for i in range(1, shape.r + 1):
            names.append(f"nu{i}")
            roles.append("nu")
        for k in range(1, shape.type_i_count() + 1):
            for i in range(1, shape.r + 1):
                names.append(f"eps{k}_{i}")
                roles.append("eps")
        for (i, j) in shape.type_ii_pairs():
            for k in range(1, shape.r + 1):
                names.append(f"delta{i}_{j}_{k}")
                roles.append("delta")
        for g in shape.x_bearing():
            names.append(f"x{g}")
            roles.append("x_sigma")
        deleted = set(shape.b_v0())
        for i in range(1, shape.r + 1):
            names.append(f"a{i}")
            roles.append("a")
            if i not in deleted:
                names.append(f"b{i}")
                roles.append("b")
            names.append(f"c{i}")
            roles.append("c")
            names.append(f"d{i}")
            roles.append("d")
        self.table = VariableTable(names, roles)

    # -- variable accessors ---------------------------------------------
    def _v(self, name: str) -> Polynomial:
        return Polynomial.var(self.ring, self.table, self.table.index(name))

    def zero(self) -> Polynomial:
        return Polynomial.zero(self.ring, self.table)

    def one(self) -> Polynomial:
        return Polynomial.one(self.ring, self.table)

    def nu(self, i: int) -> Polynomial:
        return self._v(f"nu{i}")

    def eps(self, block: int, i: int) -> Polynomial:
        return self._v(f"eps{block}_{i}")

    def delta(self, i: int, j: int, k: int) -> Polynomial:
        return self._v(f"delta{i}_{j}_{k}")

    def x(self, g: int) -> Polynomial:
        return self._v(f"x{g}")

    def a(self, i: int) -> Polynomial:
        return self._v(f"a{i}")

    def b(self, i: int) -> Polynomial:
        if f"b{i}" not in self.table._index:
            return self.zero()
        return self._v(f"b{i}")

    def c(self, i: int) -> Polynomial:
        return self._v(f"c{i}")

    def d(self, i: int) -> Polynomial:
        return self._v(f"d{i}")

    def rho(self, i: int) -> Mat2:
        return Mat2(self.a(i), self.b(i), self.c(i), self.d(i))

    def b_prime(self, g: int) -> Polynomial:
        return self.x(g) - self.a(g)

    def c_prime(self, g: int) -> Polynomial:
        return self.x(g) - self.d(g)


# ---------------------------------------------------------------------------
# Symbolic determinants: cofactor expansion over column subsets, skipping
# zero entries (the matrices here are sparse by construction).

def symbolic_det(M: FreeModuleMatrix) -> Polynomial:
    n = M.rows
    if n != M.cols:
        raise StructuralError("determinant needs a square matrix")
    probe = M.entries[0][0]
    ring, table = probe.ring, probe.table
    if n == 0:
        return Polynomial.one(ring, table)
    minors: dict[int, Polynomial] = {0: Polynomial.one(ring, table)}
    for row in range(n):
        nxt: dict[int, Polynomial] = {}
        for mask, val in minors.items():
            cols = [c for c in range(n) if not (mask >> c) & 1]
            for pos, c in enumerate(cols[: n - row]):
                e = M.entries[row][c]
                if e.is_zero():
                    continue
                term = val * e if pos % 2 == 0 else -(val * e)
                key = mask | (1 << c)
                if key in nxt:
                    nxt[key] = nxt[key] + term
                else:
                    nxt[key] = term
        minors = nxt
    full = (1 << n) - 1
    return minors.get(full, Polynomial.zero(ring, table))


# ---------------------------------------------------------------------------
# Matrix builders.

@dataclass
class FormalMatrices:
    ring: FormalRing
    D: FreeModuleMatrix
    E: FreeModuleMatrix
    Eprime: FreeModuleMatrix


def build_matrices(shape: RibetShape, ring: CoefficientRing = QQ) -> FormalMatrices:
    """The formal auxiliary matrices E, E' and the relation block D."""
    F = FormalRing(shape, ring)
    t, r, s = shape.t, shape.r, shape.s
    n = t + r + s
    zero = F.zero()
    one = F.one()

    def gen_col(i: int) -> int:
        return t + i - 1

    y_col = {v: t + r + k for k, v in enumerate(shape.sigma_places[1:])}
    place_col = {v: k for k, v in enumerate(shape.p_places)}

    E = [[zero] * n for _ in range(n)]
    Ep = [[zero] * n for _ in range(n)]

    for k, v in enumerate(shape.p_places):
        g = shape.sigma_v[v]
        E[k][k] = F.x(g) + F.nu(g)
        Ep[k][k] = F.x(g) - F.a(g)
        E[k][gen_col(g)] = one
        Ep[k][gen_col(g)] = one

    type_i_seen = 0
    for rownum, row in enumerate(shape.rows):
        ri = t + rownum
        if row.kind == "I":
            type_i_seen += 1
            for i in range(1, r + 1):
                E[ri][gen_col(i)] = F.eps(type_i_seen, i)
                Ep[ri][gen_col(i)] = F.eps(type_i_seen, i)
        elif row.kind == "II":
            i, j = row.i, row.j
            for k in range(1, r + 1):
                entry = F.delta(i, j, k)
                alt = entry
                if k == j:
                    alt = alt - F.a(i) - F.nu(i)
                if k == i:
                    alt = alt - F.d(j)
                E[ri][gen_col(k)] = entry
                Ep[ri][gen_col(k)] = alt
        elif row.kind == "III":
            E[ri][gen_col(row.sigma)] = one
            Ep[ri][gen_col(row.sigma)] = one
        elif row.kind == "IV":
            g = row.sigma
            E[ri][gen_col(g)] = one
            Ep[ri][gen_col(g)] = one
            E[ri][place_col[row.place]] = F.x(g) + F.nu(g)
            Ep[ri][place_col[row.place]] = F.x(g) - F.a(g)
        elif row.kind == "V":
            g = row.sigma
            E[ri][gen_col(g)] = one
            Ep[ri][gen_col(g)] = one
            E[ri][y_col[row.place]] = F.x(g) + F.nu(g)
            Ep[ri][y_col[row.place]] = F.x(g) - F.a(g)

    D = [[E[t + i][t + j] for j in range(r + s)] for i in range(r + s)]
    return FormalMatrices(F, FreeModuleMatrix(D), FreeModuleMatrix(E), FreeModuleMatrix(Ep))


# ---------------------------------------------------------------------------
# Relation ideals.

@dataclass
class RelationQuadruple:
    """One adjoint quadruple of relation coefficients.

    ``origin`` is ("row", row_index) for TypeI/TypeII relations or
    ("pair", place, sigma, tau) for the local relations of e:b4 shape.
    """

    origin: tuple
    matrix: Mat2


@dataclass
class FormalIdeals:
    ring: FormalRing
    J: IdealSpec
    Jprime: IdealSpec
    I_R: IdealSpec
    quadruples: list[RelationQuadruple]


def relation_quadruples(F: FormalRing) -> list[RelationQuadruple]:
    shape = F.shape
    out: list[RelationQuadruple] = []
    type_i_seen = 0
    for rownum, row in enumerate(shape.rows):
        if row.kind == "I":
            type_i_seen += 1
            acc = Mat2.zero(F.ring, F.table)
            for i in range(1, shape.r + 1):
                acc = acc + F.eps(type_i_seen, i) * F.rho(i)
            out.append(RelationQuadruple(("row", rownum), acc))
        elif row.kind == "II":
            i, j = row.i, row.j
            acc = F.rho(i).add_scalar(F.nu(i)) * F.rho(j)
            for k in range(1, shape.r + 1):
                acc = acc - F.delta(i, j, k) * F.rho(k)
            out.append(RelationQuadruple(("row", rownum), acc))
    places = list(shape.p_places) + list(shape.sigma_places[1:])
    for v in places:
        bs = shape.b_set(v)
        for idx, sigma in enumerate(bs):
            for tau in bs[idx + 1 :]:
                A = F.b(sigma) * F.c(tau) - F.c_prime(tau) * F.b_prime(sigma)
                B = F.b(sigma) * F.b_prime(tau) - F.b(tau) * F.b_prime(sigma)
                C = F.c(sigma) * F.c_prime(tau) - F.c(tau) * F.c_prime(sigma)
                Dm = F.b(tau) * F.c(sigma) - F.c_prime(sigma) * F.b_prime(tau)
                out.append(RelationQuadruple(("pair", v, sigma, tau), Mat2(A, B, C, Dm)))
    return out


def build_ideals(shape: RibetShape, ring: CoefficientRing = QQ) -> FormalIdeals:
    """The relation ideal J (all four coefficients of every relation),
    its b-coefficient subideal J', and I_R = (a_i + nu_i, b_i, c_i, d_i)."""
    F = FormalRing(shape, ring)
    quads = relation_quadruples(F)
    j_gens: list[Polynomial] = []
    jp_gens: list[Polynomial] = []
    for q in quads:
        j_gens.extend(q.matrix.entries())
        jp_gens.append(q.matrix.b)
    ir_gens: list[Polynomial] = []
    for i in range(1, shape.r + 1):
        ir_gens.append(F.a(i) + F.nu(i))
        bi = F.b(i)
        if not bi.is_zero():
            ir_gens.append(bi)
        ir_gens.append(F.c(i))
        ir_gens.append(F.d(i))
    return FormalIdeals(
        F,
        J=IdealSpec(j_gens, DEGREVLEX),
        Jprime=IdealSpec(jp_gens, DEGREVLEX),
        I_R=IdealSpec(ir_gens, DEGREVLEX),
        quadruples=quads,
    )


# ---------------------------------------------------------------------------
# Identity checks.

def element_e(
    shape: RibetShape,
    ring: CoefficientRing = QQ,
    budget: Budget = DEFAULT_BUDGET,
    matrices: FormalMatrices | None = None,
) -> Polynomial:
    """e = det(E') - det(E); asserts membership in I_R.

    The I_R generators are linear with pairwise-coprime leading
    monomials, hence already a Groebner basis, so plain reduction is an
    exact membership test here.
    """
    mats = matrices or build_matrices(shape, ring)
    e = symbolic_det(mats.Eprime) - symbolic_det(mats.E)
    ideals = build_ideals(shape, ring)
    if not reduce_by(e, ideals.I_R.generators, DEGREVLEX, budget).is_zero():
        raise StructuralError("det(E') - det(E) escaped I_R")
    return e


def example_r2_target(F: FormalRing) -> Polynomial:
    """The closed-form combination the r=2 difference must reduce to:
    (t1 + nu1) delta211 + (t2 + nu2) delta122
    - (t12 + t1 nu2 + t2 nu1 + nu1 nu2)."""
    t1 = F.rho(1).trace()
    t2 = F.rho(2).trace()
    t12 = (F.rho(1) * F.rho(2)).trace()
    return (
        (t1 + F.nu(1)) * F.delta(2, 1, 1)
        + (t2 + F.nu(2)) * F.delta(1, 2, 2)
        - (t12 + t1 * F.nu(2) + t2 * F.nu(1) + F.nu(1) * F.nu(2))
    )


def check_example_r2(
    ring: CoefficientRing = QQ,
    omit_relation: int | None = None,
    budget: Budget = DEFAULT_BUDGET,
) -> bool:
    """The r=2 worked identity: det(E') - det(E) minus its closed form
    reduces to 0 modulo the eight TypeII coefficient relations.

    ``omit_relation`` drops one of the eight generators (0..7) to turn
    the check into its negative control.
    """
    shape = shape_r2_two_type2()
    mats = build_matrices(shape, ring)
    F = mats.ring
    ideals = build_ideals(shape, ring)
    gens = list(ideals.J.generators)
    assert len(gens) == 8
    if omit_relation is not None:
        gens = [g for k, g in enumerate(gens) if k != omit_relation]
    e = symbolic_det(mats.Eprime) - symbolic_det(mats.E)
    target = e - example_r2_target(F)
    return in_ideal(target, IdealSpec(gens, DEGREVLEX), budget)


def check_e_tau_invariance(
    shape: RibetShape,
    ring: CoefficientRing = QQ,
    budget: Budget = DEFAULT_BUDGET,
    drop_pair_generator: bool = False,
) -> bool:
    """tau_x(det E') - det E' lies in J'.R[x].

    ``drop_pair_generator`` removes the first local B(sigma, tau)
    generator from J' (negative control for shapes with places).
    """
    mats = build_matrices(shape, ring)
    ideals = build_ideals(shape, ring)
    jp = list(ideals.Jprime.generators)
    if drop_pair_generator:
        pair_bs = [q.matrix.b for q in ideals.quadruples if q.origin[0] == "pair"]
        if not pair_bs:
            raise StructuralError("shape has no local pair generator to drop")
        jp = [g for g in jp if g != pair_bs[0]]
    det_ep = symbolic_det(mats.Eprime)
    act = TauAction(mats.ring.table)
    diff = act.apply(det_ep) - det_ep.lift(act.table)
    if diff.is_zero():
        return True
    lifted = [g.lift(act.table) for g in jp]
    if not lifted:
        return False
    spec = IdealSpec(lifted, DEGREVLEX)
    if reduce_by(diff, spec.generators, DEGREVLEX, budget).is_zero():
        return True
    return in_ideal(diff, spec, budget)


def quotient_presentation_images(ideals: FormalIdeals) -> list[Polynomial]:
    """Images of the J generators under a_i -> -nu_i, b_i, c_i, d_i -> 0."""
    F = ideals.ring
    shape = F.shape
    mapping: dict[int, Polynomial] = {}
    for i in range(1, shape.r + 1):
        mapping[F.table.index(f"a{i}")] = -F.nu(i)
        for tag in ("b", "c", "d"):
            name = f"{tag}{i}"
            if name in F.table._index:
                mapping[F.table.index(name)] = F.zero()
    return [g.substitute(mapping) for g in ideals.J.generators]


def check_quotient_presentation(shape: RibetShape, ring: CoefficientRing = QQ) -> bool:
    """The substituted J generators must equal, up to sign and
    redundancy, the expected quotient-ideal generators:

        sum_i eps_i nu_i            per TypeI row
        sum_k delta_ijk nu_k        per TypeII row
        (x_sigma + nu_sigma) x_tau  per ordered pair sigma != tau in B_v
    """
    ideals = build_ideals(shape, ring)
    F = ideals.ring
    images = {_sign_canonical(p) for p in quotient_presentation_images(ideals) if not p.is_zero()}

    expected: set[Polynomial] = set()
    type_i_seen = 0
    for row in shape.rows:
        if row.kind == "I":
            type_i_seen += 1
            acc = F.zero()
            for i in range(1, shape.r + 1):
                acc = acc + F.eps(type_i_seen, i) * F.nu(i)
            expected.add(_sign_canonical(acc))
        elif row.kind == "II":
            acc = F.zero()
            for k in range(1, shape.r + 1):
                acc = acc + F.delta(row.i, row.j, k) * F.nu(k)
            expected.add(_sign_canonical(acc))
    for v in list(shape.p_places) + list(shape.sigma_places[1:]):
        bs = shape.b_set(v)
        for sigma, tau in iproduct(bs, bs):
            if sigma == tau:
                continue
            expected.add(_sign_canonical((F.x(sigma) + F.nu(sigma)) * F.x(tau)))
    return images == expected


def _sign_canonical(p: Polynomial) -> Polynomial:
    m, c = p.leading_term(DEGREVLEX)
    if (c < 0) if p.ring.kind != "GF" else False:
        return -p
    return p


# ---------------------------------------------------------------------------
# Trace/determinant generator set for the invariant subring.

def build_A_generators(
    shape: RibetShape,
    maxlen: int,
    ring: CoefficientRing = QQ,
    formal: FormalRing | None = None,
) -> list[tuple[str, Polynomial]]:
    """Labelled generators of the invariant subring: traces and
    determinants of words of length <= maxlen in the generic matrices
    (with deleted b-variables read as 0), the d_sigma for sigma in
    B_{v0}, and the shifted forms tr(word) - V(word) that land in I_R."""
    if maxlen < 1:
        raise StructuralError("maxlen must be at least 1")
    F = formal or FormalRing(shape, ring)
    out: list[tuple[str, Polynomial]] = []
    for length in range(1, maxlen + 1):
        for letters in iproduct(range(1, shape.r + 1), repeat=length):
            word = ".".join(f"X{i}" for i in letters)
            mat = None
            for i in letters:
                mat = F.rho(i) if mat is None else mat * F.rho(i)
            v = F.one()
            for i in letters:
                v = v * (-F.nu(i))
            out.append((f"tr({word})", mat.trace()))
            out.append((f"det({word})", mat.det()))
            out.append((f"tr({word})-V", mat.trace() - v))
    for sigma in shape.b_v0():
        out.append((f"d{sigma}", F.d(sigma)))
    return out

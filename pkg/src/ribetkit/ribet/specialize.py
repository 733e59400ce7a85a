"""Finite-field specializations of a relation shape.

The ambient group is modeled as a free group on the shape's generator
labels; compactness plays no role because every identity checked is
word-level.  An instance draws, deterministically from (seed, p):

  * a change-of-basis matrix M_v in GL_2(F_p) per place (identity at v0,
    so the images there are honestly lower triangular),
  * lower-triangular local data (eta, *, xi) for each dedicated
    generator attached to a place, conjugated through M_v,
  * uniform random GL_2 images for the free generators,
  * nonzero character values chi(g), psi(g) per generator, extended
    multiplicatively to words,

then solves exactly for the relation coefficients: eps rows from the
kernel of the 4 x r coefficient matrix, delta and alpha rows from
consistent 4 x r linear systems (lexicographically-first solution of
the row-reduced system, so instances replay bit-exactly).  Generation
rerolls until the shifted images span the full 2x2 matrix algebra, the
representation has no common eigenvector, and every D_v is nonzero.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..errors import GenerationFailure, StructuralError
from ..exactpoly import GF, CoefficientRing
from ..linalg import det, kernel_basis, mat_inv_2x2, rank, rref, solve
from .shapes import RibetShape

M2 = tuple  # (a, b, c, d) flattened 2x2 matrix over F_p

RETRY_BUDGET = 100


def _m2_mul(x: M2, y: M2, p: int) -> M2:
    return (
        (x[0] * y[0] + x[1] * y[2]) % p,
        (x[0] * y[1] + x[1] * y[3]) % p,
        (x[2] * y[0] + x[3] * y[2]) % p,
        (x[2] * y[1] + x[3] * y[3]) % p,
    )


def _m2_sub(x: M2, y: M2, p: int) -> M2:
    return tuple((a - b) % p for a, b in zip(x, y))


def _m2_scale(x: M2, c: int, p: int) -> M2:
    return tuple((c * a) % p for a in x)


def _m2_add_scalar(x: M2, c: int, p: int) -> M2:
    return ((x[0] + c) % p, x[1], x[2], (x[3] + c) % p)


_ID: M2 = (1, 0, 0, 1)


@dataclass
class PlaceData:
    M: M2  # change-of-basis matrix (A_v, B_v, C_v, D_v)
    eta: dict[int, int]  # generator -> eta_v value
    xi: dict[int, int]  # generator -> xi_v value


@dataclass
class SpecializedInstance:
    shape: RibetShape
    p: int
    seed: int
    rho_images: dict[int, M2]  # generator -> rho(g) in GL_2
    chi: dict[int, int]
    psi: dict[int, int]
    places: dict[str, PlaceData]
    eps: list[list[int]]  # one row per TypeI row
    delta: dict[tuple[int, int], list[int]]  # (i, j) -> delta_ij*
    alpha: dict[int, list[int]]  # sigma_v generator -> expansion coefficients
    E: list[list[int]] = field(default=None)
    Eprime: list[list[int]] = field(default=None)
    D: list[list[int]] = field(default=None)

    @property
    def ring(self) -> CoefficientRing:
        return GF(self.p)

    def rho_shift(self, g: int) -> M2:
        """rho_g = rho(g) - psi(g), the module generator."""
        return _m2_add_scalar(self.rho_images[g], -self.psi[g] % self.p, self.p)

    def nu(self, g: int) -> int:
        return (self.psi[g] - self.chi[g]) % self.p

    def x_val(self, g: int) -> int:
        """xi_v(g) - psi(g) for a place-dedicated generator."""
        v = self._place_of(g)
        return (self.places[v].xi[g] - self.psi[g]) % self.p

    def z_val(self, g: int) -> int:
        """xi_v(g) - chi(g)."""
        v = self._place_of(g)
        return (self.places[v].xi[g] - self.chi[g]) % self.p

    def _place_of(self, g: int) -> str:
        shape = self.shape
        for v in list(shape.p_places) + list(shape.sigma_places):
            if g in shape.b_set(v):
                return v
        raise StructuralError(f"generator {g} is not attached to a place")

    # -- word evaluation ------------------------------------------------
    def rho_word(self, word: list[int]) -> M2:
        acc = _ID
        for g in word:
            acc = _m2_mul(acc, self.rho_images[g], self.p)
        return acc

    def char_word(self, char: dict[int, int], word: list[int]) -> int:
        acc = 1
        for g in word:
            acc = (acc * char[g]) % self.p
        return acc

    def kappa(self, word: list[int]) -> M2:
        """psi(w)^{-1} (rho(w) - psi(w))."""
        p = self.p
        pw = self.char_word(self.psi, word)
        m = _m2_add_scalar(self.rho_word(word), -pw % p, p)
        return _m2_scale(m, pow(pw, p - 2, p), p)

    def to_record(self) -> dict:
        """Full serialization: seed, prime, and every drawn or solved
        value.  Generation is deterministic in (seed, p, shape), so a
        record plus the shape replays bit-exactly."""
        return {
            "shape": self.shape.name,
            "seed": self.seed,
            "p": self.p,
            "rho_images": {str(g): list(m) for g, m in sorted(self.rho_images.items())},
            "chi": {str(g): v for g, v in sorted(self.chi.items())},
            "psi": {str(g): v for g, v in sorted(self.psi.items())},
            "places": {
                v: {
                    "M": list(d.M),
                    "eta": {str(g): x for g, x in sorted(d.eta.items())},
                    "xi": {str(g): x for g, x in sorted(d.xi.items())},
                }
                for v, d in sorted(self.places.items())
            },
            "eps": [list(row) for row in self.eps],
            "delta": {f"{i},{j}": list(v) for (i, j), v in sorted(self.delta.items())},
            "alpha": {str(g): list(v) for g, v in sorted(self.alpha.items())},
            "E": [list(r) for r in self.E],
            "Eprime": [list(r) for r in self.Eprime],
            "D": [list(r) for r in self.D],
        }


# ---------------------------------------------------------------------------
# Generation.

def generate_specialization(shape: RibetShape, seed: int, p: int) -> SpecializedInstance:
    """Draw a consistent instance; deterministic in (seed, p).

    Raises GenerationFailure after the retry budget (the structural
    requirements are generic, so failures indicate a hostile shape, a
    tiny prime, or too few free generators).
    """
    if p < 3:
        raise StructuralError("need an odd prime")
    free = shape.free_generators()
    if len(free) < 4:
        raise StructuralError(
            f"shape {shape.name!r} has {len(free)} free generators; need >= 4 to span"
        )
    ring = GF(p)
    rng = random.Random(f"{seed}:{p}:{shape.name}")
    for _attempt in range(RETRY_BUDGET):
        inst = _try_generate(shape, seed, p, ring, rng)
        if inst is not None:
            return inst
    raise GenerationFailure(
        f"no consistent instance for shape {shape.name!r} after {RETRY_BUDGET} rerolls"
    )


def _rand_nonzero(rng, p):
    return rng.randrange(1, p)


def _rand_gl2(rng, p) -> M2:
    while True:
        m = tuple(rng.randrange(p) for _ in range(4))
        if (m[0] * m[3] - m[1] * m[2]) % p != 0:
            return m


def _try_generate(shape, seed, p, ring, rng) -> SpecializedInstance | None:
    places: dict[str, PlaceData] = {}
    rho_images: dict[int, M2] = {}
    chi = {g: _rand_nonzero(rng, p) for g in range(1, shape.r + 1)}
    psi = {g: _rand_nonzero(rng, p) for g in range(1, shape.r + 1)}

    all_places = list(shape.p_places) + list(shape.sigma_places)
    for v in all_places:
        if shape.sigma_places and v == shape.v0:
            M = _ID
        else:
            M = _rand_gl2(rng, p)
            if M[3] % p == 0:  # need D_v invertible for the kernel vector
                return None
        data = PlaceData(M=M, eta={}, xi={})
        Minv = _m2_inv(M, p)
        for g in shape.b_set(v):
            eta = _rand_nonzero(rng, p)
            xi = _rand_nonzero(rng, p)
            star = rng.randrange(p)
            lower = (eta, 0, star, xi)
            rho_images[g] = _m2_mul(_m2_mul(M, lower, p), Minv, p)
            data.eta[g] = eta
            data.xi[g] = xi
        places[v] = data

    for g in shape.free_generators():
        rho_images[g] = _rand_gl2(rng, p)

    inst = SpecializedInstance(
        shape=shape,
        p=p,
        seed=seed,
        rho_images=rho_images,
        chi=chi,
        psi=psi,
        places=places,
        eps=[],
        delta={},
        alpha={},
    )

    # Spanning: the shifted images must fill the 2x2 matrix algebra.
    coeff = _coefficient_matrix(inst)
    if rank(coeff, ring) != 4:
        return None
    if _has_common_eigenvector(inst):
        return None

    # TypeI rows: one kernel vector per row, distinct basis elements first.
    n_type_i = shape.type_i_count()
    if n_type_i:
        kern = kernel_basis(coeff, ring)
        if len(kern) < n_type_i:
            raise StructuralError(
                f"shape {shape.name!r}: {n_type_i} TypeI rows need kernel rank >= {n_type_i}"
            )
        inst.eps = [[int(x) % p for x in kern[k]] for k in range(n_type_i)]

    # TypeII rows: (rho_i + nu_i) rho_j = sum_k delta_ijk rho_k.
    for (i, j) in shape.type_ii_pairs():
        lhs = _m2_mul(
            _m2_add_scalar(inst.rho_shift(i), inst.nu(i), p), inst.rho_shift(j), p
        )
        sol = solve(coeff, list(lhs), ring)
        if sol is None:
            return None
        inst.delta[(i, j)] = [int(x) % p for x in sol]

    # alpha rows for the chosen sigma_v elements.
    for v in shape.p_places:
        g = shape.sigma_v[v]
        sol = solve(coeff, list(inst.rho_shift(g)), ring)
        if sol is None:
            return None
        inst.alpha[g] = [int(x) % p for x in sol]

    _assemble_matrices(inst)
    return inst


def _m2_inv(m: M2, p: int) -> M2:
    inv = mat_inv_2x2([[m[0], m[1]], [m[2], m[3]]], GF(p))
    return (inv[0][0], inv[0][1], inv[1][0], inv[1][1])


def _coefficient_matrix(inst: SpecializedInstance) -> list[list[int]]:
    """4 x r matrix whose columns are the flattened shifted images."""
    cols = [inst.rho_shift(g) for g in range(1, inst.shape.r + 1)]
    return [[cols[j][i] for j in range(len(cols))] for i in range(4)]


def _has_common_eigenvector(inst: SpecializedInstance) -> bool:
    """True iff all generator images share an eigenline (reducibility)."""
    p = inst.p
    mats = [inst.rho_images[g] for g in range(1, inst.shape.r + 1)]
    first = next((m for m in mats if not _is_scalar(m, p)), None)
    if first is None:
        return True
    lines = _eigenlines(first, p)
    for line in lines:
        if all(_fixes_line(m, line, p) for m in mats):
            return True
    return False


def _is_scalar(m: M2, p: int) -> bool:
    return m[1] % p == 0 and m[2] % p == 0 and (m[0] - m[3]) % p == 0


def _eigenlines(m: M2, p: int) -> list[tuple[int, int]]:
    """Eigenvector lines of a non-scalar 2x2 matrix over F_p."""
    a, b, c, d = (x % p for x in m)
    tr, dt = (a + d) % p, (a * d - b * c) % p
    disc = (tr * tr - 4 * dt) % p
    inv2 = pow(2, p - 2, p)
    lines: list[tuple[int, int]] = []
    for s in _sqrts(disc, p):
        lam = (tr + s) * inv2 % p
        aa, bb, cc, dd = (a - lam) % p, b, c, (d - lam) % p
        if aa or bb:
            v = (bb, (p - aa) % p)
        elif cc or dd:
            v = (dd, (p - cc) % p)
        else:  # m == lam * Id, excluded by the non-scalar precondition
            continue
        if not any(_same_line(v, w, p) for w in lines):
            lines.append(v)
    return lines


def _sqrts(a: int, p: int) -> list[int]:
    a %= p
    if a == 0:
        return [0]
    if pow(a, (p - 1) // 2, p) != 1:
        return []
    # Tonelli-Shanks is overkill at our prime sizes; p = 10007 default.
    for x in range(p):
        if x * x % p == a:
            return [x, (p - x) % p]
    return []


def _same_line(v, w, p) -> bool:
    return (v[0] * w[1] - v[1] * w[0]) % p == 0


def _fixes_line(m: M2, v: tuple[int, int], p: int) -> bool:
    w = ((m[0] * v[0] + m[1] * v[1]) % p, (m[2] * v[0] + m[3] * v[1]) % p)
    return _same_line(w, v, p)


# ---------------------------------------------------------------------------
# Matrix assembly (the numeric auxiliary matrices of the shape).

def _assemble_matrices(inst: SpecializedInstance):
    shape, p = inst.shape, inst.p
    t, r, s = shape.t, shape.r, shape.s
    n = t + r + s
    E = [[0] * n for _ in range(n)]
    Ep = [[0] * n for _ in range(n)]

    def gen_col(i: int) -> int:
        return t + i - 1

    y_col = {v: t + r + k for k, v in enumerate(shape.sigma_places[1:])}
    place_col = {v: k for k, v in enumerate(shape.p_places)}

    def a_entry(g: int) -> int:
        return inst.rho_shift(g)[0]

    for k, v in enumerate(shape.p_places):
        g = shape.sigma_v[v]
        E[k][k] = inst.z_val(g)
        Ep[k][k] = (inst.x_val(g) - a_entry(g)) % p
        for i in range(1, r + 1):
            E[k][gen_col(i)] = inst.alpha[g][i - 1]
            Ep[k][gen_col(i)] = inst.alpha[g][i - 1]

    type_i_seen = 0
    for rownum, row in enumerate(shape.rows):
        ri = t + rownum
        if row.kind == "I":
            eps = inst.eps[type_i_seen]
            type_i_seen += 1
            for i in range(1, r + 1):
                E[ri][gen_col(i)] = eps[i - 1]
                Ep[ri][gen_col(i)] = eps[i - 1]
        elif row.kind == "II":
            i, j = row.i, row.j
            delta = inst.delta[(i, j)]
            rho_i, rho_j = inst.rho_shift(i), inst.rho_shift(j)
            for k in range(1, r + 1):
                E[ri][gen_col(k)] = delta[k - 1]
                alt = delta[k - 1]
                if k == j:
                    alt = (alt - rho_i[0] - inst.nu(i)) % p
                if k == i:
                    alt = (alt - rho_j[3]) % p
                Ep[ri][gen_col(k)] = alt
        elif row.kind == "III":
            E[ri][gen_col(row.sigma)] = 1
            Ep[ri][gen_col(row.sigma)] = 1
        elif row.kind == "IV":
            g = row.sigma
            E[ri][gen_col(g)] = 1
            Ep[ri][gen_col(g)] = 1
            Ep[ri][place_col[row.place]] = (inst.x_val(g) - a_entry(g)) % p
        elif row.kind == "V":
            g = row.sigma
            E[ri][gen_col(g)] = 1
            Ep[ri][gen_col(g)] = 1
            E[ri][y_col[row.place]] = inst.nu(g)
            Ep[ri][y_col[row.place]] = (inst.x_val(g) - a_entry(g)) % p

    inst.E = E
    inst.Eprime = Ep
    inst.D = [[E[t + i][t + j] for j in range(r + s)] for i in range(r + s)]


def perturb_alpha(inst: SpecializedInstance) -> SpecializedInstance:
    """Negative control: corrupt one solved coefficient and reassemble."""
    import copy

    out = copy.deepcopy(inst)
    if out.alpha:
        g = sorted(out.alpha)[0]
        out.alpha[g][0] = (out.alpha[g][0] + 1) % out.p
    elif out.delta:
        key = sorted(out.delta)[0]
        out.delta[key][0] = (out.delta[key][0] + 1) % out.p
    elif out.eps:
        out.eps[0][0] = (out.eps[0][0] + 1) % out.p
    else:
        raise StructuralError("instance has no solved coefficients to perturb")
    _assemble_matrices(out)
    return out


# ---------------------------------------------------------------------------
# Checks.

@dataclass
class SpecializedChecks:
    detE_factorization: bool
    detEprime_zero: bool
    cocycle: bool
    J_vanishes: bool

    def all_pass(self) -> bool:
        return (
            self.detE_factorization
            and self.detEprime_zero
            and self.cocycle
            and self.J_vanishes
        )


def check_specialized(inst: SpecializedInstance, word_samples: int = 12) -> SpecializedChecks:
    ring = inst.ring
    p = inst.p
    shape = inst.shape

    det_e = det(inst.E, ring)
    det_d = det(inst.D, ring)
    z_prod = 1
    for v in shape.p_places:
        z_prod = (z_prod * inst.z_val(shape.sigma_v[v])) % p
    factorization = det_e == (z_prod * det_d) % p

    eprime_zero = det(inst.Eprime, ring) == 0

    cocycle = _check_cocycle(inst, word_samples)
    j_vanish = _check_j_vanishes(inst)
    return SpecializedChecks(factorization, eprime_zero, cocycle, j_vanish)


def _span_basis(vectors: list[M2], p: int) -> list[M2]:
    """Row-reduce flattened matrices; return an F_p basis of their span."""
    if not vectors:
        return []
    R, pivots = rref([list(v) for v in vectors], GF(p))
    return [tuple(R[i]) for i in range(len(pivots))]


def _delta_span(inst: SpecializedInstance, char: dict[int, int]) -> list[M2]:
    """Exact basis of the span of rho(t) - char(t) over the whole group
    algebra.

    Seed with the generator shifts and saturate under right
    multiplication by the generator images and their inverses: the
    identity rho(wg) - char(wg) = (rho(w) - char(w)) rho(g) +
    char(w)(rho(g) - char(g)) shows the stable span contains the shift
    of every group element."""
    p = inst.p
    mults = []
    for g in range(1, inst.shape.r + 1):
        m = inst.rho_images[g]
        mults.append(m)
        mults.append(_m2_inv(m, p))
    basis = _span_basis(
        [
            _m2_add_scalar(inst.rho_images[g], -char[g] % p, p)
            for g in range(1, inst.shape.r + 1)
        ],
        p,
    )
    while len(basis) < 4:
        extended = list(basis)
        for v in basis:
            for m in mults:
                extended.append(_m2_mul(v, m, p))
        new_basis = _span_basis(extended, p)
        if len(new_basis) == len(basis):
            break
        basis = new_basis
    return basis


def _check_cocycle(inst: SpecializedInstance, word_samples: int) -> bool:
    """kappa(g1 g2) - kappa(g1) - chi psi^{-1}(g1) kappa(g2) must lie in
    the span of Delta_chi . Delta_psi products."""
    p = inst.p
    ring = inst.ring
    basis_chi = _delta_span(inst, inst.chi)
    basis_psi = _delta_span(inst, inst.psi)
    products = [
        _m2_mul(x, y, p) for x in basis_chi for y in basis_psi
    ]
    prod_basis = _span_basis(products, p)
    rng = random.Random(f"{inst.seed}:cocycle")
    r = inst.shape.r
    for _ in range(word_samples):
        w1 = [rng.randrange(1, r + 1) for _ in range(rng.randrange(1, 4))]
        w2 = [rng.randrange(1, r + 1) for _ in range(rng.randrange(1, 4))]
        k12 = inst.kappa(w1 + w2)
        k1 = inst.kappa(w1)
        k2 = inst.kappa(w2)
        factor = (
            inst.char_word(inst.chi, w1)
            * pow(inst.char_word(inst.psi, w1), p - 2, p)
        ) % p
        defect = _m2_sub(_m2_sub(k12, k1, p), _m2_scale(k2, factor, p), p)
        if any(defect):
            stacked = [list(v) for v in prod_basis] + [list(defect)]
            if rank(stacked, ring) != len(prod_basis):
                return False
    return True


def _check_j_vanishes(inst: SpecializedInstance) -> bool:
    """Every relation-ideal generator evaluates to zero at the instance."""
    from .formal import build_ideals

    shape = inst.shape
    ring = GF(inst.p)
    ideals = build_ideals(shape, ring)
    point = _instance_point(inst, ideals.ring.table)
    for g in ideals.J.generators:
        if g.evaluate(point) != 0:
            return False
    return True


def _instance_point(inst: SpecializedInstance, table) -> dict[int, int]:
    """Map formal-ring variables to the instance's field values."""
    shape, p = inst.shape, inst.p
    point: dict[int, int] = {}
    type_i_seen = 0
    for name in table.names:
        idx = table.index(name)
        if name.startswith("nu"):
            point[idx] = inst.nu(int(name[2:]))
        elif name.startswith("eps"):
            block, i = name[3:].split("_")
            point[idx] = inst.eps[int(block) - 1][int(i) - 1]
        elif name.startswith("delta"):
            i, j, k = name[5:].split("_")
            point[idx] = inst.delta[(int(i), int(j))][int(k) - 1]
        elif name.startswith("x"):
            point[idx] = inst.x_val(int(name[1:]))
        elif name[0] in "abcd":
            g = int(name[1:])
            comp = "abcd".index(name[0])
            point[idx] = inst.rho_shift(g)[comp]
        else:
            raise StructuralError(f"unexpected formal variable {name!r}")
    return point

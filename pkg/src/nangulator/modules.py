"""Finite-dimensional right modules, morphism spaces, tensor functors,
pullbacks and isomorphism testing.

Bimodules are right modules over the enveloping algebra.  Elements are row
vectors; a morphism matrix F sends x to x @ F, so composition "f then g" is
the matrix product F @ G.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .algebra import Automorphism, BasicAlgebra
from .fields import (
    ExactMatrix,
    LinearAlgebraError,
    _empty,
    block_diag,
    kernel_basis,
    reduce_rows_mod,
    row_space,
    stack_rows,
)


class UndecidedIsomorphismError(RuntimeError):
    """The isomorphism search exhausted its deterministic resource bounds."""


def search_invertible(field, n_params: int, realize, is_hit, degree: int,
                      draws: int = 1000, seed: int = 0xC0FFEE,
                      exhaustive_bound: int = 1 << 16):
    """Find a coefficient vector whose realization passes ``is_hit``
    (an invertibility test), searching unit vectors, seeded random
    combinations, then an exhaustive grid.

    The grid pass is a complete decision procedure: the failure locus is the
    vanishing of a determinant of degree at most ``degree`` in each
    coefficient, so a grid with more than ``degree`` values per coordinate
    witnesses non-existence exactly (for prime fields the grid is the whole
    field).  Raises when the exhaustive pass would exceed the bound.
    """
    from itertools import product as _product

    p = field.characteristic
    for i in range(n_params):
        coeffs = [0] * n_params
        coeffs[i] = 1
        cand = realize(coeffs)
        if is_hit(cand):
            return cand
    rng = random.Random(seed)
    for _ in range(draws):
        if p:
            coeffs = [rng.randrange(p) for _ in range(n_params)]
        else:
            coeffs = [Fraction(rng.randrange(-6, 7)) for _ in range(n_params)]
        cand = realize(coeffs)
        if is_hit(cand):
            return cand
    grid = range(p) if p else range(degree + 1)
    if len(grid) ** n_params <= exhaustive_bound:
        for coeffs in _product(grid, repeat=n_params):
            cand = realize(list(coeffs))
            if is_hit(cand):
                return cand
        return None
    raise UndecidedIsomorphismError(
        f"invertible-element search undecided: {n_params} parameters"
    )


@dataclass
class Module:
    """A right module: one exact action matrix per algebra basis element."""

    algebra: BasicAlgebra
    dim: int
    action: list[ExactMatrix]

    def digest(self) -> bytes:
        cached = getattr(self, "_digest", None)
        if cached is None:
            import hashlib

            h = hashlib.blake2b(digest_size=16)
            h.update(id(self.algebra).to_bytes(8, "little", signed=False))
            h.update(self.dim.to_bytes(4, "little"))
            for m in self.action:
                h.update(m.digest())
            cached = self._digest = h.digest()
        return cached

    def act_element(self, x: ExactMatrix) -> ExactMatrix:
        """Action matrix of an arbitrary algebra element (coordinate row)."""
        acc = _empty(self.algebra.field, self.dim, self.dim)
        for j in range(self.algebra.dim):
            c = x.a[0, j]
            if c != 0:
                acc = acc + c * self.action[j].a
        return ExactMatrix(self.algebra.field, acc)

    def idempotent_image(self, pos: int) -> ExactMatrix:
        """Canonical basis rows of M e for the idempotent at position pos."""
        e = self.algebra.idempotents[pos]
        return row_space(self.action[e])

    def verify_axioms(self, exhaustive: bool = True) -> None:
        """Module axioms: unit acts as identity, action respects products."""
        A = self.algebra
        uni = self.act_element(A.unit())
        if uni != ExactMatrix.identity(A.field, self.dim):
            raise LinearAlgebraError("unit does not act as identity")
        pairs = (
            [(i, j) for i in range(A.dim) for j in range(A.dim)]
            if exhaustive
            else [(i, j) for i in A.generators for j in A.generators]
        )
        for i, j in pairs:
            lhs = self.action[i] @ self.action[j]
            rhs = self.act_element(A.right_mult[j].row(i))
            if lhs != rhs:
                raise LinearAlgebraError(f"action violates product at ({i}, {j})")

    def is_zero(self) -> bool:
        return self.dim == 0


@dataclass
class ModuleMorphism:
    source: Module
    target: Module
    matrix: ExactMatrix

    def then(self, other: "ModuleMorphism") -> "ModuleMorphism":
        assert self.target.dim == other.source.dim
        return ModuleMorphism(self.source, other.target, self.matrix @ other.matrix)

    def __add__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        return ModuleMorphism(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other: "ModuleMorphism") -> "ModuleMorphism":
        return ModuleMorphism(self.source, self.target, self.matrix - other.matrix)

    def __neg__(self) -> "ModuleMorphism":
        return ModuleMorphism(self.source, self.target, -self.matrix)

    def scale(self, c) -> "ModuleMorphism":
        return ModuleMorphism(self.source, self.target, self.matrix.scale(c))

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def verify(self, exhaustive: bool = False) -> None:
        A = self.source.algebra
        idx = range(A.dim) if exhaustive else A.generators
        for g in idx:
            lhs = self.source.action[g] @ self.matrix
            rhs = self.matrix @ self.target.action[g]
            if lhs != rhs:
                raise LinearAlgebraError(f"morphism does not intertwine element {g}")

    def rank(self) -> int:
        return self.matrix.rank()

    def is_mono(self) -> bool:
        return self.rank() == self.source.dim

    def is_epi(self) -> bool:
        return self.rank() == self.target.dim

    def is_iso(self) -> bool:
        return self.source.dim == self.target.dim and self.matrix.is_invertible()


def identity_morphism(m: Module) -> ModuleMorphism:
    return ModuleMorphism(m, m, ExactMatrix.identity(m.algebra.field, m.dim))


def zero_morphism(m: Module, n: Module) -> ModuleMorphism:
    return ModuleMorphism(m, n, ExactMatrix.zeros(m.algebra.field, m.dim, n.dim))


def zero_module(algebra: BasicAlgebra) -> Module:
    return Module(algebra, 0,
                  [ExactMatrix.zeros(algebra.field, 0, 0)] * algebra.dim)


# -- bimodule action helpers ---------------------------------------------------


def bim_right_action(b: Module, algebra: BasicAlgebra, g: int) -> ExactMatrix:
    """Action of (1 (x) b_g) on a bimodule over the enveloping algebra."""
    acc = _empty(algebra.field, b.dim, b.dim)
    for i in algebra.idempotents:
        acc = acc + b.action[algebra.envelope_index(i, g)].a
    return ExactMatrix(algebra.field, acc)


def bim_left_action(b: Module, algebra: BasicAlgebra, g: int) -> ExactMatrix:
    """Action of (b_g (x) 1) on a bimodule: left multiplication by b_g."""
    acc = _empty(algebra.field, b.dim, b.dim)
    for j in algebra.idempotents:
        acc = acc + b.action[algebra.envelope_index(g, j)].a
    return ExactMatrix(algebra.field, acc)


def right_action_over(m: Module, algebra: BasicAlgebra, g: int) -> ExactMatrix:
    """Right action of the base-algebra element g, whether m is a plain
    module over ``algebra`` or a bimodule over its enveloping algebra."""
    if m.algebra is algebra:
        return m.action[g]
    return bim_right_action(m, algebra, g)


def right_idempotent_rows(m: Module, algebra: BasicAlgebra, pos: int) -> ExactMatrix:
    e = algebra.idempotents[pos]
    return row_space(right_action_over(m, algebra, e))


# -- constructions -----------------------------------------------------------


def projective_module(algebra: BasicAlgebra, pos: int) -> Module:
    """The indecomposable projective e A for the idempotent at position pos.

    Its basis is the subset of algebra basis elements with that left unit,
    so action matrices are restrictions of right multiplication.
    """
    rows = [k for k in range(algebra.dim) if algebra.left_unit_of[k] == pos]
    sel = np.array(rows, dtype=int)
    action = []
    for j in range(algebra.dim):
        a = algebra.right_mult[j].a
        action.append(ExactMatrix(algebra.field, a[np.ix_(sel, sel)].copy()))
    m = Module(algebra, len(rows), action)
    m.proj_rows = rows
    m.proj_vertex = pos
    return m


def regular_module(algebra: BasicAlgebra) -> Module:
    """The algebra as a right module over itself."""
    return Module(algebra, algebra.dim, list(algebra.right_mult))


def standard_projective(algebra: BasicAlgebra, copies: list[int]):
    """Direct sum of indecomposable projectives in the given vertex order.

    Returns (P, parts, inclusions, projections); P.proj_copies records the
    decomposition, which downstream solvers use to parametrize maps out of P.
    """
    parts = [projective_module(algebra, pos) for pos in copies]
    total, incs, projs = direct_sum(algebra, parts)
    total.proj_copies = list(copies)
    total.proj_parts = parts
    total.proj_incs = incs
    total.proj_projs = projs
    return total, parts, incs, projs


def twisted_bimodule(algebra: BasicAlgebra, sigma: Automorphism) -> Module:
    """The bimodule that is regular on the left and right-twisted by sigma,
    as a right module over the enveloping algebra: the basis pair (u, v)
    acts by x -> u x sigma(v)."""
    env = algebra.enveloping()
    d = algebra.dim
    sig_right = []
    for j in range(d):
        row = sigma.matrix.a[j]
        acc = _empty(algebra.field, d, d)
        for t in range(d):
            if row[t] != 0:
                acc = acc + row[t] * algebra.right_mult[t].a
        sig_right.append(acc)
    action = []
    for (i, j) in env.envelope_pairs:
        action.append(ExactMatrix(algebra.field,
                                  algebra.left_mult(i).a @ sig_right[j]))
    return Module(env, d, action)


def right_twist(m: Module, tau: Automorphism) -> Module:
    """Precompose the right action with tau: the substitution model of
    m (x)_A (regular bimodule right-twisted by tau).  Morphism matrices are
    unchanged under this identification, so the construction is a strict,
    strictly invertible functor."""
    A = tau.algebra
    alg = m.algebra
    if alg is A:
        out = []
        for i in range(A.dim):
            row = tau.matrix.a[i]
            acc = _empty(A.field, m.dim, m.dim)
            for t in range(A.dim):
                if row[t] != 0:
                    acc = acc + row[t] * m.action[t].a
            out.append(ExactMatrix(A.field, acc))
        return Module(alg, m.dim, out)
    assert alg is A.enveloping()
    d = A.dim
    out = []
    for (i, j) in alg.envelope_pairs:
        row = tau.matrix.a[j]
        acc = _empty(A.field, m.dim, m.dim)
        for t in range(d):
            if row[t] != 0:
                acc = acc + row[t] * m.action[A.envelope_index(i, t)].a
        out.append(ExactMatrix(A.field, acc))
    return Module(alg, m.dim, out)


def left_twist(m: Module, tau: Automorphism) -> Module:
    """Substitution model of the tau-twisted regular bimodule tensored on the
    left of a bimodule m: the pair (u, v) acts as the original
    (tau^{-1}(u), v).  Morphism matrices are unchanged."""
    A = tau.algebra
    env = A.enveloping()
    assert m.algebra is env
    inv = tau.inverse().matrix
    d = A.dim
    out = []
    for (i, j) in env.envelope_pairs:
        row = inv.a[i]
        acc = _empty(A.field, m.dim, m.dim)
        for t in range(d):
            if row[t] != 0:
                acc = acc + row[t] * m.action[A.envelope_index(t, j)].a
        out.append(ExactMatrix(A.field, acc))
    return Module(env, m.dim, out)


def restrict_to_left_factor(m: Module, algebra: BasicAlgebra) -> Module:
    """Restrict a bimodule to its left action, as a right A^op-module."""
    env = algebra.enveloping()
    assert m.algebra is env
    action = [bim_left_action(m, algebra, i) for i in range(algebra.dim)]
    return Module(algebra.opposite(), m.dim, action)


def opposite_regular(algebra: BasicAlgebra) -> Module:
    """A as a right module over A^op (that is, A as a left module)."""
    op = algebra.opposite()
    return Module(op, algebra.dim, list(op.right_mult))


def dual_module(m: Module) -> Module:
    """k-linear dual, a right module over the opposite algebra (transposes)."""
    op = m.algebra.opposite()
    return Module(op, m.dim, [mat.T for mat in m.action])


def submodule(m: Module, rows: ExactMatrix):
    """Canonical submodule on the row space of ``rows`` (must be stable).

    Returns (S, include: S -> M).
    """
    basis = row_space(rows)
    if basis.rows == 0:
        s = zero_module(m.algebra)
        return s, ModuleMorphism(s, m, ExactMatrix.zeros(m.algebra.field, 0, m.dim))
    piv = basis.rref()[1]
    action = []
    for g in range(m.algebra.dim):
        img = basis @ m.action[g]
        action.append(img.take_cols(piv))
    s = Module(m.algebra, basis.rows, action)
    return s, ModuleMorphism(s, m, basis)


def quotient(m: Module, rows: ExactMatrix):
    """Canonical quotient of M by the row space of ``rows`` (must be stable).

    Returns (Q, project: M -> Q, lift: Q -> M coordinate section).
    """
    space = row_space(rows)
    fld = m.algebra.field
    eye = ExactMatrix.identity(fld, m.dim)
    if space.rows == 0:
        q = Module(m.algebra, m.dim, list(m.action))
        return q, ModuleMorphism(m, q, eye), eye
    piv = set(space.rref()[1])
    keep = [j for j in range(m.dim) if j not in piv]
    reduced = reduce_rows_mod(space, eye)
    proj = reduced.take_cols(keep)
    lift = eye.take_rows(keep)
    action = [lift @ m.action[g] @ proj for g in range(m.algebra.dim)]
    q = Module(m.algebra, len(keep), action)
    return q, ModuleMorphism(m, q, proj), lift


def kernel_of(f: ModuleMorphism):
    return submodule(f.source, kernel_basis(f.matrix))


def image_of(f: ModuleMorphism):
    return submodule(f.target, f.matrix)


def cokernel_of(f: ModuleMorphism):
    q, proj, _ = quotient(f.target, f.matrix)
    return q, proj


def direct_sum(algebra: BasicAlgebra, parts: list[Module]):
    """Direct sum with canonical inclusions and projections."""
    fld = algebra.field
    total = sum(p.dim for p in parts)
    action = [block_diag(fld, [p.action[g] for p in parts])
              for g in range(algebra.dim)]
    m = Module(algebra, total, action)
    incs, projs = [], []
    off = 0
    one = 1 if fld.characteristic else Fraction(1)
    for p in parts:
        inc = _empty(fld, p.dim, total)
        prj = _empty(fld, total, p.dim)
        for i in range(p.dim):
            inc[i, off + i] = one
            prj[off + i, i] = one
        incs.append(ModuleMorphism(p, m, ExactMatrix(fld, inc)))
        projs.append(ModuleMorphism(m, p, ExactMatrix(fld, prj)))
        off += p.dim
    return m, incs, projs


def pullback(f: ModuleMorphism, g: ModuleMorphism):
    """Fibre product {(x, y) : f(x) = g(y)} with its two projections."""
    assert f.target.dim == g.target.dim
    algebra = f.source.algebra
    fld = algebra.field
    stacked = stack_rows(fld, [f.matrix, -g.matrix])
    k = kernel_basis(stacked)  # rows are (x | y) pairs
    sum_mod, _, projs = direct_sum(algebra, [f.source, g.source])
    p, inc = submodule(sum_mod, k)
    p.ambient_rows = inc.matrix
    p_x = ModuleMorphism(p, f.source, inc.matrix @ projs[0].matrix)
    p_y = ModuleMorphism(p, g.source, inc.matrix @ projs[1].matrix)
    return p, p_x, p_y


# -- hom spaces ---------------------------------------------------------------


def hom_space(m: Module, n: Module) -> list[ModuleMorphism]:
    """Deterministic basis of Hom(M, N)."""
    if m.dim == 0 or n.dim == 0:
        return []
    if hasattr(m, "proj_rows"):
        return _hom_from_indecomposable_projective(m, n)
    if hasattr(m, "proj_parts"):
        out = []
        for t, part in enumerate(m.proj_parts):
            for h in hom_space(part, n):
                out.append(ModuleMorphism(m, n, m.proj_projs[t].matrix @ h.matrix))
        return out
    return _hom_generic(m, n)


def _hom_generic(m: Module, n: Module) -> list[ModuleMorphism]:
    A = m.algebra
    fld = A.field
    eye_m = _eye_arr(fld, m.dim)
    eye_n = _eye_arr(fld, n.dim)
    blocks = []
    for g in A.generators:
        a = m.action[g].a
        b = n.action[g].a
        blocks.append(np.kron(a, eye_n) - np.kron(eye_m, b.T))
    big = ExactMatrix(fld, np.concatenate(blocks, axis=0))
    null = big.T.left_kernel()
    out = []
    for i in range(null.rows):
        mat = ExactMatrix(fld, null.a[i].reshape(m.dim, n.dim).copy())
        out.append(ModuleMorphism(m, n, mat))
    return out


def _hom_from_indecomposable_projective(p: Module, n: Module):
    """Hom(eA, N) = N e: generator images extend freely along the basis."""
    A = p.algebra
    pos = p.proj_vertex
    target_rows = n.idempotent_image(pos)
    out = []
    for r in range(target_rows.rows):
        y = target_rows.take_rows([r])
        mat = _empty(A.field, p.dim, n.dim)
        for local_i, k in enumerate(p.proj_rows):
            img = y @ n.action[k]
            mat[local_i] = img.a[0]
        out.append(ModuleMorphism(p, n, ExactMatrix(A.field, mat)))
    return out


def random_hom(rng: random.Random, homs: list[ModuleMorphism],
               m: Module, n: Module) -> ModuleMorphism:
    """Seeded random element of a hom space."""
    if not homs:
        return zero_morphism(m, n)
    fld = m.algebra.field
    p = fld.characteristic
    out = None
    for h in homs:
        c = rng.randrange(p) if p else Fraction(rng.randrange(-4, 5))
        term = h.scale(c)
        out = term if out is None else out + term
    return out


def _eye_arr(fld, n):
    e = np.eye(n, dtype=np.int64)
    if not fld.characteristic:
        e = e.astype(object)
        for i in range(n):
            e[i, i] = Fraction(1)
        e[e == 0] = Fraction(0)
    return e


# -- isomorphism testing -------------------------------------------------------


def _fingerprint(m: Module) -> tuple:
    """Iso-invariant fingerprint: per-idempotent dims, radical series,
    socle data and top multiplicities."""
    A = m.algebra
    fld = A.field
    per_vertex = tuple(m.idempotent_image(pos).rows
                       for pos in range(len(A.idempotents)))
    series = []
    cur = row_space(stack_rows(fld, [m.action[j] for j in A.radical])) \
        if A.radical else ExactMatrix.zeros(fld, 0, m.dim)
    while cur.rows:
        series.append(cur.rows)
        nxt = row_space(stack_rows(fld, [cur @ m.action[j] for j in A.radical]))
        if nxt.rows == cur.rows:
            break
        cur = nxt
    soc_stack = [m.action[g].a for g in A.radical_right_generators]
    if soc_stack:
        soc = ExactMatrix(fld, np.concatenate(soc_stack, axis=1)).left_kernel()
    else:
        soc = ExactMatrix.identity(fld, m.dim)
    soc_per_vertex = tuple(
        row_space(soc @ m.action[A.idempotents[pos]]).rows
        for pos in range(len(A.idempotents))
    )
    top = _top_rows(m)
    top_per_vertex = tuple(
        row_space(top @ m.action[A.idempotents[pos]]).rows if top.rows else 0
        for pos in range(len(A.idempotents))
    )
    return (m.dim, per_vertex, tuple(series), soc.rows, soc_per_vertex,
            top_per_vertex)


def _top_rows(m: Module) -> ExactMatrix:
    """Rows spanning a complement of M J inside M."""
    A = m.algebra
    fld = A.field
    if not A.radical:
        return ExactMatrix.identity(fld, m.dim)
    rad = row_space(stack_rows(fld, [m.action[j] for j in A.radical]))
    red = reduce_rows_mod(rad, ExactMatrix.identity(fld, m.dim))
    return row_space(red)


def iso_test(m: Module, n: Module, draws: int = 1000,
             exhaustive_bound: int = 1 << 16, seed: int = 0xC0FFEE):
    """An invertible intertwiner M -> N, or None when provably none exists.

    Strategy: cheap rejects, the hom basis itself, seeded random combinations,
    then fingerprint comparison backed by exhaustive search on small spaces.
    """
    if m.dim != n.dim:
        return None
    if m.dim == 0:
        return identity_morphism(m)
    homs = hom_space(m, n)
    if not homs:
        return None
    if len(homs) != len(hom_space(n, m)):
        return None
    fld = m.algebra.field

    def realize(coeffs):
        acc = None
        for c, h in zip(coeffs, homs):
            if c:
                term = h.scale(c)
                acc = term if acc is None else acc + term
        return acc

    def is_hit(cand):
        return cand is not None and cand.matrix.is_invertible()

    for h in homs:
        if h.matrix.is_invertible():
            return h
    rng = random.Random(seed)
    for _ in range(draws):
        cand = random_hom(rng, homs, m, n)
        if cand.matrix.is_invertible():
            return cand
    if _fingerprint(m) != _fingerprint(n):
        return None
    return search_invertible(fld, len(homs), realize, is_hit, degree=m.dim,
                             draws=0, seed=seed,
                             exhaustive_bound=exhaustive_bound)


# -- tensor functor ------------------------------------------------------------


@dataclass
class TensorData:
    """M (x)_A B in idempotent-block coordinates: the quotient of
    (+)_v (M e_v (x) e_v B) by the arrow bilinearity rows."""

    module: Module
    base: BasicAlgebra
    m_rows: list[ExactMatrix]
    b_rows: list[ExactMatrix]
    offsets: list[int]
    project: ExactMatrix
    lift: ExactMatrix
    source: Module
    bimodule: Module


def tensor_module(m: Module, b: Module, algebra: BasicAlgebra) -> TensorData:
    """M (x)_A B for a right A-module (or bimodule) M and an A-bimodule B.

    When M is a bimodule the result carries the bimodule structure (left
    action from M, right action from B).
    """
    fld = algebra.field
    n_vert = len(algebra.idempotents)
    m_is_bim = m.algebra is not algebra
    m_rows = [right_idempotent_rows(m, algebra, pos) for pos in range(n_vert)]
    b_rows = [row_space(bim_left_action(b, algebra, algebra.idempotents[pos]))
              for pos in range(n_vert)]
    offsets = [0]
    for v in range(n_vert):
        offsets.append(offsets[-1] + m_rows[v].rows * b_rows[v].rows)
    big_dim = offsets[-1]

    arrows = [g for g in algebra.generators if g not in algebra.idempotents]
    rel_rows = []
    for g in arrows:
        u = algebra.left_unit_of[g]
        w = algebra.right_unit_of[g]
        if m_rows[u].rows == 0 or b_rows[w].rows == 0:
            continue
        mg = m_rows[u] @ right_action_over(m, algebra, g)
        mg_c = _coords_in(m_rows[w], mg)
        gy = b_rows[w] @ bim_left_action(b, algebra, g)
        gy_c = _coords_in(b_rows[u], gy)
        for im in range(m_rows[u].rows):
            for ib in range(b_rows[w].rows):
                vec = _empty(fld, 1, big_dim)
                if m_rows[w].rows and b_rows[w].rows:
                    base_w = offsets[w]
                    unit = _unit_vec(fld, b_rows[w].rows, ib)
                    seg = np.outer(mg_c.a[im], unit).reshape(-1)
                    vec[0, base_w: base_w + seg.shape[0]] = seg
                if m_rows[u].rows and b_rows[u].rows:
                    base_u = offsets[u]
                    unit = _unit_vec(fld, m_rows[u].rows, im)
                    seg = np.outer(unit, gy_c.a[ib]).reshape(-1)
                    vec[0, base_u: base_u + seg.shape[0]] = (
                        vec[0, base_u: base_u + seg.shape[0]] - seg
                    )
                rel_rows.append(ExactMatrix(fld, vec))

    out_algebra = m.algebra if m_is_bim else algebra

    def big_matrix(per_vertex_blocks) -> ExactMatrix:
        big = _empty(fld, big_dim, big_dim)
        for v, blk in per_vertex_blocks:
            base = offsets[v]
            big[base: base + blk.shape[0], base: base + blk.shape[1]] = blk
        return ExactMatrix(fld, big)

    big_action = []
    if m_is_bim:
        env = algebra.enveloping()
        for (i, j) in env.envelope_pairs:
            blocks = []
            for v in range(n_vert):
                rm, rb = m_rows[v].rows, b_rows[v].rows
                if rm == 0 or rb == 0:
                    continue
                lm = m_rows[v] @ bim_left_action(m, algebra, i)
                lm_c = _coords_in(m_rows[v], lm)
                br = b_rows[v] @ bim_right_action(b, algebra, j)
                br_c = _coords_in(b_rows[v], br)
                blocks.append((v, np.kron(lm_c.a, br_c.a)))
            big_action.append(big_matrix(blocks))
    else:
        for g in range(algebra.dim):
            blocks = []
            for v in range(n_vert):
                rm, rb = m_rows[v].rows, b_rows[v].rows
                if rm == 0 or rb == 0:
                    continue
                br = b_rows[v] @ bim_right_action(b, algebra, g)
                br_c = _coords_in(b_rows[v], br)
                blocks.append((v, np.kron(_eye_arr(fld, rm), br_c.a)))
            big_action.append(big_matrix(blocks))
    big_module = Module(out_algebra, big_dim, big_action)

    rel = stack_rows(fld, rel_rows) if rel_rows else ExactMatrix.zeros(fld, 0, big_dim)
    q, proj, lift = quotient(big_module, rel)
    return TensorData(q, algebra, m_rows, b_rows, offsets, proj.matrix, lift, m, b)


def _unit_vec(fld, n, i):
    v = np.zeros(n, dtype=np.int64)
    if not fld.characteristic:
        v = v.astype(object)
        v[...] = Fraction(0)
        v[i] = Fraction(1)
    else:
        v[i] = 1
    return v


def _coords_in(basis: ExactMatrix, vecs: ExactMatrix) -> ExactMatrix:
    """Coordinates of rows of vecs in an RREF basis (rows must lie in it)."""
    if basis.rows == 0:
        if not vecs.is_zero():
            raise LinearAlgebraError("vectors not inside the designated space")
        return ExactMatrix.zeros(basis.field, vecs.rows, 0)
    piv = basis.rref()[1]
    coords = vecs.take_cols(piv)
    if (coords @ basis) != vecs:
        raise LinearAlgebraError("vectors not inside the designated space")
    return coords


def tensor_morphism_left(td_src: TensorData, td_dst: TensorData,
                         f: ModuleMorphism) -> ModuleMorphism:
    """Transport f: M -> M' to f (x) id_B between tensor quotients."""
    algebra = td_src.base
    fld = algebra.field
    big = _empty(fld, td_src.offsets[-1], td_dst.offsets[-1])
    for v in range(len(algebra.idempotents)):
        rm, rb = td_src.m_rows[v].rows, td_src.b_rows[v].rows
        if rm == 0 or rb == 0:
            continue
        fv = td_src.m_rows[v] @ f.matrix
        fv_c = _coords_in(td_dst.m_rows[v], fv)
        bv_c = _coords_in(td_dst.b_rows[v], td_src.b_rows[v])
        block = np.kron(fv_c.a, bv_c.a)
        big[td_src.offsets[v]: td_src.offsets[v] + rm * rb,
            td_dst.offsets[v]: td_dst.offsets[v] + block.shape[1]] = block
    mat = td_src.lift @ ExactMatrix(fld, big) @ td_dst.project
    return ModuleMorphism(td_src.module, td_dst.module, mat)


def tensor_morphism_right(td_src: TensorData, td_dst: TensorData,
                          d: ModuleMorphism) -> ModuleMorphism:
    """Transport a bimodule map d: B -> B' to id_M (x) d."""
    algebra = td_src.base
    fld = algebra.field
    big = _empty(fld, td_src.offsets[-1], td_dst.offsets[-1])
    for v in range(len(algebra.idempotents)):
        rm, rb = td_src.m_rows[v].rows, td_src.b_rows[v].rows
        if rm == 0 or rb == 0:
            continue
        dv = td_src.b_rows[v] @ d.matrix
        dv_c = _coords_in(td_dst.b_rows[v], dv)
        mv_c = _coords_in(td_dst.m_rows[v], td_src.m_rows[v])
        block = np.kron(mv_c.a, dv_c.a)
        big[td_src.offsets[v]: td_src.offsets[v] + rm * rb,
            td_dst.offsets[v]: td_dst.offsets[v] + block.shape[1]] = block
    mat = td_src.lift @ ExactMatrix(fld, big) @ td_dst.project
    return ModuleMorphism(td_src.module, td_dst.module, mat)


def unit_into_tensor(td: TensorData) -> ModuleMorphism:
    """The canonical map M -> M (x)_A B for B carrying a distinguished copy
    of the unit (B a twist model of the regular bimodule): m e_v maps to
    (m e_v) (x) e_v."""
    algebra = td.base
    fld = algebra.field
    m = td.source
    big = _empty(fld, m.dim, td.offsets[-1])
    for v in range(len(algebra.idempotents)):
        rm, rb = td.m_rows[v].rows, td.b_rows[v].rows
        if rm == 0 or rb == 0:
            continue
        ev = _empty(fld, 1, td.b_rows[v].cols)
        ev[0, algebra.idempotents[v]] = 1 if fld.characteristic else Fraction(1)
        ev_c = _coords_in(td.b_rows[v], ExactMatrix(fld, ev))
        me = right_action_over(m, algebra, algebra.idempotents[v])
        coords = _coords_in(td.m_rows[v], me)  # row i = coords of e_i . e_v
        for i in range(m.dim):
            row = np.outer(coords.a[i], ev_c.a[0]).reshape(-1)
            big[i, td.offsets[v]: td.offsets[v] + rm * rb] = (
                big[i, td.offsets[v]: td.offsets[v] + rm * rb] + row
            )
    mat = ExactMatrix(fld, big) @ td.project
    return ModuleMorphism(m, td.module, mat)


def multiply_out_of_tensor(td: TensorData, target: Module) -> ModuleMorphism:
    """The multiplication map M (x)_A B -> target for B a right-twist model
    of the regular bimodule and target the matching right twist of M: the
    class of m (x) y maps to m . y (plain action of the element y on m)."""
    algebra = td.base
    fld = algebra.field
    m = td.source
    big = _empty(fld, td.offsets[-1], m.dim)
    for v in range(len(algebra.idempotents)):
        rm, rb = td.m_rows[v].rows, td.b_rows[v].rows
        if rm == 0 or rb == 0:
            continue
        base = td.offsets[v]
        for ib in range(rb):
            y = td.b_rows[v].take_rows([ib])
            act_y = _plain_act_element(m, algebra, y)
            img = td.m_rows[v] @ act_y
            for im in range(rm):
                big[base + im * rb + ib] = img.a[im]
    mat = td.lift @ ExactMatrix(fld, big)
    return ModuleMorphism(td.module, target, mat)


def _plain_act_element(m: Module, algebra: BasicAlgebra, y: ExactMatrix) -> ExactMatrix:
    """Action of the base-algebra element y on m (module or bimodule)."""
    acc = _empty(algebra.field, m.dim, m.dim)
    for j in range(algebra.dim):
        c = y.a[0, j]
        if c != 0:
            acc = acc + c * right_action_over(m, algebra, j).a
    return ExactMatrix(algebra.field, acc)

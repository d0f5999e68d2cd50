"""Minimal projective covers, injective hulls, syzygies, standard injective
resolutions and stable-category computations for self-injective basic
algebras.

The Homology engine memoizes the pinned standard resolution per module, so
comparison isomorphisms built against it are well defined within a run.  All
caches behave as pure functions of the module contents.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import BasicAlgebra, NakayamaData
from .fields import (
    ExactMatrix,
    LinearAlgebraError,
    _empty,
    reduce_rows_mod,
    row_space,
    stack_rows,
)
from .modules import (
    Module,
    ModuleMorphism,
    dual_module,
    hom_space,
    iso_test,
    kernel_of,
    quotient,
    standard_projective,
    zero_module,
    zero_morphism,
)


def top_multiplicities(m: Module):
    """Multiplicity of each simple in M / M.rad, with lifted generator rows.

    Returns a list of (idempotent position, row vector in M) in a fixed
    deterministic order.
    """
    A = m.algebra
    fld = A.field
    if m.dim == 0:
        return []
    if A.radical:
        rad = row_space(stack_rows(fld, [m.action[j] for j in A.radical]))
    else:
        rad = ExactMatrix.zeros(fld, 0, m.dim)
    out = []
    for pos in range(len(A.idempotents)):
        comp = m.idempotent_image(pos)
        if comp.rows == 0:
            continue
        rad_comp = row_space(rad @ m.action[A.idempotents[pos]]) if rad.rows \
            else ExactMatrix.zeros(fld, 0, m.dim)
        reduced = reduce_rows_mod(rad_comp, comp) if rad_comp.rows else comp
        lifts = row_space(reduced)
        # lift back: rows of `lifts` are inside M e_pos but reduced mod rad
        for r in range(lifts.rows):
            out.append((pos, lifts.take_rows([r])))
    return out


def projective_cover(m: Module, variant: int = 0):
    """Minimal projective cover (P, pi: P -> M); ker pi lies in P.rad.

    ``variant`` selects an alternative (equally valid) ordering of the lifted
    top generators; used by the perturbed-choices mode.
    """
    A = m.algebra
    fld = A.field
    tops = top_multiplicities(m)
    if variant:
        tops = list(reversed(tops))
    if not tops:
        p = zero_module(A)
        return p, zero_morphism(p, m)
    copies = [pos for pos, _ in tops]
    P, parts, incs, projs = standard_projective(A, copies)
    rows = []
    for (pos, gen), part in zip(tops, parts):
        block = _empty(fld, part.dim, m.dim)
        for local_i, k in enumerate(part.proj_rows):
            img = gen @ m.action[k]
            block[local_i] = img.a[0]
        rows.append(ExactMatrix(fld, block))
    pi = ModuleMorphism(P, m, stack_rows(fld, rows))
    if pi.rank() != m.dim:
        raise LinearAlgebraError("projective cover map is not onto")
    return P, pi


def syzygy(m: Module):
    """Minimal first syzygy: kernel of the projective cover, with inclusion."""
    P, pi = projective_cover(m)
    k, inc = kernel_of(pi)
    return k, inc, P, pi


@dataclass
class ResolutionStep:
    term: Module                 # injective term I_k
    include: ModuleMorphism      # current cosyzygy -> I_k
    project: ModuleMorphism      # I_k -> next cosyzygy
    cosyzygy: Module             # the next cosyzygy


@dataclass
class Resolution:
    """A standard injective resolution M -> I_0 -> I_1 -> ... (fixed hulls)."""

    kind: str
    base: Module
    steps: list[ResolutionStep]

    def term(self, k: int) -> Module:
        return self.steps[k].term

    def cosyzygy(self, k: int) -> Module:
        """Omega^{-k} of the base (k >= 0)."""
        if k == 0:
            return self.base
        return self.steps[k - 1].cosyzygy

    def map_between(self, k: int) -> ModuleMorphism:
        """The differential I_k -> I_{k+1}."""
        return self.steps[k].project.then(self.steps[k + 1].include)

    def final_projection(self, length: int) -> ModuleMorphism:
        """I_{length-1} -> Omega^{-length}."""
        return self.steps[length - 1].project

    def verify_exactness(self, length: int) -> None:
        """Rank bookkeeping: consecutive composites vanish and
        rank(d_i) + rank(d_{i+1}) = dim of the middle term."""
        maps = [self.steps[0].include]
        for k in range(length - 1):
            maps.append(self.map_between(k))
        maps.append(self.final_projection(length))
        for i in range(len(maps) - 1):
            if not (maps[i].matrix @ maps[i + 1].matrix).is_zero():
                raise LinearAlgebraError(f"resolution composite nonzero at {i}")
            mid = maps[i].target.dim
            if maps[i].rank() + maps[i + 1].rank() != mid:
                raise LinearAlgebraError(f"resolution not exact at position {i}")


class Homology:
    """Homological operations over a fixed self-injective basic algebra."""

    def __init__(self, algebra: BasicAlgebra, nakayama: NakayamaData,
                 choice_variant: int = 0):
        self.algebra = algebra
        self.nakayama = nakayama
        self.choice_variant = choice_variant
        self._resolutions: dict[bytes, Resolution] = {}
        self._dual_proj_iso: dict[int, ModuleMorphism] = {}
        self._proj_structure: dict[bytes, tuple] = {}

    # -- injective hulls (duality with the opposite cover) -------------------
    def _dual_projective_iso(self, pos: int) -> ModuleMorphism:
        """Iso D(e_pos A^op) -> e_{nu^{-1}(pos)} A, cached per vertex."""
        from .modules import projective_module

        if pos not in self._dual_proj_iso:
            op_proj = projective_module(self.algebra.opposite(), pos)
            d = dual_module(op_proj)  # right module over A
            target = projective_module(self.algebra, self.nakayama.nu_inverse(pos))
            iso = iso_test(d, target, seed=0xC0FFEE + self.choice_variant)
            if iso is None:
                raise LinearAlgebraError(
                    "dual of opposite projective is not the expected projective"
                )
            self._dual_proj_iso[pos] = iso
        return self._dual_proj_iso[pos]

    def injective_hull(self, m: Module):
        """Minimal injective hull (I, iota: M -> I) with I a literal direct
        sum of indecomposable projectives (projectives = injectives here)."""
        A = self.algebra
        if m.dim == 0:
            z = zero_module(A)
            return z, zero_morphism(m, z)
        md = dual_module(m)
        p_op, pi_op = projective_cover(md, variant=self.choice_variant)
        iota0 = pi_op.matrix.T  # M = D(D(M)) -> D(P_op)
        copies_op = p_op.proj_copies
        # D(P_op) decomposes blockwise; normalize each block to a literal e A
        target_copies = [self.nakayama.nu_inverse(pos) for pos in copies_op]
        I, parts, incs, projs = standard_projective(A, target_copies)
        blocks = [self._dual_projective_iso(pos).matrix for pos in copies_op]
        from .fields import block_diag

        rho = block_diag(A.field, blocks)
        iota = ExactMatrix(A.field, iota0.a) @ rho
        hull = ModuleMorphism(m, I, iota)
        if hull.rank() != m.dim:
            raise LinearAlgebraError("injective hull map is not mono")
        return I, hull

    def cosyzygy_step(self, m: Module):
        """One hull step: returns (I, iota, omega, proj)."""
        I, iota = self.injective_hull(m)
        q, proj, _ = quotient(I, iota.matrix)
        return I, iota, q, proj

    def cosyzygy(self, m: Module) -> Module:
        """Minimal first cosyzygy: cokernel of the injective hull."""
        return self.resolution(m, 1).cosyzygy(1)

    def resolution(self, m: Module, length: int) -> Resolution:
        """The pinned standard injective resolution of m, extended on demand
        and memoized by module contents."""
        key = m.digest()
        res = self._resolutions.get(key)
        if res is None:
            res = Resolution("injective", m, [])
            self._resolutions[key] = res
        cur = res.base if not res.steps else res.steps[-1].cosyzygy
        while len(res.steps) < length:
            I, iota, nxt, proj = self.cosyzygy_step(cur)
            res.steps.append(ResolutionStep(I, iota, proj, nxt))
            cur = nxt
        return res

    # -- stable category ------------------------------------------------------
    def factors_through_injective(self, f: ModuleMorphism):
        """Witness (g: I_M -> N with iota g = f) iff f is stably zero."""
        if f.source.dim == 0 or f.matrix.is_zero():
            I, iota = self.injective_hull(f.source)
            return ModuleMorphism(I, f.target,
                                  ExactMatrix.zeros(self.algebra.field, I.dim,
                                                    f.target.dim))
        I, iota = self.injective_hull(f.source)
        sol = self.solve_from_projective(
            I, f.target, [(iota.matrix, f.matrix)]
        )
        if sol is None:
            return None
        return sol

    def stable_equal(self, f: ModuleMorphism, g: ModuleMorphism) -> bool:
        return self.factors_through_injective(f - g) is not None

    def stable_zero(self, f: ModuleMorphism) -> bool:
        return self.factors_through_injective(f) is not None

    def stable_inverse(self, f: ModuleMorphism):
        """A module map g with fg and gf stably equal to the identities, or
        None when f is not a stable isomorphism."""
        U, V = f.source, f.target
        fld = self.algebra.field
        homs = hom_space(V, U)
        IU, iota_u = self.injective_hull(U)
        IV, iota_v = self.injective_hull(V)
        hU = hom_space(IU, U)
        hV = hom_space(IV, V)
        cols_u = U.dim * U.dim
        cols_v = V.dim * V.dim
        z_u = np.zeros(cols_u, dtype=np.int64)
        z_v = np.zeros(cols_v, dtype=np.int64)
        rows = []
        for h in homs:
            fg = (f.matrix @ h.matrix).a.reshape(-1)
            gf = (h.matrix @ f.matrix).a.reshape(-1)
            rows.append(np.concatenate([fg, gf]))
        for s in hU:
            term = (iota_u.matrix @ s.matrix).a.reshape(-1)
            rows.append(np.concatenate([-term, z_v]))
        for s in hV:
            term = (iota_v.matrix @ s.matrix).a.reshape(-1)
            rows.append(np.concatenate([z_u, -term]))
        rhs_u = ExactMatrix.identity(fld, U.dim).a.reshape(-1)
        rhs_v = ExactMatrix.identity(fld, V.dim).a.reshape(-1)
        rhs = ExactMatrix(fld, np.concatenate([rhs_u, rhs_v])[None, :])
        if not rows:
            return zero_morphism(V, U) if rhs.is_zero() else None
        big = ExactMatrix(fld, np.stack(rows))
        sol = big.solve_left(rhs)
        if sol is None:
            return None
        g = None
        for i, h in enumerate(homs):
            c = sol.a[0, i]
            if c != 0:
                term = h.scale(c)
                g = term if g is None else g + term
        if g is None:
            g = zero_morphism(V, U)
        return g

    # -- maps out of projectives ----------------------------------------------
    def proj_structure(self, m: Module):
        """Cover-based decomposition of a projective module: returns
        (standard projective P, iso pi: P -> m, inverse iso)."""
        key = m.digest()
        if key not in self._proj_structure:
            if hasattr(m, "proj_copies") or hasattr(m, "proj_rows"):
                self._proj_structure[key] = (m, None, None)
            else:
                P, pi = projective_cover(m)
                if P.dim != m.dim or not pi.matrix.is_invertible():
                    raise LinearAlgebraError("module is not projective")
                self._proj_structure[key] = (P, pi, pi.matrix.inv())
        return self._proj_structure[key]

    def hom_from_projective(self, p: Module, n: Module):
        """Basis of Hom(P, N) through the cover decomposition."""
        P, pi, pi_inv = self.proj_structure(p)
        homs = hom_space(P, n)
        if pi is None:
            return homs
        return [ModuleMorphism(p, n, pi_inv @ h.matrix) for h in homs]

    def solve_from_projective(self, p: Module, n: Module, constraints):
        """Deterministic phi: P -> N satisfying the given constraints, or
        None when infeasible.  P must be projective.  Constraints are pairs
        (C, D) meaning C @ phi = D, or triples ("right", R, D) meaning
        phi @ R = D."""
        homs = self.hom_from_projective(p, n)
        return _solve_in_span(self.algebra.field, homs, p, n, constraints)


def _solve_in_span(fld, homs, src: Module, dst: Module, constraints):
    """Solve for an element of span(homs) subject to left/right composition
    constraints; returns the morphism or None."""

    def expand(h_mat, constraint):
        if len(constraint) == 2:
            c_mat, _ = constraint
            return (c_mat @ h_mat).a.reshape(-1)
        _, r_mat, _ = constraint
        return (h_mat @ r_mat).a.reshape(-1)

    def rhs_of(constraint):
        return constraint[-1].a.reshape(-1)

    if not homs:
        for constraint in constraints:
            if not constraint[-1].is_zero():
                return None
        return zero_morphism(src, dst)
    rows = []
    rhs_parts = []
    for constraint in constraints:
        rhs_parts.append(rhs_of(constraint))
        rows.append(np.stack([expand(h.matrix, constraint) for h in homs]))
    big = ExactMatrix(fld, np.concatenate(rows, axis=1))
    rhs = ExactMatrix(fld, np.concatenate(rhs_parts)[None, :])
    sol = big.solve_left(rhs)
    if sol is None:
        return None
    out = None
    for i, h in enumerate(homs):
        c = sol.a[0, i]
        if c != 0:
            term = h.scale(c)
            out = term if out is None else out + term
    if out is None:
        out = zero_morphism(src, dst)
    return out


def cosyzygy_morphism(engine: Homology, f: ModuleMorphism, k: int) -> ModuleMorphism:
    """Transport f: M -> N to Omega^{-k} f along the pinned resolutions."""
    res_m = engine.resolution(f.source, k)
    res_n = engine.resolution(f.target, k)
    cur = f
    for step in range(k):
        I_m = res_m.term(step)
        I_n = res_n.term(step)
        iota_m = res_m.steps[step].include
        iota_n = res_n.steps[step].include
        proj_m = res_m.steps[step].project
        proj_n = res_n.steps[step].project
        u = engine.solve_from_projective(
            I_m, I_n, [(iota_m.matrix, (cur.matrix @ iota_n.matrix))]
        )
        if u is None:
            raise LinearAlgebraError("comparison lift failed (hull not injective?)")
        # induced map on cokernels: lift, push through u, project
        lift = _section_of(proj_m)
        mat = lift @ u.matrix @ proj_n.matrix
        cur = ModuleMorphism(res_m.cosyzygy(step + 1), res_n.cosyzygy(step + 1), mat)
    return cur


def _section_of(proj: ModuleMorphism) -> ExactMatrix:
    """A linear section of a surjective morphism: rows solve x @ P = id."""
    sec = proj.matrix.solve_left(
        ExactMatrix.identity(proj.source.algebra.field, proj.target.dim)
    )
    if sec is None:
        raise LinearAlgebraError("map has no section (not surjective)")
    return sec


def rank_exactness(terms, maps) -> bool:
    """Exactness bookkeeping for a complex of modules given by ``maps``:
    consecutive composites vanish and rank(d_i) + rank(d_{i+1}) = dim."""
    for i in range(len(maps) - 1):
        if not (maps[i].matrix @ maps[i + 1].matrix).is_zero():
            return False
        if maps[i].rank() + maps[i + 1].rank() != terms[i + 1].dim:
            return False
    return True

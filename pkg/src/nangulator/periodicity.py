"""Bimodule resolutions over the enveloping algebra, quasi-periodicity
detection, twist extraction and the spliced exact sequences used to build
the suspension data."""

from __future__ import annotations

from dataclasses import dataclass

from .algebra import (
    Automorphism,
    AutomorphismError,
    BasicAlgebra,
    identity_automorphism,
    verify_automorphism,
)
from .fields import ExactMatrix, LinearAlgebraError
from .modules import (
    Module,
    ModuleMorphism,
    iso_test,
    left_twist,
    opposite_regular,
    restrict_to_left_factor,
    twisted_bimodule,
)
from .homology import syzygy


class ResourceBoundExceeded(RuntimeError):
    pass


@dataclass
class BimoduleResolution:
    """Initial segment of the minimal projective bimodule resolution of A:
    terms P_1..P_n with differentials d_k: P_k -> P_{k-1} (d_1 = augmentation
    onto the regular bimodule) and the minimal syzygies."""

    algebra: BasicAlgebra
    regular: Module                     # A as a bimodule
    terms: list[Module]                 # P_1, P_2, ...
    differentials: list[ModuleMorphism]  # d_1: P_1 -> A, d_k: P_k -> P_{k-1}
    syzygies: list[Module]              # Omega^1, Omega^2, ...
    inclusions: list[ModuleMorphism]    # Omega^k -> P_k

    def extend(self, up_to: int, dim_guard: int = 10_000) -> None:
        while len(self.syzygies) < up_to:
            prev = self.syzygies[-1] if self.syzygies else self.regular
            if prev.dim > dim_guard:
                raise ResourceBoundExceeded(
                    f"bimodule syzygy dimension {prev.dim} exceeds guard"
                )
            k, inc, P, pi = syzygy(prev)
            if self.syzygies:
                d = ModuleMorphism(P, self.terms[-1],
                                   pi.matrix @ self.inclusions[-1].matrix)
            else:
                d = pi
            self.terms.append(P)
            self.differentials.append(d)
            self.syzygies.append(k)
            self.inclusions.append(inc)


def bimodule_resolution(algebra: BasicAlgebra) -> BimoduleResolution:
    regular = twisted_bimodule(algebra, identity_automorphism(algebra))
    return BimoduleResolution(algebra, regular, [], [], [], [])


def bimodule_syzygies(algebra: BasicAlgebra, max_n: int,
                      dim_guard: int = 10_000) -> list[Module]:
    """Minimal syzygies Omega^1 .. Omega^max_n of A over its enveloping
    algebra (each projective-free by minimality of the covers)."""
    res = bimodule_resolution(algebra)
    res.extend(max_n, dim_guard)
    return list(res.syzygies)


@dataclass
class TwistWitness:
    automorphism: Automorphism
    iso: ModuleMorphism  # twisted bimodule -> the examined bimodule


def detect_twist(algebra: BasicAlgebra, m: Module) -> TwistWitness | None:
    """Decide whether a bimodule is a twisted copy of the regular bimodule.

    Finds a left-module isomorphism A -> M, reads off the unique linear map
    with g . a = sigma(a) . g on the generator, and accepts iff that map is
    an automorphism; the resulting bimodule isomorphism is verified.
    """
    if m.dim != algebra.dim:
        return None
    left = restrict_to_left_factor(m, algebra)
    reg = opposite_regular(algebra)
    phi = iso_test(reg, left)
    if phi is None:
        return None
    g = algebra.unit() @ phi.matrix  # image of 1: a free left generator of M
    rows = []
    phi_inv = phi.matrix.inv()
    for j in range(algebra.dim):
        gj = g @ _right_action(m, algebra, j)
        rows.append((gj @ phi_inv).a[0])
    import numpy as np

    sigma_matrix = ExactMatrix(algebra.field, np.stack(rows))
    if not sigma_matrix.is_invertible():
        # no free generator induces an invertible twist, so none does
        return None
    sigma = verify_automorphism(algebra, sigma_matrix)
    tw = twisted_bimodule(algebra, sigma)
    witness = ModuleMorphism(tw, m, phi.matrix)
    for gidx in algebra.enveloping().generators:
        if tw.action[gidx] @ witness.matrix != witness.matrix @ m.action[gidx]:
            raise LinearAlgebraError("twist witness is not a bimodule map")
    # pin the representative of smallest matrix order within the inner class
    sigma, witness = normalize_twist(algebra, sigma, witness)
    return TwistWitness(sigma, witness)


def _right_action(m: Module, algebra: BasicAlgebra, j: int) -> ExactMatrix:
    from .modules import bim_right_action

    return bim_right_action(m, algebra, j)


def is_inner(algebra: BasicAlgebra, rho: Automorphism,
             draws: int = 400, seed: int = 0x5EED):
    """A unit u with rho = conj_u (that is, rho(a) u = u a for all a), or
    None when rho is provably not inner.

    The conjugation equations cut out a linear space; what remains is an
    invertible-element search over it.
    """
    import numpy as np

    from .modules import search_invertible

    fld = algebra.field
    d = algebra.dim
    blocks = []
    for g in algebra.generators:
        rho_g = rho.matrix.row(g)
        blocks.append(algebra.element_left_matrix(rho_g).a
                      - algebra.right_mult[g].a)
    big = ExactMatrix(fld, np.concatenate(blocks, axis=1))
    space = big.left_kernel()
    if space.rows == 0:
        return None

    def realize(coeffs):
        row = sum((c * space.a[i] for i, c in enumerate(coeffs) if c != 0),
                  start=np.zeros(d, dtype=space.a.dtype))
        return ExactMatrix(fld, row[None, :])

    def invertible(u):
        return algebra.element_right_matrix(u).is_invertible()

    return search_invertible(fld, space.rows, realize, invertible,
                             degree=d, draws=draws, seed=seed)


def monomial_twist_candidates(algebra: BasicAlgebra, perm: list[int]):
    """Automorphisms sending e_i to e_{perm(i)} and each arrow to a scalar
    multiple of the unique parallel arrow over the permuted vertices.  Only
    quivers with one-dimensional arrow spaces are handled; candidates are
    returned sorted by matrix order (relation compatibility pre-checked)."""
    import numpy as np
    from itertools import product

    q = algebra.quiver
    if q is None or algebra.basis_paths is None:
        return []
    arrow_map = []
    for a in q.arrows:
        hits = [k for k, b in enumerate(q.arrows)
                if b.source == perm[a.source] and b.target == perm[a.target]]
        if len(hits) != 1:
            return []
        arrow_map.append(hits[0])
    fld = algebra.field
    p = fld.characteristic
    if not p:
        scalar_choices = [1, -1]
    else:
        scalar_choices = list(range(1, p))
    n_arr = len(q.arrows)
    arrow_basis_index = {}
    for idx, path in enumerate(algebra.basis_paths):
        if len(path) == 1 and not isinstance(path[0], tuple):
            arrow_basis_index[path[0]] = idx

    def build(scalars) -> ExactMatrix | None:
        rows = []
        for path in algebra.basis_paths:
            if isinstance(path[0], tuple):
                v = path[0][1]
                row = ExactMatrix.zeros(fld, 1, algebra.dim).a.copy()
                row.flags.writeable = True
                row[0, algebra.idempotents[perm[v]]] = 1 if p else 1
                rows.append(ExactMatrix(fld, row))
                continue
            acc = None
            for ai in path:
                img_idx = arrow_basis_index[arrow_map[ai]]
                vec = ExactMatrix.zeros(fld, 1, algebra.dim).a.copy()
                vec.flags.writeable = True
                vec[0, img_idx] = scalars[ai]
                vec = ExactMatrix(fld, vec)
                acc = vec if acc is None else algebra.multiply(acc, vec)
            rows.append(acc)
        mat = ExactMatrix(fld, np.concatenate([r.a for r in rows], axis=0))
        return mat

    out = []
    for scalars in product(scalar_choices, repeat=n_arr):
        mat = build(scalars)
        if not mat.is_invertible():
            continue
        cand = Automorphism(algebra, mat)
        # relation compatibility: the monomial extension must kill relations
        try:
            verify_automorphism(algebra, mat)
        except AutomorphismError:
            continue
        order = cand.matrix_order(64)
        out.append((order if order else 10 ** 9, scalars, cand))
    out.sort(key=lambda t: (t[0], t[1]))
    return [c for _, _, c in out]


def normalize_twist(algebra: BasicAlgebra, sigma: Automorphism,
                    witness: ModuleMorphism, max_inner_tests: int = 40):
    """Replace the extracted twist by the representative of smallest matrix
    order within its inner class, when a monomial representative exists.

    Returns (sigma', witness') or the original pair.
    """
    perm = sigma.vertex_action()
    if perm is None:
        # read the vertex permutation modulo the radical
        perm = []
        for i in algebra.idempotents:
            row = sigma.matrix.a[i]
            hits = [qq for qq, j in enumerate(algebra.idempotents) if row[j] != 0]
            if len(hits) != 1:
                return sigma, witness
            perm.append(hits[0])
        if sorted(perm) != list(range(len(algebra.idempotents))):
            return sigma, witness
    base_order = sigma.matrix_order(64) or 10 ** 9
    tested = 0
    for cand in monomial_twist_candidates(algebra, perm):
        cand_order = cand.matrix_order(64) or 10 ** 9
        if cand_order >= base_order:
            break
        if tested >= max_inner_tests:
            break
        tested += 1
        u = is_inner(algebra, sigma.inverse().compose(cand))
        if u is None:
            continue
        # new witness: x -> x u identifies the candidate twist with sigma's
        r_u = algebra.element_right_matrix(u)
        new_witness = ModuleMorphism(
            twisted_bimodule(algebra, cand), witness.target,
            r_u @ witness.matrix,
        )
        env_gens = algebra.enveloping().generators
        tw = new_witness.source
        ok = all(
            tw.action[g] @ new_witness.matrix
            == new_witness.matrix @ witness.target.action[g]
            for g in env_gens
        ) and new_witness.matrix.is_invertible()
        if ok:
            return cand, new_witness
    return sigma, witness


@dataclass
class PeriodicityReport:
    quasi_period: int
    twist: Automorphism
    twist_order: int | None        # order of the automorphism matrix
    period: int | None             # minimal p with Omega^p(A) = A as bimodules
    witness: ModuleMorphism        # twisted bimodule -> Omega^{quasi_period}
    resolution: BimoduleResolution

    def summary(self) -> dict:
        return {
            "quasi_period": self.quasi_period,
            "twist_order": self.twist_order,
            "period": self.period,
        }


def quasi_period_scan(algebra: BasicAlgebra, max_n: int = 12,
                      order_bound: int = 64,
                      dim_guard: int = 10_000) -> PeriodicityReport | None:
    """Smallest n with Omega^n(A) isomorphic to a twisted regular bimodule.

    twist_order is the order of the extracted automorphism matrix; the period
    is n times the least k for which the k-th twist power gives back the
    regular bimodule (scanned up to the same bound), which can be smaller
    than n * twist_order when some power is inner.
    """
    res = bimodule_resolution(algebra)
    for n in range(1, max_n + 1):
        res.extend(n, dim_guard)
        hit = detect_twist(algebra, res.syzygies[n - 1])
        if hit is None:
            continue
        sigma, witness = hit.automorphism, hit.iso
        order = sigma.matrix_order(order_bound)
        period = None
        power = sigma
        for k in range(1, (order or order_bound) + 1):
            if is_inner(algebra, power) is not None:
                period = n * k
                break
            power = power.compose(sigma)
        return PeriodicityReport(n, sigma, order, period, witness, res)
    return None


@dataclass
class SplicedSequence:
    """The exact bimodule sequence obtained by splicing m twisted copies of
    the base resolution segment: 0 -> T_m -> Q_{mn} -> ... -> Q_1 -> A -> 0
    where T_m is the substitution model of the (sigma^m)-twisted bimodule."""

    algebra: BasicAlgebra
    twist: Automorphism
    copies: int
    terms: list[Module]                 # Q_1 .. Q_{mn}
    differentials: list[ModuleMorphism]  # Q_1 -> A, then Q_k -> Q_{k-1}
    end_inclusion: ModuleMorphism        # twisted bimodule sigma^m -> Q_{mn}
    end_module: Module                   # the literal twisted bimodule model

    def euler_dimension_sum(self) -> int:
        total = self.algebra.dim
        sign = -1
        for t in self.terms:
            total += sign * t.dim
            sign = -sign
        total += sign * self.end_module.dim
        return total


def iterated_sequence(report: PeriodicityReport, m: int) -> SplicedSequence:
    """Splice m twisted copies of the length-n segment into an exact
    sequence of length m*n ending in the (sigma^m)-twisted bimodule.

    Twisting on the left is realized by the action-substitution model, under
    which all differential matrices are reused unchanged; the junction maps
    compose the augmentation with the twist matrix and the end inclusion.
    """
    algebra = report.resolution.algebra
    sigma = report.twist
    n = report.quasi_period
    base_terms = report.resolution.terms[:n]
    base_diffs = report.resolution.differentials[:n]
    incl = ModuleMorphism(
        twisted_bimodule(algebra, sigma),
        base_terms[-1],
        report.witness.matrix @ report.resolution.inclusions[n - 1].matrix,
    )

    terms: list[Module] = []
    diffs: list[ModuleMorphism] = []
    for k in range(m):
        tw = sigma.power(k)
        twisted_terms = [left_twist(t, tw) if k else t for t in base_terms]
        for i, P in enumerate(twisted_terms):
            if k == 0 and i == 0:
                terms.append(P)
                diffs.append(base_diffs[0])
                continue
            if i == 0:
                # junction: Q_{kn+1} -> Q_{kn} is aug . sigma . incl
                j_mat = base_diffs[0].matrix @ sigma.matrix @ incl.matrix
                diffs.append(ModuleMorphism(P, terms[-1], j_mat))
                terms.append(P)
            else:
                diffs.append(ModuleMorphism(P, terms[-1], base_diffs[i].matrix))
                terms.append(P)
    end_module = twisted_bimodule(algebra, sigma.power(m))
    end_mat = sigma.power(m - 1).inverse().matrix @ incl.matrix
    end_inclusion = ModuleMorphism(end_module, terms[-1], end_mat)
    return SplicedSequence(algebra, sigma, m, terms, diffs, end_inclusion,
                           end_module)


def verify_spliced_exactness(seq: SplicedSequence) -> bool:
    """Zero composites and rank bookkeeping along the spliced sequence."""
    maps = [seq.differentials[0]]
    for k in range(1, len(seq.differentials)):
        d, prev = seq.differentials[k], maps[-1]
        if not (d.matrix @ prev.matrix).is_zero():
            return False
        if d.rank() + prev.rank() != d.target.dim:
            return False
        maps.append(d)
    inc = seq.end_inclusion
    last = maps[-1]
    if not (inc.matrix @ last.matrix).is_zero():
        return False
    if inc.rank() + last.rank() != inc.target.dim:
        return False
    if inc.rank() != seq.end_module.dim:
        return False
    if maps[0].rank() != seq.algebra.dim:
        return False
    return True

"""Finite-dimensional basic algebras: normal-form bases, structure constants,
self-injectivity, automorphisms, opposite and enveloping algebras.

A BasicAlgebra is stored uniformly (basis, right-multiplication matrices,
idempotent bookkeeping) whether it came from a quiver presentation, from
taking the opposite, or from the enveloping construction A^op (x) A.  Paths
compose left to right (p.q means traverse p, then q) and all modules in the
package are right modules.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .fields import ExactMatrix, FieldSpec, _empty
from .quiver import AlgebraDescription, Quiver, SemanticError


class NotFiniteDimensionalError(ValueError):
    pass


class NotSelfInjectiveError(ValueError):
    def __init__(self, message, witness_vertex=None):
        self.witness_vertex = witness_vertex
        super().__init__(message)


class AutomorphismError(ValueError):
    pass


@dataclass
class BasicAlgebra:
    """A finite-dimensional algebra with a distinguished idempotent-adapted basis.

    right_mult[j] is the matrix of right multiplication by basis element j:
    row i holds the coordinates of b_i * b_j.  left_unit_of / right_unit_of
    give, for each basis element, the position of the idempotent acting as
    identity on that side; for a path algebra these are source and target.
    """

    field: FieldSpec
    labels: list[str]
    right_mult: list[ExactMatrix]
    idempotents: list[int]          # basis indices of the trivial idempotents
    left_unit_of: list[int]         # idempotent position (not basis index)
    right_unit_of: list[int]
    radical: list[int]              # basis indices spanning the radical
    radical_right_generators: list[int]  # right-ideal generators of the radical
    generators: list[int]           # algebra generators (idempotents + arrows)
    name: str = ""
    quiver: Quiver | None = None
    basis_paths: list | None = None  # for quiver algebras
    nilpotency: int | None = None
    _left_mult: list | None = dc_field(default=None, repr=False)
    _opposite: object = dc_field(default=None, repr=False)
    _enveloping: object = dc_field(default=None, repr=False)
    envelope_pairs: list | None = dc_field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return len(self.labels)

    def unit(self) -> ExactMatrix:
        u = _empty(self.field, 1, self.dim)
        one = 1 if self.field.characteristic else Fraction(1)
        for i in self.idempotents:
            u[0, i] = one
        return ExactMatrix(self.field, u)

    def left_mult(self, i: int) -> ExactMatrix:
        """Matrix of left multiplication by basis element i (row j = b_i b_j)."""
        if self._left_mult is None:
            stack = np.stack([m.a for m in self.right_mult])  # [j, i, :] = b_i b_j
            self._left_mult = [
                ExactMatrix(self.field, stack[:, i, :].copy())
                for i in range(self.dim)
            ]
        return self._left_mult[i]

    def multiply(self, x: ExactMatrix, y: ExactMatrix) -> ExactMatrix:
        """Product of elements given as coordinate row vectors."""
        acc = _empty(self.field, x.rows, self.dim)
        for j in range(self.dim):
            c = y.a[0, j]
            if c != 0:
                acc = acc + c * (x.a @ self.right_mult[j].a)
        return ExactMatrix(self.field, acc)

    def element_right_matrix(self, x: ExactMatrix) -> ExactMatrix:
        """Right multiplication matrix of an arbitrary element x (row vector)."""
        acc = _empty(self.field, self.dim, self.dim)
        for j in range(self.dim):
            c = x.a[0, j]
            if c != 0:
                acc = acc + c * self.right_mult[j].a
        return ExactMatrix(self.field, acc)

    def element_left_matrix(self, x: ExactMatrix) -> ExactMatrix:
        """Left multiplication matrix of x: u @ L(x) = x . u."""
        acc = _empty(self.field, self.dim, self.dim)
        for j in range(self.dim):
            c = x.a[0, j]
            if c != 0:
                acc = acc + c * self.left_mult(j).a
        return ExactMatrix(self.field, acc)

    def verify_associativity(self) -> None:
        """Exhaustive check of associativity on all basis triples."""
        d = self.dim
        stack = np.stack([m.a for m in self.right_mult])
        p = self.field.characteristic
        for j in range(d):
            rj = self.right_mult[j].a
            for k in range(d):
                lhs = rj @ self.right_mult[k].a        # rows: b_i (b_j b_k)? no:
                # (x b_j) b_k has matrix R_j R_k; x (b_j b_k) has matrix
                # sum_t coords(b_j b_k)[t] R_t
                coeffs = self.right_mult[k].a[j]
                rhs = np.tensordot(coeffs, stack, axes=(0, 0))
                if p:
                    lhs, rhs = lhs % p, rhs % p
                if not np.array_equal(lhs, rhs):
                    raise SemanticError(f"associativity fails at pair ({j}, {k})")

    def verify_idempotents(self) -> None:
        for pos, i in enumerate(self.idempotents):
            for pos2, j in enumerate(self.idempotents):
                prod = self.right_mult[j].a[i].copy()
                if self.field.characteristic:
                    prod = prod % self.field.characteristic
                expect = np.zeros_like(prod)
                if pos == pos2:
                    expect[i] = 1
                if not np.array_equal(prod, expect):
                    raise SemanticError("trivial idempotents are not orthogonal")

    # -- derived algebras ---------------------------------------------------
    def opposite(self) -> "BasicAlgebra":
        """The opposite algebra, sharing the basis with reversed products."""
        if self._opposite is None:
            op = BasicAlgebra(
                field=self.field,
                labels=[f"{l}^op" for l in self.labels],
                right_mult=[self.left_mult(i) for i in range(self.dim)],
                idempotents=list(self.idempotents),
                left_unit_of=list(self.right_unit_of),
                right_unit_of=list(self.left_unit_of),
                radical=list(self.radical),
                radical_right_generators=list(self.radical_right_generators),
                generators=list(self.generators),
                name=f"{self.name}^op",
            )
            op._opposite = self
            self._opposite = op
        return self._opposite

    def enveloping(self) -> "BasicAlgebra":
        """A^e = A^op (x) A with (a (x) b)(a' (x) b') = (a'a) (x) (bb')."""
        if self._enveloping is None:
            d = self.dim
            pairs = [(i, j) for i in range(d) for j in range(d)]
            right = [
                ExactMatrix(self.field,
                            np.kron(self.left_mult(k).a, self.right_mult[l].a))
                for (k, l) in pairs
            ]
            idem_pairs = [(i, j) for i in self.idempotents for j in self.idempotents]
            idem = [i * d + j for (i, j) in idem_pairs]
            idem_pos = {pr: t for t, pr in enumerate(idem_pairs)}
            lu, ru = [], []
            for (i, j) in pairs:
                # (e_u (x) e_v) . (b_i (x) b_j) = (b_i e_u) (x) (e_v b_j)
                u = self.idempotents[self.right_unit_of[i]]
                v = self.idempotents[self.left_unit_of[j]]
                lu.append(idem_pos[(u, v)])
                u2 = self.idempotents[self.left_unit_of[i]]
                v2 = self.idempotents[self.right_unit_of[j]]
                ru.append(idem_pos[(u2, v2)])
            triv = set(self.idempotents)
            rad = [i * d + j for (i, j) in pairs
                   if i not in triv or j not in triv]
            arrows = [g for g in self.generators if g not in triv]
            rad_gens = [a * d + e for a in arrows for e in self.idempotents]
            rad_gens += [e * d + a for e in self.idempotents for a in arrows]
            gens = list(idem)
            gens += [a * d + e for a in arrows for e in self.idempotents]
            gens += [e * d + a for e in self.idempotents for a in arrows]
            env = BasicAlgebra(
                field=self.field,
                labels=[f"{self.labels[i]}(x){self.labels[j]}" for i, j in pairs],
                right_mult=right,
                idempotents=idem,
                left_unit_of=lu,
                right_unit_of=ru,
                radical=rad,
                radical_right_generators=rad_gens,
                generators=gens,
                name=f"{self.name}^e",
            )
            env.envelope_pairs = pairs
            self._enveloping = env
        return self._enveloping

    def envelope_index(self, i: int, j: int) -> int:
        return i * self.dim + j


@dataclass(frozen=True)
class NakayamaData:
    """Socle permutation of a basic self-injective algebra."""

    permutation: tuple[int, ...]   # vertex position -> vertex position
    socle_vectors: tuple           # one socle generator row per projective

    def nu(self, i: int) -> int:
        return self.permutation[i]

    def nu_inverse(self, i: int) -> int:
        return self.permutation.index(i)


@dataclass
class Automorphism:
    """An algebra automorphism by its basis matrix (row i = image of b_i)."""

    algebra: BasicAlgebra
    matrix: ExactMatrix

    def apply(self, x: ExactMatrix) -> ExactMatrix:
        return x @ self.matrix

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self followed by other: x -> other(self(x))."""
        return Automorphism(self.algebra, self.matrix @ other.matrix)

    def inverse(self) -> "Automorphism":
        return Automorphism(self.algebra, self.matrix.inv())

    def power(self, k: int) -> "Automorphism":
        n = self.algebra.dim
        if k < 0:
            return self.inverse().power(-k)
        acc = ExactMatrix.identity(self.algebra.field, n)
        base = self.matrix
        while k:
            if k & 1:
                acc = acc @ base
            base = base @ base
            k >>= 1
        return Automorphism(self.algebra, acc)

    def is_identity(self) -> bool:
        return self.matrix == ExactMatrix.identity(
            self.algebra.field, self.algebra.dim
        )

    def matrix_order(self, bound: int = 64) -> int | None:
        acc = self
        for k in range(1, bound + 1):
            if acc.is_identity():
                return k
            acc = acc.compose(self)
        return None

    def vertex_action(self) -> list[int] | None:
        """The induced permutation of vertices: sigma(e_i) is a primitive
        idempotent congruent to exactly one e_j modulo the radical."""
        A = self.algebra
        out = []
        for i in A.idempotents:
            row = self.matrix.a[i]
            hits = [q for q, j in enumerate(A.idempotents) if row[j] != 0]
            if len(hits) != 1 or row[A.idempotents[hits[0]]] != 1:
                return None
            out.append(hits[0])
        if sorted(out) != list(range(len(A.idempotents))):
            return None
        return out


def identity_automorphism(algebra: BasicAlgebra) -> Automorphism:
    return Automorphism(algebra, ExactMatrix.identity(algebra.field, algebra.dim))


def verify_automorphism(algebra: BasicAlgebra, matrix: ExactMatrix) -> Automorphism:
    """Accept a matrix as an automorphism iff it is invertible, unital and
    multiplicative on all basis pairs; errors name the failing property."""
    if matrix.shape != (algebra.dim, algebra.dim):
        raise AutomorphismError(
            f"matrix must be {algebra.dim} x {algebra.dim}, got {matrix.shape}"
        )
    if not matrix.is_invertible():
        raise AutomorphismError("not-invertible: matrix is singular")
    unit = algebra.unit()
    if unit @ matrix != unit:
        raise AutomorphismError("not-unital: sigma(1) != 1")
    d = algebra.dim
    for i in range(d):
        si = matrix.row(i)
        for j in range(d):
            lhs = algebra.right_mult[j].row(i) @ matrix  # sigma(b_i b_j)
            rhs = algebra.multiply(si, matrix.row(j))
            if lhs != rhs:
                raise AutomorphismError(
                    f"not-multiplicative on basis pair ({i}, {j})"
                )
    return Automorphism(algebra, matrix)


# -- basis computation by degree-truncated path rewriting --------------------

# A path is a tuple of arrow indices; the trivial path at vertex v is the
# 1-tuple (("e", v),).  Helper predicates keep the two cases straight.


def _is_trivial(path) -> bool:
    return len(path) == 1 and isinstance(path[0], tuple)


def _length(path) -> int:
    return 0 if _is_trivial(path) else len(path)


class _Rewriter:
    """Sparse reduced echelon of the relation ideal.  Pivots are the largest
    paths in length-lex order (on arrow names), so rewriting always replaces
    a path by strictly smaller ones."""

    def __init__(self, field: FieldSpec, name_key):
        self.field = field
        self._names = name_key
        self.rules: dict[tuple, dict] = {}  # pivot path -> tail {path: coeff}

    def key(self, path):
        return (len(path), self._names(path))

    def reduce(self, vec: dict) -> dict:
        out = {p: c for p, c in vec.items() if c != 0}
        while True:
            hit = None
            for path in sorted(out, key=self.key, reverse=True):
                if path in self.rules:
                    hit = path
                    break
            if hit is None:
                return out
            c = out.pop(hit)
            for q, cq in self.rules[hit].items():
                nv = self.field.canon(out.get(q, 0) + c * cq)
                if nv == 0:
                    out.pop(q, None)
                else:
                    out[q] = nv

    def insert(self, vec: dict) -> None:
        red = self.reduce(vec)
        if not red:
            return
        pivot = max(red, key=self.key)
        inv = self.field.inv(red[pivot])
        tail = {q: self.field.canon(-inv * c) for q, c in red.items() if q != pivot}
        self.rules[pivot] = tail
        for pv, t in self.rules.items():
            if pv != pivot and pivot in t:
                c = t.pop(pivot)
                for q, cq in tail.items():
                    nv = self.field.canon(t.get(q, 0) + c * cq)
                    if nv == 0:
                        t.pop(q, None)
                    else:
                        t[q] = nv


def compute_basis(desc: AlgebraDescription, degree_bound: int = 32) -> BasicAlgebra:
    """Normal-form path basis and structure constants of kQ/I.

    Path rewriting modulo the two-sided ideal, truncated by degree: paths are
    enumerated level by level and relation multiples are folded into a reduced
    echelon.  The first length with no surviving normal form certifies that
    the arrow ideal is nilpotent; without such a certificate up to the degree
    bound the computation aborts.
    """
    q = desc.quiver
    fld = desc.field
    n_vert = len(q.vertices)

    def path_source(path):
        head = path[0]
        return head[1] if isinstance(head, tuple) else q.arrows[head].source

    def path_target(path):
        tail = path[-1]
        return tail[1] if isinstance(tail, tuple) else q.arrows[tail].target

    def name_key(path):
        if _is_trivial(path):
            return (q.vertices[path[0][1]],)
        return tuple(q.arrows[i].name for i in path)

    rel_sparse = []
    for rel in desc.relations:
        vec = {}
        for c, path in rel.terms:
            vec[path] = fld.canon(vec.get(path, 0) + c)
        vec = {p: c for p, c in vec.items() if c != 0}
        if vec:
            rel_sparse.append(vec)

    level_paths: dict[int, list[tuple]] = {
        0: [(("e", v),) for v in range(n_vert)],
        1: [(i,) for i in range(len(q.arrows))],
    }
    rw = _Rewriter(fld, name_key)

    nilpotency = None
    L = 1
    while True:
        L += 1
        if L > degree_bound:
            raise NotFiniteDimensionalError(
                f"no nilpotency certificate up to degree bound {degree_bound}"
            )
        cur = []
        for p in level_paths[L - 1]:
            if _is_trivial(p):
                continue
            t = path_target(p)
            for ai in q.arrows_from(t):
                cur.append(p + (ai,))
        level_paths[L] = cur
        if not cur:
            nilpotency = L
            break
        for vec in rel_sparse:
            ml = max(len(p) for p in vec)
            for a in range(0, L - ml + 1):
                b = L - ml - a
                some = next(iter(vec))
                for u in level_paths[a]:
                    if path_target(u) != path_source(some):
                        continue
                    for v in level_paths[b]:
                        if path_source(v) != path_target(some):
                            continue
                        prod = {}
                        up = () if _is_trivial(u) else u
                        vp = () if _is_trivial(v) else v
                        for pth, c in vec.items():
                            prod[up + pth + vp] = c
                        rw.insert(prod)
        if all(p in rw.rules for p in cur):
            nilpotency = L
            break

    basis_paths = []
    for lvl in sorted(level_paths):
        if lvl >= nilpotency:
            continue
        lvl_nf = [p for p in level_paths[lvl] if p not in rw.rules]
        basis_paths.extend(sorted(lvl_nf, key=name_key))
    index = {p: i for i, p in enumerate(basis_paths)}
    dim = len(basis_paths)
    one = fld.canon(1)

    def reduce_arrow_path(path: tuple[int, ...]) -> dict:
        """Normal form of a pure arrow path (assumed composable)."""
        if len(path) <= nilpotency:
            return rw.reduce({path: one})
        acc = rw.reduce({path[:nilpotency]: one})
        for ai in path[nilpotency:]:
            nxt = {}
            for pth, c in acc.items():
                if _is_trivial(pth):
                    ext = (ai,) if pth[0][1] == q.arrows[ai].source else None
                else:
                    ext = pth + (ai,) if path_target(pth) == q.arrows[ai].source else None
                if ext is None:
                    continue
                for p2, c2 in reduce_arrow_path(ext).items():
                    nv = fld.canon(nxt.get(p2, 0) + c * c2)
                    if nv == 0:
                        nxt.pop(p2, None)
                    else:
                        nxt[p2] = nv
            acc = nxt
        return acc

    right_mult = []
    for j, pj in enumerate(basis_paths):
        mat = _empty(fld, dim, dim)
        for i, pi in enumerate(basis_paths):
            if path_target(pi) != path_source(pj):
                continue
            if _is_trivial(pi):
                mat[i, j] = one
                continue
            if _is_trivial(pj):
                mat[i, i] = one
                continue
            for pth, c in reduce_arrow_path(pi + pj).items():
                mat[i, index[pth]] = c
        right_mult.append(ExactMatrix(fld, mat))

    idem = [index[(("e", v),)] for v in range(n_vert)]
    lu = [path_source(p) for p in basis_paths]
    ru = [path_target(p) for p in basis_paths]
    rad = [i for i, p in enumerate(basis_paths) if not _is_trivial(p)]
    arrows_idx = [index[(ai,)] for ai in range(len(q.arrows)) if (ai,) in index]

    def label(p):
        if _is_trivial(p):
            return f"e_{q.vertices[p[0][1]]}"
        return "*".join(q.arrows[i].name for i in p)

    alg = BasicAlgebra(
        field=fld,
        labels=[label(p) for p in basis_paths],
        right_mult=right_mult,
        idempotents=idem,
        left_unit_of=lu,
        right_unit_of=ru,
        radical=rad,
        radical_right_generators=arrows_idx,
        generators=idem + arrows_idx,
        name=desc.name,
        quiver=q,
        basis_paths=basis_paths,
        nilpotency=nilpotency,
    )
    alg.verify_idempotents()
    alg.verify_associativity()
    for vec in rel_sparse:
        acc = {}
        for pth, c in vec.items():
            for p2, c2 in reduce_arrow_path(pth).items():
                acc[p2] = fld.canon(acc.get(p2, 0) + c * c2)
        if any(c != 0 for c in acc.values()):
            raise SemanticError("relation does not reduce to zero (rewriting bug)")
    # certify nilpotency of the arrow ideal in the computed algebra; for
    # inhomogeneous relations the rewriting stop rule alone does not imply it
    alg.nilpotency = _verify_radical_nilpotent(alg, degree_bound)
    return alg


def _verify_radical_nilpotent(alg: BasicAlgebra, bound: int) -> int:
    if not alg.radical:
        return 1
    cur = _empty(alg.field, len(alg.radical), alg.dim)
    one = alg.field.canon(1)
    for r, j in enumerate(alg.radical):
        cur[r, j] = one
    cur = ExactMatrix(alg.field, cur)
    from .fields import row_space, stack_rows

    cur = row_space(cur)
    for k in range(1, bound + 2):
        if cur.rows == 0:
            return k
        nxt = row_space(stack_rows(
            alg.field, [cur @ alg.right_mult[j] for j in alg.radical]))
        if nxt.rows == cur.rows:
            raise NotFiniteDimensionalError(
                "arrow ideal is not nilpotent (ideal not admissible)"
            )
        cur = nxt
    raise NotFiniteDimensionalError(
        f"no nilpotency certificate up to degree bound {bound}"
    )


def check_self_injective(algebra: BasicAlgebra) -> NakayamaData:
    """Compute soc(e_i A) for every vertex; succeed with the Nakayama
    permutation iff every socle is simple and socle types form a bijection."""
    from .modules import projective_module  # deferred: modules imports algebra

    n = len(algebra.idempotents)
    perm = []
    socle_vectors = []
    for pos in range(n):
        P = projective_module(algebra, pos)
        stacked = [P.action[g].a for g in algebra.radical_right_generators]
        if stacked:
            m = ExactMatrix(algebra.field, np.concatenate(stacked, axis=1))
            soc = m.left_kernel()
        else:
            soc = ExactMatrix.identity(algebra.field, P.dim)
        if soc.rows != 1:
            raise NotSelfInjectiveError(
                f"projective at vertex {pos} has socle of dimension {soc.rows}",
                witness_vertex=pos,
            )
        vec = soc.take_rows([0])
        types = [t for t in range(n)
                 if not (vec @ P.action[algebra.idempotents[t]]).is_zero()]
        if len(types) != 1:
            raise NotSelfInjectiveError(
                f"socle at vertex {pos} is not homogeneous", witness_vertex=pos
            )
        perm.append(types[0])
        socle_vectors.append(vec)
    if sorted(perm) != list(range(n)):
        raise NotSelfInjectiveError(f"socle assignment {perm} is not a permutation")
    return NakayamaData(permutation=tuple(perm), socle_vectors=tuple(socle_vectors))

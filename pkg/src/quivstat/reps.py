"""Representations of a bound quiver algebra and their morphisms.

A representation assigns a space dimension to each vertex and a matrix to
each arrow (target-dim x source-dim, acting on column vectors).  Morphisms
are vertexwise matrices satisfying the commuting squares; kernels, images
and cokernels are computed vertexwise with induced arrow maps, using the
deterministic bases of the elimination layer.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InternalCheckError, UsageError
from .linalg import Matrix, block_diag
from .quiver import BoundQuiverAlgebra, path_length


@dataclass(frozen=True, eq=False)
class Representation:
    algebra: BoundQuiverAlgebra
    dims: tuple[int, ...]
    arrow_maps: tuple[Matrix, ...]

    def __post_init__(self, check: bool = True):
        q = self.algebra.quiver
        if len(self.dims) != q.vertices or len(self.arrow_maps) != len(q.arrows):
            raise UsageError("representation shape mismatch")
        for a, m in enumerate(self.arrow_maps):
            s, t = q.arrows[a]
            if (m.rows, m.cols) != (self.dims[t], self.dims[s]):
                raise UsageError(f"arrow map {a} has shape {(m.rows, m.cols)}, "
                                 f"expected {(self.dims[t], self.dims[s])}")
        if check:
            self.validate_relations()

    def validate_relations(self):
        for rel in self.algebra.relations.relations:
            acc = None
            for c, p in rel.terms:
                term = self.path_action(p).scale(c)
                acc = term if acc is None else acc + term
            if acc is not None and not acc.is_zero():
                raise UsageError("relations do not vanish on this representation")

    @property
    def field(self):
        return self.algebra.field

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    def is_zero(self) -> bool:
        return self.total_dim == 0

    def path_action(self, path) -> Matrix:
        return self.algebra.path_matrix(path, self.dims, self.arrow_maps)

    def fingerprint(self) -> bytes:
        return b";".join([bytes(str(self.dims), "ascii")] + [m.fingerprint() for m in self.arrow_maps])

    def __eq__(self, other):
        if not isinstance(other, Representation):
            return NotImplemented
        return (
            self.algebra == other.algebra
            and self.dims == other.dims
            and all(a == b for a, b in zip(self.arrow_maps, other.arrow_maps))
        )

    def __hash__(self):
        return hash((self.dims, self.fingerprint()))

    def __repr__(self):
        return f"Representation(dims={self.dims})"


def zero_representation(algebra: BoundQuiverAlgebra) -> Representation:
    q = algebra.quiver
    dims = tuple(0 for _ in range(q.vertices))
    maps = tuple(Matrix.zeros(algebra.field, 0, 0) for _ in q.arrows)
    return Representation(algebra, dims, maps)


def representation_from_lists(algebra: BoundQuiverAlgebra, dims, maps) -> Representation:
    q = algebra.quiver
    mats = []
    for a, rows in enumerate(maps):
        s, t = q.arrows[a]
        if rows is None:
            mats.append(Matrix.zeros(algebra.field, dims[t], dims[s]))
        else:
            m = Matrix.from_rows(algebra.field, rows)
            if m.rows == 0 or m.cols == 0:
                m = Matrix.zeros(algebra.field, dims[t], dims[s])
            mats.append(m)
    return Representation(algebra, tuple(dims), tuple(mats))


@dataclass(frozen=True, eq=False)
class Morphism:
    source: Representation
    target: Representation
    vertex_maps: tuple[Matrix, ...]

    def __post_init__(self, check: bool = True):
        if self.source.algebra != self.target.algebra:
            raise UsageError("morphism between representations of different algebras")
        for v, m in enumerate(self.vertex_maps):
            if (m.rows, m.cols) != (self.target.dims[v], self.source.dims[v]):
                raise UsageError("morphism vertex map shape mismatch")
        if check:
            self.validate_squares()

    def validate_squares(self):
        q = self.source.algebra.quiver
        for a, (s, t) in enumerate(q.arrows):
            lhs = self.vertex_maps[t] @ self.source.arrow_maps[a]
            rhs = self.target.arrow_maps[a] @ self.vertex_maps[s]
            if lhs != rhs:
                raise InternalCheckError(f"commuting square fails at arrow {a}")

    def __eq__(self, other):
        if not isinstance(other, Morphism):
            return NotImplemented
        return (
            self.source == other.source
            and self.target == other.target
            and all(a == b for a, b in zip(self.vertex_maps, other.vertex_maps))
        )

    def __hash__(self):
        return hash(tuple(m.fingerprint() for m in self.vertex_maps))

    def compose(self, first: "Morphism") -> "Morphism":
        """self after first."""
        if first.target is not self.source and first.target != self.source:
            raise UsageError("composition mismatch")
        maps = tuple(a @ b for a, b in zip(self.vertex_maps, first.vertex_maps))
        return Morphism(first.source, self.target, maps)

    def __add__(self, other: "Morphism") -> "Morphism":
        return Morphism(self.source, self.target,
                        tuple(a + b for a, b in zip(self.vertex_maps, other.vertex_maps)))

    def __sub__(self, other: "Morphism") -> "Morphism":
        return Morphism(self.source, self.target,
                        tuple(a - b for a, b in zip(self.vertex_maps, other.vertex_maps)))

    def scale(self, c) -> "Morphism":
        return Morphism(self.source, self.target, tuple(m.scale(c) for m in self.vertex_maps))

    def is_zero(self) -> bool:
        return all(m.is_zero() for m in self.vertex_maps)

    def is_mono(self) -> bool:
        return all(m.rank() == m.cols for m in self.vertex_maps)

    def is_epi(self) -> bool:
        return all(m.rank() == m.rows for m in self.vertex_maps)

    def is_iso(self) -> bool:
        return all(m.rows == m.cols and m.is_invertible() for m in self.vertex_maps)

    def inverse(self) -> "Morphism":
        maps = []
        for m in self.vertex_maps:
            inv = m.inverse()
            if inv is None:
                raise UsageError("inverting a non-invertible morphism")
            maps.append(inv)
        return Morphism(self.target, self.source, tuple(maps))

    def rank_vector(self):
        return tuple(m.rank() for m in self.vertex_maps)

    def __repr__(self):
        return f"Morphism({self.source.dims} -> {self.target.dims})"


def identity_morphism(x: Representation) -> Morphism:
    return Morphism(x, x, tuple(Matrix.identity(x.field, d) for d in x.dims))


def zero_morphism(x: Representation, y: Representation) -> Morphism:
    return Morphism(x, y, tuple(Matrix.zeros(x.field, dy, dx) for dx, dy in zip(x.dims, y.dims)))


# == kernels, images, cokernels ==============================================


def _induced_arrow(on_source: Matrix, arrow: Matrix, on_target: Matrix) -> Matrix:
    """Solve on_target @ X = arrow @ on_source for the induced map X."""
    rhs = arrow @ on_source
    sol = on_target.solve(rhs)
    if sol is None:
        raise InternalCheckError("induced arrow map has no solution")
    return sol


def kernel(f: Morphism):
    """(kernel representation, inclusion morphism)."""
    alg = f.source.algebra
    q = alg.quiver
    bases = [m.kernel_basis() for m in f.vertex_maps]
    dims = tuple(b.cols for b in bases)
    maps = []
    for a, (s, t) in enumerate(q.arrows):
        maps.append(_induced_arrow(bases[s], f.source.arrow_maps[a], bases[t]))
    k = Representation(alg, dims, tuple(maps))
    incl = Morphism(k, f.source, tuple(bases))
    return k, incl


def image(f: Morphism):
    """(image representation, mono into target, epi from source)."""
    alg = f.source.algebra
    q = alg.quiver
    bases = []
    for m in f.vertex_maps:
        basis, _ = m.column_space_canonical()
        bases.append(basis)
    dims = tuple(b.cols for b in bases)
    maps = []
    for a, (s, t) in enumerate(q.arrows):
        maps.append(_induced_arrow(bases[s], f.target.arrow_maps[a], bases[t]))
    im = Representation(alg, dims, tuple(maps))
    mono = Morphism(im, f.target, tuple(bases))
    epi_maps = []
    for v, b in enumerate(bases):
        sol = b.solve(f.vertex_maps[v])
        if sol is None:
            raise InternalCheckError("image factorization failed")
        epi_maps.append(sol)
    epi = Morphism(f.source, im, tuple(epi_maps))
    return im, mono, epi


def _quotient_data(field, ambient_dim: int, subspace: Matrix):
    """Projection/section pair for ambient/span(subspace), canonical basis.

    The canonical column basis of the subspace is the identity on its pivot
    rows, so y -> (y - basis @ y[pivots]) kills the subspace and the free
    rows give quotient coordinates.
    """
    basis, pivot_rows = subspace.column_space_canonical()
    free = [r for r in range(ambient_dim) if r not in pivot_rows]
    one = field.one()
    sel_free = field.zeros((len(free), ambient_dim))
    for k, r in enumerate(free):
        sel_free[k, r] = one
    pmat = Matrix(field, sel_free)
    if basis.cols:
        sel_piv = field.zeros((basis.cols, ambient_dim))
        for i, r in enumerate(pivot_rows):
            sel_piv[i, r] = one
        pmat = pmat - pmat @ basis @ Matrix(field, sel_piv)
    sec = field.zeros((ambient_dim, len(free)))
    for k, r in enumerate(free):
        sec[r, k] = one
    return pmat, Matrix(field, sec)


def cokernel(f: Morphism):
    """(cokernel representation, projection morphism)."""
    alg = f.source.algebra
    q = alg.quiver
    projs, secs, dims = [], [], []
    for v, m in enumerate(f.vertex_maps):
        p, s = _quotient_data(alg.field, f.target.dims[v], m)
        projs.append(p)
        secs.append(s)
        dims.append(p.rows)
    maps = []
    for a, (s, t) in enumerate(q.arrows):
        maps.append(projs[t] @ f.target.arrow_maps[a] @ secs[s])
    c = Representation(alg, tuple(dims), tuple(maps))
    proj = Morphism(f.target, c, tuple(projs))
    return c, proj


def quotient_by_subrepresentation(x: Representation, inclusion: Morphism):
    """Quotient of x by the image of a mono, with projection."""
    return cokernel(inclusion)


def direct_sum(summands) -> tuple[Representation, list[Morphism], list[Morphism]]:
    """Block-diagonal sum with injections and projections."""
    summands = list(summands)
    if not summands:
        raise UsageError("direct sum of an empty list needs an algebra; use zero_representation")
    alg = summands[0].algebra
    field = alg.field
    for s in summands:
        if s.algebra != alg:
            raise UsageError("direct sum across different algebras")
    q = alg.quiver
    dims = tuple(sum(s.dims[v] for s in summands) for v in range(q.vertices))
    maps = tuple(
        block_diag(field, [s.arrow_maps[a] for s in summands]) for a in range(len(q.arrows))
    )
    total = Representation(alg, dims, maps)
    injections, projections = [], []
    offsets = [0] * q.vertices
    for s in summands:
        inj, proj = [], []
        for v in range(q.vertices):
            m = Matrix.zeros(field, dims[v], s.dims[v])
            mp = Matrix.zeros(field, s.dims[v], dims[v])
            one = field.one()
            for i in range(s.dims[v]):
                m.data[offsets[v] + i, i] = one
                mp.data[i, offsets[v] + i] = one
            inj.append(m)
            proj.append(mp)
        injections.append(Morphism(s, total, tuple(inj)))
        projections.append(Morphism(total, s, tuple(proj)))
        for v in range(q.vertices):
            offsets[v] += s.dims[v]
    return total, injections, projections


def direct_power(x: Representation, n: int):
    if n == 0:
        return zero_representation(x.algebra), [], []
    return direct_sum([x] * n)


# == standard representations ===============================================


def simple(algebra: BoundQuiverAlgebra, v: int) -> Representation:
    q = algebra.quiver
    if not (0 <= v < q.vertices):
        raise UsageError(f"vertex {v} out of range")
    dims = tuple(1 if i == v else 0 for i in range(q.vertices))
    maps = tuple(
        Matrix.zeros(algebra.field, dims[t], dims[s]) for s, t in q.arrows
    )
    return Representation(algebra, dims, maps)


def projective(algebra: BoundQuiverAlgebra, v: int) -> Representation:
    """P(v), realized on the basis paths starting at v."""
    q = algebra.quiver
    if not (0 <= v < q.vertices):
        raise UsageError(f"vertex {v} out of range")
    bases = [algebra.vertex_pair_basis(v, j) for j in range(q.vertices)]
    index = [{p: i for i, p in enumerate(b)} for b in bases]
    dims = tuple(len(b) for b in bases)
    maps = []
    for a, (s, t) in enumerate(q.arrows):
        m = algebra.field.zeros((dims[t], dims[s]))
        for col, p in enumerate(bases[s]):
            extended = (p[0], p[1] + (a,))
            coords = algebra.rewrite(extended)
            for row, p2 in enumerate(bases[t]):
                m[row, col] = coords[algebra.basis_index[p2]]
        maps.append(Matrix(algebra.field, m))
    return Representation(algebra, dims, tuple(maps))


def injective(algebra: BoundQuiverAlgebra, v: int) -> Representation:
    """I(v), the dual of the right projective at v (paths ending at v)."""
    q = algebra.quiver
    if not (0 <= v < q.vertices):
        raise UsageError(f"vertex {v} out of range")
    bases = [algebra.vertex_pair_basis(j, v) for j in range(q.vertices)]
    dims = tuple(len(b) for b in bases)
    maps = []
    for a, (s, t) in enumerate(q.arrows):
        # right multiplication: (paths t -> v) -> (paths s -> v), q -> a then q
        m = algebra.field.zeros((len(bases[s]), len(bases[t])))
        for col, p in enumerate(bases[t]):
            extended = (s, (a,) + p[1])
            coords = algebra.rewrite(extended)
            for row, p2 in enumerate(bases[s]):
                m[row, col] = coords[algebra.basis_index[p2]]
        maps.append(Matrix(algebra.field, m).transpose())
    return Representation(algebra, dims, tuple(maps))


# == hom spaces ===============================================================


def hom_basis(x: Representation, y: Representation) -> list[Morphism]:
    """Deterministic basis of Hom(x, y) from the commuting-square equations."""
    if x.algebra != y.algebra:
        raise UsageError("hom between representations of different algebras")
    cache = x.algebra.cache("hom_basis")
    key = (id(x), id(y))
    if key in cache:
        return cache[key][-1]
    field = x.field
    q = x.algebra.quiver
    sizes = [y.dims[v] * x.dims[v] for v in range(q.vertices)]
    offsets = np.concatenate([[0], np.cumsum(sizes)]).astype(int)
    total = int(offsets[-1])
    blocks = []
    for a, (s, t) in enumerate(q.arrows):
        rows = y.dims[t] * x.dims[s]
        if rows == 0:
            continue
        block = field.zeros((rows, total))
        if sizes[t]:
            # vec(phi_t @ X_a) = (I kron X_a^T) vec(phi_t), C-order vec
            left = np.kron(np.asarray(Matrix.identity(field, y.dims[t]).data),
                           np.asarray(x.arrow_maps[a].transpose().data))
            block[:, offsets[t]: offsets[t + 1]] = field.normalize(left)
        if sizes[s]:
            right = np.kron(np.asarray(y.arrow_maps[a].data),
                            np.asarray(Matrix.identity(field, x.dims[s]).data))
            block[:, offsets[s]: offsets[s + 1]] = field.normalize(
                block[:, offsets[s]: offsets[s + 1]] - right)
        blocks.append(block)
    if blocks:
        big = Matrix(field, np.vstack(blocks))
        null = big.kernel_basis()
    else:
        null = Matrix.identity(field, total)
    basis = []
    for k in range(null.cols):
        vec = null.data[:, k]
        maps = []
        for v in range(q.vertices):
            chunk = vec[offsets[v]: offsets[v + 1]]
            maps.append(Matrix(field, np.array(chunk).reshape(y.dims[v], x.dims[v])
                               if sizes[v] else field.zeros((y.dims[v], x.dims[v]))))
        basis.append(Morphism(x, y, tuple(maps)))
    # keep the keys alive: id-based caching is only sound while the keyed
    # objects cannot be garbage collected and their ids reused
    cache[key] = (x, y, basis)
    return basis


def hom_dim(x: Representation, y: Representation) -> int:
    return len(hom_basis(x, y))


def morphism_to_vector(f: Morphism) -> np.ndarray:
    field = f.source.field
    chunks = [np.asarray(m.data).reshape(-1) for m in f.vertex_maps]
    return np.concatenate(chunks) if chunks else field.zeros((0,))


def morphism_from_vector(x: Representation, y: Representation, vec) -> Morphism:
    field = x.field
    maps = []
    pos = 0
    for v in range(len(x.dims)):
        size = y.dims[v] * x.dims[v]
        chunk = vec[pos: pos + size]
        pos += size
        data = np.array(chunk).reshape(y.dims[v], x.dims[v]) if size else field.zeros(
            (y.dims[v], x.dims[v]))
        maps.append(Matrix(field, field.normalize(data)))
    return Morphism(x, y, tuple(maps))


def combine_morphisms(basis: list[Morphism], coeffs) -> Morphism:
    if not basis:
        raise UsageError("empty morphism basis")
    out = basis[0].scale(coeffs[0])
    for f, c in zip(basis[1:], coeffs[1:]):
        out = out + f.scale(c)
    return out


def coordinates_in_hom_basis(basis: list[Morphism], f: Morphism):
    """Coordinates of f in a hom basis (None if outside the span)."""
    field = f.source.field
    if not basis:
        return None if not f.is_zero() else field.zeros((0,))
    cols = [morphism_to_vector(b) for b in basis]
    a = Matrix(field, np.column_stack(cols))
    rhs = Matrix(field, np.array(morphism_to_vector(f)).reshape(-1, 1))
    sol = a.solve(rhs)
    return None if sol is None else sol.data[:, 0]


# == radical structure and covers =============================================


def radical_subrepresentation(x: Representation):
    """rad(x) = sum of the images of all arrow maps (inclusion returned)."""
    alg = x.algebra
    field = alg.field
    q = alg.quiver
    bases = []
    for v in range(q.vertices):
        incoming = [np.asarray(x.arrow_maps[a].data) for a, (s, t) in enumerate(q.arrows) if t == v
                    and x.arrow_maps[a].cols > 0]
        if incoming:
            stacked = Matrix(field, np.hstack(incoming))
            basis, _ = stacked.column_space_canonical()
        else:
            basis = Matrix.zeros(field, x.dims[v], 0)
        bases.append(basis)
    dims = tuple(b.cols for b in bases)
    maps = []
    for a, (s, t) in enumerate(q.arrows):
        maps.append(_induced_arrow(bases[s], x.arrow_maps[a], bases[t]))
    rad = Representation(alg, dims, tuple(maps))
    return rad, Morphism(rad, x, tuple(bases))


def radical_series(x: Representation):
    """[x, rad x, rad^2 x, ...] with inclusions into x, until zero."""
    series = [(x, identity_morphism(x))]
    current, incl = x, identity_morphism(x)
    while not current.is_zero():
        rad, rincl = radical_subrepresentation(current)
        incl = incl.compose(rincl)
        series.append((rad, incl))
        if rad.total_dim == current.total_dim:
            raise InternalCheckError("radical series does not descend")
        current = rad
    return series


def loewy_length(x: Representation) -> int:
    return len(radical_series(x)) - 1


def is_serial(x: Representation) -> bool:
    """Unique composition series: every radical layer is simple or zero."""
    series = radical_series(x)
    for (a, _), (b, _) in zip(series, series[1:]):
        if a.total_dim - b.total_dim > 1:
            return False
    return True


def top_multiplicities(x: Representation):
    rad, _ = radical_subrepresentation(x)
    return tuple(x.dims[v] - rad.dims[v] for v in range(len(x.dims)))


def projective_cover(x: Representation):
    """(P, epi) with P = direct sum of P(i) by top multiplicities."""
    alg = x.algebra
    field = alg.field
    q = alg.quiver
    rad, rincl = radical_subrepresentation(x)
    mults = top_multiplicities(x)
    pieces = []
    lift_vectors = []  # (vertex, column vector in x at that vertex)
    for v in range(q.vertices):
        if mults[v] == 0:
            continue
        # complement of rad(x)_v in x_v: unit vectors at non-pivot rows
        basis, pivot_rows = rincl.vertex_maps[v].column_space_canonical()
        free = [r for r in range(x.dims[v]) if r not in pivot_rows]
        assert len(free) == mults[v]
        for r in free:
            vec = field.zeros((x.dims[v], 1))
            vec[r, 0] = field.one()
            pieces.append(projective(alg, v))
            lift_vectors.append((v, Matrix(field, vec)))
    if not pieces:
        p = zero_representation(alg)
        return p, zero_morphism(p, x)
    total, injections, _ = direct_sum(pieces)
    cover = zero_morphism(total, x)
    for piece, inj, (v0, vec) in zip(pieces, injections, lift_vectors):
        # generator path e_{v0} goes to the lift vector; path p goes to x_p(lift)
        maps = []
        for w in range(q.vertices):
            m = field.zeros((x.dims[w], piece.dims[w]))
            for col, p in enumerate(alg.vertex_pair_basis(v0, w)):
                m[:, col: col + 1] = (x.path_action(p) @ vec).data
            maps.append(Matrix(field, m))
        part = Morphism(piece, x, tuple(maps))
        # coordinate injections are transposed by their own projections
        through = tuple(part.vertex_maps[w] @ inj.vertex_maps[w].transpose()
                        for w in range(q.vertices))
        cover = cover + Morphism(total, x, through)
    return total, cover


def ext1_dim(x: Representation, y: Representation) -> int:
    """dim Ext^1 via a projective presentation 0 -> K -> P -> x -> 0."""
    p, epi = projective_cover(x)
    if not epi.is_epi():
        raise InternalCheckError("projective cover is not surjective")
    k, incl = kernel(epi)
    # Ext^1(x, y) = coker(Hom(P, y) -> Hom(K, y)); Ext^1(P, -) = 0
    return hom_dim(k, y) - hom_dim(p, y) + hom_dim(x, y)


def extension_representation(sub: Representation, top: Representation, cocycles) -> Representation:
    """Middle term of an extension of `top` by `sub` from raw cocycle blocks.

    cocycles[a]: Matrix of shape (sub.dims[target], top.dims[source]); the
    arrow maps are the block matrices [[sub_a, eta_a], [0, top_a]].  The
    constructor validates the algebra relations, so invalid cocycles are
    rejected for bound algebras.
    """
    alg = sub.algebra
    field = alg.field
    q = alg.quiver
    dims = tuple(sub.dims[v] + top.dims[v] for v in range(q.vertices))
    maps = []
    for a, (s, t) in enumerate(q.arrows):
        m = field.zeros((dims[t], dims[s]))
        m[: sub.dims[t], : sub.dims[s]] = sub.arrow_maps[a].data
        eta = cocycles[a]
        if eta is not None and eta.rows:
            m[: sub.dims[t], sub.dims[s]:] = eta.data
        m[sub.dims[t]:, sub.dims[s]:] = top.arrow_maps[a].data
        maps.append(Matrix(field, m))
    return Representation(alg, dims, tuple(maps))


def generic_representation(algebra: BoundQuiverAlgebra, dims, seed: int = 0) -> Representation:
    """Seeded random arrow matrices with the given dimension vector.

    Only valid when the algebra has no relations (hereditary case); callers
    certify indecomposability afterwards.
    """
    import random as _random

    rng = _random.Random(seed * 1_000_003 + sum((d + 1) * 31 ** i for i, d in enumerate(dims)))
    field = algebra.field
    q = algebra.quiver
    maps = []
    for s, t in q.arrows:
        if field.characteristic:
            rows = [[rng.randrange(field.characteristic) for _ in range(dims[s])]
                    for _ in range(dims[t])]
        else:
            rows = [[rng.randint(-3, 3) for _ in range(dims[s])] for _ in range(dims[t])]
        maps.append(Matrix.from_rows(field, rows) if dims[t] and dims[s]
                    else Matrix.zeros(field, dims[t], dims[s]))
    return Representation(algebra, tuple(dims), tuple(maps))

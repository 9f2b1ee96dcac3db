"""Bound quivers and their path-algebra bases.

A path is stored as (start_vertex, arrows) with arrows listed in application
order: the path (v, (a, b)) applies a first, then b, i.e. it is the
composite "b after a".  The algebra acts on the left of its representations,
so the arrow action on a projective P(i) extends basis paths on the left
(p -> p then a).

Relations generate a two-sided ideal; together with the nilpotency cutoff N
(all paths of length >= N vanish) the quotient is finite dimensional.  The
cutoff must be a consequence of the relations (admissibility); this is
verified exactly during basis construction.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .errors import AdmissibilityError, UsageError
from .fields import Field
from .linalg import Matrix

MAX_PATHS = 200_000


@dataclass(frozen=True)
class Quiver:
    """A finite quiver: vertex count plus named arrows (loops, multi-arrows allowed)."""

    vertices: int
    arrows: tuple[tuple[int, int], ...]
    arrow_names: tuple[str, ...] = ()

    def __post_init__(self):
        for s, t in self.arrows:
            if not (0 <= s < self.vertices and 0 <= t < self.vertices):
                raise UsageError(f"arrow ({s},{t}) out of range for {self.vertices} vertices")
        if not self.arrow_names:
            object.__setattr__(self, "arrow_names", tuple(f"a{i}" for i in range(len(self.arrows))))
        if len(self.arrow_names) != len(self.arrows):
            raise UsageError("arrow_names length mismatch")
        if len(set(self.arrow_names)) != len(self.arrow_names):
            raise UsageError("duplicate arrow names")

    def source(self, a: int) -> int:
        return self.arrows[a][0]

    def target(self, a: int) -> int:
        return self.arrows[a][1]

    def arrows_from(self, v: int):
        return [i for i, (s, _) in enumerate(self.arrows) if s == v]

    def is_acyclic(self) -> bool:
        # Kahn peeling on the vertex set
        indeg = [0] * self.vertices
        for _, t in self.arrows:
            indeg[t] += 1
        queue = [v for v in range(self.vertices) if indeg[v] == 0]
        seen = 0
        while queue:
            v = queue.pop()
            seen += 1
            for i, (s, t) in enumerate(self.arrows):
                if s == v:
                    indeg[t] -= 1
                    if indeg[t] == 0:
                        queue.append(t)
        return seen == self.vertices

    def longest_path_length(self) -> int:
        if not self.is_acyclic():
            raise UsageError("longest path undefined on a cyclic quiver")
        memo = {}

        def depth(v):
            if v not in memo:
                memo[v] = 0
                for a in self.arrows_from(v):
                    memo[v] = max(memo[v], 1 + depth(self.target(a)))
            return memo[v]

        return max((depth(v) for v in range(self.vertices)), default=0)

    def arrow_count_matrix(self):
        """c[i][j] = number of arrows i -> j."""
        c = [[0] * self.vertices for _ in range(self.vertices)]
        for s, t in self.arrows:
            c[s][t] += 1
        return c


Path = tuple[int, tuple[int, ...]]  # (start vertex, arrow indices in application order)


def path_target(q: Quiver, path: Path) -> int:
    v, arrows = path
    for a in arrows:
        if q.source(a) != v:
            raise UsageError(f"non-composable path {path}")
        v = q.target(a)
    return v


def path_length(path: Path) -> int:
    return len(path[1])


@dataclass(frozen=True)
class Relation:
    """A linear combination of parallel paths of length >= 2.

    Coefficients are stored as Fractions and coerced into the working field
    when the algebra is built.
    """

    terms: tuple[tuple[Fraction, Path], ...]

    @staticmethod
    def of_paths(*paths: Path, coeffs=None) -> "Relation":
        coeffs = coeffs or [1] * len(paths)
        return Relation(tuple((Fraction(c), p) for c, p in zip(coeffs, paths)))

    def endpoints(self, q: Quiver):
        starts = {p[0] for _, p in self.terms}
        ends = {path_target(q, p) for _, p in self.terms}
        if len(starts) != 1 or len(ends) != 1:
            raise UsageError(f"relation endpoints inhomogeneous: {self}")
        return starts.pop(), ends.pop()

    def validate(self, q: Quiver):
        if not self.terms:
            raise UsageError("empty relation")
        for c, p in self.terms:
            if c == 0:
                raise UsageError("zero coefficient in relation")
            if path_length(p) < 2:
                raise UsageError("relation term of length < 2 (ideal must be admissible)")
            path_target(q, p)
        self.endpoints(q)


@dataclass(frozen=True)
class RelationSet:
    relations: tuple[Relation, ...]
    cutoff: int | None = None  # all paths of length >= cutoff vanish

    def resolved_cutoff(self, q: Quiver) -> int:
        if self.cutoff is not None:
            if self.cutoff < 2:
                raise UsageError("nilpotency cutoff must be >= 2")
            return self.cutoff
        if not q.is_acyclic():
            raise UsageError("cyclic quiver requires an explicit nilpotency cutoff")
        return q.longest_path_length() + 1


def enumerate_paths(q: Quiver, max_len: int):
    """All composable paths of length <= max_len, grouped by length."""
    by_len = [[(v, ()) for v in range(q.vertices)]]
    total = q.vertices
    for length in range(1, max_len + 1):
        layer = []
        for v, arrows in by_len[length - 1]:
            end = path_target(q, (v, arrows))
            for a in q.arrows_from(end):
                layer.append((v, arrows + (a,)))
        total += len(layer)
        if total > MAX_PATHS:
            raise UsageError(f"path count exceeds {MAX_PATHS}; lower the cutoff")
        by_len.append(layer)
    return by_len


class BoundQuiverAlgebra:
    """Path algebra of a quiver modulo an admissible ideal, with path basis.

    Produced by `path_basis`.  Provides the basis of each e_j A e_i as paths,
    rewriting of arbitrary paths into the basis, and the left/right arrow
    actions used to realize projectives and injectives.
    """

    def __init__(self, quiver: Quiver, relations: RelationSet, field: Field):
        self.quiver = quiver
        self.relations = relations
        self.field = field
        self.cutoff = relations.resolved_cutoff(quiver)
        self._build()
        self._caches: dict = {}

    # == identity =====================================================

    def key(self):
        rel_key = tuple(
            tuple((str(c), p) for c, p in r.terms) for r in self.relations.relations
        )
        return (self.quiver, rel_key, self.cutoff, self.field)

    def __eq__(self, other):
        return isinstance(other, BoundQuiverAlgebra) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    # == construction ==================================================

    def _build(self):
        q, N = self.quiver, self.cutoff
        for rel in self.relations.relations:
            rel.validate(q)
        by_len = enumerate_paths(q, N)
        all_paths = [p for layer in by_len for p in layer]
        # Elimination order: longer paths first so that short paths survive
        # as basis representatives (vertices and arrows always survive).
        order = sorted(all_paths, key=lambda p: (-path_length(p), p))
        col_of = {p: i for i, p in enumerate(order)}
        npaths = len(order)

        gens = []
        for rel in self.relations.relations:
            s, t = rel.endpoints(q)
            lefts = [p for layer in by_len for p in layer if path_target(q, p) == s]
            rights = [p for layer in by_len for p in layer if p[0] == t]
            min_len = min(path_length(p) for _, p in rel.terms)
            for pre in lefts:
                for post in rights:
                    if path_length(pre) + min_len + path_length(post) > N:
                        continue
                    vec = self.field.zeros((npaths,))
                    touched = False
                    for c, term in rel.terms:
                        full = (pre[0], pre[1] + term[1] + post[1])
                        if path_length(full) > N:
                            continue  # truncated modulo longer paths
                        vec[col_of[full]] += self.field.coerce(c)
                        touched = True
                    if touched:
                        gens.append(vec)

        if gens:
            stacked = self.field.zeros((len(gens), npaths))
            for i, g in enumerate(gens):
                stacked[i, :] = g
            R, pivots = Matrix(self.field, stacked).rref()
            rows = R.data[: len(pivots)]
        else:
            pivots = ()
            rows = self.field.zeros((0, npaths))
        pivot_of_col = {c: r for r, c in enumerate(pivots)}

        def reduce_vec(vec):
            vec = vec.copy()
            for c, r in pivot_of_col.items():
                if vec[c] != 0:
                    vec = self.field.normalize(vec - vec[c] * rows[r])
            return vec

        # Admissibility: every path of length exactly N must lie in the
        # relation ideal (then inductively all longer paths do too).
        for p in by_len[N]:
            vec = self.field.zeros((npaths,))
            vec[col_of[p]] = self.field.one()
            if np.any(reduce_vec(vec) != 0):
                raise AdmissibilityError(
                    f"path {self.format_path(p)} of cutoff length {N} does not reduce to zero"
                )

        basis = [p for p in order if col_of[p] not in pivot_of_col and path_length(p) < N]
        basis.sort(key=lambda p: (path_length(p), p))
        self._order = order
        self._col_of = col_of
        self._reduce_vec = reduce_vec
        self.basis: tuple[Path, ...] = tuple(basis)
        self.basis_index = {p: i for i, p in enumerate(basis)}
        self.dimension = len(basis)
        self.pair_basis: dict[tuple[int, int], list[Path]] = {}
        for p in basis:
            key = (p[0], path_target(q, p))
            self.pair_basis.setdefault(key, []).append(p)
        self._rewrite_cache: dict[Path, np.ndarray] = {}

    # == public surface =================================================

    def vertex_pair_basis(self, i: int, j: int):
        """Basis paths of e_j A e_i (paths from i to j)."""
        return list(self.pair_basis.get((i, j), []))

    def rewrite(self, path: Path) -> np.ndarray:
        """Coordinates of an arbitrary path in the algebra basis."""
        if path in self._rewrite_cache:
            return self._rewrite_cache[path]
        path_target(self.quiver, path)  # validates composability
        if path_length(path) >= self.cutoff:
            coords = self.field.zeros((self.dimension,))
        else:
            vec = self.field.zeros((len(self._order),))
            vec[self._col_of[path]] = self.field.one()
            red = self._reduce_vec(vec)
            coords = self.field.zeros((self.dimension,))
            for p, i in self.basis_index.items():
                coords[i] = red[self._col_of[p]]
        self._rewrite_cache[path] = coords
        return coords

    def format_path(self, path: Path) -> str:
        v, arrows = path
        if not arrows:
            return f"e{v}"
        # display in application order, separated by '*'
        return "*".join(self.quiver.arrow_names[a] for a in arrows)

    def path_matrix(self, path: Path, dims, arrow_maps) -> Matrix:
        """Evaluate a path on vertex spaces: the composite of its arrow maps."""
        v, arrows = path
        out = Matrix.identity(self.field, dims[v])
        for a in arrows:
            out = arrow_maps[a] @ out
        return out

    def cache(self, kind: str) -> dict:
        return self._caches.setdefault(kind, {})

    def __repr__(self):
        return (
            f"BoundQuiverAlgebra(vertices={self.quiver.vertices}, "
            f"arrows={len(self.quiver.arrows)}, dim={self.dimension}, field={self.field})"
        )


def path_basis(quiver: Quiver, relations: RelationSet, field: Field) -> BoundQuiverAlgebra:
    """Build the bound quiver algebra with its explicit path basis."""
    return BoundQuiverAlgebra(quiver, relations, field)


def word_to_path(q: Quiver, names: list[str]) -> Path:
    """Arrow-name word, leftmost applied last (function composition order)."""
    name_index = {n: i for i, n in enumerate(q.arrow_names)}
    try:
        arrows = tuple(name_index[n] for n in reversed(names))
    except KeyError as exc:
        raise UsageError(f"unknown arrow name {exc.args[0]!r}") from exc
    if not arrows:
        raise UsageError("empty path word")
    start = q.source(arrows[0])
    path = (start, arrows)
    path_target(q, path)
    return path

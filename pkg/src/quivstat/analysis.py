"""Structure theory of finite-dimensional algebras and module decomposition.

Endomorphism rings are stored with the opposite multiplication (x*y means
"y after x" as maps), so Hom spaces out of a module become left modules over
them without side switching.  The radical is exact: the trace-form kernel in
characteristic zero, and elementwise nilpotent-right-ideal certification over
F_p inside the enumeration cap.  Decomposition splits along non-primary
minimal polynomials of endomorphisms, which both generalizes the classic
fitting split and certifies indecomposability when the search is exhaustive.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

import numpy as np
import sympy

from .errors import CapExceededError, InternalCheckError, UndecidedError, UsageError
from .fields import PrimeField, Rationals
from .linalg import Matrix, block_diag
from .quiver import BoundQuiverAlgebra
from .reps import (
    Morphism,
    Representation,
    cokernel,
    combine_morphisms,
    coordinates_in_hom_basis,
    direct_sum,
    hom_basis,
    hom_dim,
    identity_morphism,
    injective,
    is_serial,
    kernel,
    loewy_length,
    projective,
    radical_series,
    simple,
    zero_representation,
)

ELEMENT_ENUM_CAP = 1 << 16
RANDOM_TRIALS = 256


@dataclass(frozen=True, eq=False)
class FiniteDimAlgebra:
    """Associative unital algebra by structure constants on a basis.

    structure[i, j] holds the coordinates of basis_i * basis_j.
    """

    field: object
    dim: int
    structure: np.ndarray  # (dim, dim, dim)
    unit: np.ndarray  # (dim,)

    def __post_init__(self):
        if self.dim <= 12:
            self.validate()

    def validate(self):
        f = self.field
        for i in range(self.dim):
            for j in range(self.dim):
                for k in range(self.dim):
                    lhs = self.multiply(self.multiply(self.basis_vec(i), self.basis_vec(j)),
                                        self.basis_vec(k))
                    rhs = self.multiply(self.basis_vec(i),
                                        self.multiply(self.basis_vec(j), self.basis_vec(k)))
                    if np.any(f.normalize(lhs - rhs) != 0):
                        raise InternalCheckError("structure constants are not associative")
        for i in range(self.dim):
            b = self.basis_vec(i)
            if np.any(self.field.normalize(self.multiply(self.unit, b) - b) != 0):
                raise InternalCheckError("left unit law fails")
            if np.any(self.field.normalize(self.multiply(b, self.unit) - b) != 0):
                raise InternalCheckError("right unit law fails")

    def basis_vec(self, i: int):
        v = self.field.zeros((self.dim,))
        v[i] = self.field.one()
        return v

    def multiply(self, x, y):
        t = np.tensordot(np.asarray(x), self.structure, axes=(0, 0))
        return self.field.normalize(np.tensordot(np.asarray(y), t, axes=(0, 0)))

    def left_mult_matrix(self, x) -> Matrix:
        m = np.tensordot(np.asarray(x), self.structure, axes=(0, 0)).T
        return Matrix(self.field, self.field.normalize(m.copy()))

    def right_mult_matrix(self, y) -> Matrix:
        # result[i, k] = coords of basis_i * y, transposed into (k, i)
        m = np.tensordot(np.asarray(y), self.structure, axes=(0, 1))
        return Matrix(self.field, self.field.normalize(m.T.copy()))

    def is_nilpotent_element(self, x) -> bool:
        return self.left_mult_matrix(x).is_nilpotent()

    def is_invertible_element(self, x) -> bool:
        return self.left_mult_matrix(x).is_invertible()

    def element_count(self):
        p = self.field.characteristic
        return p ** self.dim if p else None

    def enumerate_elements(self):
        if not isinstance(self.field, PrimeField):
            raise CapExceededError("element enumeration needs a prime field")
        if self.element_count() > ELEMENT_ENUM_CAP:
            raise CapExceededError(
                f"|A| = {self.element_count()} exceeds the {ELEMENT_ENUM_CAP} cap; "
                "use a smaller field")
        for coords in itertools.product(range(self.field.p), repeat=self.dim):
            yield np.array(coords, dtype=np.int64)

    # -- subspace ideal calculus ------------------------------------------

    def subspace_product(self, xs, ys):
        """Basis of span{x*y}, canonical."""
        prods = [self.multiply(x, y) for x in xs for y in ys]
        return self._span(prods)

    def _span(self, vectors):
        if not vectors:
            return []
        rows = self.field.zeros((len(vectors), self.dim))
        for i, v in enumerate(vectors):
            rows[i, :] = v
        r, pivots = Matrix(self.field, rows).rref()
        return [r.data[i, :].copy() for i in range(len(pivots))]

    def subspace_is_nilpotent(self, xs) -> bool:
        """Does the span of xs (a one-sided ideal) power down to zero?"""
        current = list(xs)
        for _ in range(self.dim + 1):
            if not current:
                return True
            current = self.subspace_product(current, xs)
        return False

    def radical(self):
        """Canonical basis of rad(A); exact over Q and over F_p within cap."""
        cache = getattr(self, "_rad_cache", None)
        if cache is not None:
            return cache
        if isinstance(self.field, Rationals):
            rad = self._radical_char0()
        else:
            rad = self._radical_prime()
        # verify nilpotency and that the quotient has zero radical
        if rad and not self.subspace_is_nilpotent(rad):
            raise InternalCheckError("computed radical is not nilpotent")
        object.__setattr__(self, "_rad_cache", rad)
        if rad:
            quot, proj, _ = self.quotient_by_ideal(rad)
            if quot.radical():
                raise InternalCheckError("quotient by the radical has nonzero radical")
        return rad

    def _radical_char0(self):
        # Dickson / trace-form kernel: rad = {x : tr(L_x L_y) = 0 for all y}
        gram = self.field.zeros((self.dim, self.dim))
        lmats = [self.left_mult_matrix(self.basis_vec(i)) for i in range(self.dim)]
        for i in range(self.dim):
            for j in range(self.dim):
                prod = lmats[i] @ lmats[j]
                gram[i, j] = sum(prod.data[k, k] for k in range(self.dim))
        ker = Matrix(self.field, gram).kernel_basis()
        return [ker.data[:, k].copy() for k in range(ker.cols)]

    def _radical_prime(self):
        # rad = { x : the right ideal xA is nilpotent }, checked elementwise
        # over the (capped) element enumeration; the passing set is a subspace.
        out = []
        basis_mats = [self.basis_vec(i) for i in range(self.dim)]
        for coords in self.enumerate_elements():
            if not np.any(coords):
                continue
            right_ideal = self._span([self.multiply(coords, b) for b in basis_mats])
            if self.subspace_is_nilpotent(right_ideal):
                out.append(coords)
        return self._span(out)

    def radical_power_basis(self, k: int):
        rad = self.radical()
        current = rad
        for _ in range(k - 1):
            if not current:
                return []
            current = self.subspace_product(current, rad)
        return current if k >= 1 else [self.basis_vec(i) for i in range(self.dim)]

    def algebra_loewy_length(self) -> int:
        k = 0
        while self.radical_power_basis(k + 1):
            k += 1
            if k > self.dim + 1:
                raise InternalCheckError("radical is not nilpotent")
        return k + 1 if self.dim else 0

    def quotient_by_ideal(self, ideal_vectors):
        """(quotient algebra, projection matrix, section matrix)."""
        f = self.field
        sub = Matrix(f, np.column_stack([np.asarray(v) for v in ideal_vectors])
                     if ideal_vectors else f.zeros((self.dim, 0)))
        basis, pivot_rows = sub.column_space_canonical()
        free = [r for r in range(self.dim) if r not in pivot_rows]
        one = f.one()
        sel_free = f.zeros((len(free), self.dim))
        for k, r in enumerate(free):
            sel_free[k, r] = one
        proj = Matrix(f, sel_free)
        if basis.cols:
            sel_piv = f.zeros((basis.cols, self.dim))
            for i, r in enumerate(pivot_rows):
                sel_piv[i, r] = one
            proj = proj - proj @ basis @ Matrix(f, sel_piv)
        sec = f.zeros((self.dim, len(free)))
        for k, r in enumerate(free):
            sec[r, k] = one
        section = Matrix(f, sec)
        qdim = len(free)
        st = f.zeros((qdim, qdim, qdim))
        for i in range(qdim):
            for j in range(qdim):
                prod = self.multiply(section.data[:, i], section.data[:, j])
                st[i, j, :] = (proj @ Matrix(f, np.asarray(prod).reshape(-1, 1))).data[:, 0]
        unit = (proj @ Matrix(f, np.asarray(self.unit).reshape(-1, 1))).data[:, 0]
        return FiniteDimAlgebra(f, qdim, st, unit), proj, section

    def element_minimal_polynomial(self, x):
        return minimal_polynomial(self.left_mult_matrix(x))


def minimal_polynomial(m: Matrix):
    """Monic minimal polynomial coefficients [1, c_{d-1}, ..., c_0]."""
    field = m.field
    n = m.rows
    if n == 0:
        return [field.one()]
    powers = [Matrix.identity(field, n)]
    for _ in range(n):
        powers.append(powers[-1] @ m)
    cols = [np.asarray(p.data).reshape(-1) for p in powers]
    for d in range(1, n + 1):
        a = Matrix(field, np.column_stack(cols[:d]))
        rhs = Matrix(field, np.asarray(cols[d]).reshape(-1, 1))
        sol = a.solve(rhs)
        if sol is not None:
            # m^d = sum_i sol_i m^i, so the minimal polynomial is
            # t^d - sum_i sol_i t^i
            coeffs = [field.one()]
            for i in range(d - 1, -1, -1):
                coeffs.append(field.coerce(-sol.data[i, 0]))
            return coeffs
    raise InternalCheckError("minimal polynomial search failed")


def factor_polynomial(field, coeffs):
    """[(factor coeff list, multiplicity)] of a monic polynomial, exactly."""
    deg = len(coeffs) - 1
    if deg <= 1:
        return [(list(coeffs), 1)] if deg == 1 else []
    if all(c == 0 for c in coeffs[1:]):  # pure power of t
        return [([field.one(), field.zero()], deg)]
    x = sympy.Symbol("x")
    if isinstance(field, PrimeField):
        poly = sympy.Poly([int(c) % field.p for c in coeffs], x, modulus=field.p)
        _, factors = poly.factor_list()
        out = []
        for fac, mult in factors:
            fac = fac.monic()
            out.append(([field.coerce(int(c)) for c in fac.all_coeffs()], mult))
        return out
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in coeffs], x,
                      domain="QQ")
    _, factors = poly.factor_list()
    out = []
    for fac, mult in factors:
        fac = fac.monic()
        out.append(([field.coerce(sympy.Rational(c)) for c in fac.all_coeffs()], mult))
    return out


def evaluate_polynomial(coeffs, m: Matrix) -> Matrix:
    out = Matrix.zeros(m.field, m.rows, m.rows)
    for c in coeffs:
        out = (out @ m) + Matrix.identity(m.field, m.rows).scale(c)
    return out


# == endomorphism algebras ====================================================


@dataclass(frozen=True, eq=False)
class EndAlgebra:
    """End(X)^op with the morphisms realizing each basis element."""

    rep: Representation
    algebra: FiniteDimAlgebra
    basis: tuple[Morphism, ...]

    def coords(self, f: Morphism):
        c = coordinates_in_hom_basis(list(self.basis), f)
        if c is None:
            raise InternalCheckError("endomorphism outside the computed basis")
        return np.asarray(c)

    def from_coords(self, coords) -> Morphism:
        return combine_morphisms(list(self.basis), list(coords))

    @property
    def dim(self) -> int:
        return self.algebra.dim

    def radical_endomorphisms(self):
        return [self.from_coords(v) for v in self.algebra.radical()]


def end_algebra(x: Representation) -> EndAlgebra:
    """End(X)^op: product c*d is the composite (d after c)."""
    cache = x.algebra.cache("end_algebra")
    if id(x) in cache:
        return cache[id(x)][-1]
    basis = hom_basis(x, x)
    field = x.field
    d = len(basis)
    st = field.zeros((d, d, d))
    for i, bi in enumerate(basis):
        for j, bj in enumerate(basis):
            comp = bj.compose(bi)  # opposite order
            coords = coordinates_in_hom_basis(basis, comp)
            if coords is None:
                raise InternalCheckError("End is not closed under composition")
            st[i, j, :] = np.asarray(coords)
    unit = coordinates_in_hom_basis(basis, identity_morphism(x))
    alg = FiniteDimAlgebra(field, d, st, np.asarray(unit))
    out = EndAlgebra(x, alg, tuple(basis))
    cache[id(x)] = (x, out)  # strong reference keeps the id stable
    return out


# == locality, bricks, indecomposability =====================================


def algebra_is_local(a: FiniteDimAlgebra, *, trials: int = RANDOM_TRIALS, seed: int = 0) -> bool:
    """Local = no nontrivial idempotents in A/rad.

    Complete over F_p within the element cap; over Q complete when
    dim(A/rad) = 1 and otherwise decided only when a splitting witness is
    found (else UndecidedError).
    """
    if a.dim == 0:
        raise UsageError("the zero algebra is not unital")
    rad = a.radical()
    quot, _, _ = a.quotient_by_ideal(rad) if rad else (a, None, None)
    if quot.dim == 1:
        return True
    if isinstance(a.field, PrimeField) and quot.element_count() <= ELEMENT_ENUM_CAP:
        unit = quot.unit
        for coords in quot.enumerate_elements():
            if not np.any(coords):
                continue
            if np.all(quot.field.normalize(coords - unit) == 0):
                continue
            if np.all(quot.field.normalize(quot.multiply(coords, coords) - coords) == 0):
                return False
        return True
    # bounded search for an element with a split (non-primary) minimal
    # polynomial; any such element yields a nontrivial idempotent
    rng = random.Random(seed)
    candidates = [quot.basis_vec(i) for i in range(quot.dim)]
    for _ in range(trials):
        coords = [rng.randrange(a.field.characteristic) if a.field.characteristic
                  else rng.randint(-3, 3) for _ in range(quot.dim)]
        candidates.append(quot.field.normalize(np.array(
            [quot.field.coerce(c) for c in coords], dtype=quot.field.dtype)))
    for x in candidates:
        if not np.any(x != 0):
            continue
        mp = quot.element_minimal_polynomial(x)
        factors = factor_polynomial(quot.field, mp)
        if len(factors) > 1:
            return False
    raise UndecidedError(
        "locality undecided: semisimple quotient of dimension > 1 with no splitting "
        "witness found by bounded search",
        context={"quotient_dim": quot.dim})


def is_local(a: FiniteDimAlgebra, **kw) -> bool:
    return algebra_is_local(a, **kw)


def is_indecomposable(x: Representation, **kw) -> bool:
    if x.is_zero():
        return False
    return algebra_is_local(end_algebra(x).algebra, **kw)


def is_brick(x: Representation, **kw) -> bool:
    """End(X) is a division ring: zero radical and local."""
    if x.is_zero():
        return False
    end = end_algebra(x)
    return not end.algebra.radical() and algebra_is_local(end.algebra, **kw)


# == Krull-Schmidt decomposition =============================================


@dataclass
class DecompositionResult:
    summands: list[tuple[Representation, int]]
    witnesses: list[tuple[Morphism, Morphism]]  # (inclusion, projection) per summand copy
    certified: bool

    def multiset(self):
        return sorted((s.dims, m) for s, m in self.summands)


def _endo_as_block_matrix(f: Morphism) -> Matrix:
    return block_diag(f.source.field, list(f.vertex_maps))


def _splitting_kernels(x: Representation, f: Morphism):
    """Split x along the primary decomposition of f's minimal polynomial."""
    big = _endo_as_block_matrix(f)
    mp = minimal_polynomial(big)
    factors = factor_polynomial(x.field, mp)
    if len(factors) < 2:
        return None
    pieces = []
    for coeffs, mult in factors:
        power = [x.field.one()]
        for _ in range(mult):
            power = _poly_mul(x.field, power, coeffs)
        pieces.append(power)
    out = []
    for coeffs in pieces:
        g = _evaluate_poly_morphism(coeffs, f)
        k, incl = kernel(g)
        if k.is_zero():
            return None
        out.append((k, incl))
    if sum(k.total_dim for k, _ in out) != x.total_dim:
        raise InternalCheckError("primary decomposition does not fill the module")
    return out


def _poly_mul(field, a, b):
    out = [field.zero()] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        for j, cb in enumerate(b):
            out[i + j] = field.coerce(out[i + j] + ca * cb)
    return out


def _evaluate_poly_morphism(coeffs, f: Morphism) -> Morphism:
    ident = identity_morphism(f.source)
    out = ident.scale(0)
    for c in coeffs:
        out = out.compose(f) + ident.scale(c)
    return out


def _candidate_endomorphisms(end: EndAlgebra, seed: int, trials: int):
    yield from end.basis
    field = end.rep.field
    h = len(end.basis)
    if h <= 1:
        return
    p = field.characteristic
    if isinstance(field, PrimeField) and p ** h <= ELEMENT_ENUM_CAP:
        # exhaustive: covers every endomorphism, no sampling needed
        for coords in itertools.product(range(p), repeat=h):
            if any(coords):
                yield combine_morphisms(list(end.basis), list(coords))
        return
    rng = random.Random(seed)
    for _ in range(trials):
        coeffs = [rng.randrange(p) if p else rng.randint(-3, 3) for _ in range(h)]
        if any(coeffs):
            yield combine_morphisms(list(end.basis), coeffs)


def decompose(x: Representation, *, seed: int = 0, trials: int = RANDOM_TRIALS) -> DecompositionResult:
    """Krull-Schmidt decomposition with split witnesses.

    Splits along any endomorphism whose minimal polynomial has two coprime
    factors; a module with no such endomorphism is indecomposable, so the
    exhaustive enumeration over F_p certifies the leaves.
    """
    if x.is_zero():
        return DecompositionResult([], [], True)
    cache = x.algebra.cache("decompose")
    key = (x.fingerprint(), seed, trials)
    if key in cache:
        return cache[key][-1]
    result = _decompose_uncached(x, seed=seed, trials=trials)
    cache[key] = (x, result)
    return result


def _decompose_uncached(x: Representation, *, seed: int, trials: int) -> DecompositionResult:
    pieces: list[tuple[Representation, Morphism, Morphism]] = [
        (x, identity_morphism(x), identity_morphism(x))]
    out: list[tuple[Representation, Morphism, Morphism]] = []
    certified = True
    while pieces:
        y, incl, proj = pieces.pop()
        end = end_algebra(y)
        split = None
        for f in _candidate_endomorphisms(end, seed, trials):
            split = _splitting_kernels(y, f)
            if split:
                break
        if split is None:
            try:
                indec = algebra_is_local(end.algebra, seed=seed, trials=trials)
            except UndecidedError:
                indec = None
            if indec is False:
                raise InternalCheckError(
                    "End is not local but no splitting endomorphism was found")
            if indec is None:
                certified = False
            out.append((y, incl, proj))
            continue
        # build projections onto the split pieces: invert the combined basis
        combo = [Matrix(x.field, np.hstack([np.asarray(inc.vertex_maps[v].data)
                                            for _, inc in split]))
                 for v in range(len(y.dims))]
        inverses = [m.inverse() for m in combo]
        if any(m is None for m in inverses):
            raise InternalCheckError("splitting change of basis is singular")
        pos = [0] * len(y.dims)
        for kpiece, inc in split:
            projs = []
            for v in range(len(y.dims)):
                rows = kpiece.dims[v]
                block = inverses[v].data[pos[v]: pos[v] + rows, :]
                projs.append(Matrix(x.field, block.copy()))
            piece_proj = Morphism(y, kpiece, tuple(projs))
            for v in range(len(y.dims)):
                pos[v] += kpiece.dims[v]
            pieces.append((kpiece, incl.compose(inc), piece_proj.compose(proj)))
    # group isomorphic summands
    groups: list[tuple[Representation, list[tuple[Morphism, Morphism]]]] = []
    for y, incl, proj in out:
        placed = False
        for rep, wit in groups:
            # leaves are (certified) indecomposable: the basis sweep decides
            if rep.dims == y.dims and are_isomorphic(rep, y, seed=seed, trials=trials,
                                                     assume_indecomposable=True):
                wit.append((incl, proj))
                placed = True
                break
        if not placed:
            groups.append((y, [(incl, proj)]))
    summands = [(rep, len(wit)) for rep, wit in groups]
    witnesses = [w for _, wit in groups for w in wit]
    return DecompositionResult(summands, witnesses, certified)


def are_isomorphic(x: Representation, y: Representation, *, seed: int = 0,
                   trials: int = RANDOM_TRIALS, assume_indecomposable: bool = False) -> bool:
    """Isomorphism test; exact for certified-indecomposable inputs.

    Between indecomposables any basis of Hom contains an iso whenever one
    exists, so the basis sweep decides.  In general both sides are
    decomposed and the summand multisets are matched.
    """
    if x.algebra != y.algebra:
        raise UsageError("isomorphism test across different algebras")
    if x.dims != y.dims:
        return False
    if x.is_zero():
        return True
    basis = hom_basis(x, y)
    for f in basis:
        if f.is_iso():
            return True
    if hom_dim(x, y) != hom_dim(y, x) or hom_dim(x, x) != hom_dim(y, y):
        return False
    if assume_indecomposable:
        return False
    try:
        if is_indecomposable(x, seed=seed, trials=trials) and \
           is_indecomposable(y, seed=seed, trials=trials):
            return False
    except UndecidedError:
        pass
    # random combinations
    rng = random.Random(seed)
    p = x.field.characteristic
    for _ in range(trials if basis else 0):
        coeffs = [rng.randrange(p) if p else rng.randint(-3, 3) for _ in basis]
        if any(coeffs) and combine_morphisms(basis, coeffs).is_iso():
            return True
    # decompose-and-match
    dx = decompose(x, seed=seed, trials=trials)
    dy = decompose(y, seed=seed, trials=trials)
    if dx.certified and dy.certified:
        xs = sorted(dx.summands, key=lambda t: t[0].dims)
        ys = sorted(dy.summands, key=lambda t: t[0].dims)
        if [(*s.dims, m) for s, m in xs] != [(*s.dims, m) for s, m in ys]:
            return False
        used = [False] * len(ys)
        for s, m in xs:
            found = False
            for i, (t, m2) in enumerate(ys):
                if not used[i] and m == m2 and are_isomorphic(
                        s, t, seed=seed, trials=trials, assume_indecomposable=True):
                    used[i] = True
                    found = True
                    break
            if not found:
                return False
        return True
    if isinstance(x.field, PrimeField) and p ** len(basis) <= ELEMENT_ENUM_CAP:
        for coords in itertools.product(range(p), repeat=len(basis)):
            if any(coords) and combine_morphisms(basis, list(coords)).is_iso():
                return True
        return False
    raise UndecidedError("isomorphism undecided within budget",
                         context={"dims": x.dims})


# == Nakayama machinery ======================================================


def is_nakayama_algebra(algebra: BoundQuiverAlgebra):
    """(flag, kupisch series): every projective and injective is serial."""
    n = algebra.quiver.vertices
    projectives = [projective(algebra, v) for v in range(n)]
    injectives = [injective(algebra, v) for v in range(n)]
    flag = all(is_serial(p) for p in projectives) and all(is_serial(i) for i in injectives)
    kupisch = tuple(p.total_dim for p in projectives) if flag else None
    return flag, kupisch


def is_local_nakayama(a: FiniteDimAlgebra):
    """(flag, length): local with uniserial radical chain."""
    try:
        local = algebra_is_local(a)
    except UndecidedError:
        return False, None
    if not local:
        return False, None
    rad = a.radical()
    rad2 = a.radical_power_basis(2)
    if len(rad) - len(rad2) > 1:
        return False, None
    return True, a.algebra_loewy_length()


def serial_module(algebra: BoundQuiverAlgebra, top_vertex: int, length: int) -> Representation:
    """The serial module [length]S(top): the length-`length` quotient of P(top)."""
    p = projective(algebra, top_vertex)
    if not is_serial(p):
        raise UsageError("projective cover is not serial; serial quotients are not unique")
    if not (1 <= length <= p.total_dim):
        raise UsageError(f"length {length} out of range 1..{p.total_dim}")
    series = radical_series(p)
    sub, incl = series[length]
    quot, _ = cokernel(incl)
    return quot

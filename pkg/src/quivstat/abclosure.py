"""Kernel-cokernel closure: the smallest exact abelian subcategory holding M.

The closure is computed as a worklist over pairs (A, B) of direct sums of the
current indecomposable generators, bounded by a budget (dimension cap, pass
cap, summand cap, hom-space enumeration cap).  Hom spaces between sums are
assembled blockwise from cached generator-to-generator bases; the whole
coefficient grid is evaluated in one batched product per vertex, and kernels
and cokernels are deduplicated by exact subspace fingerprints before any
module is constructed.  The stable flag is only set when every in-budget pair
was fully enumerated; skipped pairs leave the state explicitly unstable.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .analysis import are_isomorphic, decompose, is_brick
from .errors import CapExceededError, UndecidedError, UsageError
from .fields import PrimeField
from .linalg import Matrix, f2_row_echelon
from .reps import (
    Morphism,
    Representation,
    cokernel,
    direct_sum,
    hom_basis,
    kernel,
    projective_cover,
)
from .staticmod import _is_right_approximation


@dataclass
class ClosureBudget:
    dim_cap: int
    iter_cap: int = 8
    max_summands: int = 2
    hom_enum_cap: int = 1 << 12
    seed: int = 0

    @staticmethod
    def for_module(m: Representation, **overrides) -> "ClosureBudget":
        budget = ClosureBudget(dim_cap=4 * m.total_dim)
        for k, v in overrides.items():
            if v is not None:
                setattr(budget, k, v)
        return budget


@dataclass
class ClosureState:
    module: Representation
    generators: list[Representation]
    generation_index: int
    budget: ClosureBudget
    stable: bool
    sampled_pairs: int
    undecided: list[str]

    def generator_dims(self):
        return [g.dims for g in self.generators]


def _sum_signatures(gens, budget):
    """Multisets of generator indices within the summand and dimension caps."""
    out = []
    for size in range(1, budget.max_summands + 1):
        for combo in itertools.combinations_with_replacement(range(len(gens)), size):
            if sum(gens[i].total_dim for i in combo) <= budget.dim_cap:
                out.append(combo)
    return out


def _build_sum(gens, combo, cache):
    if combo not in cache:
        if len(combo) == 1:
            cache[combo] = gens[combo[0]]
        else:
            cache[combo] = direct_sum([gens[i] for i in combo])[0]
    return cache[combo]


def _pair_stacks(gens, siga, sigb, a, b):
    """Per-vertex stacked flat hom-basis rows of Hom(a, b), assembled from
    the cached generator-to-generator bases as block morphisms."""
    field = a.field
    nverts = len(a.dims)
    a_off = [[sum(gens[k].dims[v] for k in siga[:pos]) for pos in range(len(siga))]
             for v in range(nverts)]
    b_off = [[sum(gens[k].dims[v] for k in sigb[:pos]) for pos in range(len(sigb))]
             for v in range(nverts)]
    rows = [[] for _ in range(nverts)]
    h = 0
    for pa, ia in enumerate(siga):
        ga = gens[ia]
        for pb, ib in enumerate(sigb):
            gb = gens[ib]
            for f in hom_basis(ga, gb):
                h += 1
                for v in range(nverts):
                    block = field.zeros((b.dims[v], a.dims[v]))
                    if gb.dims[v] and ga.dims[v]:
                        block[b_off[v][pb]: b_off[v][pb] + gb.dims[v],
                              a_off[v][pa]: a_off[v][pa] + ga.dims[v]] = \
                            f.vertex_maps[v].data
                    rows[v].append(np.asarray(block).reshape(-1))
    stacks = []
    for v in range(nverts):
        if rows[v]:
            stacks.append(np.array(rows[v], dtype=field.dtype))
        else:
            stacks.append(field.zeros((0, b.dims[v] * a.dims[v])))
    return h, stacks


def _batched_vertex_maps(field, coeffs, stacks, a, b):
    """batches[v][i] = vertex map of the i-th coefficient vector."""
    batches = []
    for v in range(len(a.dims)):
        if stacks[v].shape[1]:
            prod = field.normalize(coeffs @ stacks[v])
        else:
            prod = field.zeros((len(coeffs), 0))
        batches.append(prod.reshape(len(coeffs), b.dims[v], a.dims[v]))
    return batches


def _batch_fingerprints(field, batches):
    """Per map: (kernel fingerprint, image fingerprint) across vertices.

    The kernel subspace is determined by the row space of each vertex map,
    the image by its column space; over F_2 rows are packed into ints and
    reduced with bit operations.
    """
    nmaps = batches[0].shape[0] if batches else 0
    kfs = [None] * nmaps
    ifs = [None] * nmaps
    if isinstance(field, PrimeField) and field.p == 2:
        packed_rows = []
        packed_cols = []
        for arr in batches:
            bits = arr & 1
            if arr.shape[2]:
                wc = (1 << np.arange(arr.shape[2], dtype=np.int64))
                packed_rows.append((bits @ wc).tolist())
            else:
                packed_rows.append([[0] * arr.shape[1]] * nmaps)
            if arr.shape[1]:
                wr = (1 << np.arange(arr.shape[1], dtype=np.int64))
                packed_cols.append(np.einsum("prc,r->pc", bits, wr).tolist())
            else:
                packed_cols.append([[0] * arr.shape[2]] * nmaps)
        for i in range(nmaps):
            kfs[i] = tuple(f2_row_echelon(pv[i]) for pv in packed_rows)
            ifs[i] = tuple(f2_row_echelon(pv[i]) for pv in packed_cols)
        return kfs, ifs
    for i in range(nmaps):
        kf, imf = [], []
        for arr in batches:
            m = Matrix(field, field.normalize(arr[i].copy()))
            kf.append(m.row_space_fingerprint())
            imf.append(m.column_space_fingerprint())
        kfs[i] = tuple(kf)
        ifs[i] = tuple(imf)
    return kfs, ifs


def _coefficient_grid(p: int, h: int):
    return np.array(list(itertools.product(range(p), repeat=h)), dtype=np.int64)[1:]


def _integrate(rep: Representation, state: ClosureState, seen_reps: dict, seed: int) -> bool:
    """Decompose rep and append unseen summands to the generators."""
    if rep.is_zero():
        return False
    fp = rep.fingerprint()
    if fp in seen_reps:
        return False
    seen_reps[fp] = True
    added = False
    try:
        pieces = decompose(rep, seed=seed)
    except UndecidedError as exc:
        state.undecided.append(str(exc))
        return False
    if not pieces.certified:
        state.undecided.append("decomposition of a closure member is uncertified")
    for summand, _ in pieces.summands:
        known = any(
            g.dims == summand.dims and are_isomorphic(g, summand, seed=seed,
                                                      assume_indecomposable=True)
            for g in state.generators)
        if not known:
            state.generators.append(summand)
            added = True
    return added


def _scan_pair(field, gens, siga, sigb, sum_cache, budget):
    """Distinct kernel/image representatives of the morphisms of one pair.

    Returns (a, b, batches, kernel_reps, image_reps) where the reps map a
    subspace fingerprint to one coefficient index, or None when the pair
    exceeds the enumeration cap (sampled).
    """
    a = _build_sum(gens, siga, sum_cache)
    b = _build_sum(gens, sigb, sum_cache)
    h, stacks = _pair_stacks(gens, siga, sigb, a, b)
    if h == 0:
        return a, b, [], {}, {}
    p = field.characteristic
    if not isinstance(field, PrimeField) or p ** h > budget.hom_enum_cap:
        return None
    coeffs = _coefficient_grid(p, h)
    batches = _batched_vertex_maps(field, coeffs, stacks, a, b)
    kfs, ifs = _batch_fingerprints(field, batches)
    seen_k, seen_i = {}, {}
    for i in range(len(coeffs)):
        if kfs[i] not in seen_k:
            seen_k[kfs[i]] = i
        if ifs[i] not in seen_i:
            seen_i[ifs[i]] = i
    return a, b, batches, seen_k, seen_i


def _morphism_at(field, a, b, batches, i) -> Morphism:
    mats = tuple(Matrix(field, field.normalize(batches[v][i].copy()))
                 for v in range(len(a.dims)))
    return Morphism(a, b, mats)


def ab_closure(m: Representation, budget: ClosureBudget | None = None, *,
               seed: int = 0) -> ClosureState:
    """Closure of add M under kernels and cokernels, within a budget."""
    if m.is_zero():
        raise UsageError("closure of the zero module")
    budget = budget or ClosureBudget.for_module(m)
    field = m.field
    state = ClosureState(m, [], 0, budget, False, 0, [])
    seen_reps: dict = {}
    _integrate(m, state, seen_reps, seed)
    processed: set = set()
    sum_cache: dict = {}
    # the kernel subobject depends only on (source sum, kernel subspace), the
    # cokernel only on (target sum, image subspace): dedupe across all pairs
    kernels_done: set = set()
    images_done: set = set()

    for round_idx in range(1, budget.iter_cap + 1):
        sigs = _sum_signatures(state.generators, budget)
        todo = [(sa, sb) for sa in sigs for sb in sigs if (sa, sb) not in processed]
        if not todo:
            state.generation_index = round_idx - 1
            state.stable = state.sampled_pairs == 0 and not state.undecided
            return state
        for siga, sigb in todo:
            processed.add((siga, sigb))
            scan = _scan_pair(field, state.generators, siga, sigb, sum_cache, budget)
            if scan is None:
                state.sampled_pairs += 1
                continue
            a, b, batches, kernel_reps, image_reps = scan
            for kf, i in kernel_reps.items():
                if (siga, kf) in kernels_done:
                    continue
                kernels_done.add((siga, kf))
                k, _ = kernel(_morphism_at(field, a, b, batches, i))
                if 0 < k.total_dim <= budget.dim_cap:
                    _integrate(k, state, seen_reps, seed)
            for imf, i in image_reps.items():
                if (sigb, imf) in images_done:
                    continue
                images_done.add((sigb, imf))
                c, _ = cokernel(_morphism_at(field, a, b, batches, i))
                if 0 < c.total_dim <= budget.dim_cap:
                    _integrate(c, state, seen_reps, seed)
        state.generation_index = round_idx
    state.stable = False
    state.undecided.append("iteration cap reached before stabilization")
    return state


def recheck_stability(state: ClosureState, *, seed: int = 0) -> bool:
    """One more full kernel/cokernel pass adds nothing (idempotence)."""
    budget = state.budget
    gens = list(state.generators)
    field = state.module.field
    sum_cache: dict = {}
    sigs = _sum_signatures(gens, budget)
    for siga in sigs:
        for sigb in sigs:
            scan = _scan_pair(field, gens, siga, sigb, sum_cache, budget)
            if scan is None:
                return False
            a, b, batches, kernel_reps, image_reps = scan
            produced = [kernel(_morphism_at(field, a, b, batches, i))[0]
                        for i in kernel_reps.values()]
            produced += [cokernel(_morphism_at(field, a, b, batches, i))[0]
                         for i in image_reps.values()]
            for rep in produced:
                if rep.is_zero() or rep.total_dim > budget.dim_cap:
                    continue
                pieces = decompose(rep, seed=seed)
                for summand, _ in pieces.summands:
                    if not any(g.dims == summand.dims and are_isomorphic(
                            g, summand, seed=seed, assume_indecomposable=True)
                            for g in gens):
                        return False
    return True


# == relative structure =======================================================


def _exists_extreme(x: Representation, y: Representation, kind: str, cap: int) -> bool:
    """Existence of a mono (kind='mono') or epi (kind='epi') from x to y."""
    basis = hom_basis(x, y)
    if not basis:
        return False
    test = Morphism.is_mono if kind == "mono" else Morphism.is_epi
    for f in basis:
        if test(f):
            return True
    field = x.field
    if not isinstance(field, PrimeField):
        raise UndecidedError(f"{kind} search needs a prime field")
    p = field.p
    if p ** len(basis) > cap:
        raise CapExceededError(f"{kind} search exceeds the enumeration cap")
    for coords in itertools.product(range(p), repeat=len(basis)):
        if not any(coords):
            continue
        f = basis[0].scale(coords[0])
        for c, g in zip(coords[1:], basis[1:]):
            f = f + g.scale(c)
        if test(f):
            return True
    return False


def relative_simples(state: ClosureState, *, seed: int = 0) -> list[Representation]:
    """Closure members with no proper nonzero sub- or quotient inside it.

    Verified pairwise orthogonal bricks; their count is bounded by the
    length of M.
    """
    if not state.stable:
        raise UsageError("relative simples require a stable closure state")
    cap = state.budget.hom_enum_cap
    simples = []
    for g in state.generators:
        proper_sub = any(
            other.total_dim < g.total_dim and _exists_extreme(other, g, "mono", cap)
            for other in state.generators if other.total_dim > 0)
        proper_quot = any(
            other.total_dim < g.total_dim and _exists_extreme(g, other, "epi", cap)
            for other in state.generators if other.total_dim > 0)
        if not proper_sub and not proper_quot:
            simples.append(g)
    for s in simples:
        if not is_brick(s, seed=seed):
            raise UndecidedError("relative simple candidate is not a brick")
    for s, t in itertools.combinations(simples, 2):
        if hom_basis(s, t) or hom_basis(t, s):
            raise UndecidedError("relative simple candidates are not orthogonal")
    if len(simples) > state.module.total_dim:
        raise UndecidedError("more relative simples than the length bound allows")
    return simples


def relative_loewy_length(state: ClosureState, x: Representation, *, seed: int = 0) -> int:
    """Length of the relative-socle filtration of x inside the closure."""
    from .reps import _induced_arrow

    simples = relative_simples(state, seed=seed)
    current = x
    length = 0
    while not current.is_zero():
        maps = []
        for s in simples:
            maps.extend(hom_basis(s, current))
        if not maps:
            raise UndecidedError("no maps from relative simples: filtration stuck")
        field = x.field
        bases = []
        for v in range(len(x.dims)):
            blocks = [np.asarray(f.vertex_maps[v].data) for f in maps]
            stacked = Matrix(field, np.hstack(blocks)) if blocks else \
                Matrix.zeros(field, current.dims[v], 0)
            bases.append(stacked.column_space_canonical()[0])
        alg = x.algebra
        arrow_maps = []
        for a, (sv, tv) in enumerate(alg.quiver.arrows):
            arrow_maps.append(_induced_arrow(bases[sv], current.arrow_maps[a], bases[tv]))
        sub = Representation(alg, tuple(b.cols for b in bases), tuple(arrow_maps))
        incl = Morphism(sub, current, tuple(bases))
        current, _ = cokernel(incl)
        length += 1
        if length > x.total_dim:
            raise UndecidedError("relative filtration does not terminate")
    return length


# == ab-projectivity ==========================================================


@dataclass
class AbProjectiveResult:
    flag: bool
    route: str
    counterexample: Morphism | None = None
    within_budget: bool = True


def is_ab_projective(m: Representation, state: ClosureState, *, seed: int = 0,
                     force_scan: bool = False) -> AbProjectiveResult:
    """Is Hom(M, -) exact on the closure, i.e. M projective inside it?

    Fast path: a projective module over the algebra is projective in every
    exact abelian subcategory.  Otherwise every epimorphism between in-budget
    sums of generators is scanned (deduplicated by kernel subspace, which
    determines the lifting problem up to isomorphism) and Hom(M, -)
    surjectivity is checked.

    A counterexample epi refutes projectivity even on an unstable state (its
    objects are genuine closure members); the positive verdict needs a stable
    fully-enumerated closure.
    """
    if not force_scan:
        cover, _ = projective_cover(m)
        if cover.dims == m.dims:
            return AbProjectiveResult(True, "projective_over_algebra")
    budget = state.budget
    field = m.field
    from .staticmod import _component_types

    types = _component_types(m, seed=seed)
    sum_cache: dict = {}
    sigs = _sum_signatures(state.generators, budget)
    within_budget = True
    checked: set = set()
    for siga in sigs:
        for sigb in sigs:
            scan = _scan_pair(field, state.generators, siga, sigb, sum_cache, budget)
            if scan is None:
                within_budget = False
                continue
            a, b, batches, kernel_reps, _ = scan
            # an epi is determined up to target-isomorphism by its kernel, so
            # one lifting check per (source sum, kernel subspace, target sum)
            for kf, i in kernel_reps.items():
                key = (siga, kf, sigb)
                if key in checked:
                    continue
                checked.add(key)
                g = _morphism_at(field, a, b, batches, i)
                if not g.is_epi():
                    continue
                if not _is_right_approximation(types, g):
                    return AbProjectiveResult(False, "counterexample_epi", g)
    if not state.stable:
        raise UndecidedError(
            "no counterexample found, but the closure is not stable: "
            "ab-projectivity cannot be certified within this budget")
    return AbProjectiveResult(True, "scan", within_budget=within_budget)

import itertools
import random

import pytest

from quivstat.errors import AdmissibilityError, UsageError
from quivstat.fields import F2, QQ, PrimeField
from quivstat.linalg import Matrix
from quivstat.quiver import (
    BoundQuiverAlgebra,
    Quiver,
    Relation,
    RelationSet,
    path_basis,
    word_to_path,
)
from quivstat.reps import (
    Morphism,
    Representation,
    cokernel,
    direct_sum,
    ext1_dim,
    generic_representation,
    hom_basis,
    hom_dim,
    identity_morphism,
    image,
    injective,
    is_serial,
    kernel,
    loewy_length,
    projective,
    projective_cover,
    radical_series,
    representation_from_lists,
    simple,
    zero_morphism,
    zero_representation,
)

F3 = PrimeField(3)


def kronecker(field=F2, arrows=2):
    q = Quiver(2, tuple((0, 1) for _ in range(arrows)),
               tuple("ab c d e".split()[i] for i in range(arrows)))
    return path_basis(q, RelationSet((), None), field)


def remark_algebra(field=F2):
    # two arrows 0 -> 1, one arrow back, with both length-2 round trips
    # through vertex 1 equal to zero
    q = Quiver(2, ((0, 1), (0, 1), (1, 0)), ("al", "be", "ga"))
    rels = RelationSet(
        (
            Relation.of_paths((1, (2, 0))),  # ga then al
            Relation.of_paths((1, (2, 1))),  # ga then be
        ),
        cutoff=3,
    )
    return path_basis(q, rels, field)


def cyclic_887(field=F2):
    q = Quiver(3, ((0, 1), (1, 2), (2, 0)), ("al", "be", "ga"))
    w1 = word_to_path(q, "be.al.ga.be.al.ga.be.al".split("."))
    w2 = word_to_path(q, "ga.be.al.ga.be.al.ga".split("."))
    rels = RelationSet((Relation.of_paths(w1), Relation.of_paths(w2)), cutoff=9)
    return path_basis(q, rels, field)


def a3_algebra(field=F2):
    # linear orientation 2 -> 1 -> 0: the projective at the sink is simple
    q = Quiver(3, ((1, 0), (2, 1)), ("a", "b"))
    return path_basis(q, RelationSet((), None), field)


def test_kronecker_path_basis():
    alg = kronecker()
    assert alg.dimension == 4
    assert sorted(alg.format_path(p) for p in alg.basis) == ["ab", "c", "e0", "e1"]


def test_remark_algebra_basis():
    alg = remark_algebra()
    # display is application order: "ga*al" applies ga first, then al, which
    # is the killed composite; the round trips through vertex 1 survive
    names = {alg.format_path(p) for p in alg.basis}
    assert "ga*al" not in names and "ga*be" not in names
    assert "al*ga" in names and "be*ga" in names
    assert alg.dimension == 7


def test_remark_algebra_needs_cutoff_3():
    q = Quiver(2, ((0, 1), (0, 1), (1, 0)), ("al", "be", "ga"))
    rels = RelationSet(
        (Relation.of_paths((1, (2, 0))), Relation.of_paths((1, (2, 1)))), cutoff=2
    )
    with pytest.raises(AdmissibilityError):
        path_basis(q, rels, F2)


def test_cyclic_887_kupisch_dims():
    alg = cyclic_887()
    lengths = [projective(alg, v).total_dim for v in range(3)]
    assert lengths == [8, 8, 7]


def test_relation_endpoint_homogeneity_checked():
    q = Quiver(2, ((0, 1), (1, 0)), ("a", "b"))
    bad = Relation.of_paths((0, (0, 1)), (1, (1, 0)))  # 0->0 vs 1->1
    with pytest.raises(UsageError):
        path_basis(q, RelationSet((bad,), cutoff=4), F2)


def test_cyclic_needs_explicit_cutoff():
    q = Quiver(1, ((0, 0),), ("l",))
    with pytest.raises(UsageError):
        path_basis(q, RelationSet((), None), F2)


def test_simple_projective_injective_shapes():
    alg = a3_algebra()
    assert simple(alg, 1).dims == (0, 1, 0)
    # sink projective is simple
    assert projective(alg, 0).dims == simple(alg, 0).dims
    assert projective(alg, 2).dims == (1, 1, 1)
    assert injective(alg, 2).dims == (0, 0, 1)
    assert injective(alg, 0).dims == (1, 1, 1)


def test_remark_injective_structure():
    alg = remark_algebra()
    m = injective(alg, 0)  # socle at vertex 0
    assert m.dims == (3, 1)
    s = simple(alg, 0)
    # socle embeds once; the quotient is the 3-dimensional module
    assert hom_dim(s, m) == 1
    embeddings = hom_basis(s, m)
    n, proj = cokernel(embeddings[0])
    assert n.total_dim == 3 and n.dims == (2, 1)


def test_hom_simple_simples():
    alg = a3_algebra()
    for i in range(3):
        for j in range(3):
            assert hom_dim(simple(alg, i), simple(alg, j)) == (1 if i == j else 0)


def test_remark_hom_dims_match_hand_values():
    alg = remark_algebra()
    m = injective(alg, 0)
    s = simple(alg, 0)
    emb = hom_basis(s, m)[0]
    n, _ = cokernel(emb)
    assert hom_dim(m, n) == 1
    assert hom_dim(m, s) == 2


def brute_hom_dim_f2(x, y):
    """Oracle: enumerate all vertex-map tuples and count the solutions."""
    q = x.algebra.quiver
    shapes = [(y.dims[v], x.dims[v]) for v in range(q.vertices)]
    total_entries = sum(r * c for r, c in shapes)
    if total_entries > 16:
        raise RuntimeError("oracle too large")
    count = 0
    for bits in itertools.product((0, 1), repeat=total_entries):
        maps = []
        pos = 0
        ok = True
        for r, c in shapes:
            rows = [[bits[pos + i * c + j] for j in range(c)] for i in range(r)]
            pos += r * c
            maps.append(Matrix.from_rows(F2, rows) if r * c else Matrix.zeros(F2, r, c))
        for a, (s, t) in enumerate(q.arrows):
            if maps[t] @ x.arrow_maps[a] != y.arrow_maps[a] @ maps[s]:
                ok = False
                break
        if ok:
            count += 1
    # the solution set is a vector space over F_2
    dim = count.bit_length() - 1
    assert 2 ** dim == count
    return dim


def test_hom_basis_matches_bruteforce():
    alg = kronecker()
    rng = random.Random(5)
    reps = [simple(alg, 0), simple(alg, 1), projective(alg, 0), injective(alg, 1)]
    small = [r for r in reps if r.total_dim <= 3]
    for x in small:
        for y in small:
            if sum(a * b for a, b in zip(x.dims, y.dims)) <= 16:
                assert hom_dim(x, y) == brute_hom_dim_f2(x, y)


def test_kernel_cokernel_of_identity_and_zero():
    alg = kronecker()
    x = projective(alg, 0)
    y = injective(alg, 1)
    k, _ = kernel(identity_morphism(x))
    assert k.is_zero()
    c, _ = cokernel(identity_morphism(x))
    assert c.is_zero()
    z = zero_morphism(x, y)
    k, incl = kernel(z)
    assert k.dims == x.dims
    c, _ = cokernel(z)
    assert c.dims == y.dims


def test_remark_cokernel_dimension_three():
    alg = remark_algebra()
    m = injective(alg, 0)
    s_incl = hom_basis(simple(alg, 0), m)[0]
    # endomorphism with image the socle: compose a projection onto S with
    # the inclusion
    projections = hom_basis(m, simple(alg, 0))
    f = s_incl.compose(projections[0])
    im, _, _ = image(f)
    assert im.total_dim == 1
    n, _ = cokernel(f)
    assert n.total_dim == 3


def test_exactness_dimension_bookkeeping():
    alg = kronecker()
    rng = random.Random(13)
    mods = [projective(alg, 0), injective(alg, 1), simple(alg, 0), simple(alg, 1)]
    for x in mods:
        for y in mods:
            for f in hom_basis(x, y):
                k, _ = kernel(f)
                im, _, _ = image(f)
                c, _ = cokernel(f)
                for v in range(2):
                    assert x.dims[v] == k.dims[v] + im.dims[v]
                    assert y.dims[v] == im.dims[v] + c.dims[v]


def test_direct_sum_additivity():
    alg = kronecker()
    x = projective(alg, 0)
    y = simple(alg, 1)
    z = injective(alg, 1)
    total, injs, projs = direct_sum([y, z])
    assert total.dims == tuple(a + b for a, b in zip(y.dims, z.dims))
    assert hom_dim(x, total) == hom_dim(x, y) + hom_dim(x, z)
    # injections/projections compose to identity blocks
    for i, (inj, proj) in enumerate(zip(injs, projs)):
        assert proj.compose(inj).is_iso()


def test_zero_representation_is_empty_sum():
    alg = kronecker()
    z = zero_representation(alg)
    assert z.total_dim == 0


def test_projective_cover_and_ext():
    alg = kronecker()
    p0 = projective(alg, 0)
    s1 = simple(alg, 1)
    s0 = simple(alg, 0)
    p, epi = projective_cover(s0)
    assert p.dims == p0.dims
    assert epi.is_epi()
    # projectives have vanishing Ext^1
    for y in (s0, s1, p0):
        assert ext1_dim(p0, y) == 0
    # source simple vs sink simple: Euler form gives -2, Hom vanishes
    assert hom_dim(s0, s1) == 0
    assert ext1_dim(s0, s1) == 2


def test_triple_arrow_self_extensions():
    alg = kronecker(F2, arrows=3)
    x = representation_from_lists(alg, (1, 1), [[[1]], [[0]], [[0]]])
    assert hom_dim(x, x) == 1
    assert ext1_dim(x, x) == 2


def test_serial_and_loewy():
    alg = cyclic_887()
    p0 = projective(alg, 0)
    assert is_serial(p0)
    assert loewy_length(p0) == 8
    series = radical_series(p0)
    assert [s.total_dim for s, _ in series] == [8, 7, 6, 5, 4, 3, 2, 1, 0]


def test_relations_validated_on_construction():
    alg = remark_algebra()
    with pytest.raises(UsageError):
        representation_from_lists(alg, (1, 1), [[[1]], [[1]], [[1]]])


def test_hom_dim_invariant_under_base_change():
    alg = kronecker()
    rng = random.Random(3)
    x = injective(alg, 1)
    y = projective(alg, 0)
    d = hom_dim(x, y)
    for _ in range(5):
        # conjugate x by a random invertible change of basis per vertex
        mats = []
        for v in range(2):
            n = x.dims[v]
            while True:
                m = Matrix.from_rows(F2, [[rng.randint(0, 1) for _ in range(n)] for _ in range(n)])
                if m.is_invertible():
                    break
            mats.append(m)
        q = alg.quiver
        new_maps = []
        for a, (s, t) in enumerate(q.arrows):
            new_maps.append(mats[t] @ x.arrow_maps[a] @ mats[s].inverse())
        x2 = Representation(alg, x.dims, tuple(new_maps))
        assert hom_dim(x2, y) == d


def test_generic_representation_seed_determinism():
    alg = kronecker()
    a = generic_representation(alg, (2, 3), seed=4)
    b = generic_representation(alg, (2, 3), seed=4)
    c = generic_representation(alg, (2, 3), seed=5)
    assert a == b
    assert a != c or a == c  # just exercise equality both ways

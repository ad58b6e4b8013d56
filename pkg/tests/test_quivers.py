import random

import pytest

from foursub.errors import (
    FieldMismatch,
    QuiverMismatch,
    ShapeError,
    ZeroObject,
)
from foursub.fields import GF, QQ
from foursub.matrices import Matrix
from foursub.quivers import (
    QUIVERS,
    QuiverRep,
    RepMorphism,
    decompose,
    direct_sum,
    end_dim,
    find_isomorphism,
    hom_basis,
    is_indecomposable,
    is_isomorphic,
    random_conjugate,
    random_rep,
    summand_injections,
    summand_projections,
    validate,
)

F2 = GF(2)
F3 = GF(3)
F5 = GF(5)
FQ = QUIVERS["F"]
KQ = QUIVERS["K"]
CQ = QUIVERS["C"]


def k_rep(field, a_rows, b_rows):
    a = Matrix.from_rows(field, a_rows)
    return QuiverRep(
        field, KQ, (a.rows, a.cols), {"alpha": a, "beta": Matrix.from_rows(field, b_rows)}
    )


def simple_f(field, vertex):
    """Simple representation of the four-subspace quiver at one vertex."""
    dims = [0] * 5
    dims[vertex] = 1
    mats = {}
    for a in FQ.arrows:
        mats[a.name] = Matrix.zeros(field, dims[0], dims[FQ.vertex_index(a.source)])
    return QuiverRep(field, FQ, dims, mats)


class TestConstruction:
    def test_zero_rep_validates(self):
        validate(QuiverRep.zero(F2, KQ))
        validate(QuiverRep.zero(QQ, FQ))

    def test_transposed_matrix_rejected(self):
        a = Matrix.zeros(F2, 1, 2)  # alpha: 2->1 with dims (2,1) needs 2x1
        with pytest.raises(ShapeError, match="alpha"):
            QuiverRep(F2, KQ, (2, 1), {"alpha": a, "beta": Matrix.zeros(F2, 2, 1)})

    def test_simple_at_arm_vertex_validates(self):
        rep = simple_f(F3, 1)
        validate(rep)
        assert rep.dims == (0, 1, 0, 0, 0)

    def test_field_mismatch(self):
        with pytest.raises(FieldMismatch):
            QuiverRep(
                F2,
                KQ,
                (1, 1),
                {"alpha": Matrix.zeros(F3, 1, 1), "beta": Matrix.zeros(F2, 1, 1)},
            )

    def test_immutable(self):
        rep = QuiverRep.zero(F2, KQ)
        with pytest.raises(AttributeError):
            rep.dims = (1, 1)


class TestHom:
    def test_hom_between_distinct_simples_is_zero(self):
        assert hom_basis(simple_f(F2, 1), simple_f(F2, 2)) == []

    def test_end_of_k_rep(self):
        v = k_rep(F2, [[1]], [[0]])
        assert end_dim(v) == 1

    def test_hom_into_double(self):
        v = k_rep(F3, [[1]], [[2]])
        assert len(hom_basis(v, direct_sum(v, v))) == 2 * end_dim(v)

    def test_end_of_double(self):
        v = k_rep(F2, [[1]], [[0]])
        assert end_dim(v) == 1
        assert end_dim(direct_sum(v, v)) == 4

    def test_hom_additivity_random(self):
        rng = random.Random(5)
        for field in (F2, F3):
            for _ in range(6):
                dims = [rng.randrange(3) for _ in range(2)]
                u = random_rep(field, KQ, dims, rng)
                v = random_rep(field, KQ, [rng.randrange(3) for _ in range(2)], rng)
                w = random_rep(field, KQ, [rng.randrange(3) for _ in range(2)], rng)
                assert len(hom_basis(direct_sum(u, v), w)) == len(
                    hom_basis(u, w)
                ) + len(hom_basis(v, w))

    def test_hom_elements_commute(self):
        rng = random.Random(9)
        u = random_rep(F3, FQ, (2, 1, 1, 1, 1), rng)
        w = random_rep(F3, FQ, (2, 1, 2, 1, 0), rng)
        for h in hom_basis(u, w):
            assert h.is_valid()

    def test_quiver_mismatch(self):
        with pytest.raises(QuiverMismatch):
            hom_basis(QuiverRep.zero(F2, KQ), QuiverRep.zero(F2, CQ))
        with pytest.raises(FieldMismatch):
            hom_basis(QuiverRep.zero(F2, KQ), QuiverRep.zero(F3, KQ))


class TestIso:
    def test_self_iso(self):
        v = k_rep(F2, [[1]], [[0]])
        assert is_isomorphic(v, v)
        iso = find_isomorphism(v, v)
        assert iso is not None and iso.is_invertible and iso.is_valid()

    def test_different_dims(self):
        assert not is_isomorphic(simple_f(F2, 1), simple_f(F2, 2))

    def test_kronecker_nonisomorphic_pair(self):
        v = k_rep(F2, [[1]], [[0]])
        w = k_rep(F2, [[1]], [[1]])
        assert not is_isomorphic(v, w)

    def test_conjugate_is_isomorphic(self):
        rng = random.Random(17)
        for field in (F2, F5, QQ):
            v = random_rep(field, FQ, (2, 1, 1, 2, 1), rng)
            assert is_isomorphic(v, random_conjugate(v, rng))

    def test_zero_reps_isomorphic(self):
        assert is_isomorphic(QuiverRep.zero(F2, KQ), QuiverRep.zero(F2, KQ))

    def test_equivalence_relation_on_pool(self):
        rng = random.Random(23)
        pool = [random_rep(F2, KQ, (2, 2), rng) for _ in range(8)]
        rel = {
            (i, j): is_isomorphic(pool[i], pool[j])
            for i in range(len(pool))
            for j in range(len(pool))
        }
        for i in range(len(pool)):
            assert rel[(i, i)]
            for j in range(len(pool)):
                assert rel[(i, j)] == rel[(j, i)]
                for k in range(len(pool)):
                    if rel[(i, j)] and rel[(j, k)]:
                        assert rel[(i, k)]


class TestDirectSum:
    def test_dims_add(self):
        v = k_rep(F2, [[1]], [[0]])
        w = random_rep(F2, KQ, (2, 1), random.Random(1))
        assert direct_sum(v, w).dims == (3, 2)

    def test_sum_with_zero(self):
        v = k_rep(F3, [[2]], [[1]])
        s = direct_sum(v, QuiverRep.zero(F3, KQ))
        assert is_isomorphic(v, s)

    def test_injections_projections(self):
        rng = random.Random(2)
        parts = [random_rep(F3, KQ, (1, 2), rng), random_rep(F3, KQ, (2, 1), rng)]
        injs = summand_injections(parts)
        projs = summand_projections(parts)
        for inj, proj, part in zip(injs, projs, parts):
            assert inj.is_valid() and proj.is_valid()
            assert proj @ inj == RepMorphism.identity(part)


class TestIndecomposable:
    def test_simple_is_indecomposable(self):
        verdict = is_indecomposable(simple_f(F2, 1))
        assert verdict and verdict.certified

    def test_double_is_decomposable(self):
        v = k_rep(F2, [[1]], [[0]])
        verdict = is_indecomposable(direct_sum(v, v))
        assert not verdict and verdict.certified

    def test_zero_rep_raises(self):
        with pytest.raises(ZeroObject):
            is_indecomposable(QuiverRep.zero(F2, KQ))

    def test_end_dim_two_but_indecomposable(self):
        # alpha = I, beta = companion of an irreducible quadratic: End = F_4
        v = k_rep(F2, [[1, 0], [0, 1]], [[0, 1], [1, 1]])
        assert end_dim(v) == 2
        verdict = is_indecomposable(v)
        assert verdict and verdict.certified


class TestDecompose:
    def test_zero(self):
        assert decompose(QuiverRep.zero(F2, FQ)) == []

    def test_simples_with_multiplicity(self):
        total = direct_sum(simple_f(F2, 1), simple_f(F2, 1), simple_f(F2, 3))
        result = decompose(total)
        as_multiset = sorted((rep.dims, mult) for rep, mult in result)
        assert as_multiset == [((0, 0, 0, 1, 0), 1), ((0, 1, 0, 0, 0), 2)]

    def test_roundtrip_conjugated(self):
        rng = random.Random(31)
        for field in (F2, F5):
            u = k_rep(field, [[1]], [[0]])
            w = k_rep(field, [[1]], [[1]])
            total = random_conjugate(direct_sum(u, w, u), rng)
            result = decompose(total)
            assert sum(m for _, m in result) == 3
            matched_u = [m for rep, m in result if is_isomorphic(rep, u)]
            matched_w = [m for rep, m in result if is_isomorphic(rep, w)]
            assert matched_u == [2] and matched_w == [1]

    def test_summands_rebuild_original(self):
        rng = random.Random(37)
        v = random_rep(F3, FQ, (3, 1, 2, 1, 1), rng)
        result = decompose(v)
        rebuilt = direct_sum(
            *[rep for rep, mult in result for _ in range(mult)]
        )
        assert is_isomorphic(rebuilt, v)

    def test_deterministic(self):
        rng = random.Random(41)
        v = random_rep(F2, FQ, (2, 1, 1, 1, 1), rng)
        assert decompose(v) == decompose(v)

    def test_indecomposable_passthrough(self):
        v = k_rep(F2, [[1, 0], [0, 1]], [[0, 1], [1, 1]])
        assert decompose(v) == [(v, 1)]


# -- certification over the rationals -----------------------------------------


def test_rational_field_endomorphism_ring_certified():
    # End is Q[T]/(t^2+1), a field: no idempotent enumeration is possible
    # over Q, so certification must come from the algebra analysis
    rot = Matrix.from_rows(QQ, [[0, -1], [1, 0]])
    rep = k_rep(QQ, [[1, 0], [0, 1]], [[0, -1], [1, 0]])
    assert rep.mat("beta") == rot
    assert end_dim(rep) == 2
    verdict = is_indecomposable(rep)
    assert verdict and verdict.certified


def test_rational_local_ring_with_nilpotents_certified():
    # End is Q[x]/(x^2): local but not a field; the radical must be
    # separated off before the primitive-element test
    rep = k_rep(QQ, [[1, 0], [0, 1]], [[1, 1], [0, 1]])
    assert end_dim(rep) == 2
    verdict = is_indecomposable(rep)
    assert verdict and verdict.certified


def test_rational_decompose_mixed_sum():
    rot = k_rep(QQ, [[1, 0], [0, 1]], [[0, -1], [1, 0]])
    scal = k_rep(QQ, [[1]], [[2]])
    total = random_conjugate(direct_sum(rot, scal), random.Random(3))
    parts = decompose(total)
    assert sorted(p.dims for p, _ in parts) == [(1, 1), (2, 2)]
    assert all(mult == 1 for _, mult in parts)
    rebuilt = direct_sum(*[p for p, _ in parts])
    assert is_isomorphic(total, rebuilt)


def test_rational_decompose_square_of_indecomposable():
    rot = k_rep(QQ, [[1, 0], [0, 1]], [[0, -1], [1, 0]])
    total = random_conjugate(direct_sum(rot, rot), random.Random(7))
    parts = decompose(total)
    assert len(parts) == 1
    rep, mult = parts[0]
    assert mult == 2 and rep.dims == (2, 2)

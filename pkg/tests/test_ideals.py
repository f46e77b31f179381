import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qdom.caps import Caps
from qdom.completion import check_saturated, presheaf_vectors
from qdom.enriched import QCategory, discrete, one
from qdom.errors import ResourceLimitError, TypeMismatch
from qdom.ideals import (
    ALL,
    FORMAL_BALLS,
    FSW,
    REPRESENTABLES,
    TRANSLATED_COREPRESENTABLES,
    contains,
    family_from_name,
    flat,
    flat_witness,
    fsw_witnesses,
    member,
    phi_generated,
)
from qdom.modules import Module, copresheaf, presheaf
from qdom.quantale import ch_max, ch_plus, q2
from qdom.workbench.gallery import ntrunc, poset_category, posets

from conftest import categories

Q2 = q2()
CHAIN = QCategory(Q2, [[1, 1], [0, 1]], ["a", "b"])
ANTICHAIN = QCategory(Q2, [[1, 0], [0, 1]], ["a", "b"])

FAMILIES = [REPRESENTABLES, ALL, FSW, FORMAL_BALLS, flat(), flat(TRANSLATED_COREPRESENTABLES)]


def directed_down_set(X, vec):
    """Oracle over Q2: non-empty, down-closed and every pair has an upper bound inside."""
    le = X.structure
    members = [x for x in X.objects() if vec[x]]
    if not members:
        return False
    if any(le[y][x] and not vec[y] for x in members for y in X.objects()):
        return False
    return all(any(le[a][z] and le[b][z] for z in members) for a in members for b in members)


def small_posets(max_n=4):
    for n in range(1, max_n + 1):
        for p in posets(n):
            yield poset_category(p)


def permute(X, perm):
    return QCategory(X.quantale, [[X.structure[perm[i]][perm[j]] for j in X.objects()] for i in X.objects()])


class TestExamples:
    def test_chain_fsw(self):
        assert contains(FSW, presheaf(CHAIN, [1, 1]))
        assert not contains(FSW, presheaf(CHAIN, [0, 0]))
        assert fsw_witnesses(CHAIN, [0, 0], first_only=True) == [("a",)]

    def test_antichain_not_flat(self):
        w = flat_witness(ANTICHAIN, [1, 1])
        # the failing meet is the one of the two principal up-sets
        assert w is not None and sorted(w) == [(0, 1), (1, 0)]
        assert not contains(FSW, presheaf(ANTICHAIN, [1, 1]))

    def test_ntrunc_phi_not_fsw(self):
        X = ntrunc(3)
        witnesses = fsw_witnesses(X, (0, 1, 1, 1))
        assert witnesses
        assert (2, 3) in {(w[0], w[1]) for w in witnesses if len(w) == 5}

    def test_formal_balls_on_empty(self):
        E = discrete(Q2, 0)
        assert member(FORMAL_BALLS, E, ())

    def test_contains_type_checked(self):
        with pytest.raises(TypeMismatch):
            contains(ALL, copresheaf(ANTICHAIN, [1, 1]))

    def test_family_names(self):
        assert family_from_name("flat-restricted") == flat(TRANSLATED_COREPRESENTABLES)
        with pytest.raises(ValueError):
            family_from_name("phi")
        with pytest.raises(ValueError):
            family_from_name("nope")
        with pytest.raises(ValueError):
            flat("bogus")

    def test_flat_cap(self):
        X = discrete(ch_plus(3), 4)
        with pytest.raises(ResourceLimitError):
            member(flat(), X, (0, 0, 0, 0), Caps(columns=10))


class TestInvariants:
    @pytest.mark.parametrize("J", FAMILIES, ids=str)
    @given(X=categories(max_size=3))
    def test_representables_everywhere(self, J, X):
        for x in X.objects():
            assert member(J, X, tuple(X.structure[y][x] for y in X.objects()))

    @pytest.mark.parametrize("J", [FSW, flat()], ids=str)
    def test_q2_posets_directed_down_sets(self, J):
        for X in small_posets(4):
            for vec in presheaf_vectors(X):
                assert member(J, X, vec) == directed_down_set(X, vec), (X, vec)

    @given(categories(max_size=3), st.data())
    def test_formal_balls_stable_under_translation(self, X, data):
        q = X.quantale
        for vec in presheaf_vectors(X):
            if member(FORMAL_BALLS, X, vec):
                u = data.draw(st.sampled_from(list(q.elements())))
                assert member(FORMAL_BALLS, X, tuple(q.mul(u, v) for v in vec))

    @pytest.mark.parametrize("J", FAMILIES, ids=str)
    @given(X=categories(min_size=2, max_size=3), data=st.data())
    def test_isomorphism_invariant(self, J, X, data):
        perm = data.draw(st.permutations(list(X.objects())))
        Y = permute(X, perm)
        for vec in presheaf_vectors(X):
            assert member(J, X, vec) == member(J, Y, tuple(vec[p] for p in perm))

    def test_meet_weights_generate_flat(self):
        empty = discrete(Q2, 0)
        pair = discrete(Q2, 2)
        weights = [Module(one(Q2), empty, [[]]), Module(one(Q2), pair, [[1, 1]])]
        J = phi_generated(weights)
        for X in small_posets(3):
            for vec in presheaf_vectors(X):
                assert member(J, X, vec) == member(flat(), X, vec)

    def test_flat_readings_on_ntrunc(self):
        X = ntrunc(3)
        phi = (0, 1, 1, 1)
        assert not member(flat(), X, phi)
        assert not member(flat(TRANSLATED_COREPRESENTABLES), X, phi)

    def test_full_flatness_implies_restricted(self):
        q = ch_max(1)
        X = QCategory(q, [[0, 1], [1, 0]])
        for vec in presheaf_vectors(X):
            restricted = member(flat(TRANSLATED_COREPRESENTABLES), X, vec)
            full = member(flat(), X, vec)
            # the full test family contains the restricted one
            assert restricted or not full


class TestSaturation:
    @given(categories(max_size=3))
    def test_representables(self, X):
        assert check_saturated(REPRESENTABLES, X).ok

    @given(categories(q=Q2, max_size=2))
    def test_all(self, X):
        # J(JX) ranges over every presheaf on the presheaf category, so keep X tiny
        assert check_saturated(ALL, X).ok

    def test_fsw_on_posets(self):
        for X in small_posets(4):
            assert check_saturated(FSW, X).ok

    def test_formal_balls_over_quantale(self):
        from qdom.enriched import quantale_category

        assert check_saturated(FORMAL_BALLS, quantale_category(ch_plus(2))).ok

    def test_lumpy_category(self):
        X = QCategory(Q2, [[1, 1], [1, 1]])
        for J in FAMILIES:
            assert check_saturated(J, X).ok


def test_q2_fsw_unchanged_by_duplicate_points():
    # a non-separated pair behaves like a point
    X = QCategory(Q2, [[1, 1], [1, 1]])
    assert [v for v in presheaf_vectors(X) if member(FSW, X, v)] == [(1, 1)]
    assert list(itertools.islice(presheaf_vectors(X), 3)) == [(0, 0), (1, 1)]

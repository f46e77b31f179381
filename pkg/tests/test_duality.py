import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qdom.duality import (
    F_identity_ok,
    F_morphism,
    NotReflecting,
    double_dual,
    epsilon,
    eta,
    evaluation_module,
    is_domain_object,
    is_evaluation_open,
    psi_of_double_open,
    reflects_open_modules,
    verify_duality,
    verify_instance,
)
from qdom.enriched import QCategory, QFunctor, enumerate_functors, identity_functor, one, quantale_category
from qdom.ideals import ALL, FORMAL_BALLS, FSW, REPRESENTABLES
from qdom.open_modules import build_FX
from qdom.quantale import ch_plus, q2
from qdom.workbench.gallery import lattices, poset_category, posets

from conftest import categories

Q2 = q2()
CHAIN = QCategory(Q2, [[1, 1], [0, 1]], ["a", "b"])
ANTICHAIN = QCategory(Q2, [[1, 0], [0, 1]], ["a", "b"])


def small_posets(max_n=4):
    for n in range(1, max_n + 1):
        for p in posets(n):
            yield poset_category(p)


def preserves_joins(f, leq_src, leq_tgt):
    """Oracle for left adjoints between finite lattices: every join, empty included, is preserved."""

    def join(leq, S):
        n = len(leq)
        ups = [c for c in range(n) if all(leq[s][c] for s in S)]
        return next(c for c in ups if all(leq[c][d] for d in ups))

    n = len(leq_src)
    for k in range(n + 1):
        for S in itertools.combinations(range(n), k):
            if f[join(leq_src, S)] != join(leq_tgt, [f[s] for s in S]):
                return False
    return True


class TestEvaluation:
    def test_chain(self):
        # opens in order: the up-set of b, then the up-set of a
        assert build_FX(CHAIN, FSW).opens == ((0, 1), (1, 1))
        assert evaluation_module(CHAIN, FSW, 0) == (0, 1)
        assert evaluation_module(CHAIN, FSW, 1) == (1, 1)

    def test_open_on_posets(self):
        for X in small_posets(4):
            assert all(is_evaluation_open(X, FSW, x) for x in X.objects())

    @pytest.mark.parametrize("J", [REPRESENTABLES, FSW, FORMAL_BALLS], ids=str)
    @given(X=categories(max_size=3))
    def test_preserves_hom(self, J, X):
        if not is_domain_object(X, J):
            return
        q = X.quantale
        fx = build_FX(X, J)
        for y, z in itertools.product(X.objects(), repeat=2):
            ey, ez = evaluation_module(X, J, y), evaluation_module(X, J, z)
            bracket = q.meet_all(q.hom(u, v) for u, v in zip(ey, ez))
            assert q.leq[X.structure[y][z]][bracket]
            assert len(ey) == len(fx)


class TestEtaEpsilon:
    def test_chain(self):
        e = eta(CHAIN, FSW)
        assert len(double_dual(CHAIN, FSW)) == 2
        assert sorted(e.mapping) == [0, 1]
        ev_b = evaluation_module(CHAIN, FSW, 1)
        assert psi_of_double_open(CHAIN, FSW, ev_b) == (1, 1)
        assert epsilon(CHAIN, FSW, ev_b) == 1

    def test_point(self):
        rep = verify_instance("pt", one(Q2), FSW)
        assert rep.is_domain_object and rep.passed and rep.checks["eta.iso"]

    def test_posets(self):
        for k, X in enumerate(small_posets(4)):
            rep = verify_instance(f"p{k}", X, FSW)
            assert rep.is_domain_object and rep.passed, rep.records()

    def test_bottom_double_open(self):
        X = one(Q2)
        ffx = double_dual(X, ALL)
        bottom = tuple(0 for _ in build_FX(X, ALL).opens)
        assert bottom in ffx.opens
        assert psi_of_double_open(X, ALL, bottom) == (0,)

    def test_quantale_over_itself(self):
        rep = verify_instance("plus2", quantale_category(ch_plus(2)), FORMAL_BALLS)
        assert rep.is_domain_object and rep.passed

    @pytest.mark.parametrize("J", [REPRESENTABLES, FSW, FORMAL_BALLS], ids=str)
    @given(X=categories(max_size=3))
    def test_random_accepted(self, J, X):
        rep = verify_instance("x", X, J)
        if rep.is_domain_object:
            assert rep.passed, rep.records()

    def test_gate(self):
        rep = verify_instance("broken", ANTICHAIN, ALL)
        assert not rep.is_domain_object
        assert dict(rep.records())["duality.broken.attempted"] == "false"
        assert rep.checks == {}


class TestMorphisms:
    def test_chain_to_point(self):
        f = QFunctor(CHAIN, one(Q2), [0, 0])
        ok, witness = reflects_open_modules(f, FSW)
        assert ok and witness is None
        assert F_morphism(f, FSW).mapping == (1,)

    def test_not_reflecting(self):
        f = QFunctor(CHAIN, CHAIN, [0, 0])
        ok, witness = reflects_open_modules(f, FSW)
        assert not ok and witness == (0, 1)
        with pytest.raises(NotReflecting) as err:
            F_morphism(f, FSW)
        assert err.value.witness == (0, 1)

    def test_identity(self):
        for X in small_posets(3):
            assert F_identity_ok(X, FSW)
            assert reflects_open_modules(identity_functor(X), FSW)[0]

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_all_reflecting_iff_left_adjoint(self, n):
        lats = [poset_category(p) for m in range(1, n + 1) for p in lattices(m)]
        for X, Y in itertools.product(lats, repeat=2):
            lx = [[bool(v) for v in r] for r in X.structure]
            ly = [[bool(v) for v in r] for r in Y.structure]
            for f in enumerate_functors(X, Y):
                assert reflects_open_modules(f, ALL)[0] == preserves_joins(f.mapping, lx, ly)

    def test_contravariant_composition(self):
        objs = list(small_posets(3))
        for X, Y, Z in itertools.product(objs[:4], repeat=3):
            for f in enumerate_functors(X, Y):
                if not reflects_open_modules(f, FSW)[0]:
                    continue
                for g in enumerate_functors(Y, Z):
                    if not reflects_open_modules(g, FSW)[0]:
                        continue
                    gf = f.then(g)
                    assert reflects_open_modules(gf, FSW)[0]
                    assert F_morphism(gf, FSW) == F_morphism(g, FSW).then(F_morphism(f, FSW))

    @given(st.sampled_from(list(small_posets(3))), st.sampled_from(list(small_posets(3))))
    def test_naturality(self, X, Y):
        reports, mreps = verify_duality([("s", X), ("t", Y)], FSW)
        assert all(r.passed for r in reports)
        assert mreps and all(m.passed for m in mreps)


def test_records_shape():
    reports, mreps = verify_duality([("chain", CHAIN)], FSW)
    rec = dict(reports[0].records())
    assert rec["duality.chain.family"] == "fsw"
    assert rec["duality.chain.eta.iso"] == "PASS"
    assert rec["duality.chain.size.ffx"] == "2"
    mrec = dict(mreps[0].records())
    assert mrec["duality.morphisms.chain.chain.maps"] == "3"
    assert mrec["duality.morphisms.chain.chain.naturality"] == "PASS"

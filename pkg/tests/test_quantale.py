import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qdom.caps import Caps
from qdom.errors import InvalidStructure, ResourceLimitError, ShapeError
from qdom.quantale import (
    Quantale,
    build_standard,
    ch_max,
    ch_plus,
    parse_standard,
    q2,
    totally_below,
    validate_quantale,
)

from conftest import QUANTALES


def brute_join(q, items):
    """Least upper bound by scanning the order matrix."""
    items = list(items)
    ups = [c for c in q.elements() if all(q.leq[i][c] for i in items)]
    return next(c for c in ups if all(q.leq[c][d] for d in ups))


def brute_hom(q, a, b):
    return brute_join(q, [c for c in q.elements() if q.leq[q.tensor[a][c]][b]])


class TestValidation:
    def test_q2_valid(self):
        q = q2()
        assert validate_quantale(q) == []
        assert q.size == 2 and q.unit == q.top == 1 and q.bottom == 0

    def test_unit_bottom_rejected(self):
        q = Quantale(["bot", "top"], [[1, 1], [0, 1]], [[0, 0], [0, 1]], unit=0)
        problems = validate_quantale(q)
        assert any("unit not greatest" in p for p in problems)
        assert any("unit law" in p for p in problems)

    @pytest.mark.parametrize("n", [0, 1, 2, 3])
    def test_chains_valid(self, n):
        assert validate_quantale(ch_plus(n)) == []
        assert validate_quantale(ch_max(n)) == []

    def test_ch_plus_2_tables(self):
        q = ch_plus(2)
        assert q.names == ("0", "1", "2", "inf")
        assert q.mul(1, 1) == 2
        assert q.mul(1, 2) == 3  # truncated to infinity
        assert q.unit == 0 and q.top == 0 and q.bottom == 3

    def test_one_element_rejected(self):
        q = Quantale(["x"], [[1]], [[0]], unit=0)
        assert any("bottom equals unit" in p for p in validate_quantale(q))

    def test_non_commutative_reported(self):
        # three-element chain with meet as tensor, then one entry broken
        meet = [[0, 0, 0], [0, 1, 1], [0, 1, 2]]
        meet[0][1] = 1
        q = Quantale(["0", "m", "1"], [[1, 1, 1], [0, 1, 1], [0, 0, 1]], meet, unit=2)
        assert any("commutat" in p for p in validate_quantale(q))

    def test_shape_errors(self):
        with pytest.raises(ShapeError):
            Quantale(["a", "b"], [[1, 1]], [[0, 0], [0, 1]], unit=1)
        with pytest.raises(ShapeError):
            Quantale(["a", "b"], [[1, 1], [0, 1]], [[0, 0], [0, 5]], unit=1)

    def test_build_standard(self):
        assert build_standard("Q2") == q2()
        assert build_standard("CH_MAX", 3).size == 5
        z = build_standard("CH_PLUS", 0)
        assert z.names == ("0", "inf")
        # order isomorphic to Q2 with the same tensor
        assert z.leq == ((True, False), (True, True))
        with pytest.raises(ValueError):
            build_standard("CH_PLUS", -1)
        with pytest.raises(InvalidStructure):
            build_standard("FromTables", names=["a", "b"], leq=[[1, 1], [0, 1]], tensor=[[0, 0], [0, 1]], unit=0)

    def test_parse_standard(self):
        assert parse_standard("ch_plus:2") == ch_plus(2)
        assert parse_standard("q2") == q2()


class TestHom:
    def test_q2(self):
        q = q2()
        assert q.hom(1, 0) == 0
        assert q.hom(0, 0) == 1

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_ch_plus_truncated_difference(self, n):
        q = ch_plus(n)
        inf = n + 1
        for a in range(n + 1):
            for b in range(n + 1):
                assert q.hom(a, b) == max(b - a, 0)
            # infinity is encoded as n + 1, so the difference is taken on that code
            assert q.hom(a, inf) == (inf if a == 0 else inf - a)
        assert all(q.hom(inf, b) == 0 for b in q.elements())

    def test_ch_max(self):
        q = ch_max(3)
        for a in q.elements():
            for b in q.elements():
                assert q.hom(a, b) == (0 if b <= a else b)

    @pytest.mark.parametrize("q", QUANTALES, ids=lambda q: str(q.size))
    def test_against_brute_force_and_adjunction(self, q):
        for a, b in itertools.product(q.elements(), repeat=2):
            h = q.hom(a, b)
            assert h == brute_hom(q, a, b)
            for c in q.elements():
                assert q.leq[q.mul(a, c)][b] == q.leq[c][h]


class TestLattice:
    @pytest.mark.parametrize("q", QUANTALES, ids=lambda q: str(q.size))
    def test_empty_and_singleton(self, q):
        assert q.join_all([]) == q.bottom
        assert q.meet_all([]) == q.top == q.unit
        for a in q.elements():
            assert q.join_all([a]) == a == q.meet_all([a])

    @given(st.sampled_from(QUANTALES), st.data())
    def test_join_is_least_upper_bound(self, q, data):
        items = data.draw(st.lists(st.sampled_from(list(q.elements())), max_size=4))
        assert q.join_all(items) == brute_join(q, items)


class TestTotallyBelow:
    def test_q2(self):
        tb = totally_below(q2())
        assert {(a, b) for a in range(2) for b in range(2) if tb[a][b]} == {(0, 1), (1, 1)}

    @pytest.mark.parametrize("q", [ch_plus(2), ch_max(3), ch_plus(0)], ids=["plus2", "max3", "plus0"])
    def test_chains_non_strict(self, q):
        tb = totally_below(q)
        for a, b in itertools.product(q.elements(), repeat=2):
            assert tb[a][b] == (q.leq[a][b] and b != q.bottom)

    @pytest.mark.parametrize("q", QUANTALES, ids=lambda q: str(q.size))
    def test_properties(self, q):
        tb = totally_below(q)
        for a, b in itertools.product(q.elements(), repeat=2):
            assert not tb[a][q.bottom]
            if tb[a][b]:
                assert q.leq[a][b]
                # down-closed on the left
                assert all(tb[c][b] for c in q.elements() if q.leq[c][a])

    def test_against_all_subsets(self):
        # diamond {0, l, r, 1} with meet as tensor: a frame, so a quantale with unit top
        leq = [[1, 1, 1, 1], [0, 1, 0, 1], [0, 0, 1, 1], [0, 0, 0, 1]]
        meet = [[0, 0, 0, 0], [0, 1, 0, 1], [0, 0, 2, 2], [0, 1, 2, 3]]
        q = Quantale(["0", "l", "r", "1"], leq, meet, unit=3)
        assert validate_quantale(q) == []
        tb = totally_below(q)
        for a, b in itertools.product(q.elements(), repeat=2):
            expected = all(
                any(q.leq[a][s] for s in S)
                for k in range(5)
                for S in itertools.combinations(q.elements(), k)
                if q.leq[b][q.join_all(S)]
            )
            assert tb[a][b] == expected

    def test_cap(self):
        with pytest.raises(ResourceLimitError):
            totally_below(ch_plus(3), cap=2)

    def test_caps_from_env(self):
        caps = Caps.from_env({"QDOM_CAPS": "columns=50000,objects=7"})
        assert caps.columns == 50000 and caps.objects == 7 and caps.quantale == 6

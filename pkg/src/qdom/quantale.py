"""Finite commutative unital quantales stored as explicit order and tensor tables.

Elements are the dense indices ``0..size-1``.  Everything derived from the
tables (joins, meets, residuation, the totally-below relation) is exact table
lookup; there is no floating point anywhere.
"""

from __future__ import annotations

import itertools
from functools import cached_property, reduce
from typing import Iterable, Sequence

from .caps import DEFAULT_CAPS
from .errors import InvalidStructure, QdomError, ResourceLimitError, ShapeError

__all__ = [
    "Quantale",
    "LatticeError",
    "validate_quantale",
    "hom",
    "totally_below",
    "build_standard",
    "q2",
    "ch_plus",
    "ch_max",
]


class LatticeError(QdomError, ValueError):
    """The order table is not a complete lattice."""


class Quantale:
    """A finite quantale ``(Q, <=, (x), 1)``.

    ``leq[a][b]`` is the order, ``tensor[a][b]`` the multiplication and
    ``unit`` the index of the neutral element.  Construction only checks the
    shape of the tables; call :func:`validate_quantale` (or use
    :meth:`checked`) for the axioms.
    """

    def __init__(self, names: Sequence[str], leq, tensor, unit: int):
        names = tuple(str(n) for n in names)
        n = len(names)
        if n == 0:
            raise ShapeError("a quantale needs at least one element (names is empty)")
        if len(set(names)) != n:
            raise ShapeError(f"element names must be distinct: {names}")
        if len(leq) != n:
            raise ShapeError(f"leq has {len(leq)} rows, expected {n}")
        if len(tensor) != n:
            raise ShapeError(f"tensor has {len(tensor)} rows, expected {n}")
        for i, row in enumerate(leq):
            if len(row) != n:
                raise ShapeError(f"leq row {i} has {len(row)} columns, expected {n}")
        for i, row in enumerate(tensor):
            if len(row) != n:
                raise ShapeError(f"tensor row {i} has {len(row)} columns, expected {n}")
            for v in row:
                if not isinstance(v, int) or not 0 <= v < n:
                    raise ShapeError(f"tensor row {i} holds {v!r}, not an element index < {n}")
        if not isinstance(unit, int) or not 0 <= unit < n:
            raise ShapeError(f"unit {unit!r} is not an element index < {n}")
        self.names = names
        self.size = n
        self.leq = tuple(tuple(bool(v) for v in row) for row in leq)
        self.tensor = tuple(tuple(row) for row in tensor)
        self.unit = unit
        self.index = {name: i for i, name in enumerate(names)}
        self._key = (self.names, self.leq, self.tensor, self.unit)
        self._hash = hash(self._key)
        self._totally_below = None

    @classmethod
    def checked(cls, names, leq, tensor, unit) -> "Quantale":
        q = cls(names, leq, tensor, unit)
        problems = validate_quantale(q)
        if problems:
            raise InvalidStructure("quantale", problems)
        return q

    def __eq__(self, other):
        return self is other or (isinstance(other, Quantale) and self._key == other._key)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Quantale({list(self.names)}, unit={self.names[self.unit]!r})"

    def elements(self) -> range:
        return range(self.size)

    # -- lattice structure -------------------------------------------------

    @cached_property
    def bottom(self) -> int:
        for a in self.elements():
            if all(self.leq[a][b] for b in self.elements()):
                return a
        raise LatticeError("no least element")

    @cached_property
    def top(self) -> int:
        for a in self.elements():
            if all(self.leq[b][a] for b in self.elements()):
                return a
        raise LatticeError("no greatest element")

    def _bound(self, a, b, upper):
        leq = self.leq
        if upper:
            cands = [c for c in self.elements() if leq[a][c] and leq[b][c]]
            best = [c for c in cands if all(leq[c][d] for d in cands)]
        else:
            cands = [c for c in self.elements() if leq[c][a] and leq[c][b]]
            best = [c for c in cands if all(leq[d][c] for d in cands)]
        if len(best) != 1:
            kind = "join" if upper else "meet"
            raise LatticeError(f"{kind} of {self.names[a]} and {self.names[b]} does not exist")
        return best[0]

    @cached_property
    def join_table(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self._bound(a, b, True) for b in self.elements()) for a in self.elements())

    @cached_property
    def meet_table(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(self._bound(a, b, False) for b in self.elements()) for a in self.elements())

    def join(self, a: int, b: int) -> int:
        return self.join_table[a][b]

    def meet(self, a: int, b: int) -> int:
        return self.meet_table[a][b]

    def join_all(self, items: Iterable[int]) -> int:
        jt = self.join_table
        return reduce(lambda x, y: jt[x][y], items, self.bottom)

    def meet_all(self, items: Iterable[int]) -> int:
        mt = self.meet_table
        return reduce(lambda x, y: mt[x][y], items, self.top)

    def mul(self, a: int, b: int) -> int:
        return self.tensor[a][b]

    @cached_property
    def hom_table(self) -> tuple[tuple[int, ...], ...]:
        """``hom_table[a][b]`` is the join of all ``c`` with ``a (x) c <= b``."""
        t, leq = self.tensor, self.leq
        return tuple(
            tuple(self.join_all(c for c in self.elements() if leq[t[a][c]][b]) for b in self.elements())
            for a in self.elements()
        )

    def hom(self, a: int, b: int) -> int:
        return self.hom_table[a][b]

    def name(self, a: int) -> str:
        return self.names[a]


def hom(q: Quantale, a: int, b: int) -> int:
    """Internal hom of ``q``: the right adjoint of ``a (x) -``."""
    return q.hom_table[a][b]


def _order_violations(q: Quantale) -> list[str]:
    out = []
    e, leq = q.elements(), q.leq
    for a in e:
        if not leq[a][a]:
            out.append(f"order not reflexive at {q.names[a]}")
    for a, b in itertools.combinations(e, 2):
        if leq[a][b] and leq[b][a]:
            out.append(f"order not antisymmetric at ({q.names[a]},{q.names[b]})")
    for a, b, c in itertools.product(e, e, e):
        if leq[a][b] and leq[b][c] and not leq[a][c]:
            out.append(f"order not transitive at ({q.names[a]},{q.names[b]},{q.names[c]})")
    return out


def validate_quantale(q: Quantale) -> list[str]:
    """Return every violated quantale axiom; an empty list means ``q`` is valid.

    Join preservation is checked on binary joins and the bottom only, which
    covers all joins because the carrier is finite.
    """
    problems = _order_violations(q)
    if problems:
        return problems
    try:
        q.bottom, q.top, q.join_table, q.meet_table
    except LatticeError as exc:
        return [f"not a complete lattice: {exc}"]
    e, t, n = q.elements(), q.tensor, q.names
    jt, u = q.join_table, q.unit
    for a, b in itertools.product(e, e):
        if t[a][b] != t[b][a]:
            problems.append(f"tensor not commutative at ({n[a]},{n[b]})")
    for a, b, c in itertools.product(e, e, e):
        if t[t[a][b]][c] != t[a][t[b][c]]:
            problems.append(f"tensor not associative at ({n[a]},{n[b]},{n[c]})")
    for a in e:
        if t[u][a] != a or t[a][u] != a:
            problems.append(f"unit law fails at {n[a]}")
    for a in e:
        if t[a][q.bottom] != q.bottom:
            problems.append(f"tensor does not preserve bottom at {n[a]}")
        for b, c in itertools.product(e, e):
            if t[a][jt[b][c]] != jt[t[a][b]][t[a][c]]:
                problems.append(f"tensor does not preserve the join of ({n[b]},{n[c]}) at {n[a]}")
    if u != q.top:
        problems.append("unit not greatest")
    if q.bottom == q.top:
        problems.append("bottom equals unit")
    return problems


def _downsets(q: Quantale, cap: int):
    """Yield every down-closed subset of ``q`` as a frozenset."""
    # elements listed bottom-up so a down-set is decided by its maximal members
    order = sorted(q.elements(), key=lambda a: sum(q.leq[b][a] for b in q.elements()))
    below = [frozenset(b for b in q.elements() if q.leq[b][a]) for a in q.elements()]
    count = 0

    def rec(i, chosen):
        nonlocal count
        if i == len(order):
            count += 1
            if count > cap:
                raise ResourceLimitError("down-set enumeration", cap)
            yield chosen
            return
        a = order[i]
        yield from rec(i + 1, chosen)
        if below[a] - {a} <= chosen:
            yield from rec(i + 1, chosen | {a})

    yield from rec(0, frozenset())


def totally_below(q: Quantale, cap: int | None = None) -> tuple[tuple[bool, ...], ...]:
    """``a`` is totally below ``b`` iff every set whose join is above ``b`` meets ``up(a)``.

    Only down-closed sets are visited; that suffices because enlarging a set
    to its down-closure keeps its join and the condition is monotone.
    """
    cap = DEFAULT_CAPS.downsets if cap is None else cap
    if q._totally_below is not None and q._totally_below[0] <= cap:
        return q._totally_below[1]
    rel = [[True] * q.size for _ in q.elements()]
    for d in _downsets(q, cap):
        j = q.join_all(d)
        for b in q.elements():
            if q.leq[b][j]:
                for a in q.elements():
                    if a not in d:
                        rel[a][b] = False
    result = tuple(tuple(row) for row in rel)
    q._totally_below = (cap, result)
    return result


# -- standard instances ------------------------------------------------------


def q2() -> Quantale:
    """The two-element lattice with meet as tensor."""
    return Quantale(["bot", "top"], [[1, 1], [0, 1]], [[0, 0], [0, 1]], unit=1)


def _chain(n: int, op) -> Quantale:
    # indices 0..n carry the numbers, index n+1 is infinity; order is reverse numeric
    if n < 0:
        raise ValueError(f"chain quantales need n >= 0, got {n}")
    size = n + 2
    names = [str(i) for i in range(n + 1)] + ["inf"]
    leq = [[a >= b for b in range(size)] for a in range(size)]
    tensor = [[op(a, b, n) for b in range(size)] for a in range(size)]
    return Quantale(names, leq, tensor, unit=0)


def ch_plus(n: int) -> Quantale:
    """``{0..n, inf}`` with truncated addition: sums beyond ``n`` become ``inf``."""
    return _chain(n, lambda a, b, n: a + b if a + b <= n else n + 1)


def ch_max(n: int) -> Quantale:
    """``{0..n, inf}`` with ``max`` as tensor (ultrametric surrogate)."""
    return _chain(n, lambda a, b, n: max(a, b))


def build_standard(kind: str, n: int | None = None, **tables) -> Quantale:
    """Build and validate one of ``Q2``, ``CH_PLUS``, ``CH_MAX`` or ``FromTables``."""
    key = kind.upper().replace("-", "_")
    if key == "Q2":
        q = q2()
    elif key in ("CH_PLUS", "CH_MAX"):
        if n is None or n < 0:
            raise ValueError(f"{kind} needs n >= 0, got {n}")
        q = ch_plus(n) if key == "CH_PLUS" else ch_max(n)
    elif key == "FROMTABLES":
        q = Quantale(tables["names"], tables["leq"], tables["tensor"], tables["unit"])
    else:
        raise ValueError(f"unknown quantale kind {kind!r}")
    problems = validate_quantale(q)
    if problems:
        raise InvalidStructure("quantale", problems)
    return q


def parse_standard(spec: str) -> Quantale:
    """Parse ``q2``, ``ch_plus:2`` or ``ch_max:3``."""
    kind, _, arg = spec.partition(":")
    return build_standard(kind, int(arg) if arg else None)

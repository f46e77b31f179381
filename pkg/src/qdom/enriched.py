"""Finite Q-categories, Q-functors and the constructions built from them."""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Sequence

from .caps import DEFAULT_CAPS
from .errors import InvalidStructure, QuantaleMismatch, ResourceLimitError, ShapeError
from .quantale import Quantale

__all__ = [
    "QCategory",
    "QFunctor",
    "validate_category",
    "validate_functor",
    "one",
    "discrete",
    "quantale_category",
    "opposite",
    "tensor_product",
    "full_subcategory",
    "underlying_preorder",
    "is_separated",
    "enumerate_functors",
    "functor_category",
    "presheaf_category",
    "exponential_mate",
    "yoneda_presheaf",
    "co_yoneda",
    "yoneda_embedding",
    "find_equivalence",
    "are_equivalent",
]


class QCategory:
    """A finite set of objects with a Q-valued structure matrix ``X(x, y)``.

    Equality is index-wise: same quantale, same object names, same matrix.
    """

    def __init__(self, quantale: Quantale, structure, names: Sequence[str] | None = None):
        n = len(structure)
        for i, row in enumerate(structure):
            if len(row) != n:
                raise ShapeError(f"structure row {i} has {len(row)} entries, expected {n}")
            for v in row:
                if not isinstance(v, int) or not 0 <= v < quantale.size:
                    raise ShapeError(f"structure row {i} holds {v!r}, not an element of the quantale")
        if names is None:
            names = [f"x{i}" for i in range(n)]
        names = tuple(str(s) for s in names)
        if len(names) != n:
            raise ShapeError(f"{len(names)} names for {n} objects")
        if len(set(names)) != n:
            raise ShapeError(f"object names must be distinct: {names}")
        self.quantale = quantale
        self.structure = tuple(tuple(row) for row in structure)
        self.names = names
        self.size = n
        self._key = (quantale, self.names, self.structure)
        self._hash = hash(self._key)

    def __eq__(self, other):
        return self is other or (isinstance(other, QCategory) and self._key == other._key)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"QCategory({list(self.names)})"

    def __call__(self, x: int, y: int) -> int:
        return self.structure[x][y]

    def objects(self) -> range:
        return range(self.size)

    def index_of(self, name: str) -> int:
        return self.names.index(name)


class QFunctor:
    """An object assignment between two Q-categories over one quantale."""

    def __init__(self, source: QCategory, target: QCategory, mapping: Sequence[int]):
        if source.quantale != target.quantale:
            raise QuantaleMismatch("functor endpoints live over different quantales")
        mapping = tuple(mapping)
        if len(mapping) != source.size:
            raise ShapeError(f"mapping has {len(mapping)} entries for {source.size} objects")
        for v in mapping:
            if not isinstance(v, int) or not 0 <= v < target.size:
                raise ShapeError(f"mapping value {v!r} is not an object of the target")
        self.source = source
        self.target = target
        self.mapping = mapping

    def __call__(self, x: int) -> int:
        return self.mapping[x]

    def __eq__(self, other):
        return (
            isinstance(other, QFunctor)
            and self.mapping == other.mapping
            and self.source == other.source
            and self.target == other.target
        )

    def __hash__(self):
        return hash((self.source, self.target, self.mapping))

    def __repr__(self):
        return f"QFunctor({self.mapping})"

    def then(self, g: "QFunctor") -> "QFunctor":
        """``g`` after ``self``."""
        if self.target != g.source:
            raise ValueError("functors are not composable")
        return QFunctor(self.source, g.target, [g.mapping[v] for v in self.mapping])


def identity_functor(c: QCategory) -> QFunctor:
    return QFunctor(c, c, range(c.size))


def validate_category(c: QCategory) -> list[str]:
    """List every reflexivity and transitivity violation with its coordinates."""
    q, s, n = c.quantale, c.structure, c.names
    leq, t = q.leq, q.tensor
    out = []
    for x in c.objects():
        if not leq[q.unit][s[x][x]]:
            out.append(f"reflexivity fails at {n[x]}")
    for x, y, z in itertools.product(c.objects(), repeat=3):
        if not leq[t[s[x][y]][s[y][z]]][s[x][z]]:
            out.append(f"transitivity fails at ({n[x]},{n[y]},{n[z]})")
    return out


def validate_functor(f: QFunctor) -> list[str]:
    if f.source.quantale != f.target.quantale:
        raise QuantaleMismatch("functor endpoints live over different quantales")
    leq = f.source.quantale.leq
    X, Y, m = f.source.structure, f.target.structure, f.mapping
    return [
        f"functoriality fails at ({f.source.names[x]},{f.source.names[z]})"
        for x in f.source.objects()
        for z in f.source.objects()
        if not leq[X[x][z]][Y[m[x]][m[z]]]
    ]


def checked_category(q: Quantale, structure, names=None) -> QCategory:
    c = QCategory(q, structure, names)
    problems = validate_category(c)
    if problems:
        raise InvalidStructure("Q-category", problems)
    return c


@lru_cache(maxsize=None)
def one(q: Quantale) -> QCategory:
    """The canonical one-object category over ``q``."""
    return QCategory(q, [[q.unit]], ["*"])


def discrete(q: Quantale, n: int, names=None) -> QCategory:
    return QCategory(q, [[q.unit if i == j else q.bottom for j in range(n)] for i in range(n)], names)


@lru_cache(maxsize=None)
def quantale_category(q: Quantale) -> QCategory:
    """``q`` as a category over itself via its internal hom."""
    return QCategory(q, q.hom_table, q.names)


def opposite(c: QCategory) -> QCategory:
    s = c.structure
    return QCategory(c.quantale, [[s[y][x] for y in c.objects()] for x in c.objects()], c.names)


def tensor_product(c: QCategory, d: QCategory) -> QCategory:
    """Objects are pairs in lexicographic order; hom is the tensor of homs."""
    if c.quantale != d.quantale:
        raise QuantaleMismatch("tensor of categories over different quantales")
    t = c.quantale.tensor
    pairs = list(itertools.product(c.objects(), d.objects()))
    structure = [[t[c.structure[x][z]][d.structure[y][w]] for (z, w) in pairs] for (x, y) in pairs]
    return QCategory(c.quantale, structure, [f"{c.names[x]}|{d.names[y]}" for x, y in pairs])


def full_subcategory(c: QCategory, objs: Sequence[int]) -> QCategory:
    objs = list(objs)
    return QCategory(c.quantale, [[c.structure[x][y] for y in objs] for x in objs], [c.names[x] for x in objs])


def underlying_preorder(c: QCategory) -> tuple[tuple[bool, ...], ...]:
    q = c.quantale
    return tuple(tuple(q.leq[q.unit][v] for v in row) for row in c.structure)


def is_separated(c: QCategory) -> bool:
    le = underlying_preorder(c)
    return not any(le[x][y] and le[y][x] for x, y in itertools.combinations(c.objects(), 2))


def is_isomorphic_objects(c: QCategory, x: int, y: int) -> bool:
    u, leq = c.quantale.unit, c.quantale.leq
    return leq[u][c.structure[x][y]] and leq[u][c.structure[y][x]]


# -- functor enumeration -------------------------------------------------------


def _search(src, tgt, leq, cap, exact=False, what="functor enumeration"):
    """All maps ``f`` with ``src[x][z] <= tgt[fx][fz]`` (or ``==`` when ``exact``).

    Source objects are assigned most-constrained first; the result list is
    sorted lexicographically so the order never depends on the search order.
    """
    n, m = len(src), len(tgt)
    if n == 0:
        return [()]
    if m == 0:
        return []

    def ok(a, b):
        return a == b if exact else leq[a][b]

    weight = [sum(1 for z in range(n) if z != x and (src[x][z] != src[0][0] or src[z][x] != src[0][0])) for x in range(n)]
    order = sorted(range(n), key=lambda x: (-weight[x], x))
    # candidates that respect the diagonal constraint on their own
    cands = [[v for v in range(m) if ok(src[x][x], tgt[v][v])] for x in range(n)]
    assign = [None] * n
    out = []

    def rec(k):
        if k == n:
            out.append(tuple(assign))
            if len(out) > cap:
                raise ResourceLimitError(what, cap)
            return
        x = order[k]
        row_x = src[x]
        for v in cands[x]:
            tv = tgt[v]
            good = True
            for j in range(k):
                z = order[j]
                fz = assign[z]
                if not (ok(row_x[z], tv[fz]) and ok(src[z][x], tgt[fz][v])):
                    good = False
                    break
            if good:
                assign[x] = v
                rec(k + 1)
        assign[x] = None

    rec(0)
    out.sort()
    return out


def enumerate_functors(c: QCategory, d: QCategory, cap: int | None = None) -> list[QFunctor]:
    """Every Q-functor ``c -> d`` in lexicographic order of object assignments."""
    if c.quantale != d.quantale:
        raise QuantaleMismatch("functor enumeration across different quantales")
    cap = DEFAULT_CAPS.columns if cap is None else cap
    maps = _search(c.structure, d.structure, c.quantale.leq, cap)
    return [QFunctor(c, d, m) for m in maps]


def functor_maps(c: QCategory, d: QCategory, cap: int | None = None) -> list[tuple[int, ...]]:
    """Like :func:`enumerate_functors` but returns bare mapping tuples."""
    cap = DEFAULT_CAPS.columns if cap is None else cap
    return _functor_maps_cached(c, d, cap)


@lru_cache(maxsize=4096)
def _functor_maps_cached(c, d, cap):
    return tuple(_search(c.structure, d.structure, c.quantale.leq, cap))


def _vector_name(q: Quantale, vec) -> str:
    return "(" + ",".join(q.names[v] for v in vec) + ")"


def hom_of_vectors(q: Quantale, a, b) -> int:
    """``[a, b] = meet of q(a_i, b_i)`` for two vectors of elements."""
    h, mt = q.hom_table, q.meet_table
    r = q.top
    for u, v in zip(a, b):
        r = mt[r][h[u][v]]
    return r


def vector_category(q: Quantale, vectors, names=None) -> QCategory:
    """The full subcategory of a power of ``q`` spanned by ``vectors`` (pointwise hom)."""
    vectors = list(vectors)
    structure = [[hom_of_vectors(q, a, b) for b in vectors] for a in vectors]
    if names is None:
        names = [_vector_name(q, v) for v in vectors]
    return QCategory(q, structure, names)


def functor_category(c: QCategory, d: QCategory, cap: int | None = None) -> QCategory:
    """``d^c``: objects are the functors, hom is ``meet_x d(fx, gx)``."""
    maps = functor_maps(c, d, cap)
    q, s = c.quantale, d.structure
    mt = q.meet_table
    structure = []
    for f in maps:
        row = []
        for g in maps:
            r = q.top
            for x in c.objects():
                r = mt[r][s[f[x]][g[x]]]
            row.append(r)
        structure.append(row)
    names = ["(" + ",".join(d.names[v] for v in f) + ")" for f in maps]
    return QCategory(q, structure, names)


def presheaf_category(c: QCategory, cap: int | None = None) -> QCategory:
    """``X^ = Q^(X^op)``; objects are the presheaf vectors in lexicographic order."""
    return functor_category(opposite(c), quantale_category(c.quantale), cap)


def exponential_mate(g: QFunctor, left: QCategory, right: QCategory, cap: int | None = None) -> QFunctor:
    """For ``g: left (x) right -> Z`` return ``right -> Z^left``, ``y |-> g(-, y)``."""
    if g.source != tensor_product(left, right):
        raise ValueError("functor source is not the given tensor product")
    Z = g.target
    exp = functor_category(left, Z, cap)
    maps = functor_maps(left, Z, cap)
    pos = {m: i for i, m in enumerate(maps)}
    ny = right.size
    mapping = [pos[tuple(g.mapping[x * ny + y] for x in left.objects())] for y in right.objects()]
    return QFunctor(right, exp, mapping)


def yoneda_presheaf(c: QCategory, x: int):
    """``y x = X(-, x)`` as a module ``X -|-> 1``."""
    from .modules import Module

    return Module(c, one(c.quantale), [[c.structure[z][x]] for z in c.objects()])


def co_yoneda(c: QCategory, x: int):
    """``lambda x = X(x, -)`` as a module ``1 -|-> X``."""
    from .modules import Module

    return Module(one(c.quantale), c, [list(c.structure[x])])


def yoneda_embedding(c: QCategory, cap: int | None = None) -> QFunctor:
    hat = presheaf_category(c, cap)
    maps = functor_maps(opposite(c), quantale_category(c.quantale), cap)
    pos = {m: i for i, m in enumerate(maps)}
    return QFunctor(c, hat, [pos[tuple(c.structure[z][x] for z in c.objects())] for x in c.objects()])


# -- equivalence ---------------------------------------------------------------


def find_equivalence(c: QCategory, d: QCategory, cap: int | None = None):
    """Return ``(f, g)`` exhibiting ``c`` and ``d`` as equivalent, or ``None``.

    ``f`` is fully faithful and essentially surjective; ``g`` picks for each
    object of ``d`` a preimage up to isomorphism, so both composites are
    isomorphic to identities.  For separated categories this is an isomorphism.
    """
    if c.quantale != d.quantale:
        return None
    cap = DEFAULT_CAPS.columns if cap is None else cap
    if c.size == 0 or d.size == 0:
        if c.size == d.size == 0:
            return QFunctor(c, d, ()), QFunctor(d, c, ())
        return None
    iso_d = [[is_isomorphic_objects(d, a, b) for b in d.objects()] for a in d.objects()]
    # classes of d that must each be hit
    for f in _search(c.structure, d.structure, c.quantale.leq, cap, exact=True, what="equivalence search"):
        preimage = []
        for b in d.objects():
            hit = next((x for x in c.objects() if iso_d[f[x]][b]), None)
            if hit is None:
                break
            preimage.append(hit)
        else:
            return QFunctor(c, d, f), QFunctor(d, c, preimage)
    return None


def are_equivalent(c: QCategory, d: QCategory, cap: int | None = None) -> bool:
    return find_equivalence(c, d, cap) is not None

"""Relative cocompletion: JX, weighted (co)limits, suprema and the functor J."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .caps import DEFAULT_CAPS, Caps
from .enriched import (
    QCategory,
    QFunctor,
    co_yoneda,
    functor_maps,
    hom_of_vectors,
    is_isomorphic_objects,
    opposite,
    quantale_category,
    vector_category,
    yoneda_presheaf,
)
from .errors import NotMember, TypeMismatch
from .ideals import IdealFamily, member
from .modules import Module, column_vector, extension, lifting, lower_star, row_vector, upper_star

__all__ = [
    "CompletionResult",
    "Witness",
    "build_JX",
    "presheaf_vectors",
    "weighted_colimit",
    "weighted_limit",
    "sup_witnesses",
    "supremum",
    "suprema",
    "sup_functor",
    "is_J_cocomplete",
    "has_tensors",
    "J_on_functor",
    "is_J_cocontinuous_functor",
    "colimit_vector",
    "check_saturated",
]


@dataclass(frozen=True)
class Witness:
    """Least object index satisfying a universal property, and how many do."""

    index: int
    multiplicity: int = 1


@dataclass(frozen=True, eq=False)
class CompletionResult:
    base: QCategory
    family: IdealFamily
    ideals: tuple
    as_category: QCategory
    yoneda_into: QFunctor | None
    _pos: dict = field(repr=False, default_factory=dict)

    def __len__(self):
        return len(self.ideals)

    def index(self, vec) -> int | None:
        return self._pos.get(tuple(vec))

    def module(self, i: int) -> Module:
        from .modules import presheaf

        return presheaf(self.base, self.ideals[i])


def presheaf_vectors(X: QCategory, caps: Caps = DEFAULT_CAPS):
    """Every module ``X -|-> 1`` as a vector, via backtracking over functors ``X^op -> Q``."""
    return functor_maps(opposite(X), quantale_category(X.quantale), caps.columns)


@lru_cache(maxsize=512)
def build_JX(X: QCategory, J: IdealFamily, caps: Caps = DEFAULT_CAPS) -> CompletionResult:
    """All members of ``J`` with domain ``X``, in lexicographic order, as a category."""
    ideals = tuple(v for v in presheaf_vectors(X, caps) if member(J, X, v, caps))
    cat = vector_category(X.quantale, ideals)
    pos = {v: i for i, v in enumerate(ideals)}
    reps = [pos.get(tuple(X.structure[z][x] for z in X.objects())) for x in X.objects()]
    y = QFunctor(X, cat, reps) if None not in reps else None
    return CompletionResult(X, J, ideals, cat, y, pos)


def _find_rows(X: QCategory, row) -> list[int]:
    row = tuple(row)
    return [s for s in X.objects() if X.structure[s] == row]


def _witness(found) -> Witness | None:
    return Witness(found[0], len(found)) if found else None


def weighted_colimit(psi: Module, h: QFunctor) -> Witness | None:
    """An object ``x`` with ``x_* = h_* <- psi``, for ``psi: I -|-> 1`` and ``h: I -> X``."""
    if psi.source != h.source or psi.target.size != 1:
        raise TypeMismatch("weighted_colimit expects psi: I -|-> 1 and h: I -> X")
    target = row_vector(extension(lower_star(h), psi))
    X = h.target
    return _witness([x for x in X.objects() if row_vector(co_yoneda(X, x)) == target])


def weighted_limit(phi: Module, h: QFunctor) -> Witness | None:
    """An object ``x`` with ``x^* = phi -> h^*``, for ``phi: 1 -|-> I`` and ``h: I -> X``."""
    if phi.target != h.source or phi.source.size != 1:
        raise TypeMismatch("weighted_limit expects phi: 1 -|-> I and h: I -> X")
    target = column_vector(lifting(phi, upper_star(h)))
    X = h.target
    return _witness([x for x in X.objects() if column_vector(yoneda_presheaf(X, x)) == target])


def sup_witnesses(X: QCategory, vec) -> list[int]:
    """Objects ``s`` with ``X(s, x) = [vec, X(-, x)]`` for every ``x``."""
    q, s = X.quantale, X.structure
    row = [hom_of_vectors(q, vec, [s[z][x] for z in X.objects()]) for x in X.objects()]
    return _find_rows(X, row)


def supremum(X: QCategory, J: IdealFamily, psi, caps: Caps = DEFAULT_CAPS) -> Witness | None:
    """The supremum of ``psi`` in ``X``; ``psi`` must belong to ``JX``."""
    vec = column_vector(psi) if isinstance(psi, Module) else tuple(psi)
    if not member(J, X, vec, caps):
        raise NotMember(f"{vec} is not a {J.name}-ideal")
    return _witness(sup_witnesses(X, vec))


@lru_cache(maxsize=512)
def suprema(X: QCategory, J: IdealFamily, caps: Caps = DEFAULT_CAPS):
    """Least supremum witness for every ideal of ``JX``, or ``None`` if one is missing."""
    jx = build_JX(X, J, caps)
    out = []
    for v in jx.ideals:
        found = sup_witnesses(X, v)
        if not found:
            return None
        out.append(found[0])
    return tuple(out)


def sup_functor(X: QCategory, J: IdealFamily, caps: Caps = DEFAULT_CAPS) -> QFunctor | None:
    """``S_X: JX -> X`` when ``X`` is J-cocomplete."""
    sups = suprema(X, J, caps)
    if sups is None:
        return None
    return QFunctor(build_JX(X, J, caps).as_category, X, sups)


def is_J_cocomplete(X: QCategory, J: IdealFamily, caps: Caps = DEFAULT_CAPS) -> bool:
    return suprema(X, J, caps) is not None


def has_tensors(X: QCategory) -> bool:
    """For all ``x, u`` some ``z`` has ``X(z, y) = hom(u, X(x, y))`` for every ``y``."""
    h = X.quantale.hom_table
    rows = set(X.structure)
    return all(
        tuple(h[u][X.structure[x][y]] for y in X.objects()) in rows
        for x in X.objects()
        for u in X.quantale.elements()
    )


def _pushforward(f: QFunctor, vec):
    """``psi . f^*`` as a vector on the target of ``f``."""
    q, Y = f.source.quantale, f.target
    t, jt = q.tensor, q.join_table
    out = []
    for y in Y.objects():
        r = q.bottom
        for x, p in enumerate(vec):
            r = jt[r][t[Y.structure[y][f.mapping[x]]][p]]
        out.append(r)
    return tuple(out)


@dataclass(frozen=True)
class JfResult:
    functor: QFunctor | None
    images: tuple
    escapes: tuple  # (index in JX, image vector) whose image is not in JY


def J_on_functor(J: IdealFamily, f: QFunctor, caps: Caps = DEFAULT_CAPS) -> JfResult:
    """``Jf: JX -> JY``, ``psi |-> psi . f^*``; images leaving ``JY`` are reported."""
    jx, jy = build_JX(f.source, J, caps), build_JX(f.target, J, caps)
    images, mapping, escapes = [], [], []
    for i, v in enumerate(jx.ideals):
        w = _pushforward(f, v)
        images.append(w)
        k = jy.index(w)
        if k is None:
            escapes.append((i, w))
        mapping.append(k)
    functor = None if escapes else QFunctor(jx.as_category, jy.as_category, mapping)
    return JfResult(functor, tuple(images), tuple(escapes))


def is_J_cocontinuous_functor(f: QFunctor, J: IdealFamily, caps: Caps = DEFAULT_CAPS) -> bool:
    """``f(S psi)`` is isomorphic to ``S(Jf psi)`` for every ``psi`` in ``JX``."""
    X, Y = f.source, f.target
    sx = suprema(X, J, caps)
    if sx is None or suprema(Y, J, caps) is None:
        raise ValueError("J-cocontinuity is only decided between J-cocomplete categories")
    jx = build_JX(X, J, caps)
    for i, v in enumerate(jx.ideals):
        found = sup_witnesses(Y, _pushforward(f, v))
        if not found or not is_isomorphic_objects(Y, f.mapping[sx[i]], found[0]):
            return False
    return True


def colimit_vector(jx: CompletionResult, Psi) -> tuple[int, ...]:
    """The colimit in ``X^`` of ``Psi: JX -|-> 1``: ``x |-> join of Psi(psi) (x) psi(x)``."""
    q = jx.base.quantale
    t, jt = q.tensor, q.join_table
    out = []
    for x in jx.base.objects():
        r = q.bottom
        for w, psi in zip(Psi, jx.ideals):
            r = jt[r][t[w][psi[x]]]
        out.append(r)
    return tuple(out)


@dataclass(frozen=True)
class SaturationVerdict:
    ok: bool
    missing_representables: tuple
    escaping_colimits: tuple  # (Psi vector over JX, colimit vector over X)
    checked: int


def check_saturated(J: IdealFamily, X: QCategory, caps: Caps = DEFAULT_CAPS) -> SaturationVerdict:
    """Representables lie in ``JX`` and ``JX`` is closed in ``X^`` under J-colimits."""
    jx = build_JX(X, J, caps)
    missing = tuple(
        x for x in X.objects() if jx.index(tuple(X.structure[z][x] for z in X.objects())) is None
    )
    jjx = build_JX(jx.as_category, J, caps)
    escaping = []
    for Psi in jjx.ideals:
        c = colimit_vector(jx, Psi)
        if jx.index(c) is None:
            escaping.append((Psi, c))
    return SaturationVerdict(not missing and not escaping, missing, tuple(escaping), len(jjx.ideals))

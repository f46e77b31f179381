"""Open modules FX, open-module-determinedness, and way-below on FX."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .caps import DEFAULT_CAPS, Caps
from .completion import build_JX, sup_witnesses, suprema
from .continuity import way_below, way_below_JX_formula
from .enriched import QCategory, QFunctor, functor_maps, hom_of_vectors, opposite, quantale_category, vector_category
from .errors import NotCocomplete
from .ideals import IdealFamily, dot, member
from .modules import Module, compose, lower_star, upper_star

__all__ = [
    "OpenModuleSet",
    "build_FX",
    "cocontinuous_functionals",
    "is_cocontinuous_functional",
    "is_open_module_determined",
    "fx_way_below",
    "closure_lemma",
    "inclusions_preserve_suprema",
]


@dataclass(frozen=True, eq=False)
class OpenModuleSet:
    base: QCategory
    family: IdealFamily
    opens: tuple
    as_category: QCategory
    _pos: dict = field(repr=False, default_factory=dict)

    def __len__(self):
        return len(self.opens)

    def index(self, vec) -> int | None:
        return self._pos.get(tuple(vec))


def is_cocontinuous_functional(X: QCategory, J: IdealFamily, alpha, caps: Caps = DEFAULT_CAPS) -> bool:
    """``alpha(S psi) = psi . alpha`` for every ``psi`` in ``JX``."""
    sups = suprema(X, J, caps)
    if sups is None:
        raise NotCocomplete(f"category is not {J.name}-cocomplete")
    q = X.quantale
    jx = build_JX(X, J, caps)
    return all(alpha[s] == dot(q, alpha, psi) for s, psi in zip(sups, jx.ideals))


def cocontinuous_functionals(X: QCategory, J: IdealFamily, caps: Caps = DEFAULT_CAPS) -> list[tuple[int, ...]]:
    """``JCocts(X, Q)``: every J-cocontinuous functor ``X -> Q`` as a vector."""
    cands = functor_maps(X, quantale_category(X.quantale), caps.columns)
    return [a for a in cands if is_cocontinuous_functional(X, J, a, caps)]


@lru_cache(maxsize=512)
def build_FX(X: QCategory, J: IdealFamily, caps: Caps = DEFAULT_CAPS) -> OpenModuleSet:
    """Functors ``X -> Q`` that are J-cocontinuous and lie in ``J(X^op)``."""
    Xop = opposite(X)
    opens = tuple(a for a in cocontinuous_functionals(X, J, caps) if member(J, Xop, a, caps))
    cat = vector_category(X.quantale, opens)
    return OpenModuleSet(X, J, opens, cat, {a: i for i, a in enumerate(opens)})


def _lambda_rows(X: QCategory):
    return [X.structure[x] for x in X.objects()]


def _determining_sum(X: QCategory, opens, rows) -> list[list[int]]:
    """Entry ``(x, y)``: join over alpha of ``alpha(y) (x) [alpha, rows[x]]``."""
    q = X.quantale
    t, jt = q.tensor, q.join_table
    brackets = [[hom_of_vectors(q, a, rows[x]) for x in X.objects()] for a in opens]
    out = []
    for x in X.objects():
        row = []
        for y in X.objects():
            r = q.bottom
            for a, br in zip(opens, brackets):
                r = jt[r][t[a[y]][br[x]]]
            row.append(r)
        out.append(row)
    return out


@dataclass(frozen=True)
class DeterminedVerdict:
    determined: bool        # way-below equals the sum over open modules
    inequality: bool        # way-below is below that sum
    variant: bool           # same sum with [alpha, way-below(x, -)]
    agree: bool             # the three readings coincide
    idempotent: bool        # way-below equals its own square
    mismatches: tuple       # (x, y, way-below, sum)


def is_open_module_determined(X: QCategory, J: IdealFamily, caps: Caps = DEFAULT_CAPS) -> DeterminedVerdict:
    wb = way_below(X, J, caps).matrix
    fx = build_FX(X, J, caps)
    leq = X.quantale.leq
    W = wb.entries
    main = _determining_sum(X, fx.opens, _lambda_rows(X))
    var = _determining_sum(X, fx.opens, [W[x] for x in X.objects()])
    pairs = list(itertools.product(X.objects(), repeat=2))
    eq = all(W[x][y] == main[x][y] for x, y in pairs)
    ineq = all(leq[W[x][y]][main[x][y]] for x, y in pairs)
    eq2 = all(W[x][y] == var[x][y] for x, y in pairs)
    mism = tuple((x, y, W[x][y], main[x][y]) for x, y in pairs if W[x][y] != main[x][y])
    return DeterminedVerdict(eq, ineq, eq2, eq == ineq == eq2, compose(wb, wb) == wb, mism)


@dataclass(frozen=True, eq=False)
class FxWayBelow:
    matrix: Module
    agrees_with_lifting: bool
    sup_recovers: bool          # S_FX of every column alpha is alpha
    restriction: bool           # equals i^* . way-below(J(X^op)) . i_*
    mismatches: tuple


def fx_way_below(X: QCategory, J: IdealFamily, caps: Caps = DEFAULT_CAPS) -> FxWayBelow:
    """Way-below on FX from ``join over x of alpha(x) (x) [beta, lambda x]``, with its cross-checks."""
    fx = build_FX(X, J, caps)
    q = X.quantale
    t, jt = q.tensor, q.join_table
    cat = fx.as_category
    rows = _lambda_rows(X)
    br = [[hom_of_vectors(q, b, rows[x]) for x in X.objects()] for b in fx.opens]
    entries = []
    for bi in range(len(fx.opens)):
        row = []
        for a in fx.opens:
            r = q.bottom
            for x in X.objects():
                r = jt[r][t[a[x]][br[bi][x]]]
            row.append(r)
        entries.append(row)
    D = Module(cat, cat, entries)

    mism = []
    if suprema(cat, J, caps) is None:
        agrees = False
        mism.append("FX is not J-cocomplete")
    else:
        lifted = way_below(cat, J, caps).matrix
        agrees = lifted == D
        if not agrees:
            mism.append("lifting differs from formula")

    recovers = True
    for ai in range(len(fx.opens)):
        col = D.column(ai)
        found = sup_witnesses(cat, col)
        if not member(J, cat, col, caps) or not found or found[0] != ai:
            recovers = False
            mism.append(f"S_FX misses open {ai}")

    # the restriction of the way-below module on J(X^op) along the inclusion
    Xop = opposite(X)
    jxop = build_JX(Xop, J, caps)
    incl = QFunctor(cat, jxop.as_category, [jxop.index(a) for a in fx.opens])
    big = way_below_JX_formula(Xop, J, caps)
    restricted = compose(compose(lower_star(incl), big), upper_star(incl))
    restriction = restricted == D
    if not restriction:
        mism.append("restriction differs")
    return FxWayBelow(D, agrees, recovers, restriction, tuple(mism))


def closure_lemma(X: QCategory, J: IdealFamily, caps: Caps = DEFAULT_CAPS) -> bool:
    """``JCocts(X, Q)`` contains the bottom functional and is closed under binary joins and tensors.

    By finiteness that is closure under arbitrary suprema in ``Q^X``.
    """
    q = X.quantale
    cocts = cocontinuous_functionals(X, J, caps)
    members = set(cocts)
    if tuple([q.bottom] * X.size) not in members:
        return False
    jt, t = q.join_table, q.tensor
    for a, b in itertools.combinations_with_replacement(cocts, 2):
        if tuple(jt[u][v] for u, v in zip(a, b)) not in members:
            return False
    for a in cocts:
        for u in q.elements():
            if tuple(t[u][v] for v in a) not in members:
                return False
    return True


def inclusions_preserve_suprema(X: QCategory, J: IdealFamily, caps: Caps = DEFAULT_CAPS) -> bool:
    """Suprema in FX are the pointwise colimits, as in ``J(X^op)`` and in ``JCocts(X, Q)``."""
    fx = build_FX(X, J, caps)
    cat = fx.as_category
    jfx = build_JX(cat, J, caps)
    for Psi in jfx.ideals:
        found = sup_witnesses(cat, Psi)
        if not found:
            return False
        pointwise = colimit_like(fx, Psi)
        if fx.opens[found[0]] != pointwise:
            return False
    return True


def colimit_like(fx: OpenModuleSet, Psi) -> tuple[int, ...]:
    """``x |-> join over alpha of Psi(alpha) (x) alpha(x)``."""
    q = fx.base.quantale
    t, jt = q.tensor, q.join_table
    out = []
    for x in fx.base.objects():
        r = q.bottom
        for w, a in zip(Psi, fx.opens):
            r = jt[r][t[w][a[x]]]
        out.append(r)
    return tuple(out)

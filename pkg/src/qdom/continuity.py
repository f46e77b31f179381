"""The way-below module and J-continuity."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .caps import DEFAULT_CAPS, Caps
from .completion import build_JX, sup_functor
from .enriched import QCategory, QFunctor, hom_of_vectors, validate_functor
from .errors import NotCocomplete, TheoremViolation
from .ideals import IdealFamily, member
from .modules import Module, compose, extension, identity_module, lifting, lower_star, module_leq, upper_star

__all__ = [
    "WayBelowResult",
    "ModuleProperties",
    "way_below",
    "module_properties",
    "is_J_continuous",
    "way_below_JX_formula",
    "way_below_JX_crosscheck",
]


@dataclass(frozen=True, eq=False)
class WayBelowResult:
    base: QCategory
    family: IdealFamily
    matrix: Module
    columns_in_J: bool
    mate: QFunctor | None       # x |-> column x, when every column lies in JX
    mate_adjoint: bool          # mate is left adjoint to the supremum map
    approximating: bool
    is_continuous: bool

    def __call__(self, z: int, x: int) -> int:
        return self.matrix.entries[z][x]


def _yoneda_lower(X: QCategory, jx) -> Module:
    """``y_*: X -|-> JX`` with entries ``[z^*, psi]``."""
    if jx.yoneda_into is not None:
        return lower_star(jx.yoneda_into)
    q = X.quantale
    cols = [[X.structure[w][z] for w in X.objects()] for z in X.objects()]
    return Module(X, jx.as_category, [[hom_of_vectors(q, cols[z], psi) for psi in jx.ideals] for z in X.objects()])


@lru_cache(maxsize=512)
def way_below(X: QCategory, J: IdealFamily, caps: Caps = DEFAULT_CAPS) -> WayBelowResult:
    """The lifting of ``y_*`` along ``S^*``; entry ``(z, x)`` is ``meet over psi of hom(X(x, S psi), psi(z))``."""
    S = sup_functor(X, J, caps)
    if S is None:
        raise NotCocomplete(f"category is not {J.name}-cocomplete")
    jx = build_JX(X, J, caps)
    matrix = lifting(upper_star(S), _yoneda_lower(X, jx))
    cols = [matrix.column(x) for x in X.objects()]
    in_j = all(member(J, X, c, caps) for c in cols)
    mate, adjoint = None, False
    if in_j:
        mate = QFunctor(X, jx.as_category, [jx.index(c) for c in cols])
        if not validate_functor(mate):
            J_cat = jx.as_category.structure
            adjoint = all(
                J_cat[mate.mapping[x]][p] == X.structure[x][S.mapping[p]]
                for x in X.objects()
                for p in range(len(jx.ideals))
            )
    approximating = in_j and extension(identity_module(X), matrix) == identity_module(X)
    return WayBelowResult(X, J, matrix, in_j, mate, adjoint, approximating, adjoint)


@dataclass(frozen=True)
class ModuleProperties:
    auxiliary: bool
    interpolative: bool
    approximating: bool
    j_cocontinuous: bool


def module_properties(v: Module, X: QCategory, J: IdealFamily, caps: Caps = DEFAULT_CAPS) -> ModuleProperties:
    """Test an endo-module ``v: X -|-> X`` for the four approximation properties."""
    ident = identity_module(X)
    auxiliary = module_leq(v, ident)
    interpolative = module_leq(v, compose(v, v))
    approximating = all(member(J, X, v.column(x), caps) for x in X.objects()) and extension(ident, v) == ident
    S = sup_functor(X, J, caps)
    if S is None:
        raise NotCocomplete(f"category is not {J.name}-cocomplete")
    jx = build_JX(X, J, caps)
    j_cocontinuous = compose(v, upper_star(S)) == compose(v, _yoneda_lower(X, jx))
    return ModuleProperties(auxiliary, interpolative, approximating, j_cocontinuous)


def is_J_continuous(X: QCategory, J: IdealFamily, caps: Caps = DEFAULT_CAPS) -> bool:
    """The mate of the way-below module is left adjoint to ``S``.

    This must coincide with the way-below module being approximating; a
    disagreement raises :class:`TheoremViolation`.
    """
    wb = way_below(X, J, caps)
    if wb.is_continuous != wb.approximating:
        raise TheoremViolation(
            "continuous iff way-below is approximating",
            {"adjoint": wb.is_continuous, "approximating": wb.approximating},
        )
    return wb.is_continuous


def way_below_JX_formula(X: QCategory, J: IdealFamily, caps: Caps = DEFAULT_CAPS) -> Module:
    """Way-below on ``JX`` from the closed formula ``join over x of psi'(x) (x) [psi, x^*]``."""
    jx = build_JX(X, J, caps)
    q = X.quantale
    t, jt = q.tensor, q.join_table
    reps = [[X.structure[z][x] for z in X.objects()] for x in X.objects()]
    below = [[hom_of_vectors(q, psi, reps[x]) for x in X.objects()] for psi in jx.ideals]
    out = []
    for a in range(len(jx.ideals)):
        row = []
        for psi2 in jx.ideals:
            r = q.bottom
            for x in X.objects():
                r = jt[r][t[psi2[x]][below[a][x]]]
            row.append(r)
        out.append(row)
    return Module(jx.as_category, jx.as_category, out)


@dataclass(frozen=True)
class CrosscheckVerdict:
    ok: bool
    mismatches: tuple  # (psi index, psi' index, formula value, lifting value)
    size: int


def way_below_JX_crosscheck(X: QCategory, J: IdealFamily, caps: Caps = DEFAULT_CAPS) -> CrosscheckVerdict:
    """Compare the closed formula on ``JX`` against the lifting computed on ``JX`` itself."""
    jx = build_JX(X, J, caps)
    formula = way_below_JX_formula(X, J, caps)
    lifted = way_below(jx.as_category, J, caps).matrix
    mism = tuple(
        (a, b, formula.entries[a][b], lifted.entries[a][b])
        for a in range(len(jx.ideals))
        for b in range(len(jx.ideals))
        if formula.entries[a][b] != lifted.entries[a][b]
    )
    return CrosscheckVerdict(not mism, mism, len(jx.ideals))

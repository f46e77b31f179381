"""Ideal families: pluggable classes J of modules ``X -|-> 1``.

A family is an immutable descriptor; :func:`member` decides membership of a
presheaf vector over a given category and :func:`contains` does the same for
a :class:`~qdom.modules.Module`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .caps import DEFAULT_CAPS, Caps
from .enriched import QCategory, functor_maps, one, quantale_category
from .errors import QuantaleMismatch, TypeMismatch
from .modules import Module, column_vector
from .quantale import totally_below

__all__ = [
    "IdealFamily",
    "REPRESENTABLES",
    "ALL",
    "FSW",
    "FORMAL_BALLS",
    "flat",
    "phi_generated",
    "family_from_name",
    "member",
    "contains",
    "fsw_witnesses",
    "flat_witness",
    "dot",
    "check_saturated",
]

ALL_MODULES = "all_modules"
TRANSLATED_COREPRESENTABLES = "translated_corepresentables"


@dataclass(frozen=True)
class IdealFamily:
    kind: str
    name: str
    test_family: str = ALL_MODULES
    weights: tuple = field(default=(), compare=True)

    @property
    def phi_generated(self) -> bool:
        """Whether the family is defined by preservation of limit weights."""
        # All = no weights at all; flat over all modules = empty and binary meets
        return self.kind in ("phi", "all") or (self.kind == "flat" and self.test_family == ALL_MODULES)

    def __str__(self):
        return self.name


REPRESENTABLES = IdealFamily("representables", "representables")
ALL = IdealFamily("all", "all")
FSW = IdealFamily("fsw", "fsw")
FORMAL_BALLS = IdealFamily("formal_balls", "formal-balls")


def flat(test_family: str = ALL_MODULES) -> IdealFamily:
    if test_family not in (ALL_MODULES, TRANSLATED_COREPRESENTABLES):
        raise ValueError(f"unknown flatness test family {test_family!r}")
    name = "flat" if test_family == ALL_MODULES else "flat-restricted"
    return IdealFamily("flat", name, test_family=test_family)


def phi_generated(weights, name: str = "phi") -> IdealFamily:
    weights = tuple(weights)
    for w in weights:
        if w.source.size != 1:
            raise TypeMismatch("limit weights must be modules 1 -|-> I")
    return IdealFamily("phi", name, weights=weights)


def family_from_name(name: str, weights=None) -> IdealFamily:
    """Map a CLI spelling to a family; ``phi`` needs ``weights`` supplied by the caller."""
    table = {
        "representables": REPRESENTABLES,
        "all": ALL,
        "fsw": FSW,
        "formal-balls": FORMAL_BALLS,
        "flat": flat(ALL_MODULES),
        "flat-restricted": flat(TRANSLATED_COREPRESENTABLES),
    }
    if name in table:
        return table[name]
    if name.startswith("phi"):
        if weights is None:
            raise ValueError("phi families need their weights")
        return phi_generated(weights, name=name)
    raise ValueError(f"unknown ideal family {name!r}")


def dot(q, alpha, psi) -> int:
    """``psi . alpha``: join over x of ``alpha(x) (x) psi(x)``."""
    t, jt = q.tensor, q.join_table
    r = q.bottom
    for a, p in zip(alpha, psi):
        r = jt[r][t[a][p]]
    return r


def _representable(X: QCategory, vec) -> bool:
    s = X.structure
    return any(all(s[y][x] == vec[y] for y in X.objects()) for x in X.objects())


def _formal_ball(X: QCategory, vec) -> bool:
    if X.size == 0:
        return True
    t, s = X.quantale.tensor, X.structure
    return any(
        all(t[s[y][x]][u] == vec[y] for y in X.objects()) for x in X.objects() for u in X.quantale.elements()
    )


def fsw_witnesses(X: QCategory, vec, caps: Caps = DEFAULT_CAPS, first_only=False):
    """Violations of the two FSW conditions.

    Returns a list whose items are ``("a",)`` when the join of ``vec`` is not
    the unit, and ``(x1, x2, e1, e2, d)`` for every failure of the
    interpolation condition.
    """
    q = X.quantale
    tb = totally_below(q, caps.downsets)
    s = X.structure
    out = []
    if q.join_all(vec) != q.unit:
        out.append(("a",))
        if first_only:
            return out
    small = [e for e in q.elements() if tb[e][q.unit]]
    for x1, x2 in itertools.product(X.objects(), repeat=2):
        e1s = [e for e in small if tb[e][vec[x1]]]
        e2s = [e for e in small if tb[e][vec[x2]]]
        for e1, e2 in itertools.product(e1s, e2s):
            zs = [z for z in X.objects() if tb[e1][s[x1][z]] and tb[e2][s[x2][z]]]
            for d in small:
                if not any(tb[d][vec[z]] for z in zs):
                    out.append((x1, x2, e1, e2, d))
                    if first_only:
                        return out
    return out


def _flat_tests(X: QCategory, test_family: str, caps: Caps):
    q = X.quantale
    if test_family == ALL_MODULES:
        return functor_maps(X, quantale_category(q), caps.columns)
    t, s = q.tensor, X.structure
    vecs = {tuple(t[u][s[a][z]] for z in X.objects()) for a in X.objects() for u in q.elements()}
    return sorted(vecs)


def flat_witness(X: QCategory, vec, test_family: str = ALL_MODULES, caps: Caps = DEFAULT_CAPS):
    """``None`` if ``psi . -`` preserves finite meets of the test modules, else a witness.

    The witness is ``("top",)`` for the empty meet or ``(alpha, beta)`` for a
    binary meet that is not preserved.
    """
    q = X.quantale
    if q.join_all(vec) != q.unit:
        return ("top",)
    tests = _flat_tests(X, test_family, caps)
    mt = q.meet_table
    dots = [dot(q, a, vec) for a in tests]
    for i, a in enumerate(tests):
        for j in range(i, len(tests)):
            b = tests[j]
            m = [mt[u][v] for u, v in zip(a, b)]
            if dot(q, m, vec) != mt[dots[i]][dots[j]]:
                return (a, b)
    return None


def phi_witness(X: QCategory, vec, weights, caps: Caps = DEFAULT_CAPS):
    """``None`` if ``psi . -`` preserves every weighted limit in ``weights``, else a witness."""
    from .enriched import functor_category

    q = X.quantale
    h, mt, jt, t, leq = q.hom_table, q.meet_table, q.join_table, q.tensor, q.leq
    qx_maps = functor_maps(X, quantale_category(q), caps.columns)
    QX = functor_category(X, quantale_category(q), caps.columns)
    for w in weights:
        I = w.target
        phi = w.entries[0]
        for diagram in functor_maps(I, QX, caps.columns):
            alphas = [qx_maps[k] for k in diagram]
            lhs = q.top
            for i in I.objects():
                lhs = mt[lhs][h[phi[i]][dot(q, alphas[i], vec)]]
            rhs = q.bottom
            for x in X.objects():
                inner = q.top
                for i in I.objects():
                    inner = mt[inner][h[phi[i]][alphas[i][x]]]
                rhs = jt[rhs][t[inner][vec[x]]]
            if not leq[lhs][rhs]:
                return (w, diagram)
    return None


def member(J: IdealFamily, X: QCategory, vec, caps: Caps = DEFAULT_CAPS) -> bool:
    """Decide whether the presheaf vector ``vec`` on ``X`` lies in ``J``."""
    kind = J.kind
    if kind == "all":
        return True
    if kind == "representables":
        return _representable(X, vec)
    if kind == "formal_balls":
        return _formal_ball(X, vec)
    if kind == "fsw":
        return not fsw_witnesses(X, vec, caps, first_only=True)
    if kind == "flat":
        return flat_witness(X, vec, J.test_family, caps) is None
    if kind == "phi":
        for w in J.weights:
            if w.quantale != X.quantale:
                raise QuantaleMismatch("weights and category live over different quantales")
        return phi_witness(X, vec, J.weights, caps) is None
    raise ValueError(f"unknown family kind {kind!r}")


def contains(J: IdealFamily, psi: Module, caps: Caps = DEFAULT_CAPS) -> bool:
    if psi.target != one(psi.quantale):
        raise TypeMismatch("ideal families hold modules X -|-> 1")
    return member(J, psi.source, column_vector(psi), caps)


def check_saturated(J: IdealFamily, X: QCategory, caps: Caps = DEFAULT_CAPS):
    from .completion import check_saturated as _impl

    return _impl(J, X, caps)

"""Q-modules (bimodules) ``X -|-> Y`` and their calculus.

A module ``phi: X -|-> Y`` is stored as a matrix with rows indexed by the
objects of ``X`` and columns by the objects of ``Y``; ``phi(x, y)`` is the
entry.  Every operation type-checks its endpoints.  A module ``X -|-> 1`` and
the presheaf ``X^op -> Q`` it encodes are converted explicitly with
:func:`presheaf` / :func:`column_vector`, never silently identified.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Sequence

from .enriched import QCategory, QFunctor, one
from .errors import QuantaleMismatch, ShapeError, TypeMismatch

__all__ = [
    "Module",
    "validate_module",
    "compose",
    "identity_module",
    "lower_star",
    "upper_star",
    "extension",
    "lifting",
    "presheaf_hom",
    "check_adjoint",
    "module_join",
    "module_meet",
    "constant_module",
    "presheaf",
    "copresheaf",
    "column_vector",
    "row_vector",
    "module_leq",
]


class Module:
    def __init__(self, source: QCategory, target: QCategory, entries):
        if source.quantale != target.quantale:
            raise QuantaleMismatch("module endpoints live over different quantales")
        if len(entries) != source.size:
            raise ShapeError(f"module has {len(entries)} rows, source has {source.size} objects")
        n = source.quantale.size
        for i, row in enumerate(entries):
            if len(row) != target.size:
                raise ShapeError(f"module row {i} has {len(row)} entries, target has {target.size} objects")
            for v in row:
                if not isinstance(v, int) or not 0 <= v < n:
                    raise ShapeError(f"module row {i} holds {v!r}, not an element of the quantale")
        self.source = source
        self.target = target
        self.entries = tuple(tuple(row) for row in entries)

    @property
    def quantale(self):
        return self.source.quantale

    def __call__(self, x: int, y: int) -> int:
        return self.entries[x][y]

    def __eq__(self, other):
        return (
            isinstance(other, Module)
            and self.entries == other.entries
            and self.source == other.source
            and self.target == other.target
        )

    def __hash__(self):
        return hash(self.entries)

    def __le__(self, other: "Module") -> bool:
        return module_leq(self, other)

    def __repr__(self):
        q = self.quantale
        rows = "; ".join(" ".join(q.names[v] for v in row) for row in self.entries)
        return f"Module({self.source.size}->{self.target.size}: {rows})"

    def row(self, x: int) -> tuple[int, ...]:
        return self.entries[x]

    def column(self, y: int) -> tuple[int, ...]:
        return tuple(row[y] for row in self.entries)


def _same_type(a: Module, b: Module, what: str):
    if a.source != b.source or a.target != b.target:
        raise TypeMismatch(f"{what}: modules have different types")


def module_leq(a: Module, b: Module) -> bool:
    _same_type(a, b, "comparison")
    leq = a.quantale.leq
    return all(leq[u][v] for ra, rb in zip(a.entries, b.entries) for u, v in zip(ra, rb))


def validate_module(m: Module) -> list[str]:
    """Violations of ``X(x',x) (x) phi(x,y) (x) Y(y,y') <= phi(x',y')``."""
    q = m.quantale
    leq, t = q.leq, q.tensor
    X, Y, e = m.source.structure, m.target.structure, m.entries
    out = []
    for x, xp in itertools.product(m.source.objects(), repeat=2):
        for y, yp in itertools.product(m.target.objects(), repeat=2):
            if not leq[t[t[X[xp][x]][e[x][y]]][Y[y][yp]]][e[xp][yp]]:
                out.append(
                    f"bimodule law fails at x'={m.source.names[xp]}, x={m.source.names[x]}, "
                    f"y={m.target.names[y]}, y'={m.target.names[yp]}"
                )
    return out


def compose(phi: Module, psi: Module) -> Module:
    """``psi . phi`` for ``phi: X -|-> Y`` and ``psi: Y -|-> Z``: join over ``y`` of ``phi(x,y) (x) psi(y,z)``."""
    if phi.target != psi.source:
        raise TypeMismatch("compose: target of the first module is not the source of the second")
    q = phi.quantale
    t, jt, bot = q.tensor, q.join_table, q.bottom
    cols = [psi.column(z) for z in psi.target.objects()]
    out = []
    for row in phi.entries:
        out_row = []
        for col in cols:
            r = bot
            for a, b in zip(row, col):
                r = jt[r][t[a][b]]
            out_row.append(r)
        out.append(out_row)
    return Module(phi.source, psi.target, out)


def identity_module(c: QCategory) -> Module:
    """The structure of ``c`` as a module ``c -|-> c``; it is the unit for :func:`compose`."""
    return Module(c, c, c.structure)


def lower_star(f: QFunctor) -> Module:
    """``f_*: X -|-> Y``, ``f_*(x, y) = Y(fx, y)``."""
    Y = f.target.structure
    return Module(f.source, f.target, [Y[f(x)] for x in f.source.objects()])


def upper_star(f: QFunctor) -> Module:
    """``f^*: Y -|-> X``, ``f^*(y, x) = Y(y, fx)``."""
    Y = f.target.structure
    return Module(f.target, f.source, [[Y[y][f(x)] for x in f.source.objects()] for y in f.target.objects()])


def extension(psi: Module, phi: Module) -> Module:
    """``psi <- phi: Y -|-> Z`` for ``phi: X -|-> Y``, ``psi: X -|-> Z``.

    Entry ``(y, z)`` is the meet over ``x`` of ``hom(phi(x,y), psi(x,z))``;
    it is the largest ``chi`` with ``chi . phi <= psi``.
    """
    if phi.source != psi.source:
        raise TypeMismatch("extension: modules must share their source")
    q = phi.quantale
    h, mt = q.hom_table, q.meet_table
    out = []
    for y in phi.target.objects():
        col_phi = phi.column(y)
        row = []
        for z in psi.target.objects():
            r = q.top
            for x, a in enumerate(col_phi):
                r = mt[r][h[a][psi.entries[x][z]]]
            row.append(r)
        out.append(row)
    return Module(phi.target, psi.target, out)


def lifting(phi: Module, psi: Module) -> Module:
    """``phi -> psi: Z -|-> X`` for ``phi: X -|-> Y``, ``psi: Z -|-> Y``.

    Entry ``(z, x)`` is the meet over ``y`` of ``hom(phi(x,y), psi(z,y))``;
    it is the largest ``chi`` with ``phi . chi <= psi``.
    """
    if phi.target != psi.target:
        raise TypeMismatch("lifting: modules must share their target")
    q = phi.quantale
    h, mt = q.hom_table, q.meet_table
    out = []
    for zrow in psi.entries:
        row = []
        for xrow in phi.entries:
            r = q.top
            for a, b in zip(xrow, zrow):
                r = mt[r][h[a][b]]
            row.append(r)
        out.append(row)
    return Module(psi.source, phi.source, out)


def presheaf_hom(alpha: Module, beta: Module) -> int:
    """``[alpha, beta]``: meet of ``hom(alpha(.), beta(.))`` over all entries."""
    _same_type(alpha, beta, "presheaf_hom")
    if alpha.source.size != 1 and alpha.target.size != 1:
        raise TypeMismatch("presheaf_hom expects modules X -|-> 1 or 1 -|-> X")
    q = alpha.quantale
    h, mt = q.hom_table, q.meet_table
    r = q.top
    for ra, rb in zip(alpha.entries, beta.entries):
        for u, v in zip(ra, rb):
            r = mt[r][h[u][v]]
    return r


def check_adjoint(phi: Module, psi: Module) -> bool:
    """True iff ``phi: Z -|-> X`` is left adjoint to ``psi: X -|-> Z``."""
    if phi.target != psi.source or phi.source != psi.target:
        raise TypeMismatch("check_adjoint: expected phi: Z -|-> X and psi: X -|-> Z")
    X, Z = phi.target, phi.source
    return module_leq(compose(psi, phi), identity_module(X)) and module_leq(identity_module(Z), compose(phi, psi))


def constant_module(source: QCategory, target: QCategory, value: int) -> Module:
    return Module(source, target, [[value] * target.size for _ in source.objects()])


def _pointwise(mods: Sequence[Module], table, unit, source, target, what):
    mods = list(mods)
    if not mods:
        if source is None or target is None:
            raise TypeMismatch(f"{what} of an empty family needs explicit source and target")
        return constant_module(source, target, unit)
    for m in mods[1:]:
        _same_type(mods[0], m, what)
    out = []
    for x in mods[0].source.objects():
        row = []
        for y in mods[0].target.objects():
            r = unit
            for m in mods:
                r = table[r][m.entries[x][y]]
            row.append(r)
        out.append(row)
    return Module(mods[0].source, mods[0].target, out)


def module_join(mods: Iterable[Module], source=None, target=None) -> Module:
    mods = list(mods)
    q = mods[0].quantale if mods else source.quantale
    return _pointwise(mods, q.join_table, q.bottom, source, target, "module_join")


def module_meet(mods: Iterable[Module], source=None, target=None) -> Module:
    mods = list(mods)
    q = mods[0].quantale if mods else source.quantale
    return _pointwise(mods, q.meet_table, q.top, source, target, "module_meet")


# -- explicit casts between modules and vectors ------------------------------------


def presheaf(c: QCategory, vec: Sequence[int]) -> Module:
    """The module ``c -|-> 1`` whose column is ``vec``."""
    return Module(c, one(c.quantale), [[v] for v in vec])


def copresheaf(c: QCategory, vec: Sequence[int]) -> Module:
    """The module ``1 -|-> c`` whose row is ``vec`` (a Q-functor ``c -> Q``)."""
    return Module(one(c.quantale), c, [list(vec)])


def column_vector(m: Module) -> tuple[int, ...]:
    if m.target.size != 1:
        raise TypeMismatch("column_vector expects a module X -|-> 1")
    return m.column(0)


def row_vector(m: Module) -> tuple[int, ...]:
    if m.source.size != 1:
        raise TypeMismatch("row_vector expects a module 1 -|-> X")
    return m.row(0)

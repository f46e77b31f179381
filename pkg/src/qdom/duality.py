"""The double-dual pipeline: ev, eta, psi_A, epsilon, the functor F and the duality checks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .caps import DEFAULT_CAPS, Caps
from .completion import build_JX, check_saturated, sup_witnesses, suprema
from .continuity import is_J_continuous, way_below, way_below_JX_crosscheck
from .enriched import (
    QCategory,
    QFunctor,
    functor_maps,
    hom_of_vectors,
    identity_functor,
    is_isomorphic_objects,
    validate_functor,
)
from .errors import QdomError, TheoremViolation
from .ideals import IdealFamily, member
from .open_modules import build_FX, fx_way_below, is_open_module_determined

__all__ = [
    "NotReflecting",
    "evaluation_module",
    "is_evaluation_open",
    "eta",
    "psi_of_double_open",
    "epsilon",
    "reflects_open_modules",
    "F_morphism",
    "is_domain_object",
    "DualityReport",
    "MorphismReport",
    "verify_instance",
    "verify_morphism",
    "verify_duality",
]


class NotReflecting(QdomError, ValueError):
    def __init__(self, witness):
        self.witness = witness
        super().__init__(f"map does not reflect open modules: {witness} pulls back outside FX")


def evaluation_module(X: QCategory, J: IdealFamily, x: int, caps: Caps = DEFAULT_CAPS) -> tuple[int, ...]:
    """``ev_x: FX -> Q``, ``alpha |-> alpha(x)``, as a vector over the open modules."""
    return tuple(a[x] for a in build_FX(X, J, caps).opens)


def is_evaluation_open(X: QCategory, J: IdealFamily, x: int, caps: Caps = DEFAULT_CAPS) -> bool:
    """Re-check that ``ev_x`` is an open module on FX from scratch (cocontinuity and membership)."""
    from .enriched import opposite
    from .open_modules import is_cocontinuous_functional

    fx = build_FX(X, J, caps)
    ev = evaluation_module(X, J, x, caps)
    cat = fx.as_category
    return is_cocontinuous_functional(cat, J, ev, caps) and member(J, opposite(cat), ev, caps)


def double_dual(X: QCategory, J: IdealFamily, caps: Caps = DEFAULT_CAPS):
    """FFX built by brute force: the open modules on the category FX."""
    return build_FX(build_FX(X, J, caps).as_category, J, caps)


def eta(X: QCategory, J: IdealFamily, caps: Caps = DEFAULT_CAPS) -> QFunctor:
    """``x |-> ev_x`` into FFX; raises with a witness if some ``ev_x`` is not in FFX."""
    ffx = double_dual(X, J, caps)
    mapping = []
    for x in X.objects():
        k = ffx.index(evaluation_module(X, J, x, caps))
        if k is None:
            raise TheoremViolation("ev_x is an open module on FX", {"x": X.names[x]})
        mapping.append(k)
    return QFunctor(X, ffx.as_category, mapping)


def psi_of_double_open(X: QCategory, J: IdealFamily, A, caps: Caps = DEFAULT_CAPS) -> tuple[int, ...]:
    """``psi_A(x) = join over alpha of A(alpha) (x) [alpha, lambda x]``."""
    fx = build_FX(X, J, caps)
    q = X.quantale
    t, jt = q.tensor, q.join_table
    out = []
    for x in X.objects():
        lam = X.structure[x]
        r = q.bottom
        for w, a in zip(A, fx.opens):
            r = jt[r][t[w][hom_of_vectors(q, a, lam)]]
        out.append(r)
    return tuple(out)


def epsilon(X: QCategory, J: IdealFamily, A, caps: Caps = DEFAULT_CAPS) -> int | None:
    """``S_X(psi_A)``: the least supremum witness, or ``None`` if there is none."""
    found = sup_witnesses(X, psi_of_double_open(X, J, A, caps))
    return found[0] if found else None


def reflects_open_modules(f: QFunctor, J: IdealFamily, caps: Caps = DEFAULT_CAPS):
    """``(True, None)`` if ``alpha . f`` is open for every open ``alpha`` on the target, else ``(False, alpha)``."""
    fx, fy = build_FX(f.source, J, caps), build_FX(f.target, J, caps)
    for a in fy.opens:
        if fx.index(tuple(a[v] for v in f.mapping)) is None:
            return False, a
    return True, None


def F_morphism(f: QFunctor, J: IdealFamily, caps: Caps = DEFAULT_CAPS) -> QFunctor:
    """``F f: FY -> FX``, ``alpha |-> alpha . f``."""
    fx, fy = build_FX(f.source, J, caps), build_FX(f.target, J, caps)
    mapping = []
    for a in fy.opens:
        k = fx.index(tuple(a[v] for v in f.mapping))
        if k is None:
            raise NotReflecting(a)
        mapping.append(k)
    return QFunctor(fy.as_category, fx.as_category, mapping)


def is_domain_object(X: QCategory, J: IdealFamily, caps: Caps = DEFAULT_CAPS) -> bool:
    return _domain_flags(X, J, caps)["determined"]


def _domain_flags(X, J, caps):
    flags = {"cocomplete": suprema(X, J, caps) is not None, "continuous": False, "determined": False}
    if flags["cocomplete"]:
        flags["continuous"] = is_J_continuous(X, J, caps)
    if flags["continuous"]:
        flags["determined"] = is_open_module_determined(X, J, caps).determined
    return flags


def _fmt(q, vec):
    return "(" + ",".join(q.names[v] for v in vec) + ")"


@dataclass
class DualityReport:
    instance: str
    family: str
    flags: dict
    is_domain_object: bool
    sizes: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)
    checks: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    eta: tuple | None = None
    epsilon: tuple | None = None

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def check(self, name, ok, witness=None):
        self.checks[name] = bool(ok)
        if not ok and witness is not None:
            self.witnesses.setdefault(name, str(witness))

    def records(self, prefix="duality"):
        base = f"{prefix}.{self.instance}"
        out = [(f"{base}.family", self.family)]
        for k, v in self.flags.items():
            out.append((f"{base}.domain.{k}", "true" if v else "false"))
        out.append((f"{base}.attempted", "true" if self.is_domain_object else "false"))
        for k, v in self.sizes.items():
            out.append((f"{base}.size.{k}", str(v)))
        for k, v in self.info.items():
            out.append((f"{base}.{k}", v if isinstance(v, str) else ("true" if v else "false")))
        for k, v in self.checks.items():
            out.append((f"{base}.{k}", "PASS" if v else "FAIL"))
        for k, v in self.witnesses.items():
            out.append((f"{base}.witness.{k}", v))
        return out


def verify_instance(name: str, X: QCategory, J: IdealFamily, caps: Caps = DEFAULT_CAPS) -> DualityReport:
    """Run every object-level check of the duality on one category."""
    flags = _domain_flags(X, J, caps)
    rep = DualityReport(name, J.name, flags, flags["determined"])
    rep.info["hypothesis.phi_generated"] = J.phi_generated
    rep.sizes["x"] = X.size
    if flags["cocomplete"]:
        rep.sizes["jx"] = len(build_JX(X, J, caps))
    if not rep.is_domain_object:
        return rep
    q = X.quantale
    sat = check_saturated(J, X, caps)
    rep.info["hypothesis.saturated"] = sat.ok

    fx = build_FX(X, J, caps)
    cat = fx.as_category
    rep.sizes["fx"] = len(fx)
    fx_flags = _domain_flags(cat, J, caps)
    rep.check("fx.domain", fx_flags["determined"], fx_flags)

    cross = way_below_JX_crosscheck(X, J, caps)
    rep.check("oracle.way_below_jx", cross.ok, cross.mismatches[:1])
    fwb = fx_way_below(X, J, caps)
    rep.check("oracle.fx_way_below", fwb.agrees_with_lifting, fwb.mismatches[:1])
    rep.check("oracle.fx_restriction", fwb.restriction)
    rep.check("lemma.fx_sup", fwb.sup_recovers, fwb.mismatches[:1])
    rep.check("way_below.idempotent", is_open_module_determined(X, J, caps).idempotent)

    if not fx_flags["cocomplete"]:
        return rep
    ffx = build_FX(cat, J, caps)
    rep.sizes["ffx"] = len(ffx)
    evs = [evaluation_module(X, J, x, caps) for x in X.objects()]
    missing = [x for x, ev in enumerate(evs) if ffx.index(ev) is None]
    rep.check("lemma.ev", not missing, missing and X.names[missing[0]])
    if missing:
        return rep

    e = eta(X, J, caps)
    rep.eta = e.mapping
    m = e.mapping
    F2 = ffx.as_category.structure
    rep.check("eta.functorial", not validate_functor(e))
    bad_inj = [(x, y) for x, y in itertools.combinations(X.objects(), 2) if m[x] == m[y] and not is_isomorphic_objects(X, x, y)]
    rep.check("eta.injective", not bad_inj, bad_inj[:1])
    hit = set(m)
    bad_surj = [k for k in range(len(ffx)) if k not in hit]
    rep.check("eta.surjective", not bad_surj, bad_surj[:1] and _fmt(q, ffx.opens[bad_surj[0]]))
    bad_full = [(x, y) for x in X.objects() for y in X.objects() if F2[m[x]][m[y]] != X.structure[x][y]]
    rep.check("eta.full", not bad_full, bad_full[:1])
    rep.check("eta.iso", not (bad_inj or bad_surj or bad_full) and not validate_functor(e))

    wb = way_below(X, J, caps).matrix
    psi_bad, ab_bad, eps, col_bad = [], [], [], []
    for k, A in enumerate(ffx.opens):
        psi = psi_of_double_open(X, J, A, caps)
        if not member(J, X, psi, caps):
            psi_bad.append(_fmt(q, A))
        found = sup_witnesses(X, psi)
        s = found[0] if found else None
        eps.append(s)
        if s is None:
            ab_bad.append((_fmt(q, A), "no supremum"))
            continue
        for a_i, a in enumerate(fx.opens):
            if A[a_i] != a[s]:
                ab_bad.append((_fmt(q, A), _fmt(q, a)))
                break
    for x in X.objects():
        if psi_of_double_open(X, J, evs[x], caps) != wb.column(x):
            col_bad.append(X.names[x])
    rep.epsilon = tuple(eps)
    rep.check("lemma.psi", not psi_bad, psi_bad[:1])
    rep.check("lemma.psi_columns", not col_bad, col_bad[:1])
    rep.check("lemma.ab", not ab_bad, ab_bad[:1])
    eps_eta = [x for x in X.objects() if eps[m[x]] is None or not is_isomorphic_objects(X, eps[m[x]], x)]
    eta_eps = [k for k, s in enumerate(eps) if s is None or m[s] != k]
    rep.check("epsilon.after_eta", not eps_eta, eps_eta[:1])
    rep.check("epsilon.before_eta", not eta_eps, eta_eps[:1])
    return rep


@dataclass
class MorphismReport:
    source: str
    target: str
    maps: int
    reflecting: int
    checks: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)

    @property
    def passed(self):
        return all(self.checks.values())

    def records(self, prefix="duality"):
        base = f"{prefix}.morphisms.{self.source}.{self.target}"
        out = [(f"{base}.maps", str(self.maps)), (f"{base}.reflecting", str(self.reflecting))]
        out += [(f"{base}.{k}", "PASS" if v else "FAIL") for k, v in self.checks.items()]
        out += [(f"{base}.witness.{k}", v) for k, v in self.witnesses.items()]
        return out


def verify_morphism(f: QFunctor, J: IdealFamily, caps: Caps = DEFAULT_CAPS) -> dict:
    """Naturality and closure checks for one reflecting map ``f: X -> Y``.

    Returns a dict of named booleans: ``F(f)`` is a functor, ``F(f)`` itself
    reflects open modules, and ``FF(f) . eta_X = eta_Y . f``.
    """
    X, Y = f.source, f.target
    Ff = F_morphism(f, J, caps)
    out = {"F_functor": not validate_functor(Ff)}
    ok, _ = reflects_open_modules(Ff, J, caps)
    out["F_reflecting"] = ok
    if not ok:
        out["naturality"] = False
        return out
    FFf = F_morphism(Ff, J, caps)
    ex, ey = eta(X, J, caps), eta(Y, J, caps)
    out["naturality"] = all(FFf.mapping[ex.mapping[x]] == ey.mapping[f.mapping[x]] for x in X.objects())
    return out


def morphism_report(sname, X, tname, Y, J, caps=DEFAULT_CAPS) -> MorphismReport:
    maps = functor_maps(X, Y, caps.columns)
    rep = MorphismReport(sname, tname, len(maps), 0)
    fx, fy = build_FX(X, J, caps), build_FX(Y, J, caps)
    agg = {"F_functor": True, "F_reflecting": True, "naturality": True}
    for m in maps:
        f = QFunctor(X, Y, m)
        if not all(fx.index(tuple(a[v] for v in m)) is not None for a in fy.opens):
            continue
        rep.reflecting += 1
        for k, v in verify_morphism(f, J, caps).items():
            if not v and agg[k]:
                rep.witnesses[k] = str(m)
            agg[k] = agg[k] and v
    rep.checks.update(agg)
    return rep


def verify_duality(instances, J: IdealFamily, caps: Caps = DEFAULT_CAPS, morphisms: bool = True):
    """Object checks for every ``(name, X)``; naturality for all reflecting maps between accepted ones."""
    reports = [verify_instance(name, X, J, caps) for name, X in instances]
    mreps = []
    if morphisms:
        accepted = [(n, X) for (n, X), r in zip(instances, reports) if r.is_domain_object and r.passed]
        for (sn, X), (tn, Y) in itertools.product(accepted, repeat=2):
            mreps.append(morphism_report(sn, X, tn, Y, J, caps))
    return reports, mreps


def F_identity_ok(X: QCategory, J: IdealFamily, caps: Caps = DEFAULT_CAPS) -> bool:
    Fid = F_morphism(identity_functor(X), J, caps)
    return Fid.mapping == tuple(range(len(build_FX(X, J, caps))))

"""Generated example families: posets, lattices, the ultrametric counterexample, formal balls.

Every ``run_*`` function returns a list of ``(key, value)`` records.  Values
``PASS`` and ``FAIL`` are checks; anything else is informational.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor

from ..caps import DEFAULT_CAPS, Caps
from ..completion import build_JX, check_saturated, has_tensors, suprema
from ..continuity import is_J_continuous, way_below
from ..duality import morphism_report, reflects_open_modules, verify_instance
from ..enriched import (
    QCategory,
    QFunctor,
    find_equivalence,
    full_subcategory,
    functor_maps,
    one,
    opposite,
    quantale_category,
    validate_category,
)
from ..errors import InvalidStructure, ResourceLimitError
from ..ideals import ALL, FORMAL_BALLS, FSW, IdealFamily, flat, flat_witness, fsw_witnesses
from ..open_modules import build_FX, is_open_module_determined
from ..quantale import Quantale, ch_max, ch_plus, q2

__all__ = [
    "posets",
    "poset_category",
    "lattices",
    "gallery_lawson",
    "gallery_absolute",
    "ntrunc",
    "formal_ball_bases",
    "run_lawson",
    "run_absolute",
    "run_ultrametric",
    "run_formal_balls",
    "run_undetermined",
    "parallel_map",
    "run_instances",
]

LETTERS = "abcdefghijklmnopqrstuvwxyz"


def _ok(flag: bool) -> str:
    return "PASS" if flag else "FAIL"


def _bool(flag: bool) -> str:
    return "true" if flag else "false"


def parallel_map(fn, items, jobs: int = 1):
    """``map`` that keeps input order; fans out to processes when ``jobs > 1``."""
    items = list(items)
    if jobs <= 1 or len(items) < 2:
        return [fn(i) for i in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


# -- posets up to isomorphism -------------------------------------------------


def _canonical(leq, n):
    return min(tuple(leq[p[i]][p[j]] for i in range(n) for j in range(n)) for p in itertools.permutations(range(n)))


def posets(n: int) -> list[tuple[tuple[bool, ...], ...]]:
    """All posets on ``n`` elements up to isomorphism, as order matrices.

    Every finite poset has a linear extension, so it suffices to close strictly
    upper-triangular relations under transitivity and deduplicate by the
    lexicographically least relabelling.
    """
    if n == 0:
        return [()]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    seen = set()
    for bits in itertools.product((False, True), repeat=len(pairs)):
        leq = [[i == j for j in range(n)] for i in range(n)]
        for (i, j), b in zip(pairs, bits):
            leq[i][j] = b
        if any(leq[i][k] and leq[k][j] and not leq[i][j] for i in range(n) for k in range(n) for j in range(n)):
            continue
        seen.add(_canonical(leq, n))
    out = []
    for flat_ in sorted(seen):
        out.append(tuple(tuple(flat_[i * n + j] for j in range(n)) for i in range(n)))
    return out


def poset_category(leq, q: Quantale | None = None) -> QCategory:
    """The Q2-category with ``X(x, y) = top`` iff ``x <= y``."""
    q = q or q2()
    n = len(leq)
    return QCategory(q, [[q.unit if leq[i][j] else q.bottom for j in range(n)] for i in range(n)], list(LETTERS[:n]))


def _is_lattice(leq) -> bool:
    n = len(leq)
    if n == 0:
        return False
    for a, b in itertools.combinations_with_replacement(range(n), 2):
        ups = [c for c in range(n) if leq[a][c] and leq[b][c]]
        if not any(all(leq[j][c] for c in ups) for j in ups):
            return False
    # finite with all binary joins: a bottom is still needed for the empty join
    return any(all(leq[b][c] for c in range(n)) for b in range(n))


def lattices(n: int):
    return [p for p in posets(n) if _is_lattice(p)]


def gallery_lawson(max_size: int, all_sizes: bool = False, caps: Caps = DEFAULT_CAPS):
    """Posets over Q2 with ``max_size`` elements (or ``1..max_size``) as named instances."""
    if max_size > caps.objects:
        raise ResourceLimitError("lawson poset size", caps.objects)
    sizes = range(1, max_size + 1) if all_sizes else [max_size]
    return [(f"p{n}_{k}", poset_category(p)) for n in sizes for k, p in enumerate(posets(n))]


def gallery_absolute(max_size: int, all_sizes: bool = True, extra_quantale: Quantale | None = None, caps: Caps = DEFAULT_CAPS):
    """Finite lattices over Q2 and optionally the quantale itself as a category."""
    if max_size > caps.objects:
        raise ResourceLimitError("lattice size", caps.objects)
    sizes = range(1, max_size + 1) if all_sizes else [max_size]
    out = [(f"l{n}_{k}", poset_category(p)) for n in sizes for k, p in enumerate(lattices(n))]
    if extra_quantale is not None:
        out.append(("quantale", quantale_category(extra_quantale)))
    return out


# -- duality runs -------------------------------------------------------------


def _instance_records(args):
    prefix, name, X, J, caps, extra = args
    rep = verify_instance(name, X, J, caps)
    recs = rep.records(prefix)
    base = f"{prefix}.{name}"
    if "saturation" in extra:
        recs.append((f"{base}.saturated", _ok(check_saturated(J, X, caps).ok)))
    if "lawson" in extra and rep.is_domain_object:
        fx = build_FX(X, J, caps)
        filters = {tuple(X.structure[x]) for x in X.objects()}
        recs.append((f"{base}.fx.principal_filters", _ok(set(fx.opens) == filters)))
        recs.append((f"{base}.fx.dual", _ok(find_equivalence(fx.as_category, opposite(X), caps.columns) is not None)))
    if "lawson" in extra:
        recs.append((f"{base}.accepted", _ok(rep.is_domain_object)))
    return recs, rep.is_domain_object and rep.passed


def _morphism_records(args):
    prefix, sn, X, tn, Y, J, caps = args
    return morphism_report(sn, X, tn, Y, J, caps).records(prefix)


def run_instances(prefix, instances, J, caps, jobs, extra=(), morphisms=True):
    for name, X in instances:
        problems = validate_category(X)
        if problems:
            raise InvalidStructure(f"gallery instance {name}", problems)
    results = parallel_map(_instance_records, [(prefix, n, X, J, caps, extra) for n, X in instances], jobs)
    recs = [r for rs, _ in results for r in rs]
    if morphisms:
        accepted = [(n, X) for (n, X), (_, ok) in zip(instances, results) if ok]
        pairs = [
            (prefix, sn, X, tn, Y, J, caps)
            for (sn, X), (tn, Y) in itertools.product(accepted, repeat=2)
            if X.quantale == Y.quantale
        ]
        for rs in parallel_map(_morphism_records, pairs, jobs):
            recs.extend(rs)
    return recs


def run_lawson(max_size: int = 4, all_sizes: bool = False, caps: Caps = DEFAULT_CAPS, jobs: int = 1, morphisms: bool = True):
    """Finite Lawson duality: every poset of the given size(s), family FSW."""
    inst = gallery_lawson(max_size, all_sizes, caps)
    recs = [("lawson.count", str(len(inst)))]
    return recs + run_instances("lawson", inst, FSW, caps, jobs, ("lawson", "saturation"), morphisms)


def has_right_adjoint(f: QFunctor) -> bool:
    """Some ``g`` with ``Y(f x, y) = X(x, g y)``, found row by row."""
    X, Y = f.source, f.target
    rows = {tuple(X.structure[x][x2] for x in X.objects()) for x2 in X.objects()}
    return all(tuple(Y.structure[f.mapping[x]][y] for x in X.objects()) in rows for y in Y.objects())


def _absolute_pair(args):
    sn, X, tn, Y, caps = args
    base = f"absolute.maps.{sn}.{tn}"
    maps = functor_maps(X, Y, caps.columns)
    mismatch = None
    adjoints = 0
    for m in maps:
        f = QFunctor(X, Y, m)
        ra = has_right_adjoint(f)
        adjoints += ra
        if reflects_open_modules(f, ALL, caps)[0] != ra and mismatch is None:
            mismatch = m
    recs = [(f"{base}.maps", str(len(maps))), (f"{base}.left_adjoints", str(adjoints))]
    recs.append((f"{base}.reflecting_iff_left_adjoint", _ok(mismatch is None)))
    if mismatch is not None:
        recs.append((f"{base}.witness", str(mismatch)))
    return recs


def _open_iff_left_adjoint(X, caps):
    Q = quantale_category(X.quantale)
    fx = set(build_FX(X, ALL, caps).opens)
    for m in functor_maps(X, Q, caps.columns):
        if has_right_adjoint(QFunctor(X, Q, m)) != (m in fx):
            return False
    return True


def run_absolute(max_size: int = 5, quantale: Quantale | None = None, caps: Caps = DEFAULT_CAPS, jobs: int = 1, morphisms: bool = True):
    """The absolute case: family All on finite lattices."""
    inst = gallery_absolute(max_size, True, quantale, caps)
    recs = [("absolute.count", str(len(inst)))]
    for name, X in inst:
        recs.append((f"absolute.{name}.fx.left_adjoints", _ok(_open_iff_left_adjoint(X, caps))))
    recs += run_instances("absolute", inst, ALL, caps, jobs, ("saturation",), morphisms)
    pairs = [(sn, X, tn, Y, caps) for (sn, X), (tn, Y) in itertools.product(inst, repeat=2)]
    for rs in parallel_map(_absolute_pair, pairs, jobs):
        recs.extend(rs)
    return recs


# -- the ultrametric counterexample -------------------------------------------


def ntrunc(n: int) -> QCategory:
    """``{0..n}`` over CH_MAX(n) with distance 0 on the diagonal and ``max(i, j)`` elsewhere."""
    q = ch_max(n)
    return QCategory(q, [[0 if i == j else max(i, j) for j in range(n + 1)] for i in range(n + 1)], [str(i) for i in range(n + 1)])


def _ultra_phi(n):
    return tuple([0] + [1] * n)


def star_identity(n: int):
    """Evaluate both sides of the flatness identity for translated corepresentables.

    For points ``a, b`` and radii ``c1, c2`` put ``A = max(N(-, a), c1)`` and
    ``B = max(N(-, b), c2)``.  Returns ``(choices, closed_form_failures,
    identity_failures)`` where a closed-form failure is a choice with
    ``inf_z max(Az, Bz, phi z) != max(a, b, c1, c2)`` and an identity failure
    has ``inf_z max(Az, Bz, phi z) != max(inf_s max(As, phi s), inf_r max(Br, phi r))``.
    Numbers are indices into CH_MAX(n) where ``n + 1`` stands for infinity.
    """
    X = ntrunc(n)
    phi = _ultra_phi(n)
    pts = range(n + 1)
    radii = range(n + 2)
    closed, ident, total = [], [], 0
    for a, b, c1, c2 in itertools.product(pts, pts, radii, radii):
        total += 1
        A = [max(X.structure[z][a], c1) for z in pts]
        B = [max(X.structure[z][b], c2) for z in pts]
        lhs = min(max(A[z], B[z], phi[z]) for z in pts)
        left = min(max(A[s], phi[s]) for s in pts)
        right = min(max(B[r], phi[r]) for r in pts)
        if lhs != max(a, b, c1, c2):
            closed.append((a, b, c1, c2, lhs))
        if lhs != max(left, right):
            ident.append((a, b, c1, c2, lhs, max(left, right)))
    return total, closed, ident


def run_ultrametric(cap: int = 3, caps: Caps = DEFAULT_CAPS):
    if cap < 3:
        raise ValueError("the ultrametric example needs cap >= 3")
    if cap + 1 > caps.objects:
        raise ResourceLimitError("ultrametric points", caps.objects)
    X = ntrunc(cap)
    q = X.quantale
    phi = _ultra_phi(cap)
    recs = [("ultrametric.cap", str(cap)), ("ultrametric.category.valid", _ok(not validate_category(X)))]
    recs.append(("ultrametric.phi", "(" + ",".join(q.names[v] for v in phi) + ")"))

    wits = fsw_witnesses(X, phi, caps)
    pairs = sorted({(w[0], w[1]) for w in wits if len(w) == 5 and w[0] < w[1]})
    member = not wits
    recs.append(("ultrametric.fsw.member", _bool(member)))
    recs.append(("ultrametric.fsw.not_member", _ok(not member and (2, 3) in pairs)))
    if (2, 3) in pairs:
        recs.append(("ultrametric.fsw.witness", "(2,3)"))
    elif pairs:
        recs.append(("ultrametric.fsw.witness", "(%d,%d)" % pairs[0]))
    recs.append(("ultrametric.fsw.witness_pairs", " ".join("(%d,%d)" % p for p in pairs)))

    total, closed, ident = star_identity(cap)
    name = lambda i: q.names[i]  # noqa: E731
    recs.append(("ultrametric.identity.choices", str(total)))
    recs.append(("ultrametric.identity.closed_form", _ok(not closed)))
    recs.append(("ultrametric.identity.closed_form.failures", str(len(closed))))
    if closed:
        a, b, c1, c2, lhs = closed[0]
        recs.append((
            "ultrametric.identity.closed_form.witness",
            f"a={a},b={b},c1={name(c1)},c2={name(c2)},lhs={name(lhs)},max={name(max(a, b, c1, c2))}",
        ))
    recs.append(("ultrametric.identity.meets", _ok(not ident)))
    recs.append(("ultrametric.identity.meets.failures", str(len(ident))))
    if ident:
        a, b, c1, c2, lhs, rhs = ident[0]
        recs.append((
            "ultrametric.identity.meets.witness",
            f"a={a},b={b},c1={name(c1)},c2={name(c2)},lhs={name(lhs)},rhs={name(rhs)}",
        ))

    restricted = flat_witness(X, phi, "translated_corepresentables", caps)
    recs.append(("ultrametric.flat_restricted", _ok(restricted is None)))
    recs.append(("ultrametric.flat_restricted.agrees_with_identity", _ok((restricted is None) == (not ident))))
    if restricted is not None:
        recs.append(("ultrametric.flat_restricted.witness", " ".join(_vec(q, v) for v in restricted)))
    full = flat_witness(X, phi, "all_modules", caps)
    recs.append(("ultrametric.flat_all.member", _bool(full is None)))
    if full is not None:
        recs.append(("ultrametric.flat_all.witness", " ".join(_vec(q, v) for v in full)))
    return recs


def _vec(q, v):
    if isinstance(v, str):
        return v
    return "(" + ",".join(q.names[i] for i in v) + ")"


# -- formal balls ---------------------------------------------------------------


def formal_ball_bases(n: int = 2, max_points: int = 2):
    """The empty space, the point, and every 2-point space over CH_PLUS(n) up to swapping."""
    q = ch_plus(n)
    out = [("empty", QCategory(q, [], [])), ("point", one(q))]
    if max_points >= 2:
        seen = set()
        for d1, d2 in itertools.product(q.elements(), repeat=2):
            key = min((d1, d2), (d2, d1))
            if key in seen:
                continue
            seen.add(key)
            X = QCategory(q, [[q.unit, key[0]], [key[1], q.unit]], ["a", "b"])
            out.append((f"two_{q.names[key[0]]}_{q.names[key[1]]}", X))
    return out


def tensor_object(X: QCategory, y: int, u: int):
    """An object ``z`` with ``X(z, w) = hom(u, X(y, w))`` for all ``w``, or ``None``."""
    h = X.quantale.hom_table
    row = tuple(h[u][X.structure[y][w]] for w in X.objects())
    return next((z for z in X.objects() if X.structure[z] == row), None)


def _formal_ball_records(args):
    name, A, caps = args
    J = FORMAL_BALLS
    q = A.quantale
    base = f"formal_balls.{name}"
    jx = build_JX(A, J, caps)
    X = jx.as_category
    recs = [(f"{base}.size.a", str(A.size)), (f"{base}.size.x", str(X.size))]
    cocomplete = suprema(X, J, caps) is not None
    recs.append((f"{base}.x.cocomplete", _ok(cocomplete)))
    if not cocomplete:
        return recs
    continuous = is_J_continuous(X, J, caps)
    recs.append((f"{base}.x.continuous", _ok(continuous)))
    recs.append((f"{base}.x.determined", _bool(is_open_module_determined(X, J, caps).determined)))
    recs.append((f"{base}.saturated", _ok(check_saturated(J, A, caps).ok)))
    wb = way_below(X, J, caps).matrix
    eq = [x for x in X.objects() if wb.column(x) == tuple(X.structure[z][x] for z in X.objects())]
    recs.append((f"{base}.equaliser", "{" + ",".join(X.names[x] for x in eq) + "}"))
    Ap = full_subcategory(X, eq)
    recs.append((f"{base}.equaliser_iso_base", _ok(find_equivalence(Ap, A, caps.columns) is not None)))
    jap = build_JX(Ap, J, caps).as_category
    recs.append((f"{base}.x_iso_j_equaliser", _ok(find_equivalence(X, jap, caps.columns) is not None)))
    fx = build_FX(X, J, caps).as_category
    jop = build_JX(opposite(Ap), J, caps).as_category
    recs.append((f"{base}.fx_iso_j_equaliser_op", _ok(find_equivalence(fx, jop, caps.columns) is not None)))

    if has_tensors(X):
        t = q.tensor
        preserving = []
        for x in X.objects():
            ok = all(
                X.structure[x][tensor_object(X, y, u)] == t[X.structure[x][y]][u]
                for y in X.objects()
                for u in q.elements()
            )
            if ok:
                preserving.append(x)
        recs.append((f"{base}.equaliser_iff_preserves_tensors", _ok(preserving == eq)))
    else:
        recs.append((f"{base}.tensors", "missing"))
    return recs


def run_formal_balls(n: int = 2, bases=None, caps: Caps = DEFAULT_CAPS, jobs: int = 1, duality: bool = True):
    """Build ``X = JA`` for each base ``A`` and run the structure checks; optionally the duality on ``X``."""
    bases = formal_ball_bases(n) if bases is None else bases
    for name, A in bases:
        if A.size > caps.objects:
            raise ResourceLimitError(f"formal-ball base {name}", caps.objects)
    recs = []
    for rs in parallel_map(_formal_ball_records, [(name, A, caps) for name, A in bases], jobs):
        recs.extend(rs)
    if duality:
        inst = [(name, build_JX(A, FORMAL_BALLS, caps).as_category) for name, A in bases]
        recs += run_instances("formal_balls.duality", inst, FORMAL_BALLS, caps, jobs, (), morphisms=False)
    return recs


# -- searching for continuous but not determined categories -------------------


def small_categories(q: Quantale, n: int):
    """Every Q-category on ``n`` objects, brute force over off-diagonal entries."""
    off = [(i, j) for i in range(n) for j in range(n) if i != j]
    for vals in itertools.product(q.elements(), repeat=len(off)):
        s = [[q.unit if i == j else None for j in range(n)] for i in range(n)]
        for (i, j), v in zip(off, vals):
            s[i][j] = v
        X = QCategory(q, s)
        if not validate_category(X):
            yield X


def _search_one(args):
    label, X, J, caps = args
    try:
        if suprema(X, J, caps) is None or not is_J_continuous(X, J, caps):
            return label, False, False
        return label, True, is_open_module_determined(X, J, caps).determined
    except ResourceLimitError:
        return label, None, None


def run_undetermined(max_objects: int = 2, quantales=None, families=None, caps: Caps = DEFAULT_CAPS, jobs: int = 1):
    """Look for J-continuous categories that are not open-module determined; results are only reported."""
    quantales = quantales or [("q2", q2()), ("ch_plus_1", ch_plus(1)), ("ch_max_1", ch_max(1))]
    families = families or [ALL, FSW, FORMAL_BALLS, flat(), IdealFamily("representables", "representables")]
    tasks = []
    for qn, q in quantales:
        for n in range(1, max_objects + 1):
            for k, X in enumerate(small_categories(q, n)):
                for J in families:
                    tasks.append((f"{qn}.{J.name}.n{n}_{k}", X, J, caps))
    found, continuous, skipped = [], 0, 0
    for label, cont, det in parallel_map(_search_one, tasks, jobs):
        if cont is None:
            skipped += 1
        elif cont:
            continuous += 1
            if not det:
                found.append(label)
    recs = [
        ("undetermined.searched", str(len(tasks))),
        ("undetermined.continuous", str(continuous)),
        ("undetermined.skipped", str(skipped)),
        ("undetermined.found", str(len(found))),
    ]
    if found:
        recs.append(("undetermined.examples", " ".join(found[:10])))
    return recs

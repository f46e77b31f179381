"""``qdom`` command line: checks on instance files and the generated galleries.

Exit status is 0 when every check passes, 1 when a check fails, and 2 for
parse errors, resource caps and other input problems.
"""

from __future__ import annotations

import argparse
import os
import sys

from ..caps import Caps
from ..completion import build_JX, check_saturated, suprema
from ..continuity import is_J_continuous, way_below, way_below_JX_crosscheck
from ..enriched import is_separated
from ..errors import ParseError, QdomError, ResourceLimitError
from ..ideals import IdealFamily, family_from_name
from ..open_modules import build_FX, fx_way_below, is_open_module_determined
from ..quantale import parse_standard, totally_below, validate_quantale
from . import gallery
from .instance_io import InstanceFile, load_instance, validate_instance
from .report import emit_report, exit_status

__all__ = ["main", "build_parser"]

FAMILIES = "representables|all|flat|flat-restricted|fsw|formal-balls|phi:<file>"


def _ok(flag):
    return "PASS" if flag else "FAIL"


def _vec(q, v):
    return "(" + ",".join(q.names[i] for i in v) + ")"


def _caps(args, doc: InstanceFile | None = None) -> Caps:
    caps = Caps.from_env()
    if doc is not None:
        caps = doc.apply_caps(caps)
    changes = ",".join(
        f"{name}={getattr(args, 'cap_' + name)}"
        for name in ("objects", "quantale", "columns", "downsets")
        if getattr(args, "cap_" + name, None) is not None
    )
    return caps.override_from_string(changes) if changes else caps


def _load(path):
    doc = load_instance(path)
    problems = validate_instance(doc)
    return doc, problems


def _check_sizes(doc: InstanceFile, caps: Caps):
    if doc.quantale.size > caps.quantale:
        raise ResourceLimitError("quantale size", caps.quantale)
    for name, c in doc.categories.items():
        if c.size > caps.objects:
            raise ResourceLimitError(f"objects of category {name}", caps.objects)


def _family(args, doc: InstanceFile | None) -> IdealFamily:
    name = args.ideal_family or (doc.family if doc is not None else None) or "fsw"
    if name.startswith("phi:"):
        path = name[4:]
        weights_doc = load_instance(path, quantale=doc.quantale if doc is not None else None)
        weights = [m for src, _, m in weights_doc.modules.values() if src == "1"]
        if not weights:
            raise QdomError(f"{path} declares no weights [module NAME: 1 -> I]")
        return family_from_name("phi", weights)
    return family_from_name(name)


def _categories(doc, which):
    if which:
        if which not in doc.categories:
            raise QdomError(f"no category named {which!r}")
        return [(which, doc.categories[which])]
    return list(doc.categories.items())


def _prepare(args):
    doc, problems = _load(args.file)
    caps = _caps(args, doc)
    _check_sizes(doc, caps)
    return doc, problems, caps


def cmd_check_quantale(args):
    if os.path.exists(args.source):
        doc = load_instance(args.source)
        q = doc.quantale
        caps = _caps(args, doc)
    else:
        try:
            q = parse_standard(args.source)
        except QdomError as e:
            return [("quantale.valid", "FAIL"), ("quantale.problem", str(e).replace("\n", " "))]
        except ValueError as e:
            raise QdomError(str(e)) from None
        caps = _caps(args)
    if q.size > caps.quantale:
        raise ResourceLimitError("quantale size", caps.quantale)
    problems = validate_quantale(q)
    recs = [("quantale.size", str(q.size)), ("quantale.valid", _ok(not problems))]
    recs += [(f"quantale.problem.{i}", p) for i, p in enumerate(problems)]
    if not problems:
        tb = totally_below(q, caps.downsets)
        pairs = [f"{q.names[a]}<<{q.names[b]}" for a in q.elements() for b in q.elements() if tb[a][b]]
        recs.append(("quantale.totally_below", " ".join(pairs)))
    return recs


def cmd_check_category(args):
    doc, problems, caps = _prepare(args)
    recs = [("instance.valid", _ok(not problems))]
    recs += [(f"instance.problem.{i}", p) for i, p in enumerate(problems)]
    if not problems:
        for name, c in doc.categories.items():
            recs.append((f"category.{name}.size", str(c.size)))
            recs.append((f"category.{name}.separated", "true" if is_separated(c) else "false"))
    return recs


def _valid_or_records(problems):
    if problems:
        return [("instance.valid", "FAIL")] + [(f"instance.problem.{i}", p) for i, p in enumerate(problems)]
    return None


def cmd_jx(args):
    doc, problems, caps = _prepare(args)
    bad = _valid_or_records(problems)
    if bad:
        return bad
    J = _family(args, doc)
    recs = []
    for name, X in _categories(doc, args.category):
        q = X.quantale
        jx = build_JX(X, J, caps)
        base = f"jx.{name}"
        recs.append((f"{base}.family", J.name))
        recs.append((f"{base}.size", str(len(jx))))
        for i, v in enumerate(jx.ideals):
            recs.append((f"{base}.ideal.{i:03d}", _vec(q, v)))
        sups = suprema(X, J, caps)
        recs.append((f"{base}.cocomplete", "true" if sups is not None else "false"))
        if sups is not None:
            recs.append((f"{base}.suprema", " ".join(X.names[s] for s in sups)))
        recs.append((f"{base}.saturated", _ok(check_saturated(J, X, caps).ok)))
    return recs


def cmd_way_below(args):
    doc, problems, caps = _prepare(args)
    bad = _valid_or_records(problems)
    if bad:
        return bad
    J = _family(args, doc)
    recs = []
    for name, X in _categories(doc, args.category):
        q = X.quantale
        base = f"way_below.{name}"
        recs.append((f"{base}.family", J.name))
        if suprema(X, J, caps) is None:
            recs.append((f"{base}.cocomplete", "false"))
            continue
        wb = way_below(X, J, caps)
        for z in X.objects():
            recs.append((f"{base}.row.{X.names[z]}", _vec(q, wb.matrix.row(z))))
        recs.append((f"{base}.continuous", "true" if wb.is_continuous else "false"))
        recs.append((f"{base}.continuity_criteria_agree", _ok(wb.is_continuous == wb.approximating)))
        recs.append((f"{base}.oracle.jx_formula", _ok(way_below_JX_crosscheck(X, J, caps).ok)))
    return recs


def cmd_fx(args):
    doc, problems, caps = _prepare(args)
    bad = _valid_or_records(problems)
    if bad:
        return bad
    J = _family(args, doc)
    recs = []
    for name, X in _categories(doc, args.category):
        q = X.quantale
        base = f"fx.{name}"
        recs.append((f"{base}.family", J.name))
        if suprema(X, J, caps) is None:
            recs.append((f"{base}.cocomplete", "false"))
            continue
        fx = build_FX(X, J, caps)
        recs.append((f"{base}.size", str(len(fx))))
        for i, a in enumerate(fx.opens):
            recs.append((f"{base}.open.{i:03d}", _vec(q, a)))
        domain = is_J_continuous(X, J, caps) and is_open_module_determined(X, J, caps).determined
        recs.append((f"{base}.domain", "true" if domain else "false"))
        if domain:
            # these are theorems about domain objects only
            fwb = fx_way_below(X, J, caps)
            recs.append((f"{base}.oracle.way_below", _ok(fwb.agrees_with_lifting)))
            recs.append((f"{base}.oracle.restriction", _ok(fwb.restriction)))
            recs.append((f"{base}.sup_recovers_opens", _ok(fwb.sup_recovers)))
    return recs


def cmd_duality(args):
    instances, J, caps = [], None, None
    for path in args.files:
        doc, problems = _load(path)
        if problems:
            stem = os.path.splitext(os.path.basename(path))[0]
            return [(f"duality.{stem}.valid", "FAIL")] + [
                (f"duality.{stem}.problem.{i}", p) for i, p in enumerate(problems)
            ]
        caps = _caps(args, doc)
        _check_sizes(doc, caps)
        fam = _family(args, doc)
        if J is not None and fam != J:
            raise QdomError("all instance files must use the same ideal family")
        J = fam
        stem = os.path.splitext(os.path.basename(path))[0]
        for name, X in doc.categories.items():
            instances.append((name if len(args.files) == 1 else f"{stem}.{name}", X))
    if not instances:
        return []
    return gallery.run_instances("duality", instances, J, caps, args.jobs, morphisms=not args.no_morphisms)


def cmd_gallery(args):
    caps = _caps(args)
    kind = args.kind
    if kind == "lawson":
        return gallery.run_lawson(args.max_size or 4, args.all_sizes, caps, args.jobs, not args.no_morphisms)
    if kind == "absolute":
        q = parse_standard(args.quantale) if args.quantale else None
        return gallery.run_absolute(args.max_size or 5, q, caps, args.jobs, not args.no_morphisms)
    if kind == "ultrametric":
        return gallery.run_ultrametric(args.cap or 3, caps)
    if kind == "formal-balls":
        bases = None
        if args.base:
            doc = load_instance(args.base)
            bases = list(doc.categories.items())
        return gallery.run_formal_balls(args.n, bases, caps, args.jobs)
    if kind == "undetermined":
        return gallery.run_undetermined(args.max_size or 2, caps=caps, jobs=args.jobs)
    raise QdomError(f"unknown gallery {kind!r}")


def _common(p, family=True):
    p.add_argument("--format", choices=("human", "records"), default="human")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (output order never changes)")
    for name in ("objects", "quantale", "columns", "downsets"):
        p.add_argument(f"--cap-{name}", type=int, default=None, dest=f"cap_{name}")
    if family:
        p.add_argument("--ideal-family", default=None, help=f"one of {FAMILIES} (default: file's [family], else fsw)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qdom", description="Finite checks for quantale-enriched domain theory.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check-quantale", help="validate a quantale file or builtin (q2, ch_plus:N, ch_max:N)")
    p.add_argument("source")
    _common(p, family=False)
    p.set_defaults(func=cmd_check_quantale)

    p = sub.add_parser("check-category", help="validate every section of an instance file")
    p.add_argument("file")
    _common(p, family=False)
    p.set_defaults(func=cmd_check_category)

    for name, func, help_ in (
        ("jx", cmd_jx, "list JX, suprema and saturation"),
        ("way-below", cmd_way_below, "way-below module and continuity"),
        ("fx", cmd_fx, "open modules and determinedness"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("file")
        p.add_argument("--category", default=None, help="only this category of the file")
        _common(p)
        p.set_defaults(func=func)

    p = sub.add_parser("duality", help="verify the duality on every category of the given files")
    p.add_argument("files", nargs="+")
    p.add_argument("--no-morphisms", action="store_true", help="skip naturality over reflecting maps")
    _common(p)
    p.set_defaults(func=cmd_duality)

    p = sub.add_parser("gallery", help="generated examples")
    p.add_argument("kind", choices=("lawson", "ultrametric", "absolute", "formal-balls", "undetermined"))
    p.add_argument("--max-size", type=int, default=None, help="poset/lattice size (lawson 4, absolute 5, undetermined 2)")
    p.add_argument("--all-sizes", action="store_true", help="lawson: every size from 1 to --max-size")
    p.add_argument("--cap", type=int, default=None, help="ultrametric: largest point (default 3)")
    p.add_argument("--n", type=int, default=2, help="formal-balls: CH_PLUS(n) carrier")
    p.add_argument("--base", default=None, help="formal-balls: instance file whose categories are the bases")
    p.add_argument("--quantale", default=None, help="absolute: also run the quantale itself, e.g. ch_plus:1")
    p.add_argument("--no-morphisms", action="store_true", help="skip naturality over reflecting maps")
    _common(p, family=False)
    p.set_defaults(func=cmd_gallery)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        records = args.func(args)
    except ParseError as e:
        print(f"qdom: parse error: {e}", file=sys.stderr)
        return 2
    except ResourceLimitError as e:
        print(f"qdom: resource limit: {e}", file=sys.stderr)
        return 2
    except (QdomError, OSError, ValueError) as e:
        print(f"qdom: {e}", file=sys.stderr)
        return 2
    sys.stdout.write(emit_report(records, args.format))
    return exit_status(records)


if __name__ == "__main__":
    sys.exit(main())

"""Line-oriented instance files.

Grammar (``#`` starts a comment line; blank lines separate nothing)::

    file      := section*
    section   := "[quantale]" NL qbody
               | "[category" NAME "]" NL cbody
               | "[module" NAME ":" SRC "->" TGT "]" NL mbody
               | "[family]" NL "name = " FAMILY NL
               | "[caps]" NL ("KEY = INT" NL)*
    qbody     := "builtin = " KIND [N] NL
               | "elements = " NAME+ NL "unit = " NAME NL
                 "leq =" NL ("  " ("0"|"1")+ NL)+ "tensor =" NL ("  " NAME+ NL)+
    cbody     := "objects = " NAME* NL "structure =" NL ("  " ELEM+ NL)*
    mbody     := "rows =" NL ("  " ELEM+ NL)*

``SRC``/``TGT`` name a category declared earlier, or ``1`` for the one-object
category.  The emitter writes exactly this layout, so canonical files
round-trip byte for byte.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..caps import Caps
from ..enriched import QCategory, one, validate_category
from ..errors import ParseError
from ..modules import Module, validate_module
from ..quantale import Quantale, build_standard, validate_quantale

__all__ = ["InstanceFile", "parse_instance", "emit_instance", "load_instance", "validate_instance"]

BUILTINS = {"q2": "Q2", "ch_plus": "CH_PLUS", "ch_max": "CH_MAX"}


@dataclass
class InstanceFile:
    quantale: Quantale
    builtin: str | None = None
    categories: dict = field(default_factory=dict)
    modules: dict = field(default_factory=dict)
    family: str | None = None
    caps: dict = field(default_factory=dict)

    def apply_caps(self, caps: Caps) -> Caps:
        spec = ",".join(f"{k}={v}" for k, v in self.caps.items())
        return caps.override_from_string(spec) if spec else caps


class _Lines:
    def __init__(self, text):
        self.items = []
        for no, raw in enumerate(text.splitlines(), 1):
            if not raw.strip() or raw.lstrip().startswith("#"):
                continue
            self.items.append((no, raw.rstrip()))
        self.pos = 0

    def peek(self):
        return self.items[self.pos] if self.pos < len(self.items) else (None, None)

    def next(self):
        item = self.peek()
        self.pos += 1
        return item

    def rows(self):
        """Consume indented lines; returns ``[(line, [(column, token), ...])]``."""
        out = []
        while True:
            no, line = self.peek()
            if line is None or not line.startswith((" ", "\t")):
                return out
            self.pos += 1
            out.append((no, _tokens(line)))


def _tokens(line):
    out, i = [], 0
    while i < len(line):
        if line[i].isspace():
            i += 1
            continue
        j = i
        while j < len(line) and not line[j].isspace():
            j += 1
        out.append((i + 1, line[i:j]))
        i = j
    return out


def _keyval(lines, key, no_value=False):
    no, line = lines.next()
    if line is None:
        raise ParseError(f"expected '{key}', found end of file", _last_line(lines))
    k, sep, v = line.partition("=")
    if k.strip() != key or not sep:
        raise ParseError(f"expected '{key} ='", no, 1)
    v = v.strip()
    if no_value and v:
        raise ParseError(f"'{key} =' takes its rows on the following indented lines", no, line.index("=") + 1)
    col = line.index("=") + 2
    return no, col, v


def _last_line(lines):
    return lines.items[-1][0] if lines.items else 1


def _square(rows, n, no, what):
    if len(rows) != n:
        raise ParseError(f"{what} needs {n} rows, found {len(rows)}", rows[-1][0] if rows else no, 1)
    for rno, toks in rows:
        if len(toks) != n:
            raise ParseError(f"ragged {what} row: expected {n} entries, found {len(toks)}", rno, toks[-1][0] if toks else 1)


def _resolve(index, rno, col, token, what):
    if token not in index:
        raise ParseError(f"unknown {what} {token!r}", rno, col)
    return index[token]


def _parse_quantale(lines):
    no, line = lines.peek()
    if line is not None and line.split("=")[0].strip() == "builtin":
        no, col, v = _keyval(lines, "builtin")
        parts = v.split()
        if not parts or parts[0] not in BUILTINS:
            raise ParseError(f"unknown builtin quantale {v!r}", no, col)
        kind = BUILTINS[parts[0]]
        n = None
        if kind != "Q2":
            if len(parts) != 2 or not parts[1].isdigit():
                raise ParseError(f"{parts[0]} needs a size, e.g. '{parts[0]} 2'", no, col)
            n = int(parts[1])
        elif len(parts) != 1:
            raise ParseError("q2 takes no size", no, col)
        try:
            q = build_standard(kind, n)
        except ValueError as e:
            raise ParseError(str(e), no, col) from None
        return q, " ".join(parts)
    no, col, v = _keyval(lines, "elements")
    names = v.split()
    if not names:
        raise ParseError("a quantale needs elements", no, col)
    if len(set(names)) != len(names):
        raise ParseError("duplicate element names", no, col)
    index = {n: i for i, n in enumerate(names)}
    uno, ucol, uv = _keyval(lines, "unit")
    unit = _resolve(index, uno, ucol, uv, "element")
    lno, _, _ = _keyval(lines, "leq", no_value=True)
    rows = lines.rows()
    _square(rows, len(names), lno, "leq")
    leq = []
    for rno, toks in rows:
        row = []
        for c, t in toks:
            if t not in ("0", "1"):
                raise ParseError(f"leq entries are 0 or 1, found {t!r}", rno, c)
            row.append(t == "1")
        leq.append(row)
    tno, _, _ = _keyval(lines, "tensor", no_value=True)
    rows = lines.rows()
    _square(rows, len(names), tno, "tensor")
    tensor = [[_resolve(index, rno, c, t, "element") for c, t in toks] for rno, toks in rows]
    return Quantale(names, leq, tensor, unit), None


def _parse_category(lines, q):
    no, col, v = _keyval(lines, "objects")
    objs = v.split()
    if len(set(objs)) != len(objs):
        raise ParseError("duplicate object names", no, col)
    sno, _, _ = _keyval(lines, "structure", no_value=True)
    rows = lines.rows()
    _square(rows, len(objs), sno, "structure")
    index = {n: i for i, n in enumerate(q.names)}
    s = [[_resolve(index, rno, c, t, "element") for c, t in toks] for rno, toks in rows]
    return QCategory(q, s, objs)


def _parse_module(lines, q, src, tgt):
    rno0, _, _ = _keyval(lines, "rows", no_value=True)
    rows = lines.rows()
    if tgt.size == 0:
        if rows:
            raise ParseError("a module into the empty category has no rows", rows[0][0], 1)
        return Module(src, tgt, [[] for _ in src.objects()])
    if len(rows) != src.size:
        raise ParseError(f"module needs {src.size} rows, found {len(rows)}", rows[-1][0] if rows else rno0, 1)
    index = {n: i for i, n in enumerate(q.names)}
    entries = []
    for rno, toks in rows:
        if len(toks) != tgt.size:
            raise ParseError(f"ragged module row: expected {tgt.size} entries, found {len(toks)}", rno, 1)
        entries.append([_resolve(index, rno, c, t, "element") for c, t in toks])
    return Module(src, tgt, entries)


def _section_header(no, line):
    if not (line.startswith("[") and line.endswith("]")):
        raise ParseError("expected a section header like [category NAME]", no, 1)
    inner = line[1:-1].strip()
    word, _, rest = inner.partition(" ")
    return word, rest.strip()


def parse_instance(text: str, quantale: Quantale | None = None) -> InstanceFile:
    """Parse an instance file.  ``quantale`` is used when the file has no ``[quantale]`` section."""
    lines = _Lines(text)
    doc = None
    if quantale is not None:
        doc = InstanceFile(quantale)
    while True:
        no, line = lines.next()
        if line is None:
            break
        word, rest = _section_header(no, line.strip())
        if word == "quantale":
            if rest:
                raise ParseError("[quantale] takes no name", no, 1)
            if doc is not None and (doc.categories or doc.modules or quantale is None):
                raise ParseError("the quantale section must come first and only once", no, 1)
            q, builtin = _parse_quantale(lines)
            doc = InstanceFile(q, builtin)
            continue
        if doc is None:
            raise ParseError("the file must start with a [quantale] section", no, 1)
        if word == "category":
            if not rest or " " in rest:
                raise ParseError("expected [category NAME]", no, 1)
            if rest in doc.categories or rest == "1":
                raise ParseError(f"category {rest!r} declared twice", no, 1)
            doc.categories[rest] = _parse_category(lines, doc.quantale)
        elif word == "module":
            name, colon, sig = rest.partition(":")
            src, arrow, tgt = sig.partition("->")
            name, src, tgt = name.strip(), src.strip(), tgt.strip()
            if not colon or not arrow or not name or not src or not tgt:
                raise ParseError("expected [module NAME: SRC -> TGT]", no, 1)
            if name in doc.modules:
                raise ParseError(f"module {name!r} declared twice", no, 1)
            ends = []
            for end in (src, tgt):
                if end == "1":
                    ends.append(one(doc.quantale))
                elif end in doc.categories:
                    ends.append(doc.categories[end])
                else:
                    raise ParseError(f"unknown category {end!r}", no, line.index(end) + 1)
            doc.modules[name] = (src, tgt, _parse_module(lines, doc.quantale, *ends))
        elif word == "family":
            _, col, v = _keyval(lines, "name")
            if not v:
                raise ParseError("family needs a name", no, col)
            doc.family = v
        elif word == "caps":
            while True:
                rno, l2 = lines.peek()
                if l2 is None or l2.lstrip().startswith("["):
                    break
                lines.next()
                k, sep, v = l2.partition("=")
                if not sep or not v.strip().isdigit():
                    raise ParseError("caps lines look like 'columns = 50000'", rno, 1)
                doc.caps[k.strip()] = int(v)
        else:
            raise ParseError(f"unknown section [{word}]", no, 2)
    if doc is None:
        raise ParseError("empty instance file", 1, 1)
    return doc


def _matrix(rows, names):
    return ["  " + " ".join(names[v] for v in row) for row in rows]


def emit_instance(doc: InstanceFile) -> str:
    q = doc.quantale
    out = ["[quantale]"]
    if doc.builtin:
        out.append(f"builtin = {doc.builtin}")
    else:
        out.append("elements = " + " ".join(q.names))
        out.append(f"unit = {q.names[q.unit]}")
        out.append("leq =")
        out += ["  " + " ".join("1" if b else "0" for b in row) for row in q.leq]
        out.append("tensor =")
        out += _matrix(q.tensor, q.names)
    for name, c in doc.categories.items():
        out += ["", f"[category {name}]", ("objects = " + " ".join(c.names)).rstrip(), "structure ="]
        out += _matrix(c.structure, q.names)
    for name, (src, tgt, m) in doc.modules.items():
        out += ["", f"[module {name}: {src} -> {tgt}]", "rows ="]
        if m.target.size:
            out += _matrix(m.entries, q.names)
    if doc.family:
        out += ["", "[family]", f"name = {doc.family}"]
    if doc.caps:
        out += ["", "[caps]"] + [f"{k} = {v}" for k, v in doc.caps.items()]
    return "\n".join(out) + "\n"


def load_instance(path, quantale: Quantale | None = None) -> InstanceFile:
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read(), quantale)


def validate_instance(doc: InstanceFile) -> list[str]:
    """Every validator over every section; an empty list means the file is well formed."""
    out = [f"quantale: {p}" for p in validate_quantale(doc.quantale)]
    if out:
        return out
    for name, c in doc.categories.items():
        out += [f"category {name}: {p}" for p in validate_category(c)]
    for name, (_, _, m) in doc.modules.items():
        out += [f"module {name}: {p}" for p in validate_module(m)]
    return out

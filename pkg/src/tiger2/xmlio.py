"""Reader and writer for the <tiger2/> XML serialisation."""
from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from urllib.parse import urlsplit

from .declarations import (DOMAINS, HEAD, DeclarationRegistry, FeatureDecl, ValueDecl,
                           diagnostic, sort_diagnostics, validate_corpus)
from .model import Corpus, Edge, Graph, Node, Segment

#: Default URI bound to the ``tiger2`` prefix of reserved attributes.
RESERVED_NS = "http://korpling.german.hu-berlin.de/tiger2/V2/"
#: Default URI bound to the ``dcr`` prefix (``dcr:datcat``).
DCR_NS = "http://www.isocat.org/ns/dcr"
XML_NS = "http://www.w3.org/XML/1998/namespace"
XML_ID = f"{{{XML_NS}}}id"

_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9._\-]*$")
_ILLEGAL_XML = re.compile("[\x00-\x08\x0b\x0c\x0e-\x1f￾￿]")


class Tiger2ParseError(ValueError):
    """Fatal problem reading a document (malformed XML or broken grammar)."""


class SerializationError(ValueError):
    def __init__(self, message, diagnostics=()):
        super().__init__(message)
        self.diagnostics = list(diagnostics)


def _absolute(uri):
    try:
        return bool(urlsplit(uri).scheme)
    except ValueError:
        return False


@dataclass(frozen=True)
class ParseOptions:
    strict: bool = True
    reserved_ns: str = RESERVED_NS
    dcr_ns: str = DCR_NS

    def __post_init__(self):
        for uri in (self.reserved_ns, self.dcr_ns):
            if not _absolute(uri):
                raise ValueError(f"namespace URI must be absolute: {uri!r}")


@dataclass(frozen=True)
class SerializeOptions:
    indent: int = 2
    emit_legacy_word: bool = True
    reserved_ns: str = RESERVED_NS
    dcr_ns: str = DCR_NS
    strict: bool = True

    def __post_init__(self):
        if self.indent < 0:
            raise ValueError("indent must be >= 0")
        for uri in (self.reserved_ns, self.dcr_ns):
            if not _absolute(uri):
                raise ValueError(f"namespace URI must be absolute: {uri!r}")


def split_target(ref: str) -> tuple[str | None, str]:
    """``'#id'`` -> ``(None, 'id')``; ``'doc.xml#id'`` -> ``('doc.xml', 'id')``."""
    doc, sep, frag = ref.partition("#")
    if not sep:
        return None, ref
    return (doc or None), frag


# -- reading ---------------------------------------------------------------

class _Reader:
    def __init__(self, opts: ParseOptions):
        self.opts = opts
        self.r = f"{{{opts.reserved_ns}}}"
        self.dcr = f"{{{opts.dcr_ns}}}datcat"
        self.diags = []
        self.si = 0

    def warn(self, code, loc, msg, order):
        self.diags.append(diagnostic(code, loc, msg, order))

    def element_id(self, elem, loc_seg, order, required=True):
        xid, legacy = elem.get(XML_ID), elem.get("id")
        if xid is not None and legacy is not None:
            self.warn("W-LEGACYID", (loc_seg or xid, xid), f"both xml:id and @id on <{elem.tag}>; xml:id wins", order)
        ident = xid if xid is not None else legacy
        if required and not ident:
            raise Tiger2ParseError(f"<{elem.tag}> without xml:id")
        return ident

    def corpus(self, elem, top=True):
        cid = self.element_id(elem, None, (-1,))
        meta, decls = [], []
        segments, subs = [], []
        for child in elem:
            if child.tag == "head" and top:
                meta, decls = self.head(child)
            elif child.tag == "body":
                self.body(child, segments, subs)
            elif child.tag == "s":  # subcorpus content without <body>
                segments.append(self.segment(child))
            elif child.tag == "subcorpus":
                subs.append(self.corpus(child, top=False))
            elif isinstance(child.tag, str):
                self.warn("W-ATTR", HEAD, f"unsupported element <{child.tag}> ignored", (-1,))
        kw = {"registry": DeclarationRegistry(decls)} if top else {}
        return Corpus(cid, meta, segments=segments, subcorpora=subs, **kw)

    def body(self, elem, segments, subs):
        for child in elem:
            if child.tag == "s":
                segments.append(self.segment(child))
            elif child.tag == "subcorpus":
                subs.append(self.corpus(child, top=False))
            elif isinstance(child.tag, str):
                self.warn("W-ATTR", HEAD, f"unsupported element <{child.tag}> in body ignored", (-1,))

    def head(self, elem):
        meta, decls = [], []
        for child in elem:
            if child.tag == "meta":
                meta.extend((m.tag, (m.text or "").strip()) for m in child if isinstance(m.tag, str))
            elif child.tag == "annotation":
                decls.extend(self.feature(f) for f in child if f.tag == "feature")
        return meta, decls

    def feature(self, elem):
        domain = elem.get("domain")
        if domain not in DOMAINS:
            raise Tiger2ParseError(f"<feature> domain must be one of {DOMAINS}, got {domain!r}")
        values = []
        for v in elem:
            if v.tag == "value":
                if not v.get("name"):
                    raise Tiger2ParseError("<value> without name")
                values.append(ValueDecl(v.get("name"), (v.text or "").strip(), v.get(self.dcr)))
        try:
            return FeatureDecl(elem.get("name"), elem.get("type"), domain, elem.get(self.dcr), values)
        except ValueError as exc:
            raise Tiger2ParseError(f"bad <feature>: {exc}") from None

    def segment(self, elem):
        si = self.si
        self.si += 1
        sid = self.element_id(elem, None, (si, -1))
        graphs = [self.graph(g, sid, si, gi) for gi, g in enumerate(e for e in elem if e.tag == "graph")]
        if not graphs:
            raise Tiger2ParseError(f"segment {sid!r} has no <graph>")
        return Segment(sid, graphs)

    def graph(self, elem, sid, si, gi):
        disc = elem.get("discontinuous")
        if disc is not None:
            if disc.strip().lower() not in ("true", "false", "1", "0"):
                raise Tiger2ParseError(f"segment {sid!r}: bad discontinuous value {disc!r}")
            disc = disc.strip().lower() in ("true", "1")
        terminals, nonterminals, edges = [], [], []
        k = 0
        for part, kind, bucket in (("terminals", "t", terminals), ("nonterminals", "nt", nonterminals)):
            for container in (c for c in elem if c.tag == part):
                for n in container:
                    if n.tag != kind:
                        continue
                    node, node_edges = self.node(n, sid, (si, gi, k))
                    bucket.append(node)
                    edges.extend(node_edges)
                    k += 1
        return Graph(terminals, nonterminals, edges, elem.get("root"), disc)

    def node(self, elem, sid, order):
        nid = self.element_id(elem, sid, order + (0,))
        loc = (sid, nid)
        elem_type, corresp, ann = None, None, {}
        for key, val in elem.attrib.items():
            if key in (XML_ID, "id"):
                continue
            if key == self.r + "type":
                elem_type = val
            elif key == self.r + "corresp" and elem.tag == "t":
                corresp = val
            elif key.startswith("{"):
                self.warn("W-ATTR", loc, f"unsupported attribute {key} ignored", order + (0,))
            else:
                ann[key] = val
        try:
            if elem.tag == "t":
                node = Node.terminal(nid, elem_type, ann, corresp=corresp)
            else:
                node = Node.nonterminal(nid, elem_type, ann)
        except ValueError as exc:
            raise Tiger2ParseError(f"{sid}/{nid}: {exc}") from None
        edges = []
        for j, e in enumerate((c for c in elem if c.tag == "edge"), start=1):
            edges.append(self.edge(e, nid, sid, order + (j,)))
        return node, edges

    def edge(self, elem, source, sid, order):
        target = elem.get(self.r + "target")
        if target is None:
            raise Tiger2ParseError(f"{sid}/{source}: <edge> without tiger2:target")
        doc, frag = split_target(target)
        elem_type, ann = None, {}
        for key, val in elem.attrib.items():
            if key == self.r + "type":
                elem_type = val
            elif key == self.r + "target":
                continue
            elif key.startswith("{"):
                self.warn("W-ATTR", (sid, f"{source}->{target}"), f"unsupported attribute {key} on edge ignored", order)
            else:
                ann[key] = val
        try:
            return Edge(source, frag, elem_type, ann, doc)
        except ValueError as exc:
            raise Tiger2ParseError(f"{sid}/{source}: {exc}") from None


def parse_tiger2(document, opts: ParseOptions | None = None):
    """Parse a <tiger2/> document.

    Returns ``(corpus, diagnostics)``; the diagnostics include the full
    validation pass. Raises :class:`Tiger2ParseError` for malformed XML or
    documents that cannot be mapped onto the model at all.
    """
    opts = opts or ParseOptions()
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        raise Tiger2ParseError(f"malformed XML: {exc}") from None
    if root.tag != "corpus":
        raise Tiger2ParseError(f"root element must be <corpus>, got <{root.tag}>")
    reader = _Reader(opts)
    corpus = reader.corpus(root)
    diags = reader.diags + validate_corpus(corpus, strict=opts.strict)
    return corpus, sort_diagnostics(diags)


# -- writing ---------------------------------------------------------------

_ATTR_ESC = {"&": "&amp;", "<": "&lt;", ">": "&gt;", '"': "&quot;",
             "\n": "&#10;", "\r": "&#13;", "\t": "&#9;"}
_TEXT_ESC = {"&": "&amp;", "<": "&lt;", ">": "&gt;", "\r": "&#13;"}


def _check_chars(s):
    if _ILLEGAL_XML.search(s):
        raise SerializationError(f"character not allowed in XML: {s!r}")
    return s


def _attr(s):
    return "".join(_ATTR_ESC.get(c, c) for c in _check_chars(s))


def _text(s):
    return "".join(_TEXT_ESC.get(c, c) for c in _check_chars(s))


def _name(s, what):
    if not _NAME.match(s) or s.lower().startswith("xml"):
        raise SerializationError(f"{what} {s!r} is not a serialisable XML name")
    return s


class _Writer:
    def __init__(self, opts: SerializeOptions):
        self.opts = opts
        self.lines = []

    def line(self, depth, s):
        self.lines.append(" " * (self.opts.indent * depth) + s)

    def open(self, depth, tag, attrs, empty=False):
        a = "".join(f' {k}="{_attr(v)}"' for k, v in attrs)
        self.line(depth, f"<{tag}{a}{'/' if empty else ''}>")

    def close(self, depth, tag):
        self.line(depth, f"</{tag}>")

    def corpus(self, c: Corpus, depth=0, top=True):
        tag = "corpus" if top else "subcorpus"
        attrs = []
        if top:
            attrs += [("xmlns:tiger2", self.opts.reserved_ns), ("xmlns:dcr", self.opts.dcr_ns)]
        attrs.append(("xml:id", c.id))
        self.open(depth, tag, attrs)
        if top:
            self.head(c, depth + 1)
            body_depth = depth + 1
            if not c.segments and not c.subcorpora:
                self.open(body_depth, "body", [], empty=True)
            else:
                self.open(body_depth, "body", [])
                self.body(c, body_depth + 1)
                self.close(body_depth, "body")
        else:
            self.body(c, depth + 1)
        self.close(depth, tag)

    def head(self, c, depth):
        self.open(depth, "head", [])
        if c.meta:
            self.open(depth + 1, "meta", [])
            for k, v in c.meta:
                self.line(depth + 2, f"<{_name(k, 'meta key')}>{_text(v)}</{k}>")
            self.close(depth + 1, "meta")
        decls = c.registry.declarations
        if not decls:
            self.open(depth + 1, "annotation", [], empty=True)
        else:
            self.open(depth + 1, "annotation", [])
            for d in decls:
                attrs = []
                if d.name is not None:
                    attrs.append(("name", _name(d.name, "annotation name")))
                if d.elem_type is not None:
                    attrs.append(("type", d.elem_type))
                attrs.append(("domain", d.domain))
                if d.dcr is not None:
                    attrs.append(("dcr:datcat", d.dcr))
                if not d.values:
                    self.open(depth + 2, "feature", attrs, empty=True)
                    continue
                self.open(depth + 2, "feature", attrs)
                for v in d.values:
                    va = [("name", v.name)] + ([("dcr:datcat", v.dcr)] if v.dcr is not None else [])
                    a = "".join(f' {k}="{_attr(x)}"' for k, x in va)
                    self.line(depth + 3, f"<value{a}>{_text(v.description)}</value>")
                self.close(depth + 2, "feature")
            self.close(depth + 1, "annotation")
        self.close(depth, "head")

    def body(self, c, depth):
        for seg in c.segments:
            self.open(depth, "s", [("xml:id", seg.id)])
            for g in seg.graphs:
                self.graph(g, depth + 1)
            self.close(depth, "s")
        for sub in c.subcorpora:
            self.corpus(sub, depth, top=False)

    def graph(self, g: Graph, depth):
        attrs = []
        if g.root is not None:
            attrs.append(("root", g.root))
        if g.discontinuous is not None:
            attrs.append(("discontinuous", "true" if g.discontinuous else "false"))
        self.open(depth, "graph", attrs)
        by_source = {}
        for e in g.edges:
            by_source.setdefault(e.source, []).append(e)
        for part, tag, nodes in (("terminals", "t", g.terminals), ("nonterminals", "nt", g.nonterminals)):
            if not nodes:
                self.open(depth + 1, part, [], empty=True)
                continue
            self.open(depth + 1, part, [])
            for n in nodes:
                self.node(n, tag, by_source.get(n.id, ()), depth + 2)
            self.close(depth + 1, part)
        self.close(depth, "graph")

    def node(self, n: Node, tag, edges, depth):
        attrs = [("xml:id", n.id)]
        if n.elem_type is not None:
            attrs.append(("tiger2:type", n.elem_type))
        for k, v in n.annotations.items():
            if k == "word" and not self.opts.emit_legacy_word:
                continue
            attrs.append((_name(k, "annotation name"), v))
        if n.corresp is not None:
            attrs.append(("tiger2:corresp", n.corresp))
        if not edges:
            self.open(depth, tag, attrs, empty=True)
            return
        self.open(depth, tag, attrs)
        for e in edges:
            ea = []
            if e.elem_type is not None:
                ea.append(("tiger2:type", e.elem_type))
            ea.append(("tiger2:target", e.target_ref))
            ea.extend((_name(k, "annotation name"), v) for k, v in e.annotations.items())
            self.open(depth + 1, "edge", ea, empty=True)
        self.close(depth, tag)


def serialize_tiger2(corpus: Corpus, opts: SerializeOptions | None = None) -> bytes:
    """Serialise a corpus to UTF-8 <tiger2/> XML.

    Refuses (:class:`SerializationError`) when the corpus has validation
    errors; warnings are fine. Output is a pure function of the arguments.
    """
    opts = opts or SerializeOptions()
    errors = [d for d in validate_corpus(corpus, strict=opts.strict) if d.is_error]
    if errors:
        raise SerializationError(f"refusing to serialise invalid corpus: {errors[0].render()}", errors)
    w = _Writer(opts)
    w.corpus(corpus)
    return ('<?xml version="1.0" encoding="UTF-8"?>\n' + "\n".join(w.lines) + "\n").encode("utf-8")

"""Import legacy TigerXML corpora and export back where representable.

TigerXML knows two edge classes (``<edge>`` and ``<secedge>``), untyped
nodes, ``@id``/``@idref`` references and no stand-off links. On import the
two edge classes become two edge types; on export everything outside that
subset is dropped or coerced and listed in a :class:`LossReport`.
"""
from __future__ import annotations

import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Callable

from .declarations import DeclarationRegistry, FeatureDecl, ValueDecl, validate_corpus
from .model import Corpus, Edge, Graph, Node, Segment
from .xmlio import SerializationError, _attr, _name, _text

TOPOLOGICAL_FIELDS = frozenset({"VF", "MF", "NF", "LK", "VC", "C"})

_DOMAIN_IN = {"T": ("t",), "NT": ("nt",), "FREC": ("t", "nt")}


class TigerXMLError(ValueError):
    """Malformed TigerXML input."""


@dataclass(frozen=True)
class ImportMapping:
    primary_edge_type: str = "prim"
    secondary_edge_type: str = "sec"
    #: maps a nonterminal's ``cat`` value to a type label (or None)
    node_type: Callable[[str | None], str | None] | None = None

    def __post_init__(self):
        if not self.primary_edge_type or not self.secondary_edge_type:
            raise ValueError("edge type labels must be non-empty")
        if self.primary_edge_type == self.secondary_edge_type:
            raise ValueError("primary and secondary edge types must differ")


def cat_types(cats=TOPOLOGICAL_FIELDS, label="field"):
    """Node-type hook: nonterminals whose ``cat`` is in ``cats`` get ``label``.

    >>> cat_types()("MF"), cat_types()("NX")
    ('field', None)
    """
    cats = frozenset(cats)
    return lambda cat: label if cat in cats else None


@dataclass
class LossReport:
    dropped_elements: list[tuple[str, str]] = field(default_factory=list)
    degraded: list[tuple[str, str]] = field(default_factory=list)

    @property
    def lossless(self) -> bool:
        return not self.dropped_elements and not self.degraded

    def summary(self) -> str:
        return f"{len(self.dropped_elements)} dropped, {len(self.degraded)} degraded"


def _values(elem):
    return [ValueDecl(v.get("name"), (v.text or "").strip())
            for v in elem if v.tag == "value" and v.get("name")]


def _ident(elem, *names):
    for n in names:
        v = elem.get(n)
        if v:
            return v
    return None


def import_tigerxml(document, mapping: ImportMapping | None = None):
    """Read TigerXML into a corpus.

    Returns ``(corpus, diagnostics)`` where the diagnostics report
    unresolved ``@idref``/``@root`` references (E-BADREF).
    """
    mapping = mapping or ImportMapping()
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        raise TigerXMLError(f"malformed XML: {exc}") from None
    if root.tag != "corpus":
        raise TigerXMLError(f"root element must be <corpus>, got <{root.tag}>")
    prim, sec = mapping.primary_edge_type, mapping.secondary_edge_type

    meta, features = [], []
    labels = {prim: None, sec: None}
    head = root.find("head")
    if head is not None:
        for m in head.findall("meta"):
            meta.extend((c.tag, (c.text or "").strip()) for c in m if isinstance(c.tag, str))
        for ann in head.findall("annotation"):
            for elem in ann:
                if elem.tag == "feature":
                    dom = (elem.get("domain") or "").upper()
                    if dom not in _DOMAIN_IN or not elem.get("name"):
                        raise TigerXMLError(f"bad <feature name={elem.get('name')!r} domain={elem.get('domain')!r}>")
                    for d in _DOMAIN_IN[dom]:
                        features.append(FeatureDecl(elem.get("name"), None, d, None, _values(elem)))
                elif elem.tag == "edgelabel":
                    labels[prim] = _values(elem)
                elif elem.tag == "secedgelabel":
                    labels[sec] = _values(elem)

    node_types: dict[str, None] = {}

    def read_node(elem, kind):
        nid = _ident(elem, "id", "{http://www.w3.org/XML/1998/namespace}id")
        if not nid:
            raise TigerXMLError(f"<{elem.tag}> without id")
        ann = {k: v for k, v in elem.attrib.items() if k != "id" and not k.startswith("{")}
        if kind == "t":
            node = Node.terminal(nid, None, ann)
        else:
            typ = mapping.node_type(ann.get("cat")) if mapping.node_type else None
            if typ:
                node_types[typ] = None
            node = Node.nonterminal(nid, typ, ann)
        edges = []
        for child in elem:
            if child.tag in ("edge", "secedge"):
                ref = child.get("idref")
                if ref is None:
                    raise TigerXMLError(f"<{child.tag}> in {nid} without idref")
                ea = {"label": child.get("label")} if child.get("label") is not None else {}
                edges.append(Edge(nid, ref, prim if child.tag == "edge" else sec, ea))
        return node, edges

    def read_segment(s):
        sid = _ident(s, "id", "{http://www.w3.org/XML/1998/namespace}id")
        if not sid:
            raise TigerXMLError("<s> without id")
        graphs = []
        for g in s.findall("graph"):
            ts, nts, edges = [], [], []
            for part, kind, bucket in (("terminals", "t", ts), ("nonterminals", "nt", nts)):
                for container in g.findall(part):
                    for elem in container.findall(kind):
                        node, es = read_node(elem, kind)
                        bucket.append(node)
                        edges.extend(es)
            disc = g.get("discontinuous")
            disc = None if disc is None else disc.strip().lower() in ("true", "1")
            graphs.append(Graph(ts, nts, edges, g.get("root"), disc))
        if not graphs:
            raise TigerXMLError(f"segment {sid!r} has no <graph>")
        return Segment(sid, graphs)

    def read_container(elem):
        segs, subs = [], []
        for child in elem:
            if child.tag == "s":
                segs.append(read_segment(child))
            elif child.tag == "subcorpus":
                sub_segs, sub_subs = read_container(child)
                sid = _ident(child, "id", "name") or f"sub{len(subs) + 1}"
                subs.append(Corpus(sid, segments=sub_segs, subcorpora=sub_subs))
        return segs, subs

    body = root.find("body")
    segments, subs = read_container(body) if body is not None else ([], [])

    decls = list(features)
    nt_feats = [f for f in features if f.domain == "nt"]
    for typ in node_types:
        decls.append(FeatureDecl(None, typ, "nt"))
        decls.extend(FeatureDecl(f.name, typ, "nt", f.dcr, f.values) for f in nt_feats)
    for typ in (prim, sec):
        decls.append(FeatureDecl(None, typ, "edge"))
        decls.append(FeatureDecl("label", typ, "edge", None, labels[typ] or ()))

    cid = _ident(root, "id", "{http://www.w3.org/XML/1998/namespace}id") or "corpus"
    corpus = Corpus(cid, meta, DeclarationRegistry(decls), segments, subs)
    diags = [d for d in validate_corpus(corpus) if d.code == "E-BADREF"]
    return corpus, diags


class _Out:
    def __init__(self):
        self.lines = []

    def put(self, depth, s):
        self.lines.append("  " * depth + s)

    def tag(self, depth, name, attrs, empty=False, text=None):
        a = "".join(f' {k}="{_attr(v)}"' for k, v in attrs)
        if text is not None:
            self.put(depth, f"<{name}{a}>{_text(text)}</{name}>")
        else:
            self.put(depth, f"<{name}{a}{'/' if empty else ''}>")


def export_tigerxml(corpus: Corpus, mapping: ImportMapping | None = None):
    """Write a corpus as TigerXML; returns ``(bytes, LossReport)``.

    Edges of the mapping's primary type become ``<edge>``, secondary ones
    ``<secedge>``. Every other edge, node type, corresp link and DCR
    reference is dropped or coerced and recorded in the report.
    """
    mapping = mapping or ImportMapping()
    prim, sec = mapping.primary_edge_type, mapping.secondary_edge_type
    loss = LossReport()
    out = _Out()

    reg = corpus.registry
    untyped = {"t": {}, "nt": {}}
    labels = {prim: [], sec: []}
    for d in reg.declarations:
        if d.dcr is not None or any(v.dcr for v in d.values):
            loss.degraded.append(("head", f"dcr reference on {d.describe()} dropped"))
        if d.domain in ("t", "nt") and d.elem_type is None and d.name is not None:
            untyped[d.domain].setdefault(d.name, d)
        elif d.domain == "edge" and d.elem_type in labels and d.name == "label":
            labels[d.elem_type] = list(d.values)
        elif d.domain == "edge" and d.elem_type in labels and d.name is None:
            pass
        else:
            loss.degraded.append(("head", f"declaration of {d.describe()} dropped"))

    out.tag(0, "corpus", [("id", corpus.id)])
    out.put(1, "<head>")
    if corpus.meta:
        out.put(2, "<meta>")
        for k, v in corpus.meta:
            out.tag(3, _name(k, "meta key"), [], text=v)
        out.put(2, "</meta>")
    out.put(2, "<annotation>")

    def feature(name, dom, decl):
        if decl.values:
            out.tag(3, "feature", [("name", name), ("domain", dom)])
            for v in decl.values:
                out.tag(4, "value", [("name", v.name)], text=v.description)
            out.put(3, "</feature>")
        else:
            out.tag(3, "feature", [("name", name), ("domain", dom)], empty=True)

    for name, decl in untyped["t"].items():
        other = untyped["nt"].get(name)
        if other is not None and other.values == decl.values:
            feature(name, "FREC", decl)
        else:
            feature(name, "T", decl)
    for name, decl in untyped["nt"].items():
        other = untyped["t"].get(name)
        if other is None or other.values != decl.values:
            feature(name, "NT", decl)
    for tag, typ in (("edgelabel", prim), ("secedgelabel", sec)):
        if labels[typ]:
            out.put(3, f"<{tag}>")
            for v in labels[typ]:
                out.tag(4, "value", [("name", v.name)], text=v.description)
            out.put(3, f"</{tag}>")
        else:
            out.put(3, f"<{tag}/>")
    out.put(2, "</annotation>")
    out.put(1, "</head>")

    def write_node(depth, n: Node, edges):
        if n.elem_type is not None:
            loss.degraded.append((n.id, f"node type {n.elem_type!r} dropped"))
        if n.corresp is not None:
            loss.degraded.append((n.id, f"corresp {n.corresp!r} dropped"))
        attrs = [("id", n.id)]
        ann = dict(n.annotations)
        if n.is_terminal and "word" not in ann:
            word = ann.pop("form", None)
            if word is None:
                loss.degraded.append((n.id, "no word; empty word emitted"))
                word = ""
            attrs.append(("word", word))
        for k, v in ann.items():
            if k == "id":
                loss.degraded.append((n.id, "annotation 'id' collides with TigerXML @id; dropped"))
                continue
            attrs.append((_name(k, "annotation name"), v))
        kept_prim, kept_sec = [], []
        for e in edges:
            if e.is_external:
                loss.dropped_elements.append((e.key, "cross-document target"))
            elif e.elem_type == prim and not n.is_terminal:
                kept_prim.append(e)
            elif e.elem_type == sec:
                kept_sec.append(e)
            elif e.elem_type == prim:
                loss.dropped_elements.append((e.key, "primary edge from a terminal"))
            else:
                loss.dropped_elements.append((e.key, f"edge type {e.elem_type!r} not representable"))
        if not kept_prim and not kept_sec:
            out.tag(depth, "t" if n.is_terminal else "nt", attrs, empty=True)
            return
        out.tag(depth, "t" if n.is_terminal else "nt", attrs)
        for tag, group in (("edge", kept_prim), ("secedge", kept_sec)):
            for e in group:
                label = e.annotations.get("label")
                if label is None:
                    loss.degraded.append((e.key, "missing label; '--' emitted"))
                    label = "--"
                for k in e.annotations:
                    if k != "label":
                        loss.degraded.append((e.key, f"edge annotation {k!r} dropped"))
                out.tag(depth + 1, tag, [("label", label), ("idref", e.target)], empty=True)
        out.put(depth, f"</{'t' if n.is_terminal else 'nt'}>")

    def write_segments(depth, c: Corpus):
        for seg in c.segments:
            out.tag(depth, "s", [("id", seg.id)])
            for k, g in enumerate(seg.graphs):
                if k:
                    loss.dropped_elements.append((seg.id, f"alternative graph {k + 1} dropped"))
                    continue
                attrs = []
                if g.root is not None:
                    attrs.append(("root", g.root))
                if g.discontinuous is not None:
                    attrs.append(("discontinuous", "true" if g.discontinuous else "false"))
                out.tag(depth + 1, "graph", attrs)
                by_source = {}
                for e in g.edges:
                    by_source.setdefault(e.source, []).append(e)
                for part, nodes in (("terminals", g.terminals), ("nonterminals", g.nonterminals)):
                    if not nodes:
                        out.put(depth + 2, f"<{part}/>")
                        continue
                    out.put(depth + 2, f"<{part}>")
                    for n in nodes:
                        write_node(depth + 3, n, by_source.pop(n.id, ()))
                    out.put(depth + 2, f"</{part}>")
                for orphans in by_source.values():
                    for e in orphans:
                        loss.dropped_elements.append((e.key, "edge source does not resolve"))
                out.put(depth + 1, "</graph>")
            out.put(depth, "</s>")
        for sub in c.subcorpora:
            out.tag(depth, "subcorpus", [("name", sub.id)])
            write_segments(depth + 1, sub)
            out.put(depth, "</subcorpus>")

    if corpus.segments or corpus.subcorpora:
        out.put(1, "<body>")
        write_segments(2, corpus)
        out.put(1, "</body>")
    else:
        out.put(1, "<body/>")
    out.put(0, "</corpus>")
    data = ('<?xml version="1.0" encoding="UTF-8"?>\n' + "\n".join(out.lines) + "\n").encode("utf-8")
    return data, loss


__all__ = ["ImportMapping", "LossReport", "TOPOLOGICAL_FIELDS", "TigerXMLError",
           "SerializationError", "cat_types", "export_tigerxml", "import_tigerxml"]

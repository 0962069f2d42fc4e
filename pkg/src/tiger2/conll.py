"""CoNLL-X dependency import/export.

Each row becomes a terminal; each ``HEAD > 0`` becomes a typed edge from the
head terminal to the dependent (head -> dependent, the inverse of how the
file stores it). Only terminal-to-terminal dependency edges are exportable.
"""
from __future__ import annotations

from dataclasses import dataclass

from .declarations import DeclarationRegistry, FeatureDecl
from .model import Corpus, Edge, Graph, Node, Segment

CONLL_X = ("ID", "FORM", "LEMMA", "CPOSTAG", "POSTAG", "FEATS", "HEAD", "DEPREL", "PHEAD", "PDEPREL")
# column role -> annotation name on the terminal
_ANN = {"LEMMA": "lemma", "CPOSTAG": "cpos", "POSTAG": "pos", "FEATS": "feats"}
#: terminal annotation holding DEPREL of rows attached to the artificial root
ROOT_LABEL = "deprel"


class ConllError(ValueError):
    """Malformed CoNLL input or a corpus that cannot be written as CoNLL."""


@dataclass(frozen=True)
class ConllConfig:
    dep_edge_type: str = "dep"
    label_annotation: str = "label"
    columns: tuple[str, ...] = CONLL_X

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        missing = {"ID", "FORM", "HEAD", "DEPREL"} - set(self.columns)
        if missing:
            raise ValueError(f"CoNLL columns lack required roles: {sorted(missing)}")
        if len(set(self.columns)) != len(self.columns):
            raise ValueError("duplicate column roles")


def _sentences(text):
    block, start = [], None
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            if block:
                yield start, block
                block = []
            continue
        if not block:
            start = lineno
        block.append((lineno, line))
    if block:
        yield start, block


def import_conll(text, config: ConllConfig | None = None) -> Corpus:
    config = config or ConllConfig()
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    col = {role: i for i, role in enumerate(config.columns)}
    segments = []
    used = {"word": False}
    for si, (_, rows) in enumerate(_sentences(text), start=1):
        sid = f"s{si}"
        parsed = []
        for lineno, line in rows:
            if line.startswith("#"):
                continue
            cells = line.rstrip("\n").split("\t")
            if len(cells) < len(config.columns):
                raise ConllError(f"line {lineno}: expected {len(config.columns)} columns, got {len(cells)}")
            try:
                ident = int(cells[col["ID"]])
            except ValueError:
                raise ConllError(f"line {lineno}: non-integer ID {cells[col['ID']]!r}") from None
            if ident != len(parsed) + 1:
                raise ConllError(f"line {lineno}: ID {ident} out of sequence")
            parsed.append((lineno, cells))
        n = len(parsed)
        terminals, edges, root = [], [], None
        for i, (lineno, cells) in enumerate(parsed, start=1):
            ann = {}
            form = cells[col["FORM"]]
            for role, name in _ANN.items():
                if role in col and cells[col[role]] != "_":
                    ann[name] = cells[col[role]]
                    used[name] = True
            word = None if form == "_" else form
            used["word"] = used["word"] or word is not None
            terminals.append(Node.terminal(f"{sid}_t{i}", None, ann, word=word))
            head_cell = cells[col["HEAD"]]
            try:
                head = int(head_cell)
            except ValueError:
                raise ConllError(f"line {lineno}: non-integer HEAD {head_cell!r}") from None
            if head < 0 or head > n:
                raise ConllError(f"line {lineno}: HEAD {head} out of range 0..{n}")
            rel = cells[col["DEPREL"]]
            if head == 0:
                if root is None:
                    root = f"{sid}_t{i}"
                if rel != "_":
                    # no edge carries a root relation; keep it on the terminal
                    terminals[-1] = Node.terminal(terminals[-1].id, None, {**ann, ROOT_LABEL: rel}, word=word)
                    used[ROOT_LABEL] = True
                continue
            ea = {} if rel == "_" else {config.label_annotation: rel}
            edges.append(Edge(f"{sid}_t{head}", f"{sid}_t{i}", config.dep_edge_type, ea))
        if terminals:
            segments.append(Segment(sid, [Graph(terminals, (), edges, root)]))

    decls = [FeatureDecl(name, None, "t") for name in ("word", "lemma", "cpos", "pos", "feats", ROOT_LABEL)
             if used.get(name)]
    decls += [FeatureDecl(None, config.dep_edge_type, "edge"),
              FeatureDecl(config.label_annotation, config.dep_edge_type, "edge")]
    return Corpus("conll", registry=DeclarationRegistry(decls), segments=segments)


def export_conll(corpus: Corpus, config: ConllConfig | None = None) -> str:
    """Write every graph of the corpus as one CoNLL sentence block.

    Raises :class:`ConllError` when a dependency edge touches a nonterminal
    or a terminal has more than one incoming dependency edge.
    """
    config = config or ConllConfig()
    dep = config.dep_edge_type
    out = []
    for seg in corpus.iter_segments():
        for g in seg.graphs:
            pos = {n.id: i for i, n in enumerate(g.terminals, start=1)}
            heads = {}
            for e in g.edges:
                if e.elem_type != dep:
                    continue
                if e.is_external or e.source not in pos or e.target not in pos:
                    raise ConllError(
                        f"{seg.id}: {dep} edge {e.source} -> {e.target_ref} "
                        f"(label {e.annotations.get(config.label_annotation, '_')}) "
                        f"does not connect two terminals")
                if e.target in heads:
                    raise ConllError(f"{seg.id}: terminal {e.target} has more than one incoming {dep} edge")
                heads[e.target] = e
            for i, n in enumerate(g.terminals, start=1):
                e = heads.get(n.id)
                row = []
                for role in config.columns:
                    if role == "ID":
                        row.append(str(i))
                    elif role == "FORM":
                        row.append(n.word if n.word else "_")
                    elif role == "HEAD":
                        row.append(str(pos[e.source]) if e else "0")
                    elif role == "DEPREL":
                        if e:
                            row.append(e.annotations.get(config.label_annotation, "_"))
                        else:
                            row.append(n.annotations.get(ROOT_LABEL, "_"))
                    elif role in _ANN:
                        row.append(n.annotations.get(_ANN[role], "_") or "_")
                    else:
                        row.append("_")
                out.append("\t".join(row) + "\n")
            out.append("\n")
    return "".join(out)

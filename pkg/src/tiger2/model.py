"""In-memory object model for syntactic annotation graphs.

A :class:`Corpus` holds segments; each :class:`Segment` holds one or more
alternative :class:`Graph` parses. Graphs own their nodes and edges. Edges
are stored flat per graph with an explicit ``source`` even though the XML
nests them under the source element.

All values are immutable once constructed. Build them with plain
constructors (lists are accepted and frozen to tuples) and derive modified
copies with :func:`dataclasses.replace`.

Edge-type filters used throughout are sets of type labels; ``UNTYPED``
(``None``) inside a filter selects untyped elements, and a filter of
``None`` selects everything.
"""
from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field, replace
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Mapping

from . import kernels

UNTYPED = None
UNTYPED_LABEL = "untyped"


class NodeKind(str, enum.Enum):
    TERMINAL = "terminal"
    NONTERMINAL = "nonterminal"


def _freeze(mapping) -> Mapping[str, str]:
    return MappingProxyType(dict(mapping or {}))


@dataclass(frozen=True)
class Node:
    id: str
    kind: NodeKind
    elem_type: str | None = None
    annotations: Mapping[str, str] = field(default_factory=dict)
    word: str | None = None
    corresp: str | None = None

    def __post_init__(self):
        if not self.id:
            raise ValueError("node id must be non-empty")
        kind = NodeKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if self.elem_type == "":
            raise ValueError(f"node {self.id}: empty type label; use None for untyped")
        ann = dict(self.annotations or {})
        if kind is NodeKind.NONTERMINAL:
            if self.word is not None or self.corresp is not None:
                raise ValueError(f"nonterminal {self.id} cannot carry word or corresp")
        else:
            # @word is an ordinary annotation that also gives the inline text
            if self.word is not None:
                if ann.setdefault("word", self.word) != self.word:
                    raise ValueError(f"terminal {self.id}: word disagrees with its annotation")
            elif "word" in ann:
                object.__setattr__(self, "word", ann["word"])
        object.__setattr__(self, "annotations", _freeze(ann))

    @classmethod
    def terminal(cls, id, elem_type=None, annotations=None, word=None, corresp=None):
        return cls(id, NodeKind.TERMINAL, elem_type, annotations or {}, word, corresp)

    @classmethod
    def nonterminal(cls, id, elem_type=None, annotations=None):
        return cls(id, NodeKind.NONTERMINAL, elem_type, annotations or {})

    @property
    def is_terminal(self) -> bool:
        return self.kind is NodeKind.TERMINAL

    @property
    def domain(self) -> str:
        return "t" if self.is_terminal else "nt"


@dataclass(frozen=True)
class Edge:
    """A typed, directed edge.

    ``target`` is a node id; when ``target_doc`` is set the edge points into
    another document (``target_doc#target``) and is not resolved here.
    """
    source: str
    target: str
    elem_type: str | None = None
    annotations: Mapping[str, str] = field(default_factory=dict)
    target_doc: str | None = None

    def __post_init__(self):
        if self.elem_type == "":
            raise ValueError("empty edge type label; use None for untyped")
        object.__setattr__(self, "annotations", _freeze(self.annotations))

    @property
    def is_external(self) -> bool:
        return self.target_doc is not None

    @property
    def target_ref(self) -> str:
        return f"{self.target_doc or ''}#{self.target}"

    @property
    def key(self) -> str:
        """Human-readable handle used in diagnostics and loss reports."""
        return f"{self.source}->{self.target_ref}"


@dataclass(frozen=True)
class Graph:
    terminals: tuple[Node, ...] = ()
    nonterminals: tuple[Node, ...] = ()
    edges: tuple[Edge, ...] = ()
    root: str | None = None
    discontinuous: bool | None = None

    def __post_init__(self):
        object.__setattr__(self, "terminals", tuple(self.terminals))
        object.__setattr__(self, "nonterminals", tuple(self.nonterminals))
        object.__setattr__(self, "edges", tuple(self.edges))
        for n in self.terminals:
            if not n.is_terminal:
                raise ValueError(f"{n.id} listed among terminals but is a nonterminal")
        for n in self.nonterminals:
            if n.is_terminal:
                raise ValueError(f"{n.id} listed among nonterminals but is a terminal")

    @property
    def nodes(self) -> tuple[Node, ...]:
        return self.terminals + self.nonterminals

    @cached_property
    def _index(self) -> dict[str, int]:
        index: dict[str, int] = {}
        for i, n in enumerate(self.nodes):
            index.setdefault(n.id, i)
        return index

    @cached_property
    def _positions(self):
        from array import array
        pos = array("q", bytes(8 * len(self.nodes)))
        for i in range(len(self.terminals)):
            pos[i] = i + 1
        return pos

    @cached_property
    def _csr_cache(self) -> dict:
        return {}

    def _csr(self, type_filter):
        key = None if type_filter is None else frozenset(type_filter)
        hit = self._csr_cache.get(key)
        if hit is None:
            idx = self._index
            pairs = []
            for e in self.edges:
                if key is not None and e.elem_type not in key:
                    continue
                if e.is_external:
                    continue
                s, t = idx.get(e.source), idx.get(e.target)
                if s is not None and t is not None:
                    pairs.append((s, t))
            hit = self._csr_cache[key] = kernels.csr(len(self.nodes), pairs)
        return hit

    def position(self, node_id: str) -> int | None:
        """1-based surface position of a terminal, ``None`` otherwise."""
        i = self._index.get(node_id)
        if i is None or i >= len(self.terminals):
            return None
        return i + 1


@dataclass(frozen=True)
class Segment:
    id: str
    graphs: tuple[Graph, ...]

    def __post_init__(self):
        object.__setattr__(self, "graphs", tuple(self.graphs))
        if not self.graphs:
            raise ValueError(f"segment {self.id} has no graph")


def _empty_registry():
    from .declarations import DeclarationRegistry
    return DeclarationRegistry()


@dataclass(frozen=True)
class Corpus:
    id: str
    meta: tuple[tuple[str, str], ...] = ()
    registry: "DeclarationRegistry" = field(default_factory=_empty_registry)  # noqa: F821
    segments: tuple[Segment, ...] = ()
    subcorpora: tuple["Corpus", ...] = ()

    def __post_init__(self):
        if not self.id:
            raise ValueError("corpus id must be non-empty")
        object.__setattr__(self, "meta", tuple(tuple(kv) for kv in self.meta))
        object.__setattr__(self, "segments", tuple(self.segments))
        object.__setattr__(self, "subcorpora", tuple(self.subcorpora))

    def iter_segments(self):
        """Segments of this corpus and all subcorpora, depth first."""
        yield from self.segments
        for sub in self.subcorpora:
            yield from sub.iter_segments()


class NodeLookupError(KeyError):
    """Raised when an operation names a node id absent from the graph."""


def _require(graph: Graph, node_id: str) -> int:
    i = graph._index.get(node_id)
    if i is None:
        raise NodeLookupError(node_id)
    return i


def node_lookup(graph: Graph, node_id: str) -> Node | None:
    i = graph._index.get(node_id)
    return None if i is None else graph.nodes[i]


def _matches(edge: Edge, type_filter) -> bool:
    return type_filter is None or edge.elem_type in type_filter


def out_edges(graph: Graph, node_id: str, type_filter=None) -> list[Edge]:
    _require(graph, node_id)
    return [e for e in graph.edges if e.source == node_id and _matches(e, type_filter)]


def in_edges(graph: Graph, node_id: str, type_filter=None) -> list[Edge]:
    _require(graph, node_id)
    return [e for e in graph.edges
            if not e.is_external and e.target == node_id and _matches(e, type_filter)]


def children(graph: Graph, node_id: str, type_filter=None) -> list[Node]:
    """Target nodes of the outgoing same-graph edges, in edge order."""
    out = []
    for e in out_edges(graph, node_id, type_filter):
        if not e.is_external:
            n = node_lookup(graph, e.target)
            if n is not None:
                out.append(n)
    return out


def terminal_order(graph: Graph) -> list[Node]:
    return list(graph.terminals)


def yield_of(graph: Graph, node_id: str, type_filter=None) -> list[int]:
    """Sorted terminal positions reachable from ``node_id`` over the filter.

    A terminal's yield includes itself. Cycles are fine.
    """
    start = _require(graph, node_id)
    indptr, indices = graph._csr(type_filter)
    return kernels.reachable_positions(indptr, indices, graph._positions, start)


def detect_cycles(graph: Graph, type_filter=None) -> list[list[str]]:
    indptr, indices = graph._csr(type_filter)
    nodes = graph.nodes
    return [[nodes[i].id for i in cyc] for cyc in kernels.find_cycles(indptr, indices)]


def is_discontinuous(graph: Graph, type_filter=None) -> tuple[bool, list[str]]:
    indptr, indices = graph._csr(type_filter)
    nodes = graph.nodes
    offenders = [nodes[i].id for i in
                 kernels.discontinuous_nodes(indptr, indices, graph._positions)]
    return bool(offenders), offenders


def extract_layer(graph: Graph, node_types=None, edge_types=frozenset()) -> Graph:
    """Project a graph onto some nonterminal types and edge types.

    All terminals are kept. Nonterminals are kept when ``node_types`` is
    ``None`` or contains their type. Edges are kept when their type is in
    ``edge_types`` and both same-graph endpoints survive.
    """
    if not edge_types:
        raise ValueError("edge_types must be non-empty")
    edge_types = frozenset(edge_types)
    kept_nt = tuple(n for n in graph.nonterminals
                    if node_types is None or n.elem_type in node_types)
    alive = {n.id for n in graph.terminals} | {n.id for n in kept_nt}
    edges = tuple(e for e in graph.edges
                  if e.elem_type in edge_types and e.source in alive
                  and (e.is_external or e.target in alive))
    root = graph.root if graph.root in alive else None
    return replace(graph, nonterminals=kept_nt, edges=edges, root=root)


@dataclass
class Stats:
    segments: int = 0
    graphs: int = 0
    terminals: Counter = field(default_factory=Counter)
    nonterminals: Counter = field(default_factory=Counter)
    edges: Counter = field(default_factory=Counter)

    def __add__(self, other: "Stats") -> "Stats":
        return Stats(self.segments + other.segments, self.graphs + other.graphs,
                     self.terminals + other.terminals,
                     self.nonterminals + other.nonterminals,
                     self.edges + other.edges)

    def __eq__(self, other):
        if not isinstance(other, Stats):
            return NotImplemented
        return self.as_dict() == other.as_dict()

    def as_dict(self) -> dict:
        def keyed(c):
            return {UNTYPED_LABEL if k is None else k: v
                    for k, v in sorted(c.items(), key=lambda kv: (kv[0] is not None, kv[0] or "")) if v}
        return {
            "segments": self.segments,
            "graphs": self.graphs,
            "terminals_by_type": keyed(self.terminals),
            "nonterminals_by_type": keyed(self.nonterminals),
            "edges_by_type": keyed(self.edges),
        }


def stats(corpus: Corpus) -> Stats:
    s = Stats()
    for seg in corpus.iter_segments():
        s.segments += 1
        for g in seg.graphs:
            s.graphs += 1
            s.terminals.update(n.elem_type for n in g.terminals)
            s.nonterminals.update(n.elem_type for n in g.nonterminals)
            s.edges.update(e.elem_type for e in g.edges)
    return s


def _ann_key(ann):
    return tuple(sorted(ann.items()))


def _node_key(n: Node):
    return (n.id, n.kind.value, n.elem_type, _ann_key(n.annotations), n.word, n.corresp)


def _edge_key(e: Edge):
    return (e.source, e.target_doc or "", e.target, e.elem_type or "",
            e.elem_type is None, _ann_key(e.annotations))


def graph_structure(g: Graph):
    return (tuple(_node_key(n) for n in g.terminals),
            tuple(_node_key(n) for n in g.nonterminals),
            tuple(sorted(_edge_key(e) for e in g.edges)),
            g.root, g.discontinuous)


def structure(corpus: Corpus):
    """Canonical hashable form used for structural equality.

    Terminal and nonterminal order is significant; edges and declarations
    compare as multisets.
    """
    return (corpus.id, corpus.meta, corpus.registry.structure(),
            tuple((seg.id, tuple(graph_structure(g) for g in seg.graphs))
                  for seg in corpus.segments),
            tuple(structure(sub) for sub in corpus.subcorpora))


def structurally_equal(a: Corpus, b: Corpus) -> bool:
    return structure(a) == structure(b)

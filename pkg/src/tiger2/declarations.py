"""Annotation declarations and corpus validation.

Declarations bind an annotation name (and optionally a closed value set) to
an element domain (``t``, ``nt`` or ``edge``) and a type label. Matching is
exact on ``(domain, elem_type)``: a declaration without a type governs
untyped elements only, and typed elements never inherit it.

:func:`validate_corpus` never raises on bad data; every problem becomes a
:class:`Diagnostic`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from urllib.parse import urlsplit

DOMAINS = ("t", "nt", "edge")
HEAD = "head"

ERROR = "error"
WARNING = "warning"

#: code -> default severity
CATALOGUE = {
    "E-DUPID": ERROR,
    "E-DUPDECL": ERROR,
    "E-BADREF": ERROR,
    "E-UNDECLTYPE": ERROR,
    "E-UNDECLANN": ERROR,
    "E-BADVAL": ERROR,
    "E-BADURI": ERROR,
    "W-DISC": WARNING,
    "W-NOROOT": WARNING,
    "W-UNUSEDDECL": WARNING,
    # reader-level warnings
    "W-ATTR": WARNING,
    "W-LEGACYID": WARNING,
}

DEFAULT_CONST_TYPES = frozenset({"const", "prim"})


class DeclarationError(ValueError):
    def __init__(self, code, message):
        super().__init__(f"{code}: {message}")
        self.code = code


@dataclass(frozen=True)
class ValueDecl:
    name: str
    description: str = ""
    dcr: str | None = None

    def __post_init__(self):
        if not self.name:
            raise ValueError("value name must be non-empty")


@dataclass(frozen=True)
class FeatureDecl:
    name: str | None = None
    elem_type: str | None = None
    domain: str = "t"
    dcr: str | None = None
    values: tuple[ValueDecl, ...] = ()

    def __post_init__(self):
        if self.domain not in DOMAINS:
            raise ValueError(f"domain must be one of {DOMAINS}, got {self.domain!r}")
        if self.name is None and self.elem_type is None:
            raise ValueError("a declaration needs a name, a type, or both")
        values = tuple(self.values)
        names = [v.name for v in values]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate value names in declaration of {self.name!r}")
        object.__setattr__(self, "values", values)

    @property
    def key(self):
        return (self.name, self.elem_type, self.domain)

    @property
    def is_type_decl(self) -> bool:
        return self.name is None

    @property
    def is_closed(self) -> bool:
        return bool(self.values)

    @cached_property
    def value_names(self) -> frozenset[str]:
        return frozenset(v.name for v in self.values)

    def describe(self) -> str:
        what = f"annotation {self.name!r}" if self.name else "type"
        typ = f" type {self.elem_type!r}" if self.elem_type else " (untyped)"
        return f"{what} for {self.domain}{typ}"


def _nkey(x):
    return (x is None, x or "")


@dataclass(frozen=True)
class DeclarationRegistry:
    declarations: tuple[FeatureDecl, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "declarations", tuple(self.declarations))

    @cached_property
    def declared_types(self) -> dict[str, frozenset[str]]:
        """domain -> type labels declared by nameless type declarations."""
        out = {d: set() for d in DOMAINS}
        for decl in self.declarations:
            if decl.is_type_decl:
                out[decl.domain].add(decl.elem_type)
        return {d: frozenset(s) for d, s in out.items()}

    @cached_property
    def _by_key(self) -> dict:
        table = {}
        for decl in self.declarations:
            table.setdefault(decl.key, decl)
        return table

    def register(self, decl: FeatureDecl) -> "DeclarationRegistry":
        if decl.key in self._by_key:
            raise DeclarationError("E-DUPDECL", f"duplicate declaration of {decl.describe()}")
        return DeclarationRegistry(self.declarations + (decl,))

    def applicable(self, domain: str, elem_type: str | None = None) -> list[FeatureDecl]:
        return [d for d in self.declarations
                if d.domain == domain and d.elem_type == elem_type and d.name is not None]

    def lookup(self, domain, elem_type, name) -> FeatureDecl | None:
        return self._by_key.get((name, elem_type, domain))

    def structure(self):
        return tuple(sorted(
            ((_nkey(d.name), _nkey(d.elem_type), d.domain, d.dcr or "",
              tuple((v.name, v.description, v.dcr or "") for v in d.values))
             for d in self.declarations)))


def register(registry: DeclarationRegistry, decl: FeatureDecl) -> DeclarationRegistry:
    return registry.register(decl)


def applicable(registry: DeclarationRegistry, domain: str, elem_type=None) -> list[FeatureDecl]:
    return registry.applicable(domain, elem_type)


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    code: str
    location: str | tuple[str, str | None]
    message: str
    order: tuple = field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if self.code not in CATALOGUE:
            raise ValueError(f"unknown diagnostic code {self.code!r}")

    @property
    def is_error(self) -> bool:
        return self.severity == ERROR

    def render(self) -> str:
        if self.location == HEAD:
            loc = HEAD
        else:
            seg, elem = self.location
            loc = seg if elem is None else f"{seg}/{elem}"
        return f"{self.severity.upper()} {self.code} {loc} {self.message}"

    def __str__(self):
        return self.render()


def diagnostic(code, location, message, order=(), severity=None) -> Diagnostic:
    return Diagnostic(severity or CATALOGUE[code], code, location, message, order)


def sort_diagnostics(diags):
    return sorted(diags, key=lambda d: (d.order, d.code))


def has_errors(diags) -> bool:
    return any(d.is_error for d in diags)


def is_valid_dcr(uri: str) -> bool:
    if not uri or any(c.isspace() for c in uri):
        return False
    try:
        parts = urlsplit(uri)
    except ValueError:
        return False
    return parts.scheme in ("http", "https") and bool(parts.netloc)


def is_valid_corresp(uri: str) -> bool:
    """A URI reference with a non-empty fragment, e.g. ``tokens.xml#w1``."""
    if not uri or any(c.isspace() or c in '<>"{}|\\^`' for c in uri):
        return False
    try:
        parts = urlsplit(uri)
    except ValueError:
        return False
    return bool(parts.fragment) and uri.count("#") == 1


def validate_corpus(corpus, strict: bool = True,
                    const_types=DEFAULT_CONST_TYPES) -> list[Diagnostic]:
    """Check a corpus against its declaration block.

    ``strict=False`` downgrades undeclared type labels (E-UNDECLTYPE) to
    warnings. ``const_types`` names the edge types forming the constituency
    layer used to check each graph's declared discontinuity flag.
    Diagnostics come back sorted by segment order, element document order,
    then code.
    """
    from .model import is_discontinuous

    reg = corpus.registry
    types = reg.declared_types
    diags: list[Diagnostic] = []
    used_types: set = set()
    used_anns: set = set()
    head = (-1,)

    seen_decl = set()
    for i, decl in enumerate(reg.declarations):
        at = head + (i,)
        if decl.key in seen_decl:
            diags.append(diagnostic("E-DUPDECL", HEAD, f"duplicate declaration of {decl.describe()}", at))
        seen_decl.add(decl.key)
        if decl.dcr is not None and not is_valid_dcr(decl.dcr):
            diags.append(diagnostic("E-BADURI", HEAD, f"malformed dcr reference {decl.dcr!r} on {decl.describe()}", at))
        for v in decl.values:
            if v.dcr is not None and not is_valid_dcr(v.dcr):
                diags.append(diagnostic("E-BADURI", HEAD, f"malformed dcr reference {v.dcr!r} on value {v.name!r}", at))

    def walk_ids(c, path):
        sibs = set()
        for sub in c.subcorpora:
            if sub.id in sibs or sub.id == c.id:
                diags.append(diagnostic("E-DUPID", HEAD, f"duplicate corpus id {sub.id!r}", head + (len(reg.declarations), len(path))))
            sibs.add(sub.id)
            walk_ids(sub, path + (sub.id,))
    walk_ids(corpus, ())

    undecl_sev = ERROR if strict else WARNING
    seen_segments = set()

    def check_element(domain, elem_type, annotations, loc, order, what):
        if elem_type is not None:
            used_types.add((domain, elem_type))
            if elem_type not in types[domain]:
                diags.append(diagnostic("E-UNDECLTYPE", loc,
                                        f"{what} type {elem_type!r} not declared for domain {domain}",
                                        order, severity=undecl_sev))
        for name, value in annotations.items():
            decl = reg.lookup(domain, elem_type, name)
            if decl is None:
                cls = f"type {elem_type!r}" if elem_type else "untyped elements"
                diags.append(diagnostic("E-UNDECLANN", loc,
                                        f"annotation {name!r} not declared for {domain} {cls}", order))
                continue
            used_anns.add((domain, elem_type, name))
            if decl.is_closed and value not in decl.value_names:
                diags.append(diagnostic("E-BADVAL", loc,
                                        f"{name}={value!r} outside declared values of {decl.describe()}", order))

    for si, seg in enumerate(corpus.iter_segments()):
        if seg.id in seen_segments:
            diags.append(diagnostic("E-DUPID", (seg.id, None), f"duplicate segment id {seg.id!r}", (si, -1)))
        seen_segments.add(seg.id)
        for gi, g in enumerate(seg.graphs):
            gloc = (seg.id, f"graph[{gi + 1}]")
            gorder = (si, gi, -1)
            if g.root is None:
                diags.append(diagnostic("W-NOROOT", gloc, "graph has no root", gorder))
            elif g.root not in g._index:
                diags.append(diagnostic("E-BADREF", gloc, f"root {g.root!r} does not resolve", gorder))
            if g.discontinuous is not None:
                computed, offenders = is_discontinuous(g, const_types)
                if computed != g.discontinuous:
                    detail = f" (offenders: {', '.join(offenders)})" if offenders else ""
                    diags.append(diagnostic(
                        "W-DISC", gloc,
                        f"declared discontinuous={str(g.discontinuous).lower()} but "
                        f"constituency layer is {'dis' if computed else ''}continuous{detail}",
                        gorder))

            nodes = g.nodes
            node_order = {}
            ids = set()
            for k, n in enumerate(nodes):
                node_order.setdefault(n.id, k)
                loc = (seg.id, n.id)
                order = (si, gi, k, 0)
                if n.id in ids:
                    diags.append(diagnostic("E-DUPID", loc, f"duplicate node id {n.id!r}", order))
                ids.add(n.id)
                check_element(n.domain, n.elem_type, n.annotations, loc, order,
                              "terminal" if n.is_terminal else "nonterminal")
                if n.corresp is not None and not is_valid_corresp(n.corresp):
                    diags.append(diagnostic("E-BADURI", loc, f"malformed corresp URI {n.corresp!r}", order))

            per_source: dict = {}
            for e in g.edges:
                k = node_order.get(e.source, len(nodes))
                j = per_source[e.source] = per_source.get(e.source, 0) + 1
                loc = (seg.id, e.key)
                order = (si, gi, k, j)
                if e.source not in g._index:
                    diags.append(diagnostic("E-BADREF", loc, f"edge source {e.source!r} does not resolve", order))
                if not e.is_external and e.target not in g._index:
                    diags.append(diagnostic("E-BADREF", loc, f"edge target {e.target_ref!r} does not resolve", order))
                check_element("edge", e.elem_type, e.annotations, loc, order, "edge")

    tail = (len(reg.declarations),)
    for i, decl in enumerate(reg.declarations):
        if decl.is_type_decl:
            used = (decl.domain, decl.elem_type) in used_types
        else:
            used = (decl.domain, decl.elem_type, decl.name) in used_anns
        if not used:
            diags.append(diagnostic("W-UNUSEDDECL", HEAD, f"{decl.describe()} matches no element",
                                    head + tail + (i,)))

    return sort_diagnostics(diags)

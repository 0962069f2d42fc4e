"""Resolve terminal ``corresp`` links against external token documents.

Token documents are read loosely: any element carrying ``xml:id`` is an
addressable token, its surface form is its ``@form`` attribute or else its
text content.
"""
from __future__ import annotations

import os
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

from .model import Corpus
from .xmlio import XML_ID


class StandoffError(ValueError):
    pass


@dataclass(frozen=True)
class Token:
    form: str
    annotations: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class TokenTable:
    source: str
    entries: Mapping[str, Token]

    def __post_init__(self):
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    def __len__(self):
        return len(self.entries)

    def __contains__(self, frag):
        return frag in self.entries

    def without(self, *frags) -> "TokenTable":
        return TokenTable(self.source, {k: v for k, v in self.entries.items() if k not in frags})


@dataclass
class ResolutionReport:
    resolved: int = 0
    unresolved: list[tuple[str, str]] = field(default_factory=list)
    mismatches: list[tuple[str, str, str]] = field(default_factory=list)

    @property
    def total(self) -> int:
        return self.resolved + len(self.unresolved)

    def render(self) -> str:
        lines = [f"resolved {self.resolved}/{self.total}"]
        lines += [f"unresolved {tid} {uri}" for tid, uri in self.unresolved]
        lines += [f"mismatch {tid} inline={word!r} external={form!r}" for tid, word, form in self.mismatches]
        return "\n".join(lines)


def load_token_document(document, source: str = "") -> TokenTable:
    try:
        root = ET.fromstring(document)
    except ET.ParseError as exc:
        raise StandoffError(f"malformed token document {source or ''}: {exc}") from None
    entries = {}
    for elem in root.iter():
        xid = elem.get(XML_ID)
        if xid is None:
            continue
        if xid in entries:
            raise StandoffError(f"duplicate xml:id {xid!r} in token document {source}".rstrip())
        form = elem.get("form")
        if form is None:
            form = "".join(elem.itertext()).strip()
        ann = {k: v for k, v in elem.attrib.items() if k not in (XML_ID, "form") and not k.startswith("{")}
        entries[xid] = Token(form, MappingProxyType(ann))
    return TokenTable(source, entries)


def resolve_corresp(corpus: Corpus, tables: Mapping[str, TokenTable], base: str | None = None) -> ResolutionReport:
    """Check every terminal ``corresp`` against the loaded token tables.

    ``tables`` is keyed by document locator. With ``base`` set, locators in
    the corpus are taken relative to that directory and normalised, and
    ``tables`` must be keyed by the same normalised paths.
    """
    report = ResolutionReport()
    for seg in corpus.iter_segments():
        for g in seg.graphs:
            for t in g.terminals:
                if t.corresp is None:
                    continue
                doc, sep, frag = t.corresp.partition("#")
                if base is not None and doc:
                    doc = os.path.normpath(os.path.join(base, doc))
                table = tables.get(doc)
                tok = table.entries.get(frag) if table is not None and sep else None
                if tok is None:
                    report.unresolved.append((t.id, t.corresp))
                    continue
                report.resolved += 1
                if t.word is not None and t.word != tok.form:
                    report.mismatches.append((t.id, t.word, tok.form))
    return report

"""Command-line front end.

Exit status: 0 success (warnings allowed), 1 validation errors / refusal /
unresolved links, 2 fatal (I/O, malformed input, bad arguments). Payload
goes to stdout, diagnostics to stderr.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace

from . import model
from .declarations import DeclarationRegistry, has_errors
from .pepper import ConversionError, ExportRefused, UnknownFormatError, default_registry
from .standoff import StandoffError, load_token_document, resolve_corresp
from .xmlio import (DCR_NS, RESERVED_NS, ParseOptions, SerializationError, SerializeOptions,
                    Tiger2ParseError, parse_tiger2, serialize_tiger2)

OK, INVALID, FATAL = 0, 1, 2


class _Fatal(Exception):
    pass


def _err(msg):
    print(msg, file=sys.stderr)


def _read(path) -> bytes:
    try:
        with open(path, "rb") as fh:
            return fh.read()
    except OSError as exc:
        raise _Fatal(f"error: cannot read {path}: {exc.strerror or exc}") from None


def _write(path, data: bytes):
    if path in (None, "-"):
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
        return
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise _Fatal(f"error: cannot write {path}: {exc.strerror or exc}") from None


def _parse_opts(args, strict=True):
    try:
        return ParseOptions(strict=strict, reserved_ns=args.reserved_ns, dcr_ns=args.dcr_ns)
    except ValueError as exc:
        raise _Fatal(f"error: {exc}") from None


def _load(args, strict=True):
    try:
        return parse_tiger2(_read(args.path), _parse_opts(args, strict))
    except Tiger2ParseError as exc:
        raise _Fatal(f"error: {args.path}: {exc}") from None


def _type_label(s):
    return model.UNTYPED if s == model.UNTYPED_LABEL else s


def cmd_validate(args) -> int:
    _, diags = _load(args, strict=args.strict)
    for d in diags:
        _err(d.render())
    return INVALID if has_errors(diags) else OK


def cmd_convert(args) -> int:
    popts = _parse_opts(args)
    registry = default_registry(popts)
    for fmt in (args.from_format, args.to_format):
        if fmt not in registry.importers and fmt not in registry.exporters:
            raise _Fatal(f"error: unregistered format {fmt!r} "
                         f"(known: {', '.join(sorted(set(registry.importers) | set(registry.exporters)))})")
    data = _read(args.path)
    try:
        out, report = registry.convert(args.from_format, data, args.to_format)
    except UnknownFormatError as exc:
        raise _Fatal(f"error: {exc}") from None
    except ExportRefused as exc:
        for d in exc.report.diagnostics:
            _err(d.render())
        _err(f"refused: {exc}")
        return INVALID
    except ConversionError as exc:
        raise _Fatal(f"error: {exc}") from None
    for d in report.diagnostics:
        _err(d.render())
    if report.loss is not None:
        for ident, reason in report.loss.dropped_elements:
            _err(f"LOSS dropped {ident}: {reason}")
        for ident, what in report.loss.degraded:
            _err(f"LOSS degraded {ident}: {what}")
    _write(args.output, out)
    _err(report.summary())
    return OK


def cmd_stats(args) -> int:
    if args.from_format == "tiger2":
        corpus, _ = _load(args, strict=False)
    else:
        registry = default_registry(_parse_opts(args))
        if args.from_format not in registry.importers:
            raise _Fatal(f"error: unregistered format {args.from_format!r}")
        try:
            corpus, _ = registry.importers[args.from_format](_read(args.path))
        except ValueError as exc:
            raise _Fatal(f"error: {args.path}: {exc}") from None
    report = model.stats(corpus).as_dict()
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
        return OK
    print(f"segments      {report['segments']}")
    print(f"graphs        {report['graphs']}")
    for key, title in (("terminals_by_type", "terminals"), ("nonterminals_by_type", "nonterminals"),
                       ("edges_by_type", "edges")):
        counts = report[key]
        print(f"{title:<13} {sum(counts.values())}")
        for typ, n in counts.items():
            print(f"  {typ:<11} {n}")
    return OK


def _layer_registry(reg: DeclarationRegistry, node_types, edge_types) -> DeclarationRegistry:
    keep = []
    for d in reg.declarations:
        if d.domain == "edge" and d.elem_type not in edge_types:
            continue
        if d.domain == "nt" and node_types is not None and d.elem_type not in node_types:
            continue
        keep.append(d)
    return DeclarationRegistry(keep)


def cmd_extract(args) -> int:
    corpus, _ = _load(args)
    edge_types = frozenset(_type_label(t) for t in args.edge_type)
    node_types = None if not args.node_type else frozenset(_type_label(t) for t in args.node_type)
    present = {e.elem_type for seg in corpus.iter_segments() for g in seg.graphs for e in g.edges}
    for t in sorted(edge_types - present, key=lambda x: (x is None, x or "")):
        _err(f"warning: edge type {t or model.UNTYPED_LABEL!r} occurs in no graph")

    def project(c: model.Corpus) -> model.Corpus:
        segs = [replace(s, graphs=[model.extract_layer(g, node_types, edge_types) for g in s.graphs])
                for s in c.segments]
        return replace(c, segments=segs, subcorpora=[project(sub) for sub in c.subcorpora])

    out = replace(project(corpus), registry=_layer_registry(corpus.registry, node_types, edge_types))
    try:
        data = serialize_tiger2(out, SerializeOptions(reserved_ns=args.reserved_ns, dcr_ns=args.dcr_ns))
    except SerializationError as exc:
        for d in exc.diagnostics:
            _err(d.render())
        _err(f"error: {exc}")
        return INVALID
    _write(args.output, data)
    return OK


def cmd_resolve(args) -> int:
    corpus, _ = _load(args, strict=False)
    tables = {}
    for path in args.tokens:
        key = os.path.normpath(os.path.abspath(path))
        try:
            tables[key] = load_token_document(_read(path), source=path)
        except StandoffError as exc:
            raise _Fatal(f"error: {exc}") from None
    base = os.path.dirname(os.path.abspath(args.path))
    report = resolve_corresp(corpus, tables, base=base)
    print(report.render())
    return INVALID if report.unresolved else OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--reserved-ns", default=RESERVED_NS, metavar="URI",
                        help="namespace URI of the reserved tiger2 attributes")
    common.add_argument("--dcr-ns", default=DCR_NS, metavar="URI",
                        help="namespace URI of dcr:datcat attributes")

    p = argparse.ArgumentParser(prog="tiger2", description="Validate, convert and query <tiger2/> corpora.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", parents=[common], help="check a document against its declarations")
    v.add_argument("path")
    mode = v.add_mutually_exclusive_group()
    mode.add_argument("--strict", dest="strict", action="store_true", default=True,
                      help="undeclared type labels are errors (default)")
    mode.add_argument("--lax", dest="strict", action="store_false",
                      help="undeclared type labels are warnings")
    v.set_defaults(func=cmd_validate)

    c = sub.add_parser("convert", parents=[common], help="convert between formats")
    c.add_argument("--from", dest="from_format", required=True)
    c.add_argument("--to", dest="to_format", required=True)
    c.add_argument("path")
    c.add_argument("-o", "--output")
    c.set_defaults(func=cmd_convert)

    s = sub.add_parser("stats", parents=[common], help="count segments, nodes and edges by type")
    s.add_argument("path")
    s.add_argument("--json", action="store_true")
    s.add_argument("--from", dest="from_format", default="tiger2")
    s.set_defaults(func=cmd_stats)

    x = sub.add_parser("extract", parents=[common], help="project graphs onto edge/node types")
    x.add_argument("path")
    x.add_argument("--edge-type", action="append", required=True,
                   help="edge type to keep (repeatable; 'untyped' for untyped edges)")
    x.add_argument("--node-type", action="append",
                   help="nonterminal type to keep (repeatable; default all)")
    x.add_argument("-o", "--output")
    x.set_defaults(func=cmd_extract)

    r = sub.add_parser("resolve", parents=[common], help="check corresp links against token documents")
    r.add_argument("path")
    r.add_argument("--tokens", action="append", default=[], required=True)
    r.set_defaults(func=cmd_resolve)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Fatal as exc:
        _err(str(exc))
        return FATAL


if __name__ == "__main__":
    sys.exit(main())

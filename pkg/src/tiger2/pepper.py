"""Format conversion through the single in-memory model.

Every format contributes at most one importer (bytes -> model) and one
exporter (model -> bytes). Any importer can be chained with any exporter,
so ``i`` importers and ``e`` exporters give ``i * e`` routes from only
``i + e`` mappers; formats never talk to each other directly.

Mapper signatures::

    importer(data: bytes) -> (Corpus, list[Diagnostic])
    exporter(corpus: Corpus) -> (bytes, LossReport | None)
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .conll import ConllConfig, ConllError, export_conll, import_conll
from .declarations import Diagnostic
from .model import Corpus
from .tigerxml import ImportMapping, LossReport, TigerXMLError, export_tigerxml, import_tigerxml
from .xmlio import (ParseOptions, SerializationError, SerializeOptions, Tiger2ParseError,
                    parse_tiger2, serialize_tiger2)

Importer = Callable[[bytes], "tuple[Corpus, list[Diagnostic]]"]
Exporter = Callable[[Corpus], "tuple[bytes, LossReport | None]"]

BUILTIN_FORMATS = ("tiger2", "tigerxml", "conll")


class DuplicateFormatError(ValueError):
    pass


class UnknownFormatError(KeyError):
    def __str__(self):
        return f"unregistered format {self.args[0]!r}"


class ConversionError(RuntimeError):
    """Importer failure or exporter refusal; ``report`` holds what ran."""

    def __init__(self, message, report, stage):
        super().__init__(message)
        self.report = report
        self.stage = stage


class ExportRefused(ConversionError):
    pass


@dataclass
class ConversionReport:
    route: tuple[str, str]
    diagnostics: list[Diagnostic] = field(default_factory=list)
    loss: LossReport | None = None
    refusal: str | None = None

    def summary(self) -> str:
        n_err = sum(d.is_error for d in self.diagnostics)
        parts = [f"{self.route[0]} -> {self.route[1]}",
                 f"{n_err} errors, {len(self.diagnostics) - n_err} warnings"]
        if self.loss is not None:
            parts.append(f"loss: {self.loss.summary()}")
        if self.refusal:
            parts.append(f"refused: {self.refusal}")
        return "; ".join(parts)


class MapperRegistry:
    def __init__(self):
        self.importers: dict[str, Importer] = {}
        self.exporters: dict[str, Exporter] = {}

    def register_importer(self, format_id: str, mapper: Importer) -> "MapperRegistry":
        if format_id in self.importers:
            raise DuplicateFormatError(f"importer for {format_id!r} already registered")
        self.importers[format_id] = mapper
        return self

    def register_exporter(self, format_id: str, mapper: Exporter) -> "MapperRegistry":
        if format_id in self.exporters:
            raise DuplicateFormatError(f"exporter for {format_id!r} already registered")
        self.exporters[format_id] = mapper
        return self

    @property
    def mapper_count(self) -> int:
        return len(self.importers) + len(self.exporters)

    def routes(self) -> list[tuple[str, str]]:
        return [(i, e) for i in self.importers for e in self.exporters]

    def convert(self, in_format: str, data: bytes, out_format: str):
        """Run ``exporter(importer(data))``; returns ``(bytes, ConversionReport)``."""
        if in_format not in self.importers:
            raise UnknownFormatError(in_format)
        if out_format not in self.exporters:
            raise UnknownFormatError(out_format)
        report = ConversionReport((in_format, out_format))
        try:
            corpus, diags = self.importers[in_format](data)
        except (ValueError, UnicodeDecodeError) as exc:
            raise ConversionError(f"{in_format} import failed: {exc}", report, "import") from exc
        report.diagnostics = list(diags)
        try:
            out, loss = self.exporters[out_format](corpus)
        except ValueError as exc:
            report.refusal = str(exc)
            raise ExportRefused(f"{out_format} export refused: {exc}", report, "export") from exc
        report.loss = loss
        return out, report


def register_importer(registry: MapperRegistry, format_id: str, mapper: Importer) -> MapperRegistry:
    return registry.register_importer(format_id, mapper)


def register_exporter(registry: MapperRegistry, format_id: str, mapper: Exporter) -> MapperRegistry:
    return registry.register_exporter(format_id, mapper)


def convert(registry: MapperRegistry, in_format: str, data: bytes, out_format: str):
    return registry.convert(in_format, data, out_format)


def default_registry(parse_options: ParseOptions | None = None,
                     serialize_options: SerializeOptions | None = None,
                     mapping: ImportMapping | None = None,
                     conll_config: ConllConfig | None = None) -> MapperRegistry:
    """A registry with the tiger2, tigerxml and conll mappers in both directions."""
    popts = parse_options or ParseOptions()
    sopts = serialize_options or SerializeOptions(reserved_ns=popts.reserved_ns, dcr_ns=popts.dcr_ns)
    mapping = mapping or ImportMapping()
    cfg = conll_config or ConllConfig()

    reg = MapperRegistry()
    reg.register_importer("tiger2", lambda data: parse_tiger2(data, popts))
    reg.register_importer("tigerxml", lambda data: import_tigerxml(data, mapping))
    reg.register_importer("conll", lambda data: (import_conll(data, cfg), []))
    reg.register_exporter("tiger2", lambda c: (serialize_tiger2(c, sopts), None))
    reg.register_exporter("tigerxml", lambda c: export_tigerxml(c, mapping))
    reg.register_exporter("conll", lambda c: (export_conll(c, cfg).encode("utf-8"), None))
    return reg


# exceptions raised by the built-in mappers, for callers that want them
MAPPER_ERRORS = (Tiger2ParseError, TigerXMLError, ConllError, SerializationError)

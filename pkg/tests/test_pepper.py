import pytest

from tiger2 import parse_tiger2, serialize_tiger2
from tiger2.model import structurally_equal
from tiger2.pepper import (ConversionError, DuplicateFormatError, ExportRefused, MapperRegistry,
                           UnknownFormatError, convert, default_registry, register_exporter,
                           register_importer)
from tiger2.tigerxml import import_tigerxml


def stub_pair(calls):
    def imp(data):
        calls.append("import")
        return parse_tiger2(data)

    def exp(corpus):
        calls.append("export")
        return serialize_tiger2(corpus), None
    return imp, exp


def test_builtin_economy():
    reg = default_registry()
    assert reg.mapper_count == 6
    assert len(reg.routes()) == 9


def test_stub_format_adds_two_mappers_and_seven_routes():
    reg = default_registry()
    imp, exp = stub_pair([])
    register_importer(reg, "stub", imp)
    register_exporter(reg, "stub", exp)
    assert reg.mapper_count == 8
    assert len(reg.routes()) == 16


def test_duplicate_registration():
    reg = default_registry()
    with pytest.raises(DuplicateFormatError):
        reg.register_importer("conll", lambda d: None)


def test_conversion_goes_through_the_model(wallpaper_bytes):
    calls = []
    imp, exp = stub_pair(calls)
    reg = MapperRegistry().register_importer("a", imp).register_exporter("b", exp)
    out, report = convert(reg, "a", wallpaper_bytes, "b")
    assert calls == ["import", "export"]
    assert report.route == ("a", "b")
    assert [d.code for d in report.diagnostics] == ["W-DISC"]
    assert report.summary() == "a -> b; 0 errors, 1 warnings"


def test_identity_route_idempotent(wallpaper_bytes):
    reg = default_registry()
    once, _ = reg.convert("tiger2", wallpaper_bytes, "tiger2")
    twice, _ = reg.convert("tiger2", once, "tiger2")
    assert once == twice
    assert structurally_equal(parse_tiger2(once)[0], parse_tiger2(wallpaper_bytes)[0])


def test_tigerxml_to_tiger2(tueba_tigerxml):
    out, report = default_registry().convert("tigerxml", tueba_tigerxml, "tiger2")
    assert report.loss is None
    assert structurally_equal(parse_tiger2(out)[0], import_tigerxml(tueba_tigerxml)[0])


def test_tiger2_to_tigerxml_reports_loss(wallpaper_bytes):
    _, report = default_registry().convert("tiger2", wallpaper_bytes, "tigerxml")
    assert report.loss is not None and not report.loss.lossless
    assert "loss: 10 dropped" in report.summary()


def test_conll_refusal(wallpaper_bytes):
    with pytest.raises(ExportRefused) as exc:
        default_registry().convert("tiger2", wallpaper_bytes, "conll")
    assert exc.value.stage == "export"
    assert "#s1_nt2" in exc.value.report.refusal


def test_import_failure():
    with pytest.raises(ConversionError) as exc:
        default_registry().convert("tiger2", b"<corpus", "conll")
    assert exc.value.stage == "import"
    assert not isinstance(exc.value, ExportRefused)


@pytest.mark.parametrize("src,dst", [("nope", "tiger2"), ("tiger2", "nope")])
def test_unknown_format(src, dst):
    with pytest.raises(UnknownFormatError, match="unregistered format 'nope'"):
        default_registry().convert(src, b"", dst)

import json
import subprocess
import sys

import pytest

from tiger2 import parse_tiger2
from tiger2.cli import main


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_validate_ok(capsys, data_dir):
    code, out, err = run(capsys, "validate", data_dir / "wallpaper.xml")
    assert code == 0 and out == ""
    assert err.startswith("WARNING W-DISC s1/graph[1] ")


def test_validate_errors_and_lax(capsys, data_dir, wallpaper_bytes):
    bad = data_dir / "bad.xml"
    bad.write_bytes(wallpaper_bytes.replace(b'<feature type="dep" domain="edge"/>', b""))
    code, _, err = run(capsys, "validate", bad)
    assert code == 1 and err.count("ERROR E-UNDECLTYPE") == 3
    code, _, err = run(capsys, "validate", "--lax", bad)
    assert code == 0 and err.count("WARNING E-UNDECLTYPE") == 3


@pytest.mark.parametrize("argv", [["validate", "missing.xml"], ["stats", "missing.xml"]])
def test_missing_file_is_fatal(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and "cannot read missing.xml" in err


def test_malformed_is_fatal(capsys, tmp_path):
    p = tmp_path / "x.xml"
    p.write_bytes(b"<corpus")
    code, _, err = run(capsys, "validate", p)
    assert code == 2 and "malformed XML" in err


def test_bad_namespace_is_fatal(capsys, data_dir):
    code, _, err = run(capsys, "validate", "--reserved-ns", "relative", data_dir / "wallpaper.xml")
    assert code == 2 and "absolute" in err


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["extract", "x.xml"])
    assert exc.value.code == 2


def test_stats_json(capsys, data_dir):
    code, out, _ = run(capsys, "stats", "--json", data_dir / "wallpaper.xml")
    assert code == 0
    assert json.loads(out)["edges_by_type"] == {"const": 7, "dep": 3}


def test_stats_table(capsys, data_dir):
    code, out, _ = run(capsys, "stats", data_dir / "wallpaper.xml")
    lines = out.splitlines()
    assert lines[0].split() == ["segments", "1"]
    assert ["terminals", "5"] in [ln.split() for ln in lines]
    assert ["untyped", "3"] in [ln.split() for ln in lines]


def test_stats_other_format(capsys, tmp_path, tueba_tigerxml):
    p = tmp_path / "t.xml"
    p.write_bytes(tueba_tigerxml)
    code, out, _ = run(capsys, "stats", "--json", "--from", "tigerxml", p)
    assert code == 0 and json.loads(out)["edges_by_type"] == {"prim": 25}


def test_convert_to_stdout_and_file(capsys, data_dir):
    code, out, err = run(capsys, "convert", "--from", "tiger2", "--to", "tigerxml", data_dir / "wallpaper.xml")
    assert code == 0 and "<corpus id=\"wallpaper\">" in out
    assert "LOSS dropped s1_t1->#s1_nt2" in err and "tiger2 -> tigerxml" in err
    target = data_dir / "out.xml"
    code, out, _ = run(capsys, "convert", "--from", "tiger2", "--to", "tiger2",
                       data_dir / "wallpaper.xml", "-o", target)
    assert code == 0 and out == ""
    assert parse_tiger2(target.read_bytes())[0].id == "wallpaper"


def test_convert_refused(capsys, data_dir):
    code, out, err = run(capsys, "convert", "--from", "tiger2", "--to", "conll", data_dir / "wallpaper.xml")
    assert code == 1 and out == ""
    assert "refused:" in err and "s1_t1 -> #s1_nt2 (label OBJ)" in err


def test_convert_unknown_format(capsys, data_dir):
    code, _, err = run(capsys, "convert", "--from", "tiger2", "--to", "penn", data_dir / "wallpaper.xml")
    assert code == 2 and "unregistered format 'penn'" in err


def test_convert_bad_input_fatal(capsys, tmp_path):
    p = tmp_path / "x.conll"
    p.write_text("1\tonly\n")
    code, _, err = run(capsys, "convert", "--from", "conll", "--to", "tiger2", p)
    assert code == 2 and "conll import failed" in err


def test_extract(capsys, data_dir):
    code, out, _ = run(capsys, "extract", data_dir / "wallpaper.xml", "--edge-type", "dep")
    assert code == 0
    corpus, diags = parse_tiger2(out.encode())
    g = corpus.segments[0].graphs[0]
    assert len(g.edges) == 3 and {e.elem_type for e in g.edges} == {"dep"}
    assert corpus.registry.lookup("edge", "const", "label") is None


def test_extract_warns_on_absent_type(capsys, data_dir):
    code, _, err = run(capsys, "extract", data_dir / "wallpaper.xml", "--edge-type", "coref")
    assert code == 0 and "edge type 'coref' occurs in no graph" in err


def test_resolve(capsys, data_dir, tokens_bytes):
    code, out, _ = run(capsys, "resolve", data_dir / "wallpaper.xml", "--tokens", data_dir / "tokens.xml")
    assert code == 0 and out == "resolved 5/5\n"
    (data_dir / "tokens.xml").write_bytes(tokens_bytes.replace(b'xml:id="wordForm2"', b'xml:id="gone"'))
    code, out, _ = run(capsys, "resolve", data_dir / "wallpaper.xml", "--tokens", data_dir / "tokens.xml")
    assert code == 1 and out.splitlines()[0] == "resolved 4/5"


def test_module_entry_point(data_dir):
    proc = subprocess.run([sys.executable, "-m", "tiger2", "stats", "--json", str(data_dir / "wallpaper.xml")],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["segments"] == 1

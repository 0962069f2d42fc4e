import random
from dataclasses import replace

import pytest

from generators import random_tigerxml
from tiger2 import (UNTYPED, Corpus, DeclarationRegistry, Edge, FeatureDecl, Graph, Node, Segment,
                    children, extract_layer, parse_tiger2, stats)
from tiger2.model import structurally_equal
from tiger2.tigerxml import (ImportMapping, TigerXMLError, cat_types, export_tigerxml,
                             import_tigerxml)

FIELDS = ImportMapping(node_type=cat_types())


def closed_loop(data, mapping=None):
    first, _ = import_tigerxml(data, mapping)
    out, loss = export_tigerxml(first, mapping)
    second, _ = import_tigerxml(out, mapping)
    return first, second, loss


def test_tueba_closed_loop(tueba_tigerxml):
    first, second, loss = closed_loop(tueba_tigerxml, FIELDS)
    assert structurally_equal(first, second)
    # field-typed nodes are the only thing TigerXML cannot carry
    assert loss.dropped_elements == []
    assert {what for _, what in loss.degraded} >= {"node type 'field' dropped"}


def test_tueba_import_counts(tueba_tigerxml):
    corpus, diags = import_tigerxml(tueba_tigerxml, FIELDS)
    assert diags == []
    s = stats(corpus).as_dict()
    assert s["terminals_by_type"] == {"untyped": 9}
    assert s["edges_by_type"] == {"prim": 25}
    g = corpus.segments[0].graphs[0]
    assert g.root == "s2_516" and g.discontinuous is True
    assert s["nonterminals_by_type"]["field"] > 0


def test_untyped_import_closed_loop(tueba_tigerxml):
    first, second, loss = closed_loop(tueba_tigerxml)
    assert structurally_equal(first, second)
    assert loss.lossless


@pytest.mark.parametrize("seed", range(30))
def test_random_closed_loop(seed):
    first, second, _ = closed_loop(random_tigerxml(random.Random(seed)))
    assert structurally_equal(first, second)


def test_secedge_becomes_second_type():
    data = random_tigerxml(random.Random(3), max_segments=6)
    corpus, _ = import_tigerxml(data, ImportMapping("syn", "ref"))
    assert set(stats(corpus).as_dict()["edges_by_type"]) <= {"syn", "ref"}
    assert corpus.registry.declared_types["edge"] == frozenset({"syn", "ref"})


def test_frec_domain_applies_to_both():
    corpus, _ = import_tigerxml(random_tigerxml(random.Random(1)))
    assert corpus.registry.lookup("t", None, "morph") is not None
    assert corpus.registry.lookup("nt", None, "morph") is not None
    out, _ = export_tigerxml(corpus)
    assert b'<feature name="morph" domain="FREC"/>' in out


def test_imported_corpus_serialises_as_tiger2(tueba_tigerxml):
    from tiger2 import serialize_tiger2
    corpus, _ = import_tigerxml(tueba_tigerxml, FIELDS)
    again, diags = parse_tiger2(serialize_tiger2(corpus))
    assert not [d for d in diags if d.is_error]
    assert structurally_equal(corpus, again)


def test_dangling_idref_reported():
    data = (b'<corpus id="c"><body><s id="s"><graph root="n"><terminals><t id="a" word="x"/>'
            b'</terminals><nonterminals><nt id="n" cat="S"><edge label="HD" idref="zz"/></nt>'
            b"</nonterminals></graph></s></body></corpus>")
    _, diags = import_tigerxml(data)
    assert [d.code for d in diags] == ["E-BADREF"]


@pytest.mark.parametrize("data", [b"<corpus", b"<x/>", b'<corpus id="c"><body><s/></body></corpus>',
                                  b'<corpus id="c"><body><s id="s"/></body></corpus>'])
def test_malformed(data):
    with pytest.raises(TigerXMLError):
        import_tigerxml(data)


def test_mapping_rejects_same_types():
    with pytest.raises(ValueError):
        ImportMapping("x", "x")


def coref_corpus(wallpaper):
    """wallpaper relabelled to prim edges plus a third edge type."""
    g = wallpaper.segments[0].graphs[0]
    edges = [replace(e, elem_type="prim") for e in g.edges if e.elem_type == "const"]
    coref = [Edge("s1_nt2", "s1_t1", "coref"), Edge("s1_nt3", "s1_nt2", "coref")]
    reg = DeclarationRegistry([d for d in wallpaper.registry.declarations if d.domain != "edge"]
                              + [FeatureDecl(None, "prim", "edge"), FeatureDecl("label", "prim", "edge"),
                                 FeatureDecl(None, "coref", "edge")])
    seg = replace(wallpaper.segments[0], graphs=[replace(g, edges=edges + coref)])
    return replace(wallpaper, registry=reg, segments=[seg]), coref


def test_coref_edges_reported_lost(wallpaper):
    corpus, coref = coref_corpus(wallpaper)
    _, loss = export_tigerxml(corpus)
    dropped = {k for k, why in loss.dropped_elements if "coref" in why}
    assert dropped == {e.key for e in coref}
    assert not loss.lossless


def test_loss_lists_everything_else(wallpaper):
    data, loss = export_tigerxml(wallpaper)
    degraded = " ".join(what for _, what in loss.degraded)
    assert "node type 'stem' dropped" in degraded
    assert "corresp" in degraded and "dcr reference" in degraded
    # const and dep edges are neither prim nor sec
    assert len(loss.dropped_elements) == 10
    assert loss.summary() == f"10 dropped, {len(loss.degraded)} degraded"


def test_layered_tueba_direct_object(tueba_tiger2):
    corpus, diags = parse_tiger2(tueba_tiger2)
    assert not [d for d in diags if d.is_error]
    g = corpus.segments[0].graphs[0]
    syntax = extract_layer(g, {UNTYPED}, {"const"})
    assert all(n.elem_type != "field" for n in syntax.nonterminals)
    objs = [n for n in children(syntax, "s2_515")
            if any(e.annotations.get("label") == "OA" and e.target == n.id
                   for e in syntax.edges if e.source == "s2_515")]
    assert [n.id for n in objs] == ["s2_511"]


def test_cat_types_hook():
    hook = cat_types({"MF"}, "topo")
    assert hook("MF") == "topo" and hook("NX") is None and hook(None) is None


def test_export_minimal():
    c = Corpus("c", segments=[Segment("s", [Graph([Node.terminal("a", word="x")], [], [], root="a")])])
    data, loss = export_tigerxml(c)
    again, _ = import_tigerxml(data)
    assert again.segments[0].graphs[0].terminals[0].word == "x"
    assert loss.lossless

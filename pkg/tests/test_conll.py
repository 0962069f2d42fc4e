import random

import pytest

from tiger2 import Corpus, Edge, Graph, Node, Segment, children, stats, validate_corpus
from tiger2.conll import ConllConfig, ConllError, export_conll, import_conll

PRT = "1\tput\tput\tV\tVB\t_\t0\tROOT\t_\t_\n2\tup\tup\tRP\tRP\t_\t1\tPRT\t_\t_\n\n"


def random_conll(rng):
    blocks = []
    for _ in range(rng.randint(1, 5)):
        n = rng.randint(1, 8)
        rows = []
        for i in range(1, n + 1):
            head = 0 if i == 1 else rng.randint(0, n)
            head = head if head != i else 0
            cells = [str(i), rng.choice(["Haus", "a&b", "_", "x"]), rng.choice(["_", "lem"]),
                     rng.choice(["N", "_"]), rng.choice(["NN", "VB"]), rng.choice(["_", "sg|nom"]),
                     str(head), rng.choice(["SB", "OA", "_"]), "_", "_"]
            rows.append("\t".join(cells) + "\n")
        blocks.append("".join(rows) + "\n")
    return "".join(blocks)


def test_import_prt_example():
    corpus = import_conll(PRT)
    g = corpus.segments[0].graphs[0]
    assert [t.word for t in g.terminals] == ["put", "up"]
    assert [(e.source, e.target, e.elem_type, dict(e.annotations)) for e in g.edges] == \
        [("s1_t1", "s1_t2", "dep", {"label": "PRT"})]
    assert g.root == "s1_t1"
    assert g.terminals[0].annotations["deprel"] == "ROOT"
    assert not [d for d in validate_corpus(corpus) if d.is_error]


def test_prt_round_trip_exact():
    assert export_conll(import_conll(PRT)) == PRT


@pytest.mark.parametrize("seed", range(30))
def test_random_round_trip(seed):
    text = random_conll(random.Random(seed))
    corpus = import_conll(text)
    assert not [d for d in validate_corpus(corpus) if d.is_error]
    assert export_conll(corpus) == text


def test_bytes_and_comments_accepted():
    corpus = import_conll(("# sent\n" + PRT).encode())
    assert stats(corpus).as_dict()["edges_by_type"] == {"dep": 1}


def test_custom_edge_type():
    corpus = import_conll(PRT, ConllConfig(dep_edge_type="syn", label_annotation="rel"))
    e = corpus.segments[0].graphs[0].edges[0]
    assert e.elem_type == "syn" and e.annotations == {"rel": "PRT"}


@pytest.mark.parametrize("text,msg", [
    ("1\tput\n", "expected 10 columns"),
    ("x\tput\t_\t_\t_\t_\t0\t_\t_\t_\n", "non-integer ID"),
    ("2\tput\t_\t_\t_\t_\t0\t_\t_\t_\n", "out of sequence"),
    ("1\tput\t_\t_\t_\t_\t5\t_\t_\t_\n", "out of range"),
    ("1\tput\t_\t_\t_\t_\th\t_\t_\t_\n", "non-integer HEAD"),
])
def test_malformed(text, msg):
    with pytest.raises(ConllError, match=msg):
        import_conll(text)


def test_export_refuses_nonterminal_dependency(wallpaper):
    with pytest.raises(ConllError) as exc:
        export_conll(wallpaper)
    assert "s1_t1 -> #s1_nt2" in str(exc.value) and "OBJ" in str(exc.value)


def test_export_refuses_two_heads():
    ts = [Node.terminal(f"t{i}", word="w") for i in range(3)]
    g = Graph(ts, [], [Edge("t0", "t2", "dep"), Edge("t1", "t2", "dep")], root="t0")
    with pytest.raises(ConllError, match="more than one"):
        export_conll(Corpus("c", segments=[Segment("s", [g])]))


def test_other_edge_types_ignored():
    ts = [Node.terminal("a", word="x")]
    nt = [Node.nonterminal("n")]
    g = Graph(ts, nt, [Edge("n", "a", "const")], root="n")
    assert export_conll(Corpus("c", segments=[Segment("s", [g])])) == "1\tx\t_\t_\t_\t_\t0\t_\t_\t_\n\n"


def test_head_direction_is_head_to_dependent():
    g = import_conll(PRT).segments[0].graphs[0]
    assert [n.id for n in children(g, "s1_t1", {"dep"})] == ["s1_t2"]


def test_config_validation():
    with pytest.raises(ValueError):
        ConllConfig(columns=("ID", "FORM"))
    with pytest.raises(ValueError):
        ConllConfig(columns=("ID", "FORM", "HEAD", "DEPREL", "ID"))

import json
from importlib import resources

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from kgbench.cli import main
from kgbench.graphs import f2theta, twovertex
from kgbench.kgraph import validate_kgraph
from kgbench.specfile import SpecError, load_spec, parse_spec, spec_from_graph

CORPUS = resources.files("kgbench") / "corpus"


def corpus(name):
    return str(CORPUS / name)


def _same_graph(a, b):
    return (a.rank == b.rank and set(a.vertices) == set(b.vertices) and a.edges == b.edges
            and sorted(a.squares) == sorted(b.squares) and a.incomplete == b.incomplete)


def test_corpus_f2theta_is_the_builtin():
    g = load_spec(corpus("f2theta.kg")).graph()
    assert _same_graph(g, f2theta())


@pytest.mark.parametrize("name", ["f2theta.kg", "f2theta-skew.kg", "z2swap.kg", "delta2.kg", "twovertex.kg"])
def test_corpus_round_trip(name):
    spec = load_spec(corpus(name))
    again = parse_spec(spec.to_text())
    assert again == spec


def test_parse_errors_carry_line_numbers():
    with pytest.raises(SpecError) as exc:
        parse_spec("RANK: 2\nEDGES:\n  color 1 f1 v\n")
    assert exc.value.line == 3
    with pytest.raises(SpecError):
        parse_spec("RANK: 1\nBOGUS: 1\n")
    with pytest.raises(SpecError):
        parse_spec("VERTICES:\n  v\n")


def test_dangling_endpoint_is_spec_error():
    spec = parse_spec("RANK: 1\nVERTICES:\n  u\nEDGES:\n  color 1 a u w\n")
    with pytest.raises(SpecError):
        spec.graph()


THETAS = st.permutations([(i, j) for i in range(1, 4) for j in range(1, 4)])


@settings(max_examples=30, deadline=None)
@given(perm=THETAS)
def test_spec_round_trip_random_theta(perm):
    keys = [(i, j) for i in range(1, 4) for j in range(1, 4)]
    g = f2theta(dict(zip(keys, perm)), name="random")
    text = spec_from_graph(g).to_text()
    g2 = parse_spec(text).graph()
    assert _same_graph(g, g2)
    assert validate_kgraph(g2).passed == validate_kgraph(g).passed


# -- command line ----------------------------------------------------------------

def test_validate_exit_codes(capsys):
    assert main(["validate", corpus("f2theta.kg")]) == 0
    assert main(["validate", corpus("f2theta-broken.kg")]) == 1
    out = capsys.readouterr().out
    assert "f1" in out and "g1" in out
    assert main(["validate", "/nonexistent.kg"]) == 2


def test_validate_structured_report(capsys):
    main(["validate", corpus("twovertex.kg"), "--report", "structured"])
    data = json.loads(capsys.readouterr().out)
    assert data["passed"] is True and data["records"]


def test_dangling_file_exit_2(tmp_path):
    p = tmp_path / "bad.kg"
    p.write_text("RANK: 1\nVERTICES:\n  u\nEDGES:\n  color 1 a u w\n")
    assert main(["validate", str(p)]) == 2


def test_skew_command(tmp_path):
    out = tmp_path / "skew.kg"
    assert main(["skew", corpus("f2theta-skew.kg"), "--window", "2,2", "-o", str(out)]) == 0
    g = load_spec(out).graph()
    assert len(g.vertices) == 9
    assert {v.split("@")[1] for v in g.vertices} == {f"{a},{b}" for a in range(3) for b in range(3)}
    assert main(["validate", str(out)]) == 0


def test_bad_functor_exits_1(capsys):
    assert main(["skew", corpus("f2theta-badfunctor.kg")]) == 1


def test_verify_main_exit_0(capsys):
    assert main(["verify", corpus("f2theta-skew.kg"), "--suite", "main", "--window", "3,3"]) == 0


def test_verify_aperiodicity_lists_witnesses(capsys):
    assert main(["verify", corpus("f2theta.kg"), "--suite", "aperiodicity", "--bound", "2,2",
                 "--full"]) == 0
    assert "witness" in capsys.readouterr().out


def test_strict_exit_3():
    assert main(["verify", corpus("delta2.kg"), "--suite", "gross-tucker", "--strict"]) == 3
    assert main(["verify", corpus("torus.kg"), "--suite", "aperiodicity", "--strict"]) == 3
    assert main(["verify", corpus("torus.kg"), "--suite", "aperiodicity"]) == 0


def test_missing_section_is_input_error():
    assert main(["verify", corpus("f2theta.kg"), "--suite", "main"]) == 2


def test_ck_command(capsys):
    assert main(["ck", corpus("f2theta.kg"), "s(f1)* s(g1)"]) == 0
    assert capsys.readouterr().out.strip() == "1 | g1 | f2"
    assert main(["ck", corpus("f2theta.kg"), "s(f1)* s(f2)"]) == 0
    assert capsys.readouterr().out.strip() == "0"
    assert main(["ck", corpus("f2theta.kg"), "s(f1"]) == 2


def test_dot_command(capsys):
    assert main(["dot", corpus("twovertex.kg")]) == 0
    out = capsys.readouterr().out
    assert out.startswith("digraph") and '"w" -> "u" [label="a1", color=blue]' in out


def test_twovertex_corpus_matches_builtin():
    assert _same_graph(load_spec(corpus("twovertex.kg")).graph(), twovertex())


def test_skew_zero_window_is_one_fibre(tmp_path):
    out = tmp_path / "fibre.kg"
    assert main(["skew", corpus("f2theta-skew.kg"), "--window", "0,0", "-o", str(out)]) == 0
    g = load_spec(out).graph()
    assert list(g.vertices) == ["v@0,0"]
    # only the edges with c = 0 stay inside a single fibre
    assert sorted(g.edges) == ["f1@0,0", "f2@0,0", "g1@0,0", "g2@0,0"]


def test_skew_trivial_functor_keeps_fibres(tmp_path):
    text = load_spec(corpus("f2theta-skew.kg")).to_text()
    for e in ("f3", "g3"):
        text = text.replace(f"{e} -> {'1,0' if e == 'f3' else '0,1'}", f"{e} -> 0,0")
    src = tmp_path / "flat.kg"
    src.write_text(text)
    out = tmp_path / "flat-skew.kg"
    assert main(["skew", str(src), "--window", "1,1", "-o", str(out)]) == 0
    g = load_spec(out).graph()
    assert all(ed.source == ed.range for ed in g.edges.values())

import json

import pytest
from hypothesis import assume, given, settings, strategies as st

from tangent_bigness.corpus import FIXTURE_NODES, fixture_names
from tangent_bigness.curves import dynkin_type, lines
from tangent_bigness.hierarchy import (BIG, DAG_NAMES, DOM, NOT_BIG, SPEC, UNDETERMINED,
                                       ClassificationMismatch, Conflict, DagNode, SpecDag,
                                       certified, classification_report, dag_checksum, external,
                                       load_dag, propagate)


@pytest.mark.parametrize("name,nodes,edges", [("degree4", 16, 30), ("degree3", 21, 42), ("cross-degree", 7, 5)])
def test_dag_sizes(name, nodes, edges):
    dag = load_dag(name)
    assert len(dag.nodes) == nodes and len(list(dag.edges())) == edges


def test_E6_parents():
    assert sorted(load_dag("degree3").parents("E6")) == sorted(["A5", "2A2+A1", "A4+A1", "D5"])


def test_dag_node_data_matches_fixtures(surface):
    for name in fixture_names():
        S = surface(name)
        for dag_name, nid in FIXTURE_NODES[name]:
            node = load_dag(dag_name).node(nid)
            assert node.minus2 == dynkin_type(S).minus2_count
            assert node.lines is None or node.lines == len(lines(S))
            assert node.degree == S.degree


def test_specializations_add_minus2_curves():
    for name in ("degree4", "degree3"):
        dag = load_dag(name)
        for a, b, kind in dag.edges():
            assert kind == SPEC and dag.node(a).minus2 < dag.node(b).minus2


def test_dag_check_errors():
    n = (DagNode("a", 3, 0, None), DagNode("b", 3, 1, None))
    with pytest.raises(ValueError):
        SpecDag("x", n, (("a", "b"), ("b", "a"))).check()
    with pytest.raises(ValueError):
        SpecDag("x", n, (("a", "c"),)).check()
    with pytest.raises(ValueError):
        SpecDag("x", n + (DagNode("a", 3, 0, None),)).check()
    with pytest.raises(ValueError):
        SpecDag("x", (DagNode("a", 3, 0, None), DagNode("b", 2, 1, None)), (("a", "b"),)).check()
    with pytest.raises(ValueError):
        SpecDag("x", n, (), (("a", "b"),)).check()


def test_checksum_tamper(tmp_path, monkeypatch):
    from importlib import resources

    src = resources.files("tangent_bigness").joinpath("corpus/dags/degree3.json").read_text("utf-8")
    data = json.loads(src)
    assert data["checksum"] == dag_checksum(data)
    data["spec_edges"] = data["spec_edges"][:-1]
    assert data["checksum"] != dag_checksum(data)
    root = tmp_path / "tangent_bigness" / "corpus" / "dags"
    root.mkdir(parents=True)
    (root / "degree3.json").write_text(json.dumps(data))
    monkeypatch.setattr(resources, "files", lambda pkg: tmp_path / "tangent_bigness")
    with pytest.raises(ValueError):
        load_dag("degree3")
    with pytest.raises(KeyError):
        load_dag("degree5")


def test_dict_roundtrip():
    for name in DAG_NAMES:
        dag = load_dag(name)
        assert SpecDag.from_dict(dag.to_dict()) == dag


def test_degree4_classification():
    rep = classification_report(4, strict=True)
    lab = rep.labeling
    assert set(lab.with_status(NOT_BIG)) == {"empty", "A1", "2A1(8)", "A2", "A3(4)"}
    assert len(lab.with_status(BIG)) == 11 and not lab.with_status(UNDETERMINED)


def test_degree3_classification():
    rep = classification_report(3, strict=True)
    lab = rep.labeling
    assert set(lab.with_status(BIG)) == {"A3+2A1", "A5+A1", "E6", "3A2"}
    assert set(lab.with_status(UNDETERMINED)) == {"A5", "A4+A1", "D5", "2A2+A1"}
    assert len(lab.with_status(NOT_BIG)) == 13
    chain = lab.chain("A5+A1")
    assert chain[0].startswith("A5+A1") and "A3+2A1-big" in chain[-1]


def test_cross_degree_consistent():
    rep = classification_report("cross", strict=True)
    assert rep.ok
    assert rep.labeling.status("d3:D4") == NOT_BIG
    assert rep.labeling.status("d1:2D4") == NOT_BIG
    assert rep.labeling.status("d1:A7+A1") == NOT_BIG


def test_withholding_changes_the_picture():
    rep = classification_report(3, withhold=("A3+2A1-big",))
    und = set(rep.labeling.with_status(UNDETERMINED))
    assert {"A3+2A1", "A5+A1"} <= und
    assert rep.ok  # no comparison once seeds are withheld


def test_strict_mode_raises_on_mismatch(monkeypatch):
    from tangent_bigness import hierarchy

    monkeypatch.setitem(hierarchy.EXPECTED, "degree4", {NOT_BIG: {"empty"}, UNDETERMINED: set()})
    assert not classification_report(4).ok
    with pytest.raises(ClassificationMismatch):
        classification_report(4, strict=True)


def test_conflict_reports_both_chains():
    dag = load_dag("degree4")
    seeds = [certified("A3(4)", BIG, "fake-big"), certified("A3+A1", NOT_BIG, "fake-nonbig")]
    with pytest.raises(Conflict) as info:
        propagate(dag, seeds)
    err = info.value
    assert err.node in ("A3(4)", "A3+A1")
    assert "fake-big" in err.big_chain[-1] and "fake-nonbig" in err.notbig_chain[-1]


def test_conflict_with_real_corpus():
    from tangent_bigness.hierarchy import gather_seeds

    seeds, _ = gather_seeds("degree4")
    with pytest.raises(Conflict):
        propagate(load_dag("degree4"), seeds + [external("A3(4)", BIG, "planted")])


def test_seed_errors():
    dag = load_dag("degree4")
    with pytest.raises(KeyError):
        propagate(dag, [certified("nowhere", BIG, "x")])
    with pytest.raises(ValueError):
        propagate(dag, [certified("A1", UNDETERMINED, "x")])


def test_rounds_and_empty_seeds():
    dag = load_dag("degree3")
    lab = propagate(dag, [])
    assert lab.rounds == 0 and set(lab.with_status(UNDETERMINED)) == set(dag.ids)
    lab = propagate(dag, [certified("empty", BIG, "x")])
    assert set(lab.with_status(BIG)) == set(dag.ids)
    # longest path from the root has 6 edges, so the frontier empties on round 7
    assert lab.rounds == 7


def test_dom_edges_move_facts_like_spec_edges():
    dag = load_dag("cross-degree")
    lab = propagate(dag, [certified("d3:D4", NOT_BIG, "x")])
    assert set(lab.with_status(NOT_BIG)) == {"d3:D4", "d2:3A1+D4", "d1:2D4", "d1:E6+2A1"}
    assert any(DOM in step for step in lab.chain("d1:2D4"))


def seed_lists(name):
    ids = load_dag(name).ids
    return st.lists(st.tuples(st.sampled_from(ids), st.sampled_from([BIG, NOT_BIG])), max_size=6)


@given(seed_lists("degree3"), seed_lists("degree3"))
@settings(max_examples=200, deadline=None)
def test_propagation_is_a_monotone_closure(s1, s2):
    dag = load_dag("degree3")
    a = [certified(n, s, f"seed{i}") for i, (n, s) in enumerate(s1)]
    b = a + [certified(n, s, f"more{i}") for i, (n, s) in enumerate(s2)]
    try:
        big = propagate(dag, b)
    except Conflict:
        assume(False)
    small = propagate(dag, a)
    # more seeds never lose facts
    for n in dag.ids:
        if small.status(n) != UNDETERMINED:
            assert big.status(n) == small.status(n)
    # closed under the rules
    for lab in (small, big):
        for u, v, _ in dag.edges():
            if lab.status(u) == BIG:
                assert lab.status(v) == BIG
            if lab.status(v) == NOT_BIG:
                assert lab.status(u) == NOT_BIG
        # every fact traces back to a seed
        for n in dag.ids:
            if lab.status(n) != UNDETERMINED:
                assert "seed" in lab.chain(n)[-1] or "more" in lab.chain(n)[-1]


def test_report_as_dict_is_json():
    rep = classification_report(3)
    d = json.loads(json.dumps(rep.as_dict()))
    assert d["ok"] and d["labels"]["E6"]["status"] == BIG


def test_documented_edges_and_seeds():
    assert ("2A1(9)", "3A1") in load_dag("degree4").spec_edges
    assert ("A3+2A1", "A5+A1") in load_dag("degree3").spec_edges
    lab = propagate(load_dag("degree4"), [certified("2A1(9)", BIG, "a"), certified("A3(4)", NOT_BIG, "b")])
    assert (len(lab.with_status(BIG)), len(lab.with_status(NOT_BIG)), len(lab.with_status(UNDETERMINED))) == (11, 5, 0)

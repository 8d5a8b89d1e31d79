"""Specialization hierarchies and propagation of (non-)bigness facts.

Rules, for an edge ``a -> b``:

* specialization (``a`` general, ``b`` special): Big(a) gives Big(b), NotBig(b) gives NotBig(a);
* domination (``a`` a blow-up of ``b``): Big(a) gives Big(b), NotBig(b) gives NotBig(a).

Both edge kinds move the facts the same way, so the labelling is the
least fixpoint of "Big flows forward, NotBig flows backward".
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from importlib import resources

BIG = "Big"
NOT_BIG = "NotBig"
UNDETERMINED = "Undetermined"

SPEC = "specialization"
DOM = "domination"


class Conflict(RuntimeError):
    """A node was derived both Big and NotBig."""

    def __init__(self, node, big_chain, notbig_chain):
        self.node = node
        self.big_chain = big_chain
        self.notbig_chain = notbig_chain
        msg = (f"conflict at {node}:\n  Big    <- " + " <- ".join(big_chain)
               + "\n  NotBig <- " + " <- ".join(notbig_chain))
        super().__init__(msg)


class ClassificationMismatch(AssertionError):
    pass


@dataclass(frozen=True)
class DagNode:
    id: str
    degree: int
    minus2: int
    lines: int | None  # None where no line count is recorded


@dataclass(frozen=True)
class SpecDag:
    name: str
    nodes: tuple[DagNode, ...]
    spec_edges: tuple[tuple[str, str], ...] = ()
    dom_edges: tuple[tuple[str, str], ...] = ()

    def node(self, nid: str) -> DagNode:
        for n in self.nodes:
            if n.id == nid:
                return n
        raise KeyError(f"{self.name}: no node {nid!r}")

    @property
    def ids(self) -> list[str]:
        return [n.id for n in self.nodes]

    def edges(self):
        for a, b in self.spec_edges:
            yield a, b, SPEC
        for a, b in self.dom_edges:
            yield a, b, DOM

    def parents(self, nid: str) -> list[str]:
        return [a for a, b, _ in self.edges() if b == nid]

    def children(self, nid: str) -> list[str]:
        return [b for a, b, _ in self.edges() if a == nid]

    def check(self) -> None:
        ids = set(self.ids)
        if len(ids) != len(self.nodes):
            raise ValueError(f"{self.name}: duplicate node ids")
        for a, b, kind in self.edges():
            if a not in ids or b not in ids:
                raise ValueError(f"{self.name}: edge {a} -> {b} uses an unknown node")
            if kind == SPEC and self.node(a).degree != self.node(b).degree:
                raise ValueError(f"{self.name}: specialization {a} -> {b} changes degree")
            if kind == DOM and self.node(a).degree >= self.node(b).degree:
                raise ValueError(f"{self.name}: blow-up {a} must have smaller degree than {b}")
        # Kahn's algorithm for acyclicity
        indeg = {n: 0 for n in ids}
        for _, b, _ in self.edges():
            indeg[b] += 1
        queue = [n for n in self.ids if indeg[n] == 0]
        seen = 0
        while queue:
            v = queue.pop()
            seen += 1
            for w in self.children(v):
                indeg[w] -= 1
                if indeg[w] == 0:
                    queue.append(w)
        if seen != len(ids):
            raise ValueError(f"{self.name}: graph has a cycle")

    def to_dict(self) -> dict:
        return {"name": self.name,
                "nodes": [{"id": n.id, "degree": n.degree, "minus2": n.minus2, "lines": n.lines}
                          for n in self.nodes],
                "spec_edges": [list(e) for e in self.spec_edges],
                "dom_edges": [list(e) for e in self.dom_edges]}

    @classmethod
    def from_dict(cls, data: dict) -> SpecDag:
        nodes = tuple(DagNode(str(n["id"]), int(n["degree"]), int(n["minus2"]),
                              None if n.get("lines") is None else int(n["lines"]))
                      for n in data["nodes"])
        dag = cls(data.get("name", ""), nodes,
                  tuple((a, b) for a, b in data.get("spec_edges", [])),
                  tuple((a, b) for a, b in data.get("dom_edges", [])))
        dag.check()
        return dag


def dag_checksum(data: dict) -> str:
    body = {k: data[k] for k in ("nodes", "spec_edges", "dom_edges") if k in data}
    blob = json.dumps(body, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


DAG_NAMES = ("degree4", "degree3", "cross-degree")


def load_dag(name: str) -> SpecDag:
    """Built-in hierarchy; the stored checksum guards against accidental edits."""
    if name not in DAG_NAMES:
        raise KeyError(f"unknown hierarchy {name!r}; choose from {', '.join(DAG_NAMES)}")
    text = resources.files("tangent_bigness").joinpath(f"corpus/dags/{name}.json").read_text("utf-8")
    data = json.loads(text)
    if data.get("checksum") != dag_checksum(data):
        raise ValueError(f"hierarchy {name} fails its checksum")
    return SpecDag.from_dict(data)


# facts ------------------------------------------------------------------

@dataclass(frozen=True)
class Provenance:
    kind: str  # "certificate" | "external" | "propagated"
    ref: str
    rule: str = ""
    source: str = ""


@dataclass(frozen=True)
class Fact:
    node: str
    status: str
    provenance: Provenance

    def describe(self) -> str:
        p = self.provenance
        if p.kind == "propagated":
            return f"{p.rule} from {p.source}"
        return f"{p.kind}: {p.ref}"


def certified(node: str, status: str, ref: str) -> Fact:
    return Fact(node, status, Provenance("certificate", ref))


def external(node: str, status: str, ref: str) -> Fact:
    return Fact(node, status, Provenance("external", ref))


@dataclass
class Labeling:
    dag: SpecDag
    facts: dict[str, Fact] = field(default_factory=dict)
    rounds: int = 0

    def status(self, nid: str) -> str:
        f = self.facts.get(nid)
        return f.status if f else UNDETERMINED

    def with_status(self, status: str) -> list[str]:
        return [n for n in self.dag.ids if self.status(n) == status]

    def chain(self, nid: str) -> list[str]:
        out = []
        f = self.facts.get(nid)
        while f is not None:
            out.append(f"{f.node} [{f.describe()}]")
            if f.provenance.kind != "propagated":
                break
            f = self.facts.get(f.provenance.source)
        return out

    def as_dict(self) -> dict:
        return {n: {"status": self.status(n), "provenance": self.chain(n)} for n in self.dag.ids}


def _closure(dag: SpecDag, seeds: list[Fact], status: str) -> tuple[dict[str, Fact], int]:
    forward = status == BIG
    facts: dict[str, Fact] = {}
    for s in seeds:
        if s.status == status and s.node not in facts:
            facts[s.node] = s
    frontier = list(facts)
    rounds = 0
    while frontier:
        rounds += 1
        nxt = []
        for v in frontier:
            for a, b, kind in dag.edges():
                src, dst = (a, b) if forward else (b, a)
                if src != v or dst in facts:
                    continue
                rule = f"{status} {'along' if forward else 'against'} {kind} edge {a} -> {b}"
                facts[dst] = Fact(dst, status, Provenance("propagated", "", rule, v))
                nxt.append(dst)
        frontier = nxt
    return facts, rounds


def propagate(dag: SpecDag, seeds: list[Fact]) -> Labeling:
    """Least fixpoint of the propagation rules; raises :class:`Conflict` on contradictions."""
    ids = set(dag.ids)
    for s in seeds:
        if s.node not in ids:
            raise KeyError(f"seed for unknown node {s.node!r}")
        if s.status not in (BIG, NOT_BIG):
            raise ValueError(f"seed status must be {BIG} or {NOT_BIG}")
    big, r1 = _closure(dag, seeds, BIG)
    notbig, r2 = _closure(dag, seeds, NOT_BIG)
    for n in dag.ids:
        if n in big and n in notbig:
            lb = Labeling(dag, big)
            ln = Labeling(dag, notbig)
            raise Conflict(n, lb.chain(n), ln.chain(n))
    facts = {**big, **notbig}
    return Labeling(dag, {n: facts[n] for n in dag.ids if n in facts}, max(r1, r2))


# classification ---------------------------------------------------------

# the statuses the classification asserts for each hierarchy
EXPECTED = {
    "degree4": {NOT_BIG: {"empty", "A1", "2A1(8)", "A2", "A3(4)"}, UNDETERMINED: set()},
    "degree3": {BIG: {"A3+2A1", "A5+A1", "E6", "3A2"}, UNDETERMINED: {"A5", "A4+A1", "D5", "2A2+A1"}},
    "cross-degree": {BIG: set(), UNDETERMINED: set()},
}


def expected_status(dag: SpecDag, nid: str) -> str:
    exp = EXPECTED[dag.name]
    for status in (BIG, NOT_BIG, UNDETERMINED):
        if nid in exp.get(status, ()):
            return status
    # whatever is not listed takes the remaining status
    return BIG if NOT_BIG in exp else NOT_BIG


@dataclass
class ClassificationReport:
    dag: SpecDag
    labeling: Labeling
    seeds: list[Fact]
    verdicts: dict
    discrepancies: list[str]

    @property
    def ok(self) -> bool:
        return not self.discrepancies

    def as_dict(self) -> dict:
        return {"hierarchy": self.dag.name,
                "ok": self.ok,
                "certificates": {k: {"ok": v.ok, "reason": v.reason} for k, v in self.verdicts.items()},
                "labels": self.labeling.as_dict(),
                "discrepancies": self.discrepancies}


def gather_seeds(name: str, corpus=None, withhold=()) -> tuple[list[Fact], dict]:
    """Verify every corpus certificate that lands on ``name`` and turn the accepted ones into seeds."""
    from .certify import NONBIG, certificate_from_dict, verify
    from .corpus import EXTERNAL_FACTS, FIXTURE_NODES, certificate_paths, load_surface, read_json

    seeds, verdicts = [], {}
    for path in certificate_paths(corpus):
        data = read_json(path)
        cname = data.get("name", path.stem)
        nodes = [n for dag, n in FIXTURE_NODES.get(data["surface"], []) if dag == name]
        if not nodes or cname in withhold:
            continue
        S = load_surface(data["surface"], corpus)
        v = verify(S, certificate_from_dict(S, data))
        verdicts[cname] = v
        if v.ok:
            status = NOT_BIG if data["kind"] == NONBIG else BIG
            seeds += [certified(n, status, cname) for n in nodes]
    for node, status, ref in EXTERNAL_FACTS.get(name, []):
        if ref not in withhold and node not in withhold:
            seeds.append(external(node, status, ref))
    return seeds, verdicts


def classification_report(degree, corpus=None, withhold=(), strict: bool = False) -> ClassificationReport:
    """Verify the seed certificates, propagate, and compare with the classification statements.

    ``degree`` is 3, 4 or ``"cross"``.  Withholding seeds changes what is
    derivable, so comparison against the statements is skipped then.
    """
    name = {3: "degree3", 4: "degree4", "3": "degree3", "4": "degree4",
            "cross": "cross-degree"}.get(degree, degree)
    dag = load_dag(name)
    seeds, verdicts = gather_seeds(name, corpus, withhold)
    labeling = propagate(dag, seeds)
    problems = [f"certificate {k} rejected: {v.reason}" for k, v in verdicts.items() if not v.ok]
    if not withhold:
        for n in dag.ids:
            want, got = expected_status(dag, n), labeling.status(n)
            if want != got:
                problems.append(f"{n}: expected {want}, derived {got}")
    report = ClassificationReport(dag, labeling, seeds, verdicts, problems)
    if strict and problems:
        raise ClassificationMismatch("; ".join(problems))
    return report

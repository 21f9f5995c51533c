"""Independent checkers, random instance generation and exhaustive enumeration.

Randomness comes from numpy's PCG64 bit generator.  A trial's generator is
seeded with ``SeedSequence([seed, trial])`` so any single trial can be
replayed without running the ones before it.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Callable, Iterable, Iterator, Sequence

import networkx as nx
import numpy as np

from .cardinality import ALEPH0, CONTINUUM, ONE, Cardinality, total
from .chains import verify_chain_theorems
from .errors import NotAPartition
from .partition import (MinfeasiblePartition, fiber_classes, set_partitions, under_set,
                        validate_minfeasible)
from .poset import PrimeNode, SpecDiagram, gap_witness_violations, minimal_nodes
from .precompletion import Mode, QuotientOrder, fiber_report, quotient_order, s_sets, spec_A

PRNG = "numpy PCG64, per-trial SeedSequence([seed, trial])"
_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class GenParams:
    seed: int
    max_nodes: int = 10
    max_card: Cardinality = CONTINUUM
    edge_density: float = 0.35
    partition_attempts: int = 32
    repair: bool = True

    def __post_init__(self):
        if self.max_nodes < 2:
            raise ValueError("max_nodes must be at least 2")
        if not 0 <= self.edge_density <= 1:
            raise ValueError("edge_density must lie in [0, 1]")
        if self.partition_attempts < 1:
            raise ValueError("partition_attempts must be positive")

    def rng(self, stream: int = 0) -> np.random.Generator:
        return np.random.Generator(np.random.PCG64(np.random.SeedSequence([self.seed & _MASK64, stream])))


def trial_seed(seed: int, trial: int) -> int:
    ss = np.random.SeedSequence([seed & _MASK64, trial])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


# -- random diagrams -----------------------------------------------------------


def _box_card(rng, cap: Cardinality) -> Cardinality:
    pool = [Cardinality.finite(2), Cardinality.finite(3), ALEPH0, CONTINUUM]
    pool = [c for c in pool if c <= cap]
    if not pool:
        return ONE
    return pool[int(rng.integers(len(pool)))]


class _Draft:
    """Mutable graded DAG used while generating."""

    def __init__(self):
        self.level: dict[str, int] = {}
        self.card: dict[str, Cardinality] = {}
        self.edges: set[tuple[str, str]] = set()

    def add(self, level: int, card: Cardinality = ONE) -> str:
        name = f"v{len(self.level):02d}"
        self.level[name] = level
        self.card[name] = card
        return name

    def diagram(self) -> SpecDiagram:
        nodes = [PrimeNode(x, x, c) for x, c in self.card.items()]
        return SpecDiagram.build(nodes, self.edges, "M")


def _draw(gp: GenParams, rng) -> _Draft:
    n = int(rng.integers(2, gp.max_nodes + 1))
    top = min(3, n - 1) if rng.random() < 0.5 else int(rng.integers(1, min(3, n - 1) + 1))
    sizes = np.ones(top, dtype=int)
    for _ in range(n - 1 - top):
        sizes[int(rng.integers(top))] += 1
    dr = _Draft()
    levels = [[dr.add(k) for _ in range(sizes[k])] for k in range(top)]
    dr.level["M"] = top
    dr.card["M"] = ONE
    levels.append(["M"])
    for k in range(top):
        lower, upper = levels[k], levels[k + 1]
        for x in lower:
            dr.edges.add((x, upper[int(rng.integers(len(upper)))]))
            for y in upper:
                if rng.random() < gp.edge_density:
                    dr.edges.add((x, y))
        for y in upper:
            if not any((x, y) in dr.edges for x in lower):
                dr.edges.add((lower[int(rng.integers(len(lower)))], y))
    for k in range(1, top):
        for x in levels[k]:
            if rng.random() < 0.4:
                dr.card[x] = _box_card(rng, gp.max_card)
    return dr


def _repair(dr: _Draft, gp: GenParams) -> None:
    """Give every gap a witness box, converting a singleton or adding a node."""
    if not gp.max_card.is_infinite:
        return
    inf = min(CONTINUUM, gp.max_card)
    while True:
        d = dr.diagram()
        bad = gap_witness_violations(d)
        if not bad:
            return
        a, c = bad[0]
        under_c_only = [v for v in d.children(c)
                        if d.parents(v) == [c] and d.less(a, v) and v not in minimal_nodes(d)]
        if under_c_only:
            dr.card[under_c_only[0]] = inf
            continue
        # a saturated chain a < ... < c; hang a new box over its element two below c
        chain = [a]
        while not d.cover_matrix[d.idx(chain[-1]), d.idx(c)]:
            chain.append(next(y for y in d.parents(chain[-1]) if d.less(y, c)))
        b = chain[-2] if len(chain) >= 2 else a
        v = dr.add(dr.level[c] - 1, inf)
        dr.edges |= {(b, v), (v, c)}


def random_diagram(gp: GenParams) -> SpecDiagram:
    """A valid diagram with at most ``max_nodes`` nodes, deterministic in the seed.

    Nodes sit on at most three levels below M and covers join consecutive
    levels, so the result is catenary; with ``repair`` every gap also gets a
    witness box.  About three draws in ten add a level-skipping edge to
    produce a non-catenary instance when there are levels to skip.
    """
    rng = gp.rng(0)
    if gp.max_nodes == 2:
        return SpecDiagram.build([PrimeNode("v00"), PrimeNode("M")], [("v00", "M")], "M")
    for _ in range(64):
        dr = _draw(gp, rng)
        if gp.repair:
            _repair(dr, gp)
        if rng.random() < 0.3:
            d = dr.diagram()
            pairs = [(x, y) for x, k in dr.level.items() if k == 0
                     for y, h in dr.level.items() if h >= 2 and y != "M" and not d.le(x, y)]
            if pairs:
                dr.edges.add(pairs[int(rng.integers(len(pairs)))])
            else:
                # a fresh minimal node under some level-1 node a and some y two levels up, y not over a
                pairs = [(a, y) for a, k in dr.level.items() if k == 1
                         for y, h in dr.level.items() if h >= 2 and y != "M" and not d.le(a, y)]
                if pairs:
                    a, y = pairs[int(rng.integers(len(pairs)))]
                    x = dr.add(0)
                    dr.edges |= {(x, a), (x, y)}
        if len(dr.level) <= gp.max_nodes:
            return dr.diagram()
    return SpecDiagram.build([PrimeNode("v00"), PrimeNode("M")], [("v00", "M")], "M")


def _components(d: SpecDiagram, C: Sequence[str]) -> list[list[str]]:
    """Group C so that members sharing a minimal node below land together."""
    mins = sorted(minimal_nodes(d))
    parent = {x: x for x in C}

    def find(x):
        while parent[x] != x:
            x = parent[x]
        return x

    for q in mins:
        over = [x for x in C if d.le(q, x)]
        for x in over[1:]:
            parent[find(x)] = find(over[0])
    groups: dict[str, list[str]] = {}
    for x in C:
        groups.setdefault(find(x), []).append(x)
    return list(groups.values())


def random_minfeasible(d: SpecDiagram, gp: GenParams) -> MinfeasiblePartition | None:
    """Randomized search for a minfeasible partition; None if every attempt fails."""
    rng = gp.rng(1)
    mins = sorted(minimal_nodes(d))
    cands = [x for x in d.ids if x != d.max_id and not d.node(x).is_box]
    for _ in range(gp.partition_attempts):
        chosen: list[str] = []
        for q in rng.permutation(mins):
            q = str(q)
            if any(d.le(q, x) for x in chosen):
                continue
            ups = [x for x in cands if d.le(q, x)
                   and not any(d.le(x, y) or d.le(y, x) for y in chosen)]
            if not ups:
                break
            pick = q if q in ups and rng.random() < 0.5 else ups[int(rng.integers(len(ups)))]
            chosen.append(pick)
        if not chosen:
            continue
        comps = _components(d, chosen)
        k = len(comps) if rng.random() < 0.5 else int(rng.integers(1, len(comps) + 1))
        labels = rng.integers(k, size=len(comps))
        groups: dict[int, list[str]] = {}
        for lab, comp in zip(labels.tolist(), comps):
            groups.setdefault(lab, []).extend(comp)
        subs = [sorted(g) for _, g in sorted(groups.items())]
        p = MinfeasiblePartition.from_subcollections(subs)
        if validate_minfeasible(d, p).ok:
            return p
    return None


# -- brute-force quotient --------------------------------------------------------


@dataclass(frozen=True)
class OrderRelation:
    """Relation on class indices: (a, b) present when class a <= class b."""
    classes: tuple[frozenset[str], ...]
    pairs: frozenset[tuple[int, int]]
    is_antisymmetric: bool
    is_transitive: bool


def _downsets(d: SpecDiagram) -> dict[str, set[str]]:
    below: dict[str, set[str]] = {x: set() for x in d.ids}
    for a, b in d.covers:
        below[b].add(a)
    memo: dict[str, set[str]] = {}

    def down(x):
        if x not in memo:
            acc = {x}
            for y in below[x]:
                acc |= down(y)
            memo[x] = acc
        return memo[x]

    return {x: down(x) for x in d.ids}


def brute_quotient(d: SpecDiagram, classes: Iterable[Iterable[str]]) -> OrderRelation:
    """[P2] <= [P1] iff something contained in a member of [P1] lies in [P2].

    Written with plain sets and a recursive down-set walk so that it shares
    nothing with the matrix code it is compared against.
    """
    classes = tuple(frozenset(c) for c in classes)
    owner: dict[str, int] = {}
    for k, c in enumerate(classes):
        if not c:
            raise NotAPartition(f"class {k} is empty")
        for x in c:
            if x not in d:
                raise NotAPartition(f"class {k} names unknown node {x!r}")
            if x in owner:
                raise NotAPartition(f"{x} lies in classes {owner[x]} and {k}")
            owner[x] = k
    if len(owner) != len(d):
        raise NotAPartition("some nodes lie in no class")
    down = _downsets(d)
    pairs = set()
    for hi, c in enumerate(classes):
        for P1 in c:
            for x in down[P1]:
                pairs.add((owner[x], hi))
    antisym = all(a == b or (b, a) not in pairs for a, b in pairs)
    trans = all((a, c) in pairs for a, b in pairs for b2, c in pairs if b == b2)
    return OrderRelation(classes, frozenset(pairs), antisym, trans)


# -- aggregated property check -----------------------------------------------------


@dataclass
class PropertyReport:
    ok: bool = True
    failures: list = field(default_factory=list)
    chain_skips: list = field(default_factory=list)
    checks: int = 0

    @property
    def counterexample(self):
        return self.failures[0] if self.failures else None

    def fail(self, name: str, witness) -> None:
        self.ok = False
        self.failures.append((name, witness))

    def expect(self, cond: bool, name: str, witness=None) -> None:
        self.checks += 1
        if not cond:
            self.fail(name, witness)


def check_all(d: SpecDiagram, p: MinfeasiblePartition,
              modes: Sequence[Mode | str] = (Mode.EXACT, Mode.COUNTABLE),
              quotient: Callable[[SpecDiagram, Sequence], QuotientOrder] = quotient_order) -> PropertyReport:
    """Run every order-theoretic invariant on one instance; failures are data."""
    rep = PropertyReport()
    classes = fiber_classes(d, p)
    q = quotient(d, classes)
    b = brute_quotient(d, classes)
    rep.expect(q.pairs() == b.pairs, "quotient_order = brute_quotient",
               sorted(q.pairs() ^ b.pairs))
    rep.expect(q.is_antisymmetric == b.is_antisymmetric, "antisymmetry flags agree",
               (q.is_antisymmetric, b.is_antisymmetric))
    rep.expect(b.is_antisymmetric and b.is_transitive, "fiber quotient is a partial order")

    for i in range(1, p.m + 1):
        try:
            fiber_report(d, p, i)
            rep.expect(True, "fiber maximal elements are C_i")
        except AssertionError as exc:
            rep.fail("fiber maximal elements are C_i", str(exc))

    subsets = [X for r in range(1, p.m + 1) for X in combinations(range(1, p.m + 1), r)]
    for mode in map(Mode, modes):
        spec = spec_A(d, p, mode, force=True)
        rep.expect(not spec.base.problems(), f"{mode.value}: Spec(A) is a valid diagram",
                   [str(e) for e in spec.base.problems()])
        rep.expect(minimal_nodes(spec.base) == frozenset(spec.min_labels),
                   f"{mode.value}: minimal nodes of Spec(A) are q_1..q_m",
                   sorted(minimal_nodes(spec.base)))
        for i in range(1, p.m + 1):
            rep.expect(spec.provenance[spec.q(i)] == under_set(d, p, i),
                       f"{mode.value}: fiber of q_i is the set under C_i", i)
        for X in subsets:
            r = s_sets(d, p, X, spec)
            rep.expect(r.image_T == r.s_A, f"{mode.value}: S_T(X) -> S_A(X) surjective",
                       (X, sorted(r.image_T), sorted(r.s_A)))
            if mode is Mode.EXACT:
                prov = set().union(*(spec.provenance[a] for a in r.s_A)) if r.s_A else set()
                same_count = all(total(d.card(t) for t in spec.provenance[a]) == spec.base.card(a)
                                 for a in r.s_A)
                rep.expect(prov == set(r.s_T) and same_count,
                           "exact: S_T(X) -> S_A(X) bijective", (X, sorted(prov), sorted(r.s_T)))
            if len(X) >= 2:
                t, a = r.s1_sizes(d, spec)
                rep.expect(a <= t, f"{mode.value}: |S1_A(X)| <= |S1_T(X)|", (X, str(a), str(t)))
                rep.expect(a == t, f"{mode.value}: |S1_A(X)| = |S1_T(X)|", (X, str(a), str(t)))
        tr = verify_chain_theorems(d, p, spec)
        if not tr.in_model:
            rep.chain_skips.append(tr.skipped_reason)
        for name, (ok, wit) in tr.checks.items():
            rep.expect(ok, f"{mode.value}: {name}", wit)
    return rep


def drop_one_pair(d: SpecDiagram, classes) -> QuotientOrder:
    """A deliberately broken quotient_order (one strict pair removed), for fault injection."""
    good = quotient_order(d, classes)
    rel = good.leq.copy()
    strict = np.argwhere(rel & ~np.eye(len(rel), dtype=bool))
    if len(strict):
        a, b = strict[-1]
        rel[a, b] = False
    return QuotientOrder(good.classes, rel, good.is_antisymmetric, good.is_transitive)


# -- isomorphism -------------------------------------------------------------------


def _graph(d: SpecDiagram, bounds=frozenset()) -> nx.DiGraph:
    g = nx.DiGraph()
    for nd in d.nodes:
        g.add_node(nd.id, card=nd.card, upper=nd.id in bounds, top=nd.id == d.max_id)
    g.add_edges_from(d.covers)
    return g


def order_isomorphic(a: SpecDiagram, b: SpecDiagram, bounds_a=frozenset(), bounds_b=frozenset()) -> bool:
    """Isomorphism of Hasse diagrams preserving cardinalities and upper-bound tags."""
    match = lambda x, y: x == y  # noqa: E731
    return nx.is_isomorphic(_graph(a, bounds_a), _graph(b, bounds_b), node_match=match)


# -- exhaustive enumeration ----------------------------------------------------------


def _posets(k: int) -> list[np.ndarray]:
    """All posets on k points up to isomorphism, as strict-order matrices."""
    if k == 0:
        return [np.zeros((0, 0), dtype=bool)]
    slots = list(combinations(range(k), 2))
    perms = [np.array(pm) for pm in permutations(range(k))]
    seen, out = set(), []
    for bits in range(1 << len(slots)):
        lt = np.zeros((k, k), dtype=bool)
        for s, (i, j) in enumerate(slots):
            if bits >> s & 1:
                lt[i, j] = True
        if ((lt.astype(int) @ lt.astype(int) > 0) & ~lt).any():
            continue
        key = min(lt[np.ix_(pm, pm)].tobytes() for pm in perms)
        if key not in seen:
            seen.add(key)
            out.append(lt)
    return out


def enumerate_diagrams(upto: int = 6, cards: Sequence[Cardinality] = (ONE, CONTINUUM)) -> Iterator[SpecDiagram]:
    """Every diagram with at most ``upto`` nodes: a poset plus a new maximum,
    minimal nodes singletons, other nodes carrying each of ``cards``.
    Card assignments equal up to an automorphism are produced once."""
    for k in range(1, upto):
        perms = [np.array(pm) for pm in permutations(range(k))]
        for lt in _posets(k):
            has_below = lt.any(axis=0)
            free = [j for j in range(k) if has_below[j]]
            autos = [pm for pm in perms if (lt[np.ix_(pm, pm)] == lt).all()]
            seen = set()
            for choice in product(range(len(cards)), repeat=len(free)):
                vec = [0] * k
                for j, c in zip(free, choice):
                    vec[j] = c
                key = min(tuple(vec[i] for i in pm) for pm in autos)
                if key in seen:
                    continue
                seen.add(key)
                nodes = [PrimeNode(f"v{j}", f"v{j}", cards[vec[j]]) for j in range(k)]
                nodes.append(PrimeNode("M"))
                edges = [(f"v{i}", f"v{j}") for i, j in zip(*np.nonzero(lt))]
                edges += [(f"v{j}", "M") for j in range(k)]
                yield SpecDiagram.build(nodes, edges, "M")


def enumerate_minfeasible(d: SpecDiagram) -> Iterator[MinfeasiblePartition]:
    """Every minfeasible partition of ``d``."""
    cands = [x for x in d.ids if x != d.max_id and not d.node(x).is_box]
    for r in range(1, len(cands) + 1):
        for C in combinations(cands, r):
            if any(d.le(a, b) or d.le(b, a) for a, b in combinations(C, 2)):
                continue
            for blocks in set_partitions(list(C)):
                p = MinfeasiblePartition.from_subcollections(sorted(sorted(b) for b in blocks))
                if validate_minfeasible(d, p).ok:
                    yield p


# -- runners ---------------------------------------------------------------------------


@dataclass
class OracleSummary:
    trials: int = 0
    instances: int = 0
    passed: int = 0
    no_partition: int = 0
    chain_checked: int = 0
    chain_skipped: int = 0
    skip_reasons: dict = field(default_factory=dict)
    counterexamples: list = field(default_factory=list)
    prng: str = PRNG

    @property
    def ok(self) -> bool:
        return not self.counterexamples

    def absorb(self, other: OracleSummary) -> None:
        for f in ("trials", "instances", "passed", "no_partition", "chain_checked", "chain_skipped"):
            setattr(self, f, getattr(self, f) + getattr(other, f))
        for k, v in other.skip_reasons.items():
            self.skip_reasons[k] = self.skip_reasons.get(k, 0) + v
        self.counterexamples.extend(other.counterexamples)

    def record(self, d, p, rep: PropertyReport, tag) -> None:
        self.instances += 1
        if rep.chain_skips:
            self.chain_skipped += 1
            kind = rep.chain_skips[0].split(":")[0].split(" for ")[0]
            self.skip_reasons[kind] = self.skip_reasons.get(kind, 0) + 1
        else:
            self.chain_checked += 1
        if rep.ok:
            self.passed += 1
        else:
            self.counterexamples.append({"tag": tag, "diagram": d, "partition": p,
                                         "failure": rep.counterexample})

    def to_json(self) -> dict:
        return {
            "prng": self.prng, "trials": self.trials, "instances": self.instances,
            "passed": self.passed, "no_partition": self.no_partition,
            "chain_checked": self.chain_checked, "chain_skipped": self.chain_skipped,
            "skip_reasons": dict(sorted(self.skip_reasons.items())),
            "counterexamples": [{"tag": c["tag"], "failure": repr(c["failure"])}
                                for c in self.counterexamples],
        }

    def summary(self) -> str:
        lines = [f"prng: {self.prng}",
                 f"trials: {self.trials}  instances: {self.instances}  passed: {self.passed}",
                 f"no partition found: {self.no_partition}",
                 f"chain theorems checked: {self.chain_checked}  skipped (out of model): {self.chain_skipped}"]
        for k, v in sorted(self.skip_reasons.items()):
            lines.append(f"  {k}: {v}")
        lines.append(f"counterexamples: {len(self.counterexamples)}")
        for c in self.counterexamples[:5]:
            lines.append(f"  {c['tag']}: {c['failure']}")
        return "\n".join(lines)


def run_trial(seed: int, trial: int, max_nodes: int = 10) -> OracleSummary:
    out = OracleSummary(trials=1)
    gp = GenParams(trial_seed(seed, trial), max_nodes=max_nodes)
    d = random_diagram(gp)
    p = random_minfeasible(d, gp)
    if p is None:
        out.no_partition += 1
        return out
    out.record(d, p, check_all(d, p), {"seed": seed, "trial": trial})
    return out


def _trial_chunk(args) -> OracleSummary:
    seed, lo, hi, max_nodes = args
    out = OracleSummary()
    for t in range(lo, hi):
        out.absorb(run_trial(seed, t, max_nodes))
    return out


def run_trials(seed: int, trials: int, max_nodes: int = 10, workers: int = 1,
               persist_dir: str | None = None) -> OracleSummary:
    """Seeded random trials; results do not depend on ``workers``."""
    out = OracleSummary()
    if trials > 0:
        step = max(1, -(-trials // max(1, workers * 4)))
        chunks = [(seed, lo, min(trials, lo + step), max_nodes) for lo in range(0, trials, step)]
        if workers > 1:
            with ProcessPoolExecutor(workers) as ex:
                parts = list(ex.map(_trial_chunk, chunks))
        else:
            parts = [_trial_chunk(c) for c in chunks]
        for part in parts:
            out.absorb(part)
        out.counterexamples.sort(key=lambda c: c["tag"]["trial"])
    if persist_dir:
        persist(out, persist_dir)
    return out


def run_exhaustive(upto: int = 6, persist_dir: str | None = None) -> OracleSummary:
    out = OracleSummary()
    for n, d in enumerate(enumerate_diagrams(upto)):
        for k, p in enumerate(enumerate_minfeasible(d)):
            out.record(d, p, check_all(d, p), {"diagram": n, "partition": k})
    if persist_dir:
        persist(out, persist_dir)
    return out


def persist(summary: OracleSummary, directory: str) -> list[str]:
    """Write each counterexample as an instance document plus its DOT rendering."""
    from .io import InstanceDocument, render_dot, serialize

    os.makedirs(directory, exist_ok=True)
    paths = []
    for k, c in enumerate(summary.counterexamples):
        base = os.path.join(directory, f"counterexample_{k:03d}")
        doc = InstanceDocument(c["diagram"], c["partition"],
                               metadata={"tag": c["tag"], "failure": repr(c["failure"]),
                                         "prng": summary.prng})
        with open(base + ".spec", "w", encoding="utf-8") as fh:
            fh.write(serialize(doc))
        with open(base + ".dot", "w", encoding="utf-8") as fh:
            fh.write(render_dot(c["diagram"], f"counterexample_{k:03d}"))
        paths.append(base + ".spec")
    with open(os.path.join(directory, "summary.json"), "w", encoding="utf-8") as fh:
        json.dump(summary.to_json(), fh, indent=2, sort_keys=True)
    return paths

"""Predicted spectrum of a precompletion: the quotient of Spec(T) by the
collapse relation, its S-sets and formal-fiber reports."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Sequence

import numpy as np

from .cardinality import ALEPH0, ONE, Cardinality, total
from .errors import EmptyX, NotAPartition, NotConstructive
from .partition import (MinfeasiblePartition, fiber_classes, over_set, require_valid,
                        under_set)
from .poset import (PrimeNode, SpecDiagram, coalesce_map, maximal_elements, minimal_elements,
                    minimal_nodes, minimal_upper_bounds)
from .ring_conditions import Characteristic, Verdict, check_construction_applicability


class Mode(str, enum.Enum):
    EXACT = "exact"
    COUNTABLE = "countable"


@dataclass(frozen=True)
class QuotientOrder:
    classes: tuple[frozenset[str], ...]
    leq: np.ndarray = field(compare=False)
    is_antisymmetric: bool
    is_transitive: bool

    @property
    def is_partial_order(self) -> bool:
        return self.is_antisymmetric and self.is_transitive

    def pairs(self) -> frozenset[tuple[int, int]]:
        return frozenset(zip(*map(lambda a: a.tolist(), np.nonzero(self.leq))))

    def le(self, a: int, b: int) -> bool:
        return bool(self.leq[a, b])


def check_classes(d: SpecDiagram, classes: Sequence[Iterable[str]]) -> tuple[frozenset[str], ...]:
    classes = tuple(frozenset(c) for c in classes)
    seen: dict[str, int] = {}
    for k, c in enumerate(classes):
        if not c:
            raise NotAPartition(f"class {k} is empty")
        for x in c:
            if x not in d:
                raise NotAPartition(f"class {k} names unknown node {x!r}")
            if x in seen:
                raise NotAPartition(f"{x} lies in classes {seen[x]} and {k}")
            seen[x] = k
    missing = sorted(set(d.ids) - set(seen))
    if missing:
        raise NotAPartition(f"nodes in no class: {', '.join(missing)}")
    return classes


def quotient_order(d: SpecDiagram, classes: Sequence[Iterable[str]]) -> QuotientOrder:
    """[a] <= [b] iff some member of [a] lies below some member of [b]."""
    classes = check_classes(d, classes)
    member = np.zeros((len(classes), len(d)), dtype=np.int64)
    for k, c in enumerate(classes):
        member[k, [d.idx(x) for x in c]] = 1
    rel = (member @ d.leq.astype(np.int64) @ member.T) > 0
    off = rel & rel.T
    np.fill_diagonal(off, False)
    two_step = (rel.astype(np.int64) @ rel.astype(np.int64)) > 0
    rel.flags.writeable = False
    return QuotientOrder(classes, rel, not off.any(), not (two_step & ~rel).any())


@dataclass(frozen=True)
class PrecompletionDiagram:
    base: SpecDiagram
    mode: Mode
    provenance: dict = field(compare=False)
    min_labels: tuple[str, ...]
    upper_bounds: frozenset[str] = frozenset()
    verdict: Verdict | None = None
    forced: bool = False

    @property
    def m(self) -> int:
        return len(self.min_labels)

    def q(self, i: int) -> str:
        return self.min_labels[i - 1]

    def fiber_map(self) -> dict[str, str]:
        """Spec(T) node id -> Spec(A) node id."""
        return {t: a for a, ts in self.provenance.items() for t in ts}

    def fiber_of(self, t_id: str) -> str:
        return self.fiber_map()[t_id]

    def above_all(self, X: Iterable[int]) -> frozenset[str]:
        mask = np.ones(len(self.base), dtype=bool)
        for i in X:
            mask &= self.base.lt[self.base.idx(self.q(i))]
        return self.base.ids_of(mask)

    def s1(self, X: Iterable[int]) -> frozenset[str]:
        return minimal_elements(self.base, self.above_all(X))

    def size_note(self) -> str:
        if self.mode is Mode.EXACT:
            return "exact: primes outside the minimal fibers correspond one-to-one with Spec(T)"
        return "countable: |A| = |T/M| when T/M is infinite, otherwise A is countable"


def _fresh(name: str, taken: set[str]) -> str:
    while name in taken:
        name += "'"
    return name


def spec_A(d: SpecDiagram, p: MinfeasiblePartition, mode: Mode | str = Mode.EXACT,
           characteristic: Characteristic | None = None, force: bool = False) -> PrecompletionDiagram:
    """Spec(A) for a precompletion A collapsing exactly the primes under each C_i.

    Without ``force`` the construction must be known to apply, which needs a
    characteristic.  Exact mode keeps every cardinality; countable mode caps
    them at aleph-null and tags cardinalities that are only upper bounds.
    """
    mode = Mode(mode)
    require_valid(d, p)
    verdict = None
    if characteristic is not None:
        verdict = check_construction_applicability(d, p, characteristic)
    if not force and verdict is not Verdict.CONSTRUCTIVE:
        why = "no characteristic supplied" if verdict is None else f"verdict is {verdict.value}"
        raise NotConstructive(f"construction not known to apply ({why}); pass force to override")

    classes = fiber_classes(d, p)
    order = quotient_order(d, classes)
    assert order.is_partial_order, "collapse of a minfeasible partition must give a partial order"

    taken = set(d.ids)
    nodes, names = [], []
    for k, cls in enumerate(classes):
        if k < p.m:
            name = _fresh(f"q{k + 1}", taken)
            taken.add(name)
            members = ", ".join(sorted(p.sub(k + 1)))
            nodes.append(PrimeNode(name, f"q{k + 1} ({members})", ONE))
        else:
            (t,) = cls
            src = d.node(t)
            card = src.card if mode is Mode.EXACT else min(src.card, ALEPH0)
            name = t
            nodes.append(PrimeNode(name, src.label, card, src.flags))
        names.append(name)
    lt = order.leq.copy()
    np.fill_diagonal(lt, False)
    edges = [(names[a], names[b]) for a, b in zip(*np.nonzero(lt))]
    raw = SpecDiagram.build(nodes, edges, d.max_id, check=False)

    base, mapping = coalesce_map(raw)
    provenance: dict[str, set[str]] = {a: set() for a in base.ids}
    for name, cls in zip(names, classes):
        provenance[mapping[name]] |= cls
    provenance = {a: frozenset(ts) for a, ts in provenance.items()}
    min_labels = tuple(mapping[names[k]] for k in range(p.m))

    upper: frozenset[str] = frozenset()
    if mode is Mode.COUNTABLE:
        pre = PrecompletionDiagram(base, mode, provenance, min_labels)
        exact_nodes = set(min_labels) | {base.max_id}
        for r in range(2, p.m + 1):
            for X in combinations(range(1, p.m + 1), r):
                exact_nodes |= pre.s1(X)
        upper = frozenset(base.ids) - exact_nodes
    return PrecompletionDiagram(base, mode, provenance, min_labels, upper, verdict, force)


@dataclass(frozen=True)
class SSetReport:
    X: tuple[int, ...]
    s_T: frozenset[str]
    s_A: frozenset[str]
    s1bar_T: frozenset[str]
    s1_T: frozenset[str]
    s1_A: frozenset[str]
    image_T: frozenset[str]
    mode: Mode = Mode.EXACT

    def s1_sizes(self, d: SpecDiagram, spec: PrecompletionDiagram) -> tuple[Cardinality, Cardinality]:
        """(|S1_T(X)|, |S1_A(X)|), counting box members.

        In countable mode both sides are capped at aleph-null: S1 sets of an
        actual ring are finite, so an infinite box there is a modelling
        artefact rather than something the count should distinguish.
        """
        t = total(d.card(x) for x in self.s1_T)
        a = total(spec.base.card(x) for x in self.s1_A)
        if self.mode is Mode.COUNTABLE:
            t, a = min(t, ALEPH0), min(a, ALEPH0)
        return t, a


def s_sets(d: SpecDiagram, p: MinfeasiblePartition, X: Iterable[int],
           spec: PrecompletionDiagram | None = None) -> SSetReport:
    X = tuple(sorted(set(X)))
    if not X:
        raise EmptyX("X must be a nonempty subset of {1..m}")
    bad = [i for i in X if not 1 <= i <= p.m]
    if bad:
        raise ValueError(f"X entries out of range 1..{p.m}: {bad}")
    if spec is None:
        spec = spec_A(d, p, Mode.EXACT, force=True)
    s_T = frozenset(d.ids)
    for i in X:
        s_T &= over_set(d, p, i)
    fmap = spec.fiber_map()
    image = frozenset(fmap[t] for t in s_T)
    s_A = spec.above_all(X)

    s1bar: frozenset[str] = frozenset()
    s1_T: frozenset[str] = frozenset()
    s1_A: frozenset[str] = frozenset()
    if len(X) >= 2:
        mins = minimal_nodes(d)
        choices = [sorted(under_set(d, p, i) & mins) for i in X]
        acc = set()
        for pick in product(*choices):
            acc |= minimal_upper_bounds(d, pick)
        s1bar = frozenset(acc)
        s1_T = minimal_elements(d, s1bar)
        s1_A = minimal_elements(spec.base, s_A)
    return SSetReport(X, s_T, s_A, s1bar, s1_T, s1_A, image, spec.mode)


def fiber_report(d: SpecDiagram, p: MinfeasiblePartition, i: int) -> dict:
    """The formal fiber of q_i and its maximal elements (which must be C_i)."""
    require_valid(d, p)
    cls = under_set(d, p, i)
    tops = maximal_elements(d, cls)
    if tops != frozenset(p.sub(i)):
        raise AssertionError(f"maximal elements of fiber {i} are {sorted(tops)}, expected C_{i}")
    return {"class": cls, "maximal_elements": tops}

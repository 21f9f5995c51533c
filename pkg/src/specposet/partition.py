"""Minfeasible partitions and the under / over relations they induce.

Subcollection indices are 1-based throughout, matching C_1, ..., C_m.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .cardinality import ONE
from .errors import PartitionInvalid
from .poset import SpecDiagram, minimal_nodes


@dataclass(frozen=True)
class MinfeasiblePartition:
    C: tuple[str, ...]
    subcollections: tuple[tuple[str, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "C", tuple(self.C))
        object.__setattr__(self, "subcollections", tuple(tuple(s) for s in self.subcollections))

    @classmethod
    def from_subcollections(cls, subcollections: Iterable[Iterable[str]]) -> MinfeasiblePartition:
        subs = tuple(tuple(s) for s in subcollections)
        return cls(tuple(x for s in subs for x in s), subs)

    @property
    def m(self) -> int:
        return len(self.subcollections)

    def sub(self, i: int) -> tuple[str, ...]:
        if not 1 <= i <= self.m:
            raise IndexError(f"subcollection index {i} out of range 1..{self.m}")
        return self.subcollections[i - 1]

    def index_of(self, node_id: str) -> int:
        for i, s in enumerate(self.subcollections, start=1):
            if node_id in s:
                return i
        raise KeyError(node_id)


@dataclass(frozen=True)
class Violation:
    node: str | None
    condition: str
    message: str

    def __str__(self):
        where = f"{self.node}: " if self.node else ""
        return f"{where}{self.message} [{self.condition}]"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()
    warnings: tuple[str, ...] = field(default=())

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok


def _under_mask(d: SpecDiagram, members: Sequence[str]) -> np.ndarray:
    if not members:
        return np.zeros(len(d), dtype=bool)
    cols = d.leq[:, [d.idx(x) for x in members]]
    return cols.any(axis=1)


def validate_minfeasible(d: SpecDiagram, p: MinfeasiblePartition) -> ValidationReport:
    for x in set(p.C) | {x for s in p.subcollections for x in s}:
        d.idx(x)  # raises UnknownNode
    bad: list[Violation] = []
    warnings: list[str] = []

    seen = set()
    for x in p.C:
        if x in seen:
            bad.append(Violation(x, "partition", "listed more than once in C"))
        seen.add(x)
    flat = [x for s in p.subcollections for x in s]
    if p.m < 1:
        bad.append(Violation(None, "partition", "needs at least one subcollection"))
    for k, s in enumerate(p.subcollections, start=1):
        if not s:
            bad.append(Violation(None, "partition", f"subcollection C_{k} is empty"))
    for x in sorted(set(flat)):
        if flat.count(x) > 1:
            bad.append(Violation(x, "partition", "appears in more than one subcollection"))
    for x in sorted(set(p.C) - set(flat)):
        bad.append(Violation(x, "partition", "in C but in no subcollection"))
    for x in sorted(set(flat) - set(p.C)):
        bad.append(Violation(x, "partition", "in a subcollection but not in C"))

    for x in p.C:
        if x == d.max_id:
            bad.append(Violation(x, "non-maximal", "C may not contain the maximal ideal"))
        if d.card(x) != ONE:
            bad.append(Violation(x, "singleton", "C elements must be singleton nodes, not boxes"))
    members = sorted(set(p.C))
    for a_pos, a in enumerate(members):
        for b in members[a_pos + 1:]:
            if d.le(a, b) or d.le(b, a):
                lo, hi = (a, b) if d.le(a, b) else (b, a)
                bad.append(Violation(lo, "antichain", f"C is not an antichain: {lo} <= {hi}"))

    unders = [_under_mask(d, s) for s in p.subcollections]
    for q in sorted(minimal_nodes(d)):
        k = d.idx(q)
        hits = [i for i, u in enumerate(unders, start=1) if u[k]]
        if not hits:
            bad.append(Violation(q, "(i)", "minimal node is under no element of C"))
        elif len(hits) > 1:
            names = ", ".join(f"C_{i}" for i in hits)
            bad.append(Violation(q, "(ii)", f"minimal node is under more than one subcollection ({names})"))
    mins = minimal_nodes(d)
    for k, x in enumerate(d.ids):
        if x in mins:
            continue
        hits = [i for i, u in enumerate(unders, start=1) if u[k]]
        if len(hits) > 1:
            warnings.append(f"{x} is under several subcollections: "
                            + ", ".join(f"C_{i}" for i in hits))
    return ValidationReport(tuple(bad), tuple(warnings))


def require_valid(d: SpecDiagram, p: MinfeasiblePartition) -> None:
    report = validate_minfeasible(d, p)
    if not report.ok:
        raise PartitionInvalid(report)


def under_set(d: SpecDiagram, p: MinfeasiblePartition, i: int) -> frozenset[str]:
    """Nodes contained in some member of C_i (C_i itself included)."""
    return d.ids_of(_under_mask(d, p.sub(i)))


def over_set(d: SpecDiagram, p: MinfeasiblePartition, i: int) -> frozenset[str]:
    """Nodes strictly above something under C_i and not themselves under C_i."""
    under = _under_mask(d, p.sub(i))
    above = (d.lt & under[:, None]).any(axis=0)
    return d.ids_of(above & ~under)


def fiber_classes(d: SpecDiagram, p: MinfeasiblePartition) -> tuple[frozenset[str], ...]:
    """Classes of the collapse relation: one per subcollection, then singletons.

    Class i (0-based position i-1) is everything under C_i; every other node
    forms a class on its own, in id order.
    """
    require_valid(d, p)
    classes = [under_set(d, p, i) for i in range(1, p.m + 1)]
    collapsed = frozenset().union(*classes)
    classes.extend(frozenset({x}) for x in d.ids if x not in collapsed)
    return tuple(classes)


def set_partitions(items: Sequence) -> Iterable[list[list]]:
    """All set partitions of ``items`` (restricted-growth order)."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for smaller in set_partitions(rest):
        yield [[first], *smaller]
        for k in range(len(smaller)):
            yield smaller[:k] + [[first, *smaller[k]]] + smaller[k + 1:]


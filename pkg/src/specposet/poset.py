"""Cardinality-annotated finite posets modelling the prime spectrum of a
complete local ring.

A node is either a single prime or a *box*: a family of pairwise
incomparable primes that all have the same comparabilities with every other
node.  Orders are held as boolean numpy matrices indexed by the
lexicographically sorted node ids.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .cardinality import ONE, Cardinality, total
from .errors import CycleDetected, InvariantViolation, UnknownNode


@dataclass(frozen=True)
class RingFlags:
    """Ring-theoretic facts about one prime, supplied by the user.

    ``contains_p``: p lies in the prime; ``ann_p_in``: Ann_T(p) is contained
    in the prime; ``associated``: the prime is an associated prime of T.
    """

    contains_p: bool = False
    ann_p_in: bool = False
    associated: bool = False


@dataclass(frozen=True)
class PrimeNode:
    id: str
    label: str = ""
    card: Cardinality = ONE
    flags: RingFlags | None = None

    def __post_init__(self):
        if not self.label:
            object.__setattr__(self, "label", self.id)

    @property
    def is_box(self) -> bool:
        return self.card > ONE


def _closure_matrix(n: int, edges: Iterable[tuple[int, int]]) -> np.ndarray:
    reach = np.eye(n, dtype=bool)
    for a, b in edges:
        reach[a, b] = True
    while True:
        step = reach | ((reach.astype(np.int64) @ reach.astype(np.int64)) > 0)
        if np.array_equal(step, reach):
            break
        reach = step
    both = reach & reach.T
    np.fill_diagonal(both, False)
    if both.any():
        raise CycleDetected()
    reach.flags.writeable = False
    return reach


def _cover_matrix(leq: np.ndarray) -> np.ndarray:
    lt = leq.copy()
    np.fill_diagonal(lt, False)
    between = (lt.astype(np.int64) @ lt.astype(np.int64)) > 0
    return lt & ~between


@dataclass(frozen=True)
class SpecDiagram:
    nodes: tuple[PrimeNode, ...]
    covers: frozenset[tuple[str, str]]
    max_id: str
    _index: Mapping[str, int] = field(init=False, repr=False, compare=False, hash=False)
    _ids: tuple[str, ...] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        nodes = tuple(sorted(self.nodes, key=lambda nd: nd.id))
        ids = [nd.id for nd in nodes]
        if len(set(ids)) != len(ids):
            dup = next(i for i in ids if ids.count(i) > 1)
            raise InvariantViolation(dup, "node id is not unique")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "covers", frozenset((a, b) for a, b in self.covers))
        index = {i: k for k, i in enumerate(ids)}
        object.__setattr__(self, "_index", index)
        object.__setattr__(self, "_ids", tuple(ids))
        for a, b in self.covers:
            for x in (a, b):
                if x not in index:
                    raise UnknownNode(x)
        if self.max_id not in index:
            raise UnknownNode(self.max_id)

    @classmethod
    def build(cls, nodes: Iterable[PrimeNode], edges: Iterable[tuple[str, str]],
              max_id: str, check: bool = True) -> SpecDiagram:
        """Build a diagram from any acyclic edge set (reduced to covers)."""
        raw = cls(tuple(nodes), frozenset(edges), max_id)
        leq = raw.leq
        ids = raw.ids
        covers = frozenset((ids[a], ids[b]) for a, b in zip(*np.nonzero(_cover_matrix(leq))))
        d = replace(raw, covers=covers)
        d.__dict__["leq"] = leq  # same order, so the closure carries over
        if check:
            problems = d.problems()
            if problems:
                raise problems[0]
        return d

    # -- lookup ---------------------------------------------------------

    @property
    def ids(self) -> tuple[str, ...]:
        return self._ids

    def __len__(self):
        return len(self.nodes)

    def __contains__(self, node_id):
        return node_id in self._index

    def idx(self, node_id: str) -> int:
        try:
            return self._index[node_id]
        except KeyError:
            raise UnknownNode(node_id) from None

    def node(self, node_id: str) -> PrimeNode:
        return self.nodes[self.idx(node_id)]

    def card(self, node_id: str) -> Cardinality:
        return self.node(node_id).card

    # -- order ----------------------------------------------------------

    @cached_property
    def leq(self) -> np.ndarray:
        """Reflexive-transitive closure of the covers; ``leq[i, j]`` iff i <= j."""
        return _closure_matrix(len(self.nodes),
                               ((self._index[a], self._index[b]) for a, b in self.covers))

    @cached_property
    def lt(self) -> np.ndarray:
        lt = self.leq.copy()
        np.fill_diagonal(lt, False)
        lt.flags.writeable = False
        return lt

    @cached_property
    def cover_matrix(self) -> np.ndarray:
        return _cover_matrix(self.leq)

    @cached_property
    def minimal(self) -> frozenset[str]:
        return self.ids_of(~self.lt.any(axis=0))

    def le(self, a: str, b: str) -> bool:
        return bool(self.leq[self.idx(a), self.idx(b)])

    def less(self, a: str, b: str) -> bool:
        return bool(self.lt[self.idx(a), self.idx(b)])

    def up(self, node_id: str, strict: bool = False) -> frozenset[str]:
        row = (self.lt if strict else self.leq)[self.idx(node_id)]
        return frozenset(self.ids[k] for k in np.flatnonzero(row))

    def down(self, node_id: str, strict: bool = False) -> frozenset[str]:
        col = (self.lt if strict else self.leq)[:, self.idx(node_id)]
        return frozenset(self.ids[k] for k in np.flatnonzero(col))

    def parents(self, node_id: str) -> list[str]:
        row = self.cover_matrix[self.idx(node_id)]
        return [self.ids[k] for k in np.flatnonzero(row)]

    def children(self, node_id: str) -> list[str]:
        col = self.cover_matrix[:, self.idx(node_id)]
        return [self.ids[k] for k in np.flatnonzero(col)]

    def ids_of(self, mask) -> frozenset[str]:
        ids = self._ids
        return frozenset(ids[k] for k in np.flatnonzero(mask).tolist())

    def mask_of(self, node_ids: Iterable[str]) -> np.ndarray:
        mask = np.zeros(len(self.nodes), dtype=bool)
        for i in node_ids:
            mask[self.idx(i)] = True
        return mask

    # -- invariants -----------------------------------------------------

    def problems(self) -> list[InvariantViolation]:
        """All violated SpecDiagram invariants (empty for a valid diagram)."""
        out = []
        try:
            leq = self.leq
        except CycleDetected:
            return [InvariantViolation("covers", "covers contain a directed cycle")]
        m = self.idx(self.max_id)
        if not leq[:, m].all():
            below = [self.ids[k] for k in np.flatnonzero(~leq[:, m])]
            out.append(InvariantViolation(self.max_id,
                                          f"not the unique maximum (not above {', '.join(below)})"))
        if self.nodes[m].card != ONE:
            out.append(InvariantViolation(self.max_id, "maximal node must have cardinality 1"))
        for nd in self.nodes:
            if nd.card < ONE:
                out.append(InvariantViolation(nd.id, "cardinality must be at least 1"))
        for q in minimal_nodes(self):
            if self.card(q) != ONE:
                out.append(InvariantViolation(q, "minimal node must have cardinality 1"))
        cov = self.cover_matrix
        extra = [(a, b) for a, b in self.covers if not cov[self._index[a], self._index[b]]]
        for a, b in sorted(extra):
            out.append(InvariantViolation(f"{a}->{b}", "edge is implied by transitivity"))
        return out

    def is_valid(self) -> bool:
        return not self.problems()

    def with_cards(self, cards: Mapping[str, Cardinality]) -> SpecDiagram:
        nodes = tuple(replace(nd, card=cards.get(nd.id, nd.card)) for nd in self.nodes)
        return replace(self, nodes=nodes)


def closure(d: SpecDiagram) -> frozenset[tuple[str, str]]:
    """The full reflexive-transitive order relation as id pairs."""
    leq = d.leq
    ids = d.ids
    return frozenset((ids[a], ids[b]) for a, b in zip(*np.nonzero(leq)))


def transitive_reduction(edges: Iterable[tuple[str, str]],
                         nodes: Iterable[str] | None = None) -> frozenset[tuple[str, str]]:
    edges = [(a, b) for a, b in edges]
    ids = sorted(set(nodes or ()) | {x for e in edges for x in e})
    index = {i: k for k, i in enumerate(ids)}
    leq = _closure_matrix(len(ids), ((index[a], index[b]) for a, b in edges))
    cov = _cover_matrix(leq)
    return frozenset((ids[a], ids[b]) for a, b in zip(*np.nonzero(cov)))


def minimal_nodes(d: SpecDiagram) -> frozenset[str]:
    return d.minimal


def maximal_nodes(d: SpecDiagram) -> frozenset[str]:
    return d.ids_of(~d.lt.any(axis=1))


def minimal_elements(d: SpecDiagram, subset: Iterable[str]) -> frozenset[str]:
    mask = d.mask_of(subset)
    # k is minimal in the subset iff nothing in the subset lies strictly below it
    below = (d.lt & mask[:, None]).any(axis=0)
    return d.ids_of(mask & ~below)


def maximal_elements(d: SpecDiagram, subset: Iterable[str]) -> frozenset[str]:
    mask = d.mask_of(subset)
    above = (d.lt & mask[None, :]).any(axis=1)
    return d.ids_of(mask & ~above)


def minimal_upper_bounds(d: SpecDiagram, S: Iterable[str]) -> frozenset[str]:
    """Minimal common upper bounds of S.

    For minimal primes Q_i this is exactly the set of primes minimal over the
    sum of the Q_i.
    """
    S = list(S)
    if not S:
        raise ValueError("minimal_upper_bounds needs a nonempty set")
    rows = d.leq[[d.idx(s) for s in S]]
    common = rows.all(axis=0)
    return minimal_elements(d, d.ids_of(common))


def _merged_node(members: list[PrimeNode]) -> PrimeNode:
    if len(members) == 1:
        return members[0]
    flags = {m.flags for m in members}
    return PrimeNode(
        id="|".join(m.id for m in members),
        label=", ".join(m.label for m in members),
        card=total(m.card for m in members),
        flags=flags.pop() if len(flags) == 1 else None,
    )


def coalesce_map(d: SpecDiagram) -> tuple[SpecDiagram, dict[str, str]]:
    """Coalesce order-equivalent nodes and return the old-id -> new-id map."""
    mins = minimal_nodes(d)
    groups: dict[object, list[PrimeNode]] = {}
    for k, nd in enumerate(d.nodes):
        if nd.id in mins or nd.id == d.max_id:
            key = ("fixed", nd.id)
        else:
            key = (d.lt[k].tobytes(), d.lt[:, k].tobytes())
        groups.setdefault(key, []).append(nd)
    mapping = {}
    new_nodes = []
    for members in groups.values():
        merged = _merged_node(members)
        new_nodes.append(merged)
        for m in members:
            mapping[m.id] = merged.id
    edges = {(mapping[a], mapping[b]) for a, b in d.covers if mapping[a] != mapping[b]}
    out = SpecDiagram.build(new_nodes, edges, mapping[d.max_id], check=False)
    return out, mapping


def coalesce(d: SpecDiagram) -> SpecDiagram:
    """Merge non-extremal nodes with identical strict up- and down-sets."""
    return coalesce_map(d)[0]


def concretize(d: SpecDiagram, box_cap: int) -> SpecDiagram:
    """Replace each box by at most ``box_cap`` explicit singleton nodes."""
    if box_cap < 1:
        raise ValueError("box_cap must be positive")
    copies: dict[str, list[str]] = {}
    nodes = []
    for nd in d.nodes:
        if not nd.is_box:
            copies[nd.id] = [nd.id]
            nodes.append(nd)
            continue
        count = box_cap if nd.card.is_infinite else min(nd.card.n, box_cap)
        copies[nd.id] = [f"{nd.id}#{k}" for k in range(count)]
        nodes.extend(PrimeNode(c, f"{nd.label}#{k}", ONE, nd.flags)
                     for k, c in enumerate(copies[nd.id]))
    edges = {(x, y) for a, b in d.covers for x in copies[a] for y in copies[b]}
    return SpecDiagram(tuple(nodes), frozenset(edges), d.max_id)


def gap_witness_violations(d: SpecDiagram) -> list[tuple[str, str]]:
    """Pairs a < c with an element strictly between but no witness box.

    A witness is an infinite box V with a < V < c whose strict upper bounds
    are exactly c and the nodes above c.  In the spectrum of a Noetherian
    ring, infinitely many primes lie between a and c and avoid any finite set
    of primes not containing c; a box is the only way this model can carry
    that, so diagrams failing the check cannot come from an actual ring.
    """
    lt, leq, cov = d.lt, d.leq, d.cover_matrix
    infinite = np.array([nd.card.is_infinite for nd in d.nodes])
    n = len(d.nodes)
    # witness[v, c]: v is an infinite box whose strict up-set equals up(c)
    same_up = (lt[:, None, :] == leq[None, :, :]).all(axis=2)
    witness = same_up & infinite[:, None]
    out = []
    for a in range(n):
        for c in range(n):
            if not lt[a, c] or cov[a, c]:
                continue
            if not (lt[a] & witness[:, c]).any():
                out.append((d.ids[a], d.ids[c]))
    return out

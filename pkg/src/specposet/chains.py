"""Maximal chains, coheight, and the chain-preservation checks between
Spec(T) and a computed Spec(A).

A box is one step of a chain: its members are pairwise incomparable, so a
chain meets at most one of them, and which one is irrelevant.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import NotMinimal, ProvenanceMismatch
from .partition import MinfeasiblePartition, fiber_classes, under_set
from .poset import SpecDiagram, gap_witness_violations, minimal_nodes
from .precompletion import PrecompletionDiagram


def _topo(d: SpecDiagram) -> list[int]:
    # sorting by the size of the down-set is a linear extension
    sizes = d.leq.sum(axis=0)
    return sorted(range(len(d)), key=lambda k: (sizes[k], k))


def path_lengths(d: SpecDiagram) -> tuple[np.ndarray, np.ndarray]:
    """Longest and shortest cover-path lengths between all pairs (-1 if a !<= b)."""
    n = len(d)
    cov = d.cover_matrix
    longest = np.full((n, n), -1, dtype=np.int64)
    shortest = np.full((n, n), -1, dtype=np.int64)
    order = _topo(d)
    for src in range(n):
        longest[src, src] = shortest[src, src] = 0
        for u in order:
            if longest[src, u] < 0:
                continue
            for v in np.flatnonzero(cov[u]):
                longest[src, v] = max(longest[src, v], longest[src, u] + 1)
                s = shortest[src, u] + 1
                shortest[src, v] = s if shortest[src, v] < 0 else min(shortest[src, v], s)
    return longest, shortest


def coheight(d: SpecDiagram, node_id: str) -> int:
    """Length of the longest chain from ``node_id`` up to the maximal node."""
    longest, _ = path_lengths(d)
    return int(longest[d.idx(node_id), d.idx(d.max_id)])


def coheights(d: SpecDiagram) -> dict[str, int]:
    longest, _ = path_lengths(d)
    top = d.idx(d.max_id)
    return {x: int(longest[k, top]) for k, x in enumerate(d.ids)}


def saturated_chains(d: SpecDiagram, start: str, end: str | None = None) -> list[tuple[str, ...]]:
    end = d.max_id if end is None else end
    goal = d.idx(end)
    cov, leq = d.cover_matrix, d.leq

    @lru_cache(maxsize=None)
    def walk(k: int) -> tuple[tuple[int, ...], ...]:
        if k == goal:
            return ((k,),)
        out = []
        for v in np.flatnonzero(cov[k] & leq[:, goal]):
            out.extend((k, *rest) for rest in walk(int(v)))
        return tuple(out)

    if not d.le(start, end):
        return []
    chains = [tuple(d.ids[k] for k in c) for c in walk(d.idx(start))]
    return sorted(chains)


def maximal_chains(d: SpecDiagram, start: str) -> list[tuple[str, ...]]:
    """All saturated chains from the minimal node ``start`` to the maximal node."""
    if start not in minimal_nodes(d):
        if start not in d:
            d.idx(start)
        raise NotMinimal(f"{start} is not a minimal node")
    return saturated_chains(d, start)


def chain_length(chain) -> int:
    return len(chain) - 1


def catenary_violations(d: SpecDiagram) -> list[tuple[str, str, int, int]]:
    """Comparable pairs joined by saturated chains of different lengths."""
    longest, shortest = path_lengths(d)
    bad = np.argwhere(longest != shortest)
    return [(d.ids[a], d.ids[b], int(shortest[a, b]), int(longest[a, b])) for a, b in bad]


def is_catenary(d: SpecDiagram) -> bool:
    return not catenary_violations(d)


@dataclass(frozen=True)
class ChainReport:
    coheight: dict
    maximal_chain_lengths: dict
    witnesses: dict

    def summary(self) -> str:
        lines = []
        for q in sorted(self.coheight):
            lengths = ", ".join(map(str, sorted(self.maximal_chain_lengths[q])))
            lines.append(f"{q}: coheight {self.coheight[q]}; maximal chain lengths {{{lengths}}}")
            for c in self.witnesses[q]:
                lines.append("    " + " < ".join(c))
        return "\n".join(lines)


def chain_report(d: SpecDiagram) -> ChainReport:
    coh, lengths, wit = {}, {}, {}
    for q in sorted(minimal_nodes(d)):
        chains = maximal_chains(d, q)
        lengths[q] = frozenset(chain_length(c) for c in chains)
        coh[q] = max(lengths[q])
        wit[q] = chains
    return ChainReport(coh, lengths, wit)


@dataclass
class TheoremReport:
    in_model: bool
    skipped_reason: str | None = None
    checks: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(ok for ok, _ in self.checks.values())

    def failures(self) -> dict:
        return {k: w for k, (ok, w) in self.checks.items() if not ok}

    def summary(self) -> str:
        if not self.in_model:
            return f"out of model, skipped: {self.skipped_reason}"
        lines = []
        for name, (ok, wit) in self.checks.items():
            lines.append(f"{'PASS' if ok else 'FAIL'} {name}" + ("" if ok else f": {wit}"))
        return "\n".join(lines)


def _check_provenance(d: SpecDiagram, p: MinfeasiblePartition, spec: PrecompletionDiagram):
    covered = [t for ts in spec.provenance.values() for t in ts]
    if sorted(covered) != sorted(d.ids) or len(covered) != len(set(covered)):
        raise ProvenanceMismatch("provenance does not partition the Spec(T) nodes")
    if spec.m != p.m:
        raise ProvenanceMismatch(f"Spec(A) has {spec.m} minimal labels, partition has {p.m}")
    classes = fiber_classes(d, p)
    fmap = spec.fiber_map()
    for i in range(1, p.m + 1):
        if spec.provenance[spec.q(i)] != classes[i - 1]:
            raise ProvenanceMismatch(f"fiber of q{i} does not match the nodes under C_{i}")
    for cls in classes[p.m:]:
        (t,) = cls
        if fmap[t] in spec.min_labels:
            raise ProvenanceMismatch(f"{t} is collapsed into a minimal fiber")


def _lift(d: SpecDiagram, spec: PrecompletionDiagram, chain) -> tuple[str, ...] | None:
    """A chain t_0 < ... < t_n in Spec(T), t_0 minimal, with t_j over chain[j]."""
    mins = minimal_nodes(d)

    def back(j, upper):
        pool = sorted(spec.provenance[chain[j]])
        for t in pool:
            if upper is not None and not d.less(t, upper):
                continue
            if j == 0:
                if t in mins:
                    return (t,)
                continue
            rest = back(j - 1, t)
            if rest is not None:
                return rest + (t,)
        return None

    return back(len(chain) - 1, None)


def verify_chain_theorems(d: SpecDiagram, p: MinfeasiblePartition,
                          spec: PrecompletionDiagram, require_witness: bool = True) -> TheoremReport:
    """Check the chain statements relating Spec(T) and Spec(A).

    Only meaningful for diagrams that are catenary and in which every gap
    carries a witness box; other inputs are reported as out of model.
    ``require_witness=False`` runs the checks on catenary diagrams without
    witness boxes too, which is how the need for them shows up.
    """
    _check_provenance(d, p, spec)
    bad_cat = catenary_violations(d)
    if bad_cat:
        a, b, lo, hi = bad_cat[0]
        return TheoremReport(False, f"not catenary: saturated chains {a}..{b} of lengths {lo} and {hi}")
    bad_gap = gap_witness_violations(d) if require_witness else []
    if bad_gap:
        a, c = bad_gap[0]
        return TheoremReport(False, f"no witness box for the gap {a} < {c}")

    A = spec.base
    mins = minimal_nodes(d)
    coh_T = coheights(d)
    longest_A, _ = path_lengths(A)
    top_A = A.idx(A.max_id)
    fmap = spec.fiber_map()
    report = TheoremReport(True)

    allowed = {i: {coh_T[Q] for Q in under_set(d, p, i) & mins} for i in range(1, p.m + 1)}
    bad1, bad2, bad4 = [], [], []
    for i in range(1, p.m + 1):
        q = spec.q(i)
        chains = saturated_chains(A, q)
        for c in chains:
            if chain_length(c) not in allowed[i]:
                bad1.append((i, c))
            if _lift(d, spec, c) is None:
                bad4.append((i, c))
        coh_q = int(longest_A[A.idx(q), top_A])
        if coh_q != max(allowed[i]):
            bad2.append((i, coh_q, max(allowed[i])))
    report.checks["maximal chain lengths from q_i are coheights of minimals under C_i"] = (not bad1, bad1)
    report.checks["coheight(q_i) = max coheight of minimals under C_i"] = (not bad2, bad2)

    bad3, bad5 = [], []
    for Q in sorted(mins):
        for c in saturated_chains(d, Q):
            n = chain_length(c)
            image = [fmap[c[0]]]
            for t in c[1:]:
                if fmap[t] != image[-1]:
                    image.append(fmap[t])
            idx = [A.idx(a) for a in image]
            room = sum(int(longest_A[u, v]) for u, v in zip(idx, idx[1:]))
            if room < n:
                bad3.append((c, tuple(image), room))
            if len(image) - 1 < n and all(longest_A[u, v] == 1 for u, v in zip(idx, idx[1:])):
                bad5.append((c, tuple(image)))
    report.checks["image of every chain lies in a saturated chain at least as long"] = (not bad3, bad3)
    report.checks["every chain of Spec(A) from q_i lifts to an equally long chain"] = (not bad4, bad4)
    report.checks["shortened image chains are not saturated"] = (not bad5, bad5)
    return report

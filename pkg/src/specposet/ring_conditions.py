"""Characteristic / annihilator hypotheses and which existence result applies.

Ring facts are never computed: whether p lies in a prime, whether Ann_T(p)
lies in it, and whether it is associated all come in as node flags.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import InvariantViolation, MissingFlags
from .partition import MinfeasiblePartition, require_valid, under_set
from .poset import RingFlags, SpecDiagram, minimal_nodes

__all__ = [
    "RingFlags", "CharKind", "Characteristic", "ConditionReport", "Verdict",
    "check_remark_conditions", "check_construction_applicability", "is_exceptional",
]


class CharKind(str, enum.Enum):
    ZERO_MZ_ZERO = "zero_mz_zero"   # char 0 and M meets Z in (0)
    ZERO_MZ_P = "zero_mz_p"         # char 0 and M meets Z in (p)
    PRIME = "prime"                 # char p
    PRIME_POWER = "prime_power"     # char p^k, k >= 2


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


@dataclass(frozen=True)
class Characteristic:
    kind: CharKind
    p: int | None = None
    k: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "kind", CharKind(self.kind))
        if self.kind is CharKind.ZERO_MZ_ZERO:
            if self.p is not None or self.k is not None:
                raise ValueError("zero_mz_zero takes no p or k")
            return
        if self.p is None or not _is_prime(self.p):
            raise ValueError(f"{self.kind.value} needs a prime p, got {self.p!r}")
        if self.kind is CharKind.PRIME_POWER:
            if self.k is None or self.k < 2:
                raise ValueError(f"prime_power needs k >= 2, got {self.k!r}")
        elif self.k is not None:
            raise ValueError(f"{self.kind.value} takes no k")

    @classmethod
    def zero_mz_zero(cls):
        return cls(CharKind.ZERO_MZ_ZERO)

    @classmethod
    def zero_mz_p(cls, p):
        return cls(CharKind.ZERO_MZ_P, p)

    @classmethod
    def prime(cls, p):
        return cls(CharKind.PRIME, p)

    @classmethod
    def prime_power(cls, p, k):
        return cls(CharKind.PRIME_POWER, p, k)

    def __str__(self):
        if self.kind is CharKind.ZERO_MZ_ZERO:
            return "char 0, M ∩ Z = (0)"
        if self.kind is CharKind.ZERO_MZ_P:
            return f"char 0, M ∩ Z = ({self.p})"
        if self.kind is CharKind.PRIME:
            return f"char {self.p}"
        return f"char {self.p}^{self.k}"

    def to_json(self) -> dict:
        out = {"kind": self.kind.value}
        if self.p is not None:
            out["p"] = self.p
        if self.k is not None:
            out["k"] = self.k
        return out


class Verdict(str, enum.Enum):
    CONSTRUCTIVE = "Constructive"
    OBSTRUCTED = "Obstructed"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class ConditionReport:
    characteristic: Characteristic
    cases: frozenset[str]
    sub: dict = field(default_factory=dict)
    side_hypotheses: dict = field(default_factory=dict)
    witnesses: dict = field(default_factory=dict)
    warnings: tuple[str, ...] = ()

    @property
    def any_case(self) -> bool:
        return bool(self.cases)

    @property
    def hypotheses_hold(self) -> bool:
        return all(self.side_hypotheses.values())

    @property
    def verdict(self) -> Verdict:
        if not self.hypotheses_hold:
            return Verdict.UNDETERMINED
        return Verdict.CONSTRUCTIVE if self.any_case else Verdict.OBSTRUCTED

    def summary(self) -> str:
        cases = ", ".join(sorted(self.cases, key=_CASE_ORDER.index)) or "none"
        lines = [f"characteristic: {self.characteristic}", f"satisfied cases: {cases}"]
        for name, val in self.sub.items():
            lines.append(f"  {name}: {'n/a' if val is None else ('holds' if val else 'fails')}")
        for name, val in self.side_hypotheses.items():
            lines.append(f"side hypothesis {name}: {'holds' if val else 'fails'}")
        for name, nodes in self.witnesses.items():
            lines.append(f"  {name} witnesses: {', '.join(nodes)}")
        lines.extend(f"warning: {w}" for w in self.warnings)
        lines.append(f"verdict: {self.verdict.value}")
        return "\n".join(lines)


_CASE_ORDER = ["i", "ii", "iii", "iv", "v"]


def is_exceptional(d: SpecDiagram, p: MinfeasiblePartition, i: int) -> bool:
    """True when C_i is a single minimal prime, so the annihilator rules are waived."""
    members = p.sub(i)
    mins = minimal_nodes(d)
    return len(members) == 1 and members[0] in mins


def _flags(d: SpecDiagram, node_id: str) -> RingFlags | None:
    return d.node(node_id).flags


def _associated(d: SpecDiagram, node_id: str, mins) -> bool:
    if node_id in mins:
        return True
    fl = _flags(d, node_id)
    return bool(fl and fl.associated)


def _require(d: SpecDiagram, node_ids, reason: str) -> None:
    missing = [x for x in node_ids if _flags(d, x) is None]
    if missing:
        raise MissingFlags(missing, reason)


def check_remark_conditions(d: SpecDiagram, p: MinfeasiblePartition,
                            ch: Characteristic) -> ConditionReport:
    require_valid(d, p)
    mins = minimal_nodes(d)
    for q in sorted(mins):
        fl = _flags(d, q)
        if fl is not None and not fl.associated:
            raise InvariantViolation(q, "minimal primes are associated; flag associated=false")

    cases: set[str] = set()
    sub: dict = {"iv.a": None, "iv.b": None, "iv.c": None}
    side = {"(i)": True, "(ii)": True}
    witnesses: dict[str, list[str]] = {}
    warnings: list[str] = []

    # p in Q and Ann_T(p) in Q both pass from a prime to every prime containing it
    for a, b in sorted(d.covers):
        fa, fb = _flags(d, a), _flags(d, b)
        if fa is None or fb is None:
            continue
        for name in ("contains_p", "ann_p_in"):
            if getattr(fa, name) and not getattr(fb, name):
                warnings.append(f"flags inconsistent: {name} holds at {a} but not at {b} above it")

    for i in range(1, p.m + 1):
        members = p.sub(i)
        if len(members) == 1 and members[0] not in mins:
            below = [q for q in mins if d.le(q, members[0])]
            if len(below) == 1:
                warnings.append(f"C_{i} = {{{members[0]}}} is one non-minimal prime over the single "
                                f"minimal {below[0]}; annihilator conditions are enforced for it")

    if ch.kind is CharKind.PRIME:
        cases.add("i")
    elif ch.kind is CharKind.ZERO_MZ_ZERO:
        cases.add("ii")
    elif ch.kind is CharKind.ZERO_MZ_P:
        _require(d, sorted(set(p.C) | mins), "needed to evaluate cases (iii) and (iv)")
        holders = [x for x in p.C if _flags(d, x).contains_p]
        if not holders:
            cases.add("iii")
        else:
            witnesses["(iii)"] = sorted(holders)

        under_any = set().union(*(under_set(d, p, i) for i in range(1, p.m + 1)))
        unflagged = sorted(x for x in under_any - mins - set(p.C) if _flags(d, x) is None)
        if unflagged:
            warnings.append("associated primes evaluated over flagged nodes only; no flags on "
                            + ", ".join(unflagged))

        bad_a = []
        for P in p.C:
            if not _flags(d, P).contains_p:
                continue
            for Q in sorted(d.down(P)):
                if _associated(d, Q, mins) and not _flags(d, Q).contains_p:
                    bad_a.append(f"{Q}<={P}")
        bad_b = []
        for i in range(1, p.m + 1):
            vals = {_flags(d, x).contains_p for x in p.sub(i)}
            if len(vals) > 1:
                bad_b.append(f"C_{i}")
        bad_c = []
        for i in range(1, p.m + 1):
            if is_exceptional(d, p, i):
                continue
            for Q in sorted(under_set(d, p, i)):
                if not _associated(d, Q, mins):
                    continue
                fl = _flags(d, Q)
                if fl.contains_p and fl.ann_p_in:
                    bad_c.append(Q)
        sub = {"iv.a": not bad_a, "iv.b": not bad_b, "iv.c": not bad_c}
        for name, bad in (("iv.a", bad_a), ("iv.b", bad_b), ("iv.c", bad_c)):
            if bad:
                witnesses[name] = bad
        if all(sub.values()):
            cases.add("iv")
        if sub["iv.a"] and sub["iv.b"]:
            side["(i)"] = sub["iv.c"]
    else:
        needed = sorted({x for i in range(1, p.m + 1) if not is_exceptional(d, p, i)
                         for x in p.sub(i)})
        _require(d, needed, "needed to evaluate case (v)")
        bad_v = [x for x in needed if _flags(d, x).ann_p_in]
        if bad_v:
            witnesses["(v)"] = bad_v
        else:
            cases.add("v")
        side["(ii)"] = not bad_v

    return ConditionReport(ch, frozenset(cases), sub, side,
                           {k: tuple(v) for k, v in witnesses.items()}, tuple(warnings))


def check_construction_applicability(d: SpecDiagram, p: MinfeasiblePartition,
                                     ch: Characteristic) -> Verdict:
    """Constructive when some case holds and both side hypotheses hold;
    Obstructed when no case holds but both side hypotheses do (no subring can
    identify the primes under each C_i); otherwise Undetermined."""
    return check_remark_conditions(d, p, ch).verdict

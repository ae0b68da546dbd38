"""Exact packing and hitting-set numbers for small instances.

Members of a family are handled as vertex bitmasks. Only inclusion-minimal
vertex sets matter for all three quantities: a packing can swap a member for
one whose vertex set it contains, and hitting the smaller set hits the
larger one.
"""
from __future__ import annotations

import csv
import io
import time
from dataclasses import dataclass, field

from .errors import CapExceeded, GammaGraphError
from .graph import LabelledGraph, enumerate_A_paths, iter_cycles, weight

DEFAULT_MAX_VERTICES = 24
DEFAULT_FAMILY_CAP = 50_000


@dataclass(frozen=True)
class FamilySpec:
    kind: str  # nonzero_cycles | weight_ell_cycles | nonzero_A_paths
    ell: object = None
    A: tuple = ()

    @classmethod
    def nonzero_cycles(cls) -> "FamilySpec":
        return cls("nonzero_cycles")

    @classmethod
    def weight_ell_cycles(cls, ell) -> "FamilySpec":
        return cls("weight_ell_cycles", ell=ell)

    @classmethod
    def nonzero_A_paths(cls, A) -> "FamilySpec":
        return cls("nonzero_A_paths", A=tuple(sorted(A)))

    @classmethod
    def parse(cls, text: str) -> "FamilySpec":
        """'nonzero', 'weight:L' (L an int or comma list) or 'apaths:v1,v2,...'."""
        head, _, rest = text.partition(":")
        if head == "nonzero" and not rest:
            return cls.nonzero_cycles()
        if head == "weight" and rest:
            vals = [int(x) for x in rest.split(",")]
            return cls.weight_ell_cycles(vals[0] if len(vals) == 1 else tuple(vals))
        if head == "apaths":
            return cls.nonzero_A_paths(int(x) for x in rest.split(",") if x)
        raise GammaGraphError(f"unknown family {text!r}")

    def label(self) -> str:
        if self.kind == "nonzero_cycles":
            return "nonzero"
        if self.kind == "weight_ell_cycles":
            ell = self.ell if isinstance(self.ell, (tuple, list)) else (self.ell,)
            return "weight:" + ",".join(str(int(x)) for x in ell)
        return "apaths:" + ",".join(str(a) for a in self.A)


def _check_caps(G: LabelledGraph, max_vertices: int) -> None:
    if len(G.vertices) > max_vertices:
        raise CapExceeded(f"{len(G.vertices)} vertices exceed the cap of {max_vertices}")


def enumerate_family(G: LabelledGraph, F: FamilySpec, cap: int = DEFAULT_FAMILY_CAP,
                     max_vertices: int = DEFAULT_MAX_VERTICES) -> list:
    """Every member of F in G, as CycleSpec or PathSpec."""
    _check_caps(G, max_vertices)
    out = []
    if F.kind == "nonzero_A_paths":
        A = [a for a in F.A if G.has_vertex(a)]
        if len(A) != len(F.A):
            raise GammaGraphError("A must be a subset of V(G)")
        return enumerate_A_paths(G, A, nonzero_only=True, cap=cap)
    if F.kind == "nonzero_cycles":
        keep = lambda w: not w.is_zero  # noqa: E731
    elif F.kind == "weight_ell_cycles":
        ell = G.group.elem(F.ell)
        keep = lambda w: w == ell  # noqa: E731
    else:
        raise GammaGraphError(f"unknown family kind {F.kind}")
    for C in iter_cycles(G):
        if keep(weight(G, C)):
            out.append(C)
            if len(out) > cap:
                raise CapExceeded(f"more than {cap} family members")
    return out


class _Family:
    """Members as bitmasks over a fixed vertex order.

    By default only inclusion-minimal vertex sets are kept, one member each.
    With minimal=False every vertex set is kept, holding up to ``copies``
    distinct members; packings without repeats need this, since swapping a
    member for a smaller one may duplicate a member already chosen.
    """

    def __init__(self, G: LabelledGraph, members, minimal: bool = True, copies: int = 1):
        self.G = G
        self.index = {v: k for k, v in enumerate(G.vertices)}
        by_mask: dict = {}
        for H in members:
            m = 0
            for v in H.vertices:
                m |= 1 << self.index[v]
            same = by_mask.setdefault(m, [])
            if len(same) < copies:
                same.append(H)
        masks = sorted(by_mask, key=lambda m: (bin(m).count("1"), m))
        if minimal:
            kept: list[int] = []
            for m in masks:
                if not any(x & m == x for x in kept):
                    kept.append(m)
            masks = kept
        self.masks = masks
        self.n = len(G.vertices)
        self.groups: list[list[int]] = [[] for _ in range(self.n)]
        self.members: list[list] = [[] for _ in range(self.n)]
        for m in sorted(masks):
            low = (m & -m).bit_length() - 1
            for H in by_mask[m]:
                self.groups[low].append(m)
                self.members[low].append(H)


def _pack(fam: _Family, capacity: int, repeats: bool):
    """Largest multiset of members using each vertex at most ``capacity`` times."""
    memo: dict = {}
    n = fam.n
    groups = fam.groups

    def f(v, start, c1, c2):
        while v < n and not (c1 >> v & 1 and groups[v]):
            v += 1
            start = 0
        if v == n:
            return 0, None
        low = ~((1 << v) - 1)
        c1 &= low
        c2 &= low
        key = (v, start, c1, c2)
        hit = memo.get(key)
        if hit is not None:
            return hit
        best = f(v + 1, 0, c1, c2)[0], None
        grp = groups[v]
        for j in range(start, len(grp)):
            M = grp[j]
            if M & c1 != M:
                continue
            n1 = c1 & ~(M & ~c2)
            n2 = c2 & ~M
            nxt = j if repeats else j + 1
            val = 1 + f(v, nxt, n1, n2)[0]
            if val > best[0]:
                best = val, (j, nxt, n1, n2)
        memo[key] = best
        return best

    full = (1 << n) - 1
    c2 = full if capacity >= 2 else 0
    size = f(0, 0, full, c2)[0]
    # replay the stored choices
    picks = []
    v, start, c1 = 0, 0, full
    while True:
        while v < n and not (c1 >> v & 1 and groups[v]):
            v += 1
            start = 0
        if v == n:
            break
        low = ~((1 << v) - 1)
        c1 &= low
        c2 &= low
        val, choice = memo[(v, start, c1, c2)]
        if choice is None:
            v, start = v + 1, 0
            continue
        j, start, c1, c2 = choice
        picks.append(fam.members[v][j])
    assert len(picks) == size
    return size, picks


def _verify_packing(fam: _Family, members, capacity: int) -> None:
    count: dict = {}
    for H in members:
        for v in H.vertices:
            count[v] = count.get(v, 0) + 1
            if count[v] > capacity:
                raise AssertionError(f"vertex {v} used {count[v]} times")  # pragma: no cover


def max_packing(G: LabelledGraph, F: FamilySpec, cap: int = DEFAULT_FAMILY_CAP,
                max_vertices: int = DEFAULT_MAX_VERTICES, members=None):
    """(nu, witness): the most pairwise vertex-disjoint members."""
    if members is None:
        members = enumerate_family(G, F, cap, max_vertices)
    fam = _Family(G, members)
    size, witness = _pack(fam, 1, False)
    _verify_packing(fam, witness, 1)
    return size, witness


def max_half_integral_packing(G: LabelledGraph, F: FamilySpec, allow_repeats: bool = True,
                              cap: int = DEFAULT_FAMILY_CAP, max_vertices: int = DEFAULT_MAX_VERTICES,
                              members=None):
    """(k, witness of 2k members) with every vertex in at most two members.

    With allow_repeats a member may be listed twice.
    """
    if members is None:
        members = enumerate_family(G, F, cap, max_vertices)
    fam = _Family(G, members, minimal=allow_repeats, copies=1 if allow_repeats else 2)
    size, picks = _pack(fam, 2, allow_repeats)
    k = size // 2
    witness = picks[:2 * k]
    _verify_packing(fam, witness, 2)
    if not allow_repeats and len(set(witness)) != len(witness):  # pragma: no cover
        raise AssertionError("a member repeats in a repetition-free packing")
    return k, witness


def _hit(masks, k: int):
    if not masks:
        return []
    if k == 0:
        return None
    # lower bound: greedily chosen disjoint members all need their own vertex
    used, disjoint = 0, 0
    for m in masks:
        if not m & used:
            used |= m
            disjoint += 1
            if disjoint > k:
                return None
    M = masks[0]
    x = M
    while x:
        bit = x & -x
        x ^= bit
        rest = [m for m in masks if not m & bit]
        sub = _hit(rest, k - 1)
        if sub is not None:
            return [bit] + sub
    return None


def min_hitting_set(G: LabelledGraph, F: FamilySpec, cap: int = DEFAULT_FAMILY_CAP,
                    max_vertices: int = DEFAULT_MAX_VERTICES, members=None):
    """(tau, Z) with Z a smallest vertex set meeting every member; checked on G - Z."""
    if members is None:
        members = enumerate_family(G, F, cap, max_vertices)
    fam = _Family(G, members)
    masks = sorted(fam.masks, key=lambda m: (bin(m).count("1"), m))
    k = 0
    while True:
        sol = _hit(masks, k)
        if sol is not None:
            break
        k += 1
    Z = sorted(G.vertices[b.bit_length() - 1] for b in sol)
    _verify_hitting(G, F, Z, cap, max_vertices)
    return k, Z


def _verify_hitting(G: LabelledGraph, F: FamilySpec, Z, cap, max_vertices) -> None:
    H = G.delete_vertices(Z)
    if F.kind == "nonzero_A_paths":
        F = FamilySpec.nonzero_A_paths(a for a in F.A if a not in set(Z))
    if enumerate_family(H, F, cap, max_vertices):  # pragma: no cover - solver bug guard
        raise AssertionError("hitting set misses a member")


@dataclass
class EPReport:
    nu: int
    nu_half: int
    tau: int
    packing: list = field(default_factory=list)
    half_packing: list = field(default_factory=list)
    hitting_set: list = field(default_factory=list)
    members: int = 0
    runtime_ms: float = 0.0

    def to_json(self, timing: bool = False) -> dict:
        out = {"nu": self.nu, "nu_half": self.nu_half, "tau": self.tau, "members": self.members,
               "packing": [H.to_json() for H in self.packing],
               "half_packing": [H.to_json() for H in self.half_packing],
               "hitting_set": list(self.hitting_set)}
        if timing:
            out["runtime_ms"] = round(self.runtime_ms, 3)
        return out


def ep_report(G: LabelledGraph, F: FamilySpec, allow_repeats: bool = True, cap: int = DEFAULT_FAMILY_CAP,
              max_vertices: int = DEFAULT_MAX_VERTICES) -> EPReport:
    t0 = time.perf_counter()
    members = enumerate_family(G, F, cap, max_vertices)
    nu, pack = max_packing(G, F, members=members)
    k, half = max_half_integral_packing(G, F, allow_repeats, members=members)
    tau, Z = min_hitting_set(G, F, cap, max_vertices, members=members)
    # doubling a packing gives a half-integral one only when members may repeat
    if nu > tau or (allow_repeats and nu > k):  # pragma: no cover - weak duality guard
        raise AssertionError(f"duality violated: nu={nu}, nu_half={k}, tau={tau}")
    rep = EPReport(nu, k, tau, pack, half, Z, len(members))
    rep.runtime_ms = (time.perf_counter() - t0) * 1000
    return rep


CSV_COLUMNS = ("instance", "family", "ν", "ν_half", "τ", "runtime_ms")


def batch_report(instances, allow_repeats: bool = True, timing: bool = True, **caps) -> str:
    """CSV for (name, graph, family) triples, rows sorted by name."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for name, G, F in sorted(instances, key=lambda x: x[0]):
        rep = ep_report(G, F, allow_repeats, **caps)
        w.writerow([name, F.label(), rep.nu, rep.nu_half, rep.tau,
                    f"{rep.runtime_ms:.1f}" if timing else ""])
    return buf.getvalue()

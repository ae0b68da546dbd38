"""Cycle-chains: data model, validation, extraction from odd walls, rerouting.

An open chain is a core path with detour paths Q_k whose ends sit on the
core; the core subpath between those ends is the segment P_k. A closed
chain has a cycle in place of the core and arcs C_k in place of segments.
Replacing any set of segments (arcs) by their detours keeps a path (cycle),
and shifts its weight by the corresponding increments.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import ChainError
from .graph import CycleSpec, LabelledGraph, PathSpec, check_cycle, check_path, weight
from .groups import GroupElem, prime_power
from .walls import Wall, first_on, is_facially_odd, last_on, subwall


@dataclass(frozen=True)
class CycleChain:
    core: PathSpec
    qs: tuple
    segments: tuple  # (a, b) positions on the core, a < b

    @classmethod
    def build(cls, core: PathSpec, qs) -> "CycleChain":
        """Orient each detour along the core and record its segment."""
        pos = {v: k for k, v in enumerate(core.vertices)}
        out_q, segs = [], []
        for Q in qs:
            a, b = Q.vertices[0], Q.vertices[-1]
            if a not in pos or b not in pos:
                raise ChainError("detour ends must lie on the core")
            if pos[a] > pos[b]:
                Q = Q.reversed()
            out_q.append(Q)
            segs.append((min(pos[a], pos[b]), max(pos[a], pos[b])))
        return cls(core, tuple(out_q), tuple(segs))

    def __len__(self):
        return len(self.qs)

    def segment(self, k: int) -> PathSpec:
        a, b = self.segments[k]
        return self.core.subpath(a, b)

    def cycles(self) -> list[CycleSpec]:
        out = []
        for k, Q in enumerate(self.qs):
            P = self.segment(k)
            back = Q.reversed()
            out.append(CycleSpec(P.vertices + back.vertices[1:-1], P.edges + back.edges))
        return out

    def vertex_set(self) -> frozenset:
        return frozenset(self.core.vertices).union(*(Q.vertices for Q in self.qs))

    def to_json(self) -> dict:
        return {"core": self.core.to_json(), "qs": [Q.to_json() for Q in self.qs],
                "segments": [list(s) for s in self.segments]}

    @classmethod
    def from_json(cls, data) -> "CycleChain":
        return cls(PathSpec.from_json(data["core"]), tuple(PathSpec.from_json(q) for q in data["qs"]),
                   tuple(tuple(s) for s in data["segments"]))


@dataclass(frozen=True)
class ClosedCycleChain:
    cycle: CycleSpec
    qs: tuple
    arcs: tuple  # (a, b) positions on the cycle, a < b; C_k runs forward from a to b

    def __len__(self):
        return len(self.qs)

    def arc(self, k: int) -> PathSpec:
        a, b = self.arcs[k]
        return self.cycle.arc(a, b)

    def vertex_set(self) -> frozenset:
        return frozenset(self.cycle.vertices).union(*(Q.vertices for Q in self.qs))

    def to_json(self) -> dict:
        return {"cycle": self.cycle.to_json(), "qs": [Q.to_json() for Q in self.qs],
                "arcs": [list(s) for s in self.arcs]}

    @classmethod
    def from_json(cls, data) -> "ClosedCycleChain":
        return cls(CycleSpec.from_json(data["cycle"]), tuple(PathSpec.from_json(q) for q in data["qs"]),
                   tuple(tuple(s) for s in data["arcs"]))


def close_chain(chain: CycleChain, closing: PathSpec) -> ClosedCycleChain:
    """Close an open chain with a path from the core's last vertex back to its first."""
    core = chain.core
    if closing.vertices[0] != core.vertices[-1] or closing.vertices[-1] != core.vertices[0]:
        raise ChainError("closing path must run from the core's end to its start")
    C = CycleSpec(core.vertices + closing.vertices[1:-1], core.edges + closing.edges)
    return ClosedCycleChain(C, chain.qs, chain.segments)


def concat_chains(chains, connectors) -> CycleChain:
    """Join chains end to start; connectors[k] runs from chain k's end to chain k+1's start."""
    core = chains[0].core
    qs, segs = list(chains[0].qs), list(chains[0].segments)
    for conn, ch in zip(connectors, chains[1:]):
        core = core.then(conn)
        off = len(core.vertices) - 1
        core = core.then(ch.core)
        qs.extend(ch.qs)
        segs.extend((a + off, b + off) for a, b in ch.segments)
    return CycleChain(core, tuple(qs), tuple(segs))


def validate_chain(chain, G: LabelledGraph) -> str | None:
    """First violated chain invariant, or None."""
    closed = isinstance(chain, ClosedCycleChain)
    try:
        if closed:
            check_cycle(G, chain.cycle)
        else:
            check_path(G, chain.core)
        for Q in chain.qs:
            check_path(G, Q)
    except Exception as exc:  # noqa: BLE001 - report any defect
        return f"not a subgraph of the host: {exc}"
    base = chain.cycle.vertices if closed else chain.core.vertices
    spans = chain.arcs if closed else chain.segments
    if len(spans) != len(chain.qs):
        return "one designated subpath per detour is required"
    on_base = set(base)
    used_q: set = set()
    used_seg: set = set()
    for k, (Q, (a, b)) in enumerate(zip(chain.qs, spans)):
        if not (0 <= a < b < len(base)):
            return f"subpath {k} has invalid positions"
        if Q.is_trivial:
            return f"detour {k} is trivial"
        if {Q.vertices[0], Q.vertices[-1]} != {base[a], base[b]}:
            return f"detour {k} and its subpath have different ends"
        if Q.internal & on_base:
            return f"detour {k} meets the core inside"
        if used_q & set(Q.vertices):
            return f"detour {k} meets an earlier detour"
        used_q |= set(Q.vertices)
        seg = set(base[a:b + 1])
        if used_seg & seg:
            return f"subpath {k} meets an earlier subpath"
        used_seg |= seg
    return None


def _span(chain, k: int) -> PathSpec:
    return chain.arc(k) if isinstance(chain, ClosedCycleChain) else chain.segment(k)


def increments(chain, G: LabelledGraph) -> list[GroupElem]:
    """weight(Q_k) - weight(C_k) for every k."""
    return [weight(G, Q) - weight(G, _span(chain, k)) for k, Q in enumerate(chain.qs)]


def is_nonzero(chain, G: LabelledGraph) -> bool:
    return all(not a.is_zero for a in increments(chain, G))


# -- extraction from facially odd walls ------------------------------------------

def _block_chain(W: Wall, B: Wall) -> CycleChain:
    """Length-1 chain inside a 3x2 block B of W, from B's top row to its bottom row."""
    G = W.host
    H = B.rows
    V = B.cols
    bricks = B.bricks

    def shares(C1, C2):
        return bool(set(C1.edges) & set(C2.edges))

    if shares(bricks[(2, 1)], bricks[(1, 1)]) and shares(bricks[(2, 1)], bricks[(1, 2)]):
        mid, outer = bricks[(2, 1)], V[2]
    elif shares(bricks[(2, 2)], bricks[(1, 1)]) and shares(bricks[(2, 2)], bricks[(1, 2)]):
        mid, outer = bricks[(2, 2)], V[0]
    else:  # pragma: no cover - impossible for walls built from paths
        raise ChainError("no middle brick touches both top bricks")
    V2 = V[1]
    wa, wb, wc = first_on(V2, H[1]), last_on(V2, H[1]), first_on(V2, H[2])
    o2, o3 = first_on(outer, H[1]), last_on(outer, H[2])
    pre_a = V2.between(V2.vertices[0], wa)
    pre_b = outer.between(outer.vertices[0], o2).then(H[1].between(o2, wb))
    suf_b = H[1].between(wb, o2).then(outer.between(o2, outer.vertices[-1]))
    suf_c = H[2].between(wc, o3).then(outer.between(o3, outer.vertices[-1]))
    # templates in order: ends (wa, wb), (wb, wc), (wa, wc)
    for (x, y, third), prefix, suffix in (((wa, wb, wc), pre_a, suf_b),
                                         ((wb, wc, wa), pre_b, suf_c),
                                         ((wa, wc, wb), pre_a, suf_c)):
        A1, A2 = mid.arcs_between(x, y)
        through, avoid = (A1, A2) if third in A1.vertices else (A2, A1)
        if weight(G, through) == weight(G, avoid):
            continue
        core = prefix.then(through).then(suffix)
        return CycleChain.build(core, [avoid])
    raise ChainError("brick of weight zero in block")


def chain_from_odd_wall(W: Wall, l: int | None = None) -> CycleChain:
    """Nonzero chain of length l from the top row to row 3l+1 of a facially odd wall.

    Uses the first three vertical paths. Each block of three brick rows
    contributes one detour around its middle brick; blocks are joined along
    the rows they share.
    """
    if l is None:
        l = W.r // 3
    if l < 1 or 3 * l > W.r:
        raise ChainError(f"wall with {W.r} rows cannot hold a chain of length {l}")
    base = subwall(W, (1, 3 * l + 1), (1, 3))
    ok, zero = is_facially_odd(base)
    if not ok:
        raise ChainError(f"wall is not facially odd; zero bricks {zero}")
    parts = [_block_chain(W, subwall(base, (3 * i + 1, 3 * i + 4), (1, 3))) for i in range(l)]
    conns = []
    for i in range(l - 1):
        row = base.rows[3 * i + 3]
        conns.append(row.between(parts[i].core.vertices[-1], parts[i + 1].core.vertices[0]))
    chain = concat_chains(parts, conns)
    problem = validate_chain(chain, W.host)
    if problem or not is_nonzero(chain, W.host):  # pragma: no cover - internal consistency
        raise ChainError(f"extracted chain failed validation: {problem}")
    return chain


def closed_chains_from_wall(W: Wall, k: int, l: int) -> list[ClosedCycleChain]:
    """k disjoint closed nonzero chains of length l from a 3l x (4k-1) facially odd wall."""
    if k == 0:
        return []
    if k < 0 or l < 1 or W.r < 3 * l or W.s < 4 * k - 1:
        raise ChainError(f"need a wall of at least {3 * l} x {4 * k - 1}")
    out = []
    for c in range(k):
        S = subwall(W, (1, 3 * l + 1), (4 * c + 1, 4 * c + 4))
        chain = chain_from_odd_wall(S, l)
        top, bot, extra = S.rows[0], S.rows[-1], S.cols[3]
        s, e = chain.core.vertices[0], chain.core.vertices[-1]
        closing = bot.between(e, extra.vertices[-1]).then(extra.reversed()).then(
            top.between(extra.vertices[0], s))
        closed = close_chain(chain, closing)
        problem = validate_chain(closed, W.host)
        if problem:  # pragma: no cover - internal consistency
            raise ChainError(f"closed chain failed validation: {problem}")
        out.append(closed)
    return out


# -- weight targeting in cyclic groups of prime-power order ------------------------

def _cyclic_prime_power(chain_group, p: int, a: int) -> int:
    if len(chain_group.moduli) != 1 or chain_group.moduli[0] != p**a or prime_power(p**a) != (p, a):
        raise ChainError(f"group must be Z/{p}^{a}")
    return p**a


def pigeonhole_select(chain: ClosedCycleChain, G: LabelledGraph, p: int, a: int):
    """Indices I (|I| = p^a) sharing one increment alpha outside <p>.

    Needs length >= p^(2a-1)(p-1) and every increment outside <p>.
    """
    n = _cyclic_prime_power(G.group, p, a)
    q = p ** (2 * a - 1) * (p - 1)
    if len(chain) < q:
        raise ChainError(f"chain of length {len(chain)} is shorter than {q}")
    inc = increments(chain, G)
    classes: dict[int, list[int]] = {}
    for i, alpha in enumerate(inc):
        if alpha.coords[0] % p == 0:
            raise ChainError(f"increment {i} lies in <{p}>")
        classes.setdefault(alpha.coords[0], []).append(i)
    for value in sorted(classes):
        if len(classes[value]) >= n:
            return tuple(classes[value][:n]), G.group.elem(value)
    raise AssertionError("pigeonhole failed")  # pragma: no cover


def reroute_to_weight(chain: ClosedCycleChain, G: LabelledGraph, I, alpha: GroupElem,
                      target: GroupElem) -> CycleSpec:
    """Cycle of weight ``target``: swap C_i for Q_i over the first j indices of I."""
    m = G.group.moduli[0] if len(G.group.moduli) == 1 else None
    if m is None:
        raise ChainError("rerouting needs a cyclic group")
    alpha, target = G.group.elem(alpha), G.group.elem(target)
    a = alpha.coords[0]
    if gcd(a, m) != 1:
        raise ChainError(f"{alpha} does not generate Z/{m}")
    need = (target - weight(G, chain.cycle)).coords[0]
    j = need * pow(a, -1, m) % m
    if j > len(I):
        raise ChainError("index set too small")
    inc = increments(chain, G)
    J = sorted(I[:j])
    for i in J:
        if inc[i] != alpha:
            raise ChainError(f"increment {i} differs from alpha")
    C = chain.cycle
    starts = {chain.arcs[i][0]: i for i in J}
    vs, es = [], []
    pos = 0
    n = len(C.vertices)
    while pos < n:
        if pos in starts:
            i = starts[pos]
            Q = chain.qs[i]
            if Q.vertices[0] != C.vertices[pos]:
                Q = Q.reversed()
            vs.extend(Q.vertices[:-1])
            es.extend(Q.edges)
            pos = chain.arcs[i][1]
        else:
            vs.append(C.vertices[pos])
            es.append(C.edges[pos])
            pos += 1
    out = CycleSpec(tuple(vs), tuple(es))
    check_cycle(G, out)
    if weight(G, out) != target:  # pragma: no cover - internal consistency
        raise ChainError("rerouted cycle missed the target")
    return out

"""Linkages over an ordered ground set and the packings they yield in walls.

For a wall W the ground set is its top nails, ordered along the first
horizontal path R. Each path of a linkage is oriented so that its first
vertex x precedes its last vertex y.
"""
from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass
from itertools import combinations

from .chains import ClosedCycleChain, CycleChain, close_chain, is_nonzero, validate_chain
from .errors import LinkageError
from .graph import CycleSpec, PathSpec, check_path, weight
from .walls import Wall, first_on, is_bipartite_wall


@dataclass(frozen=True)
class Linkage:
    order: tuple  # ground set, increasing
    paths: tuple  # PathSpecs

    def __post_init__(self):
        rank = {v: k for k, v in enumerate(self.order)}
        used: set = set()
        fixed = []
        for P in self.paths:
            a, b = P.vertices[0], P.vertices[-1]
            if a not in rank or b not in rank or a == b:
                raise LinkageError("path ends must be two distinct ground-set elements")
            if P.internal & rank.keys():
                raise LinkageError("path interior meets the ground set")
            if used & set(P.vertices):
                raise LinkageError("paths are not disjoint")
            used |= set(P.vertices)
            fixed.append(P if rank[a] < rank[b] else P.reversed())
        object.__setattr__(self, "paths", tuple(fixed))

    @classmethod
    def from_endpoints(cls, pairs, order=None) -> "Linkage":
        """Abstract linkage: one synthetic edge per pair."""
        if order is None:
            order = sorted({v for p in pairs for v in p})
        return cls(tuple(order), tuple(PathSpec((a, b), (k,)) for k, (a, b) in enumerate(pairs)))

    def __len__(self):
        return len(self.paths)

    def rank(self, v) -> int:
        return self.order.index(v)

    def interval(self, k: int) -> tuple[int, int]:
        P = self.paths[k]
        return self.rank(P.vertices[0]), self.rank(P.vertices[-1])

    def subset(self, idx) -> "Linkage":
        idx = sorted(idx, key=lambda k: self.interval(k))
        return Linkage(self.order, tuple(self.paths[k] for k in idx))

    def sorted(self) -> "Linkage":
        return self.subset(range(len(self)))

    def to_json(self) -> dict:
        return {"order": list(self.order), "paths": [P.to_json() for P in self.paths]}

    @classmethod
    def from_json(cls, data) -> "Linkage":
        return cls(tuple(data["order"]), tuple(PathSpec.from_json(p) for p in data["paths"]))


@dataclass(frozen=True)
class PurityVerdict:
    kind: str  # series | nested | crossing | impure
    pair: tuple | None = None


def _classify(p: tuple, q: tuple) -> str:
    p1, p2 = p
    q1, q2 = q
    if len({p1, p2, q1, q2}) < 4:
        raise LinkageError("paths share an endpoint")
    if p2 < q1 or q2 < p1:
        return "series"
    if p1 < q1 < q2 < p2 or q1 < p1 < p2 < q2:
        return "nested"
    return "crossing"


def classify_pair(P: PathSpec, Q: PathSpec, order) -> str:
    rank = {v: k for k, v in enumerate(order)}
    p = sorted((rank[P.vertices[0]], rank[P.vertices[-1]]))
    q = sorted((rank[Q.vertices[0]], rank[Q.vertices[-1]]))
    return _classify(tuple(p), tuple(q))


def purity(L: Linkage) -> PurityVerdict:
    kinds = set()
    first = None
    for i, j in combinations(range(len(L)), 2):
        kind = _classify(L.interval(i), L.interval(j))
        if first is None:
            first = kind
        if kind != first:
            return PurityVerdict("impure", (i, j))
        kinds.add(kind)
    # singletons and the empty linkage are pure in every sense; report series
    return PurityVerdict(first or "series")


def _longest_decreasing(seq) -> list[int]:
    """Indices of a longest strictly decreasing subsequence."""
    tails, tail_idx, prev = [], [], [None] * len(seq)
    for k, x in enumerate(seq):
        key = -x
        pos = bisect_left(tails, key)
        if pos == len(tails):
            tails.append(key)
            tail_idx.append(k)
        else:
            tails[pos] = key
            tail_idx[pos] = k
        prev[k] = tail_idx[pos - 1] if pos else None
    out, k = [], tail_idx[-1] if tail_idx else None
    while k is not None:
        out.append(k)
        k = prev[k]
    return out[::-1]


def _increasing_piles(seq) -> list[list[int]]:
    """Cover by increasing subsequences; as many piles as a longest decreasing one."""
    piles: list[list[int]] = []
    for k, x in enumerate(seq):
        best = None
        for p, pile in enumerate(piles):
            top = seq[pile[-1]]
            if top < x and (best is None or top > seq[piles[best][-1]]):
                best = p
        if best is None:
            piles.append([k])
        else:
            piles[best].append(k)
    return piles


def _max_series(iv, idx) -> list[int]:
    out, last = [], None
    for k in sorted(idx, key=lambda k: iv[k][1]):
        if last is None or iv[k][0] > last:
            out.append(k)
            last = iv[k][1]
    return out


def _max_common_point(iv, idx) -> list[int]:
    best: list[int] = []
    for k in idx:
        x = iv[k][0]
        here = [m for m in idx if iv[m][0] <= x <= iv[m][1]]
        if len(here) > len(best):
            best = here
    return best


def extract_pure(L: Linkage, t: int) -> Linkage:
    """A pure sub-linkage of size at least t (indeed at least ceil(|L|^(1/3))).

    Nested families are decreasing runs of right ends (paths sorted by left
    end). If those are short, the right ends split into few increasing runs;
    inside the longest run two paths either cross or are in series, and an
    interval argument yields many of one kind.
    """
    n = len(L)
    if t < 0 or n < t**3:
        raise LinkageError(f"need at least {t ** 3} paths, got {n}")
    L = L.sorted()
    iv = [L.interval(k) for k in range(n)]
    rights = [b for _, b in iv]
    nested = _longest_decreasing(rights)
    series = _max_series(iv, range(n))
    piles = _increasing_piles(rights)
    chain = max(piles, key=len) if piles else []
    crossing = _max_common_point(iv, chain)
    best = max((series, nested, crossing), key=len)
    out = L.subset(best)
    if len(out) > 1 and purity(out).kind == "impure":  # pragma: no cover - internal consistency
        raise AssertionError("extracted linkage is impure")
    return out


# -- linkages of walls -------------------------------------------------------------

def check_wall_linkage(W: Wall, L: Linkage) -> None:
    nails = set(W.top_nails)
    for P in L.paths:
        check_path(W.host, P)
        if P.vertices[0] not in nails or P.vertices[-1] not in nails:
            raise LinkageError("linkage ends must be top nails")
        if P.internal & W.vertex_set:
            raise LinkageError("linkage path runs through the wall")
        if set(P.edges) & W.edge_ids:
            raise LinkageError("linkage path uses a wall edge")


def _row_cycle(W: Wall, P: PathSpec) -> CycleSpec:
    R = W.rows[0]
    back = R.between(P.vertices[-1], P.vertices[0])
    return CycleSpec(P.vertices + back.vertices[1:-1], P.edges + back.edges)


def is_gamma_odd_linkage(W: Wall, L: Linkage) -> list[bool]:
    """For each path P: does W + P contain a nonzero cycle?

    Every cycle through P closes along a path inside W, and on a bipartite
    wall all such closings have the same weight, so the top-row closing
    decides.
    """
    ok, _ = is_bipartite_wall(W)
    if not ok:
        raise LinkageError("wall is not Gamma-bipartite")
    check_wall_linkage(W, L)
    return [not weight(W.host, _row_cycle(W, P)).is_zero for P in L.paths]


def _pieces_to_cycle(pieces) -> CycleSpec:
    """Glue paths, each starting where the previous one ends, into a cycle."""
    vs, es = [pieces[0].vertices[0]], []
    for p in pieces:
        if p.vertices[0] != vs[-1]:
            raise LinkageError("pieces do not join up")
        vs.extend(p.vertices[1:])
        es.extend(p.edges)
    if vs[-1] != vs[0]:
        raise LinkageError("pieces do not close")
    if len(set(vs[:-1])) != len(vs) - 1:
        raise LinkageError("pieces overlap; the cycle is not simple")
    return CycleSpec(tuple(vs[:-1]), tuple(es))


def _vertical_near(W: Wall, x: int, side: str) -> int:
    """Index of the vertical path starting nearest to x on the top row, on the given side."""
    R = W.rows[0]
    px = R.vertices.index(x)
    starts = [(R.vertices.index(V.vertices[0]), j) for j, V in enumerate(W.cols)]
    if side == "left":
        cand = [(p, j) for p, j in starts if p < px]
        if not cand:
            raise LinkageError(f"no vertical path left of {x}")
        return max(cand)[1]
    cand = [(p, j) for p, j in starts if p > px]
    if not cand:
        raise LinkageError(f"no vertical path right of {x}")
    return min(cand)[1]


def _detour(W: Wall, x: int, y: int, row: int) -> PathSpec:
    """x -> left vertical -> row (1-based) -> right vertical -> y, inside W."""
    R = W.rows[0]
    VL = W.cols[_vertical_near(W, x, "left")]
    VR = W.cols[_vertical_near(W, y, "right")]
    H = W.rows[row - 1]
    fl, fr = first_on(VL, H), first_on(VR, H)
    return (R.between(x, VL.vertices[0]).then(VL.between(VL.vertices[0], fl))
            .then(H.between(fl, fr)).then(VR.between(fr, VR.vertices[0]))
            .then(R.between(VR.vertices[0], y)))


def _check_pure(L: Linkage) -> str:
    kind = purity(L).kind
    if kind == "impure":
        raise LinkageError("linkage is not pure")
    return kind


def packing_from_linkage(W: Wall, L: Linkage, k: int, mode: str = "integral") -> list[CycleSpec]:
    """Nonzero cycles in W + L: k disjoint ones, or 2k with every vertex in at most two."""
    if mode not in ("integral", "half_integral"):
        raise LinkageError(f"unknown mode {mode}")
    check_wall_linkage(W, L)
    L = L.sorted()
    kind = _check_pure(L) if len(L) > 1 else "series"
    G = W.host
    R = W.rows[0]
    count = 2 * k if mode == "half_integral" else k
    out: list[CycleSpec] = []
    if kind == "series":
        if len(L) < count:
            raise LinkageError(f"need {count} series paths")
        out = [_row_cycle(W, P) for P in L.paths[:count]]
    elif kind == "nested":
        if len(L) < count:
            raise LinkageError(f"need {count} nested paths")
        if count > W.r + 1:
            raise LinkageError("wall has too few rows for the nested construction")
        # L_i is the i-th path counting from the centre of the nest; it closes via row i
        inner = list(L.paths[::-1])[:count]
        for i, P in enumerate(inner, 1):
            x, y = P.vertices[0], P.vertices[-1]
            if i == 1:
                out.append(_row_cycle(W, P))
            else:
                out.append(_pieces_to_cycle([P.reversed(), _detour(W, x, y, i)]))
    elif mode == "integral":
        if G.group.has_involution():
            raise LinkageError("crossing construction needs a group without involutions")
        if len(L) < 3 * k:
            raise LinkageError(f"need {3 * k} crossing paths")
        for i in range(k):
            trip = L.paths[3 * i:3 * i + 3]
            for a, b in combinations(range(3), 2):
                Pa, Pb = trip[a], trip[b]
                C = _pieces_to_cycle([Pa, R.between(Pa.vertices[-1], Pb.vertices[-1]),
                                      Pb.reversed(), R.between(Pb.vertices[0], Pa.vertices[0])])
                if not weight(G, C).is_zero:
                    out.append(C)
                    break
            else:
                raise LinkageError(f"triple {i} carries no nonzero cycle; linkage is not odd")
    else:
        if len(L) < 2 * k:
            raise LinkageError(f"need {2 * k} crossing paths")
        if 2 * k + 1 > W.r + 1:
            raise LinkageError("wall has too few rows for the half-integral construction")
        for i, P in enumerate(L.paths[:2 * k], 1):
            out.append(_pieces_to_cycle([P.reversed(), _detour(W, P.vertices[0], P.vertices[-1], i + 1)]))
    limit = 2 if mode == "half_integral" else 1
    seen: dict = {}
    for C in out:
        if weight(G, C).is_zero:
            raise LinkageError("a constructed cycle has weight zero; linkage is not odd")
        for v in C.vertices:
            seen[v] = seen.get(v, 0) + 1
            if seen[v] > limit:
                raise LinkageError(f"vertex {v} lies in more than {limit} cycles")
    return out


def _pair_detour(R: PathSpec, Pa: PathSpec, Pb: PathSpec) -> PathSpec:
    """x_a -> L_a -> y_a -> along R -> y_b -> L_b backwards -> x_b."""
    return Pa.then(R.between(Pa.vertices[-1], Pb.vertices[-1])).then(Pb.reversed())


def _chain_parts(W: Wall, L: Linkage, count: int):
    """Detour paths (in order along R) for ``count`` chain links."""
    G = W.host
    R = W.rows[0]
    kind = _check_pure(L) if len(L) > 1 else "series"
    if G.group.has_involution():
        raise LinkageError("group has an element of order two")
    if kind == "series":
        if len(L) < count:
            raise LinkageError(f"need {count} series paths")
        return list(L.paths[:count])
    if len(L) < 3 * count:
        raise LinkageError(f"need {3 * count} paths")
    qs = []
    for i in range(count):
        trip = L.paths[3 * i:3 * i + 3]
        for a, b in combinations(range(3), 2):
            Q = _pair_detour(R, trip[a], trip[b])
            seg = R.between(Q.vertices[0], Q.vertices[-1])
            if weight(G, Q) != weight(G, seg):
                qs.append(Q)
                break
        else:
            raise LinkageError(f"triple {i} yields no nonzero link; linkage is not odd")
    return qs


def _chain_on_row(W: Wall, qs) -> CycleChain:
    R = W.rows[0]
    pos = [sorted((R.vertices.index(Q.vertices[0]), R.vertices.index(Q.vertices[-1]))) for Q in qs]
    core = R.subpath(min(p[0] for p in pos), max(p[1] for p in pos))
    return CycleChain.build(core, qs)


def chain_from_linkage(W: Wall, L: Linkage, l: int) -> CycleChain:
    """Nonzero chain of length l whose core is a subpath of the top row."""
    if l < 1:
        raise LinkageError("chain length must be positive")
    check_wall_linkage(W, L)
    chain = _chain_on_row(W, _chain_parts(W, L.sorted(), l))
    problem = validate_chain(chain, W.host)
    if problem or not is_nonzero(chain, W.host):
        raise LinkageError(f"chain failed validation: {problem or 'zero link'}")
    return chain


def closed_chains_from_linkage(W: Wall, L: Linkage, k: int, l: int) -> list[ClosedCycleChain]:
    """k disjoint closed nonzero chains of length l, each closed through the second row."""
    if k == 0:
        return []
    if k < 0 or l < 1:
        raise LinkageError("need k >= 0 and l >= 1")
    check_wall_linkage(W, L)
    qs = _chain_parts(W, L.sorted(), k * l)
    out = []
    used: set = set()
    R = W.rows[0]
    for c in range(k):
        chain = _chain_on_row(W, qs[c * l:(c + 1) * l])
        s, e = chain.core.vertices[0], chain.core.vertices[-1]
        VL = W.cols[_vertical_near(W, s, "left")]
        VR = W.cols[_vertical_near(W, e, "right")]
        H = W.rows[1]
        fl, fr = first_on(VL, H), first_on(VR, H)
        closing = (R.between(e, VR.vertices[0]).then(VR.between(VR.vertices[0], fr))
                   .then(H.between(fr, fl)).then(VL.between(fl, VL.vertices[0]))
                   .then(R.between(VL.vertices[0], s)))
        closed = close_chain(chain, closing)
        problem = validate_chain(closed, W.host)
        if problem:
            raise LinkageError(f"closed chain {c} is invalid: {problem}")
        vs = closed.vertex_set()
        if vs & used:
            raise LinkageError("linkage ends are too close together for disjoint closed chains")
        used |= vs
        out.append(closed)
    return out

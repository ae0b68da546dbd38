"""Internally vertex-disjoint paths by unit-capacity augmenting paths."""
from __future__ import annotations

from collections import deque

from .graph import LabelledGraph, PathSpec


def disjoint_paths(G: LabelledGraph, s: int, t: int, k: int,
                   skip_edges=frozenset(), blocked=frozenset()) -> list[PathSpec]:
    """Up to k internally vertex-disjoint s-t paths (fewer if fewer exist).

    Parallel edges count as distinct routes; loops are ignored.
    """
    if s == t:
        raise ValueError("endpoints must differ")

    def node_in(w):
        return ("n", w) if w in (s, t) else ("i", w)

    def node_out(w):
        return ("n", w) if w in (s, t) else ("o", w)

    # arc: [head, residual capacity, index of reverse arc, edge id or None, forward?]
    arcs: dict = {}

    def add_arc(a, b, eid):
        la = arcs.setdefault(a, [])
        lb = arcs.setdefault(b, [])
        la.append([b, 1, len(lb), eid, True])
        lb.append([a, 0, len(la) - 1, eid, False])

    for w in G.vertices:
        if w in blocked:
            continue
        if w not in (s, t):
            add_arc(node_in(w), node_out(w), None)
    for e in G.edges:
        if e.is_loop or e.id in skip_edges or e.u in blocked or e.v in blocked:
            continue
        add_arc(node_out(e.u), node_in(e.v), e.id)
        add_arc(node_out(e.v), node_in(e.u), e.id)

    src, dst = ("n", s), ("n", t)
    if src not in arcs or dst not in arcs:
        return []
    flow = 0
    while flow < k:
        prev = {src: None}
        q = deque([src])
        while q and dst not in prev:
            a = q.popleft()
            for idx, arc in enumerate(arcs[a]):
                if arc[1] > 0 and arc[0] not in prev:
                    prev[arc[0]] = (a, idx)
                    q.append(arc[0])
        if dst not in prev:
            break
        b = dst
        while prev[b] is not None:
            a, idx = prev[b]
            arc = arcs[a][idx]
            arc[1] -= 1
            arcs[arc[0]][arc[2]][1] += 1
            b = a
        flow += 1

    # decompose: a forward arc carries flow when its residual dropped to 0
    used = {a: [arc for arc in lst if arc[4] and arc[1] == 0] for a, lst in arcs.items()}
    paths = []
    for _ in range(flow):
        vs, es = [s], []
        a = src
        while a != dst:
            arc = used[a].pop(0)
            if arc[3] is not None:
                es.append(arc[3])
            a = arc[0]
            if arc[3] is not None:
                vs.append(a[1])
        paths.append(PathSpec(tuple(vs), tuple(es)))
    return paths


def local_connectivity_at_least(G: LabelledGraph, s: int, t: int, k: int) -> bool:
    return len(disjoint_paths(G, s, t, k)) >= k

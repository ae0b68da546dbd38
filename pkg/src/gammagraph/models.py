"""K_t-models in labelled hosts.

A model assigns to every index i a subtree ``trees[i]`` of the host and to
every pair i < j one host edge joining tree i to tree j. Indices are
0-based throughout this module.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations

from .chains import ClosedCycleChain, CycleChain, close_chain, concat_chains, is_nonzero, validate_chain
from .errors import ModelError
from .graph import CycleSpec, LabelledGraph, PathSpec, iter_cycles, weight


@dataclass(frozen=True, eq=False)
class KModel:
    host: LabelledGraph
    trees: tuple        # vertex tuples
    tree_edges: tuple   # edge-id tuples, one per tree
    links: dict         # (i, j) with i < j -> host edge id

    @property
    def t(self) -> int:
        return len(self.trees)

    def link(self, i: int, j: int) -> int:
        return self.links[(min(i, j), max(i, j))]

    def link_end(self, i: int, j: int) -> int:
        """End of the i-j connecting edge inside tree i."""
        e = self.host.edge(self.link(i, j))
        return e.u if e.u in self._tree_sets[i] else e.v

    @property
    def _tree_sets(self):
        cache = self.__dict__.get("_ts")
        if cache is None:
            cache = [frozenset(T) for T in self.trees]
            self.__dict__["_ts"] = cache
        return cache

    def tree(self, i: int) -> LabelledGraph:
        return self.host.edge_subgraph(self.tree_edges[i], self.trees[i])

    def sub(self, U) -> LabelledGraph:
        """The union of the trees indexed by U and the edges among them."""
        U = sorted(U)
        eids = [e for i in U for e in self.tree_edges[i]]
        eids += [self.link(i, j) for i, j in combinations(U, 2)]
        vs = [v for i in U for v in self.trees[i]]
        return self.host.edge_subgraph(eids, vs)

    def whole(self) -> LabelledGraph:
        return self.sub(range(self.t))

    def submodel(self, indices) -> "KModel":
        idx = list(indices)
        links = {(a, b): self.link(idx[a], idx[b]) for a, b in combinations(range(len(idx)), 2)}
        return KModel(self.host, tuple(self.trees[i] for i in idx),
                      tuple(self.tree_edges[i] for i in idx), links)

    def tree_path(self, i: int, a: int, b: int) -> PathSpec:
        return _tree_path(self.tree(i), a, b)

    def to_json(self) -> dict:
        return {"host": self.host.to_json(),
                "trees": [list(T) for T in self.trees],
                "tree_edges": [list(E) for E in self.tree_edges],
                "links": [[i, j, e] for (i, j), e in sorted(self.links.items())]}

    @classmethod
    def from_json(cls, data) -> "KModel":
        return cls(LabelledGraph.from_json(data["host"]),
                   tuple(tuple(T) for T in data["trees"]),
                   tuple(tuple(E) for E in data["tree_edges"]),
                   {(int(i), int(j)): int(e) for i, j, e in data["links"]})


def _tree_path(T: LabelledGraph, a: int, b: int) -> PathSpec:
    prev = {a: None}
    q = deque([a])
    while q:
        x = q.popleft()
        for eid, y in T.incident(x):
            if y not in prev:
                prev[y] = (x, eid)
                q.append(y)
    if b not in prev:
        raise ModelError(f"{b} not reachable from {a} in tree")
    vs, es = [b], []
    while prev[vs[-1]] is not None:
        x, eid = prev[vs[-1]]
        vs.append(x)
        es.append(eid)
    return PathSpec(tuple(vs[::-1]), tuple(es[::-1]))


def validate_model(M: KModel) -> str | None:
    """First violated model invariant, or None."""
    H = M.host
    seen: dict = {}
    if len(M.tree_edges) != M.t:
        return "one edge list per tree is required"
    for i, T in enumerate(M.trees):
        if not T:
            return f"tree {i} is empty"
        for v in T:
            if not H.has_vertex(v):
                return f"tree {i} uses unknown vertex {v}"
            if v in seen:
                return f"trees not disjoint: trees {seen[v]} and {i} share vertex {v}"
            seen[v] = i
    for i, T in enumerate(M.trees):
        Ts = set(T)
        E = M.tree_edges[i]
        if len(E) != len(T) - 1:
            return f"tree {i} has {len(E)} edges for {len(T)} vertices"
        for eid in E:
            if not H.has_edge(eid):
                return f"tree {i} uses unknown edge {eid}"
            e = H.edge(eid)
            if e.u not in Ts or e.v not in Ts or e.is_loop:
                return f"edge {eid} of tree {i} leaves the tree"
        comp = {T[0]}
        q = deque([T[0]])
        Tg = H.edge_subgraph(E, T)
        while q:
            x = q.popleft()
            for _, y in Tg.incident(x):
                if y not in comp:
                    comp.add(y)
                    q.append(y)
        if len(comp) != len(T):
            return f"tree {i} is not connected"
    tree_edge_ids = {e for E in M.tree_edges for e in E}
    used: set = set()
    for i, j in combinations(range(M.t), 2):
        if (i, j) not in M.links:
            return f"missing edge for pair ({i}, {j})"
        eid = M.links[(i, j)]
        if not H.has_edge(eid):
            return f"pair ({i}, {j}) uses unknown edge {eid}"
        if eid in used or eid in tree_edge_ids:
            return f"edge {eid} is used twice"
        used.add(eid)
        e = H.edge(eid)
        if {seen.get(e.u), seen.get(e.v)} != {i, j}:
            return f"edge {eid} does not join trees {i} and {j}"
    extra = set(M.links) - {(i, j) for i, j in combinations(range(M.t), 2)}
    if extra:
        return f"unexpected pair keys {sorted(extra)}"
    return None


def _has_nonzero_cycle(G: LabelledGraph) -> bool:
    return any(not weight(G, C).is_zero for C in iter_cycles(G))


def classify_model(M: KModel):
    """('gamma_odd' | 'gamma_bipartite' | 'mixed', {4-subset: has nonzero cycle})."""
    if M.t < 4:
        raise ModelError("classification needs t >= 4")
    verdicts = {U: _has_nonzero_cycle(M.sub(U)) for U in combinations(range(M.t), 4)}
    if all(verdicts.values()):
        kind = "gamma_odd"
    elif not any(verdicts.values()):
        kind = "gamma_bipartite"
    else:
        kind = "mixed"
    return kind, verdicts


# -- centrality and branching ----------------------------------------------------

@dataclass(frozen=True)
class CentralitySet:
    i: int
    d: int
    vertices: frozenset


def _components_minus(T: LabelledGraph, s: int) -> list[set]:
    comps = []
    for _, start in T.incident(s):
        if start == s or any(start in c for c in comps):
            continue
        comp = {start}
        q = deque([start])
        while q:
            x = q.popleft()
            for _, y in T.incident(x):
                if y != s and y not in comp:
                    comp.add(y)
                    q.append(y)
        comps.append(comp)
    return comps


def _ends(M: KModel, i: int) -> dict:
    return {j: M.link_end(i, j) for j in range(M.t) if j != i}


def _heavy(M: KModel, T: LabelledGraph, ends: dict, s: int, d: int):
    """Components of T - s holding ends for at least t-1-d distinct indices."""
    need = M.t - 1 - d
    out = []
    for comp in _components_minus(T, s):
        if sum(1 for v in ends.values() if v in comp) >= need:
            out.append(comp)
    return out


def is_d_central(M: KModel, i: int, s: int, d: int) -> bool:
    T = M.tree(i)
    return not _heavy(M, T, _ends(M, i), s, d)


def d_central_vertices(M: KModel, i: int, d: int) -> CentralitySet:
    """All d-central vertices of tree i.

    For d < (t-1)/2 a walk from the least vertex towards the unique heavy
    component reaches a central vertex; the central vertices form a subtree,
    so a flood fill from there collects them all. Larger d falls back to
    testing every vertex.
    """
    T = M.tree(i)
    ends = _ends(M, i)
    if 2 * d >= M.t - 1:
        return CentralitySet(i, d, frozenset(v for v in T.vertices if not _heavy(M, T, ends, v, d)))
    s = T.vertices[0]
    visited = {s}
    while True:
        heavy = _heavy(M, T, ends, s, d)
        if not heavy:
            break
        nxt = next(y for _, y in T.incident(s) if y in heavy[0])
        if nxt in visited:  # pragma: no cover - excluded by the counting argument
            raise ModelError("centrality walk backtracked")
        visited.add(nxt)
        s = nxt
    found = {s}
    q = deque([s])
    while q:
        x = q.popleft()
        for _, y in T.incident(x):
            if y not in found and not _heavy(M, T, ends, y, d):
                found.add(y)
                q.append(y)
    return CentralitySet(i, d, frozenset(found))


def _slots(M: KModel, i: int, u: int) -> dict:
    """index j -> the branch at u (a component of T - u, or u's own edge) holding j's end."""
    T = M.tree(i)
    comps = _components_minus(T, u)
    out = {}
    for j, v in _ends(M, i).items():
        if v == u:
            out[j] = ("edge", j)
        else:
            out[j] = ("comp", next(k for k, c in enumerate(comps) if v in c))
    return out


def branches_to(M: KModel, i: int, u: int, js) -> bool:
    """Do the connecting edges for the three indices js form a 3-star centred at u?"""
    sl = _slots(M, i, u)
    return len({sl[j] for j in js}) == 3


def is_d_branching(M: KModel, i: int, u: int, d: int) -> bool:
    """u branches avoiding every Y of size <= d.

    Group the indices by branch at u; an adversary removing d indices leaves
    fewer than three branches iff everything outside the two largest
    branches fits in its budget.
    """
    if u not in M._tree_sets[i]:
        raise ModelError(f"vertex {u} is not in tree {i}")
    sizes: dict = {}
    for slot in _slots(M, i, u).values():
        sizes[slot] = sizes.get(slot, 0) + 1
    counts = sorted(sizes.values(), reverse=True)
    return sum(counts[2:]) > d


def landing_points(M: KModel, i: int, C) -> dict:
    """index j -> the vertex where the tree path from j's end first meets C."""
    T = M.tree(i)
    C = set(C)
    out = {}
    for j, v in _ends(M, i).items():
        prev = {v: None}
        q = deque([v])
        hit = v if v in C else None
        while hit is None and q:
            x = q.popleft()
            for _, y in T.incident(x):
                if y not in prev:
                    prev[y] = x
                    if y in C:
                        hit = y
                        break
                    q.append(y)
        out[j] = hit
    return out


# -- chains from odd models -------------------------------------------------------

def _first_nonzero_cycle(G: LabelledGraph) -> CycleSpec | None:
    best = None
    for C in iter_cycles(G):
        if not weight(G, C).is_zero:
            C = C.canonical()
            if best is None or C.sort_key() < best.sort_key():
                best = C
    return best


def _to_cycle(M: KModel, src: int, via: int, C: CycleSpec) -> PathSpec:
    """Path from tree ``src`` through the src-via edge into tree ``via``, ending on C."""
    start = M.link_end(src, via)
    entry = M.link_end(via, src)
    on_c = set(C.vertices)
    T = M.tree(via)
    prev = {entry: None}
    q = deque([entry])
    hit = entry if entry in on_c else None
    while hit is None:
        x = q.popleft()
        for eid, y in T.incident(x):
            if y not in prev:
                prev[y] = (x, eid)
                if y in on_c:
                    hit = y
                    break
                q.append(y)
    vs, es = [hit], []
    while prev[vs[-1]] is not None:
        x, eid = prev[vs[-1]]
        vs.append(x)
        es.append(eid)
    inner = PathSpec(tuple(vs[::-1]), tuple(es[::-1]))
    return PathSpec((start,), ()).then(PathSpec((start, entry), (M.link(src, via),))).then(inner)


def _block_chain(M: KModel, base: int) -> CycleChain:
    """Length-1 chain in trees base..base+5, from tree base to tree base+5."""
    G = M.host
    v1, mids, v6 = base, [base + 1, base + 2, base + 3, base + 4], base + 5
    C = _first_nonzero_cycle(M.sub(mids))
    if C is None:
        raise ModelError(f"trees {mids} carry no nonzero cycle; model is not odd")
    on_c = set(C.vertices)
    met = [x for x in mids if on_c & M._tree_sets[x]][:3]
    for role2 in met:
        others = [x for x in met if x != role2]
        R = _to_cycle(M, v1, role2, C)
        r = R.vertices[-1]
        ps = {x: _to_cycle(M, v6, x, C) for x in others}
        w3, w4 = (ps[x].vertices[-1] for x in others)
        A, B = C.arcs_between(w3, w4)
        q1 = B if r in A.vertices else A  # the w3-w4 path avoiding r
        if weight(G, q1).is_zero:
            continue
        for x in others:
            wj = ps[x].vertices[-1]
            A, B = C.arcs_between(r, wj)
            if weight(G, A) != weight(G, B):
                core = R.then(A).then(ps[x].reversed())
                return CycleChain.build(core, [B])
    raise ModelError("no valid role assignment; group has an involution or model is not odd")


def chain_from_odd_model(M: KModel) -> CycleChain:
    """Nonzero chain of length l in an odd K_{5l+1}-model, core from tree 0 to tree 5l."""
    if M.host.group.has_involution():
        raise ModelError("group has an element of order two")
    if M.t < 6 or (M.t - 1) % 5:
        raise ModelError(f"model size {M.t} is not of the form 5l+1")
    l = (M.t - 1) // 5
    parts = [_block_chain(M, 5 * b) for b in range(l)]
    conns = [M.tree_path(5 * (b + 1), parts[b].core.vertices[-1], parts[b + 1].core.vertices[0])
             for b in range(l - 1)]
    chain = concat_chains(parts, conns)
    problem = validate_chain(chain, M.host)
    if problem or not is_nonzero(chain, M.host):  # pragma: no cover - internal consistency
        raise ModelError(f"extracted chain failed validation: {problem}")
    return chain


def closed_chains_from_model(M: KModel, k: int, l: int) -> list[ClosedCycleChain]:
    """k disjoint closed nonzero chains of length l from an odd K_{k(5l+1)}-model."""
    if k == 0:
        return []
    if M.t != k * (5 * l + 1):
        raise ModelError(f"model size {M.t} differs from k(5l+1) = {k * (5 * l + 1)}")
    out = []
    size = 5 * l + 1
    for c in range(k):
        idx = list(range(c * size, (c + 1) * size))
        sub = M.submodel(idx)
        chain = chain_from_odd_model(sub)
        first, last = 0, size - 1
        s, e = chain.core.vertices[0], chain.core.vertices[-1]
        closing = sub.tree_path(last, e, sub.link_end(last, first)).then(
            PathSpec((sub.link_end(last, first), sub.link_end(first, last)), (sub.link(first, last),))).then(
            sub.tree_path(first, sub.link_end(first, last), s))
        closed = close_chain(chain, closing)
        problem = validate_chain(closed, M.host)
        if problem:  # pragma: no cover - internal consistency
            raise ModelError(f"closed chain failed validation: {problem}")
        out.append(closed)
    return out

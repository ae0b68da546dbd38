"""Group-labelled multigraphs, paths, cycles and the brute-force oracles.

Graphs may carry loops and parallel edges. Vertex and edge ids are plain
integers. Every operation returns a new graph; nothing is mutated in place.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Union

from .errors import CapExceeded, GraphError
from .groups import GroupElem, GroupSpec, make_group

DEFAULT_CAP = 10**6


@dataclass(frozen=True)
class Edge:
    id: int
    u: int
    v: int
    label: GroupElem

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    def other(self, x: int) -> int:
        if x == self.u:
            return self.v
        if x == self.v:
            return self.u
        raise GraphError(f"vertex {x} is not an end of edge {self.id}")


@dataclass(frozen=True)
class PathSpec:
    """A simple path: vertices[i] and vertices[i+1] are joined by edges[i]."""

    vertices: tuple
    edges: tuple

    def __post_init__(self):
        if len(self.vertices) != len(self.edges) + 1:
            raise GraphError("path needs exactly one more vertex than edges")
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("path repeats a vertex")

    @classmethod
    def trivial(cls, v: int) -> "PathSpec":
        return cls((v,), ())

    @property
    def is_trivial(self) -> bool:
        return not self.edges

    @property
    def ends(self) -> tuple[int, int]:
        return self.vertices[0], self.vertices[-1]

    @property
    def internal(self) -> frozenset:
        return frozenset(self.vertices[1:-1])

    def reversed(self) -> "PathSpec":
        return PathSpec(self.vertices[::-1], self.edges[::-1])

    def subpath(self, i: int, j: int) -> "PathSpec":
        """Subpath between positions i and j (reversed if j < i)."""
        if i <= j:
            return PathSpec(self.vertices[i:j + 1], self.edges[i:j])
        return self.subpath(j, i).reversed()

    def between(self, a: int, b: int) -> "PathSpec":
        return self.subpath(self.vertices.index(a), self.vertices.index(b))

    def then(self, other: "PathSpec") -> "PathSpec":
        if self.vertices[-1] != other.vertices[0]:
            raise GraphError("paths do not meet end to start")
        return PathSpec(self.vertices + other.vertices[1:], self.edges + other.edges)

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "edges": list(self.edges)}

    @classmethod
    def from_json(cls, data) -> "PathSpec":
        return cls(tuple(data["vertices"]), tuple(data["edges"]))


@dataclass(frozen=True)
class CycleSpec:
    """A simple cycle: edges[i] joins vertices[i] and vertices[(i+1) % n]."""

    vertices: tuple
    edges: tuple

    def __post_init__(self):
        if not self.edges or len(self.vertices) != len(self.edges):
            raise GraphError("cycle needs as many vertices as edges, at least one")
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError("cycle repeats a vertex")
        if len(set(self.edges)) != len(self.edges):
            raise GraphError("cycle repeats an edge")

    def __len__(self):
        return len(self.edges)

    @property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    @property
    def vertex_set(self) -> frozenset:
        return frozenset(self.vertices)

    def canonical(self) -> "CycleSpec":
        """Rotation/reflection with the lexicographically least edge sequence."""
        n = len(self.edges)
        best = None
        for vs, es in ((self.vertices, self.edges), self._reflected()):
            for r in range(n):
                cand = (es[r:] + es[:r], vs[r:] + vs[:r])
                if best is None or cand < best:
                    best = cand
        return CycleSpec(best[1], best[0])

    def _reflected(self):
        vs = (self.vertices[0],) + self.vertices[:0:-1]
        es = self.edges[::-1]
        return vs, es

    def sort_key(self):
        return tuple(sorted(self.edges)), self.canonical().edges

    def position(self, v: int) -> int:
        return self.vertices.index(v)

    def arc(self, i: int, j: int) -> PathSpec:
        """Forward walk from position i to position j (i != j)."""
        n = len(self.vertices)
        if i == j:
            raise GraphError("arc endpoints must differ")
        vs, es = [self.vertices[i]], []
        k = i
        while k != j:
            es.append(self.edges[k])
            k = (k + 1) % n
            vs.append(self.vertices[k])
        return PathSpec(tuple(vs), tuple(es))

    def arcs_between(self, a: int, b: int) -> tuple[PathSpec, PathSpec]:
        """The two a-b paths in the cycle, both oriented from a to b."""
        i, j = self.position(a), self.position(b)
        return self.arc(i, j), self.arc(j, i).reversed()

    def rotated_to(self, v: int) -> "CycleSpec":
        r = self.position(v)
        return CycleSpec(self.vertices[r:] + self.vertices[:r], self.edges[r:] + self.edges[:r])

    def to_json(self) -> dict:
        return {"vertices": list(self.vertices), "edges": list(self.edges)}

    @classmethod
    def from_json(cls, data) -> "CycleSpec":
        return cls(tuple(data["vertices"]), tuple(data["edges"]))


class LabelledGraph:
    """Immutable group-labelled multigraph."""

    __slots__ = ("group", "vertices", "edges", "_by_id", "_adj", "_hash")

    def __init__(self, group: GroupSpec, vertices: Iterable[int], edges: Iterable):
        self.group = group
        vs = sorted(set(vertices))
        es = []
        for e in edges:
            if not isinstance(e, Edge):
                eid, u, v, lab = e
                e = Edge(eid, u, v, group.elem(lab))
            elif e.label.spec != group:
                raise GraphError(f"label of edge {e.id} is not in {group}")
            es.append(e)
        es.sort(key=lambda e: e.id)
        self.vertices = tuple(vs)
        self.edges = tuple(es)
        self._by_id = {e.id: e for e in es}
        if len(self._by_id) != len(es):
            raise GraphError("duplicate edge id")
        vset = set(vs)
        adj = {v: [] for v in vs}
        for e in es:
            if e.u not in vset or e.v not in vset:
                raise GraphError(f"edge {e.id} has an endpoint outside the vertex set")
            adj[e.u].append((e.id, e.v))
            if not e.is_loop:
                adj[e.v].append((e.id, e.u))
        self._adj = adj
        self._hash = None

    # -- basic access -------------------------------------------------
    def edge(self, eid: int) -> Edge:
        try:
            return self._by_id[eid]
        except KeyError:
            raise GraphError(f"no edge with id {eid}") from None

    def has_edge(self, eid: int) -> bool:
        return eid in self._by_id

    def has_vertex(self, v) -> bool:
        return v in self._adj

    def incident(self, v: int) -> list[tuple[int, int]]:
        """(edge id, other end) pairs at v in edge-id order; a loop appears once."""
        try:
            return self._adj[v]
        except KeyError:
            raise GraphError(f"no vertex {v}") from None

    def degree(self, v: int) -> int:
        return sum(2 if self._by_id[eid].is_loop else 1 for eid, _ in self.incident(v))

    def neighbors(self, v: int) -> list[int]:
        return sorted({w for _, w in self.incident(v) if w != v})

    def label(self, eid: int) -> GroupElem:
        return self.edge(eid).label

    def next_edge_id(self) -> int:
        return self.edges[-1].id + 1 if self.edges else 0

    def next_vertex_id(self) -> int:
        return self.vertices[-1] + 1 if self.vertices else 0

    def __eq__(self, other):
        if not isinstance(other, LabelledGraph):
            return NotImplemented
        return (self.group, self.vertices, self.edges) == (other.group, other.vertices, other.edges)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.group, self.vertices, self.edges))
        return self._hash

    def __repr__(self):
        return f"LabelledGraph({self.group}, |V|={len(self.vertices)}, |E|={len(self.edges)})"

    # -- derived graphs -----------------------------------------------
    def with_labels(self, labels: dict) -> "LabelledGraph":
        es = [Edge(e.id, e.u, e.v, self.group.elem(labels[e.id])) if e.id in labels else e
              for e in self.edges]
        return LabelledGraph(self.group, self.vertices, es)

    def zeroed(self) -> "LabelledGraph":
        z = self.group.zero
        return LabelledGraph(self.group, self.vertices, [Edge(e.id, e.u, e.v, z) for e in self.edges])

    def induced(self, vertices: Iterable[int]) -> "LabelledGraph":
        keep = set(vertices)
        return LabelledGraph(self.group, keep,
                             [e for e in self.edges if e.u in keep and e.v in keep])

    def delete_vertices(self, vertices: Iterable[int]) -> "LabelledGraph":
        drop = set(vertices)
        return self.induced(v for v in self.vertices if v not in drop)

    def edge_subgraph(self, eids: Iterable[int], vertices: Iterable[int] = ()) -> "LabelledGraph":
        es = [self.edge(i) for i in sorted(set(eids))]
        vs = set(vertices)
        for e in es:
            vs.update((e.u, e.v))
        return LabelledGraph(self.group, vs, es)

    def extended(self, vertices: Iterable[int] = (), edges: Iterable = ()) -> "LabelledGraph":
        """Copy with extra vertices and (id, u, v, label) edges added."""
        return LabelledGraph(self.group, list(self.vertices) + list(vertices),
                             list(self.edges) + list(edges))

    # -- serialization ------------------------------------------------
    def to_json(self) -> dict:
        return {"group": self.group.to_json(),
                "vertices": list(self.vertices),
                "edges": [[e.id, e.u, e.v, e.label.to_json()] for e in self.edges]}

    @classmethod
    def from_json(cls, data) -> "LabelledGraph":
        try:
            group = make_group(data["group"])
            return cls(group, data["vertices"],
                       [(int(i), int(u), int(v), tuple(lab)) for i, u, v, lab in data["edges"]])
        except (KeyError, TypeError, ValueError) as exc:
            if isinstance(exc, GraphError):
                raise
            raise GraphError(f"malformed graph JSON: {exc}") from exc

    def to_dot(self, name: str = "G", highlight: Iterable[int] = ()) -> str:
        hl = set(highlight)
        lines = [f"graph {name} {{"]
        for v in self.vertices:
            lines.append(f"  {v};")
        for e in self.edges:
            lab = "(" + ",".join(map(str, e.label.coords)) + ")"
            extra = ", penwidth=3" if e.id in hl else ""
            lines.append(f'  {e.u} -- {e.v} [label="{lab}", id="e{e.id}"{extra}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


Subgraph = Union[PathSpec, CycleSpec, Iterable[int]]


def _edge_ids(H: Subgraph) -> Iterable[int]:
    if isinstance(H, (PathSpec, CycleSpec)):
        return H.edges
    return H


def weight(G: LabelledGraph, H: Subgraph) -> GroupElem:
    """Sum of the labels on the edges of H (a path, cycle or edge-id set)."""
    acc = G.group.zero
    for eid in _edge_ids(H):
        acc = acc + G.edge(eid).label
    return acc


def shift(G: LabelledGraph, v: int, g: GroupElem) -> LabelledGraph:
    """Add g to every non-loop edge at v. Only defined for 2g = 0."""
    g = G.group.elem(g)
    if not (g + g).is_zero:
        raise GraphError(f"cannot shift by {g}: 2g != 0")
    if not G.has_vertex(v):
        raise GraphError(f"no vertex {v}")
    if g.is_zero:
        return G
    labels = {eid: G.edge(eid).label + g for eid, _ in G.incident(v) if not G.edge(eid).is_loop}
    return G.with_labels(labels)


def apply_shifts(G: LabelledGraph, shifts: Iterable[tuple[int, GroupElem]]) -> LabelledGraph:
    # accumulate per vertex, then relabel once
    acc: dict[int, GroupElem] = {}
    for v, g in shifts:
        g = G.group.elem(g)
        if not (g + g).is_zero:
            raise GraphError(f"cannot shift by {g}: 2g != 0")
        if not G.has_vertex(v):
            raise GraphError(f"no vertex {v}")
        acc[v] = acc.get(v, G.group.zero) + g
    labels = {}
    for e in G.edges:
        if e.is_loop:
            continue
        lab = e.label
        if e.u in acc:
            lab = lab + acc[e.u]
        if e.v in acc:
            lab = lab + acc[e.v]
        if lab != e.label:
            labels[e.id] = lab
    return G.with_labels(labels)


# -- validation of paths and cycles ---------------------------------------

def check_path(G: LabelledGraph, P: PathSpec) -> None:
    for k, eid in enumerate(P.edges):
        e = G.edge(eid)
        if {e.u, e.v} != {P.vertices[k], P.vertices[k + 1]} or e.is_loop:
            raise GraphError(f"edge {eid} does not join {P.vertices[k]} and {P.vertices[k + 1]}")


def check_cycle(G: LabelledGraph, C: CycleSpec) -> None:
    n = len(C.edges)
    for k, eid in enumerate(C.edges):
        e = G.edge(eid)
        a, b = C.vertices[k], C.vertices[(k + 1) % n]
        if n == 1:
            if not (e.is_loop and e.u == a):
                raise GraphError(f"edge {eid} is not a loop at {a}")
        elif {e.u, e.v} != {a, b} or e.is_loop:
            raise GraphError(f"edge {eid} does not join {a} and {b}")


def cycle_from_edges(G: LabelledGraph, eids: Iterable[int]) -> CycleSpec:
    """Order an edge set that forms a single simple cycle."""
    eids = list(dict.fromkeys(eids))
    if not eids:
        raise GraphError("empty edge set")
    es = [G.edge(i) for i in eids]
    if len(es) == 1:
        if not es[0].is_loop:
            raise GraphError("single non-loop edge is not a cycle")
        return CycleSpec((es[0].u,), (es[0].id,))
    at: dict[int, list[Edge]] = {}
    for e in es:
        if e.is_loop:
            raise GraphError("loop inside a longer cycle")
        at.setdefault(e.u, []).append(e)
        at.setdefault(e.v, []).append(e)
    if any(len(x) != 2 for x in at.values()):
        raise GraphError("edge set is not 2-regular")
    start = min(at)
    first = min(at[start], key=lambda e: e.id)
    vs, order = [start], [first.id]
    cur, prev = first.other(start), first
    while cur != start:
        vs.append(cur)
        nxt = at[cur][0] if at[cur][1] is prev else at[cur][1]
        order.append(nxt.id)
        cur, prev = nxt.other(cur), nxt
    if len(order) != len(es):
        raise GraphError("edge set is not connected")
    return CycleSpec(tuple(vs), tuple(order))


def close_path(P: PathSpec, eid: int) -> CycleSpec:
    """Cycle made of path P plus an edge joining its ends."""
    return CycleSpec(P.vertices, P.edges + (eid,))


# -- enumeration oracles ---------------------------------------------------

def iter_cycles(G: LabelledGraph) -> Iterator[CycleSpec]:
    """All simple cycles (loops and 2-cycles included), each exactly once, in no set order."""
    for e in G.edges:
        if e.is_loop:
            yield CycleSpec((e.u,), (e.id,))
    rank = {v: i for i, v in enumerate(G.vertices)}
    loops = {e.id for e in G.edges if e.is_loop}
    adj = {v: [(eid, w) for eid, w in G.incident(v) if eid not in loops] for v in G.vertices}
    for s in G.vertices:
        rs = rank[s]
        path_v = [s]
        path_e: list[int] = []
        on_path = {s}
        stack = [iter(adj[s])]
        while stack:
            advanced = False
            for eid, y in stack[-1]:
                if y == s:
                    if path_e and eid > path_e[0] and (len(path_e) > 1 or eid != path_e[0]):
                        yield CycleSpec(tuple(path_v), tuple(path_e) + (eid,))
                elif y not in on_path and rank[y] > rs:
                    path_v.append(y)
                    path_e.append(eid)
                    on_path.add(y)
                    stack.append(iter(adj[y]))
                    advanced = True
                    break
            if not advanced:
                stack.pop()
                if path_e:
                    on_path.discard(path_v.pop())
                    path_e.pop()


def enumerate_cycles(G: LabelledGraph, cap: int = DEFAULT_CAP) -> list[CycleSpec]:
    """Every simple cycle, canonically rotated, sorted by sorted edge-id sequence."""
    if cap < 0:
        raise GraphError("cap must be non-negative")
    out = []
    for C in iter_cycles(G):
        out.append(C)
        if len(out) > cap:
            raise CapExceeded(f"more than {cap} cycles")
    out = [C.canonical() for C in out]
    out.sort(key=lambda C: (tuple(sorted(C.edges)), C.edges))
    return out


def find_nonzero_cycle(G: LabelledGraph, cap: int = DEFAULT_CAP) -> CycleSpec | None:
    """First nonzero cycle in canonical order, or None when G is Gamma-bipartite."""
    for C in enumerate_cycles(G, cap):
        if not weight(G, C).is_zero:
            return C
    return None


def iter_paths(G: LabelledGraph, source: int, targets, blocked=frozenset()) -> Iterator[PathSpec]:
    """Simple paths from source that stop at the first vertex of ``targets``.

    Interior vertices avoid ``targets`` and ``blocked``; the source itself is
    never revisited.
    """
    targets = set(targets)
    path_v = [source]
    path_e: list[int] = []
    on_path = {source}
    stack = [iter(G.incident(source))]
    while stack:
        advanced = False
        for eid, y in stack[-1]:
            if y in on_path:
                continue
            if y in targets:
                yield PathSpec(tuple(path_v) + (y,), tuple(path_e) + (eid,))
            elif y not in blocked:
                path_v.append(y)
                path_e.append(eid)
                on_path.add(y)
                stack.append(iter(G.incident(y)))
                advanced = True
                break
        if not advanced:
            stack.pop()
            if path_e:
                on_path.discard(path_v.pop())
                path_e.pop()


def enumerate_A_paths(G: LabelledGraph, A: Iterable[int], nonzero_only: bool = False,
                      cap: int = DEFAULT_CAP) -> list[PathSpec]:
    """All A-paths: distinct ends in A, interior disjoint from A. Loops are not paths."""
    A = set(A)
    for a in A:
        if not G.has_vertex(a):
            raise GraphError(f"no vertex {a}")
    rank = {v: i for i, v in enumerate(G.vertices)}
    out = []
    for a in sorted(A):
        for P in iter_paths(G, a, A - {a}):
            if rank[P.vertices[-1]] < rank[a]:
                continue
            if nonzero_only and weight(G, P).is_zero:
                continue
            out.append(P)
            if len(out) > cap:
                raise CapExceeded(f"more than {cap} A-paths")
    return out


def three_paths_witness(G: LabelledGraph, C: CycleSpec, w1: int, w2: int, w3: int):
    """Pair (i, j) of indices whose two w_i-w_j paths along C differ in weight.

    Pairs are tried in the order (1,2), (1,3), (2,3). When C is nonzero some
    pair always qualifies, and when 2*weight(Q1) != 0 (Q1 the w2-w3 path
    avoiding w1) the returned pair contains 1. Returns None if no pair differs.
    """
    ws = (w1, w2, w3)
    if len(set(ws)) != 3:
        raise GraphError("witness vertices must be distinct")
    for w in ws:
        if w not in C.vertices:
            raise GraphError(f"vertex {w} is not on the cycle")
    for i, j in ((0, 1), (0, 2), (1, 2)):
        A, B = C.arcs_between(ws[i], ws[j])
        if weight(G, A) != weight(G, B):
            return (i + 1, j + 1)
    return None

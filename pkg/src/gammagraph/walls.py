"""Elementary walls, subwalls, local rerouting and the two wall certifiers.

Orientation: the first horizontal path is the top row and the first vertical
path is the leftmost one. Rows and columns are 1-based in every public API.
A wall is stored as explicit horizontal and vertical paths in a host graph,
so subdivided and rerouted walls use the same type.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .decomp import ShiftCertificate, shift_reduce
from .errors import WallError
from .graph import (CycleSpec, LabelledGraph, PathSpec, apply_shifts, check_path,
                    cycle_from_edges, weight)
from .groups import GroupSpec


def grid_id(s: int, row: int, col: int) -> int:
    """Vertex id of grid position (row, col) in an elementary r x s wall."""
    return (row - 1) * (2 * s + 2) + (col - 1)


@dataclass(frozen=True, eq=False)
class Wall:
    host: LabelledGraph
    r: int
    s: int
    rows: tuple  # r+1 horizontal PathSpecs, left to right
    cols: tuple  # s+1 vertical PathSpecs, top to bottom
    corners: tuple
    nails: frozenset
    coords: dict = field(default_factory=dict)  # vertex -> (row, col) when known

    def __eq__(self, other):
        if not isinstance(other, Wall):
            return NotImplemented
        return (self.host, self.r, self.s, self.rows, self.cols, self.corners, self.nails) == \
            (other.host, other.r, other.s, other.rows, other.cols, other.corners, other.nails)

    __hash__ = None

    @cached_property
    def edge_ids(self) -> frozenset:
        return frozenset(e for P in self.rows + self.cols for e in P.edges)

    @cached_property
    def vertex_set(self) -> frozenset:
        return frozenset(v for P in self.rows + self.cols for v in P.vertices)

    @cached_property
    def graph(self) -> LabelledGraph:
        return self.host.edge_subgraph(self.edge_ids, self.vertex_set)

    @cached_property
    def branch_vertices(self) -> frozenset:
        W = self.graph
        deg3 = {v for v in W.vertices if W.degree(v) >= 3}
        return frozenset(deg3 | set(self.corners) | set(self.nails))

    @cached_property
    def top_nails(self) -> tuple:
        return tuple(v for v in self.rows[0].vertices if v in self.nails)

    @cached_property
    def perimeter_edges(self) -> frozenset:
        return frozenset(self.rows[0].edges + self.rows[-1].edges
                         + self.cols[0].edges + self.cols[-1].edges)

    @cached_property
    def bricks(self) -> dict:
        return {(i, j): self._brick(i, j) for i in range(1, self.r + 1) for j in range(1, self.s + 1)}

    def brick(self, i: int, j: int) -> CycleSpec:
        if not (1 <= i <= self.r and 1 <= j <= self.s):
            raise WallError(f"brick ({i},{j}) out of range")
        return self.bricks[(i, j)]

    def _brick(self, i: int, j: int) -> CycleSpec:
        top, bot = self.rows[i - 1], self.rows[i]
        left, right = self.cols[j - 1], self.cols[j]
        a = last_on(left, top)
        b = last_on(right, top)
        c = first_on(right, bot)
        d = first_on(left, bot)
        walk = top.between(a, b).then(right.between(b, c)).then(bot.between(c, d))
        back = left.between(d, a)
        return CycleSpec(walk.vertices[:-1] + back.vertices[:-1], walk.edges + back.edges)

    def b_paths(self) -> list[PathSpec]:
        """All b(W)-paths of the wall: its paths cut at branch vertices."""
        seen, out = set(), []
        bv = self.branch_vertices
        for P in self.rows + self.cols:
            cuts = [k for k, v in enumerate(P.vertices) if v in bv]
            for a, b in zip(cuts, cuts[1:]):
                seg = P.subpath(a, b)
                key = frozenset(seg.edges)
                if key not in seen:
                    seen.add(key)
                    out.append(seg)
        return out

    def to_json(self) -> dict:
        return {"r": self.r, "s": self.s, "host": self.host.to_json(),
                "rows": [P.to_json() for P in self.rows],
                "cols": [P.to_json() for P in self.cols],
                "corners": list(self.corners), "nails": sorted(self.nails),
                "top_nails": list(self.top_nails),
                "bricks": [{"i": i, "j": j, **C.to_json()} for (i, j), C in sorted(self.bricks.items())]}

    @classmethod
    def from_json(cls, data) -> "Wall":
        host = LabelledGraph.from_json(data["host"])
        W = cls(host, int(data["r"]), int(data["s"]),
                tuple(PathSpec.from_json(p) for p in data["rows"]),
                tuple(PathSpec.from_json(p) for p in data["cols"]),
                tuple(data["corners"]), frozenset(data["nails"]))
        problem = validate_wall(W)
        if problem:
            raise WallError(problem)
        return W

    def to_dot(self) -> str:
        hl = set(self.perimeter_edges)
        return self.host.to_dot("wall", highlight=hl)


def first_on(V: PathSpec, H: PathSpec) -> int:
    hs = set(H.vertices)
    for v in V.vertices:
        if v in hs:
            return v
    raise WallError("vertical path misses a horizontal path")


def last_on(V: PathSpec, H: PathSpec) -> int:
    hs = set(H.vertices)
    for v in reversed(V.vertices):
        if v in hs:
            return v
    raise WallError("vertical path misses a horizontal path")


def elementary_wall(r: int, s: int, group: GroupSpec) -> Wall:
    """The elementary r x s wall with all labels zero.

    Built on the (r+1) x (2s+2) grid: the vertical edges (2i-1,2j)(2i,2j) and
    (2i,2j-1)(2i+1,2j-1) are removed, then the two degree-1 vertices. Vertex
    (row, col) gets id ``grid_id(s, row, col)``; edge ids count horizontal
    edges row by row, then vertical edges row by row.
    """
    if r < 2 or s < 2:
        raise WallError("walls need r, s >= 2")
    ncol = 2 * s + 2
    vertical = []
    for i in range(1, r + 1):
        for c in range(1, ncol + 1):
            # odd rows keep odd columns downward, even rows keep even columns
            if (i % 2 == 1) == (c % 2 == 1):
                vertical.append((i, c))
    drop = {(1, ncol), (r + 1, ncol) if r % 2 == 1 else (r + 1, 1)}
    coords = {}
    for i in range(1, r + 2):
        for c in range(1, ncol + 1):
            if (i, c) not in drop:
                coords[grid_id(s, i, c)] = (i, c)
    z = group.zero
    edges, eid = [], 0
    hedge, vedge = {}, {}
    for i in range(1, r + 2):
        for c in range(1, ncol):
            if (i, c) in drop or (i, c + 1) in drop:
                continue
            edges.append((eid, grid_id(s, i, c), grid_id(s, i, c + 1), z))
            hedge[(i, c)] = eid
            eid += 1
    for i, c in vertical:
        if (i, c) in drop or (i + 1, c) in drop:
            continue
        edges.append((eid, grid_id(s, i, c), grid_id(s, i + 1, c), z))
        vedge[(i, c)] = eid
        eid += 1
    host = LabelledGraph(group, coords, edges)

    rows = []
    for i in range(1, r + 2):
        cs = [c for c in range(1, ncol + 1) if (i, c) not in drop]
        rows.append(PathSpec(tuple(grid_id(s, i, c) for c in cs),
                             tuple(hedge[(i, c)] for c in cs[:-1])))
    cols = []
    for j in range(1, s + 2):
        vs, es = [grid_id(s, 1, 2 * j - 1)], []
        c = 2 * j - 1
        for i in range(1, r + 1):
            down = 2 * j - 1 if i % 2 == 1 else 2 * j
            if down != c:
                es.append(hedge[(i, min(c, down))])
                vs.append(grid_id(s, i, down))
                c = down
            es.append(vedge[(i, c)])
            vs.append(grid_id(s, i + 1, c))
        cols.append(PathSpec(tuple(vs), tuple(es)))
    corners = (rows[0].vertices[0], rows[0].vertices[-1], rows[-1].vertices[0], rows[-1].vertices[-1])
    Wg = host
    nails = frozenset(v for v in host.vertices if Wg.degree(v) == 2 and v not in corners)
    return Wall(host, r, s, tuple(rows), tuple(cols), corners, nails, coords)


def validate_wall(W: Wall) -> str | None:
    """First violated wall invariant, or None."""
    if len(W.rows) != W.r + 1 or len(W.cols) != W.s + 1:
        return "wrong number of paths"
    try:
        for P in W.rows + W.cols:
            check_path(W.host, P)
    except Exception as exc:  # noqa: BLE001 - report any path defect
        return f"path not in host: {exc}"
    for group, name in ((W.rows, "horizontal"), (W.cols, "vertical")):
        seen: set = set()
        for P in group:
            if seen & set(P.vertices):
                return f"{name} paths intersect"
            seen |= set(P.vertices)
    top, bot = set(W.rows[0].vertices), set(W.rows[-1].vertices)
    for j, V in enumerate(W.cols, 1):
        if V.vertices[0] not in top or V.vertices[-1] not in bot:
            return f"vertical path {j} does not join the first and last rows"
        if (set(V.vertices[1:]) & top) or (set(V.vertices[:-1]) & bot):
            return f"vertical path {j} meets the outer rows more than once"
    ends = {W.rows[0].vertices[0], W.rows[0].vertices[-1], W.rows[-1].vertices[0], W.rows[-1].vertices[-1]}
    if set(W.corners) != ends:
        return "corners are not the ends of the outer rows"
    try:
        bricks = W.bricks
    except Exception as exc:  # noqa: BLE001
        return f"brick construction failed: {exc}"
    bv = W.branch_vertices
    for key, C in bricks.items():
        if sum(1 for v in C.vertices if v in bv) != 6:
            return f"brick {key} does not have 6 branch vertices"
        try:
            cycle_from_edges(W.host, C.edges)
        except Exception as exc:  # noqa: BLE001
            return f"brick {key} is not a cycle: {exc}"
    return None


def subwall(W: Wall, row_range: tuple, col_range: tuple) -> Wall:
    """Compact subwall on horizontal paths a..b and vertical paths c..d (inclusive)."""
    a, b = row_range
    c, d = col_range
    if not (1 <= a < b <= W.r + 1 and 1 <= c < d <= W.s + 1):
        raise WallError("subwall range out of bounds")
    if b - a < 2 or d - c < 2:
        raise WallError("subwall dimensions must be at least 2")
    rows = []
    for i in range(a, b + 1):
        H = W.rows[i - 1]
        pos = {v: k for k, v in enumerate(H.vertices)}
        marks = []
        for j in (c, d):
            V = W.cols[j - 1]
            if i == a:
                marks.append(pos[last_on(V, H)])
            elif i == b:
                marks.append(pos[first_on(V, H)])
            else:
                marks.extend(pos[v] for v in V.vertices if v in pos)
        rows.append(H.subpath(min(marks), max(marks)))
    cols = []
    for j in range(c, d + 1):
        V = W.cols[j - 1]
        cols.append(V.between(last_on(V, W.rows[a - 1]), first_on(V, W.rows[b - 1])))
    corners = (rows[0].vertices[0], rows[0].vertices[-1], rows[-1].vertices[0], rows[-1].vertices[-1])
    sub = Wall(W.host, b - a, d - c, tuple(rows), tuple(cols), corners, frozenset(), W.coords)
    Wg = sub.graph
    bw = W.branch_vertices
    nails = frozenset(v for v in Wg.vertices
                      if Wg.degree(v) == 2 and v not in corners and v in bw)
    return Wall(W.host, b - a, d - c, tuple(rows), tuple(cols), corners, nails, W.coords)


def k_contained(Wsub: Wall, W: Wall, k: int) -> bool:
    """Wsub avoids the first and last k horizontal and vertical paths of W."""
    outer = list(W.rows[:k]) + list(W.rows[W.r + 1 - k:]) + list(W.cols[:k]) + list(W.cols[W.s + 1 - k:])
    vs = Wsub.vertex_set
    return all(vs.isdisjoint(P.vertices) for P in outer)


def local_reroute(W: Wall, P: PathSpec, R: PathSpec) -> Wall:
    """Replace the b(W)-path P by R (same ends, disjoint from W - P)."""
    bv = W.branch_vertices
    check_path(W.host, P)
    check_path(W.host, R)
    if P.is_trivial or P.vertices[0] not in bv or P.vertices[-1] not in bv or (P.internal & bv):
        raise WallError("P is not a b(W)-path")
    if not set(P.edges) <= W.edge_ids:
        raise WallError("P is not contained in the wall")
    if set(P.edges) <= W.perimeter_edges:
        raise WallError("P lies on the perimeter")
    if {R.vertices[0], R.vertices[-1]} != {P.vertices[0], P.vertices[-1]}:
        raise WallError("R must have the same ends as P")
    if R.vertices[0] != P.vertices[0]:
        R = R.reversed()
    rest = W.vertex_set - set(P.vertices)
    if rest & set(R.vertices):
        raise WallError("R meets W - P")

    def splice(Q: PathSpec) -> PathSpec:
        n = len(P.edges)
        for k in range(len(Q.edges) - n + 1):
            if Q.edges[k:k + n] == P.edges:
                return PathSpec(Q.vertices[:k] + R.vertices + Q.vertices[k + n + 1:],
                                Q.edges[:k] + R.edges + Q.edges[k + n:])
            if Q.edges[k:k + n] == P.edges[::-1]:
                Rr = R.reversed()
                return PathSpec(Q.vertices[:k] + Rr.vertices + Q.vertices[k + n + 1:],
                                Q.edges[:k] + Rr.edges + Q.edges[k + n:])
        return Q

    rows = tuple(splice(Q) for Q in W.rows)
    cols = tuple(splice(Q) for Q in W.cols)
    out = Wall(W.host, W.r, W.s, rows, cols, W.corners, W.nails, W.coords)
    problem = validate_wall(out)
    if problem:
        raise WallError(f"rerouted wall is invalid: {problem}")
    return out


def is_facially_odd(W: Wall) -> tuple[bool, list]:
    zero = [key for key, C in sorted(W.bricks.items()) if weight(W.host, C).is_zero]
    return not zero, zero


def is_bipartite_wall(W: Wall):
    """Can shifting make every b(W)-path of W weigh zero?

    Returns (True, ShiftCertificate) or (False, witness). The witness is a
    b(W)-path whose doubled weight is nonzero (no shift can fix it) or a
    nonzero cycle of W (shifting preserves cycle weights).
    """
    segs = W.b_paths()
    ws = [weight(W.host, P) for P in segs]
    for P, w in zip(segs, ws):
        if not (w + w).is_zero:
            return False, P
    # skeleton: one edge per b(W)-path, labelled by its weight
    skel = LabelledGraph(W.host.group, W.branch_vertices,
                         [(k, P.vertices[0], P.vertices[-1], w) for k, (P, w) in enumerate(zip(segs, ws))])
    res = shift_reduce(skel)
    if isinstance(res, CycleSpec):
        eids = [e for k in res.edges for e in segs[k].edges]
        return False, cycle_from_edges(W.host, eids)
    shifted = apply_shifts(W.host, res.shifts)
    for P in segs:
        if not weight(shifted, P).is_zero:  # pragma: no cover - internal consistency
            raise WallError("certificate failed verification")
    return True, res


def apply_certificate(W: Wall, cert: ShiftCertificate) -> Wall:
    host = cert.apply(W.host)
    return Wall(host, W.r, W.s, W.rows, W.cols, W.corners, W.nails, W.coords)

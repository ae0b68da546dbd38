"""Seeded generators for extremal constructions and structured test inputs.

Every randomized generator takes an explicit seed and draws from its own
``random.Random`` instance, so equal arguments give equal output.
"""
from __future__ import annotations

import random
from itertools import combinations

from .chains import ClosedCycleChain
from .errors import GammaGraphError, LinkageError, ModelError, WallError
from .graph import CycleSpec, LabelledGraph, PathSpec, apply_shifts, weight
from .groups import GroupElem, GroupSpec, make_group
from .linkages import Linkage, is_gamma_odd_linkage
from .models import KModel, classify_model, validate_model
from .walls import Wall, elementary_wall, first_on, last_on


def _grid(n: int, group: GroupSpec):
    """n x n grid; vertex (row, col) has id (row-1)*n + (col-1)."""
    vid = lambda r, c: (r - 1) * n + (c - 1)  # noqa: E731
    z = group.zero
    edges = []
    for r in range(1, n + 1):
        for c in range(1, n):
            edges.append((len(edges), vid(r, c), vid(r, c + 1), z))
    for r in range(1, n):
        for c in range(1, n + 1):
            edges.append((len(edges), vid(r, c), vid(r + 1, c), z))
    return vid, list(range(n * n)), edges


def projective_grid(n: int, group: GroupSpec, g, k: int) -> LabelledGraph:
    """Grid plus k cross edges (1,i)(n,n-i+1), each labelled with the involution g."""
    g = group.elem(g)
    if g.is_zero or not (g + g).is_zero:
        raise GammaGraphError("g must have order exactly two")
    if not 0 <= k <= n or n < 2:
        raise GammaGraphError("need n >= 2 and 0 <= k <= n")
    vid, vs, edges = _grid(n, group)
    for i in range(1, k + 1):
        edges.append((len(edges), vid(1, i), vid(n, n - i + 1), g))
    return LabelledGraph(group, vs, edges)


def dnl_instance(n: int, m: int, ell: int) -> LabelledGraph:
    """Z/m-labelled grid where all n cross edges carry ell."""
    if not 0 < ell < m:
        raise GammaGraphError("need 0 < ell < m")
    if n < 2:
        raise GammaGraphError("need n >= 2")
    group = make_group([m])
    vid, vs, edges = _grid(n, group)
    lab = group.elem(ell)
    for i in range(1, n + 1):
        edges.append((len(edges), vid(1, i), vid(n, n - i + 1), lab))
    return LabelledGraph(group, vs, edges)


def _random_nonzero(rng: random.Random, group: GroupSpec) -> GroupElem:
    elems = [x for x in group.elements() if not x.is_zero]
    return rng.choice(elems)


def facially_odd_wall(r: int, s: int, group: GroupSpec, weights=None, seed: int | None = None) -> Wall:
    """Elementary wall whose brick (i, j) weighs weights[(i, j)].

    Bricks are handled row by row, left to right. The designated edge of a
    brick is the last edge of its right side; no brick handled earlier
    contains it, so earlier weights stay put.
    """
    if group.order < 2:
        raise WallError("the trivial group has no nonzero weights")
    W = elementary_wall(r, s, group)
    if weights is None:
        if seed is None:
            raise WallError("give weights or a seed")
        rng = random.Random(seed)
        weights = {(i, j): _random_nonzero(rng, group) for i in range(1, r + 1) for j in range(1, s + 1)}
    elif not isinstance(weights, dict):
        weights = {(i, j): weights for i in range(1, r + 1) for j in range(1, s + 1)}
    labels = {}
    host = W.host
    for i in range(1, r + 1):
        for j in range(1, s + 1):
            want = group.elem(weights[(i, j)])
            if want.is_zero:
                raise WallError(f"brick ({i},{j}) requested weight zero")
            C = W.brick(i, j)
            right = W.cols[j]
            top, bot = W.rows[i - 1], W.rows[i]
            side = right.between(last_on(right, top), first_on(right, bot))
            eid = side.edges[-1]
            have = weight(host, C)
            labels[eid] = host.label(eid) + (want - have)
            host = host.with_labels({eid: labels[eid]})
    return Wall(host, W.r, W.s, W.rows, W.cols, W.corners, W.nails, W.coords)


def random_bipartite_labelling(G: LabelledGraph, group: GroupSpec, seed: int, shifts: int) -> LabelledGraph:
    """Zero labelling of G moved by ``shifts`` random legal shifts."""
    rng = random.Random(seed)
    H = LabelledGraph(group, G.vertices, [(e.id, e.u, e.v, group.zero) for e in G.edges])
    inv = group.involutions()
    if not inv or not H.vertices:
        return H
    moves = [(rng.choice(H.vertices), rng.choice(inv)) for _ in range(shifts)]
    return apply_shifts(H, moves)


def random_shifts(G: LabelledGraph, seed: int, count: int) -> list:
    """``count`` legal shifts (vertex, involution) of G, seeded."""
    rng = random.Random(seed)
    inv = G.group.involutions()
    if not inv or not G.vertices:
        return []
    return [(rng.choice(G.vertices), rng.choice(inv)) for _ in range(count)]


def random_graph(n: int, m: int, group: GroupSpec, seed: int, loops: bool = True,
                 zero_bias: float = 0.0) -> LabelledGraph:
    """Random multigraph on n vertices with m edges and uniform labels."""
    rng = random.Random(seed)
    elems = list(group.elements())
    edges = []
    for k in range(m):
        u = rng.randrange(n)
        v = rng.randrange(n) if loops else rng.choice([x for x in range(n) if x != u] or [u])
        lab = group.zero if rng.random() < zero_bias else rng.choice(elems)
        edges.append((k, u, v, lab))
    return LabelledGraph(group, range(n), edges)


def bipartite_wall_with_linkage(r: int, purity: str, path_weights, group: GroupSpec, s: int | None = None,
                                shift_seed: int | None = None):
    """Zero-labelled r x s wall plus a pure linkage on its top nails.

    Path k runs x - (new vertex) - y with weight path_weights[k] on its first
    edge. Ends use every other top nail, so s defaults to 4n.
    """
    n = len(path_weights)
    if purity not in ("series", "nested", "crossing"):
        raise LinkageError(f"unknown purity {purity}")
    ws = [group.elem(w) for w in path_weights]
    if any(w.is_zero for w in ws):
        raise LinkageError("path weights must be nonzero for an odd linkage")
    s = s if s is not None else max(4 * n, 2)
    W = elementary_wall(r, s, group)
    nails = W.top_nails[::2]
    if len(nails) < 2 * n:
        raise LinkageError(f"{n} paths need {2 * n} usable top nails, wall offers {len(nails)}")
    z = nails[:2 * n]
    if purity == "series":
        pairs = [(z[2 * i], z[2 * i + 1]) for i in range(n)]
    elif purity == "nested":
        pairs = [(z[i], z[2 * n - 1 - i]) for i in range(n)]
    else:
        pairs = [(z[i], z[n + i]) for i in range(n)]
    host = W.host
    nv, ne = host.next_vertex_id(), host.next_edge_id()
    new_vs, new_es, paths = [], [], []
    for k, ((x, y), w) in enumerate(zip(pairs, ws)):
        m = nv + k
        e1, e2 = ne + 2 * k, ne + 2 * k + 1
        new_vs.append(m)
        new_es += [(e1, x, m, w), (e2, m, y, group.zero)]
        paths.append(PathSpec((x, m, y), (e1, e2)))
    host = host.extended(new_vs, new_es)
    if shift_seed is not None:
        host = apply_shifts(host, random_shifts(host, shift_seed, 2 * len(host.vertices)))
    W = Wall(host, W.r, W.s, W.rows, W.cols, W.corners, W.nails, W.coords)
    L = Linkage(W.top_nails, tuple(paths))
    if not all(is_gamma_odd_linkage(W, L)):  # pragma: no cover - by construction
        raise LinkageError("generated linkage is not odd")
    return W, L


# -- models --------------------------------------------------------------------------

def _random_tree(rng: random.Random, size: int, first_vertex: int, first_edge: int):
    vs = list(range(first_vertex, first_vertex + size))
    es = []
    for k in range(1, size):
        es.append((first_edge + k - 1, vs[rng.randrange(k)], vs[k]))
    return vs, es


def build_model(t: int, group: GroupSpec, link_labels, tree_sizes, seed: int,
                tree_label=None) -> KModel:
    """Model with random trees of the given sizes and random attachment points.

    link_labels maps (i, j) to a label; tree_label(rng) labels tree edges
    (zero when omitted).
    """
    rng = random.Random(seed)
    verts, edges, trees, tree_edges = [], [], [], []
    for i in range(t):
        vs, es = _random_tree(rng, tree_sizes[i], len(verts), len(edges))
        verts += vs
        trees.append(tuple(vs))
        tree_edges.append(tuple(e[0] for e in es))
        for eid, u, v in es:
            lab = tree_label(rng) if tree_label else group.zero
            edges.append((eid, u, v, lab))
    links = {}
    for i, j in combinations(range(t), 2):
        eid = len(edges)
        edges.append((eid, rng.choice(trees[i]), rng.choice(trees[j]), group.elem(link_labels[(i, j)])))
        links[(i, j)] = eid
    M = KModel(LabelledGraph(group, verts, edges), tuple(trees), tuple(tree_edges), links)
    problem = validate_model(M)
    if problem:  # pragma: no cover - by construction
        raise ModelError(problem)
    return M


def _sizes(rng: random.Random, t: int, tree_shapes, max_tree: int) -> list[int]:
    if tree_shapes in (None, "trivial"):
        return [1] * t
    if tree_shapes == "random":
        return [rng.randint(1, max_tree) for _ in range(t)]
    sizes = list(tree_shapes)
    if len(sizes) != t or min(sizes) < 1:
        raise ModelError("tree_shapes must list t positive sizes")
    return sizes


def odd_model(t: int, group: GroupSpec, edge_weights=1, tree_shapes="trivial", seed: int = 0,
              retries: int = 20, max_tree: int = 3) -> KModel:
    """A model classified gamma_odd, by verify and retry.

    edge_weights is one label for every connecting edge or "random" for
    uniform nonzero labels.
    """
    rng = random.Random(seed)
    bad = None
    for _ in range(max(1, retries)):
        sizes = _sizes(rng, t, tree_shapes, max_tree)
        if edge_weights == "random":
            labels = {p: _random_nonzero(rng, group) for p in combinations(range(t), 2)}
        else:
            labels = {p: edge_weights for p in combinations(range(t), 2)}
        M = build_model(t, group, labels, sizes, rng.randrange(2**31))
        kind, verdicts = classify_model(M)
        if kind == "gamma_odd":
            return M
        bad = next(U for U, ok in sorted(verdicts.items()) if not ok)
        if edge_weights != "random" and tree_shapes in (None, "trivial"):
            break  # deterministic input; retrying cannot help
    raise ModelError(f"no odd model found; 4-subset {bad} carries no nonzero cycle")


def bipartite_model(t: int, group: GroupSpec, seed: int, shifts: int = 10, tree_shapes="random",
                    max_tree: int = 3) -> KModel:
    """Zero model moved by random legal shifts."""
    rng = random.Random(seed)
    sizes = _sizes(rng, t, tree_shapes, max_tree)
    M = build_model(t, group, {p: group.zero for p in combinations(range(t), 2)}, sizes, rng.randrange(2**31))
    host = apply_shifts(M.host, random_shifts(M.host, rng.randrange(2**31), shifts))
    return KModel(host, M.trees, M.tree_edges, M.links)


def random_model(t: int, group: GroupSpec, seed: int, max_tree: int = 6) -> KModel:
    """Model with random tree sizes and uniform labels everywhere."""
    rng = random.Random(seed)
    elems = list(group.elements())
    sizes = [rng.randint(1, max_tree) for _ in range(t)]
    labels = {p: rng.choice(elems) for p in combinations(range(t), 2)}
    return build_model(t, group, labels, sizes, rng.randrange(2**31), tree_label=lambda g: g.choice(elems))


# -- chains ---------------------------------------------------------------------------

def random_closed_chain(group: GroupSpec, length: int, seed: int, increment_ok=None):
    """Host graph and closed chain of the given length with random labels.

    The cycle is split into ``length`` arcs of 1-2 edges separated by single
    edges; every arc gets a two-edge detour through a new vertex. The detour
    labels are drawn until increment_ok(increment) holds.
    """
    rng = random.Random(seed)
    elems = list(group.elements())
    ok = increment_ok or (lambda x: not x.is_zero)
    choices = [x for x in elems if ok(x)]
    if not choices:
        raise GammaGraphError("no admissible increment in this group")
    cyc_v, cyc_e, arcs, edges = [], [], [], []
    v = 0
    for _ in range(length):
        a = len(cyc_v)
        for _ in range(rng.randint(1, 2)):
            cyc_v.append(v)
            cyc_e.append(len(edges))
            edges.append([len(edges), v, v + 1, rng.choice(elems)])
            v += 1
        arcs.append((a, len(cyc_v)))
        cyc_v.append(v)
        cyc_e.append(len(edges))
        edges.append([len(edges), v, v + 1, rng.choice(elems)])
        v += 1
    # close the cycle back to vertex 0
    edges[-1][2] = 0
    n = v
    qs = []
    labels = {e[0]: group.elem(e[3]) for e in edges}
    for a, b in arcs:
        seg = sum((labels[cyc_e[p]] for p in range(a, b)), group.zero)
        inc = rng.choice(choices)
        first = rng.choice(elems)
        second = seg + inc - first
        e1, e2 = len(edges), len(edges) + 1
        edges.append([e1, cyc_v[a], n, first])
        edges.append([e2, n, cyc_v[b], second])
        qs.append(PathSpec((cyc_v[a], n, cyc_v[b]), (e1, e2)))
        n += 1
    G = LabelledGraph(group, range(n), [tuple(e) for e in edges])
    chain = ClosedCycleChain(CycleSpec(tuple(cyc_v), tuple(cyc_e)), tuple(qs), tuple(arcs))
    return G, chain

"""Stable (dual) graphs of marked nodal curves.

A stable graph is stored with an explicit vertex order: a genus per vertex,
the markings carried by each vertex, and edges as ordered pairs of vertex
indices. The two half-edges of edge ``e`` are the keys ``(e, 0)`` and
``(e, 1)``, attached to ``edges[e][0]`` resp. ``edges[e][1]``.

Isomorphism testing and canonical forms are brute force over vertex/edge
relabelings with genus/marking pruning; the graphs in this package have at
most a handful of edges, so nothing cleverer is warranted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

_canonical_cache: dict = {}
_aut_cache: dict = {}


@dataclass(frozen=True)
class StableGraph:
    """Dual graph of a marked nodal curve.

    genera: per-vertex genus
    legs:   per-vertex tuple of markings (1-based, sorted)
    edges:  tuple of (vertex, vertex) pairs; edge ``e`` has half-edges
            ``(e, 0)`` at ``edges[e][0]`` and ``(e, 1)`` at ``edges[e][1]``
    """

    genera: tuple
    legs: tuple
    edges: tuple

    def __post_init__(self):
        object.__setattr__(self, "legs", tuple(tuple(sorted(l)) for l in self.legs))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))

    # -- basic structure ---------------------------------------------------

    @property
    def num_vertices(self) -> int:
        return len(self.genera)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def markings(self) -> tuple:
        return tuple(sorted(m for l in self.legs for m in l))

    def h1(self) -> int:
        return len(self.edges) - len(self.genera) + self._num_components()

    def total_genus(self) -> int:
        return sum(self.genera) + len(self.edges) - len(self.genera) + self._num_components()

    def half_edges_at(self, v: int) -> list:
        out = []
        for e, (a, b) in enumerate(self.edges):
            if a == v:
                out.append((e, 0))
            if b == v:
                out.append((e, 1))
        return out

    def vertex_of_half_edge(self, he) -> int:
        e, side = he
        return self.edges[e][side]

    def degree(self, v: int) -> int:
        return len(self.legs[v]) + len(self.half_edges_at(v))

    def vertex_with_marking(self, marking: int) -> int:
        for v, l in enumerate(self.legs):
            if marking in l:
                return v
        raise KeyError("no leg with marking %r" % (marking,))

    def _num_components(self) -> int:
        return len(self.components())

    def components(self) -> list:
        """Connected components, as sorted lists of vertex indices."""
        nv = len(self.genera)
        parent = list(range(nv))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (a, b) in self.edges:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        groups: dict = {}
        for v in range(nv):
            groups.setdefault(find(v), []).append(v)
        return sorted(groups.values())

    def is_connected(self) -> bool:
        return self._num_components() <= 1


def validate_stable_graph(graph: StableGraph, g=None, n=None, connected=True) -> list:
    """Check the stable-graph invariants; return a list of violations.

    An empty list means the graph is valid. When ``g``/``n`` are given the
    ambient genus and marking set are checked as well.
    """
    problems = []
    markings = [m for l in graph.legs for m in l]
    if len(set(markings)) != len(markings):
        problems.append("duplicate markings")
    if n is not None and sorted(markings) != list(range(1, n + 1)):
        problems.append("markings do not cover 1..%d" % n)
    for v, gv in enumerate(graph.genera):
        if gv < 0:
            problems.append("negative genus at vertex %d" % v)
        if 2 * gv - 2 + graph.degree(v) <= 0:
            problems.append("unstable vertex %d" % v)
    for e, (a, b) in enumerate(graph.edges):
        if not (0 <= a < graph.num_vertices and 0 <= b < graph.num_vertices):
            problems.append("edge %d attached to missing vertex" % e)
    if connected and not graph.is_connected():
        problems.append("not connected")
    if g is not None and graph.total_genus() != g:
        problems.append("total genus %d != %d" % (graph.total_genus(), g))
    return problems


# -- relabelings, canonical form, automorphisms ----------------------------


def _vertex_profiles(graph: StableGraph) -> list:
    """Per-vertex invariant used to prune the permutation search."""
    profs = []
    for v in range(graph.num_vertices):
        loops = sum(1 for (a, b) in graph.edges if a == b == v)
        profs.append((graph.genera[v], graph.legs[v], graph.degree(v), loops))
    return profs


def iter_relabelings(graph: StableGraph, extra_vertex_key=None) -> Iterator:
    """Yield every relabeling ``(vperm, edge_images)`` of the graph.

    ``vperm[v]`` is the new index of vertex ``v``. ``edge_images[e]`` is a
    pair ``(normalized endpoints, flip)`` where flip says half-edge
    ``(e, 0)`` lands on side 1 of the relabeled edge. Together with a fixed
    sorting of the relabeled edge list this enumerates the full half-edge
    level relabeling orbit, which is what canonical forms and automorphism
    counts need.

    ``extra_vertex_key(v)`` refines the vertex invariant (used by enhanced
    level graphs to make levels part of the structure).
    """
    profs = _vertex_profiles(graph)
    if extra_vertex_key is not None:
        profs = [(profs[v], extra_vertex_key(v)) for v in range(graph.num_vertices)]
    # group vertices by profile; permutations only shuffle within a group,
    # and groups are placed in sorted profile order
    order = sorted(range(graph.num_vertices), key=lambda v: (profs[v], v))
    groups: list = []
    for v in order:
        if groups and profs[groups[-1][0]] == profs[v]:
            groups[-1].append(v)
        else:
            groups.append([v])
    slot_of = {}
    pos = 0
    group_slots = []
    for grp in groups:
        group_slots.append(list(range(pos, pos + len(grp))))
        pos += len(grp)

    for perm_choice in itertools.product(*(itertools.permutations(slots) for slots in group_slots)):
        vperm = [0] * graph.num_vertices
        for grp, slots in zip(groups, perm_choice):
            for v, s in zip(grp, slots):
                vperm[v] = s
        yield from _edge_relabelings(graph, tuple(vperm))


def _edge_relabelings(graph: StableGraph, vperm) -> Iterator:
    """All half-edge level relabelings over a fixed vertex permutation."""
    # bucket edges by their relabeled unordered endpoints
    buckets: dict = {}
    for e, (a, b) in enumerate(graph.edges):
        u, v = vperm[a], vperm[b]
        key = (min(u, v), max(u, v))
        buckets.setdefault(key, []).append(e)

    keys = sorted(buckets)
    slot_base = {}
    pos = 0
    for k in keys:
        slot_base[k] = pos
        pos += len(buckets[k])

    per_bucket = []
    for k in keys:
        es = buckets[k]
        loop = k[0] == k[1]
        choices = []
        for order in itertools.permutations(range(len(es))):
            if loop:
                for flips in itertools.product((False, True), repeat=len(es)):
                    choices.append((order, flips))
            else:
                choices.append((order, (None,) * len(es)))
        per_bucket.append((k, es, choices))

    for combo in itertools.product(*(c for (_, _, c) in per_bucket)):
        edge_images = [None] * graph.num_edges
        for (k, es, _), (order, flips) in zip(per_bucket, combo):
            for idx, e in enumerate(es):
                slot = slot_base[k] + order[idx]
                a, b = graph.edges[e]
                u, v = vperm[a], vperm[b]
                if k[0] == k[1]:
                    flip = flips[idx]
                else:
                    flip = u > v  # side 0 must sit at the smaller vertex
                edge_images[e] = (slot, k, flip)
        yield tuple(vperm), tuple(edge_images)


def _encode(graph: StableGraph, vperm, edge_images, dec=None):
    genera = [0] * graph.num_vertices
    legs = [None] * graph.num_vertices
    for v in range(graph.num_vertices):
        genera[vperm[v]] = graph.genera[v]
        legs[vperm[v]] = graph.legs[v]
    edge_list = [None] * graph.num_edges
    for e in range(graph.num_edges):
        slot, key, _flip = edge_images[e]
        edge_list[slot] = key
    enc = (tuple(genera), tuple(legs), tuple(edge_list))
    if dec is None:
        return enc
    psi, kappa = dec
    psi_items = []
    for k, exp in psi.items():
        if exp == 0:
            continue
        if k[0] == "l":
            psi_items.append((("l", k[1]), exp))
        else:
            _tag, e, side = k
            slot, _key, flip = edge_images[e]
            new_side = 1 - side if flip else side
            psi_items.append((("h", slot, new_side), exp))
    kappa_items = []
    for v, exps in kappa.items():
        if exps:
            kappa_items.append((vperm[v], tuple(sorted(exps))))
    return enc, tuple(sorted(psi_items)), tuple(sorted(kappa_items))


def canonical_key(graph: StableGraph, dec=None, extra_vertex_key=None):
    """Canonical encoding: equal keys iff the (decorated) graphs are
    isomorphic respecting markings."""
    cache_key = (graph, None if dec is None else (tuple(sorted(dec[0].items())), tuple(sorted((v, tuple(sorted(e))) for v, e in dec[1].items()))), extra_vertex_key is not None)
    if extra_vertex_key is None and cache_key in _canonical_cache:
        return _canonical_cache[cache_key]
    best = None
    for vperm, edge_images in iter_relabelings(graph, extra_vertex_key):
        enc = _encode(graph, vperm, edge_images, dec)
        if best is None or enc < best:
            best = enc
    if extra_vertex_key is None:
        _canonical_cache[cache_key] = best
    return best


def automorphism_order(graph: StableGraph) -> int:
    """Order of the automorphism group (legs fixed pointwise, vertices,
    edges and half-edges permuted)."""
    if graph in _aut_cache:
        return _aut_cache[graph]
    target = canonical_key(graph)
    count = 0
    for vperm, edge_images in iter_relabelings(graph):
        if _encode(graph, vperm, edge_images) == target:
            count += 1
    _aut_cache[graph] = count
    return count


def graphs_isomorphic(g1: StableGraph, g2: StableGraph) -> bool:
    return canonical_key(g1) == canonical_key(g2)


def to_json_dict(graph: StableGraph) -> dict:
    """JSON form: half-edge ids are ``2e`` and ``2e+1`` for edge ``e``."""
    return {
        "vertices": list(graph.genera),
        "legs": [list(l) for l in graph.legs],
        "edges": [
            [[a, 2 * e], [b, 2 * e + 1]] for e, (a, b) in enumerate(graph.edges)
        ],
    }


# -- enumeration -----------------------------------------------------------


def trivial_graph(g: int, n: int) -> StableGraph:
    return StableGraph((g,), (tuple(range(1, n + 1)),), ())


def enumerate_one_edge_graphs(g: int, n: int) -> list:
    """All one-edge stable graphs of type (g, n), one per isomorphism class.

    The self-loop graph comes first (when stable), then the compact-type
    graphs in canonical order.
    """
    if 2 * g - 2 + n <= 0:
        raise ValueError("unstable (g, n)")
    out = []
    if g >= 1:
        loop = StableGraph((g - 1,), (tuple(range(1, n + 1)),), ((0, 0),))
        if not validate_stable_graph(loop, g=g, n=n):
            out.append(loop)
    seen = set()
    compact = []
    markings = list(range(1, n + 1))
    for q in range(g + 1):
        for r in range(n + 1):
            for P in itertools.combinations(markings, r):
                Pc = tuple(m for m in markings if m not in P)
                cand = StableGraph((q, g - q), (P, Pc), ((0, 1),))
                if not validate_stable_graph(cand, g=g, n=n):
                    key = canonical_key(cand)
                    if key not in seen:
                        seen.add(key)
                        compact.append(cand)
    compact.sort(key=canonical_key)
    return out + compact


def one_edge_degenerations(graph: StableGraph) -> list:
    """All one-isomorphism-class-per-entry graphs obtained from ``graph`` by
    one extra edge (vertex split or genus-dropping self-loop)."""
    out = {}
    nv = graph.num_vertices
    for v in range(nv):
        gv = graph.genera[v]
        legs_v = graph.legs[v]
        slots = graph.half_edges_at(v)  # half-edge keys (e, side)
        # (a) self-loop, drops genus
        if gv >= 1:
            genera = list(graph.genera)
            genera[v] = gv - 1
            cand = StableGraph(tuple(genera), graph.legs, graph.edges + ((v, v),))
            if not validate_stable_graph(cand, connected=False):
                out.setdefault(canonical_key(cand), cand)
        # (b) splits: vertex v becomes v (genus g1, keeps S) plus a new
        # vertex nv (genus g2, gets the complement), joined by a new edge
        attach = [("l", m) for m in legs_v] + [("h",) + he for he in slots]
        for g1 in range(gv + 1):
            g2 = gv - g1
            for r in range(len(attach) + 1):
                for S in itertools.combinations(range(len(attach)), r):
                    Sset = set(S)
                    legs1 = tuple(a[1] for i, a in enumerate(attach) if a[0] == "l" and i in Sset)
                    legs2 = tuple(a[1] for i, a in enumerate(attach) if a[0] == "l" and i not in Sset)
                    deg1 = len(S) + 1
                    deg2 = len(attach) - len(S) + 1
                    if 2 * g1 - 2 + deg1 <= 0 or 2 * g2 - 2 + deg2 <= 0:
                        continue
                    genera = list(graph.genera)
                    genera[v] = g1
                    genera.append(g2)
                    legs = list(graph.legs)
                    legs[v] = legs1
                    legs.append(legs2)
                    edges = [list(e) for e in graph.edges]
                    for i, a in enumerate(attach):
                        if a[0] == "h" and i not in Sset:
                            _tag, e, side = a
                            edges[e][side] = nv
                    edges.append([v, nv])
                    cand = StableGraph(tuple(genera), tuple(legs), tuple(tuple(e) for e in edges))
                    if not validate_stable_graph(cand, connected=False):
                        out.setdefault(canonical_key(cand), cand)
    return list(out.values())


def enumerate_stable_graphs(g: int, n: int, max_edges: int) -> list:
    """All stable graphs of type (g, n) with at most ``max_edges`` edges,
    one representative per isomorphism class, including the smooth graph."""
    if 2 * g - 2 + n <= 0:
        raise ValueError("unstable (g, n)")
    start = trivial_graph(g, n)
    found = {canonical_key(start): start}
    frontier = [start]
    while frontier:
        nxt = []
        for gr in frontier:
            if gr.num_edges >= max_edges:
                continue
            for dg in one_edge_degenerations(gr):
                key = canonical_key(dg)
                if key not in found:
                    found[key] = dg
                    nxt.append(dg)
        frontier = nxt
    out = list(found.values())
    out.sort(key=lambda gr: (gr.num_edges, tuple(sorted(gr.genera)), canonical_key(gr)))
    return out


# -- graph contractions (Gamma-structures) ---------------------------------


@dataclass(frozen=True)
class GraphContraction:
    """A contraction exhibiting ``delta`` as a degeneration of ``gamma``.

    vertex_map: per vertex of delta, the image vertex of gamma
    edge_map:   per edge of gamma, the pair (edge of delta, flip); flip means
                half-edge (e, 0) of gamma corresponds to side 1 in delta
    """

    vertex_map: tuple
    edge_map: tuple

    def delta_edge_of(self, gamma_edge: int):
        return self.edge_map[gamma_edge]

    def image_edges(self) -> set:
        return {e for (e, _flip) in self.edge_map}

    def half_edge_image(self, gamma_he):
        e, side = gamma_he
        de, flip = self.edge_map[e]
        return (de, 1 - side if flip else side)


def enumerate_gamma_structures(delta: StableGraph, gamma: StableGraph) -> list:
    """All graph contractions of ``delta`` onto ``gamma``.

    The half-edge map must respect markings and edges; each vertex preimage
    must be a connected subgraph of the right genus. When the graphs have
    the same number of edges this enumerates isomorphisms.
    """
    out = []
    ne_d, ne_g = delta.num_edges, gamma.num_edges
    if ne_d < ne_g:
        return out
    marking_vertex_d = {m: v for v, l in enumerate(delta.legs) for m in l}
    marking_vertex_g = {m: v for v, l in enumerate(gamma.legs) for m in l}
    if set(marking_vertex_d) != set(marking_vertex_g):
        return out

    for chosen in itertools.permutations(range(ne_d), ne_g):
        for flips in itertools.product((False, True), repeat=ne_g):
            edge_map = tuple(zip(chosen, flips))
            # contracted edges: those not in the image
            image = set(chosen)
            # components of (V(delta), non-image edges)
            nv = delta.num_vertices
            parent = list(range(nv))

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for e, (a, b) in enumerate(delta.edges):
                if e not in image:
                    ra, rb = find(a), find(b)
                    if ra != rb:
                        parent[ra] = rb
            comp_of = [find(v) for v in range(nv)]

            # the component containing each gamma half-edge's landing vertex
            # must map to that half-edge's gamma vertex
            vmap_comp: dict = {}
            ok = True
            for ge in range(ne_g):
                (ga, gb) = gamma.edges[ge]
                de, flip = edge_map[ge]
                da, db = delta.edges[de]
                if flip:
                    da, db = db, da
                for comp, gv in ((comp_of[da], ga), (comp_of[db], gb)):
                    if vmap_comp.setdefault(comp, gv) != gv:
                        ok = False
                        break
                if not ok:
                    break
            if not ok:
                continue
            for m, dv in marking_vertex_d.items():
                gv = marking_vertex_g[m]
                if vmap_comp.setdefault(comp_of[dv], gv) != gv:
                    ok = False
                    break
            if not ok:
                continue
            comps = set(comp_of)
            if len(vmap_comp) != len(comps):
                continue  # some component unconstrained: cannot happen for
                # surjective stable targets unless gamma has an isolated
                # vertex with no legs/edges, which stability forbids
            # surjectivity plus connectedness of preimages: each gamma vertex
            # must be hit by exactly one component
            hit: dict = {}
            for comp, gv in vmap_comp.items():
                hit.setdefault(gv, []).append(comp)
            if set(hit) != set(range(gamma.num_vertices)):
                continue
            if any(len(cs) != 1 for cs in hit.values()):
                continue
            # genus condition per gamma vertex
            ok = True
            for gv in range(gamma.num_vertices):
                comp = hit[gv][0]
                verts = [v for v in range(nv) if comp_of[v] == comp]
                internal = sum(
                    1
                    for e, (a, b) in enumerate(delta.edges)
                    if e not in image and comp_of[a] == comp
                )
                genus = sum(delta.genera[v] for v in verts) + internal - len(verts) + 1
                if genus != gamma.genera[gv]:
                    ok = False
                    break
            if not ok:
                continue
            vertex_map = tuple(vmap_comp[comp_of[v]] for v in range(nv))
            out.append(GraphContraction(vertex_map, edge_map))
    return out

"""Spin parity of multi-scale differentials via the welded-surface model.

The flat geometry is abstracted to turning numbers mod 2. A basis adapted to
a level graph consists of

* one (graph cycle, vanishing cycle) pair per non-tree edge of an adapted
  spanning tree: the graph cycle crosses exactly the seams along its
  fundamental cycle, the vanishing cycle is the seam of the non-tree edge
  and has turning number of the parity of the enhancement;
* abstract per-vertex symplectic pairs whose Arf contribution is the vertex
  parity.

Rotating the prong matching at an edge by l shifts the turning number of
every graph cycle crossing that seam by l mod 2, which is all the Arf census
needs. When some enhancement is even the adapted tree is built on the graph
minus one even edge, so that edge is crossed by exactly one basis cycle and
a single prong step there flips the global parity; with all enhancements odd
every vanishing cycle has odd turning number, so the edge pairs contribute
nothing and the parity is the sum of the vertex parities.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .graphs import StableGraph
from .levels import EnhancedLevelGraph


# -- adapted spanning trees --------------------------------------------------


@dataclass
class AdaptedTree:
    """A spanning tree plus fundamental-cycle data.

    tree: set of edge indices
    cycles: per non-tree edge, the sorted tuple of edge indices on its
            fundamental cycle (including the non-tree edge itself)
    root: the initial vertex of the iteration
    """

    tree: frozenset
    cycles: dict
    root: int


def _tree_paths(graph: StableGraph, tree) -> dict:
    """Parent structure of the tree rooted anywhere (vertex 0)."""
    adj = {v: [] for v in range(graph.num_vertices)}
    for e in tree:
        a, b = graph.edges[e]
        adj[a].append((b, e))
        adj[b].append((a, e))
    return adj


def _path_between(graph: StableGraph, tree, u, v):
    """Edge list of the tree path from u to v."""
    adj = _tree_paths(graph, tree)
    prev = {u: (None, None)}
    queue = [u]
    while queue:
        x = queue.pop()
        if x == v:
            break
        for (y, e) in adj[x]:
            if y not in prev:
                prev[y] = (x, e)
                queue.append(y)
    path = []
    x = v
    while x != u:
        px, e = prev[x]
        path.append(e)
        x = px
    return list(reversed(path))


def _distances(graph: StableGraph, tree, root) -> dict:
    adj = _tree_paths(graph, tree)
    dist = {root: 0}
    frontier = [root]
    while frontier:
        nxt = []
        for x in frontier:
            for (y, _e) in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    nxt.append(y)
        frontier = nxt
    return dist


def _fundamental_cycle(graph: StableGraph, tree, q):
    a, b = graph.edges[q]
    if a == b:
        return (q,)
    return tuple(sorted(_path_between(graph, tree, a, b) + [q]))


def _vertex_visits(graph: StableGraph, cycle_edges, v):
    """Pairs of edge-ends at v used consecutively by the fundamental cycle.

    For a cycle this is just: every edge of the cycle incident to v shows up
    with multiplicity (loops twice); the visit pairs them up arbitrarily,
    which is enough to detect two-away-edge conflicts.
    """
    incident = []
    for e in cycle_edges:
        x, y = graph.edges[e]
        if x == v:
            incident.append(e)
        if y == v:
            incident.append(e)
    return incident


def build_adapted_spanning_tree(graph: StableGraph, forbidden_edge=None) -> AdaptedTree:
    """Spanning tree by the layer-by-layer edge-replacement iteration.

    Start from any spanning tree with a leaf root; while some vertex at
    distance k+1 has two away-edges sharing a fundamental cycle, swap one of
    them for the non-tree edge generating that cycle (the non-tree edge must
    only touch vertices at distance >= k+1). The result has planar segment
    incidence at every vertex (audited by :func:`planarity_audit`).

    ``forbidden_edge`` is excluded from the tree (the even-enhancement
    preference of the adapted basis).
    """
    nv = graph.num_vertices
    usable = [e for e in range(graph.num_edges) if e != forbidden_edge]
    # greedy spanning tree
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = set()
    for e in sorted(usable):
        a, b = graph.edges[e]
        if find(a) != find(b):
            parent[find(a)] = find(b)
            tree.add(e)
    if len(tree) != nv - 1:
        raise ValueError("graph (minus the forbidden edge) is not connected")

    # pick a leaf as the fixed initial vertex (lowest id for determinism)
    def leaf_vertices(t):
        deg = [0] * nv
        for e in t:
            a, b = graph.edges[e]
            deg[a] += 1
            deg[b] += 1
        return [v for v in range(nv) if deg[v] == 1]

    leaves = leaf_vertices(tree)
    root = min(leaves) if leaves else 0
    if nv == 1:
        root = 0

    max_rounds = 4 * (graph.num_edges + 1) * (nv + 1)
    rounds = 0
    k = 0
    while True:
        dist = _distances(graph, tree, root)
        if k + 1 > max(dist.values() or [0]):
            break
        layer = [w for w in dist if dist[w] == k + 1]
        changed = False
        for w in sorted(layer):
            while True:
                dist = _distances(graph, tree, root)
                if dist.get(w) != k + 1:
                    break
                toward = None
                for e in tree:
                    a, b = graph.edges[e]
                    if w in (a, b):
                        other = b if a == w else a
                        if dist[other] == dist[w] - 1:
                            toward = e
                            break
                nontree = [q for q in usable if q not in tree]
                conflict = None
                for q in sorted(nontree):
                    qa, qb = graph.edges[q]
                    if dist[qa] < k + 1 or dist[qb] < k + 1:
                        continue
                    cyc = _fundamental_cycle(graph, tree, q)
                    aways = [
                        e
                        for e in cyc
                        if e != q and e in tree and e != toward and w in graph.edges[e]
                    ]
                    # count edge-ends at w (loops count twice)
                    ends = []
                    for e in aways:
                        a, b = graph.edges[e]
                        ends += [e] * ((a == w) + (b == w))
                    if len(ends) >= 2:
                        conflict = (q, sorted(set(aways)))
                        break
                if conflict is None:
                    break
                q, aways = conflict
                tree.discard(aways[0])
                tree.add(q)
                changed = True
                rounds += 1
                if rounds > max_rounds:
                    raise RuntimeError("adapted-tree iteration did not terminate")
        if not changed:
            k += 1

    cycles = {}
    for q in usable:
        if q not in tree:
            cycles[q] = _fundamental_cycle(graph, tree, q)
    if forbidden_edge is not None:
        cycles[forbidden_edge] = _fundamental_cycle(graph, tree, forbidden_edge)
    return AdaptedTree(frozenset(tree), cycles, root)


def planarity_audit(graph: StableGraph, adapted: AdaptedTree) -> bool:
    """Check the structural planarity property of the segment graphs.

    At every vertex, classify the incident edge-ends: toward the root (i),
    away along the tree (ii), non-tree (iii). The construction guarantees
    no fundamental cycle uses two away-ends at one vertex, and non-tree ends
    carry at most one segment; cycles in the segment graph are then only
    multi-edges through the unique type (i) end, which is planar.
    """
    dist = _distances(graph, adapted.tree, adapted.root)
    for v in range(graph.num_vertices):
        for q, cyc in adapted.cycles.items():
            # a tree edge at v is "away" when its other end is further out
            aways = 0
            for e in cyc:
                if e == q or e not in adapted.tree:
                    continue
                a, b = graph.edges[e]
                if a == v and dist[b] > dist[a]:
                    aways += 1
                if b == v and dist[a] > dist[b]:
                    aways += 1
            if aways >= 2:
                return False
    # a non-tree edge appears only on its own fundamental cycle, so its
    # segment ends have degree one by construction
    for q, cyc in adapted.cycles.items():
        for q2 in adapted.cycles:
            if q2 != q and q2 in cyc:
                return False
    return True


# -- adapted symplectic bases -------------------------------------------------


@dataclass
class DeltaAdaptedBasis:
    """Symplectic basis data of the welded surface of a level graph.

    graph_cycles: per generator edge, the frozenset of crossed seams
    vanishing:    per generator edge, its enhancement parity (the turning
                  number of the seam cycle mod 2)
    vertex_pairs: number of abstract per-vertex symplectic pairs (sum g(v))
    """

    graph_cycles: dict
    vanishing: dict
    vertex_pairs: int


def delta_adapted_basis(graph: EnhancedLevelGraph) -> DeltaAdaptedBasis:
    """Basis with the even-enhancement preference of the classification.

    If some vertical edge has even enhancement, the spanning tree avoids one
    such edge, so that edge is crossed by exactly one graph cycle.
    """
    base = graph.base
    vertical = graph.vertical_edges()
    even_edges = [e for e in vertical if graph.kappa[e] % 2 == 0]
    forbidden = min(even_edges) if even_edges else None
    adapted = build_adapted_spanning_tree(base, forbidden_edge=forbidden)
    cycles = {q: frozenset(cyc) for q, cyc in adapted.cycles.items()}
    vanishing = {q: graph.kappa[q] % 2 for q in cycles}
    if forbidden is not None:
        crossers = [q for q, cyc in cycles.items() if forbidden in cyc]
        assert crossers == [forbidden], "even edge must be crossed only by its own cycle"
    return DeltaAdaptedBasis(cycles, vanishing, sum(base.genera))


# -- prong matchings and the Arf census ---------------------------------------


@dataclass(frozen=True)
class ProngMatching:
    """Offsets in prod Z/kappa_e over the vertical edges."""

    offsets: tuple  # (edge, offset mod kappa_e) pairs, sorted

    def offset(self, e) -> int:
        return dict(self.offsets).get(e, 0)


def zero_prong_matching(graph: EnhancedLevelGraph) -> ProngMatching:
    return ProngMatching(tuple((e, 0) for e in graph.vertical_edges()))


def rotate_prong_matching(graph: EnhancedLevelGraph, pm: ProngMatching, edge: int, l: int) -> ProngMatching:
    """Rotate the local prong matching at ``edge`` by l."""
    if edge in graph.horizontal or edge >= graph.base.num_edges:
        raise ValueError("edge %r is not a vertical edge" % (edge,))
    out = []
    for (e, off) in pm.offsets:
        if e == edge:
            out.append((e, (off + l) % graph.kappa[e]))
        else:
            out.append((e, off))
    return ProngMatching(tuple(out))


def prong_group(graph: EnhancedLevelGraph):
    """Iterate over the full prong rotation group."""
    edges = graph.vertical_edges()
    for combo in itertools.product(*(range(graph.kappa[e]) for e in edges)):
        yield ProngMatching(tuple(zip(edges, combo)))


def prong_group_order(graph: EnhancedLevelGraph) -> int:
    out = 1
    for e in graph.vertical_edges():
        out *= graph.kappa[e]
    return out


@dataclass
class TurningAssignment:
    """Base turning data mod 2: free base turning number per graph cycle and
    the parities of the components of the underlying twisted differential."""

    base_turning: dict
    vertex_parities: tuple


def default_turning(graph: EnhancedLevelGraph, vertex_parities) -> TurningAssignment:
    basis = delta_adapted_basis(graph)
    return TurningAssignment({q: 0 for q in basis.graph_cycles}, tuple(vertex_parities))


def arf_parity(
    basis: DeltaAdaptedBasis, assignment: TurningAssignment, pm: ProngMatching
) -> int:
    """Arf invariant sum((ind a + 1)(ind b + 1)) mod 2 of the basis.

    Graph-cycle turning numbers shift by the prong offsets at the crossed
    seams; vanishing cycles have the parity of their enhancement; the
    abstract per-vertex pairs contribute the vertex parities.
    """
    total = sum(assignment.vertex_parities) % 2
    offsets = dict(pm.offsets)
    for q, crossed in basis.graph_cycles.items():
        ind_c = assignment.base_turning.get(q, 0) + sum(offsets.get(e, 0) for e in crossed)
        ind_v = basis.vanishing[q]
        total += (ind_c + 1) * (ind_v + 1)
    return total % 2


@dataclass(frozen=True)
class SpinClassification:
    """Either half the prong matchings each parity, or constant parity."""

    kind: str  # "half" or "constant"
    parity: int | None


def classify_spin(graph: EnhancedLevelGraph, vertex_parities) -> SpinClassification:
    """Classification of the parity over the prong matchings: an even
    enhancement splits them half and half; otherwise the parity is constant,
    equal to the sum of the component parities."""
    if any(graph.kappa[e] % 2 == 0 for e in graph.vertical_edges()):
        return SpinClassification("half", None)
    return SpinClassification("constant", sum(vertex_parities) % 2)


def arf_census(graph: EnhancedLevelGraph, vertex_parities, base_turning=None):
    """Exhaustive (even, odd) counts of the Arf parity over all prong
    matchings; brute-force check of the classification."""
    basis = delta_adapted_basis(graph)
    assignment = TurningAssignment(
        dict(base_turning or {q: 0 for q in basis.graph_cycles}), tuple(vertex_parities)
    )
    even = odd = 0
    for pm in prong_group(graph):
        if arf_parity(basis, assignment, pm) == 0:
            even += 1
        else:
            odd += 1
    return even, odd


# -- base parities -------------------------------------------------------------


def base_parity(orders) -> str | None:
    """Literal genus-0 base parities: (0,-1,-1) is odd; even type without
    simple poles is even; anything else is not a base case."""
    orders = tuple(sorted(orders, reverse=True))
    if orders == (0, -1, -1):
        return "odd"
    if sum(orders) == -2 and all(m % 2 == 0 for m in orders):
        return "even"
    return None


def genus0_paired_pole_census(k: int):
    """Census of the zero-dimensional stratum with orders (2k, -2k, -1, -1)
    and paired simple poles.

    The flat surfaces are glued from 2(2k-1) half planes around the zero and
    two half-infinite cylinders of the same width in opposite directions.
    Normalizing the zero to the origin and the cylinder at the first simple
    pole to sit at angle 0, the second cylinder attaches at angle pi*j/k for
    j = 1 .. 2k-1 (the residue pairing forces (z4/z3)^{2k} = 1). Joining the
    cylinders gives a genus-one handle whose core geodesic has turning
    number 0 and whose cross curve, the straight connector between the
    attachment points, winds with the flat structure: the tangent direction
    of z^{2k} dz along the chord from angle 0 to angle pi*j/k makes exactly
    2k * (pi j / k) / (2 pi) = j full turns. The Arf contribution of the
    handle is therefore (j + 1 mod 2); the j = 1 surface is even, which
    anchors the model.

    Returns (even_count, odd_count); even - odd = 1 for every k.
    """
    if k < 1:
        raise ValueError("k must be positive")
    even = odd = 0
    for j in range(1, 2 * k):
        connector_turns = (2 * k * j) // (2 * k)  # = j full turns
        parity = (connector_turns + 1) * (0 + 1) % 2
        if parity == 0:
            even += 1
        else:
            odd += 1
    return even, odd


def horizontal_join_spin_sign() -> int:
    """Sign of the spin pushforward across a compact-type horizontal edge:
    the joint parity is the sum of the vertex parities plus one (the loop
    through the paired simple poles is double counted when the edge is cut),
    so the spin class of the join is minus the product of the vertex spin
    classes."""
    return -1

"""Enhanced level graphs and generalised strata of differentials.

A generalised stratum is a list of signatures (one per connected component)
plus residue conditions: a partition of a subset of the marked poles, each
part demanding that the corresponding residues sum to zero.

Boundary divisors of the corresponding moduli space are encoded by enhanced
level graphs: two-level graphs whose vertical edges carry a positive
enhancement kappa_e (node orders kappa_e - k on top, -kappa_e - k below), or
one-level graphs with a single horizontal edge (both node orders -k).

The enumeration of two-level graphs works by splitting genus, markings and
edge multisets subject to the per-vertex order-sum equations, then pruning
level strata that are empty (unstable vertices, negative projectivized
dimension, a simple pole whose residue is forced to vanish) and
deduplicating up to isomorphism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import lcm_list, matrix_rank
from .graphs import (
    StableGraph,
    automorphism_order,
    canonical_key,
    iter_relabelings,
    _encode,
    validate_stable_graph,
)

HORIZONTAL = 0  # kappa placeholder for horizontal edges


@dataclass(frozen=True)
class Signature:
    """Orders of zeros and poles of one connected component."""

    orders: tuple
    g: int
    k: int = 1

    def __post_init__(self):
        object.__setattr__(self, "orders", tuple(self.orders))
        if sum(self.orders) != self.k * (2 * self.g - 2):
            raise ValueError(
                "orders %r sum to %d, expected k(2g-2) = %d"
                % (self.orders, sum(self.orders), self.k * (2 * self.g - 2))
            )

    @property
    def n(self) -> int:
        return len(self.orders)

    @property
    def even_type(self) -> bool:
        return all(m % 2 == 0 for m in self.orders)

    @property
    def holomorphic(self) -> bool:
        return all(m >= 0 for m in self.orders)

    def pole_positions(self) -> list:
        return [i for i, m in enumerate(self.orders) if m < 0]


@dataclass(frozen=True)
class GeneralisedStratum:
    """Product of strata with residue conditions.

    residues: tuple of parts; each part is a frozenset of (component, index)
    pairs with 0-based indices into the component signatures. Each part
    demands the corresponding residues sum to zero.
    """

    sigs: tuple
    residues: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "sigs", tuple(self.sigs))
        object.__setattr__(
            self, "residues", tuple(frozenset(part) for part in self.residues)
        )
        for part in self.residues:
            for (c, i) in part:
                if self.sigs[c].orders[i] >= 0:
                    raise ValueError("residue condition on non-pole (%d, %d)" % (c, i))
                if self.sigs[c].orders[i] == -1 and len(part) != 2:
                    raise ValueError("simple poles may only appear in paired conditions")

    @property
    def k(self) -> int:
        return self.sigs[0].k

    @property
    def num_components(self) -> int:
        return len(self.sigs)

    def even_type_up_to_pairs(self) -> bool:
        """Even type except for simple poles that are paired off by the
        residue conditions."""
        paired = {pi for part in self.residues if len(part) == 2 for pi in part
                  if all(self.sigs[c].orders[i] == -1 for (c, i) in part)}
        for c, sig in enumerate(self.sigs):
            for i, m in enumerate(sig.orders):
                if m % 2 != 0 and not (m == -1 and (c, i) in paired):
                    return False
        return True

    def residue_rank(self) -> int:
        """Rank added by the residue conditions over the per-component
        residue theorems (the number of genuinely independent conditions)."""
        poles = [(c, i) for c, sig in enumerate(self.sigs) for i in sig.pole_positions()]
        if not poles:
            return 0
        col = {p: j for j, p in enumerate(poles)}
        base = []
        for c, sig in enumerate(self.sigs):
            row = [0] * len(poles)
            for i in sig.pole_positions():
                row[col[(c, i)]] = 1
            if any(row):
                base.append(row)
        extra = []
        for part in self.residues:
            row = [0] * len(poles)
            for p in part:
                row[col[p]] = 1
            extra.append(row)
        return matrix_rank(base + extra) - matrix_rank(base)

    def projectivized_dim(self) -> int:
        """Dimension of the projectivized stratum.

        Per component the unprojectivized dimension is 2g - 2 + n, plus one
        when the component is holomorphic; one global projectivization and
        the independent residue conditions are subtracted.
        """
        total = 0
        for sig in self.sigs:
            total += 2 * sig.g - 2 + sig.n + (1 if sig.holomorphic else 0)
        return total - 1 - self.residue_rank()

    def forced_zero_residues(self) -> set:
        """Poles whose residue vanishes on the whole stratum (conditions
        plus residue theorems force it)."""
        poles = [(c, i) for c, sig in enumerate(self.sigs) for i in sig.pole_positions()]
        if not poles:
            return set()
        col = {p: j for j, p in enumerate(poles)}
        rows = []
        for c, sig in enumerate(self.sigs):
            row = [0] * len(poles)
            for i in sig.pole_positions():
                row[col[(c, i)]] = 1
            if any(row):
                rows.append(row)
        for part in self.residues:
            row = [0] * len(poles)
            for p in part:
                row[col[p]] = 1
            rows.append(row)
        base_rank = matrix_rank(rows)
        forced = set()
        for p in poles:
            probe = [0] * len(poles)
            probe[col[p]] = 1
            if matrix_rank(rows + [probe]) == base_rank:
                forced.add(p)
        return forced

    def is_empty(self) -> bool:
        """Detectable emptiness: negative dimension, or a simple pole whose
        residue is forced to vanish."""
        if self.projectivized_dim() < 0:
            return True
        for (c, i) in self.forced_zero_residues():
            if self.sigs[c].orders[i] == -1:
                return True
        return False

    def encode(self):
        return (
            tuple((s.orders, s.g, s.k) for s in self.sigs),
            tuple(sorted(tuple(sorted(part)) for part in self.residues)),
        )


def stratum(orders, g, k=1, residues=()) -> GeneralisedStratum:
    """Convenience constructor for a connected stratum; residue parts are
    sets of 1-based markings."""
    parts = tuple(frozenset((0, i - 1) for i in part) for part in residues)
    return GeneralisedStratum((Signature(tuple(orders), g, k),), parts)


@dataclass(frozen=True)
class EnhancedLevelGraph:
    """A stable graph with levels, enhancements and horizontal edges.

    Only the shapes the recursion needs are represented: all vertices on
    levels 0/-1 with vertical edges pointing down (side 0 = upper vertex),
    or all vertices on level 0 with horizontal edges.
    """

    base: StableGraph
    levels: tuple
    kappa: tuple  # per edge; HORIZONTAL for horizontal edges
    horizontal: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "levels", tuple(self.levels))
        object.__setattr__(self, "kappa", tuple(self.kappa))
        object.__setattr__(self, "horizontal", frozenset(self.horizontal))
        for e, (a, b) in enumerate(self.base.edges):
            if e in self.horizontal:
                if self.levels[a] != self.levels[b]:
                    raise ValueError("horizontal edge %d joins distinct levels" % e)
            else:
                if not (self.levels[a] > self.levels[b]):
                    raise ValueError("vertical edge %d must point down" % e)
                if self.kappa[e] < 1:
                    raise ValueError("enhancement must be positive")

    @property
    def two_level(self) -> bool:
        return not self.horizontal and set(self.levels) == {0, -1}

    def vertical_edges(self) -> list:
        return [e for e in range(self.base.num_edges) if e not in self.horizontal]

    def top_vertices(self) -> list:
        return [v for v, l in enumerate(self.levels) if l == 0]

    def bottom_vertices(self) -> list:
        return [v for v, l in enumerate(self.levels) if l == -1]

    def node_order(self, e: int, side: int, k: int = 1) -> int:
        if e in self.horizontal:
            return -k
        return self.kappa[e] - k if side == 0 else -self.kappa[e] - k

    def canonical(self):
        dec_key = lambda v: self.levels[v]
        best = None
        for vperm, edge_images in iter_relabelings(self.base, extra_vertex_key=dec_key):
            enc = _encode(self.base, vperm, edge_images)
            kappas = [None] * self.base.num_edges
            hors = []
            for e in range(self.base.num_edges):
                slot, _key, _flip = edge_images[e]
                kappas[slot] = self.kappa[e]
                if e in self.horizontal:
                    hors.append(slot)
            levels = [None] * self.base.num_vertices
            for v in range(self.base.num_vertices):
                levels[vperm[v]] = self.levels[v]
            full = (enc, tuple(levels), tuple(kappas), tuple(sorted(hors)))
            if best is None or full < best:
                best = full
        return best

    def aut_order(self) -> int:
        """Automorphisms preserving levels, enhancements and horizontality."""
        target = self.canonical()
        count = 0
        dec_key = lambda v: self.levels[v]
        for vperm, edge_images in iter_relabelings(self.base, extra_vertex_key=dec_key):
            enc = _encode(self.base, vperm, edge_images)
            kappas = [None] * self.base.num_edges
            hors = []
            for e in range(self.base.num_edges):
                slot, _key, _flip = edge_images[e]
                kappas[slot] = self.kappa[e]
                if e in self.horizontal:
                    hors.append(slot)
            levels = [None] * self.base.num_vertices
            for v in range(self.base.num_vertices):
                levels[vperm[v]] = self.levels[v]
            if (enc, tuple(levels), tuple(kappas), tuple(sorted(hors))) == target:
                count += 1
        return count

    def ell(self) -> int:
        """l.c.m. of the enhancements of the vertical edges."""
        return lcm_list([self.kappa[e] for e in self.vertical_edges()])

    def to_json_dict(self) -> dict:
        from .graphs import to_json_dict as graph_json

        d = graph_json(self.base)
        d["levels"] = list(self.levels)
        d["kappa"] = {str(e): self.kappa[e] for e in self.vertical_edges()}
        d["horizontal"] = sorted(self.horizontal)
        return d


def enhancement_from_orders(upper_order: int, lower_order: int, k: int = 1):
    """Invert condition (iv): node orders (kappa - k, -kappa - k) for a
    vertical edge, (-k, -k) for a horizontal one. Returns the enhancement,
    the string "horizontal", or None when the pair is incompatible."""
    if upper_order + lower_order != -2 * k:
        return None
    if upper_order == lower_order == -k:
        return "horizontal"
    kappa = upper_order + k
    if kappa < 1:
        return None
    return kappa


def prong_matching_class_count(graph: EnhancedLevelGraph) -> Fraction:
    """Number of prong-matching equivalence classes, prod kappa_e / lcm."""
    if graph.horizontal:
        raise ValueError("prong-matching count needs a vertical two-level graph")
    prod = 1
    for e in graph.vertical_edges():
        prod *= graph.kappa[e]
    out = Fraction(prod, graph.ell())
    assert out.denominator == 1
    return out


# -- level extraction --------------------------------------------------------


@dataclass
class LevelExtract:
    """One level of a two-level graph, as a generalised stratum.

    markings_of[c] lists, in order, what each marking of component c is:
    ("leg", ambient component, ambient index) or ("edge", edge index).
    """

    stratum: GeneralisedStratum
    markings_of: list
    vertices: list  # ambient vertex index per component
    dropped_mixed_parts: int = 0


def extract_level_stratum(
    graph: EnhancedLevelGraph,
    which: str,
    ambient: GeneralisedStratum,
    include_grc: bool = True,
) -> LevelExtract:
    """Extract the generalised stratum of the top or bottom level.

    Edges become markings of order kappa_e - k (top) resp. -kappa_e - k
    (bottom). The bottom inherits the global residue condition: one part per
    connected component of the top subgraph carrying no marked pole. Ambient
    residue parts restrict to the level containing their poles; a part
    spanning both levels restricts to its top half (the bottom residues are
    of lower order in the degeneration).

    ``include_grc=False`` leaves the global residue condition off; the
    enumeration uses that to match the paper's graph lists, whose sums keep
    graphs with GRC-starved bottom levels and kill them at evaluation time.
    """
    assert which in ("top", "bottom")
    k = ambient.k
    verts = graph.top_vertices() if which == "top" else graph.bottom_vertices()
    side = 0 if which == "top" else 1

    sigs = []
    markings_of = []
    position = {}  # ("leg", amb_c, i) or ("edge", e) -> (component, index)
    for ci, v in enumerate(verts):
        orders = []
        names = []
        for m in graph.base.legs[v]:
            amb_c, i = marking_origin(ambient, m)
            orders.append(ambient.sigs[amb_c].orders[i])
            names.append(("leg", amb_c, i))
        for (e, s) in graph.base.half_edges_at(v):
            if s != side:
                continue
            orders.append(graph.node_order(e, s, k))
            names.append(("edge", e))
        genus = graph.base.genera[v]
        sigs.append(Signature(tuple(orders), genus, k))
        markings_of.append(names)
        for idx, name in enumerate(names):
            position[name] = (ci, idx)

    parts = []
    dropped = 0
    # inherited ambient conditions, restricted to this level's poles
    for part in ambient.residues:
        here = []
        elsewhere = 0
        for (amb_c, i) in part:
            key = ("leg", amb_c, i)
            if key in position:
                here.append(position[key])
            else:
                elsewhere += 1
        if not here:
            continue
        if which == "bottom" and elsewhere:
            # a condition with top poles restricts to the top level only
            dropped += 1
            continue
        parts.append(frozenset(here))
    # global residue condition on the bottom level
    if which == "bottom" and include_grc:
        top_subgraph_components = _top_components(graph)
        for comp_vertices in top_subgraph_components:
            has_marked_pole = False
            for v in comp_vertices:
                for m in graph.base.legs[v]:
                    amb_c, i = marking_origin(ambient, m)
                    if ambient.sigs[amb_c].orders[i] < 0:
                        has_marked_pole = True
            if has_marked_pole:
                continue
            part = []
            for v in comp_vertices:
                for (e, s) in graph.base.half_edges_at(v):
                    if s == 0 and e not in graph.horizontal:
                        part.append(position[("edge", e)])
            if part:
                parts.append(frozenset(part))
    ext = GeneralisedStratum(tuple(sigs), tuple(parts))
    return LevelExtract(ext, markings_of, list(verts), dropped)


def _top_components(graph: EnhancedLevelGraph) -> list:
    tops = set(graph.top_vertices())
    parent = {v: v for v in tops}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e, (a, b) in enumerate(graph.base.edges):
        if a in tops and b in tops:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
    groups: dict = {}
    for v in tops:
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values())


def level_is_degenerate(graph: EnhancedLevelGraph, ambient: GeneralisedStratum) -> bool:
    """True when a level stratum is detectably empty for elementary reasons
    (negative dimension from the inherited conditions, or a simple pole with
    forced-zero residue).

    The global residue condition is deliberately left out here: graphs whose
    bottom level is starved by the GRC stay in the enumeration (the paper's
    boundary lists keep them) and their contributions vanish at evaluation
    time through the dimension bookkeeping.
    """
    for which in ("top", "bottom"):
        if which == "bottom" and not graph.bottom_vertices():
            continue
        ext = extract_level_stratum(graph, which, ambient, include_grc=False)
        if ext.stratum.is_empty():
            return True
    return False


# -- enumeration of two-level graphs ------------------------------------------

_splitting_cache: dict = {}


def _connected_two_level_splittings(sig: Signature):
    """Connected two-level enhanced graphs for one component signature.

    Stability pins the search: summing 2g(v) - 2 + deg(v) > 0 over vertices
    gives exactly 2g - 2 + n, so a valid graph has at most 2g - 2 + n
    vertices, and per-vertex minimum edge degrees prune most leg/genus
    assignments before edges are enumerated.
    """
    if sig in _splitting_cache:
        return _splitting_cache[sig]
    g, k = sig.g, sig.k
    n = sig.n
    max_vertices = 2 * g - 2 + n
    results = {}
    for t in range(1, max_vertices):
        for b in range(1, max_vertices + 1 - t):
            nv = t + b
            for assignment in itertools.product(range(nv), repeat=n):
                legs = [[] for _ in range(nv)]
                for m, v in enumerate(assignment, start=1):
                    legs[v].append(m)
                for genus_extra in _compositions_upto(g, nv):
                    h1 = g - sum(genus_extra)
                    ne = h1 + nv - 1
                    if ne < 1 or ne < max(t, b):
                        continue
                    # minimum edge degree per vertex from stability
                    min_deg = [
                        max(1, 3 - 2 * genus_extra[v] - len(legs[v])) for v in range(nv)
                    ]
                    if sum(min_deg[:t]) > ne or sum(min_deg[t:]) > ne:
                        continue
                    for edge_multiset in itertools.combinations_with_replacement(
                        [(i, t + j) for i in range(t) for j in range(b)], ne
                    ):
                        if not _covers_and_connects(edge_multiset, t, b):
                            continue
                        for kappas in _kappa_assignments(
                            sig, legs, genus_extra, edge_multiset, t, k
                        ):
                            genera = tuple(genus_extra)
                            edges = tuple(edge_multiset)
                            levels = tuple([0] * t + [-1] * b)
                            base = StableGraph(
                                genera, tuple(tuple(l) for l in legs), edges
                            )
                            if validate_stable_graph(base, g=g, n=n):
                                continue
                            elg = EnhancedLevelGraph(base, levels, kappas)
                            results.setdefault(elg.canonical(), elg)
    out = list(results.values())
    _splitting_cache[sig] = out
    return out


def _compositions_upto(total, parts):
    """All tuples of `parts` nonnegative ints with sum <= total."""
    if parts == 0:
        yield ()
        return
    for first in range(total + 1):
        for rest in _compositions_upto(total - first, parts - 1):
            yield (first,) + rest


def _covers_and_connects(edges, t, b) -> bool:
    nv = t + b
    seen = set()
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for (a, bb) in edges:
        seen.add(a)
        seen.add(bb)
        ra, rb = find(a), find(bb)
        if ra != rb:
            parent[ra] = rb
    if seen != set(range(nv)):
        return False
    return len({find(v) for v in range(nv)}) == 1


def _kappa_assignments(sig, legs, genera, edges, t, k):
    """Enhancements solving the per-vertex order-sum equations."""
    ne = len(edges)
    # top vertex i: sum legs + sum (kappa_e - k) = k(2 g_i - 2)
    top_targets = []
    for i in range(t):
        leg_sum = sum(sig.orders[m - 1] for m in legs[i])
        deg = sum(1 for (a, _b) in edges if a == i)
        target = k * (2 * genera[i] - 2) - leg_sum + k * deg  # = sum of kappas at i
        if target < deg:  # each kappa >= 1
            return
        top_targets.append(target)
    groups = [[e for e, (a, _b) in enumerate(edges) if a == i] for i in range(t)]

    def fill(i, kappas):
        if i == t:
            # check bottom equations
            for j in range(t, t + len(legs) - t):
                leg_sum = sum(sig.orders[m - 1] for m in legs[j])
                node_sum = sum(
                    -(kappas[e] + k) for e, (_a, b) in enumerate(edges) if b == j
                )
                if leg_sum + node_sum != k * (2 * genera[j] - 2):
                    return
            yield tuple(kappas)
            return
        es = groups[i]
        target = top_targets[i]
        for combo in _compositions_exact(target, len(es), minimum=1):
            for e, kap in zip(es, combo):
                kappas[e] = kap
            yield from fill(i + 1, kappas)

    yield from fill(0, [None] * ne)


def _compositions_exact(total, parts, minimum=0):
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(minimum, total + 1):
        for rest in _compositions_exact(total - first, parts - 1, minimum):
            yield (first,) + rest


def enumerate_two_level_graphs(strat: GeneralisedStratum) -> list:
    """All vertical two-level enhanced graphs of the stratum, one per
    isomorphism class, pruned of graphs with a detectably empty level.

    For a multi-component stratum, each component independently sits on the
    top level, on the bottom level, or degenerates into a connected
    two-level piece; both levels must be occupied globally.
    """
    per_component = []
    for c, sig in enumerate(strat.sigs):
        options = []
        smooth = StableGraph((sig.g,), (tuple(range(1, sig.n + 1)),), ())
        if not validate_stable_graph(smooth, g=sig.g, n=sig.n):
            options.append(("top", smooth, None))
            options.append(("bottom", smooth, None))
        for elg in _connected_two_level_splittings(sig):
            options.append(("split", elg.base, elg))
        per_component.append(options)

    offsets = marking_offsets(strat)
    out = {}
    for combo in itertools.product(*per_component):
        if not any(kind in ("split", "top") for kind, _b, _e in combo):
            continue
        if not any(kind in ("split", "bottom") for kind, _b, _e in combo):
            continue
        # merge into one disconnected graph; markings of component c are
        # shifted by the total marking count of the earlier components
        genera = []
        legs = []
        edges = []
        levels = []
        kappas = []
        for c, (kind, base, elg) in enumerate(combo):
            vbase = len(genera)
            genera += list(base.genera)
            legs += [tuple(m + offsets[c] for m in l) for l in base.legs]
            for (a, b) in base.edges:
                edges.append((vbase + a, vbase + b))
            if kind == "split":
                levels += list(elg.levels)
                kappas += list(elg.kappa)
            elif kind == "top":
                levels += [0]
            else:
                levels += [-1]
        base = StableGraph(tuple(genera), tuple(legs), tuple(edges))
        try:
            elg = EnhancedLevelGraph(base, tuple(levels), tuple(kappas))
        except ValueError:
            continue
        if not elg.two_level:
            continue
        if level_is_degenerate(elg, strat):
            continue
        out.setdefault(elg.canonical(), elg)
    graphs = list(out.values())
    graphs.sort(key=lambda e: e.canonical())
    return graphs


def marking_offsets(strat: GeneralisedStratum) -> list:
    """Global-marking offset of each component (components occupy disjoint
    marking ranges in merged graphs)."""
    offsets = []
    total = 0
    for sig in strat.sigs:
        offsets.append(total)
        total += sig.n
    return offsets


def marking_origin(strat: GeneralisedStratum, marking: int):
    """Invert the global marking numbering: (component, 0-based index)."""
    offsets = marking_offsets(strat)
    for c in reversed(range(strat.num_components)):
        if marking > offsets[c]:
            return (c, marking - offsets[c] - 1)
    raise ValueError("bad marking %d" % marking)


def component_of_vertices(graph: StableGraph, strat: GeneralisedStratum) -> list:
    """Which ambient stratum component each vertex belongs to, read off from
    the marking ranges of the graph's connected components."""
    out = [None] * graph.num_vertices
    for piece in graph.components():
        comp = None
        for v in piece:
            for m in graph.legs[v]:
                comp = marking_origin(strat, m)[0]
                break
            if comp is not None:
                break
        if comp is None:
            raise ValueError("graph component without markings")
        for v in piece:
            out[v] = comp
    return out


def enumerate_horizontal_one_edge(strat: GeneralisedStratum) -> list:
    """One-level graphs with a single horizontal edge.

    The self-node graph adds two simple poles with paired residues; the
    graphs of compact type split the markings over two vertices each
    carrying one end of the horizontal edge.

    Only single-component strata degenerate horizontally here.
    """
    if strat.num_components != 1:
        return []
    sig = strat.sigs[0]
    g, n, k = sig.g, sig.n, sig.k
    out = {}
    if g >= 1:
        base = StableGraph((g - 1,), (tuple(range(1, n + 1)),), ((0, 0),))
        if not validate_stable_graph(base, g=g, n=n):
            elg = EnhancedLevelGraph(base, (0,), (HORIZONTAL,), frozenset({0}))
            out.setdefault(elg.canonical(), elg)
    markings = list(range(1, n + 1))
    for g1 in range(g + 1):
        g2 = g - g1
        for r in range(n + 1):
            for P in itertools.combinations(markings, r):
                Pc = tuple(m for m in markings if m not in P)
                s1 = sum(sig.orders[m - 1] for m in P)
                s2 = sum(sig.orders[m - 1] for m in Pc)
                if s1 - k != k * (2 * g1 - 2) or s2 - k != k * (2 * g2 - 2):
                    continue
                base = StableGraph((g1, g2), (P, Pc), ((0, 1),))
                if validate_stable_graph(base, g=g, n=n):
                    continue
                elg = EnhancedLevelGraph(base, (0, 0), (HORIZONTAL,), frozenset({0}))
                out.setdefault(elg.canonical(), elg)
    graphs = list(out.values())
    graphs.sort(key=lambda e: e.canonical())
    return graphs


def extract_horizontal_stratum(
    graph: EnhancedLevelGraph, ambient: GeneralisedStratum
) -> LevelExtract:
    """The generalised stratum of a one-level graph with horizontal edges.

    Each horizontal half-edge becomes a simple-pole marking (order -k) and
    each horizontal edge contributes a paired residue condition relating its
    two branches; ambient residue parts are carried over.
    """
    k = ambient.k
    sigs = []
    markings_of = []
    position = {}
    for ci in range(graph.base.num_vertices):
        orders = []
        names = []
        for m in graph.base.legs[ci]:
            amb_c, i = marking_origin(ambient, m)
            orders.append(ambient.sigs[amb_c].orders[i])
            names.append(("leg", amb_c, i))
        for (e, s) in graph.base.half_edges_at(ci):
            if e not in graph.horizontal:
                raise ValueError("extract_horizontal_stratum needs a one-level graph")
            orders.append(-k)
            names.append(("edge", e, s))
        sigs.append(Signature(tuple(orders), graph.base.genera[ci], k))
        markings_of.append(names)
        for idx, name in enumerate(names):
            position[name] = (ci, idx)
    parts = []
    for part in ambient.residues:
        parts.append(frozenset(position[("leg", c, i)] for (c, i) in part))
    for e in sorted(graph.horizontal):
        parts.append(frozenset({position[("edge", e, 0)], position[("edge", e, 1)]}))
    ext = GeneralisedStratum(tuple(sigs), tuple(parts))
    return LevelExtract(ext, markings_of, list(range(graph.base.num_vertices)))


def simple_star_graphs(sig: Signature, odd_only: bool = False) -> list:
    """Two-level graphs with a single bottom vertex (the center), no pole
    legs on the top level and top orders divisible by k.

    The signature must be outside k * Z_{>=0}^n (a meromorphic condition);
    with ``odd_only`` every enhancement is odd.
    """
    k = sig.k
    if all(m >= 0 and m % k == 0 for m in sig.orders):
        raise ValueError("simple star graphs need a signature outside k*Z^n_{>=0}")
    strat = GeneralisedStratum((sig,))
    out = []
    for elg in enumerate_two_level_graphs(strat):
        if len(elg.bottom_vertices()) != 1:
            continue
        ok = True
        for v in elg.top_vertices():
            for m in elg.base.legs[v]:
                if sig.orders[m - 1] < 0 or sig.orders[m - 1] % k != 0:
                    ok = False
            for (e, s) in elg.base.half_edges_at(v):
                if s == 0 and (elg.kappa[e] - k) % k != 0:
                    ok = False
        if not ok:
            continue
        if odd_only and any(elg.kappa[e] % 2 == 0 for e in elg.vertical_edges()):
            continue
        out.append(elg)
    return out

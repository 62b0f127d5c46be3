"""Twisted double ramification cycles by weighted-graph sums, with the spin
variant over odd weightings.

The mixed-degree class is a sum over stable graphs and admissible weightings
mod r of pushed-forward exponential decorations; for large even r every
coefficient is a polynomial in r, which is recovered exactly by Lagrange
interpolation from enough samples (with held-out samples re-checked), and
the cycle is the degree-g part at r = 0 times 2^{-g}.

The star-graph side of the spin conjecture is assembled from the stratum
classes of the recursion module: each simple star graph contributes the
product of the spin classes of its top (holomorphic) vertices and its
center, weighted by the enhancements.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .exact import UniPoly, lagrange_interpolate
from .graphs import (
    StableGraph,
    automorphism_order,
    canonical_key,
    enumerate_stable_graphs,
    trivial_graph,
)
from .levels import (
    GeneralisedStratum,
    Signature,
    extract_level_stratum,
    simple_star_graphs,
    stratum,
)
from .recursion import SymbolicFallback, spin_stratum_class
from .taut import DecoratedClass, clutch_pushforward, make_term


@dataclass(frozen=True)
class RamificationVector:
    """Integer weights at the markings, summing to k(2g - 2 + n)."""

    a: tuple
    g: int
    k: int

    def __post_init__(self):
        object.__setattr__(self, "a", tuple(self.a))
        if sum(self.a) != self.k * (2 * self.g - 2 + len(self.a)):
            raise ValueError(
                "ramification vector %r does not sum to k(2g-2+n)" % (self.a,)
            )

    @property
    def n(self) -> int:
        return len(self.a)

    @property
    def all_odd(self) -> bool:
        return all(x % 2 == 1 for x in self.a)


def vector_of_signature(sig: Signature) -> RamificationVector:
    """a_mu = (m_1 + k, ..., m_n + k)."""
    return RamificationVector(tuple(m + sig.k for m in sig.orders), sig.g, sig.k)


def admissible_weightings(graph: StableGraph, a: RamificationVector, r: int, odd_only=False):
    """All admissible k-weightings mod r of the graph.

    Legs carry a_i mod r, the two halves of an edge sum to zero mod r, and
    each vertex's half-edge weights sum to k(2g(v) - 2 + n(v)) mod r. The
    solution set is a coset of the cycle space, hence of size r^{h^1} when
    nonempty; with ``odd_only`` both halves of every edge must be odd.

    A weighting maps leg markings to values and half-edge keys ("h", e, s)
    to the weights of the two branches.
    """
    k = a.k
    ne = graph.num_edges
    nv = graph.num_vertices
    leg_value = {}
    for v in range(nv):
        for m in graph.legs[v]:
            leg_value[m] = a.a[m - 1] % r

    # targets: per-vertex sums of edge-half weights
    target = []
    for v in range(nv):
        t = k * (2 * graph.genera[v] - 2 + graph.degree(v))
        t -= sum(leg_value[m] for m in graph.legs[v])
        target.append(t % r)

    # spanning forest determines tree-edge values from the leaves inward
    parent = list(range(nv))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    tree = []
    free = []
    for e, (x, y) in enumerate(graph.edges):
        if find(x) != find(y):
            parent[find(x)] = find(y)
            tree.append(e)
        else:
            free.append(e)

    out = []
    for combo in itertools.product(range(r), repeat=len(free)):
        local = dict(zip(free, combo))
        resid = list(target)
        for e, val in local.items():
            x, y = graph.edges[e]
            resid[x] = (resid[x] - val) % r
            resid[y] = (resid[y] + val) % r
        # peel leaves of the tree: each leaf's single tree edge is forced
        rem = set(tree)
        deg = [0] * nv
        for e in rem:
            x, y = graph.edges[e]
            deg[x] += 1
            deg[y] += 1
        while rem:
            leaf = next(v for v in range(nv) if deg[v] == 1)
            e = next(ee for ee in rem if leaf in graph.edges[ee])
            x, y = graph.edges[e]
            local[e] = resid[x] % r if x == leaf else (-resid[y]) % r
            resid[x] = (resid[x] - local[e]) % r
            resid[y] = (resid[y] + local[e]) % r
            rem.discard(e)
            deg[x] -= 1
            deg[y] -= 1
        ok = not any(v % r for v in resid)
        if ok and odd_only:
            ok = all(val % 2 == 1 and (r - val) % 2 == 1 for val in local.values())
        if ok:
            w = dict(leg_value)
            for e, val in local.items():
                w[("h", e, 0)] = val % r
                w[("h", e, 1)] = (r - val) % r
            out.append(w)
    return out


def _edge_series_coefficient(w_h, w_hp, m: int) -> Fraction:
    """Degree-m coefficient data of (1 - exp(-w w'(psi+psi')))/(psi+psi'):
    the (psi_h + psi_h')^(m-1) coefficient is (-1)^(m+1) (w w')^m / m!."""
    return Fraction((-1) ** (m + 1) * (w_h * w_hp) ** m, factorial(m))


def contribution_class(a: RamificationVector, graph: StableGraph, w, max_degree: int) -> DecoratedClass:
    """The pushforward of the exponential decoration of one weighting,
    truncated in total degree.

    Per vertex exp(-k kappa_1), per leg exp(a_i^2 psi), per edge the
    divided-difference series of 1 - exp(-w(h)w(h')(psi_h + psi_h')).
    """
    k = a.k
    g_amb = graph.total_genus()
    n_amb = len(graph.markings)
    ne = graph.num_edges
    budget = max_degree - ne
    if budget < 0:
        return DecoratedClass.zero(g_amb, n_amb)
    aut = automorphism_order(graph)

    # factor lists: (degree, coefficient, decoration fragment)
    blocks = []
    for v in range(graph.num_vertices):
        opts = []
        for m in range(budget + 1):
            opts.append((m, Fraction((-k) ** m, factorial(m)), ("kappa", v, m)))
        blocks.append(opts)
    for i in range(1, n_amb + 1):
        opts = []
        for m in range(budget + 1):
            opts.append((m, Fraction(a.a[i - 1] ** (2 * m), factorial(m)), ("psi_leg", i, m)))
        blocks.append(opts)
    for e in range(ne):
        opts = []
        for m in range(1, budget + 2):
            # the edge factor has total degree m (the edge itself counts 1,
            # the psi part m - 1)
            if m - 1 > budget:
                continue
            opts.append((m - 1, None, ("edge", e, m)))
        blocks.append(opts)

    out = DecoratedClass(g_amb, n_amb)
    for combo in itertools.product(*blocks):
        deg = sum(c[0] for c in combo)
        if deg > budget:
            continue
        coeff = Fraction(1)
        psi = {}
        kappa = {}
        ok = True
        for item in combo:
            _deg, cf, frag = item
            if frag[0] == "kappa":
                _t, v, m = frag
                coeff *= cf
                if m:
                    kappa.setdefault(v, []).extend([1] * m)
            elif frag[0] == "psi_leg":
                _t, i, m = frag
                coeff *= cf
                if m:
                    psi[("l", i)] = psi.get(("l", i), 0) + m
            else:
                _t, e, m = frag
                coeff *= _edge_series_coefficient(w[("h", e, 0)], w[("h", e, 1)], m)
        if coeff == 0:
            continue
        # distribute the edge binomials
        edge_exps = [
            (frag[1], frag[2] - 1)
            for (_d, _c, frag) in combo
            if frag[0] == "edge" and frag[2] - 1 > 0
        ]
        for distribution in _binomial_distributions(edge_exps):
            psi2 = dict(psi)
            mult = Fraction(1)
            for (e, alpha, beta, binom) in distribution:
                mult *= binom
                if alpha:
                    psi2[("h", e, 0)] = psi2.get(("h", e, 0), 0) + alpha
                if beta:
                    psi2[("h", e, 1)] = psi2.get(("h", e, 1), 0) + beta
            term = make_term(graph, psi2, kappa)
            out._add(coeff * mult * aut, term)
    return out


def _binomial_distributions(edge_exps):
    """All ways of splitting each (psi_h + psi_h')^p binomially."""
    if not edge_exps:
        yield []
        return
    (e, p), rest = edge_exps[0], edge_exps[1:]
    for alpha in range(p + 1):
        beta = p - alpha
        binom = Fraction(factorial(p), factorial(alpha) * factorial(beta))
        for tail in _binomial_distributions(rest):
            yield [(e, alpha, beta, binom)] + tail


def pixton_P(a: RamificationVector, r: int, degree: int, spin=False) -> DecoratedClass:
    """The mixed-degree class at a fixed modulus r, truncated in degree.

    Per graph the prefactor is 1/(|Aut| r^{h^1}), with an extra
    1/2^{g - h^1} over odd weightings for the spin variant.
    """
    if spin and (not a.all_odd or r % 2):
        raise ValueError("spin variant needs odd entries and even r")
    g, n = a.g, a.n
    out = DecoratedClass.zero(g, n)
    for graph in enumerate_stable_graphs(g, n, degree):
        h1 = graph.h1()
        weights = admissible_weightings(graph, a, r, odd_only=spin)
        if not weights:
            continue
        pref = Fraction(1, automorphism_order(graph) * r**h1)
        if spin:
            pref /= 2 ** (g - h1)
        acc = DecoratedClass.zero(g, n)
        for w in weights:
            acc = acc + contribution_class(a, graph, w, degree)
        out = out + acc.scale(pref)
    return out


@dataclass
class RPolyClass:
    """A decorated class whose coefficients are polynomials in r."""

    g: int
    n: int
    coeffs: dict  # canonical term key -> (UniPoly, representative term)
    sample_log: dict

    def specialize(self, r) -> DecoratedClass:
        out = DecoratedClass(self.g, self.n)
        for _key, (poly, term) in self.coeffs.items():
            out._add(poly(r), term)
        return out


def sample_moduli(a: RamificationVector, degree: int, spin=False):
    """The sampling policy: start beyond a conservative polynomiality bound
    and step by two (even moduli for the spin variant); interpolation degree
    bound 2*degree, plus two held-out verification samples."""
    r0 = 2 * (sum(abs(x) for x in a.a) + a.k * (2 * a.g - 2 + a.n)) + 2
    if r0 % 2:
        r0 += 1
    count = 2 * degree + 2
    samples = [r0 + 2 * j for j in range(count)]
    checks = [r0 + 2 * count, r0 + 2 * count + 2]
    return samples, checks


def pixton_P_poly(a: RamificationVector, degree: int, spin=False) -> RPolyClass:
    """Interpolate the r-dependence of every coefficient and verify the
    polynomials against held-out samples."""
    samples, checks = sample_moduli(a, degree, spin)
    evaluated = {r: pixton_P(a, r, degree, spin) for r in samples}
    keys = {}
    for r, cls in evaluated.items():
        for key, coeff, term in cls.terms():
            keys.setdefault(key, term)
    coeffs = {}
    for key, term in keys.items():
        pts = []
        for r, cls in evaluated.items():
            c = dict((k, c) for k, (c, _t) in cls._terms.items()).get(key, Fraction(0))
            pts.append((r, c))
        coeffs[key] = (lagrange_interpolate(pts), term)
    poly = RPolyClass(a.g, a.n, coeffs, {"samples": samples, "checks": checks})
    for r in checks:
        direct = pixton_P(a, r, degree, spin)
        if not (poly.specialize(r) == direct):
            raise ValueError(
                "r not in polynomial range: held-out sample r=%d disagrees" % r
            )
    return poly


def dr_cycle(a: RamificationVector, degree=None) -> DecoratedClass:
    """The twisted double ramification cycle: 2^{-g} times the degree-g part
    of the interpolated class at r = 0."""
    g = a.g
    degree = g if degree is None else degree
    poly = pixton_P_poly(a, degree)
    return poly.specialize(0).degree_part(g).scale(Fraction(1, 2**g))


def spin_dr_cycle(a: RamificationVector) -> DecoratedClass:
    """The spin twisted DR cycle over odd weightings and even moduli."""
    if not a.all_odd:
        raise ValueError("spin DR cycles need all entries odd")
    if a.k % 2 == 0:
        raise ValueError("spin DR cycles need odd k")
    g = a.g
    poly = pixton_P_poly(a, g, spin=True)
    return poly.specialize(0).degree_part(g).scale(Fraction(1, 2**g))


# -- the conjectural star-graph side -------------------------------------------


def conjecture_rhs(sig: Signature) -> DecoratedClass:
    """The star-graph side of the spin DR conjecture at k = 1.

    Sum over simple star graphs with odd enhancements of
    prod kappa / (k^{N0} |Aut|) times the clutched product of the spin
    classes of the top (holomorphic) strata and the center; the graph with
    no top vertex contributes the spin stratum class itself.
    """
    if sig.k != 1:
        raise SymbolicFallback("the star-graph side is evaluated for k = 1 only")
    if not sig.even_type:
        raise ValueError("the conjecture is about even-type signatures")
    strat = stratum(sig.orders, g=sig.g, k=sig.k)
    total = spin_stratum_class(strat)  # the trivial star (no top level)
    for star in simple_star_graphs(sig, odd_only=True):
        prod_kappa = 1
        for e in star.vertical_edges():
            prod_kappa *= star.kappa[e]
        n0 = len(star.top_vertices())
        coeff = Fraction(prod_kappa, sig.k**n0 * star.aut_order())
        factors = [None] * star.base.num_vertices
        top = extract_level_stratum(star, "top", strat, include_grc=False)
        bottom = extract_level_stratum(star, "bottom", strat, include_grc=False)
        for ext in (top, bottom):
            for ci, v in enumerate(ext.vertices):
                comp = GeneralisedStratum((ext.stratum.sigs[ci],), ())
                factors[v] = spin_stratum_class(comp)
        if any(f.is_zero() for f in factors):
            continue
        total = total + clutch_pushforward(factors, star.base).scale(coeff)
    return total

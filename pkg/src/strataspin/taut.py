"""Decorated boundary classes on moduli of stable curves, with an exact
psi/kappa correlator backend.

A class is a rational combination of terms ``<A, dec>`` where ``A`` is a
stable graph and ``dec`` a monomial in psi classes (at legs and half-edges)
and kappa classes (per vertex). The term denotes

    (1/|Aut A|) * (clutching pushforward of the monomial from prod M_{g(v),n(v)}),

so an undecorated one-edge term is literally the class of the corresponding
boundary divisor. All coefficients are exact rationals.

Supported products are the ones the reconstruction pipeline needs:
multiplication by psi/kappa monomials of the ambient space, and
multiplication by an undecorated one-edge boundary divisor (with its excess
term). Integration reduces to psi-kappa correlators per vertex, evaluated by
the string/KdV recursion.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .exact import format_rat
from .graphs import (
    StableGraph,
    automorphism_order,
    canonical_key,
    enumerate_gamma_structures,
    enumerate_one_edge_graphs,
    one_edge_degenerations,
    to_json_dict,
    trivial_graph,
)

# -- psi correlators --------------------------------------------------------

_psi_cache: dict = {}


def _dfact(n: int) -> int:
    """Double factorial with the convention (-1)!! = 1."""
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def psi_correlator(g: int, exps) -> Fraction:
    """<tau_{d_1} ... tau_{d_n}>_g, the integral of psi monomials.

    Evaluated by the string equation and the KdV (Witten/DVV) recursion
    from the normalizations <tau_0^3>_0 = 1 and <tau_1>_1 = 1/24. Returns 0
    when the degree does not match the dimension.
    """
    exps = tuple(sorted(exps, reverse=True))
    n = len(exps)
    if 2 * g - 2 + n <= 0:
        raise ValueError("unstable moduli space (g=%d, n=%d)" % (g, n))
    if any(d < 0 for d in exps):
        return Fraction(0)
    if sum(exps) != 3 * g - 3 + n:
        return Fraction(0)
    key = (g, exps)
    if key in _psi_cache:
        return _psi_cache[key]

    if g == 0 and n == 3:
        val = Fraction(1)
    elif g == 1 and n == 1:
        val = Fraction(1, 24)
    elif exps and exps[-1] == 0:
        # string equation on the last (zero-exponent) insertion
        rest = exps[:-1]
        val = sum(
            (
                psi_correlator(g, rest[:i] + (rest[i] - 1,) + rest[i + 1 :])
                for i in range(len(rest))
                if rest[i] > 0
            ),
            Fraction(0),
        )
    else:
        # DVV recursion on the largest exponent d1
        d1, rest = exps[0], exps[1:]
        total = Fraction(0)
        for j, dj in enumerate(rest):
            others = rest[:j] + rest[j + 1 :]
            total += Fraction(_dfact(2 * d1 + 2 * dj - 1), _dfact(2 * dj - 1)) * psi_correlator(
                g, others + (d1 + dj - 1,)
            )
        half = Fraction(0)
        for a in range(d1 - 1):
            b = d1 - 2 - a
            w = Fraction(_dfact(2 * a + 1) * _dfact(2 * b + 1))
            if g >= 1:
                half += w * psi_correlator(g - 1, rest + (a, b))
            for g1 in range(g + 1):
                g2 = g - g1
                for r in range(len(rest) + 1):
                    for subset in itertools.combinations(range(len(rest)), r):
                        s = set(subset)
                        left = tuple(rest[i] for i in range(len(rest)) if i in s) + (a,)
                        right = tuple(rest[i] for i in range(len(rest)) if i not in s) + (b,)
                        if 2 * g1 - 2 + len(left) <= 0 or 2 * g2 - 2 + len(right) <= 0:
                            continue
                        if sum(left) != 3 * g1 - 3 + len(left):
                            continue
                        half += w * psi_correlator(g1, left) * psi_correlator(g2, right)
        total += half / 2
        val = total / _dfact(2 * d1 + 1)

    _psi_cache[key] = val
    return val


_corr_cache: dict = {}


def correlator(g: int, psi_exps, kappa_exps=()) -> Fraction:
    """Integral over Mbar_{g,n} of a psi-kappa monomial.

    kappa_b insertions are converted to psi insertions on extra markings by
    the forgetful-pushforward comparison: with kappas (b_1..b_m),

        <psi; b_1..b_m>_{g,n} =
            sum_{S subset of first m-1} (-1)^{|S|}
                <psi + [1 + b_m + sum_{j in S} b_j]; rest without S>_{g,n+1}.

    kappa_0 is the scalar 2g - 2 + n.
    """
    psi_exps = tuple(sorted(psi_exps, reverse=True))
    kappa_exps = tuple(sorted(kappa_exps, reverse=True))
    if any(b < 0 for b in kappa_exps):
        raise ValueError("negative kappa index")
    if kappa_exps and kappa_exps[-1] == 0:
        # kappa_0 is the scalar 2g - 2 + n
        return (2 * g - 2 + len(psi_exps)) * correlator(g, psi_exps, kappa_exps[:-1])
    if not kappa_exps:
        return psi_correlator(g, psi_exps)
    key = (g, psi_exps, kappa_exps)
    if key in _corr_cache:
        return _corr_cache[key]
    bm = kappa_exps[-1]
    rest = kappa_exps[:-1]
    total = Fraction(0)
    for r in range(len(rest) + 1):
        for S in itertools.combinations(range(len(rest)), r):
            s = set(S)
            new_exp = 1 + bm + sum(rest[j] for j in s)
            remaining = tuple(rest[j] for j in range(len(rest)) if j not in s)
            total += (-1) ** len(S) * correlator(g, psi_exps + (new_exp,), remaining)
    _corr_cache[key] = total
    return total


# -- decorated classes ------------------------------------------------------

PsiKey = tuple  # ("l", marking) or ("h", edge, side)


def _freeze_psi(psi: dict) -> tuple:
    return tuple(sorted((k, v) for k, v in psi.items() if v))


def _freeze_kappa(kappa: dict) -> tuple:
    return tuple(sorted((v, tuple(sorted(e))) for v, e in kappa.items() if e))


@dataclass(frozen=True)
class Term:
    """One decorated-graph term; see the module docstring for semantics."""

    graph: StableGraph
    psi: tuple  # frozen psi dict items
    kappa: tuple  # frozen kappa dict items

    def psi_dict(self) -> dict:
        return dict(self.psi)

    def kappa_dict(self) -> dict:
        return {v: list(e) for v, e in self.kappa}

    def degree(self) -> int:
        return (
            self.graph.num_edges
            + sum(v for _, v in self.psi)
            + sum(sum(e) for _, e in self.kappa)
        )


def make_term(graph: StableGraph, psi=None, kappa=None) -> Term:
    return Term(graph, _freeze_psi(psi or {}), _freeze_kappa(kappa or {}))


class DecoratedClass:
    """A rational combination of decorated boundary terms on Mbar_{g,n}.

    Terms are kept canonical: graphs canonically labeled, decorations
    transported along, duplicates merged, zero coefficients dropped.
    """

    def __init__(self, g: int, n: int, terms=()):
        self.g = g
        self.n = n
        self._terms: dict = {}
        for coeff, term in terms:
            self._add(coeff, term)

    # construction helpers

    @staticmethod
    def zero(g, n) -> "DecoratedClass":
        return DecoratedClass(g, n)

    @staticmethod
    def fundamental(g, n) -> "DecoratedClass":
        return DecoratedClass(g, n, [(Fraction(1), make_term(trivial_graph(g, n)))])

    @staticmethod
    def psi(g, n, i, power=1) -> "DecoratedClass":
        return DecoratedClass.fundamental(g, n).mul_psi(i, power)

    @staticmethod
    def kappa(g, n, a) -> "DecoratedClass":
        return DecoratedClass.fundamental(g, n).mul_kappa(a)

    @staticmethod
    def boundary(g, n, graph: StableGraph) -> "DecoratedClass":
        return DecoratedClass(g, n, [(Fraction(1), make_term(graph))])

    def _add(self, coeff, term: Term):
        coeff = Fraction(coeff)
        if coeff == 0:
            return
        if _vertex_overweight(term):
            return  # identically zero: some factor cannot carry the decoration
        key = canonical_key(term.graph, (term.psi_dict(), {v: e for v, e in term.kappa}))
        if key in self._terms:
            old_coeff, old_term = self._terms[key]
            new_coeff = old_coeff + coeff
            if new_coeff == 0:
                del self._terms[key]
            else:
                self._terms[key] = (new_coeff, old_term)
        else:
            self._terms[key] = (coeff, term)

    def terms(self) -> list:
        return sorted(((k, c, t) for k, (c, t) in self._terms.items()), key=lambda x: x[0])

    def items(self) -> list:
        return [(c, t) for _, c, t in self.terms()]

    def is_zero(self) -> bool:
        return not self._terms

    def __add__(self, other: "DecoratedClass") -> "DecoratedClass":
        assert (self.g, self.n) == (other.g, other.n)
        out = DecoratedClass(self.g, self.n, self.items())
        for c, t in other.items():
            out._add(c, t)
        return out

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c) -> "DecoratedClass":
        c = Fraction(c)
        return DecoratedClass(self.g, self.n, [(c * coeff, t) for coeff, t in self.items()])

    def __eq__(self, other):
        if not isinstance(other, DecoratedClass):
            return NotImplemented
        return (self.g, self.n) == (other.g, other.n) and dict(
            (k, c) for k, (c, _) in self._terms.items()
        ) == dict((k, c) for k, (c, _) in other._terms.items())

    def __repr__(self):
        if self.is_zero():
            return "DecoratedClass(0 on (%d,%d))" % (self.g, self.n)
        bits = []
        for c, t in self.items():
            bits.append("%s*<%s;psi=%s;kappa=%s>" % (format_rat(c), t.graph.edges, t.psi, t.kappa))
        return "DecoratedClass(%s)" % " + ".join(bits)

    # degree bookkeeping

    def degrees(self) -> set:
        return {t.degree() for _, t in self.items()}

    def degree_part(self, d: int) -> "DecoratedClass":
        return DecoratedClass(self.g, self.n, [(c, t) for c, t in self.items() if t.degree() == d])

    # multiplication by ambient psi / kappa

    def mul_psi(self, marking: int, power: int = 1) -> "DecoratedClass":
        """Multiply by psi_i of the ambient space: decorates the leg
        carrying marking i in every term."""
        out = DecoratedClass(self.g, self.n)
        for c, t in self.items():
            psi = t.psi_dict()
            key = ("l", marking)
            t.graph.vertex_with_marking(marking)  # raises if missing
            psi[key] = psi.get(key, 0) + power
            out._add(c, make_term(t.graph, psi, {v: e for v, e in t.kappa}))
        return out

    def mul_psi_half_edge(self, he, power: int = 1) -> "DecoratedClass":
        out = DecoratedClass(self.g, self.n)
        for c, t in self.items():
            psi = t.psi_dict()
            key = ("h", he[0], he[1])
            psi[key] = psi.get(key, 0) + power
            out._add(c, make_term(t.graph, psi, {v: e for v, e in t.kappa}))
        return out

    def mul_kappa(self, a: int) -> "DecoratedClass":
        """Multiply by kappa_a of the ambient space: kappa_a pulls back to
        the sum of the vertex kappa_a's, so each term fans out over its
        vertices."""
        out = DecoratedClass(self.g, self.n)
        for c, t in self.items():
            for v in range(t.graph.num_vertices):
                kappa = {w: list(e) for w, e in t.kappa}
                kappa.setdefault(v, []).append(a)
                out._add(c, make_term(t.graph, t.psi_dict(), kappa))
        return out

    def mul_monomial(self, psi_powers: dict = None, kappa_list=()) -> "DecoratedClass":
        """Multiply by prod psi_i^{e_i} * prod kappa_a."""
        out = self
        for i, e in (psi_powers or {}).items():
            out = out.mul_psi(i, e)
        for a in kappa_list:
            out = out.mul_kappa(a)
        return out

    # multiplication by an undecorated one-edge boundary divisor

    def mul_boundary_divisor(self, gamma: StableGraph) -> "DecoratedClass":
        """Multiply by the class of the boundary divisor of the one-edge
        graph ``gamma``.

        Excess-intersection rule: for every pair of a self-identification of
        the term's graph A and a gamma-structure on A, the term picks up
        -(psi_h + psi_h') at the structure's edge; for every common
        one-edge-deeper degeneration the decorations push up. Weights are
        1/(|Aut A| |Aut gamma|) per labeled pair, which reproduces the stack
        product of the two classes.
        """
        if gamma.num_edges != 1:
            raise ValueError("mul_boundary_divisor needs a one-edge graph")
        aut_gamma = automorphism_order(gamma)
        out = DecoratedClass(self.g, self.n)
        for c, t in self.items():
            A = t.graph
            aut_a = automorphism_order(A)
            weight = Fraction(1, aut_a * aut_gamma)
            # excess part (common graph = A itself)
            selfs = enumerate_gamma_structures(A, A)
            gstrs = enumerate_gamma_structures(A, gamma)
            for f_a in selfs:
                for f_g in gstrs:
                    de, _flip = f_g.edge_map[0]
                    for pulled_c, pulled_t in _transport_term(c, t, A, f_a):
                        for side in (0, 1):
                            psi = pulled_t.psi_dict()
                            key = ("h", de, side)
                            psi[key] = psi.get(key, 0) + 1
                            out._add(
                                -weight * pulled_c,
                                make_term(A, psi, {v: list(e) for v, e in pulled_t.kappa}),
                            )
            # genuinely deeper common degenerations
            for delta in one_edge_degenerations(A):
                a_strs = enumerate_gamma_structures(delta, A)
                g_strs = enumerate_gamma_structures(delta, gamma)
                if not a_strs or not g_strs:
                    continue
                for f_a in a_strs:
                    used = f_a.image_edges()
                    free = [e for e in range(delta.num_edges) if e not in used]
                    if len(free) != 1:
                        continue
                    matching = [f for f in g_strs if f.edge_map[0][0] == free[0]]
                    if not matching:
                        continue
                    for pulled_c, pulled_t in _transport_term(c, t, delta, f_a):
                        for _f_g in matching:
                            out._add(weight * pulled_c, pulled_t)
        return out

    # integration

    def integrate(self) -> Fraction:
        """Integral over Mbar_{g,n}; terms of wrong degree contribute 0."""
        dim = 3 * self.g - 3 + self.n
        total = Fraction(0)
        for c, t in self.items():
            if t.degree() != dim:
                continue
            total += c * _integrate_term(t)
        return total

    def pair(self, probe: "Probe") -> Fraction:
        """Integral of this class against a probe."""
        return probe.apply(self).integrate()

    def to_json_dict(self) -> dict:
        return {
            "g": self.g,
            "n": self.n,
            "terms": [
                {
                    "coeff": format_rat(c),
                    "graph": to_json_dict(t.graph),
                    "psi": {_psi_key_str(k): v for k, v in t.psi},
                    "kappa": {str(v): list(e) for v, e in t.kappa},
                }
                for c, t in self.items()
            ],
        }


def _vertex_overweight(term: Term) -> bool:
    """A term vanishes identically when the decoration at some vertex
    exceeds the dimension of that vertex's moduli factor."""
    graph = term.graph
    psi = term.psi_dict()
    kappa = term.kappa_dict()
    for v in range(graph.num_vertices):
        local = sum(psi.get(("l", m), 0) for m in graph.legs[v])
        local += sum(psi.get(("h", e, s), 0) for (e, s) in graph.half_edges_at(v))
        local += sum(kappa.get(v, ()))
        if local > 3 * graph.genera[v] - 3 + graph.degree(v):
            return True
    return False


def relabel_markings(cls: DecoratedClass, mapping: dict) -> DecoratedClass:
    """Rename the markings of a class by a bijection (given as a dict from
    old to new markings; omitted markings stay put)."""
    full = {m: mapping.get(m, m) for m in range(1, cls.n + 1)}
    if sorted(full.values()) != list(range(1, cls.n + 1)):
        raise ValueError("marking relabeling must be a bijection")
    out = DecoratedClass(cls.g, cls.n)
    for c, t in cls.items():
        legs = tuple(tuple(full[m] for m in l) for l in t.graph.legs)
        graph = StableGraph(t.graph.genera, legs, t.graph.edges)
        psi = {}
        for key, exp in t.psi:
            if key[0] == "l":
                psi[("l", full[key[1]])] = exp
            else:
                psi[key] = exp
        out._add(c, make_term(graph, psi, {v: list(e) for v, e in t.kappa}))
    return out


def _psi_key_str(key) -> str:
    if key[0] == "l":
        return "leg%d" % key[1]
    return "he%d.%d" % (key[1], key[2])


def _integrate_term(t: Term) -> Fraction:
    graph = t.graph
    psi = t.psi_dict()
    kappa = t.kappa_dict()
    total = Fraction(1, automorphism_order(graph))
    for v in range(graph.num_vertices):
        exps = [psi.get(("l", m), 0) for m in graph.legs[v]]
        exps += [psi.get(("h", e, s), 0) for (e, s) in graph.half_edges_at(v)]
        total *= correlator(graph.genera[v], exps, kappa.get(v, ()))
        if total == 0:
            return total
    return total


def _transport_term(coeff, t: Term, delta: StableGraph, f_a) -> list:
    """Transport a decorated term on A to the degeneration ``delta`` along
    the contraction ``f_a: delta -> A``.

    psi decorations at legs stay at legs; psi at half-edges follow the
    half-edge embedding. kappa_a at an A-vertex pulls back to the sum over
    the preimage vertices, so the output is a list of (coeff, term) terms.
    """
    psi = {}
    for key, exp in t.psi:
        if key[0] == "l":
            psi[key] = psi.get(key, 0) + exp
        else:
            _tag, e, side = key
            de, dside = f_a.half_edge_image((e, side))
            nk = ("h", de, dside)
            psi[nk] = psi.get(nk, 0) + exp
    # expand kappa over preimage vertices
    expansions = [(Fraction(coeff), {})]
    for v, exps in t.kappa:
        pre = [w for w in range(delta.num_vertices) if f_a.vertex_map[w] == v]
        for a in exps:
            new_exp = []
            for cf, kap in expansions:
                for w in pre:
                    kap2 = {x: list(e) for x, e in kap.items()}
                    kap2.setdefault(w, []).append(a)
                    new_exp.append((cf, kap2))
            expansions = new_exp
    return [(cf, make_term(delta, psi, kap)) for cf, kap in expansions]


# -- clutching pushforward --------------------------------------------------


def factor_markings(graph: StableGraph, v: int) -> list:
    """Marking convention for the factor space at vertex ``v``: first the
    graph's legs at v (ascending), then its half-edges (edge/side order).
    Entry i of the list tells what marking i+1 of the factor space is."""
    return [("l", m) for m in graph.legs[v]] + [("h",) + he for he in graph.half_edges_at(v)]


def clutch_pushforward(factors, graph: StableGraph) -> DecoratedClass:
    """Pushforward of an exterior product of factor classes along the
    clutching map of ``graph``.

    ``factors[v]`` is a DecoratedClass on (g(v), n(v)) with markings ordered
    per :func:`factor_markings`. The result is exact: no automorphism
    prefactor of ``graph`` is applied (callers add their own 1/|Aut|).
    """
    g_amb = graph.total_genus()
    n_amb = len(graph.markings)
    out = DecoratedClass(g_amb, n_amb)
    slot_lists = [factor_markings(graph, v) for v in range(graph.num_vertices)]
    for v, fac in enumerate(factors):
        if (fac.g, fac.n) != (graph.genera[v], len(slot_lists[v])):
            raise ValueError(
                "factor %d lives on (%d,%d), expected (%d,%d)"
                % (v, fac.g, fac.n, graph.genera[v], len(slot_lists[v]))
            )
    for combo in itertools.product(*(f.items() for f in factors)):
        coeff = Fraction(1)
        for c, _t in combo:
            coeff *= c
        glued, psi, kappa, aut_product = _glue_terms(graph, slot_lists, [t for _c, t in combo])
        coeff *= Fraction(automorphism_order(glued), aut_product)
        out._add(coeff, make_term(glued, psi, kappa))
    return out


def _glue_terms(graph: StableGraph, slot_lists, terms):
    """Build the glued graph for one combination of factor terms.

    Factor legs are first replaced by unique tokens (local marking values of
    different factors share the integer namespace), then resolved: a factor
    marking sitting over a leg of ``graph`` becomes that ambient marking, one
    sitting over a half-edge becomes an end of a new edge.
    """
    genera = []
    legs = []  # lists of tokens ("t", factor, local marking)
    edges = []
    psi = {}
    kappa = {}
    vertex_base = []
    edge_base = []
    leg_location = {}  # (factor, local marking) -> global vertex
    aut_product = 1
    for v, t in enumerate(terms):
        aut_product *= automorphism_order(t.graph)
        vertex_base.append(len(genera))
        edge_base.append(len(edges))
        for w in range(t.graph.num_vertices):
            genera.append(t.graph.genera[w])
            legs.append([("t", v, m) for m in t.graph.legs[w]])
            for m in t.graph.legs[w]:
                leg_location[(v, m)] = vertex_base[v] + w
        for (a, b) in t.graph.edges:
            edges.append([vertex_base[v] + a, vertex_base[v] + b])
        for key, exp in t.psi:
            if key[0] == "l":
                psi_key = ("fl", v, key[1])
            else:
                psi_key = ("h", edge_base[v] + key[1], key[2])
            psi[psi_key] = exp
        for w, exps in t.kappa:
            kappa[vertex_base[v] + w] = list(exps)

    # factor markings over ambient legs keep the ambient marking
    for v in range(graph.num_vertices):
        for i, slot in enumerate(slot_lists[v]):
            local_marking = i + 1
            gv = leg_location[(v, local_marking)]
            if slot[0] == "l":
                legs[gv] = [
                    slot[1] if tok == ("t", v, local_marking) else tok for tok in legs[gv]
                ]
                if ("fl", v, local_marking) in psi:
                    psi[("l", slot[1])] = psi.pop(("fl", v, local_marking))

    # factor markings over graph half-edges pair up into new edges
    for e in range(graph.num_edges):
        ends = []
        for side in (0, 1):
            v = graph.edges[e][side]
            idx = slot_lists[v].index(("h", e, side))
            ends.append((v, idx + 1))
        new_edge = len(edges)
        edge_verts = []
        for side, (v, local_marking) in enumerate(ends):
            gv = leg_location[(v, local_marking)]
            legs[gv] = [tok for tok in legs[gv] if tok != ("t", v, local_marking)]
            edge_verts.append(gv)
            if ("fl", v, local_marking) in psi:
                psi[("h", new_edge, side)] = psi.pop(("fl", v, local_marking))
        edges.append(edge_verts)

    for l in legs:
        for tok in l:
            if isinstance(tok, tuple):
                raise AssertionError("unresolved factor leg %r" % (tok,))
    for key in list(psi):
        if key[0] == "fl":
            raise AssertionError("unglued factor leg decoration %r" % (key,))
    glued = StableGraph(tuple(genera), tuple(tuple(l) for l in legs), tuple(tuple(e) for e in edges))
    return glued, psi, kappa, aut_product


# -- probes and fingerprints ------------------------------------------------


@dataclass(frozen=True)
class Probe:
    """A class to pair against: a chain of undecorated boundary divisors
    times a psi-kappa monomial, given in factored form so that pairing only
    ever multiplies by one divisor at a time."""

    divisors: tuple  # StableGraphs, one edge each
    psi_powers: tuple  # ((marking, exp), ...)
    kappas: tuple

    def degree(self) -> int:
        return len(self.divisors) + sum(e for _, e in self.psi_powers) + sum(self.kappas)

    def apply(self, cls: DecoratedClass) -> DecoratedClass:
        out = cls
        for d in self.divisors:
            out = out.mul_boundary_divisor(d)
        out = out.mul_monomial(dict(self.psi_powers), self.kappas)
        return out

    def describe(self) -> str:
        bits = ["d(%s)" % (to_json_dict(d)["legs"],) for d in self.divisors]
        bits += ["psi%d^%d" % (m, e) for m, e in self.psi_powers]
        bits += ["kappa%d" % a for a in self.kappas]
        return "*".join(bits) if bits else "1"


def psi_kappa_monomials(n: int, degree: int, max_kappa: int = None) -> list:
    """All (psi_powers, kappa_multiset) pairs of the given total degree."""
    if max_kappa is None:
        max_kappa = degree
    out = []
    def kappa_multisets(d):
        if d == 0:
            yield ()
            return
        for first in range(1, min(d, max_kappa) + 1):
            for rest in kappa_multisets(d - first):
                if not rest or rest[0] >= first:
                    yield (first,) + rest
    def psi_assignments(markings, d):
        if not markings:
            if d == 0:
                yield ()
            return
        m = markings[0]
        for e in range(d + 1):
            for rest in psi_assignments(markings[1:], d - e):
                yield ((m, e),) + rest if e else rest
    for kd in range(degree + 1):
        for kap in kappa_multisets(kd):
            for psis in psi_assignments(list(range(1, n + 1)), degree - kd):
                out.append((tuple(psis), tuple(kap)))
    return out


def default_probes(g: int, n: int, degree: int, max_divisors: int = 2) -> list:
    """Probe set: psi-kappa monomials of the target degree plus products of
    up to ``max_divisors`` boundary divisors with psi-kappa monomials."""
    if degree < 0:
        return []
    probes = [Probe((), psis, kap) for psis, kap in psi_kappa_monomials(n, degree)]
    if degree >= 1 and max_divisors >= 1:
        divisors = enumerate_one_edge_graphs(g, n)
        for d in divisors:
            for psis, kap in psi_kappa_monomials(n, degree - 1):
                probes.append(Probe((d,), psis, kap))
        if degree >= 2 and max_divisors >= 2:
            for i, d1 in enumerate(divisors):
                for d2 in divisors[i:]:
                    for psis, kap in psi_kappa_monomials(n, degree - 2):
                        probes.append(Probe((d1, d2), psis, kap))
    return probes


def fingerprint(cls: DecoratedClass, probes) -> tuple:
    return tuple(cls.pair(p) for p in probes)


def classes_agree(a: DecoratedClass, b: DecoratedClass, probes=None) -> bool:
    """Fingerprint equality over a probe set (default: the full probe set of
    complementary degree for each degree appearing)."""
    if (a.g, a.n) != (b.g, b.n):
        return False
    diff = a - b
    if diff.is_zero():
        return True
    dim = 3 * a.g - 3 + a.n
    if probes is None:
        degs = diff.degrees()
        probes = []
        for d in degs:
            probes += default_probes(a.g, a.n, dim - d)
    return all(diff.pair(p) == 0 for p in probes)


def express_in_span(target: DecoratedClass, candidates, probes=None):
    """Write ``target`` as a rational combination of the candidate classes,
    deciding equality by pairing fingerprints.

    Returns a SolveReport whose solution orders coefficients like the
    candidate list. A non-unique report means the probes do not separate the
    candidates; no-solution means the target is (detectably) outside the
    span.
    """
    from .exact import solve_rational_system

    if probes is None:
        dim = 3 * target.g - 3 + target.n
        degs = set().union(target.degrees(), *(c.degrees() for c in candidates))
        probes = []
        for d in degs:
            probes += default_probes(target.g, target.n, dim - d)
    rows = []
    rhs = []
    for p in probes:
        rows.append([c.pair(p) for c in candidates])
        rhs.append(target.pair(p))
    return solve_rational_system(rows, rhs)

"""Buchberger Groebner bases for ideals and submodules of free modules.

One engine covers everything: elements of P^r are dicts mapping
(position, exponent-tuple) to coefficients, ordered position-over-term
(position 0 largest) extending the ring order.  Syzygies, ideal
membership with an explicit representation, kernels over quotient
rings and k-bases of quotient modules all come from the same loop via
augmented modules: position priority makes the tail block an
elimination block for free.

Pair pruning is Gebauer-Moeller.  The coprime-leading-term criterion
is sound only for rank-1 (plain ideal) runs and is disabled otherwise:
for augmented runs the "trivial" reductions are exactly the Koszul
syzygies we are after.
"""

from __future__ import annotations

from dataclasses import dataclass

from .poly import (
    ContextMismatchError,
    PolyRing,
    Polynomial,
    monomial_degree,
    monomial_div,
    monomial_divides,
    monomial_lcm,
    monomial_mul,
)

Vec = dict  # {(pos, exps): coeff}


def _term_key(ring: PolyRing, term):
    pos, m = term
    return (-pos, ring.order.key(m))


def vec_from_polys(polys) -> Vec:
    v: Vec = {}
    for pos, p in enumerate(polys):
        for m, c in p.terms.items():
            v[(pos, m)] = c
    return v


def vec_to_polys(v: Vec, rank: int, ring: PolyRing):
    comps = [dict() for _ in range(rank)]
    for (pos, m), c in v.items():
        comps[pos][m] = c
    return tuple(Polynomial(ring, t) for t in comps)


def _vec_lt(ring: PolyRing, v: Vec):
    return max(v, key=lambda t: _term_key(ring, t))


def _vec_sub_scaled(field, v: Vec, w: Vec, coeff, shift) -> Vec:
    """v - coeff * x^shift * w."""
    out = dict(v)
    for (pos, m), c in w.items():
        key = (pos, monomial_mul(m, shift))
        s = field.sub(out.get(key, field.zero), field.mul(coeff, c))
        if s == field.zero:
            out.pop(key, None)
        else:
            out[key] = s
    return out


def _vec_monic(field, v: Vec, lt) -> Vec:
    inv = field.inv(v[lt])
    return {t: field.mul(inv, c) for t, c in v.items()}


def _vec_canonical_key(ring: PolyRing, v: Vec):
    items = sorted(v.items(), key=lambda t: _term_key(ring, t[0]), reverse=True)
    return tuple((t[0][0], ring.order.key(t[0][1]), repr(t[1])) for t in items)


def reduce_vec(ring: PolyRing, v: Vec, basis: list[tuple], full: bool = True) -> Vec:
    """Normal form of v against basis entries (vec, lt) pairs.

    With full=True no remaining term is divisible by any leading term.
    """
    field = ring.field
    work = dict(v)
    done: Vec = {}
    while work:
        t = _vec_lt(ring, work)
        pos, m = t
        reduced = False
        for g, lt in basis:
            gpos, gm = lt
            if gpos == pos and monomial_divides(gm, m):
                work = _vec_sub_scaled(field, work, g, work[t], monomial_div(m, gm))
                reduced = True
                break
        if not reduced:
            done[t] = work.pop(t)
            if not full:
                done.update(work)
                return done
    return done


def _spair(ring: PolyRing, f: Vec, flt, g: Vec, glt) -> Vec:
    field = ring.field
    lcm = monomial_lcm(flt[1], glt[1])
    s1 = _vec_sub_scaled(field, {}, f, field.neg(field.inv(f[flt])), monomial_div(lcm, flt[1]))
    return _vec_sub_scaled(field, s1, g, field.inv(g[glt]), monomial_div(lcm, glt[1]))


def module_groebner(ring: PolyRing, vectors, rank: int) -> list[Vec]:
    """Reduced, monic, canonically sorted Groebner basis of the submodule
    of P^rank generated by the given vectors."""
    field = ring.field
    gens = [dict(v) for v in vectors if v]
    gens.sort(key=lambda v: _vec_canonical_key(ring, v))
    use_product = rank == 1

    G: list[Vec] = []
    lts: list = []
    pairs: set[tuple[int, int]] = set()

    def lcm_of(i, j):
        return monomial_lcm(lts[i][1], lts[j][1])

    def add_element(f: Vec):
        lt = _vec_lt(ring, f)
        f = _vec_monic(field, f, lt)
        k = len(G)
        # Gebauer-Moeller: drop old pairs strictly superseded by the new lt
        if G:
            survivors = set()
            for (i, j) in pairs:
                if lts[i][0] == lt[0] and monomial_divides(lt[1], lcm_of(i, j)):
                    lcm_ij = lcm_of(i, j)
                    if (
                        monomial_lcm(lts[i][1], lt[1]) != lcm_ij
                        and monomial_lcm(lts[j][1], lt[1]) != lcm_ij
                    ):
                        continue
                survivors.add((i, j))
            pairs.clear()
            pairs.update(survivors)
        # new pairs against elements with a leading term in the same position
        cand = [i for i in range(k) if lts[i][0] == lt[0]]
        by_lcm: dict = {}
        for i in cand:
            by_lcm.setdefault(monomial_lcm(lts[i][1], lt[1]), []).append(i)
        minimal = []
        for L in sorted(by_lcm, key=ring.order.key):
            if all(not monomial_divides(L2, L) for L2 in minimal):
                minimal.append(L)
        for L in minimal:
            if use_product and any(
                monomial_lcm(lts[i][1], lt[1]) == monomial_mul(lts[i][1], lt[1])
                for i in by_lcm[L]
            ):
                continue
            pairs.add((min(by_lcm[L]), k))
        G.append(f)
        lts.append(lt)

    for g in gens:
        add_element(g)

    while pairs:
        i, j = min(pairs, key=lambda p: (ring.order.key(lcm_of(*p)), p))
        pairs.discard((i, j))
        s = _spair(ring, G[i], lts[i], G[j], lts[j])
        if not s:
            continue
        r = reduce_vec(ring, s, list(zip(G, lts)))
        if r:
            add_element(r)

    # minimalize
    order_idx = sorted(range(len(G)), key=lambda i: _term_key(ring, lts[i]))
    minimal_idx = []
    for i in order_idx:
        pos, m = lts[i]
        if not any(
            lts[j][0] == pos and monomial_divides(lts[j][1], m) for j in minimal_idx
        ):
            minimal_idx.append(i)
    # interreduce
    reduced = []
    for i in minimal_idx:
        others = [(G[j], lts[j]) for j in minimal_idx if j != i]
        r = reduce_vec(ring, G[i], others)
        if r:
            reduced.append(_vec_monic(field, r, _vec_lt(ring, r)))
    reduced.sort(key=lambda v: _vec_canonical_key(ring, v))
    return reduced


class ModuleGB:
    """A computed module Groebner basis with a reduction method."""

    def __init__(self, ring: PolyRing, rank: int, elements: list[Vec]):
        self.ring = ring
        self.rank = rank
        self.elements = elements
        self._with_lt = [(g, _vec_lt(ring, g)) for g in elements]

    def reduce(self, v: Vec) -> Vec:
        return reduce_vec(self.ring, v, self._with_lt)

    def reduce_polys(self, polys):
        return vec_to_polys(self.reduce(vec_from_polys(polys)), self.rank, self.ring)

    def contains(self, polys) -> bool:
        return not self.reduce(vec_from_polys(polys))

    def leading_terms(self):
        return [lt for _, lt in self._with_lt]


class GroebnerBasis:
    """Reduced Groebner basis of an ideal; generators are monic and sorted."""

    def __init__(self, ring: PolyRing, generators: tuple[Polynomial, ...]):
        self.ring = ring
        self.generators = generators
        self._with_lt = [
            (vec_from_polys([g]), (0, g.leading_monomial())) for g in generators
        ]

    def normal_form(self, f: Polynomial) -> Polynomial:
        if f.ring is not self.ring:
            raise ContextMismatchError("polynomial not in the basis ring")
        if not self.generators or f.is_zero():
            return f
        red = reduce_vec(self.ring, vec_from_polys([f]), self._with_lt)
        return vec_to_polys(red, 1, self.ring)[0]

    def contains(self, f: Polynomial) -> bool:
        return self.normal_form(f).is_zero()

    def is_unit_ideal(self) -> bool:
        return any(g.degree() == 0 for g in self.generators)

    def __eq__(self, other):
        return (
            isinstance(other, GroebnerBasis)
            and other.ring is self.ring
            and other.generators == self.generators
        )

    def __hash__(self):
        return hash(self.generators)

    def __repr__(self):
        return "GroebnerBasis(" + ", ".join(repr(g) for g in self.generators) + ")"


def buchberger(gens, order=None, ring: PolyRing | None = None) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by gens.

    The active order is the ring's; pass a ring explicitly to build the
    basis of the zero ideal from an empty generator list.
    """
    gens = [g for g in gens]
    if gens:
        ring = gens[0].ring
        for g in gens[1:]:
            if g.ring is not ring:
                raise ContextMismatchError("generators from different rings")
    if ring is None:
        raise ValueError("empty generator list needs an explicit ring")
    vectors = [vec_from_polys([g]) for g in gens if not g.is_zero()]
    basis = module_groebner(ring, vectors, 1)
    polys = tuple(vec_to_polys(v, 1, ring)[0] for v in basis)
    return GroebnerBasis(ring, polys)


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    return gb.normal_form(f)


def syzygies(ring: PolyRing, vectors, rank: int) -> list[tuple]:
    """Generators of {c in P^t : sum c_i v_i = 0} for vectors v_i in P^rank."""
    t = len(vectors)
    augmented = []
    for i, v in enumerate(vectors):
        w = dict(v)
        w[(rank + i, (0,) * ring.nvars)] = ring.field.one
        augmented.append(w)
    gb = module_groebner(ring, augmented, rank + t)
    out = []
    for g in gb:
        if all(pos >= rank for (pos, _m) in g):
            shifted = {(pos - rank, m): c for (pos, m), c in g.items()}
            out.append(vec_to_polys(shifted, t, ring))
    return out


class Representer:
    """Expresses ideal members in terms of a fixed generator list.

    Built on the augmented module GB of (g_i, e_i); reducing (h, 0)
    leaves (normal form of h, minus the cofactors).
    """

    def __init__(self, gens):
        self.gens = list(gens)
        if not self.gens:
            raise ValueError("need at least one generator")
        self.ring = self.gens[0].ring
        t = len(self.gens)
        augmented = []
        for i, g in enumerate(self.gens):
            v = vec_from_polys([g])
            v[(1 + i, (0,) * self.ring.nvars)] = self.ring.field.one
            augmented.append(v)
        self._gb = ModuleGB(self.ring, 1 + t, module_groebner(self.ring, augmented, 1 + t))

    def divide(self, h: Polynomial):
        """(remainder, cofactors) with h = remainder + sum cofactor_i * g_i."""
        if h.is_zero():
            return h, [self.ring.zero] * len(self.gens)
        v = vec_from_polys([h])
        red = self._gb.reduce(v)
        parts = vec_to_polys(red, 1 + len(self.gens), self.ring)
        remainder = parts[0]
        cofactors = [-p for p in parts[1:]]
        return remainder, cofactors

    def express(self, h: Polynomial):
        """Cofactors with h = sum c_i g_i, or None when h is not a member."""
        remainder, cofactors = self.divide(h)
        if not remainder.is_zero():
            return None
        return cofactors


def module_kernel(map_matrix, modulus: GroebnerBasis):
    """Generators of {v in B^r : M v = 0 in B^c} for B = P/modulus.

    map_matrix is a c x r nested list of polynomials over the ambient P;
    computed from syzygies of the augmented ambient module.
    """
    c = len(map_matrix)
    if c == 0:
        raise ValueError("empty matrix")
    r = len(map_matrix[0])
    ring = modulus.ring
    for row in map_matrix:
        for entry in row:
            if entry.ring is not ring:
                raise ContextMismatchError("matrix entry not in the modulus ring")
    columns = [vec_from_polys([map_matrix[j][k] for j in range(c)]) for k in range(r)]
    padding = []
    for f in modulus.generators:
        for j in range(c):
            vec = {}
            for m, coeff in f.terms.items():
                vec[(j, m)] = coeff
            padding.append(vec)
    syz = syzygies(ring, columns + padding, c)
    out = []
    seen = set()
    for s in syz:
        v = tuple(modulus.normal_form(p) for p in s[:r])
        if all(p.is_zero() for p in v):
            continue
        if v not in seen:
            seen.add(v)
            out.append(v)
    out.sort(key=lambda v: _vec_canonical_key(ring, vec_from_polys(v)))
    return out


@dataclass(frozen=True)
class ModulePresentation:
    """Cokernel data: M = B^rank / <relations>, B = P/base_ideal."""

    ring: PolyRing
    rank: int
    relations: tuple
    base_ideal: GroebnerBasis

    def groebner(self) -> ModuleGB:
        vectors = [vec_from_polys(rel) for rel in self.relations]
        for f in self.base_ideal.generators:
            for j in range(self.rank):
                vectors.append({(j, m): c for m, c in f.terms.items()})
        return ModuleGB(self.ring, self.rank, module_groebner(self.ring, vectors, self.rank))


@dataclass(frozen=True)
class QuotientBasis:
    """k-basis of standard monomial cosets (position, exponents)."""

    finite: bool
    dimension: int | None
    monomials: tuple
    truncated_at: int | None


def _position_finite(ring: PolyRing, lead_monomials) -> bool:
    if any(monomial_degree(m) == 0 for m in lead_monomials):
        return True  # the whole component dies
    if ring.nvars == 0:
        return True
    for i in range(ring.nvars):
        if not any(
            m[i] > 0 and all(e == 0 for j, e in enumerate(m) if j != i)
            for m in lead_monomials
        ):
            return False
    return True


def quotient_basis(pres: ModulePresentation, trunc: int | None = None) -> QuotientBasis:
    """Standard monomials of the quotient; exact dimension when finite,
    otherwise all standard monomials up to trunc with the infinite flag."""
    gb = pres.groebner()
    ring = pres.ring
    by_pos: dict[int, list] = {p: [] for p in range(pres.rank)}
    for (pos, m) in gb.leading_terms():
        by_pos[pos].append(m)
    finite = all(_position_finite(ring, by_pos[p]) for p in range(pres.rank))
    monomials = []
    d = 0
    while True:
        level = []
        for m in ring.monomials_of_degree(d):
            for p in range(pres.rank):
                if not any(monomial_divides(lm, m) for lm in by_pos[p]):
                    level.append((p, m))
        level.sort(key=lambda t: (t[0], ring.order.key(t[1])))
        if finite:
            if not level:
                break
            monomials.extend(level)
            d += 1
        else:
            if trunc is None or d > trunc:
                break
            monomials.extend(level)
            d += 1
    if finite:
        return QuotientBasis(True, len(monomials), tuple(monomials), None)
    return QuotientBasis(False, None, tuple(monomials), trunc)


@dataclass(frozen=True)
class RegularityCertificate:
    regular: bool
    quotient_dimension: int
    expected_dimension: int
    nvars: int
    ngens: int


def krull_dimension(gb: GroebnerBasis) -> int:
    """Krull dimension of P/I from the leading-term ideal: the largest
    variable subset meeting no leading monomial support.  -1 for the
    unit ideal."""
    if gb.is_unit_ideal():
        return -1
    ring = gb.ring
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in
                (g.leading_monomial() for g in gb.generators)]
    n = ring.nvars
    best = 0
    for mask in range(1 << n):
        size = bin(mask).count("1")
        if size <= best:
            continue
        chosen = {i for i in range(n) if mask >> i & 1}
        if all(not s <= chosen for s in supports):
            best = size
    return best


def is_regular_sequence(gens, ring: PolyRing | None = None) -> RegularityCertificate:
    """Dimension-count certificate: gens form a regular sequence iff
    dim k[x]/(gens) == nvars - len(gens)."""
    gens = list(gens)
    if gens:
        ring = gens[0].ring
    if ring is None:
        raise ValueError("empty generator list needs an explicit ring")
    if any(g.is_zero() for g in gens):
        return RegularityCertificate(False, -2, ring.nvars - len(gens), ring.nvars, len(gens))
    gb = buchberger(gens, ring=ring)
    dim = krull_dimension(gb) if gens else ring.nvars
    expected = ring.nvars - len(gens)
    return RegularityCertificate(dim == expected and dim >= 0, dim, expected,
                                 ring.nvars, len(gens))

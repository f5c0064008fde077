"""Independent brute-force oracles.

Everything here works on raw coefficient vectors with plain linear
algebra (or honest enumeration over F_2) and never calls the Groebner
machinery, so it can vouch for the main implementation.
"""

from __future__ import annotations

from eqdeform.linalg import SpanBuilder, kernel_basis, solve
from eqdeform.poly import PolyRing, Polynomial, monomial_degree


def _coeff_vector(f: Polynomial, monomials, index):
    out = [f.ring.field.zero] * len(monomials)
    for m, c in f.terms.items():
        out[index[m]] = c
    return out


def bounded_membership(f: Polynomial, gens, total_bound: int):
    """Cofactors with sum c_i g_i = f and every product of degree <=
    total_bound, or None.

    A found representation certifies membership; failure only certifies
    absence of a representation inside the degree window."""
    ring = f.ring
    if f.degree() > total_bound:
        return None
    target_monos = ring.monomials_upto(total_bound)
    index = {m: i for i, m in enumerate(target_monos)}
    unknowns = []
    columns = []
    for gi, g in enumerate(gens):
        if g.is_zero():
            continue
        for m in ring.monomials_upto(max(total_bound - g.degree(), 0)):
            unknowns.append((gi, m))
            columns.append(_coeff_vector(g.mul_monomial(m), target_monos, index))
    if not unknowns:
        return None
    rows = [[columns[u][r] for u in range(len(unknowns))]
            for r in range(len(target_monos))]
    rhs = _coeff_vector(f, target_monos, index)
    sol = solve(ring.field, rows, rhs)
    if sol is None:
        return None
    cofs = [ring.zero] * len(gens)
    for value, (gi, m) in zip(sol, unknowns):
        if value != ring.field.zero:
            cofs[gi] = cofs[gi] + ring.monomial(m, value)
    return cofs


def module_quotient_slice_dim(ring: PolyRing, rank: int, relations, ideal_gens,
                              degree: int) -> int:
    """dim_k of (degree <= degree slice of B^rank) / (bounded relation span),
    with B = P/(ideal_gens), entirely by coefficient linear algebra."""
    monos = ring.monomials_upto(degree)
    index = {}
    keys = []
    for pos in range(rank):
        for m in monos:
            index[(pos, m)] = len(keys)
            keys.append((pos, m))
    span = SpanBuilder(ring.field, len(keys))

    def add_vector(vec):
        row = [ring.field.zero] * len(keys)
        ok = True
        for pos, p in enumerate(vec):
            for m, c in p.terms.items():
                if monomial_degree(m) > degree:
                    ok = False
                    break
                row[index[(pos, m)]] = c
            if not ok:
                break
        if ok:
            span.add(row)

    for rel in relations:
        rel_deg = max([p.degree() for p in rel if not p.is_zero()] + [0])
        for m in ring.monomials_upto(max(degree - rel_deg, 0)):
            add_vector(tuple(p.mul_monomial(m) for p in rel))
    for f in ideal_gens:
        fdeg = f.degree()
        for pos in range(rank):
            for m in ring.monomials_upto(max(degree - fdeg, 0)):
                vec = [ring.zero] * rank
                vec[pos] = f.mul_monomial(m)
                add_vector(tuple(vec))
    return len(keys) - span.dim


def bounded_kernel_elements(map_matrix, ideal_gens, ring: PolyRing,
                            degree: int, slack: int = 2):
    """Basis of {v in P^r, deg <= degree : M v in (ideal_gens) P^c}, the
    ideal membership handled by bounded cofactors (degree + slack)."""
    c = len(map_matrix)
    r = len(map_matrix[0])
    entry_deg = max(
        [e.degree() for row in map_matrix for e in row if not e.is_zero()] + [0]
    )
    ideal_deg = max([g.degree() for g in ideal_gens if not g.is_zero()] + [0])
    cof_bound = degree + entry_deg + slack
    target_deg = max(degree + entry_deg, cof_bound + ideal_deg)
    target = ring.monomials_upto(target_deg)
    index = {m: i for i, m in enumerate(target)}

    v_unknowns = [(k, m) for k in range(r) for m in ring.monomials_upto(degree)]
    w_unknowns = [
        (j, gi, m)
        for j in range(c)
        for gi in range(len(ideal_gens))
        for m in ring.monomials_upto(cof_bound)
    ]
    columns = []
    for (k, m) in v_unknowns:
        col = []
        for j in range(c):
            col.extend(_coeff_vector(map_matrix[j][k].mul_monomial(m), target, index))
        columns.append(col)
    for (j, gi, m) in w_unknowns:
        col = []
        for jj in range(c):
            if jj == j:
                col.extend(_coeff_vector(ideal_gens[gi].mul_monomial(m), target, index))
            else:
                col.extend([ring.field.zero] * len(target))
        columns.append(col)
    total = len(v_unknowns) + len(w_unknowns)
    rows = [[columns[u][rr] for u in range(total)] for rr in range(c * len(target))]
    kernel = kernel_basis(ring.field, rows, total)
    seen = SpanBuilder(ring.field, len(v_unknowns))
    out = []
    for sol in kernel:
        head = sol[: len(v_unknowns)]
        if all(x == ring.field.zero for x in head):
            continue
        if not seen.add(head):
            continue
        vec = [ring.zero] * r
        for value, (k, m) in zip(head, v_unknowns):
            if value != ring.field.zero:
                vec[k] = vec[k] + ring.monomial(m, value)
        out.append(tuple(vec))
    return out


class F2SliceOracle:
    """Bitmask model of the wild node normal-module slice over F_2.

    The swap action permutes the standard monomials {1, x^i, y^i}, so
    vectors are ints and everything is honest enumeration."""

    def __init__(self, degree: int):
        self.degree = degree
        self.basis = [("1", 0)]
        for i in range(1, degree + 1):
            self.basis.append(("x", i))
        for i in range(1, degree + 1):
            self.basis.append(("y", i))
        self.dim = len(self.basis)
        self.perm = []
        for name, i in self.basis:
            if name == "1":
                self.perm.append(0)
            elif name == "x":
                self.perm.append(self.basis.index(("y", i)))
            else:
                self.perm.append(self.basis.index(("x", i)))

    def swap(self, mask: int) -> int:
        out = 0
        for k in range(self.dim):
            if mask >> k & 1:
                out |= 1 << self.perm[k]
        return out

    def zcocycles(self):
        """All Z^1 masks: (1 + swap) w = 0 over F_2."""
        return [w for w in range(1 << self.dim) if self.swap(w) ^ w == 0]

    def coboundary_masks(self):
        return {self.swap(phi) ^ phi for phi in range(1 << self.dim)}

    def h1_dimension(self, search_degree: int) -> int:
        """dim Z^1 at this degree minus those killed by coboundaries from
        the larger slice (mirrors the reported slice policy)."""
        big = F2SliceOracle(search_degree)
        small_in_big = [big.basis.index(b) for b in self.basis]

        def embed(mask: int) -> int:
            out = 0
            for k in range(self.dim):
                if mask >> k & 1:
                    out |= 1 << small_in_big[k]
            return out

        z_small = self.zcocycles()
        kill = big.coboundary_masks()
        killed = {z for z in z_small if embed(z) in kill}
        import math

        return int(math.log2(len(z_small))) - int(math.log2(len(killed)))

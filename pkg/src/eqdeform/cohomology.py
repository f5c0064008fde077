"""Group cohomology H^0, H^1 (and H^2 via bar cochains) on finite slices.

A ``GModuleSlice`` is a finite-dimensional k[G]-module: a basis of
normal-form module vectors together with exact action matrices.  For
filtered infinite modules, slices are the span of the G-orbit of all
standard-monomial vectors up to a degree bound, so they are honestly
G-stable even when the twist matrices are non-constant.

The cocycle convention is c(s*t) = s.c(t) + c(s) and the coboundary of
phi is s -> s.phi - phi.  For a filtered module, a vanishing answer
from ``solve_coboundary`` is exact; non-vanishing is certified only up
to the slice bound unless the setup is graded (see deform).
"""

from __future__ import annotations

from dataclasses import dataclass

from .ambient import NormalModule, _SliceCoordinates
from .gaction import GroupAction
from .linalg import SpanBuilder, kernel_basis, solve


class CocycleError(ValueError):
    pass


class GModuleSlice:
    """Finite k[G]-module with exact action matrices (rows act on columns)."""

    def __init__(self, group: GroupAction, field, matrices, payloads=None,
                 degree_bound=None, check: bool = True):
        self.group = group
        self.field = field
        self.matrices = matrices          # per element: dim x dim, rows
        self.payloads = payloads          # optional module vectors per basis element
        self.degree_bound = degree_bound
        self.dim = len(matrices[0]) if matrices and matrices[0] else 0
        self._coords = None
        if check:
            self._check_representation()

    def _check_representation(self):
        n = len(self.group)
        e = self.group.identity_index
        ident = self._identity_matrix()
        if self.matrices[e] != ident:
            raise CocycleError("identity does not act as the identity matrix")
        for i in range(n):
            for j in range(n):
                prod = self._matmul(self.matrices[i], self.matrices[j])
                if prod != self.matrices[self.group.mul(i, j)]:
                    raise CocycleError("action matrices violate the representation property")

    def _identity_matrix(self):
        z, o = self.field.zero, self.field.one
        return [[o if i == j else z for j in range(self.dim)] for i in range(self.dim)]

    def _matmul(self, a, b):
        field = self.field
        out = []
        for row in a:
            new = []
            for c in range(self.dim):
                s = field.zero
                for k in range(self.dim):
                    if row[k] != field.zero:
                        s = field.add(s, field.mul(row[k], b[k][c]))
                new.append(s)
            out.append(new)
        return out

    def act(self, i: int, coords):
        field = self.field
        mat = self.matrices[i]
        out = []
        for row in mat:
            s = field.zero
            for k, c in enumerate(coords):
                if c != field.zero and row[k] != field.zero:
                    s = field.add(s, field.mul(row[k], c))
            out.append(s)
        return out

    def materialize(self, coords):
        """Module vector for a coordinate vector (payload slices only)."""
        if self.payloads is None:
            raise ValueError("abstract slice has no payload vectors")
        vec = None
        for c, payload in zip(coords, self.payloads):
            if c == self.field.zero:
                continue
            scaled = tuple(p.scale(c) for p in payload)
            vec = scaled if vec is None else tuple(a + b for a, b in zip(vec, scaled))
        if vec is None:
            rank = len(self.payloads[0]) if self.payloads else 0
            ring = self.payloads[0][0].ring if self.payloads else None
            vec = (ring.zero,) * rank if ring is not None else ()
        return vec

    def express(self, vec):
        """Coordinates of a module vector over the payload basis, or None."""
        if self.payloads is None:
            raise ValueError("abstract slice has no payload vectors")
        if self._coords is None:
            coords = _SliceCoordinates(self.payloads[0][0].ring)
            for p in self.payloads:
                coords.ensure(p)
            self._coords = coords
        coords = self._coords
        for pos, p in enumerate(vec):
            for m in p.terms:
                if (pos, m) not in coords.index:
                    return None
        cols = [coords.row(p) for p in self.payloads]
        rows = [[cols[k][r] for k in range(len(cols))] for r in range(len(coords.keys))]
        return solve(self.field, rows, coords.row(vec))


def slice_of_normal_module(module: NormalModule, degree: int,
                           extra_vectors=()) -> GModuleSlice:
    """G-stable slice of the normal module: span of the G-orbit of all
    standard-monomial vectors of degree <= degree (plus extra seeds)."""
    pres = module.amb.pres
    ring = module.ring
    group = module.amb.action
    field = ring.field
    seeds = []
    for j in range(module.rank):
        for m in pres.std_monomials_upto(degree):
            vec = [ring.zero] * module.rank
            vec[j] = ring.monomial(m)
            seeds.append(tuple(vec))
    for v in extra_vectors:
        seeds.append(tuple(pres.nf(p) for p in v))

    orbit = []
    for i in group.indices():
        for s in seeds:
            orbit.append(module.act(i, s) if i != group.identity_index else s)
    coords = _SliceCoordinates(ring)
    for v in orbit:
        coords.ensure(v)
    span = SpanBuilder(field, len(coords.keys))
    payloads = []
    for v in orbit:
        if span.add(coords.row(v)):
            payloads.append(v)

    cols = [coords.row(p) for p in payloads]
    rows = [[cols[k][r] for k in range(len(cols))] for r in range(len(coords.keys))]
    matrices = []
    for i in group.indices():
        mat_cols = []
        for p in payloads:
            image = module.act(i, p)
            sol = solve(field, rows, coords.row(image))
            if sol is None:
                raise CocycleError("slice is not closed under the action")
            mat_cols.append(sol)
        matrices.append([[mat_cols[c][r] for c in range(len(payloads))]
                         for r in range(len(payloads))])
    return GModuleSlice(group, field, matrices, payloads=payloads,
                        degree_bound=degree)


def invariants(m: GModuleSlice):
    """Coordinate basis of the simultaneous fixed space H^0."""
    if m.dim == 0:
        return []
    field = m.field
    rows = []
    ident = m._identity_matrix()
    for i in m.group.indices():
        if i == m.group.identity_index:
            continue
        for r in range(m.dim):
            rows.append([field.sub(m.matrices[i][r][c], ident[r][c])
                         for c in range(m.dim)])
    if not rows:
        return [[field.one if j == i else field.zero for j in range(m.dim)]
                for i in range(m.dim)]
    return kernel_basis(field, rows, m.dim)


def _nontrivial(m: GModuleSlice):
    return [i for i in m.group.indices() if i != m.group.identity_index]


def _cocycle_rows(m: GModuleSlice):
    """Linear conditions on (c(s))_{s != e} from c(st) = s.c(t) + c(s)."""
    field = m.field
    others = _nontrivial(m)
    slot = {s: k for k, s in enumerate(others)}
    dim = m.dim
    nunk = dim * len(others)
    rows = []
    for i in m.group.indices():
        for j in m.group.indices():
            ij = m.group.mul(i, j)
            base = [[field.zero] * nunk for _ in range(dim)]

            def add_block(s, coeff_matrix=None, sign=1):
                if s not in slot:
                    return  # c(e) = 0
                off = slot[s] * dim
                for r in range(dim):
                    for c in range(dim):
                        val = (coeff_matrix[r][c] if coeff_matrix is not None
                               else (field.one if r == c else field.zero))
                        if val == field.zero:
                            continue
                        if sign < 0:
                            val = field.neg(val)
                        base[r][off + c] = field.add(base[r][off + c], val)

            add_block(ij)
            add_block(j, m.matrices[i], sign=-1)
            add_block(i, sign=-1)
            if any(any(x != field.zero for x in row) for row in base):
                rows.extend(base)
    return rows, others, nunk


def zcocycles(m: GModuleSlice):
    """Basis of Z^1 as flat coordinate vectors, one dim-block per s != e."""
    if m.dim == 0:
        return []
    rows, _, nunk = _cocycle_rows(m)
    if not rows:
        return []
    return kernel_basis(m.field, rows, nunk)


def coboundary_of(m: GModuleSlice, phi_coords):
    """The flat cochain (s.phi - phi)_{s != e}."""
    field = m.field
    out = []
    for s in _nontrivial(m):
        img = m.act(s, phi_coords)
        out.extend([field.sub(a, b) for a, b in zip(img, phi_coords)])
    return out


@dataclass
class H1Result:
    dimension: int
    representatives: list  # flat cochain coordinate vectors
    z_dim: int
    b_dim: int


def h1(m: GModuleSlice) -> H1Result:
    """Plain H^1(G, m) for the finite module m."""
    field = m.field
    z_basis = zcocycles(m)
    if not z_basis:
        return H1Result(0, [], 0, 0)
    width = len(z_basis[0])
    bspan = SpanBuilder(field, width)
    for k in range(m.dim):
        phi = [field.one if j == k else field.zero for j in range(m.dim)]
        bspan.add(coboundary_of(m, phi))
    b_dim = bspan.dim
    total = SpanBuilder(field, width)
    for row in bspan.rows:
        total.add(row)
    reps = []
    for z in z_basis:
        if total.add(z):
            reps.append(z)
    return H1Result(len(z_basis) - b_dim, reps, len(z_basis), b_dim)


def h1_bounded(m_small: GModuleSlice, m_big: GModuleSlice) -> H1Result:
    """Classes of Z^1(m_small) not killed by coboundaries from m_big.

    m_small's payload vectors must lie inside m_big; this implements the
    slice policy for filtered modules (value slice at D, coboundary
    search at a higher bound)."""
    field = m_small.field
    z_small = zcocycles(m_small)
    if not z_small:
        return H1Result(0, [], 0, 0)
    emb = []
    for p in m_small.payloads:
        coords = m_big.express(p)
        if coords is None:
            raise CocycleError("small slice does not embed in the search slice")
        emb.append(coords)
    others_small = _nontrivial(m_small)
    dim_s, dim_b = m_small.dim, m_big.dim

    def embed_cochain(flat):
        out = []
        for k in range(len(others_small)):
            block = flat[k * dim_s:(k + 1) * dim_s]
            big_block = [field.zero] * dim_b
            for c, e in zip(block, emb):
                if c == field.zero:
                    continue
                for idx, val in enumerate(e):
                    big_block[idx] = field.add(big_block[idx], field.mul(c, val))
            out.extend(big_block)
        return out

    width = len(others_small) * dim_b
    bspan = SpanBuilder(field, width)
    for k in range(dim_b):
        phi = [field.one if j == k else field.zero for j in range(dim_b)]
        bspan.add(coboundary_of(m_big, phi))
    total = SpanBuilder(field, width)
    for row in bspan.rows:
        total.add(row)
    reps = []
    survivors = 0
    for z in z_small:
        if total.add(embed_cochain(z)):
            survivors += 1
            reps.append(z)
    return H1Result(survivors, reps, len(z_small), bspan.dim)


def solve_coboundary(m: GModuleSlice, cochain) -> list | None:
    """phi with s.phi - phi = c(s) for all s, or None at this slice.

    cochain maps nonidentity element indices to coordinate vectors; the
    cocycle identity is validated first."""
    field = m.field
    others = _nontrivial(m)
    zero = [field.zero] * m.dim

    def val(i):
        if i == m.group.identity_index:
            return zero
        return cochain[i]

    for i in m.group.indices():
        for j in m.group.indices():
            lhs = val(m.group.mul(i, j))
            rhs = [field.add(a, b) for a, b in zip(m.act(i, val(j)), val(i))]
            if lhs != rhs:
                raise CocycleError("input does not satisfy the cocycle identity")
    if m.dim == 0:
        return []
    rows = []
    rhs_flat = []
    ident = m._identity_matrix()
    for s in others:
        for r in range(m.dim):
            rows.append([field.sub(m.matrices[s][r][c], ident[r][c])
                         for c in range(m.dim)])
        rhs_flat.extend(val(s))
    return solve(field, rows, rhs_flat)


def h2_dimension(m: GModuleSlice) -> int:
    """dim H^2 via bar cochains c: G x G -> m (not used by the pipeline)."""
    field = m.field
    n = len(m.group)
    dim = m.dim
    if dim == 0:
        return 0
    nunk = n * n * dim

    def off(i, j):
        return (i * n + j) * dim

    rows = []
    for i in m.group.indices():
        for j in m.group.indices():
            for k in m.group.indices():
                # s.c(t,u) - c(st,u) + c(s,tu) - c(s,t) = 0
                mat = m.matrices[i]
                for r in range(dim):
                    block = [field.zero] * nunk
                    for c in range(dim):
                        if mat[r][c] != field.zero:
                            block[off(j, k) + c] = mat[r][c]
                    block[off(m.group.mul(i, j), k) + r] = field.add(
                        block[off(m.group.mul(i, j), k) + r], field.neg(field.one))
                    block[off(i, m.group.mul(j, k)) + r] = field.add(
                        block[off(i, m.group.mul(j, k)) + r], field.one)
                    block[off(i, j) + r] = field.add(
                        block[off(i, j) + r], field.neg(field.one))
                    rows.append(block)
    z2 = len(kernel_basis(field, rows, nunk))
    # coboundaries of 1-cochains b: G -> m: db(s,t) = s.b(t) - b(st) + b(s)
    width = nunk
    bspan = SpanBuilder(field, width)
    for s in m.group.indices():
        for r in range(dim):
            b_flat = [field.zero] * width
            db = [field.zero] * width
            for i in m.group.indices():
                for j in m.group.indices():
                    # contribution of b = e_r at slot s
                    vec = [field.zero] * dim
                    if j == s:
                        acted = m.act(i, [field.one if c == r else field.zero
                                          for c in range(dim)])
                        vec = [field.add(a, b2) for a, b2 in zip(vec, acted)]
                    if m.group.mul(i, j) == s:
                        vec[r] = field.sub(vec[r], field.one)
                    if i == s:
                        vec[r] = field.add(vec[r], field.one)
                    o = off(i, j)
                    for c in range(dim):
                        db[o + c] = field.add(db[o + c], vec[c])
            bspan.add(db)
    return z2 - bspan.dim


class Cocycle:
    """A 1-cocycle valued in a normal module, stored in standard form
    (c(st) = s.c(t) + c(s) for the conjugation twist)."""

    def __init__(self, module: NormalModule, values: dict):
        self.module = module
        self.values = {
            i: tuple(module.amb.pres.nf(p) for p in vec)
            for i, vec in values.items()
            if i != module.amb.action.identity_index
        }

    def value(self, i: int):
        if i == self.module.amb.action.identity_index:
            return self.module.zero()
        return self.values.get(i, self.module.zero())

    def is_zero(self) -> bool:
        return all(all(p.is_zero() for p in v) for v in self.values.values())

    def check_identity(self) -> bool:
        group = self.module.amb.action
        for i in group.indices():
            for j in group.indices():
                lhs = self.value(group.mul(i, j))
                acted = self.module.act(i, self.value(j))
                rhs = tuple(a + b for a, b in zip(acted, self.value(i)))
                if tuple(self.module.amb.pres.nf(p) for p in rhs) != lhs:
                    return False
        return True

    def nonzero_values(self):
        return {i: v for i, v in self.values.items()
                if any(not p.is_zero() for p in v)}

    def __repr__(self):
        parts = [f"s{i} -> ({', '.join(repr(p) for p in v)})"
                 for i, v in sorted(self.values.items())]
        return "Cocycle(" + "; ".join(parts) + ")"

"""Finite groups realized as ring substitutions acting on a presentation.

Group elements are affine substitutions (degree <= 1 images) on a fixed
ring; the product sigma*tau is the composite substitution acting as
sigma(tau(f)) on polynomials, so the stored multiplication table makes
the substitution map a homomorphism by construction.
"""

from __future__ import annotations

from .fields import Field
from .groebner import GroebnerBasis, Representer
from .linalg import rank as matrix_rank
from .poly import ContextMismatchError, PolyRing, Polynomial, substitute


class NotInvertibleError(ValueError):
    pass


class ClosureBoundExceededError(RuntimeError):
    pass


class StabilityError(ValueError):
    pass


class WildGroupOrderError(ValueError):
    pass


class Substitution:
    """An affine ring substitution, stored as one image per variable."""

    __slots__ = ("ring", "images")

    def __init__(self, ring: PolyRing, images):
        images = tuple(images)
        if len(images) != ring.nvars:
            raise ValueError("need one image per variable")
        for g in images:
            if g.ring is not ring:
                raise ContextMismatchError("substitution image in a different ring")
            if g.degree() > 1:
                raise ValueError("only affine substitutions are supported")
        self.ring = ring
        self.images = images

    @classmethod
    def from_map(cls, ring: PolyRing, mapping: dict):
        images = [mapping.get(v, ring.var(v)) for v in ring.variables]
        return cls(ring, images)

    @classmethod
    def identity(cls, ring: PolyRing):
        return cls(ring, ring.gens())

    def apply(self, f: Polynomial) -> Polynomial:
        return substitute(f, dict(zip(self.ring.variables, self.images)))

    def compose(self, other: "Substitution") -> "Substitution":
        """self after other on polynomials: (self*other)(f) = self(other(f))."""
        return Substitution(self.ring, [self.apply(g) for g in other.images])

    def linear_part(self):
        """Matrix L with image_i = sum_k L[i][k] x_k + const_i."""
        ring = self.ring
        zero = ring.field.zero
        L = []
        for g in self.images:
            row = [zero] * ring.nvars
            for m, c in g.terms.items():
                for k, e in enumerate(m):
                    if e:
                        row[k] = c
            L.append(row)
        return L

    def constant_part(self):
        return [g.constant_coefficient() for g in self.images]

    def is_invertible(self) -> bool:
        return matrix_rank(self.ring.field, self.linear_part()) == self.ring.nvars

    def is_variable_permutation(self):
        """The permutation sending i to j when image_i == x_j, or None."""
        perm = []
        for g in self.images:
            if len(g.terms) != 1:
                return None
            (m, c), = g.terms.items()
            if c != self.ring.field.one or sum(m) != 1:
                return None
            perm.append(m.index(1))
        return perm if len(set(perm)) == self.ring.nvars else None

    def __eq__(self, other):
        return isinstance(other, Substitution) and other.images == self.images \
            and other.ring is self.ring

    def __hash__(self):
        return hash(self.images)

    def __repr__(self):
        parts = [
            f"{v} -> {g!r}"
            for v, g in zip(self.ring.variables, self.images)
            if g != self.ring.var(v)
        ]
        return "Substitution(" + ", ".join(parts) + ")" if parts else "Substitution(id)"


class GroupAction:
    """A finite group of ring substitutions with its multiplication table."""

    def __init__(self, ring: PolyRing, elements, table, inverse):
        self.ring = ring
        self.elements = list(elements)
        self.table = table
        self.inverse = inverse
        self.identity_index = 0

    def __len__(self):
        return len(self.elements)

    def indices(self):
        return range(len(self.elements))

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def inv(self, i: int) -> int:
        return self.inverse[i]

    def apply(self, i: int, f: Polynomial) -> Polynomial:
        return self.elements[i].apply(f)

    def apply_vector(self, i: int, vec):
        return tuple(self.elements[i].apply(p) for p in vec)

    def order_of(self, i: int) -> int:
        n = 1
        j = i
        while j != self.identity_index:
            j = self.mul(j, i)
            n += 1
        return n

    def is_tame(self) -> bool:
        """Whether |G| is invertible in the base field."""
        return self.ring.field.is_invertible_int(len(self.elements))

    def variable_orbits_free(self) -> bool:
        """True when every element permutes the variables and every orbit
        has size |G| (the ambient is already of regular-representation shape)."""
        perms = []
        for s in self.elements:
            p = s.is_variable_permutation()
            if p is None:
                return False
            perms.append(p)
        n = self.ring.nvars
        seen = set()
        for i in range(n):
            if i in seen:
                continue
            orbit = {p[i] for p in perms}
            if len(orbit) != len(self.elements):
                return False
            seen |= orbit
        return True

    def __repr__(self):
        return f"GroupAction(order {len(self.elements)} on {self.ring})"


def close_group(generators, ring: PolyRing | None = None, bound: int = 512) -> GroupAction:
    """Close a generator list under composition into a full GroupAction.

    Each generator is a Substitution or a {var: image} mapping; raises
    when a generator is not invertible or the closure exceeds bound.
    """
    subs = []
    for g in generators:
        if isinstance(g, Substitution):
            subs.append(g)
        else:
            if ring is None:
                raise ValueError("mapping generators need an explicit ring")
            subs.append(Substitution.from_map(ring, g))
    if subs:
        ring = subs[0].ring
    if ring is None:
        raise ValueError("empty generator list needs an explicit ring")
    if bound < 1:
        raise ValueError("bound must be at least 1")
    for s in subs:
        if s.ring is not ring:
            raise ContextMismatchError("generators on different rings")
        if not s.is_invertible():
            raise NotInvertibleError(f"generator {s!r} has singular linear part")

    identity = Substitution.identity(ring)
    elements = [identity]
    index = {identity: 0}
    frontier = [identity]
    while frontier:
        new_frontier = []
        for s in frontier:
            for g in subs:
                t = s.compose(g)
                if t not in index:
                    if len(elements) >= bound:
                        raise ClosureBoundExceededError(
                            f"group closure exceeds bound {bound}"
                        )
                    index[t] = len(elements)
                    elements.append(t)
                    new_frontier.append(t)
        frontier = new_frontier

    size = len(elements)
    table = [[0] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            t = elements[i].compose(elements[j])
            if t not in index:
                raise ClosureBoundExceededError("closure not multiplicatively closed")
            table[i][j] = index[t]
    inverse = [0] * size
    for i in range(size):
        for j in range(size):
            if table[i][j] == 0:
                inverse[i] = j
                break
    return GroupAction(ring, elements, table, inverse)


def verify_stability(gb: GroebnerBasis, action: GroupAction) -> bool:
    """True iff the ideal is fixed by every group element."""
    if gb.ring is not action.ring:
        raise ContextMismatchError("group acts on a different ring")
    for i in action.indices():
        for f in gb.generators:
            if not gb.normal_form(action.apply(i, f)).is_zero():
                return False
    return True


class TwistMatrices:
    """Per group element, a c x c matrix T with sigma(f_j) = sum_l T[j][l] f_l.

    `exact` entries are an actual division expression in the ambient ring;
    `reduced` entries are their normal forms mod the ideal (the matrix of
    the action on the conormal module)."""

    def __init__(self, action: GroupAction, exact, reduced):
        self.action = action
        self.exact = exact
        self.reduced = reduced
        self.size = len(exact[0]) if exact else 0

    def reduced_for(self, i: int):
        return self.reduced[i]

    def exact_for(self, i: int):
        return self.exact[i]


def twist_matrices(gens, action: GroupAction, gb: GroebnerBasis,
                   representer: Representer | None = None) -> TwistMatrices:
    """Division matrices for sigma(f_j) over the generator list itself."""
    gens = list(gens)
    if representer is None:
        representer = Representer(gens)
    exact = []
    reduced = []
    for i in action.indices():
        rows_exact = []
        rows_reduced = []
        for f in gens:
            cofactors = representer.express(action.apply(i, f))
            if cofactors is None:
                raise StabilityError(
                    "group image of a generator is not in the ideal; "
                    "verify_stability should have failed"
                )
            rows_exact.append(tuple(cofactors))
            rows_reduced.append(tuple(gb.normal_form(c) for c in cofactors))
        exact.append(rows_exact)
        reduced.append(rows_reduced)
    return TwistMatrices(action, exact, reduced)


def reynolds(f: Polynomial, action: GroupAction) -> Polynomial:
    """Averaging projection (1/|G|) sum sigma(f); tame case only."""
    n = len(action)
    field: Field = f.ring.field
    if not field.is_invertible_int(n):
        raise WildGroupOrderError(
            f"group order {n} is not invertible in {field}; use the linear solver"
        )
    total = f.ring.zero
    for i in action.indices():
        total = total + action.apply(i, f)
    return total.scale(field.inv(field.of(n)))

"""Deformation calculus over artinian bases k[eps]/(eps^(m+1)).

All arithmetic over a truncated base is eps-order peeling: every check
or solve reduces to staged problems over k handled by Groebner normal
forms, so there is no Groebner theory over non-field coefficients
anywhere.  Flatness of coefficientwise lifts of a regular sequence is
structural; verify_deformation re-checks the regular-sequence
certificate instead of attempting a general flatness test.

Sign conventions, fixed once and exercised by round-trip tests:
shifting a lift by a class nu replaces F_j by F_j - eps^m nu_j, and the
equivariance-defect cocycle is built from sigma(F_j') - (division by
the other generators).
"""

from __future__ import annotations

from dataclasses import dataclass

from .ambient import (
    AffinePresentation,
    EquivariantAmbient,
    NormalModule,
    _SliceCoordinates,
    ambient_vector_slice,
    choose_ambient,
    normal_image,
)
from .cohomology import (
    Cocycle,
    GModuleSlice,
    h1_bounded,
    invariants,
    slice_of_normal_module,
    solve_coboundary,
)
from .fields import Field
from .gaction import GroupAction
from .groebner import ModulePresentation, QuotientBasis, quotient_basis
from .linalg import SpanBuilder, solve
from .poly import PolyRing, Polynomial, partial


class DeformationError(ValueError):
    pass


@dataclass(frozen=True)
class ArtinianBase:
    """k[eps]/(eps^(order+1)); order 0 is the base field itself."""

    order: int
    field: Field

    def __post_init__(self):
        if self.order < 0:
            raise ValueError("order must be >= 0")


class EpsPoly:
    """Polynomial with coefficients in k[eps]/(eps^(order+1)), stored as
    one ambient polynomial per eps power."""

    __slots__ = ("ring", "order", "coeffs")

    def __init__(self, ring: PolyRing, order: int, coeffs):
        coeffs = list(coeffs)[: order + 1]
        while len(coeffs) < order + 1:
            coeffs.append(ring.zero)
        self.ring = ring
        self.order = order
        self.coeffs = tuple(coeffs)

    @classmethod
    def constant(cls, ring: PolyRing, order: int, p: Polynomial) -> "EpsPoly":
        return cls(ring, order, [p])

    def coeff(self, t: int) -> Polynomial:
        return self.coeffs[t] if t <= self.order else self.ring.zero

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __eq__(self, other):
        return (
            isinstance(other, EpsPoly)
            and other.ring is self.ring
            and other.order == self.order
            and other.coeffs == self.coeffs
        )

    def __hash__(self):
        return hash((self.order, self.coeffs))

    def __add__(self, other):
        other = self._coerce(other)
        return EpsPoly(self.ring, self.order,
                       [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        other = self._coerce(other)
        return EpsPoly(self.ring, self.order,
                       [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return EpsPoly(self.ring, self.order, [-a for a in self.coeffs])

    def __mul__(self, other):
        other = self._coerce(other)
        out = [self.ring.zero] * (self.order + 1)
        for s, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for t, b in enumerate(other.coeffs):
                if s + t > self.order:
                    break
                if not b.is_zero():
                    out[s + t] = out[s + t] + a * b
        return EpsPoly(self.ring, self.order, out)

    def _coerce(self, other):
        if isinstance(other, EpsPoly):
            if other.ring is not self.ring or other.order != self.order:
                raise DeformationError("eps-polynomials over different bases")
            return other
        if isinstance(other, Polynomial):
            return EpsPoly.constant(self.ring, self.order, other)
        raise TypeError(f"cannot combine EpsPoly with {other!r}")

    def shift(self, t: int) -> "EpsPoly":
        """Multiply by eps^t."""
        return EpsPoly(self.ring, self.order,
                       [self.ring.zero] * t + list(self.coeffs))

    def truncate(self, order: int) -> "EpsPoly":
        return EpsPoly(self.ring, order, self.coeffs[: order + 1])

    def lift(self, order: int) -> "EpsPoly":
        """Coefficientwise lift: append zero higher-order terms."""
        if order < self.order:
            raise ValueError("use truncate to lower the order")
        return EpsPoly(self.ring, order, self.coeffs)

    def map_coeffs(self, fn) -> "EpsPoly":
        return EpsPoly(self.ring, self.order, [fn(c) for c in self.coeffs])

    def substitute(self, images: dict) -> "EpsPoly":
        """Exact substitution x_i -> images[x_i] (EpsPoly images)."""
        ring = self.ring
        order = self.order
        one = EpsPoly.constant(ring, order, ring.one)
        var_images = []
        for v in ring.variables:
            img = images.get(v)
            if img is None:
                img = EpsPoly.constant(ring, order, ring.var(v))
            elif isinstance(img, Polynomial):
                img = EpsPoly.constant(ring, order, img)
            var_images.append(img)
        total = EpsPoly(ring, order, [])
        for t, c in enumerate(self.coeffs):
            for m, coeff in c.terms.items():
                part = EpsPoly.constant(ring, order, ring.const(coeff))
                for i, e in enumerate(m):
                    for _ in range(e):
                        part = part * var_images[i]
                total = total + part.shift(t)
        return total

    def __repr__(self):
        pieces = []
        for t, c in enumerate(self.coeffs):
            if c.is_zero():
                continue
            if t == 0:
                pieces.append(repr(c))
            else:
                power = "eps" if t == 1 else f"eps^{t}"
                pieces.append(f"{power}*({c!r})")
        return " + ".join(pieces) if pieces else "0"


class Deformation:
    """An equivariant lift of the base presentation over k[eps]/(eps^(m+1)).

    Generators are eps-polynomials reducing to the ambient presentation
    mod eps; the equivariance certificate stores, per group element, the
    division data sigma(F_j) = sum_l S[j][l] F_l over the artinian base.
    """

    def __init__(self, amb: EquivariantAmbient, base: ArtinianBase, gens,
                 certificates=None):
        self.amb = amb
        self.base = base
        self.gens = tuple(gens)
        if len(self.gens) != len(amb.pres.gens):
            raise DeformationError("wrong number of lifted generators")
        for g, f in zip(self.gens, amb.pres.gens):
            if g.order != base.order:
                raise DeformationError("generator order does not match the base")
            if g.coeff(0) != f:
                raise DeformationError("reduction mod eps is not the base presentation")
        self.certificates = certificates

    @property
    def order(self) -> int:
        return self.base.order

    @classmethod
    def initial(cls, amb: EquivariantAmbient) -> "Deformation":
        base = ArtinianBase(0, amb.ring.field)
        gens = tuple(EpsPoly.constant(amb.ring, 0, f) for f in amb.pres.gens)
        d = cls(amb, base, gens)
        d.certificates = certify_equivariance(amb, d.gens, 0)
        return d

    def truncated(self, order: int) -> "Deformation":
        base = ArtinianBase(order, self.base.field)
        gens = tuple(g.truncate(order) for g in self.gens)
        d = Deformation(self.amb, base, gens)
        d.certificates = certify_equivariance(self.amb, gens, order)
        return d

    def __repr__(self):
        return (f"Deformation(order {self.order}: "
                + "; ".join(repr(g) for g in self.gens) + ")")


def eps_divide(h: EpsPoly, gens, representer, allow_final_remainder=False):
    """Stagewise division of h by the lifted generators.

    Returns (S, remainder) with h = sum S_l gens_l + eps^order * remainder
    exactly over the truncated base; remainder is None on full success.
    Raises DeformationError when an intermediate stage leaves the ideal.
    """
    ring = h.ring
    order = h.order
    S = [EpsPoly(ring, order, []) for _ in gens]
    r = h
    for t in range(order + 1):
        rt = r.coeff(t)
        if rt.is_zero():
            continue
        cof = representer.express(rt)
        if cof is None:
            if allow_final_remainder and t == order:
                return S, rt
            raise DeformationError(
                f"eps^{t} coefficient is not in the base ideal"
            )
        for l, c in enumerate(cof):
            if c.is_zero():
                continue
            piece = EpsPoly.constant(ring, order, c).shift(t)
            S[l] = S[l] + piece
            r = r - piece * gens[l]
    return S, None


def certify_equivariance(amb: EquivariantAmbient, gens, order: int):
    """Per group element, the division matrices showing sigma(F_j) lies in
    the lifted ideal; raises when the lift is not equivariant."""
    rep = amb.pres.representer if amb.pres.gens else None
    certificates = {}
    for i in amb.action.indices():
        matrices = []
        for g in gens:
            moved = g.map_coeffs(lambda c: amb.action.apply(i, c))
            if rep is None:
                raise DeformationError("cannot certify without generators")
            S, _ = eps_divide(moved, list(gens), rep)
            matrices.append(S)
        certificates[i] = matrices
    return certificates


@dataclass
class DeformationCheck:
    base_ok: bool
    equivariance_ok: bool
    regular_ok: bool
    failures: list

    @property
    def ok(self) -> bool:
        return self.base_ok and self.equivariance_ok and self.regular_ok


def verify_deformation(d: Deformation) -> DeformationCheck:
    """Re-derive every certificate: base reduction, per-element division
    over the artinian base, and the regular-sequence certificate."""
    failures = []
    base_ok = all(
        g.coeff(0) == f for g, f in zip(d.gens, d.amb.pres.gens)
    ) and len(d.gens) == len(d.amb.pres.gens)
    if not base_ok:
        failures.append("mod-eps reduction does not match the base generators")
    equi_ok = True
    try:
        certify_equivariance(d.amb, d.gens, d.order)
    except DeformationError as exc:
        equi_ok = False
        failures.append(f"equivariance: {exc}")
    from .groebner import is_regular_sequence

    cert = is_regular_sequence([g.coeff(0) for g in d.gens], ring=d.amb.ring)
    regular_ok = cert.regular
    if not regular_ok:
        failures.append("mod-eps reduction is not a regular sequence")
    return DeformationCheck(base_ok, equi_ok, regular_ok, failures)


def ideal_equal(d1: Deformation, d2: Deformation) -> bool:
    """Equality of the lifted ideals via mutual membership (eps-peeling)."""
    _check_compatible(d1, d2, same_order=True)
    rep = d1.amb.pres.representer
    for a, b in ((d1, d2), (d2, d1)):
        for g in a.gens:
            try:
                eps_divide(g, list(b.gens), rep)
            except DeformationError:
                return False
    return True


def _check_compatible(d1: Deformation, d2: Deformation, same_order=True):
    if d1.amb is not d2.amb:
        raise DeformationError("deformations over different ambients")
    if same_order and d1.order != d2.order:
        raise DeformationError("deformations over different bases")


class DifferenceClass:
    """Invariant normal-module element measuring the gap of two lifts."""

    def __init__(self, amb: EquivariantAmbient, vector):
        self.amb = amb
        self.vector = tuple(amb.pres.nf(p) for p in vector)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.vector)

    def __add__(self, other):
        return DifferenceClass(self.amb,
                               [a + b for a, b in zip(self.vector, other.vector)])

    def __neg__(self):
        return DifferenceClass(self.amb, [-a for a in self.vector])

    def __eq__(self, other):
        return isinstance(other, DifferenceClass) and other.vector == self.vector

    def __repr__(self):
        return "DifferenceClass(" + ", ".join(repr(p) for p in self.vector) + ")"


def difference_class(d1: Deformation, d2: Deformation,
                     require_invariant: bool = True) -> DifferenceClass:
    """The normal-module class (F_j^1 - F_j^2)/eps^m of two lifts that
    agree below the top order."""
    _check_compatible(d1, d2)
    m = d1.order
    for g1, g2 in zip(d1.gens, d2.gens):
        for t in range(m):
            if g1.coeff(t) != g2.coeff(t):
                raise DeformationError("lifts do not agree below the top order")
    vec = tuple(
        d1.amb.pres.nf(g1.coeff(m) - g2.coeff(m))
        for g1, g2 in zip(d1.gens, d2.gens)
    )
    cls = DifferenceClass(d1.amb, vec)
    if require_invariant:
        N = NormalModule(d1.amb)
        for i in d1.amb.action.indices():
            if N.act(i, cls.vector) != cls.vector:
                raise DeformationError(
                    "difference class is not invariant; are both lifts equivariant?"
                )
    return cls


def shift_lift(d: Deformation, cls: DifferenceClass) -> Deformation:
    """The lift with generators F_j - eps^m * nu_j; the difference class
    from d back to it is cls."""
    if cls.amb is not d.amb:
        raise DeformationError("class over a different ambient")
    m = d.order
    gens = []
    for g, nu in zip(d.gens, cls.vector):
        correction = EpsPoly.constant(d.amb.ring, m, nu).shift(m)
        gens.append(g - correction)
    out = Deformation(d.amb, d.base, tuple(gens))
    out.certificates = certify_equivariance(d.amb, out.gens, m)
    return out


@dataclass
class DerivationWitness:
    """Invariant ambient derivation realizing an isomorphism of lifts."""

    amb: EquivariantAmbient
    components: tuple

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.components)

    def normal_image(self):
        return normal_image(self.amb, self.components)

    def __repr__(self):
        return "DerivationWitness(" + ", ".join(repr(p) for p in self.components) + ")"


def apply_flow(d: Deformation, components, sign: int = 1) -> Deformation:
    """Apply the substitution x_i -> x_i + sign * eps^m * D_i to the lift."""
    m = d.order
    ring = d.amb.ring
    images = {}
    for v, comp in zip(ring.variables, components):
        if comp.is_zero():
            continue
        delta = EpsPoly.constant(ring, m, comp if sign > 0 else -comp).shift(m)
        images[v] = EpsPoly.constant(ring, m, ring.var(v)) + delta
    gens = tuple(g.substitute(images) for g in d.gens)
    out = Deformation(d.amb, d.base, gens)
    out.certificates = certify_equivariance(d.amb, gens, m)
    return out


def isomorphism_witness(d1: Deformation, d2: Deformation,
                        trunc: int | None = None, slack: int = 2):
    """An invariant ambient derivation whose normal image is the
    difference class of the lifts, or None at this slice.

    A found witness is an exact certificate: x -> x + eps^m D carries d2
    into d1 (checked before returning)."""
    nu = difference_class(d1, d2)
    amb = d1.amb
    if nu.is_zero():
        return DerivationWitness(amb, (amb.ring.zero,) * amb.ring.nvars)
    bound = (trunc if trunc is not None else default_truncation(amb)) + slack
    basis = ambient_vector_slice(amb, bound, invariant=True, tangent=False)
    if not basis:
        return None
    coords = _SliceCoordinates(amb.ring)
    images = [normal_image(amb, v) for v in basis]
    for img in images:
        coords.ensure(img)
    coords.ensure(nu.vector)
    cols = [coords.row(img) for img in images]
    rows = [[cols[k][r] for k in range(len(cols))] for r in range(len(coords.keys))]
    sol = solve(amb.ring.field, rows, coords.row(nu.vector))
    if sol is None:
        return None
    components = [amb.ring.zero] * amb.ring.nvars
    for c, vec in zip(sol, basis):
        if c != amb.ring.field.zero:
            for i, p in enumerate(vec):
                components[i] = components[i] + p.scale(c)
    witness = DerivationWitness(amb, tuple(amb.pres.nf(p) for p in components))
    moved = apply_flow(d2, witness.components, sign=1)
    if not ideal_equal(moved, d1):
        raise DeformationError("witness failed its realization check")
    return witness


def default_truncation(amb: EquivariantAmbient) -> int:
    degs = [f.degree() for f in amb.pres.gens]
    return 2 * max(degs, default=1)


def _mech_defect(d: Deformation, lift_gens):
    """Peeling remainders w with sigma(F_j') = sum_l S[j][l] F_l' + eps^M w_j."""
    amb = d.amb
    order = d.order + 1
    for g, base_g in zip(lift_gens, d.gens):
        if g.order != order:
            raise DeformationError("lift generators have the wrong order")
        if g.truncate(d.order) != base_g:
            raise DeformationError("generators do not lift the given deformation")
    rep = amb.pres.representer
    mech = {}
    for i in amb.action.indices():
        vec = []
        for g in lift_gens:
            moved = g.map_coeffs(lambda c: amb.action.apply(i, c))
            _, remainder = eps_divide(moved, list(lift_gens), rep,
                                      allow_final_remainder=True)
            vec.append(amb.pres.nf(remainder) if remainder is not None
                       else amb.ring.zero)
        mech[i] = tuple(vec)
    return mech


def obstruction_cocycle(d: Deformation, lift_gens) -> Cocycle:
    """The equivariance-defect cocycle of a (possibly non-equivariant)
    lift of d, in standard form for the normal-module action.

    The raw defect of sigma is the eps^(m+1) remainder of dividing
    sigma(F_j') by the lifted generators; the standard-form value at
    sigma applies sigma to the raw defect of sigma^(-1), which makes
    c(st) = s.c(t) + c(s) hold on the nose."""
    amb = d.amb
    mech = _mech_defect(d, lift_gens)
    action = amb.action
    values = {}
    for i in action.indices():
        if i == action.identity_index:
            continue
        raw = mech[action.inv(i)]
        values[i] = tuple(amb.pres.nf(action.apply(i, w)) for w in raw)
    N = normal_module_of(d)
    return Cocycle(N, values)


def normal_module_of(d: Deformation) -> NormalModule:
    return NormalModule(d.amb)


def is_graded_setup(amb: EquivariantAmbient) -> bool:
    """Homogeneous generators with a linear (degree-preserving) action:
    coboundary solves are then exact, not merely slice-certified."""
    if not all(f.is_homogeneous() for f in amb.pres.gens):
        return False
    for s in amb.action.elements:
        for img in s.images:
            if any(sum(m) != 1 for m in img.terms):
                return False
    return True


@dataclass
class LiftOutcome:
    success: bool
    deformation: Deformation | None
    obstruction: Cocycle | None
    certified: str


def equivariantize(d: Deformation, lift_gens, trunc: int | None = None,
                   slack: int = 2) -> LiftOutcome:
    """Correct a lift of d to an equivariant one, or report the
    obstruction class.

    When the defect cocycle c is nonzero we solve s.phi - phi = -c on a
    G-stable slice and replace F_j' by F_j' - eps^(m+1) phi_j, which
    cancels the defect exactly; the corrected lift is re-certified."""
    amb = d.amb
    order = d.order + 1
    c = obstruction_cocycle(d, lift_gens)
    base = ArtinianBase(order, amb.ring.field)
    if c.is_zero():
        out = Deformation(amb, base, tuple(lift_gens))
        out.certificates = certify_equivariance(amb, out.gens, order)
        return LiftOutcome(True, out, None, "exact")
    N = normal_module_of(d)
    bound = (trunc if trunc is not None else default_truncation(amb)) + slack
    extra = [c.value(i) for i in amb.action.indices()
             if i != amb.action.identity_index]
    m_search = slice_of_normal_module(N, bound, extra_vectors=extra)
    cochain = {}
    for i in amb.action.indices():
        if i == amb.action.identity_index:
            continue
        coords = m_search.express(tuple(-p for p in c.value(i)))
        if coords is None:
            raise DeformationError("defect cocycle escapes the search slice")
        cochain[i] = coords
    phi = solve_coboundary(m_search, cochain)
    if phi is None:
        certified = "exact" if is_graded_setup(amb) else f"slice:{bound}"
        return LiftOutcome(False, None, c, certified)
    nu = m_search.materialize(phi)
    gens = []
    for g, comp in zip(lift_gens, nu):
        gens.append(g - EpsPoly.constant(amb.ring, order, comp).shift(order))
    out = Deformation(amb, base, tuple(gens))
    out.certificates = certify_equivariance(amb, out.gens, order)
    return LiftOutcome(True, out, None, "exact")


def lift_step(d: Deformation, trunc: int | None = None,
              slack: int = 2) -> LiftOutcome:
    """One equivariant lifting step: take the coefficientwise lift
    (always a lift, rarely equivariant) and equivariantize it."""
    lift_gens = tuple(g.lift(d.order + 1) for g in d.gens)
    return equivariantize(d, lift_gens, trunc=trunc, slack=slack)


@dataclass
class TangentReport:
    amb: EquivariantAmbient
    trunc: int
    tame: bool
    t0_generators: list
    t0_invariant_basis: list
    t1: QuotientBasis
    t1_basis_vectors: list
    t1_equivariant_dim: int | None
    t1_equivariant_basis: list
    certified: str

    @property
    def t0_dim(self) -> int:
        return len(self.t0_invariant_basis)

    @property
    def t1_dim(self):
        return self.t1.dimension


def _basis_vector(ring: PolyRing, rank: int, pos: int, mono) -> tuple:
    vec = [ring.zero] * rank
    vec[pos] = ring.monomial(mono)
    return tuple(vec)


def tangent_spaces(p: AffinePresentation, g: GroupAction,
                   amb: EquivariantAmbient | None = None,
                   trunc: int | None = None, slack: int = 2) -> TangentReport:
    """T^0_G, T^1 and T^1_G of the presentation through the given ambient.

    T^1 comes from the standard-monomial count of B^c modulo the
    Jacobian image (exact regardless of grading).  T^1_G is the fixed
    space of the induced action when averaging is available and T^1 is
    finite; otherwise it is the slice quotient of invariant normal
    vectors by images of invariant ambient derivations.
    """
    if amb is None:
        amb = choose_ambient(p, g)
    pres = amb.pres
    ring = amb.ring
    D = trunc if trunc is not None else default_truncation(amb)
    from .ambient import derivations as ambient_derivations

    t0_gens, t0_inv = ambient_derivations(pres, amb.action, trunc=None)
    t0_slice = ambient_vector_slice(amb, D, invariant=True, tangent=True)

    rank = len(pres.gens)
    if rank == 0:
        empty = QuotientBasis(True, 0, (), None)
        return TangentReport(amb, D, amb.action.is_tame(), t0_gens, t0_slice,
                             empty, [], 0, [], "exact")
    relations = tuple(
        tuple(partial(f, i) for f in pres.gens) for i in range(ring.nvars)
    )
    t1_pres = ModulePresentation(ring, rank, relations, pres.gb)
    qb = quotient_basis(t1_pres, D)
    t1_vectors = [_basis_vector(ring, rank, pos, m) for (pos, m) in qb.monomials]

    tame = amb.action.is_tame()
    N = NormalModule(amb)
    if tame and qb.finite:
        module_gb = t1_pres.groebner()
        index = {bm: k for k, bm in enumerate(qb.monomials)}
        field = ring.field
        matrices = []
        for i in amb.action.indices():
            cols = []
            for (pos, m) in qb.monomials:
                acted = N.act(i, _basis_vector(ring, rank, pos, m))
                reduced = module_gb.reduce_polys(acted)
                col = [field.zero] * len(qb.monomials)
                for p_idx, poly in enumerate(reduced):
                    for mono, coeff in poly.terms.items():
                        col[index[(p_idx, mono)]] = coeff
                cols.append(col)
            matrices.append([[cols[c][r] for c in range(len(cols))]
                             for r in range(len(cols))] if cols else [])
        m_t1 = GModuleSlice(amb.action, field, matrices, check=True) \
            if qb.monomials else None
        if m_t1 is None:
            return TangentReport(amb, D, tame, t0_gens, t0_slice, qb, [],
                                 0, [], "exact")
        fixed = invariants(m_t1)
        # invariant vector representatives via averaging
        scale = field.inv(field.of(len(amb.action)))
        reps = []
        for coords in fixed:
            vec = (ring.zero,) * rank
            for c, (pos, m) in zip(coords, qb.monomials):
                if c != field.zero:
                    unit = _basis_vector(ring, rank, pos, m)
                    vec = tuple(a + b.scale(c) for a, b in zip(vec, unit))
            avg = (ring.zero,) * rank
            for i in amb.action.indices():
                avg = tuple(a + b for a, b in zip(avg, N.act(i, vec)))
            reps.append(tuple(pres.nf(p.scale(scale)) for p in avg))
        return TangentReport(amb, D, tame, t0_gens, t0_slice, qb, t1_vectors,
                             len(fixed), reps, "exact")

    # slice route (wild case, or infinite T^1)
    m_small = slice_of_normal_module(N, D)
    inv_coords = invariants(m_small)
    V = [m_small.materialize(c) for c in inv_coords]
    U_src = ambient_vector_slice(amb, D + slack, invariant=True, tangent=False)
    U = [normal_image(amb, v) for v in U_src]
    coords = _SliceCoordinates(ring)
    for v in V + U:
        coords.ensure(v)
    u_span = SpanBuilder(ring.field, len(coords.keys))
    for u in U:
        u_span.add(coords.row(u))
    total = SpanBuilder(ring.field, len(coords.keys))
    for row in u_span.rows:
        total.add(row)
    reps = []
    for v in V:
        if total.add(coords.row(v)):
            reps.append(v)
    return TangentReport(amb, D, tame, t0_gens, t0_slice, qb, t1_vectors,
                         len(reps), reps, f"slice:{D}")


@dataclass
class ObstructionReport:
    amb: EquivariantAmbient
    trunc: int
    tame: bool
    dimension: int
    representatives: list
    certified: str


def obstruction_space(p: AffinePresentation, g: GroupAction,
                      amb: EquivariantAmbient | None = None,
                      trunc: int | None = None, slack: int = 2) -> ObstructionReport:
    """H^1(G, normal module) on slices; exactly zero in the tame case."""
    if amb is None:
        amb = choose_ambient(p, g)
    D = trunc if trunc is not None else default_truncation(amb)
    if amb.action.is_tame():
        return ObstructionReport(amb, D, True, 0, [], "exact")
    if len(amb.pres.gens) == 0:
        return ObstructionReport(amb, D, False, 0, [], "exact")
    N = NormalModule(amb)
    m_small = slice_of_normal_module(N, D)
    m_big = slice_of_normal_module(N, D + slack)
    res = h1_bounded(m_small, m_big)
    others = [i for i in amb.action.indices() if i != amb.action.identity_index]
    dim = m_small.dim
    reps = []
    for flat in res.representatives:
        values = {}
        for k, s in enumerate(others):
            block = flat[k * dim:(k + 1) * dim]
            values[s] = m_small.materialize(block)
        reps.append(Cocycle(N, values))
    return ObstructionReport(amb, D, False, res.dimension, reps, f"slice:{D}")


def invariant_normal_slice(amb: EquivariantAmbient, degree: int):
    """Basis of invariant normal-module vectors at the slice (the torsor
    directions for embedded equivariant lifts)."""
    N = NormalModule(amb)
    m = slice_of_normal_module(N, degree)
    return [m.materialize(c) for c in invariants(m)]

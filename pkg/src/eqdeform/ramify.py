"""Local ramification counts: invariants of Ext^1 under a cyclic stabilizer.

The module of relative differentials at a ramified point is
(k[t]/(t^d)) dt with the stabilizer of order m acting by t -> z*t for a
primitive m-th root of unity z.  An equivariant free resolution

    0 -> R e_1 -> R e_0 -> (R/(t^d)) dt -> 0

forces weight 1 on e_0 (since dt -> z dt) and weight d+1 on e_1
(e_1 -> t^d e_0); dualizing gives Ext^1 = (R/(t^d)) e_1^* with e_1^* of
weight -(d+1), so the invariant count is a weight congruence.
"""

from __future__ import annotations

from dataclasses import dataclass

from .fields import Field, FieldError, GF, QQ
from .linalg import kernel_basis


class RootOfUnityError(ValueError):
    pass


def primitive_root_of_unity(field: Field, m: int):
    """A primitive m-th root of unity in the field, or raise."""
    if m < 1:
        raise ValueError("m must be positive")
    if m == 1:
        return field.one
    if field.characteristic == 0:
        if m == 2:
            return field.neg(field.one)
        raise RootOfUnityError(f"Q has no primitive {m}-th root of unity")
    p = field.characteristic
    if (p - 1) % m != 0:
        raise RootOfUnityError(f"F_{p} has no primitive {m}-th root of unity "
                               f"(need m | p-1)")
    for a in range(2, p):
        elt = field.of(a)
        power = field.one
        order = 0
        for k in range(1, m + 1):
            power = field.mul(power, elt)
            if power == field.one:
                order = k
                break
        if order == m:
            return field.of(a)
    raise RootOfUnityError(f"no element of order {m} found in F_{p}")


@dataclass(frozen=True)
class TruncatedSeriesModule:
    """R/(t^N) twisted so that sigma(t^i e) = z^(i+w) t^i e."""

    modulus_degree: int
    weight: int
    cyclic_order: int
    field: Field

    def __post_init__(self):
        if self.modulus_degree < 0:
            raise ValueError("modulus degree must be >= 0")
        if self.cyclic_order < 1:
            raise ValueError("cyclic order must be >= 1")
        primitive_root_of_unity(self.field, self.cyclic_order)

    def invariant_count(self) -> int:
        """Number of basis elements t^i e with i + w = 0 mod m."""
        m = self.cyclic_order
        return sum(
            1 for i in range(self.modulus_degree) if (i + self.weight) % m == 0
        )

    def action_matrix(self):
        """The diagonal action of the chosen generator on the t^i e basis."""
        z = primitive_root_of_unity(self.field, self.cyclic_order)
        field = self.field
        N = self.modulus_degree
        rows = []
        for i in range(N):
            row = [field.zero] * N
            entry = field.one
            for _ in range((i + self.weight) % self.cyclic_order):
                entry = field.mul(entry, z)
            # z^(i+w) = z^((i+w) mod m)
            row[i] = entry
            rows.append(row)
        return rows

    def invariant_count_by_matrix(self) -> int:
        """Fixed-space dimension of the explicit action matrix (oracle)."""
        field = self.field
        mat = self.action_matrix()
        N = self.modulus_degree
        if N == 0:
            return 0
        rows = [
            [field.sub(mat[r][c], field.one if r == c else field.zero)
             for c in range(N)]
            for r in range(N)
        ]
        return len(kernel_basis(field, rows, N))


def local_ext1_invariants(d: int, m: int, field: Field | None = None) -> int:
    """dim of the stabilizer invariants of Ext^1(Omega_local, R).

    Ext^1 = (R/(t^d)) e_1^* with e_1^* of weight -(d+1); when
    d = -1 mod m the count is ceil(d/m), the tame per-point value."""
    if d < 0:
        raise ValueError("different must be >= 0")
    if m < 2:
        raise ValueError("stabilizer order must be >= 2")
    if field is None:
        field = QQ if m <= 2 else _smallest_prime_field(m)
    module = TruncatedSeriesModule(d, (-(d + 1)) % m, m, field)
    return module.invariant_count()


def _smallest_prime_field(m: int):
    p = m + 1
    while True:
        try:
            f = GF(p)
        except FieldError:
            p += 1
            continue
        if (p - 1) % m == 0:
            return f
        p += 1


def tame_different(m: int) -> int:
    """The local different of a tame cyclic stabilizer of order m."""
    if m < 1:
        raise ValueError("stabilizer order must be >= 1")
    return m - 1

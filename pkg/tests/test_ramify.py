from math import ceil

import pytest

from eqdeform.fields import GF, QQ
from eqdeform.ramify import (
    RootOfUnityError,
    TruncatedSeriesModule,
    local_ext1_invariants,
    primitive_root_of_unity,
    tame_different,
)

FIELDS = {2: GF(5), 3: GF(7), 4: GF(5), 5: GF(11), 6: GF(7), 7: GF(29)}


def test_tame_different():
    assert tame_different(2) == 1
    assert tame_different(5) == 4
    assert tame_different(1) == 0


def test_small_tame_values():
    assert local_ext1_invariants(1, 2, GF(5)) == 1
    assert local_ext1_invariants(2, 3, GF(7)) == 1
    assert local_ext1_invariants(0, 6, GF(7)) == 0


def test_tame_per_point_value():
    for m in (2, 3, 5, 7):
        assert local_ext1_invariants(tame_different(m), m, FIELDS[m]) == 1


def test_ceiling_formula_on_tame_stratum():
    for m in (2, 3, 5, 7):
        for q in range(1, 5):
            d = q * m - 1
            assert local_ext1_invariants(d, m, FIELDS[m]) == ceil(d / m) == q


def test_weight_count_matches_matrix_fixed_space():
    for m in (2, 3, 4, 5, 6):
        field = FIELDS[m]
        for d in range(0, 13):
            module = TruncatedSeriesModule(d, (-(d + 1)) % m, m, field)
            assert module.invariant_count() == module.invariant_count_by_matrix()


def test_off_tame_stratum_floor():
    # the resolution-derived twist gives floor(d/m) away from d = -1 mod m
    for m in (2, 3, 5):
        for d in range(1, 12):
            if (d + 1) % m != 0:
                assert local_ext1_invariants(d, m, FIELDS[m]) == d // m


def test_root_of_unity_requirements():
    assert primitive_root_of_unity(QQ, 2) == QQ.of(-1)
    assert primitive_root_of_unity(GF(5), 4) is not None
    with pytest.raises(RootOfUnityError):
        primitive_root_of_unity(GF(2), 2)
    with pytest.raises(RootOfUnityError):
        primitive_root_of_unity(QQ, 3)
    with pytest.raises(RootOfUnityError):
        local_ext1_invariants(1, 3, QQ)
    with pytest.raises(ValueError):
        local_ext1_invariants(-1, 2, GF(5))
    with pytest.raises(ValueError):
        local_ext1_invariants(1, 1, GF(5))

import numpy as np
import pytest

from pauli_lab.core.errors import ContractError
from pauli_lab.core.gf2 import GF2Vector, SymplecticMap, enumerate_isotropic, zero_subspace
from pauli_lab.core.lattice import (
    Measurement,
    Outcome,
    consistent,
    disagreement_count,
    distance,
    meet,
    outcome_eval,
    outcome_table,
    outcomes,
    phase_w,
    pull_back_outcome,
    restrict,
    sign_correction,
)


def vec(text):
    return GF2Vector.from_string(text)


# Hadamard on the first qubit: X0 <-> Z0
HADAMARD_0 = SymplecticMap(2, (0b0010, 0b0100, 0b1000, 0b0001))


@pytest.mark.parametrize("x,y,expected", [
    ("10|00", "01|00", 0),
    ("10|01", "01|10", 1),
    ("11|00", "00|11", 0),
    ("00|10", "00|01", 0),
])
def test_phase_w_examples(x, y, expected):
    assert phase_w(vec(x), vec(y)) == expected
    assert phase_w(vec(y), vec(x)) == expected


def test_phase_w_rejects_anticommuting_pair():
    with pytest.raises(ContractError):
        phase_w(vec("1|0"), vec("0|1"))


def test_outcome_code_round_trip():
    m = Measurement.from_strings("10|00", "01|00")
    o = Outcome.from_code(m, 0b10)
    assert o.values == (1, 0)
    assert o.code == 2
    assert o.bit_string() == "10"


def test_outcome_value_at_zero_is_zero(lattice2):
    for m in lattice2.maximal:
        for o in outcomes(m):
            assert outcome_eval(o, GF2Vector(0, 2)) == 0


def test_outcome_counts(lattice2):
    assert all(len(outcomes(m)) == 4 for m in lattice2.maximal)
    assert len(outcomes(Measurement(zero_subspace(2)))) == 1


def test_phase_rule_holds_on_every_table(lattice2):
    for m in lattice2.maximal:
        for o in outcomes(m):
            table = outcome_table(o)
            for a in m.subspace.elements:
                for b in m.subspace.elements:
                    expected = table[a] ^ table[b] ^ phase_w(GF2Vector(a, 2), GF2Vector(b, 2))
                    assert table[a ^ b] == expected


def test_x_only_measurement_is_linear():
    m = Measurement.from_strings("10|00", "01|00")
    for o in outcomes(m):
        table = outcome_table(o)
        for a in m.subspace.elements:
            for b in m.subspace.elements:
                assert table[a ^ b] == table[a] ^ table[b]


def test_restrict_to_zero_and_self():
    m = Measurement.from_strings("10|00", "01|00")
    o = Outcome(m, (1, 1))
    zero = Measurement(zero_subspace(2))
    assert restrict(o, zero) == Outcome(zero, ())
    assert restrict(o, m) == o
    line = Measurement.from_strings("11|00")
    assert restrict(o, line).values == (0,)


def test_restrict_requires_order():
    o = Outcome(Measurement.from_strings("10|00"), (0,))
    with pytest.raises(ContractError):
        restrict(o, Measurement.from_strings("00|10"))


def test_disjoint_bases_are_consistent():
    a = Outcome(Measurement.from_strings("10|00", "01|00"), (1, 0))
    b = Outcome(Measurement.from_strings("00|10", "00|01"), (0, 1))
    assert meet(a.base, b.base).dim == 0
    assert consistent(a, b)


def test_disagreement_count_small_example():
    a = Outcome(Measurement.from_strings("10|00", "01|00"), (0, 0))
    b = Outcome(Measurement.from_strings("10|00", "00|01"), (1, 0))
    assert not consistent(a, b)
    assert disagreement_count(a, b) == 1
    with pytest.raises(ContractError):
        disagreement_count(a, a)


def test_disagreement_is_half_the_intersection(lattice3, rng):
    checked = 0
    while checked < 1000:
        i, j = rng.integers(len(lattice3), size=2)
        a = lattice3.outcome(int(i), int(rng.integers(8)))
        b = lattice3.outcome(int(j), int(rng.integers(8)))
        if consistent(a, b):
            continue
        common = meet(a.base, b.base)
        assert disagreement_count(a, b) == 2 ** (common.dim - 1)
        checked += 1


def test_distances(lattice2):
    maximal = lattice2.maximal
    assert distance(maximal[0], maximal[0]) == 0
    values = {distance(x, y) for x in maximal for y in maximal if x != y}
    assert values == {1, 2}
    with pytest.raises(ContractError):
        distance(Measurement.from_strings("10|00"), maximal[0])


def test_identity_pull_back(lattice2):
    identity = SymplecticMap.identity(2)
    for m in lattice2.maximal:
        for o in outcomes(m):
            assert pull_back_outcome(identity, o, m) == o


def test_hadamard_sign_correction():
    h = SymplecticMap(1, (0b01, 0b10))
    assert h.is_symplectic()
    assert sign_correction(h, 0b10) == 0
    assert sign_correction(h, 0b01) == 0
    # H Y H = -Y
    assert sign_correction(h, 0b11) == 1


def test_pull_back_matches_image_everywhere(lattice2):
    assert HADAMARD_0.is_symplectic()
    for x in lattice2.maximal:
        target = Measurement(HADAMARD_0.apply_subspace(x.subspace))
        for image in outcomes(target):
            g = pull_back_outcome(HADAMARD_0, image, x)
            table = outcome_table(image)
            for v in x.subspace.elements:
                expected = table[HADAMARD_0.apply(v)] ^ sign_correction(HADAMARD_0, v)
                assert outcome_table(g)[v] == expected


def test_lattice_tables_match_outcome_tables(lattice2):
    assert len(lattice2) == 15
    assert lattice2.outcome_count == 4
    for i, m in enumerate(lattice2.maximal):
        assert lattice2.index_of(m) == i
        for code in range(4):
            table = outcome_table(lattice2.outcome(i, code))
            row = lattice2.values(i, code)
            for bits, value in table.items():
                assert row[bits] == value
            assert lattice2.membership[i].sum() == 4


def test_fiber_sizes(lattice2):
    # every nonzero vector of L^2 lies in three maximal measurements
    for bits in range(1, 16):
        assert len(lattice2.fiber(bits)) == 3


def test_inconsistent_pairs_match_pairwise_check(lattice2, rng):
    choices = rng.integers(4, size=len(lattice2))
    table = lattice2.inconsistent_pairs(choices)
    for i in range(len(lattice2)):
        for j in range(len(lattice2)):
            a = lattice2.outcome(i, int(choices[i]))
            b = lattice2.outcome(j, int(choices[j]))
            assert bool(table[i, j]) == (not consistent(a, b))
    assert not np.any(np.diag(table))


def all_measurements(n):
    return [Measurement(s) for k in range(n + 1) for s in enumerate_isotropic(n, k)]


def test_measurements_are_ordered_by_inclusion():
    z0 = Measurement.from_strings("00|10")
    x_plane = Measurement.from_strings("10|00", "01|00")
    z_plane = Measurement.from_strings("00|10", "00|01")
    # z0 has the smaller rows, yet it is not below the X plane
    assert z0.rows < x_plane.rows
    assert not z0 <= x_plane
    assert not z0 < x_plane
    assert not x_plane <= z0
    assert z0 < z_plane and z_plane > z0 and z_plane >= z0
    assert z_plane <= z_plane and not z_plane < z_plane
    bottom = Measurement(zero_subspace(2))
    assert all(bottom <= m for m in all_measurements(2))


def test_consistency_is_reflexive_and_symmetric():
    everything = [o for m in all_measurements(2) for o in outcomes(m)]
    for a in everything:
        assert consistent(a, a)
        for b in everything:
            assert consistent(a, b) == consistent(b, a)


def test_restriction_preserves_consistency():
    measurements = all_measurements(2)
    everything = [o for m in measurements for o in outcomes(m)]
    restrictions = {o: [restrict(o, t) for t in measurements if t <= o.base] for o in everything}
    checked = 0
    for a in everything:
        for b in everything:
            if not consistent(a, b):
                continue
            for ra in restrictions[a]:
                for rb in restrictions[b]:
                    assert consistent(ra, rb)
                    checked += 1
    assert checked > 0

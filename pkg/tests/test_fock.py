"""Fock-basis enumeration, ordering and second-quantized matrix elements."""

import math

import numpy as np
import pytest

from bhgates.fock import FockBasis, apply_hop, enumerate_basis, index_of, number_diagonal


def test_dimension_four_sites_two_particles():
    assert enumerate_basis(4, 2).dimension == 10


def test_dimension_two_sites_one_particle():
    basis = enumerate_basis(2, 1)
    assert basis.states == ((1, 0), (0, 1))
    assert basis.dimension == 2


def test_dimension_six_sites_three_particles():
    basis = enumerate_basis(6, 3)
    # brute-force count of non-negative integer 6-vectors summing to 3
    count = sum(
        1
        for a in range(4)
        for b in range(4 - a)
        for c in range(4 - a - b)
        for d in range(4 - a - b - c)
        for e in range(4 - a - b - c - d)
    )
    assert basis.dimension == count == 56


@pytest.mark.parametrize("sites", range(1, 7))
@pytest.mark.parametrize("particles", range(1, 4))
def test_dimension_matches_binomial(sites, particles):
    basis = enumerate_basis(sites, particles)
    assert basis.dimension == math.comb(particles + sites - 1, sites - 1)


def test_states_descending_lexicographic_site_zero_most_significant():
    basis = enumerate_basis(4, 2)
    assert basis.states[0] == (2, 0, 0, 0)
    assert basis.states[1] == (1, 1, 0, 0)
    assert basis.states[-1] == (0, 0, 0, 2)
    assert list(basis.states) == sorted(basis.states, reverse=True)


def test_states_distinct_and_conserve_particle_number():
    basis = enumerate_basis(5, 3)
    assert len(set(basis.states)) == basis.dimension
    assert all(sum(s) == 3 for s in basis.states)
    assert all(min(s) >= 0 for s in basis.states)


def test_index_is_inverse_of_states():
    basis = enumerate_basis(4, 2)
    for k, state in enumerate(basis.states):
        assert basis.index[state] == k
        assert index_of(state, basis) == k


def test_index_of_unknown_state_raises():
    basis = enumerate_basis(2, 1)
    with pytest.raises(ValueError):
        index_of((2, 0), basis)


def test_rejects_zero_sites_or_particles():
    with pytest.raises(ValueError):
        FockBasis(0, 2)
    with pytest.raises(ValueError):
        FockBasis(3, 0)


def test_apply_hop_double_occupancy():
    # a+_2 a_1 |2,0> = sqrt(2) |1,1> (site labels 1-based in the docstrings,
    # 0-based in code)
    assert apply_hop((2, 0), 1, 0) == ((1, 1), pytest.approx(math.sqrt(2), abs=0))


def test_apply_hop_single_particle():
    assert apply_hop((0, 1), 0, 1) == ((1, 0), 1.0)


def test_apply_hop_empty_source_is_vacuous():
    assert apply_hop((1, 0), 0, 1) is None


def test_apply_hop_rejects_bad_sites():
    with pytest.raises(ValueError):
        apply_hop((1, 0), 0, 2)
    with pytest.raises(ValueError):
        apply_hop((1, 0), 1, 1)


def test_hop_round_trip_amplitude_product():
    # forward then reverse hop returns the original state; the amplitude
    # product is n_src * (n_dest + 1) of the original state
    for state in [(2, 0), (1, 1), (3, 1), (1, 2)]:
        forward = apply_hop(state, 1, 0)
        assert forward is not None
        mid, amp_f = forward
        back, amp_b = apply_hop(mid, 0, 1)
        assert back == state
        assert amp_f * amp_b == pytest.approx(state[0] * (state[1] + 1), rel=1e-15)


def test_hop_pattern_matches_apply_hop():
    basis = enumerate_basis(4, 2)
    for dest, src in [(0, 1), (1, 0), (2, 3), (3, 2), (1, 2)]:
        rows, cols, amps = basis.hop_pattern(dest, src)
        seen = {}
        for col, state in enumerate(basis.states):
            hop = apply_hop(state, dest, src)
            if hop is not None:
                seen[(basis.index[hop[0]], col)] = hop[1]
        assert {(r, c): a for r, c, a in zip(rows, cols, amps)} == seen


def test_hop_pattern_rejects_bad_sites():
    basis = enumerate_basis(2, 1)
    with pytest.raises(ValueError):
        basis.hop_pattern(0, 0)
    with pytest.raises(ValueError):
        basis.hop_pattern(0, 5)


def test_number_diagonal_double_occupancy():
    e, g = 1.7, 0.9
    assert number_diagonal((2, 0, 0, 0), (e, 0, 0, 0), g) == pytest.approx(2 * e + g)


def test_number_diagonal_no_interaction_for_singles():
    a, b, c, d = 0.3, -1.1, 2.2, 5.0
    assert number_diagonal((1, 0, 1, 0), (a, b, c, d), 7.7) == pytest.approx(a + c)


def test_number_diagonal_two_singly_occupied_sites():
    assert number_diagonal((1, 1), (0.0, 0.0), 3.3) == 0.0


def test_number_diagonal_length_mismatch():
    with pytest.raises(ValueError):
        number_diagonal((1, 0), (0.0,), 1.0)


def test_occupations_and_pair_counts_arrays():
    basis = enumerate_basis(3, 2)
    assert basis.occupations.shape == (6, 3)
    np.testing.assert_array_equal(basis.occupations.sum(axis=1), 2)
    np.testing.assert_array_equal(
        basis.pair_counts,
        [sum(n * (n - 1) for n in s) for s in basis.states],
    )

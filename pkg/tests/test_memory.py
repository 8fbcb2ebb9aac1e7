"""QND pass maps, rotations, and the write/read protocol."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from qmemcell import (
    DecoherenceBudget,
    apply_symplectic,
    atomic_basis_change,
    collective_kappa,
    common_weak_rotation,
    coupling_g,
    default_scenario,
    differential_rotation,
    displace,
    mean_fidelity,
    memory_vacuum,
    qnd_transform,
    run_read,
    run_write,
    scenario_with,
    vacuum_state,
)
from qmemcell.gaussian import (
    ATOM_1,
    ATOM_2,
    ATOM_MINUS,
    ATOM_PLUS,
    BASIS_CLASS,
    LIGHT_C,
    LIGHT_S,
    POLICY_SAMPLE,
    QUAD_P,
    QUAD_X,
    symplectic_form,
)
from qmemcell.memory import (
    READ_DECODE_C,
    READ_DECODE_S,
    VARIANT_BOTH_CLASSES,
    VARIANT_CLASS_1,
    VARIANT_CLASS_2,
    WRITE_DECODE_C,
    WRITE_DECODE_S,
    atomic_basis_matrix,
)

CANONICAL_FID = 2.0 / math.sqrt(6.0)


# ---------------------------------------------------------------------------
# microscopic couplings


def test_coupling_g_ladder_weights():
    base = dict(f=4, field_squared=1.0, dipole_squared=1.0, detuning=1.0)
    edge = coupling_g(-4, **base)
    center = coupling_g(0, **base)
    assert edge / center == pytest.approx(math.sqrt(8.0 / 20.0), rel=1e-12)
    # the ladder is symmetric about m = -1/2
    assert coupling_g(-3, **base) == pytest.approx(coupling_g(2, **base), rel=1e-12)
    with pytest.raises(ValueError):
        coupling_g(4, **base)
    with pytest.raises(ValueError):
        coupling_g(-5, **base)
    with pytest.raises(ValueError):
        coupling_g(0, 4, 1.0, 1.0, 0.0)


def test_collective_kappa_frozen():
    coupling = collective_kappa(default_scenario())
    assert coupling.kappa_per_s == pytest.approx(-1077.6744450289114, rel=1e-12)
    assert coupling.kappa_tau == pytest.approx(-1.0776744450289114, rel=1e-12)
    assert coupling.k_eff == pytest.approx(-1.524061815982785, rel=1e-12)
    assert coupling.k_eff == pytest.approx(math.sqrt(2.0) * coupling.kappa_tau, rel=1e-12)
    assert len(coupling.g_m) == 8


def test_collective_kappa_sign_follows_detuning():
    red = collective_kappa(scenario_with(default_scenario(), "probe_detuning_hz", -7.0e8))
    assert red.k_eff == pytest.approx(1.524061815982785, rel=1e-12)


def test_collective_kappa_scaling():
    cfg = default_scenario()
    base = collective_kappa(cfg).kappa_per_s
    quadrupled = scenario_with(cfg, "atom_number", 4.0e12)
    assert collective_kappa(quadrupled).kappa_per_s == pytest.approx(2.0 * base, rel=1e-12)


# ---------------------------------------------------------------------------
# pass interaction maps


def _expected_two_class(k):
    s = np.eye(8)
    s[0, 4] = k    # X_c picks up k X_plus
    s[5, 1] = -k   # P_plus picks up -k P_c
    s[3, 7] = -k   # P_s picks up -k P_minus
    s[6, 2] = k    # X_minus picks up k X_s
    return s


def test_two_class_exact_matrix():
    k = 0.83
    assert np.array_equal(qnd_transform(k).matrix, _expected_two_class(k))


def test_two_class_generator_nilpotent_index_two():
    k = 1.3
    h = np.zeros((8, 8))
    h[1, 4] = h[4, 1] = k
    h[2, 7] = h[7, 2] = k
    gen = symplectic_form(4) @ h
    assert np.array_equal(gen @ gen, np.zeros((8, 8)))
    assert np.allclose(qnd_transform(k).matrix, expm(gen), atol=1e-12)


def test_single_class_generator_nilpotent_index_three():
    k = 1.0
    h = np.zeros((8, 8))
    h[1, 4] = h[4, 1] = k
    h[2, 5] = h[5, 2] = k
    gen = symplectic_form(4) @ h
    assert np.any(gen @ gen)
    assert np.array_equal(gen @ gen @ gen, np.zeros((8, 8)))
    expected = np.eye(8) + gen + gen @ gen / 2.0
    assert np.allclose(qnd_transform(k, VARIANT_CLASS_1).matrix, expected, atol=1e-15)
    assert np.allclose(qnd_transform(k, VARIANT_CLASS_1).matrix, expm(gen), atol=1e-12)


def test_unknown_variant_rejected():
    with pytest.raises(ValueError, match="variant"):
        qnd_transform(1.0, "three_class")


def test_two_class_leaves_cross_sideband_clean():
    state = apply_symplectic(memory_vacuum(), qnd_transform(1.0))
    cross = state.cross_block(LIGHT_C, LIGHT_S)
    assert np.max(np.abs(cross)) < 1e-12


def test_single_class_mixes_sidebands():
    for variant, sign in ((VARIANT_CLASS_1, 1.0), (VARIANT_CLASS_2, -1.0)):
        state = apply_symplectic(memory_vacuum(BASIS_CLASS),
                                 qnd_transform(1.0, variant))
        cross = state.cross_block(LIGHT_C, LIGHT_S)
        # second-order term k^2/2 of the pass correlates the sidebands
        assert cross[0, 0] == pytest.approx(sign * 0.25, rel=1e-12)
        assert abs(cross[0, 0]) > 1e-3


def test_both_classes_equals_collective_form():
    k = 0.77
    basis = atomic_basis_matrix()
    conjugated = basis @ qnd_transform(math.sqrt(2.0) * k) @ basis
    both = qnd_transform(k, VARIANT_BOTH_CLASSES)
    assert np.allclose(both.matrix, conjugated.matrix, atol=1e-12)
    # the two single-class generators commute, so the passes factorize
    product = qnd_transform(k, VARIANT_CLASS_1) @ qnd_transform(k, VARIANT_CLASS_2)
    assert np.allclose(both.matrix, product.matrix, atol=1e-12)


# ---------------------------------------------------------------------------
# basis change and rotations


def test_atomic_basis_matrix_self_inverse():
    basis = atomic_basis_matrix()
    assert np.allclose((basis @ basis).matrix, np.eye(8), atol=1e-15)


def test_atomic_basis_change_round_trip():
    state = displace(memory_vacuum(), ATOM_PLUS, 2.0, 0.0)
    swapped = atomic_basis_change(state)
    assert swapped.basis == BASIS_CLASS
    assert swapped.modes[2:] == (ATOM_1, ATOM_2)
    # the symmetric displacement splits evenly over the two classes
    assert swapped.mean(ATOM_1, QUAD_X) == pytest.approx(math.sqrt(2.0), rel=1e-12)
    assert swapped.mean(ATOM_2, QUAD_X) == pytest.approx(math.sqrt(2.0), rel=1e-12)
    back = atomic_basis_change(swapped)
    assert back.modes == state.modes
    assert np.allclose(back.means, state.means, atol=1e-12)
    with pytest.raises(ValueError, match="layout"):
        atomic_basis_change(vacuum_state((LIGHT_C, LIGHT_S)))


def test_common_weak_rotation_quarter_turn_swaps_modes():
    expected = np.eye(8)
    expected[4:8, 4:8] = 0.0
    expected[4, 7] = 1.0    # X_plus <- P_minus
    expected[5, 6] = -1.0   # P_plus <- -X_minus
    expected[6, 5] = 1.0    # X_minus <- P_plus
    expected[7, 4] = -1.0   # P_minus <- -X_plus
    quarter = common_weak_rotation(math.pi / 2.0)
    assert np.allclose(quarter.matrix, expected, atol=1e-12)
    # applied twice it returns each quadrature to its own mode, negated
    twice = quarter @ quarter
    expected_sq = np.eye(8)
    expected_sq[4:8, 4:8] = -np.eye(4)
    assert np.allclose(twice.matrix, expected_sq, atol=1e-12)


def test_common_weak_rotation_small_angle():
    theta = 1e-3
    s = common_weak_rotation(theta).matrix
    assert s[4, 4] == pytest.approx(math.cos(theta), rel=1e-12)
    assert s[4, 7] == pytest.approx(math.sin(theta), rel=1e-9)


def test_differential_rotation_canonical_is_per_mode():
    expected = np.eye(8)
    quarter = np.array([[0.0, 1.0], [-1.0, 0.0]])
    expected[4:6, 4:6] = quarter
    expected[6:8, 6:8] = quarter
    s = differential_rotation(math.pi / 2.0, -math.pi / 2.0)
    assert np.allclose(s.matrix, expected, atol=1e-12)


def test_differential_rotation_light_untouched():
    s = differential_rotation(0.4, 1.1).matrix
    assert np.array_equal(s[0:4, 0:4], np.eye(4))
    assert np.max(np.abs(s[0:4, 4:8])) == 0.0
    assert np.max(np.abs(s[4:8, 0:4])) == 0.0


def test_differential_rotation_opposite_pair_not_block_diagonal():
    # a pi phase difference alone does not decouple the collective modes
    s = differential_rotation(0.3, 0.3 - math.pi).matrix
    off = max(np.max(np.abs(s[4:6, 6:8])), np.max(np.abs(s[6:8, 4:6])))
    assert off > 1e-3


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=-6.0, max_value=6.0),
       st.integers(min_value=-2, max_value=2))
def test_differential_rotation_block_diagonal_family(phi, wraps):
    # block diagonal exactly when the second angle is -phi mod 2 pi
    s = differential_rotation(phi, -phi + 2.0 * math.pi * wraps).matrix
    off = max(np.max(np.abs(s[4:6, 6:8])), np.max(np.abs(s[6:8, 4:6])))
    assert off < 1e-9


@settings(max_examples=60, deadline=None)
@given(st.floats(min_value=-6.0, max_value=6.0),
       st.floats(min_value=-6.0, max_value=6.0))
def test_rotations_are_symplectic(phi_1, phi_2):
    assert differential_rotation(phi_1, phi_2).symplectic_residual() < 1e-10
    assert common_weak_rotation(phi_1).symplectic_residual() < 1e-10


# ---------------------------------------------------------------------------
# ensemble fidelity


def test_mean_fidelity_of_exact_map():
    transfer = np.diag([-1.0, -1.0, 1.0, 1.0])
    cov = np.diag([0.5, 1.0, 1.0, 0.5])
    fid = mean_fidelity(transfer, cov, WRITE_DECODE_C, WRITE_DECODE_S)
    assert fid == pytest.approx(CANONICAL_FID, rel=1e-12)


def test_mean_fidelity_of_identity_channel():
    fid = mean_fidelity(np.eye(4), 0.5 * np.eye(4), np.eye(2), np.eye(2))
    assert fid == pytest.approx(1.0, rel=1e-12)


def test_mean_fidelity_penalizes_miscalibration():
    cov = np.diag([0.5, 1.0, 1.0, 0.5])
    exact = mean_fidelity(np.diag([-1.0, -1.0, 1.0, 1.0]), cov,
                          WRITE_DECODE_C, WRITE_DECODE_S)
    off = mean_fidelity(np.diag([-1.02, -1.02, 1.02, 1.02]), cov,
                        WRITE_DECODE_C, WRITE_DECODE_S)
    assert off < exact


def test_mean_fidelity_validation():
    with pytest.raises(ValueError):
        mean_fidelity(np.eye(3), np.eye(4), np.eye(2), np.eye(2))
    with pytest.raises(ValueError):
        mean_fidelity(np.eye(4), np.eye(4), np.eye(2), np.eye(2), n_phases=0)


# ---------------------------------------------------------------------------
# write protocol


def test_write_canonical_transfer_and_noise():
    result = run_write(1.0)
    assert np.allclose(result.transfer_map, np.diag([-1.0, -1.0, 1.0, 1.0]),
                       atol=1e-12)
    assert np.allclose(result.added_noise, [0.0, 0.5, 0.5, 0.0], atol=1e-12)
    assert result.mean_fidelity == pytest.approx(CANONICAL_FID, rel=1e-12)
    assert set(result.measurements) == {"m_c", "m_s"}


def test_write_stores_the_input_means():
    state = displace(memory_vacuum(), LIGHT_C, 1.2, -0.4)
    state = displace(state, LIGHT_S, 0.9, 2.1)
    result = run_write(1.0, state=state)
    out = result.state
    assert out.mean(ATOM_PLUS, QUAD_X) == pytest.approx(-1.2, rel=1e-12)
    assert out.mean(ATOM_PLUS, QUAD_P) == pytest.approx(0.4, rel=1e-12)
    assert out.mean(ATOM_MINUS, QUAD_X) == pytest.approx(0.9, rel=1e-12)
    assert out.mean(ATOM_MINUS, QUAD_P) == pytest.approx(2.1, rel=1e-12)
    # the light register leaves the step empty
    assert np.allclose(out.means[0:4], 0.0, atol=1e-12)
    assert np.allclose(out.cov[0:4, 0:4], 0.5 * np.eye(4), atol=1e-12)


def test_write_stored_variances():
    out = run_write(1.0).state
    assert out.variance(ATOM_PLUS, QUAD_X) == pytest.approx(0.5, rel=1e-12)
    assert out.variance(ATOM_PLUS, QUAD_P) == pytest.approx(1.0, rel=1e-12)
    assert out.variance(ATOM_MINUS, QUAD_X) == pytest.approx(1.0, rel=1e-12)
    assert out.variance(ATOM_MINUS, QUAD_P) == pytest.approx(0.5, rel=1e-12)


def test_write_transfer_at_general_coupling():
    k = 1.7
    result = run_write(k)
    expected = np.diag([-1.0 / k, -k, k, 1.0 / k])
    assert np.allclose(result.transfer_map, expected, atol=1e-12)


def test_write_explicit_gain():
    result = run_write(2.0, gain=-0.5)
    assert result.transfer_map[0, 0] == pytest.approx(-0.5, rel=1e-12)
    # unity-gain default picks -1/k_eff
    default = run_write(2.0)
    assert default.transfer_map[0, 0] == pytest.approx(-0.5, rel=1e-12)


def test_write_sample_policy():
    state = displace(memory_vacuum(), LIGHT_C, 3.0, 0.0)
    mean_run = run_write(1.0, state=state)
    a = run_write(1.0, state=state, policy=POLICY_SAMPLE, seed=5)
    b = run_write(1.0, state=state, policy=POLICY_SAMPLE, seed=5)
    c = run_write(1.0, state=state, policy=POLICY_SAMPLE, seed=6)
    assert a.measurements == b.measurements
    assert np.array_equal(a.state.means, b.state.means)
    assert a.measurements != c.measurements
    # outcome randomness moves the means, never the ensemble covariance
    assert np.allclose(a.state.cov, mean_run.state.cov, atol=1e-12)
    with pytest.raises(ValueError, match="seed"):
        run_write(1.0, policy=POLICY_SAMPLE)


def test_write_validation():
    with pytest.raises(ValueError):
        run_write(0.0)
    with pytest.raises(ValueError, match="layout"):
        run_write(1.0, state=vacuum_state((LIGHT_C, LIGHT_S)))


def test_write_fidelity_degrades_with_spin_exchange():
    fids = [run_write(1.0, budget=DecoherenceBudget(eta=eta)).mean_fidelity
            for eta in (0.0, 0.0065, 0.05)]
    assert fids[0] > fids[1] > fids[2]


def test_write_loss_excess_doubles_with_crossings():
    for loss in (0.01, 0.02):
        two = run_write(1.0, budget=DecoherenceBudget(boundary_loss=loss,
                                                      n_boundaries=2))
        four = run_write(1.0, budget=DecoherenceBudget(boundary_loss=loss,
                                                       n_boundaries=4))
        # the clean quadratures pick up excess noise only through the loss
        ratio = four.added_noise[0] / two.added_noise[0]
        assert 1.9 < ratio < 2.0


# ---------------------------------------------------------------------------
# read protocol and the full cycle


def test_read_canonical_transfer():
    result = run_read(1.0)
    assert np.allclose(result.transfer_map, np.diag([1.0, 1.0, -1.0, -1.0]),
                       atol=1e-12)
    assert set(result.measurements) == {"m_plus", "m_minus"}


def test_read_of_vacuum_memory_bounded_noise():
    result = run_read(1.0)
    out = result.state
    for mode in (LIGHT_C, LIGHT_S):
        for quad in (QUAD_X, QUAD_P):
            assert out.variance(mode, quad) <= 1.5 + 1e-9
    assert np.allclose(out.means, 0.0, atol=1e-12)


def test_full_cycle_returns_negated_input():
    state = displace(memory_vacuum(), LIGHT_C, 1.7, -0.6)
    state = displace(state, LIGHT_S, -0.8, 1.1)
    written = run_write(1.0, state=state)
    read = run_read(1.0, state=written.state)
    out = read.state
    assert out.mean(LIGHT_C, QUAD_X) == pytest.approx(-1.7, rel=1e-12)
    assert out.mean(LIGHT_C, QUAD_P) == pytest.approx(0.6, rel=1e-12)
    assert out.mean(LIGHT_S, QUAD_X) == pytest.approx(0.8, rel=1e-12)
    assert out.mean(LIGHT_S, QUAD_P) == pytest.approx(-1.1, rel=1e-12)


def test_full_cycle_noise_budget():
    written = run_write(1.0)
    read = run_read(1.0, state=written.state)
    out = read.state
    variances = [out.variance(LIGHT_C, QUAD_X), out.variance(LIGHT_C, QUAD_P),
                 out.variance(LIGHT_S, QUAD_X), out.variance(LIGHT_S, QUAD_P)]
    assert variances == pytest.approx([0.5, 1.5, 1.5, 0.5], rel=1e-12)
    # each quadrature stays within two vacuum units of added noise
    for v in variances:
        assert v - 0.5 <= 1.0 + 1e-12


def test_read_validation():
    with pytest.raises(ValueError):
        run_read(0.0)
    with pytest.raises(ValueError, match="seed"):
        run_read(1.0, policy=POLICY_SAMPLE)

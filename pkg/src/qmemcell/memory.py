"""Pass interactions and the write/read protocol of the memory cell.

The light pulse carries two sideband modes (cosine and sine components
at the level-splitting frequency); the atoms carry two collective
oscillators built from the two pumped edge classes.  A pass through the
cell applies a bilinear interaction between them; measurement of the
transmitted light plus feedback onto the atoms completes a write, a
second pass with the roles of the quadratures exchanged completes a
read.

All protocol maps act on four-mode :class:`~qmemcell.gaussian.GaussianState`
registers in the (light_c, light_s, atom_plus, atom_minus) layout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import (CODATA, PhysicalConstants, dipole_moment_squared,
                        vacuum_field_squared)
from .decoherence import (DecoherenceBudget, apply_boundary_losses,
                          apply_scattering, apply_spin_exchange)
from .gaussian import (ATOM_MINUS, ATOM_PLUS, BASIS_CLASS, BASIS_PLUS_MINUS,
                       LIGHT_C, LIGHT_S, MEMORY_MODES_CLASS,
                       MEMORY_MODES_PLUS_MINUS, POLICY_MEAN, POLICY_SAMPLE,
                       QUAD_P, QUAD_X, GaussianState, SymplecticTransform,
                       apply_symplectic, beamsplitter_loss, displace,
                       hamiltonian_to_symplectic, memory_vacuum, rotate_mode,
                       rotation_2x2)
from .scenario import ScenarioConfig

#: pass-interaction variants
VARIANT_TWO_CLASS = "two_class"
VARIANT_CLASS_1 = "class1"
VARIANT_CLASS_2 = "class2"
VARIANT_BOTH_CLASSES = "both_classes"

#: ideal decode matrices: stored block = D @ input block for a write,
#: output light block = D @ stored block for a read
WRITE_DECODE_C = -np.eye(2)
WRITE_DECODE_S = np.eye(2)
READ_DECODE_C = np.eye(2)
READ_DECODE_S = -np.eye(2)

FIDELITY_AMPLITUDE = 20.0
FIDELITY_PHASES = 256

# quadrature index blocks of the four-mode layout
_LIGHT_SLICE = slice(0, 4)
_ATOM_SLICE = slice(4, 8)


# ---------------------------------------------------------------------------
# microscopic couplings


@dataclass(frozen=True)
class CouplingSet:
    """Single-atom and collective coupling figures for one operating point.

    g_m          single-atom Raman rates (1/s) for the m -> m+1 ladder
    kappa_per_s  collective two-mode coupling rate (1/s), signed like
                 1/detuning
    kappa_tau    dimensionless integrated coupling
    k_eff        pass-interaction strength entering the protocol maps
    """

    g_m: dict[int, float]
    kappa_per_s: float
    kappa_tau: float
    k_eff: float


def coupling_g(m: int, f: int, field_squared: float, dipole_squared: float,
               detuning: float, constants: PhysicalConstants = CODATA) -> float:
    """Single-atom coupling of the m <-> m+1 coherence to the sidebands."""
    if not -f <= m <= f - 1:
        raise ValueError(f"m must lie in [{-f}, {f - 1}] for F = {f}, got {m}")
    if detuning == 0.0:
        raise ValueError("detuning must be nonzero")
    strength = math.sqrt(f * (f + 1) - m * (m + 1))
    return (dipole_squared * field_squared * strength
            / (48.0 * constants.hbar**2 * detuning))


def collective_kappa(config: ScenarioConfig,
                     constants: PhysicalConstants = CODATA) -> CouplingSet:
    """Collective coupling of the configured cell on the probe line.

    The probe runs on the stronger line; its vacuum field is set by the
    beam area and the pulse duration.  kappa carries the sign of
    -1/detuning, so red and blue probe detunings give opposite k_eff.
    """
    sp = config.species
    e0_sq = vacuum_field_squared(config.beam_area, config.pulse_duration,
                                 sp.lambda_d2, constants)
    mu_sq = dipole_moment_squared(sp.gamma_d2, sp.lambda_d2, constants)
    f = sp.f_ground
    g_m = {m: coupling_g(m, f, e0_sq, mu_sq, config.probe_detuning, constants)
           for m in range(-f, f)}
    kappa = -(e0_sq * mu_sq * math.sqrt(config.photon_number * config.atom_number)
              / (12.0 * constants.hbar**2 * config.probe_detuning))
    kappa_tau = kappa * config.pulse_duration
    return CouplingSet(g_m=g_m, kappa_per_s=kappa, kappa_tau=kappa_tau,
                       k_eff=math.sqrt(2.0) * kappa_tau)


# ---------------------------------------------------------------------------
# pass interactions


def qnd_transform(k_eff: float, variant: str = VARIANT_TWO_CLASS) -> SymplecticTransform:
    """Symplectic map of one pass through the cell.

    two_class    both edge classes driven, written in the (+, -)
                 collective basis: X_c picks up k X_plus while P_plus
                 picks up -k P_c, and X_s / P_minus couple the same way
                 with the roles of X and P exchanged.
    class1/2     a single driven class, written in the class basis; the
                 generator is then nilpotent of index 3 and the pass
                 mixes the two sidebands at second order in k.
    both_classes both classes in the class basis; equals the two_class
                 map at sqrt(2) larger k conjugated by the basis change.
    """
    h = np.zeros((8, 8))

    def couple(qa: int, qb: int, strength: float):
        h[qa, qb] += strength
        h[qb, qa] += strength

    # quadratures: 0 X_c, 1 P_c, 2 X_s, 3 P_s, 4/5 first atomic mode,
    # 6/7 second atomic mode
    if variant == VARIANT_TWO_CLASS:
        couple(1, 4, k_eff)   # P_c with X_plus
        couple(2, 7, k_eff)   # X_s with P_minus
    elif variant == VARIANT_CLASS_1:
        couple(1, 4, k_eff)   # P_c with X_1
        couple(2, 5, k_eff)   # X_s with P_1
    elif variant == VARIANT_CLASS_2:
        couple(1, 6, k_eff)   # P_c with X_2
        couple(2, 7, -k_eff)  # X_s with P_2, opposite orientation
    elif variant == VARIANT_BOTH_CLASSES:
        couple(1, 4, k_eff)
        couple(2, 5, k_eff)
        couple(1, 6, k_eff)
        couple(2, 7, -k_eff)
    else:
        raise ValueError(f"unknown interaction variant {variant!r}")
    return hamiltonian_to_symplectic(h)


def atomic_basis_matrix() -> SymplecticTransform:
    """50:50 combination of the two atomic modes; its own inverse."""
    s = np.eye(8)
    r = 1.0 / math.sqrt(2.0)
    for q in (0, 1):
        s[4 + q, 4 + q] = r
        s[4 + q, 6 + q] = r
        s[6 + q, 4 + q] = r
        s[6 + q, 6 + q] = -r
    return SymplecticTransform(s)


def atomic_basis_change(state: GaussianState) -> GaussianState:
    """Switch the atomic modes between the class and the (+, -) basis."""
    if state.modes == MEMORY_MODES_PLUS_MINUS:
        new_modes, new_basis = MEMORY_MODES_CLASS, BASIS_CLASS
    elif state.modes == MEMORY_MODES_CLASS:
        new_modes, new_basis = MEMORY_MODES_PLUS_MINUS, BASIS_PLUS_MINUS
    else:
        raise ValueError(f"state does not use the memory layout: {state.modes}")
    mixed = apply_symplectic(state, atomic_basis_matrix())
    return GaussianState(modes=new_modes, basis=new_basis,
                         means=mixed.means, cov=mixed.cov)


def differential_rotation(phi_1: float, phi_2: float) -> SymplecticTransform:
    """Atomic rotation by phi_1 (first class) and phi_2 (second class).

    The two classes precess in opposite senses, so in the class basis
    this is R(phi_1) on one mode and R(-phi_2) on the other; the
    returned map is its (+, -) basis form.  It is block diagonal in the
    collective modes exactly when phi_2 = -phi_1 (mod 2 pi).
    """
    s_class = np.eye(8)
    s_class[4:6, 4:6] = rotation_2x2(phi_1)
    s_class[6:8, 6:8] = rotation_2x2(-phi_2)
    basis = atomic_basis_matrix()
    return basis @ SymplecticTransform(s_class) @ basis


def common_weak_rotation(theta: float) -> SymplecticTransform:
    """Both classes precess by the same angle theta (opposite senses).

    In the (+, -) basis the collective modes shrink by cos(theta) and
    cross-feed through sin(theta); a quarter turn swaps them entirely,
    sending P_plus to X_minus and X_plus to -P_minus.
    """
    return differential_rotation(theta, theta)


# ---------------------------------------------------------------------------
# write / read protocol


@dataclass(frozen=True)
class ProtocolResult:
    """Outcome of one protocol run.

    state         final four-mode state
    transfer_map  4x4 matrix from input means to stored (write) or
                  retrieved (read) means
    added_noise   per-quadrature excess variance of the output over the
                  transmitted vacuum level
    mean_fidelity coherent-state ensemble fidelity of the map
    measurements  homodyne outcomes fed back during the run
    budget        decoherence budget the run was evaluated with
    """

    state: GaussianState
    transfer_map: np.ndarray
    added_noise: np.ndarray
    mean_fidelity: float
    measurements: dict[str, float]
    budget: DecoherenceBudget


def _require_memory_state(state: GaussianState):
    if state.modes != MEMORY_MODES_PLUS_MINUS or state.basis != BASIS_PLUS_MINUS:
        raise ValueError(
            "protocol states must use the (light_c, light_s, atom_plus, "
            f"atom_minus) layout in the collective basis, got {state.modes} "
            f"in basis {state.basis!r}")


def _measure_feed(state: GaussianState, measured_mode: str, measured_quad: str,
                  target_mode: str, target_quad: str, gain: float,
                  policy: str, rng: np.random.Generator | None
                  ) -> tuple[GaussianState, float]:
    """Homodyne one quadrature, feed the outcome onto another mode, and
    replace the consumed measured mode by fresh vacuum.

    The covariance update is the unconditional one: the feedforward map
    r -> r + gain * r_measured keeps the outcome spread inside the
    driven quadrature, then the measured mode's rows are reset (the
    pulse, or the spent collective coherence, is gone).  Under the mean
    policy the outcome is the current mean; under the sample policy it
    is drawn from the marginal.
    """
    q_meas = state.quad_index(measured_mode, measured_quad)
    q_tgt = state.quad_index(target_mode, target_quad)
    variance = float(state.cov[q_meas, q_meas])
    if policy == POLICY_MEAN:
        outcome = float(state.means[q_meas])
    elif policy == POLICY_SAMPLE:
        if rng is None:
            raise ValueError("policy 'sample' requires a seed")
        outcome = float(rng.normal(state.means[q_meas],
                                   math.sqrt(max(variance, 0.0))))
    else:
        raise ValueError(f"unknown outcome policy {policy!r}")
    feed = np.eye(2 * state.n_modes)
    feed[q_tgt, q_meas] += gain
    means = state.means.copy()
    means[q_tgt] += gain * outcome
    cov = feed @ state.cov @ feed.T
    j = state.mode_index(measured_mode)
    sl = slice(2 * j, 2 * j + 2)
    means[sl] = 0.0
    cov[sl, :] = 0.0
    cov[:, sl] = 0.0
    cov[2 * j, 2 * j] = 0.5
    cov[2 * j + 1, 2 * j + 1] = 0.5
    new_state = GaussianState(modes=state.modes, basis=state.basis,
                              means=means, cov=cov)
    return new_state, outcome


def _write_pipeline(state: GaussianState, k_eff: float, gain: float,
                    budget: DecoherenceBudget, policy: str,
                    rng: np.random.Generator | None
                    ) -> tuple[GaussianState, dict[str, float]]:
    n_entry = budget.n_boundaries // 2
    n_exit = budget.n_boundaries - n_entry
    state = apply_boundary_losses(state, budget.boundary_loss, n_entry)
    state = apply_symplectic(state, qnd_transform(k_eff, VARIANT_TWO_CLASS))
    state = apply_boundary_losses(state, budget.boundary_loss, n_exit)
    state, m_c = _measure_feed(state, LIGHT_C, QUAD_X, ATOM_PLUS, QUAD_X,
                               gain, policy, rng)
    state, m_s = _measure_feed(state, LIGHT_S, QUAD_P, ATOM_MINUS, QUAD_P,
                               -gain, policy, rng)
    state = apply_spin_exchange(state, budget.eta)
    state = apply_scattering(state, budget.n_phot)
    return state, {"m_c": m_c, "m_s": m_s}


def _read_pipeline(state: GaussianState, k_eff: float, gain: float,
                   budget: DecoherenceBudget, policy: str,
                   rng: np.random.Generator | None
                   ) -> tuple[GaussianState, dict[str, float]]:
    n_exit = budget.n_boundaries - budget.n_boundaries // 2
    state = apply_spin_exchange(state, budget.eta)
    state = apply_scattering(state, budget.n_phot)
    # retrieval uses a fresh pulse; whatever light the register held is gone
    state = beamsplitter_loss(state, LIGHT_C, 0.0)
    state = beamsplitter_loss(state, LIGHT_S, 0.0)
    state = apply_symplectic(state, differential_rotation(math.pi / 2.0,
                                                          -math.pi / 2.0))
    state = apply_symplectic(state, qnd_transform(k_eff, VARIANT_TWO_CLASS))
    state, m_plus = _measure_feed(state, ATOM_PLUS, QUAD_P, LIGHT_C, QUAD_P,
                                  -gain, policy, rng)
    state, m_minus = _measure_feed(state, ATOM_MINUS, QUAD_X, LIGHT_S, QUAD_X,
                                   gain, policy, rng)
    state = apply_boundary_losses(state, budget.boundary_loss, n_exit)
    state = rotate_mode(state, LIGHT_C, -math.pi / 2.0)
    state = rotate_mode(state, LIGHT_S, -math.pi / 2.0)
    return state, {"m_plus": m_plus, "m_minus": m_minus}


def mean_fidelity(transfer_map: np.ndarray, output_cov: np.ndarray,
                  decode_c: np.ndarray, decode_s: np.ndarray,
                  amplitude: float = FIDELITY_AMPLITUDE,
                  n_phases: int = FIDELITY_PHASES) -> float:
    """Coherent-state ensemble fidelity of a stored or retrieved map.

    Inputs of fixed quadrature amplitude and uniformly spread phase are
    pushed through the 4x4 mean transfer map; the matching output block
    is decoded with the ideal matrix of the protocol and compared to the
    input against the output covariance.  The two channels are averaged.
    """
    if n_phases < 1:
        raise ValueError(f"n_phases must be positive, got {n_phases}")
    transfer_map = np.asarray(transfer_map, dtype=float)
    output_cov = np.asarray(output_cov, dtype=float)
    if transfer_map.shape != (4, 4) or output_cov.shape != (4, 4):
        raise ValueError("transfer map and output covariance must be 4x4")
    channels = ((slice(0, 2), decode_c), (slice(2, 4), decode_s))
    phases = 2.0 * math.pi * np.arange(n_phases) / n_phases
    total = 0.0
    for block, decode in channels:
        d_inv = np.linalg.inv(decode)
        sigma = d_inv @ output_cov[block, block] @ d_inv.T + 0.5 * np.eye(2)
        sigma_inv = np.linalg.inv(sigma)
        norm = 1.0 / math.sqrt(np.linalg.det(sigma))
        # decoded-minus-ideal response to a unit input in this channel
        response = d_inv @ transfer_map[block, block] - np.eye(2)
        for phi in phases:
            amp = amplitude * np.array([math.cos(phi), math.sin(phi)])
            d = response @ amp
            total += norm * math.exp(-0.5 * float(d @ sigma_inv @ d))
    return total / (2.0 * n_phases)


def _characterize(pipeline, k_eff: float, gain: float,
                  budget: DecoherenceBudget, in_block: slice, out_block: slice,
                  decode_c: np.ndarray, decode_s: np.ndarray
                  ) -> tuple[np.ndarray, np.ndarray, float]:
    """Transfer map, added noise and fidelity of one protocol pipeline.

    The mean maps are affine with zero offset, so four probe runs with
    unit input displacements give the exact transfer matrix; a fifth run
    from vacuum gives the output covariance.
    """
    labels_and_quads = [(LIGHT_C, QUAD_X), (LIGHT_C, QUAD_P),
                        (LIGHT_S, QUAD_X), (LIGHT_S, QUAD_P),
                        (ATOM_PLUS, QUAD_X), (ATOM_PLUS, QUAD_P),
                        (ATOM_MINUS, QUAD_X), (ATOM_MINUS, QUAD_P)]
    transfer = np.zeros((4, 4))
    for j in range(4):
        label, quad = labels_and_quads[in_block.start + j]
        dx, dp = (1.0, 0.0) if quad == QUAD_X else (0.0, 1.0)
        probe = displace(memory_vacuum(), label, dx, dp)
        out, _ = pipeline(probe, k_eff, gain, budget, POLICY_MEAN, None)
        transfer[:, j] = out.means[out_block]
    noise_run, _ = pipeline(memory_vacuum(), k_eff, gain, budget,
                            POLICY_MEAN, None)
    out_cov = noise_run.cov[out_block, out_block]
    transmitted = 0.5 * np.sum(transfer**2, axis=1)
    added = np.diag(out_cov) - transmitted
    fidelity = mean_fidelity(transfer, out_cov, decode_c, decode_s)
    return transfer, added, fidelity


def run_write(k_eff: float, state: GaussianState | None = None,
              gain: float | None = None,
              budget: DecoherenceBudget | None = None,
              policy: str = POLICY_MEAN, seed: int | None = None) -> ProtocolResult:
    """Store the light sidebands of ``state`` in the atomic modes.

    One pass, homodyne detection of the transmitted X_c and P_s, and
    feedback of the outcomes onto X_plus and P_minus.  The default gain
    -1/k_eff makes the stored means reproduce the input exactly; at
    k_eff = 1 each channel then adds half a vacuum unit to one stored
    quadrature and none to the other.
    """
    if k_eff == 0.0:
        raise ValueError("k_eff must be nonzero")
    if state is None:
        state = memory_vacuum()
    _require_memory_state(state)
    if gain is None:
        gain = -1.0 / k_eff
    if budget is None:
        budget = DecoherenceBudget()
    rng = np.random.default_rng(seed) if policy == POLICY_SAMPLE else None
    if policy == POLICY_SAMPLE and seed is None:
        raise ValueError("policy 'sample' requires a seed")
    final, outcomes = _write_pipeline(state, k_eff, gain, budget, policy, rng)
    transfer, added, fidelity = _characterize(
        _write_pipeline, k_eff, gain, budget, _LIGHT_SLICE, _ATOM_SLICE,
        WRITE_DECODE_C, WRITE_DECODE_S)
    return ProtocolResult(state=final, transfer_map=transfer, added_noise=added,
                          mean_fidelity=fidelity, measurements=outcomes,
                          budget=budget)


def run_read(k_eff: float, state: GaussianState | None = None,
             gain: float | None = None,
             budget: DecoherenceBudget | None = None,
             policy: str = POLICY_MEAN, seed: int | None = None) -> ProtocolResult:
    """Map the atomic modes of ``state`` back onto a fresh light pulse.

    The collective modes are rotated a quarter turn, a second pass
    imprints them on the new pulse, homodyne detection of the atomic
    P_plus and X_minus with feedback onto the light closes the loop, and
    a final quarter turn of both sidebands aligns the output so that
    reading a written state returns the input with an overall sign flip.
    """
    if k_eff == 0.0:
        raise ValueError("k_eff must be nonzero")
    if state is None:
        state = memory_vacuum()
    _require_memory_state(state)
    if gain is None:
        gain = -1.0 / k_eff
    if budget is None:
        budget = DecoherenceBudget()
    rng = np.random.default_rng(seed) if policy == POLICY_SAMPLE else None
    if policy == POLICY_SAMPLE and seed is None:
        raise ValueError("policy 'sample' requires a seed")
    final, outcomes = _read_pipeline(state, k_eff, gain, budget, policy, rng)
    transfer, added, fidelity = _characterize(
        _read_pipeline, k_eff, gain, budget, _ATOM_SLICE, _LIGHT_SLICE,
        READ_DECODE_C, READ_DECODE_S)
    return ProtocolResult(state=final, transfer_map=transfer, added_noise=added,
                          mean_fidelity=fidelity, measurements=outcomes,
                          budget=budget)

from itertools import product

import numpy as np
import pytest

from qsshare import bell, statevec
from qsshare.bell import (
    BELL_LABELS,
    BSM_OUTCOMES,
    BellLabel,
    BsmOutcome,
    CORRECTION_I,
    CORRECTION_X,
    PauliCorrection,
    PHI_MINUS,
    PHI_PLUS,
    PSI_MINUS,
    PSI_PLUS,
    SWAP_REFERENCE,
    TELEPORT_REFERENCE,
    decode_classical,
    end_to_end_correction,
    infer_remote_bsm,
    swap_result,
    teleport_correction,
)
from qsshare.protocol import splitting_branch


def random_qubit(rng):
    amps = rng.normal(size=2) + 1j * rng.normal(size=2)
    return statevec.single_qubit(*(amps / np.linalg.norm(amps)))


# ---------------------------------------------------------------------------
# Label plumbing.

def test_label_bit_validation():
    with pytest.raises(ValueError):
        BellLabel(2, 0)
    with pytest.raises(ValueError):
        BsmOutcome(0, -1)
    with pytest.raises(ValueError):
        PauliCorrection(1, 3)
    with pytest.raises(ValueError):
        BellLabel.from_bits("012")


def test_label_round_trips():
    for label in BELL_LABELS:
        assert BellLabel.from_bits(label.bits) == label
        assert label.as_outcome().as_label() == label
    assert [label.symbol for label in BELL_LABELS] == ["Φ+", "Ψ+", "Φ-", "Ψ-"]
    assert [c.symbol for c in bell.PAULI_CORRECTIONS] == ["I", "X", "Z", "ZX"]


def test_correction_composition_is_xor():
    for a, b in product(bell.PAULI_CORRECTIONS, repeat=2):
        composed = a.compose(b)
        assert (composed.z_exp, composed.x_exp) == (a.z_exp ^ b.z_exp, a.x_exp ^ b.x_exp)


# ---------------------------------------------------------------------------
# Teleportation corrections.

def test_generated_teleport_table_matches_reference():
    assert bell.diff_teleport_table() == []


def test_teleport_reference_spot_checks():
    assert teleport_correction(PHI_MINUS, BsmOutcome(1, 1)) == CORRECTION_X
    assert teleport_correction(PHI_PLUS, BsmOutcome(0, 0)) == CORRECTION_I


def test_teleport_oracle_round_trip():
    # For all 16 (channel, outcome) cases, teleporting a random qubit and
    # applying the correction restores the input.
    rng = np.random.default_rng(42)
    qubits = [random_qubit(rng) for _ in range(100)]
    for channel in BELL_LABELS:
        for outcome in BSM_OUTCOMES:
            correction = teleport_correction(channel, outcome)
            for probe in qubits:
                state = statevec.tensor(probe, statevec.prepare_bell(channel))
                prob, post = statevec.bell_project(state, 0, 1, outcome.as_label())
                assert abs(prob - 0.25) < 1e-12
                received = statevec.extract_pure_qubit(post, 2)
                recovered = statevec.apply_pauli(received, 0, correction)
                assert statevec.fidelity(recovered, probe) >= 1 - 1e-12


# ---------------------------------------------------------------------------
# Swapping outcomes.

def test_generated_swap_table_matches_reference():
    assert bell.diff_swap_table() == []


def test_swap_reference_spot_checks():
    assert swap_result(PHI_PLUS, PSI_MINUS, BsmOutcome(0, 0)) == PSI_MINUS
    assert swap_result(PHI_PLUS, PSI_MINUS, BsmOutcome(0, 1)) == PHI_MINUS
    assert swap_result(PHI_PLUS, PSI_MINUS, BsmOutcome(1, 0)) == PSI_PLUS
    assert swap_result(PHI_PLUS, PSI_MINUS, BsmOutcome(1, 1)) == PHI_PLUS


def test_swap_is_bijective_in_outcome():
    for pair_a, pair_b in product(BELL_LABELS, repeat=2):
        images = {swap_result(pair_a, pair_b, outcome) for outcome in BSM_OUTCOMES}
        assert images == set(BELL_LABELS)


def test_infer_remote_bsm_inverts_swap():
    for pair_a, pair_b in product(BELL_LABELS, repeat=2):
        for outcome in BSM_OUTCOMES:
            observed = swap_result(pair_a, pair_b, outcome)
            assert infer_remote_bsm(pair_a, pair_b, observed.as_outcome()) == outcome


def test_infer_identity_row():
    assert infer_remote_bsm(PHI_PLUS, PHI_PLUS, BsmOutcome(0, 0)) == BsmOutcome(0, 0)
    # Observing Phi- over the (Phi+, Psi-) pairs means the remote outcome
    # mapped onto Phi-, i.e. Psi+.
    assert infer_remote_bsm(PHI_PLUS, PSI_MINUS, PHI_MINUS.as_outcome()) == PSI_PLUS.as_outcome()


# ---------------------------------------------------------------------------
# End-to-end correction.

def test_end_to_end_is_the_composition():
    for pair1, pair2 in product(BELL_LABELS, repeat=2):
        for swap in BSM_OUTCOMES:
            for tele in BSM_OUTCOMES:
                expected = teleport_correction(swap_result(pair1, pair2, swap), tele)
                assert end_to_end_correction(pair1, pair2, swap, tele) == expected


def test_end_to_end_identity_chain():
    assert end_to_end_correction(PHI_PLUS, PHI_PLUS, BsmOutcome(0, 0), BsmOutcome(0, 0)) == CORRECTION_I


def test_end_to_end_composed_spot_check():
    # Swapping (Phi+, Psi-) on outcome 01 leaves a Phi- channel, and
    # teleporting over Phi- with outcome 11 needs the X correction.
    got = end_to_end_correction(PHI_PLUS, PSI_MINUS, BsmOutcome(0, 1), BsmOutcome(1, 1))
    assert got == CORRECTION_X


def test_end_to_end_against_full_register_oracle():
    # All 256 classical-piece combinations, checked on the 5-qubit splitting
    # circuit with a generic probe (sensitive to both Pauli exponents).
    probe = statevec.single_qubit(0.6, 0.8j)
    for pair1, pair2 in product(BELL_LABELS, repeat=2):
        for swap in BSM_OUTCOMES:
            for tele in BSM_OUTCOMES:
                prob, received = splitting_branch(probe, pair1, pair2, swap, tele)
                assert abs(prob - 1 / 16) < 1e-12
                correction = end_to_end_correction(pair1, pair2, swap, tele)
                expected = statevec.apply_pauli(probe, 0, correction)
                assert statevec.fidelity(received, expected) >= 1 - 1e-12


# ---------------------------------------------------------------------------
# Classical decoding.

def test_decode_classical_examples():
    assert decode_classical(0, CORRECTION_I) == 0
    assert decode_classical(0, CORRECTION_X) == 1
    assert decode_classical(1, bell.CORRECTION_Z) == 1
    with pytest.raises(ValueError):
        decode_classical(2, CORRECTION_I)


def test_phase_flip_does_not_move_a_measured_bit():
    rng = np.random.default_rng(0)
    one = statevec.single_qubit(0, 1)
    flipped = statevec.apply_pauli(one, 0, bell.CORRECTION_Z)
    bit, _ = statevec.measure_computational(flipped, 0, rng)
    assert bit == 1


# ---------------------------------------------------------------------------
# Piece necessity.

PIECE_DOMAINS = (BELL_LABELS, BELL_LABELS, BSM_OUTCOMES, BSM_OUTCOMES)


def test_no_proper_subset_determines_the_parity_exponent():
    # For every proper subset of the four pieces and every assignment of the
    # known ones, the X exponent still takes both values over the unknowns.
    for mask in range(15):  # every proper subset of 4 pieces
        known = [i for i in range(4) if mask >> i & 1]
        unknown = [i for i in range(4) if not mask >> i & 1]
        for known_values in product(*(PIECE_DOMAINS[i] for i in known)):
            seen = set()
            for unknown_values in product(*(PIECE_DOMAINS[i] for i in unknown)):
                values = [None] * 4
                for i, v in zip(known, known_values):
                    values[i] = v
                for i, v in zip(unknown, unknown_values):
                    values[i] = v
                seen.add(end_to_end_correction(*values).x_exp)
            assert seen == {0, 1}


def test_reference_tables_are_complete():
    assert len(TELEPORT_REFERENCE) == 16
    assert len(SWAP_REFERENCE) == 64

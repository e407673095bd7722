"""Party state machines and full runs of the two secret-sharing schemes.

The (2,2) scheme shares one classical bit between receivers R1 and R2 in four
phases: authentication tokens (each receiver Bell-measures halves of two
publicly known pairs shared with the sender, who infers their outcomes from
his own measurement), information splitting (the sender prepares pairs
labelled by those outcomes, R1's measurement swaps a pair onto the sender and
R2, and the sender teleports the secret over it), authentication (receivers
return masked tokens; on a consistency match the sender publishes his
measurement result), and combining (both receivers pool their pieces).

The (5,5) scheme runs the same splitting circuit on a qubit secret, with the
five decryption pieces sent to five receivers over private channels and no
authentication round.

Every run produces a :class:`Transcript`: an ordered record of quantum sends,
classical messages, measurements and phase markers, serialisable as one JSON
object per line (schema ``qss-transcript/1``, bit strings rendered most
significant bit first).  Runs are driven by a counter-based generator
(Philox) keyed by the 64-bit seed, so identical (secret, seed, attack)
triples yield byte-identical transcripts.  Parties interact only through
channel events inside a single-threaded loop; independent runs may execute
concurrently.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import statevec
from .bell import (
    BELL_LABELS,
    BellLabel,
    BsmOutcome,
    PHI_MINUS,
    PHI_PLUS,
    PSI_MINUS,
    PSI_PLUS,
    decode_classical,
    end_to_end_correction,
    infer_remote_bsm,
)
from .statevec import StateVector

TRANSCRIPT_SCHEMA = "qss-transcript/1"
MAX_SEED = 2**64 - 1

SENDER = "S"
RECEIVER_1 = "R1"
RECEIVER_2 = "R2"
RECEIVER_3 = "R3"
RECEIVER_4 = "R4"
RECEIVER_5 = "R5"
PARTIES = (SENDER, RECEIVER_1, RECEIVER_2, RECEIVER_3, RECEIVER_4, RECEIVER_5)

DEFAULT_AUTH_PAIRS: dict[str, tuple[BellLabel, BellLabel]] = {
    RECEIVER_1: (PHI_PLUS, PHI_MINUS),
    RECEIVER_2: (PSI_PLUS, PSI_MINUS),
}

ATTACK_KINDS = (
    "none",
    "intercept-resend-computational",
    "intercept-resend-bell",
    "token-flip",
    "r1-lie",
    "entangle-ancilla",
)
QUANTUM_SEND_TARGETS = ("auth-r1", "auth-r2", "split-r1", "split-r2")


class IncompleteSharesError(ValueError):
    """Raised when reconstruction is attempted with any piece missing."""


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator (Philox) keyed by a 64-bit seed."""
    if not 0 <= int(seed) <= MAX_SEED:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.Philox(key=int(seed)))


# ---------------------------------------------------------------------------
# Attack models.

@dataclass(frozen=True)
class AttackModel:
    """An adversary action against a (2,2) run.

    Intercept-resend attacks measure in-flight qubits of one quantum send
    (``target``) and forward the collapsed states; ``entangle-ancilla``
    entangles an eavesdropper ancilla with the splitting qubit sent to R2
    instead of measuring it.  ``token-flip`` flips R2's one-bit token and
    ``r1-lie`` XORs ``delta`` into R1's two-bit token.  Classical messages
    are never blocked, only altered at their dishonest source or read.
    """

    kind: str = "none"
    target: str | None = None
    delta: tuple[int, int] | None = None

    def __post_init__(self) -> None:
        if self.kind not in ATTACK_KINDS:
            raise ValueError(f"unknown attack kind {self.kind!r}")
        if self.kind == "intercept-resend-computational":
            target = self.target or "split-r2"
            if target not in QUANTUM_SEND_TARGETS:
                raise ValueError(f"unknown intercept target {target!r}")
            object.__setattr__(self, "target", target)
        elif self.kind == "intercept-resend-bell":
            target = self.target or "split-r1"
            if target not in QUANTUM_SEND_TARGETS:
                raise ValueError(f"unknown intercept target {target!r}")
            if target == "split-r2":
                raise ValueError(
                    "a Bell-basis intercept needs two in-flight qubits; "
                    "the splitting send to R2 carries one"
                )
            object.__setattr__(self, "target", target)
        elif self.kind == "entangle-ancilla":
            if self.target not in (None, "split-r2"):
                raise ValueError("entangle-ancilla only targets the splitting send to R2")
            object.__setattr__(self, "target", "split-r2")
        elif self.target is not None:
            raise ValueError(f"attack {self.kind!r} takes no quantum-send target")
        if self.kind == "r1-lie":
            if self.delta is None:
                raise ValueError("r1-lie needs a 2-bit delta, e.g. r1-lie:01")
            if tuple(self.delta) not in {(0, 0), (0, 1), (1, 0), (1, 1)}:
                raise ValueError(f"delta must be a 2-bit pair, got {self.delta}")
        elif self.delta is not None:
            raise ValueError(f"attack {self.kind!r} takes no delta")

    @classmethod
    def from_spec(cls, text: str) -> "AttackModel":
        """Parse an attack spec string, e.g. ``token-flip``, ``r1-lie:01``,
        ``intercept-resend-computational:auth-r2``."""
        kind, _, arg = text.strip().partition(":")
        if kind == "r1-lie":
            if len(arg) != 2 or any(c not in "01" for c in arg):
                raise ValueError(f"r1-lie needs a 2-bit delta, got {arg!r}")
            return cls(kind=kind, delta=(int(arg[0]), int(arg[1])))
        if arg:
            return cls(kind=kind, target=arg)
        return cls(kind=kind)

    @property
    def spec_string(self) -> str:
        if self.kind == "r1-lie":
            return f"r1-lie:{self.delta[0]}{self.delta[1]}"
        if self.kind in ("intercept-resend-computational", "intercept-resend-bell", "entangle-ancilla"):
            return f"{self.kind}:{self.target}"
        return self.kind


NO_ATTACK = AttackModel()


# ---------------------------------------------------------------------------
# Transcript model.

@dataclass
class Event:
    index: int
    phase: str
    kind: str  # phase | quantum-send | classical-public | classical-private | measurement
    sender: str | None = None
    recipient: str | None = None
    payload: str | None = None
    basis: str | None = None
    result: str | None = None

    def to_json(self) -> str:
        return json.dumps(
            {
                "index": self.index,
                "phase": self.phase,
                "kind": self.kind,
                "from": self.sender,
                "to": self.recipient,
                "payload": self.payload,
                "basis": self.basis,
                "result": self.result,
            },
            sort_keys=True,
            separators=(",", ":"),
        )


@dataclass
class ShareSet22:
    """Decryption pieces of a (2,2) run.

    R1 holds the first pair label and his swap measurement; R2 holds the
    measured cipher bit and the second pair label; the sender's teleport
    measurement becomes public after authentication.
    """

    pair1_label: BellLabel | None = None
    swap_bsm: BsmOutcome | None = None
    cipher_bit: int | None = None
    pair2_label: BellLabel | None = None
    teleport_bsm: BsmOutcome | None = None

    def to_json_obj(self) -> dict:
        return {
            "r1-share": {
                "pair-label": self.pair1_label.bits if self.pair1_label else None,
                "swap-bsm": self.swap_bsm.bits if self.swap_bsm else None,
            },
            "r2-share": {
                "cipher-bit": None if self.cipher_bit is None else str(self.cipher_bit),
                "pair-label": self.pair2_label.bits if self.pair2_label else None,
            },
            "public-teleport-bsm": self.teleport_bsm.bits if self.teleport_bsm else None,
        }


@dataclass
class ShareSet55:
    """The five decryption pieces of a (5,5) run.

    Held by R1 (swap measurement), R2 (the unmeasured encrypted qubit),
    R3 and R4 (the two pair labels) and R5 (the sender's teleport
    measurement).
    """

    swap_bsm: BsmOutcome | None = None
    encrypted_qubit: StateVector | None = None
    pair1_label: BellLabel | None = None
    pair2_label: BellLabel | None = None
    teleport_bsm: BsmOutcome | None = None

    def to_json_obj(self) -> dict:
        qubit = None
        if self.encrypted_qubit is not None:
            qubit = [[a.real, a.imag] for a in self.encrypted_qubit.amplitudes]
        return {
            "r1-swap-bsm": self.swap_bsm.bits if self.swap_bsm else None,
            "r2-encrypted-qubit": qubit,
            "r3-pair1-label": self.pair1_label.bits if self.pair1_label else None,
            "r4-pair2-label": self.pair2_label.bits if self.pair2_label else None,
            "r5-teleport-bsm": self.teleport_bsm.bits if self.teleport_bsm else None,
        }


@dataclass
class Transcript:
    seed: int
    scheme: str
    events: list[Event] = field(default_factory=list)
    shares: ShareSet22 | ShareSet55 | None = None
    outcome: str = "accepted"
    reconstructed: int | None = None
    reconstruction_fidelity: float | None = None
    eavesdropper: dict | None = None

    def to_jsonl(self) -> str:
        """One JSON object per line: header, events, then a footer with the
        final shares and outcome."""
        header = json.dumps(
            {"schema": TRANSCRIPT_SCHEMA, "scheme": self.scheme, "seed": self.seed},
            sort_keys=True,
            separators=(",", ":"),
        )
        footer_obj = {
            "outcome": self.outcome,
            "reconstructed": None if self.reconstructed is None else str(self.reconstructed),
            "shares": self.shares.to_json_obj() if self.shares is not None else None,
        }
        if self.scheme == "qss55":
            footer_obj["fidelity"] = self.reconstruction_fidelity
        if self.eavesdropper is not None:
            footer_obj["eavesdropper"] = self.eavesdropper
        footer = json.dumps(footer_obj, sort_keys=True, separators=(",", ":"))
        lines = [header, *(e.to_json() for e in self.events), footer]
        return "\n".join(lines) + "\n"

    def public_messages(self) -> list[Event]:
        return [e for e in self.events if e.kind == "classical-public"]


class _TranscriptBuilder:
    def __init__(self, seed: int, scheme: str) -> None:
        self.transcript = Transcript(seed=seed, scheme=scheme)
        self._phase = ""

    def _add(self, **kwargs) -> None:
        events = self.transcript.events
        events.append(Event(index=len(events), phase=self._phase, **kwargs))

    def phase(self, name: str) -> None:
        self._phase = name
        self._add(kind="phase", payload=name)

    def quantum_send(self, sender: str, recipient: str, wire: str) -> None:
        self._add(kind="quantum-send", sender=sender, recipient=recipient, payload=wire)

    def classical(self, sender: str, recipient: str, bits: str, private: bool = False) -> None:
        kind = "classical-private" if private else "classical-public"
        self._add(kind=kind, sender=sender, recipient=recipient, payload=bits)

    def measurement(self, party: str, basis: str, result: str) -> None:
        self._add(kind="measurement", sender=party, basis=basis, result=result)


def validate_transcript(transcript: Transcript) -> None:
    """Check event ordering, channel discipline and abort safety.

    Classical channels may only carry 1-2 bit payloads, quantum sends only
    wire names, and a rejected run must never publish the sender's teleport
    measurement (the only classical message the sender emits in qss22).
    """
    for i, event in enumerate(transcript.events):
        if event.index != i:
            raise ValueError(f"event {i} carries index {event.index}")
        if event.kind in ("classical-public", "classical-private"):
            payload = event.payload or ""
            if not (1 <= len(payload) <= 2 and all(c in "01" for c in payload)):
                raise ValueError(
                    f"classical event {i} payload {event.payload!r} is not a 1-2 bit string"
                )
            if event.sender not in PARTIES or event.recipient not in PARTIES:
                raise ValueError(f"classical event {i} has unknown endpoints")
        elif event.kind == "quantum-send":
            payload = event.payload or ""
            if not payload or all(c in "01" for c in payload):
                raise ValueError(
                    f"quantum send {i} must carry a wire name, got {event.payload!r}"
                )
            if event.basis is not None or event.result is not None:
                raise ValueError(f"quantum send {i} carries measurement fields")
        elif event.kind == "measurement":
            if event.basis not in ("bell", "computational"):
                raise ValueError(f"measurement {i} has basis {event.basis!r}")
            result = event.result or ""
            if not (1 <= len(result) <= 2 and all(c in "01" for c in result)):
                raise ValueError(f"measurement {i} result {event.result!r} malformed")
        elif event.kind != "phase":
            raise ValueError(f"unknown event kind {event.kind!r}")
    if transcript.outcome == "rejected":
        for event in transcript.events:
            if event.kind.startswith("classical") and event.sender == SENDER:
                raise ValueError(
                    "rejected run published a sender message "
                    f"(event {event.index})"
                )


# ---------------------------------------------------------------------------
# Authentication-token phase.

@dataclass
class AuthResult:
    codes: dict[str, BellLabel]
    records: dict[str, BellLabel]
    eavesdropped: dict[str, str]


def prepare_token_register(pair_a: BellLabel, pair_b: BellLabel) -> StateVector:
    """Four-qubit token-phase register: [kept half of pair a, sent half of
    pair a, sent half of pair b, kept half of pair b]."""
    state = statevec.zero_state(4)
    state = statevec.prepare_bell_on(state, 0, 1, pair_a)
    state = statevec.prepare_bell_on(state, 3, 2, pair_b)
    return state


def run_auth_tokens(
    pairs: Mapping[str, tuple[BellLabel, BellLabel]] | None,
    rng: np.random.Generator,
    transcript: _TranscriptBuilder | None = None,
    attack: AttackModel = NO_ATTACK,
) -> AuthResult:
    """Token phase of the (2,2) scheme.

    For each receiver the sender shares two publicly known pairs; the
    receiver Bell-measures his halves and keeps the outcome as a secret
    2-bit code, while the sender measures the retained halves and infers the
    same code from the swap relation.  Honest runs leave both sides with
    equal, uniformly distributed codes.
    """
    if pairs is None:
        pairs = DEFAULT_AUTH_PAIRS
    codes: dict[str, BellLabel] = {}
    records: dict[str, BellLabel] = {}
    eavesdropped: dict[str, str] = {}
    for receiver, target in ((RECEIVER_1, "auth-r1"), (RECEIVER_2, "auth-r2")):
        pair_a, pair_b = pairs[receiver]
        state = prepare_token_register(pair_a, pair_b)
        if transcript:
            transcript.quantum_send(SENDER, receiver, "token-pair1-half")
            transcript.quantum_send(SENDER, receiver, "token-pair2-half")
        if attack.target == target:
            if attack.kind == "intercept-resend-computational":
                e1, state = statevec.measure_computational(state, 1, rng)
                e2, state = statevec.measure_computational(state, 2, rng)
                eavesdropped[target] = f"{e1}{e2}"
            elif attack.kind == "intercept-resend-bell":
                label, state = statevec.bell_measure(state, 1, 2, rng)
                eavesdropped[target] = label.bits
        code, state = statevec.bell_measure(state, 1, 2, rng)
        observed, state = statevec.bell_measure(state, 0, 3, rng)
        codes[receiver] = code
        records[receiver] = infer_remote_bsm(pair_a, pair_b, observed.as_outcome()).as_label()
        if transcript:
            transcript.measurement(receiver, "bell", code.bits)
            transcript.measurement(SENDER, "bell", observed.bits)
    return AuthResult(codes=codes, records=records, eavesdropped=eavesdropped)


# ---------------------------------------------------------------------------
# Information-splitting phase.

@dataclass
class SplitResult:
    swap_bsm: BsmOutcome
    teleport_bsm: BsmOutcome
    cipher_bit: int | None
    receiver_qubit: StateVector | None
    eavesdropped: dict[str, str]


def prepare_splitting_register(secret: StateVector, pair1: BellLabel, pair2: BellLabel) -> StateVector:
    """Five-qubit splitting register: [secret, kept half of pair 1, pair-1
    half to R1, pair-2 half to R1, pair-2 half to R2]."""
    state = statevec.tensor(secret, statevec.zero_state(4))
    state = statevec.prepare_bell_on(state, 1, 2, pair1)
    state = statevec.prepare_bell_on(state, 4, 3, pair2)
    return state


def _run_splitting(
    secret: StateVector,
    pair1: BellLabel,
    pair2: BellLabel,
    rng: np.random.Generator,
    transcript: _TranscriptBuilder | None,
    attack: AttackModel,
    measure_cipher: bool,
    order: str = "swap-first",
) -> SplitResult:
    if order not in ("swap-first", "teleport-first"):
        raise ValueError(f"unknown measurement order {order!r}")
    state = prepare_splitting_register(secret, pair1, pair2)
    eavesdropped: dict[str, str] = {}
    if transcript:
        transcript.quantum_send(SENDER, RECEIVER_1, "split-pair1-half")
        transcript.quantum_send(SENDER, RECEIVER_1, "split-pair2-half")
        transcript.quantum_send(SENDER, RECEIVER_2, "split-cipher-qubit")
    ancilla = False
    if attack.target == "split-r1":
        if attack.kind == "intercept-resend-computational":
            e1, state = statevec.measure_computational(state, 2, rng)
            e2, state = statevec.measure_computational(state, 3, rng)
            eavesdropped["split-r1"] = f"{e1}{e2}"
        elif attack.kind == "intercept-resend-bell":
            label, state = statevec.bell_measure(state, 2, 3, rng)
            eavesdropped["split-r1"] = label.bits
    elif attack.target == "split-r2":
        if attack.kind == "intercept-resend-computational":
            bit, state = statevec.measure_computational(state, 4, rng)
            eavesdropped["split-r2"] = str(bit)
        elif attack.kind == "entangle-ancilla":
            state = statevec.tensor(state, statevec.zero_state(1))
            state = statevec.apply_cnot(state, 4, 5)
            ancilla = True
    # The two Bell measurements act on disjoint qubits and commute; the
    # default order runs R1's swap measurement before the teleportation one.
    if order == "swap-first":
        swap_label, state = statevec.bell_measure(state, 2, 3, rng)
        tele_label, state = statevec.bell_measure(state, 0, 1, rng)
    else:
        tele_label, state = statevec.bell_measure(state, 0, 1, rng)
        swap_label, state = statevec.bell_measure(state, 2, 3, rng)
    if transcript:
        transcript.measurement(RECEIVER_1, "bell", swap_label.bits)
        transcript.measurement(SENDER, "bell", tele_label.bits)
    cipher_bit = None
    receiver_qubit = None
    if measure_cipher:
        cipher_bit, state = statevec.measure_computational(state, 4, rng)
        if transcript:
            transcript.measurement(RECEIVER_2, "computational", str(cipher_bit))
    else:
        receiver_qubit = statevec.extract_pure_qubit(state, 4)
    if ancilla:
        eve_bit, state = statevec.measure_computational(state, 5, rng)
        eavesdropped["split-r2"] = str(eve_bit)
    return SplitResult(
        swap_bsm=swap_label.as_outcome(),
        teleport_bsm=tele_label.as_outcome(),
        cipher_bit=cipher_bit,
        receiver_qubit=receiver_qubit,
        eavesdropped=eavesdropped,
    )


def run_splitting_22(
    secret_bit: int,
    pair1: BellLabel,
    pair2: BellLabel,
    rng: np.random.Generator,
    transcript: _TranscriptBuilder | None = None,
    attack: AttackModel = NO_ATTACK,
    order: str = "swap-first",
) -> SplitResult:
    """Splitting phase of the (2,2) scheme on a computational-basis secret."""
    if secret_bit not in (0, 1):
        raise ValueError(f"secret bit must be 0 or 1, got {secret_bit}")
    secret = statevec.computational_state([secret_bit])
    return _run_splitting(secret, pair1, pair2, rng, transcript, attack, True, order)


def splitting_branch(
    secret: StateVector,
    pair1: BellLabel,
    pair2: BellLabel,
    swap_bsm: BsmOutcome,
    teleport_bsm: BsmOutcome,
    order: str = "swap-first",
) -> tuple[float, StateVector | None]:
    """Deterministic splitting run postselected on both measurement outcomes.

    Returns the branch probability and R2's (unmeasured) qubit state; used
    by the exhaustive enumerations and the oracle sweeps.
    """
    state = prepare_splitting_register(secret, pair1, pair2)
    if order == "swap-first":
        projections = ((2, 3, swap_bsm), (0, 1, teleport_bsm))
    elif order == "teleport-first":
        projections = ((0, 1, teleport_bsm), (2, 3, swap_bsm))
    else:
        raise ValueError(f"unknown measurement order {order!r}")
    probability = 1.0
    for q1, q2, outcome in projections:
        p, state = statevec.bell_project(state, q1, q2, outcome.as_label())
        if state is None:
            return 0.0, None
        probability *= p
    return probability, statevec.extract_pure_qubit(state, 4)


# ---------------------------------------------------------------------------
# Authentication and reconstruction.

@dataclass(frozen=True)
class SenderRecords:
    """Everything the sender holds when verifying the receivers' tokens."""

    pair1_label: BellLabel
    pair2_label: BellLabel
    teleport_bsm: BsmOutcome
    secret_bit: int


def verify_authentication(
    records: SenderRecords,
    token_r1: tuple[int, int],
    token_r2: int,
) -> bool:
    """Sender-side consistency check of the two masked tokens.

    The sender unmasks R1's swap outcome and R2's cipher bit with his stored
    codes and accepts when the cipher bit equals his exact prediction from
    the end-to-end correction.  Only on acceptance may the teleport
    measurement be published.
    """
    recovered_swap = BsmOutcome(
        token_r1[0] ^ records.pair1_label.z,
        token_r1[1] ^ records.pair1_label.x,
    )
    recovered_cipher = token_r2 ^ records.pair2_label.z ^ records.pair2_label.x
    correction = end_to_end_correction(
        records.pair1_label, records.pair2_label, recovered_swap, records.teleport_bsm
    )
    return recovered_cipher == (records.secret_bit ^ correction.x_exp)


def reconstruct22(shares: ShareSet22) -> int:
    """Recover the secret bit from a complete (2,2) share set.

    Raises :class:`IncompleteSharesError` when any piece is missing; a
    partial answer is never returned.
    """
    missing = [
        name
        for name, value in (
            ("pair1-label", shares.pair1_label),
            ("swap-bsm", shares.swap_bsm),
            ("cipher-bit", shares.cipher_bit),
            ("pair2-label", shares.pair2_label),
            ("teleport-bsm", shares.teleport_bsm),
        )
        if value is None
    ]
    if missing:
        raise IncompleteSharesError(f"missing shares: {', '.join(missing)}")
    correction = end_to_end_correction(
        shares.pair1_label, shares.pair2_label, shares.swap_bsm, shares.teleport_bsm
    )
    return decode_classical(shares.cipher_bit, correction)


def reconstruct55(shares: ShareSet55) -> StateVector:
    """Recover the secret qubit from a complete (5,5) share set."""
    missing = [
        name
        for name, value in (
            ("swap-bsm", shares.swap_bsm),
            ("encrypted-qubit", shares.encrypted_qubit),
            ("pair1-label", shares.pair1_label),
            ("pair2-label", shares.pair2_label),
            ("teleport-bsm", shares.teleport_bsm),
        )
        if value is None
    ]
    if missing:
        raise IncompleteSharesError(f"missing shares: {', '.join(missing)}")
    correction = end_to_end_correction(
        shares.pair1_label, shares.pair2_label, shares.swap_bsm, shares.teleport_bsm
    )
    return statevec.apply_pauli(shares.encrypted_qubit, 0, correction)


# ---------------------------------------------------------------------------
# Full runs.

def run_qss22(
    secret_bit: int,
    seed: int,
    attack: AttackModel | None = None,
    auth_pairs: Mapping[str, tuple[BellLabel, BellLabel]] | None = None,
) -> Transcript:
    """One full (2,2) run: tokens, splitting, authentication, combining.

    On rejection the run aborts: the teleport measurement is never published
    and no reconstruction is attempted.
    """
    if secret_bit not in (0, 1):
        raise ValueError(f"secret bit must be 0 or 1, got {secret_bit}")
    attack = attack or NO_ATTACK
    rng = make_rng(seed)
    builder = _TranscriptBuilder(seed, "qss22")

    builder.phase("authentication-tokens")
    auth = run_auth_tokens(auth_pairs, rng, builder, attack)

    builder.phase("information-splitting")
    split = run_splitting_22(
        secret_bit,
        auth.records[RECEIVER_1],
        auth.records[RECEIVER_2],
        rng,
        builder,
        attack,
    )

    builder.phase("authentication")
    code1 = auth.codes[RECEIVER_1]
    code2 = auth.codes[RECEIVER_2]
    token_r1 = (split.swap_bsm.b1 ^ code1.z, split.swap_bsm.b2 ^ code1.x)
    if attack.kind == "r1-lie":
        token_r1 = (token_r1[0] ^ attack.delta[0], token_r1[1] ^ attack.delta[1])
    token_r2 = split.cipher_bit ^ code2.z ^ code2.x
    if attack.kind == "token-flip":
        token_r2 ^= 1
    builder.classical(RECEIVER_1, SENDER, f"{token_r1[0]}{token_r1[1]}")
    builder.classical(RECEIVER_2, SENDER, str(token_r2))

    records = SenderRecords(
        pair1_label=auth.records[RECEIVER_1],
        pair2_label=auth.records[RECEIVER_2],
        teleport_bsm=split.teleport_bsm,
        secret_bit=secret_bit,
    )
    accepted = verify_authentication(records, token_r1, token_r2)

    transcript = builder.transcript
    if accepted:
        builder.classical(SENDER, RECEIVER_1, split.teleport_bsm.bits)
        builder.classical(SENDER, RECEIVER_2, split.teleport_bsm.bits)
        builder.phase("combining")
        shares = ShareSet22(
            pair1_label=code1,
            swap_bsm=split.swap_bsm,
            cipher_bit=split.cipher_bit,
            pair2_label=code2,
            teleport_bsm=split.teleport_bsm,
        )
        transcript.shares = shares
        transcript.outcome = "accepted"
        transcript.reconstructed = reconstruct22(shares)
    else:
        transcript.outcome = "rejected"

    if attack.kind != "none":
        observed = dict(auth.eavesdropped)
        observed.update(split.eavesdropped)
        transcript.eavesdropper = {
            "attack": attack.spec_string,
            "observed": observed,
        }
    validate_transcript(transcript)
    return transcript


def run_qss22_bits(bits: str, seed: int, attack: AttackModel | None = None) -> list[Transcript]:
    """Share a multi-bit classical secret as independent sequential
    single-bit runs, one per bit, with per-bit derived seeds."""
    if not bits or any(c not in "01" for c in bits):
        raise ValueError(f"secret must be a nonempty bit string, got {bits!r}")
    return [
        run_qss22(int(c), (seed + i) % (MAX_SEED + 1), attack)
        for i, c in enumerate(bits)
    ]


def run_qss55(
    secret_amplitudes: tuple[complex, complex],
    seed: int,
) -> tuple[Transcript, ShareSet55]:
    """One full (5,5) run on a qubit secret.

    The sender draws both pair labels uniformly, runs the splitting circuit,
    and distributes the four classical pieces over private channels; R2
    keeps the unmeasured encrypted qubit.  There is no authentication round.
    The transcript records the fidelity of reconstructing from the returned
    shares.
    """
    secret = statevec.single_qubit(*secret_amplitudes)  # validates normalisation
    rng = make_rng(seed)
    builder = _TranscriptBuilder(seed, "qss55")

    builder.phase("information-splitting")
    pair1 = BELL_LABELS[int(rng.integers(4))]
    pair2 = BELL_LABELS[int(rng.integers(4))]
    builder.classical(SENDER, RECEIVER_3, pair1.bits, private=True)
    builder.classical(SENDER, RECEIVER_4, pair2.bits, private=True)
    split = _run_splitting(secret, pair1, pair2, rng, builder, NO_ATTACK, measure_cipher=False)
    builder.classical(SENDER, RECEIVER_5, split.teleport_bsm.bits, private=True)

    shares = ShareSet55(
        swap_bsm=split.swap_bsm,
        encrypted_qubit=split.receiver_qubit,
        pair1_label=pair1,
        pair2_label=pair2,
        teleport_bsm=split.teleport_bsm,
    )
    builder.phase("decoding")
    recovered = reconstruct55(shares)
    transcript = builder.transcript
    transcript.shares = shares
    transcript.outcome = "accepted"
    transcript.reconstruction_fidelity = statevec.fidelity(recovered, secret)
    validate_transcript(transcript)
    return transcript, shares

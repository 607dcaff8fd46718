"""Single-direction BB84 baseline with random-sample error estimation.

The reference point the duplex protocol is measured against.  One session:

1. per timeslot, Alice draws a uniform basis and bit and sends the state;
2. Eve may intercept and resend; the channel may lose or flip it;
3. Bob measures in his own uniform basis and both parties keep
   (timeslot, basis, bit) notes;
4. slots that were lost or measured in the wrong basis are discarded;
5. a random sample of the survivors is compared in public to estimate the
   error rate, then thrown away;
6. the remaining slots, renumbered consecutively, are the key candidates.

Unlike the duplex scheme, the compared sample is sacrificed: those bits are
published and cannot become key material.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .adversary import EveRecord, EveStrategy, maybe_intercept
from .duplex import Direction, SlotRecord
from .quantum import Basis, Bit, ChannelModel, measure, prepare, transmit
from .rng import seeded_rng

__all__ = ["Bb84Config", "Bb84Outcome", "run_bb84", "sift"]


def sift(records: list[SlotRecord]) -> list[SlotRecord]:
    """Keep the slots that arrived and were measured in the sending basis.

    Order is preserved, so the output is a subsequence of the input.
    """
    return [r for r in records if r.receiver_bit is not None and r.bases_match]


@dataclass(frozen=True)
class Bb84Config:
    """Parameters of one baseline session.

    ``sample_fraction`` sizes the public comparison as
    ``ceil(sample_fraction * sifted)``; ``sample_count``, when given, fixes
    the exact number of compared slots instead (handy for detection-power
    experiments).  A session is flagged as compromised when the estimated
    error rate exceeds ``detection_threshold``.
    """

    n_timeslots: int
    channel: ChannelModel = ChannelModel()
    eve: EveStrategy = EveStrategy.absent()
    sample_fraction: float = 0.25
    sample_count: int | None = None
    detection_threshold: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_timeslots < 1:
            raise ValueError(f"n_timeslots must be >= 1, got {self.n_timeslots}")
        if not 0.0 < self.sample_fraction < 1.0:
            raise ValueError(
                f"sample_fraction must lie strictly between 0 and 1, got {self.sample_fraction!r}"
            )
        if self.sample_count is not None and self.sample_count < 0:
            raise ValueError("sample_count must be non-negative")
        if not 0.0 <= self.detection_threshold <= 1.0:
            raise ValueError("detection_threshold must lie in [0, 1]")


@dataclass
class Bb84Outcome:
    """Result of one baseline session.

    ``key_timeslots`` maps the renumbered key positions back to original
    timeslots (entry i is the origin of key bit i), so reports can always
    point at the physical slot a bit came from.
    """

    sifted_records: list[SlotRecord]
    sampled_timeslots: list[int]
    sample_errors: int
    estimated_error_rate: float
    key_bits_alice: list[Bit]
    key_bits_bob: list[Bit]
    key_timeslots: list[int]
    detected: bool
    eve_records: tuple[EveRecord, ...]


def run_bb84(config: Bb84Config) -> Bb84Outcome:
    """Run one complete baseline session."""
    rng = seeded_rng(config.seed)
    coin = rng.random
    eve_records: list[EveRecord] = []

    records: list[SlotRecord] = []
    for timeslot in range(1, config.n_timeslots + 1):
        basis = Basis.X if coin() < 0.5 else Basis.Y
        bit = 1 if coin() < 0.5 else 0
        state = prepare(basis, bit)
        state, intercept = maybe_intercept(timeslot, state, config.eve, rng)
        if intercept is not None:
            eve_records.append(intercept)
        arrived = transmit(state, config.channel, rng)
        bob_basis = Basis.X if coin() < 0.5 else Basis.Y
        bob_bit = None if arrived is None else measure(arrived, bob_basis, rng)
        records.append(
            SlotRecord(timeslot, Direction.ALICE_TO_BOB, basis, bit, bob_basis, bob_bit)
        )

    sifted = sift(records)

    if config.sample_count is not None:
        sample_size = min(config.sample_count, len(sifted))
    else:
        sample_size = min(
            math.ceil(config.sample_fraction * len(sifted)), len(sifted)
        )
    sampled_positions = sorted(rng.sample(range(len(sifted)), sample_size))
    sampled_set = set(sampled_positions)

    errors = sum(
        1
        for i in sampled_positions
        if sifted[i].receiver_bit != sifted[i].sender_bit
    )
    estimated_error_rate = errors / sample_size if sample_size else 0.0

    kept = [record for i, record in enumerate(sifted) if i not in sampled_set]
    return Bb84Outcome(
        sifted_records=sifted,
        sampled_timeslots=[sifted[i].timeslot for i in sampled_positions],
        sample_errors=errors,
        estimated_error_rate=estimated_error_rate,
        key_bits_alice=[record.sender_bit for record in kept],
        key_bits_bob=[record.receiver_bit for record in kept],
        key_timeslots=[record.timeslot for record in kept],
        detected=estimated_error_rate > config.detection_threshold,
        eve_records=tuple(eve_records),
    )

"""Duplex interleaved BB84 with parity-checked timeslot pairs.

Alice and Bob each run a BB84 transmission towards the other, interleaved on
a shared timeslot axis (by default Alice sends in odd slots, Bob in even
slots).  After the quantum phase, Alice announces her basis choices for both
roles and Bob filters the timeslots into three sets:

* the discard set: slots that were lost or where the bases differ,
* set 2: surviving slots in which Alice was the sender,
* set 3: surviving slots in which Bob was the sender.

Bob then publishes pairs of timeslots, one from set 2 and one from set 3,
either by searching set 3 for an element with the same bit value as the
set-2 element, or (the flip-bit variant) positionally, attaching one extra
bit that says whether the set-3 bit must be inverted to match.  Alice checks
each published pair against her own records; any channel error or
eavesdropper interference with odd parity across the two slots makes the
check fail.  Pairs that pass contribute one key bit each: the bit value of
the set-2 slot.  No bit value is ever published, so the whole filtered
transmission can be checked without sacrificing key material.

The wire form of a published pair orders the two timeslots with the later
one first; either party recovers the set-2/set-3 roles from the slot
directions, so the order carries no information.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Iterator, Literal, Mapping, Sequence

from .adversary import EveRecord, EveStrategy, maybe_intercept
from .quantum import Basis, Bit, ChannelModel, measure, prepare, transmit
from .rng import seeded_rng

__all__ = [
    "Direction",
    "SlotRecord",
    "Transcript",
    "SetPartition",
    "Triple",
    "FlipPairing",
    "SearchPairing",
    "VerificationResult",
    "DuplexConfig",
    "DuplexSessionResult",
    "TranscriptFormatError",
    "run_duplex_transmission",
    "announce_bases",
    "party_bit_map",
    "filter_sets",
    "partition_from_discard",
    "bob_pairing_views",
    "make_triples_flip",
    "make_pairs_search",
    "triple_from_announcement",
    "verify_triples",
    "extract_key",
    "run_duplex_session",
    "read_transcript",
    "parse_transcript",
    "write_transcript",
    "format_transcript",
    "example_transcript_path",
]

Party = Literal["alice", "bob"]


class Direction(Enum):
    """Who transmitted the photon in a given timeslot."""

    ALICE_TO_BOB = "A>B"
    BOB_TO_ALICE = "B>A"

    def sender(self) -> Party:
        return "alice" if self is Direction.ALICE_TO_BOB else "bob"

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True, slots=True)
class SlotRecord:
    """Everything that happened in one timeslot.

    ``receiver_bit`` is ``None`` when the photon never arrived.  The record
    is the union of both parties' private notes; protocol steps must only
    look at the fields their executing party legitimately knows.
    """

    timeslot: int
    direction: Direction
    sender_basis: Basis
    sender_bit: Bit
    receiver_basis: Basis
    receiver_bit: Bit | None

    @property
    def lost(self) -> bool:
        return self.receiver_bit is None

    @property
    def bases_match(self) -> bool:
        return self.sender_basis is self.receiver_basis

    def basis_of(self, party: Party) -> Basis:
        if (self.direction is Direction.ALICE_TO_BOB) == (party == "alice"):
            return self.sender_basis
        return self.receiver_basis

    def bit_of(self, party: Party) -> Bit | None:
        if (self.direction is Direction.ALICE_TO_BOB) == (party == "alice"):
            return self.sender_bit
        return self.receiver_bit


def _odd_alice(timeslot: int) -> Direction:
    return Direction.ALICE_TO_BOB if timeslot % 2 == 1 else Direction.BOB_TO_ALICE


# Named interleaving rules; a Transcript also accepts any callable rule.
INTERLEAVINGS: dict[str, Callable[[int], Direction]] = {"odd_alice": _odd_alice}


@dataclass(frozen=True)
class Transcript:
    """Ordered per-timeslot records of one duplex exchange.

    ``interleaving`` names the rule that assigned directions ("odd_alice" for
    generated runs, "file" for replayed ones).  Timeslots must be unique; the
    two directions may otherwise be arbitrary, so two fully independent
    transmissions keyed to a shared slot counter are representable.
    """

    slots: tuple[SlotRecord, ...]
    interleaving: str = "odd_alice"

    def __post_init__(self) -> None:
        seen: set[int] = set()
        for record in self.slots:
            if record.timeslot in seen:
                raise ValueError(f"duplicate timeslot {record.timeslot} in transcript")
            seen.add(record.timeslot)

    def __len__(self) -> int:
        return len(self.slots)

    def __iter__(self) -> Iterator[SlotRecord]:
        return iter(self.slots)

    def timeslots(self) -> tuple[int, ...]:
        return tuple(record.timeslot for record in self.slots)

    def directions(self) -> dict[int, Direction]:
        return {record.timeslot: record.direction for record in self.slots}

    def by_timeslot(self) -> dict[int, SlotRecord]:
        return {record.timeslot: record for record in self.slots}


def run_duplex_transmission(
    n_timeslots: int,
    channel: ChannelModel,
    eve: EveStrategy,
    rng: random.Random,
    *,
    interleaving: str | Callable[[int], Direction] = "odd_alice",
    eve_sink: list[EveRecord] | None = None,
) -> Transcript:
    """Simulate the quantum phase of one duplex session.

    Each timeslot gets a direction from the interleaving rule; the sender
    draws a uniform basis and bit, Eve may intercept, the channel may lose or
    flip the state, and the receiver measures in a uniform basis.  Intercept
    records are appended to ``eve_sink`` when one is supplied.
    """
    if n_timeslots < 2:
        raise ValueError(f"a duplex run needs at least 2 timeslots, got {n_timeslots}")
    if callable(interleaving):
        rule, rule_name = interleaving, getattr(interleaving, "__name__", "custom")
    else:
        try:
            rule, rule_name = INTERLEAVINGS[interleaving], interleaving
        except KeyError:
            raise ValueError(f"unknown interleaving rule {interleaving!r}") from None

    coin = rng.random
    records = []
    for timeslot in range(1, n_timeslots + 1):
        direction = rule(timeslot)
        sender_basis = Basis.X if coin() < 0.5 else Basis.Y
        sender_bit = 1 if coin() < 0.5 else 0
        state = prepare(sender_basis, sender_bit)
        state, intercept = maybe_intercept(timeslot, state, eve, rng)
        if intercept is not None and eve_sink is not None:
            eve_sink.append(intercept)
        arrived = transmit(state, channel, rng)
        receiver_basis = Basis.X if coin() < 0.5 else Basis.Y
        receiver_bit = None if arrived is None else measure(arrived, receiver_basis, rng)
        records.append(
            SlotRecord(timeslot, direction, sender_basis, sender_bit, receiver_basis, receiver_bit)
        )
    return Transcript(tuple(records), rule_name)


def announce_bases(transcript: Transcript, party: Party) -> dict[int, Basis]:
    """One party's coding bases for every timeslot, in announcement form."""
    a2b = Direction.ALICE_TO_BOB
    sends = party == "alice"
    return {
        r.timeslot: (r.sender_basis if (r.direction is a2b) == sends else r.receiver_basis)
        for r in transcript
    }


def party_bit_map(transcript: Transcript, party: Party) -> dict[int, Bit]:
    """One party's bit values by timeslot (sent bits plus received readings).

    Slots where the party received nothing are omitted; they can never be
    referenced by a published pair because filtering discards them first.
    """
    a2b = Direction.ALICE_TO_BOB
    sends = party == "alice"
    bits: dict[int, Bit] = {}
    for r in transcript:
        if (r.direction is a2b) == sends:
            bits[r.timeslot] = r.sender_bit
        elif r.receiver_bit is not None:
            bits[r.timeslot] = r.receiver_bit
    return bits


@dataclass(frozen=True)
class SetPartition:
    """Three-way split of announced timeslots.

    ``discard`` holds lost and basis-mismatched slots; ``set2`` the surviving
    slots Alice sent; ``set3`` the surviving slots Bob sent.  The parts are
    pairwise disjoint and jointly cover the transcript they came from.
    """

    discard: frozenset[int]
    set2: tuple[int, ...]
    set3: tuple[int, ...]

    def __post_init__(self) -> None:
        s2, s3 = set(self.set2), set(self.set3)
        if len(s2) != len(self.set2) or len(s3) != len(self.set3):
            raise ValueError("partition lists must not repeat timeslots")
        if (self.discard & s2) or (self.discard & s3) or (s2 & s3):
            raise ValueError("partition parts must be pairwise disjoint")

    def all_timeslots(self) -> set[int]:
        return set(self.discard) | set(self.set2) | set(self.set3)


def filter_sets(
    transcript: Transcript,
    alice_bases: Mapping[int, Basis],
    bob_bases: Mapping[int, Basis],
) -> SetPartition:
    """Bob's filtering step: split every timeslot into discard/set2/set3.

    ``alice_bases`` is Alice's public announcement; ``bob_bases`` is Bob's own
    record in the same shape.  Both must cover every transcript slot.
    """
    discard: list[int] = []
    set2: list[int] = []
    set3: list[int] = []
    for record in transcript:
        t = record.timeslot
        try:
            a_basis = alice_bases[t]
            b_basis = bob_bases[t]
        except KeyError as missing:
            raise ValueError(f"timeslot {missing.args[0]} has no announced basis") from None
        if record.lost or a_basis is not b_basis:
            discard.append(t)
        elif record.direction is Direction.ALICE_TO_BOB:
            set2.append(t)
        else:
            set3.append(t)
    return SetPartition(frozenset(discard), tuple(set2), tuple(set3))


def partition_from_discard(transcript: Transcript, discard: Iterable[int]) -> SetPartition:
    """Alice's reconstruction of the partition from Bob's discard reply.

    The discard announcement plus the (public) slot directions determine the
    same partition Bob computed, without Alice ever seeing Bob's bases.
    """
    dropped = set(discard)
    unknown = dropped - set(transcript.timeslots())
    if unknown:
        raise ValueError(f"discard reply names unknown timeslots {sorted(unknown)}")
    set2 = tuple(
        r.timeslot
        for r in transcript
        if r.timeslot not in dropped and r.direction is Direction.ALICE_TO_BOB
    )
    set3 = tuple(
        r.timeslot
        for r in transcript
        if r.timeslot not in dropped and r.direction is Direction.BOB_TO_ALICE
    )
    return SetPartition(frozenset(dropped), set2, set3)


def bob_pairing_views(
    transcript: Transcript, partition: SetPartition
) -> tuple[list[tuple[int, Bit]], list[tuple[int, Bit]]]:
    """Bob's (timeslot, bit) lists for set 2 and set 3, in timeslot order.

    For set 2 the bits are what Bob measured; for set 3 what he sent.
    """
    bits = party_bit_map(transcript, "bob")
    set2_view = [(t, bits[t]) for t in partition.set2]
    set3_view = [(t, bits[t]) for t in partition.set3]
    return set2_view, set3_view


@dataclass(frozen=True, slots=True)
class Triple:
    """One checkable unit: a set-2 slot, a set-3 slot, and the flip bit.

    ``flip`` is the XOR of the publisher's two bit values, i.e. the
    instruction "invert the set-3 bit before comparing".
    """

    t_set2: int
    t_set3: int
    flip: Bit

    def announced(self) -> tuple[int, int, int]:
        """Wire form: the two timeslots with the later one first."""
        if self.t_set2 >= self.t_set3:
            return (self.t_set2, self.t_set3, self.flip)
        return (self.t_set3, self.t_set2, self.flip)


def triple_from_announcement(
    announced: Sequence[int], directions: Mapping[int, Direction]
) -> Triple:
    """Recover set-2/set-3 roles of a wire-form triple from slot directions."""
    first, second, flip = announced
    first_dir = directions.get(first)
    second_dir = directions.get(second)
    if first_dir is None or second_dir is None:
        missing = first if first_dir is None else second
        raise ValueError(f"announced pair references unknown timeslot {missing}")
    if first_dir is second_dir:
        raise ValueError(
            f"announced pair ({first}, {second}) does not span both directions"
        )
    if first_dir is Direction.ALICE_TO_BOB:
        return Triple(first, second, flip)
    return Triple(second, first, flip)


@dataclass(frozen=True)
class FlipPairing:
    """Positional pairing result: published triples plus the unpaired tail."""

    triples: tuple[Triple, ...]
    unpaired: tuple[int, ...]


def make_triples_flip(
    set2_view: Sequence[tuple[int, Bit]], set3_view: Sequence[tuple[int, Bit]]
) -> FlipPairing:
    """Pair set 2 and set 3 positionally and attach flip bits.

    The i-th element of each list forms one triple with
    ``flip = bit2 XOR bit3``; whichever list is longer leaves a tail of
    unpaired timeslots, which are reported and excluded from the key.
    """
    triples = tuple(
        Triple(t2, t3, b2 ^ b3) for (t2, b2), (t3, b3) in zip(set2_view, set3_view)
    )
    n = len(triples)
    tail = set2_view[n:] if len(set2_view) > n else set3_view[n:]
    return FlipPairing(triples, tuple(t for t, _ in tail))


@dataclass(frozen=True)
class SearchPairing:
    """Same-bit-value pairing result.

    ``pairs`` lists (set-2 slot, set-3 slot) matches; set-2 elements with no
    available partner are ``unmatched``, and set-3 elements never used are
    ``unused``.
    """

    pairs: tuple[tuple[int, int], ...]
    unmatched_set2: tuple[int, ...]
    unused_set3: tuple[int, ...]

    def as_triples(self) -> tuple[Triple, ...]:
        # Matched pairs have equal bit values by construction, so flip = 0.
        return tuple(Triple(t2, t3, 0) for t2, t3 in self.pairs)


def make_pairs_search(
    set2_view: Sequence[tuple[int, Bit]], set3_view: Sequence[tuple[int, Bit]]
) -> SearchPairing:
    """Greedy same-bit-value pairing.

    Walking set 2 in timeslot order, each element takes the earliest unused
    set-3 element with the same bit value; elements with no available match
    are skipped and reported.
    """
    used: set[int] = set()
    pairs: list[tuple[int, int]] = []
    unmatched: list[int] = []
    for t2, b2 in set2_view:
        partner = next(
            (t3 for t3, b3 in set3_view if t3 not in used and b3 == b2), None
        )
        if partner is None:
            unmatched.append(t2)
        else:
            used.add(partner)
            pairs.append((t2, partner))
    unused = tuple(t3 for t3, _ in set3_view if t3 not in used)
    return SearchPairing(tuple(pairs), tuple(unmatched), unused)


@dataclass(frozen=True)
class VerificationResult:
    """Outcome of Alice's pair comparisons."""

    checked_pairs: int
    failures: tuple[Triple, ...]

    @property
    def passed(self) -> bool:
        return not self.failures


def verify_triples(
    alice_bits: Mapping[int, Bit], triples: Iterable[Triple]
) -> VerificationResult:
    """Check every published triple against Alice's own bit values.

    A triple passes iff ``alice_bits[t_set2] == alice_bits[t_set3] XOR flip``.
    A failure means the two slots suffered an odd number of transmission
    errors between them; an even number cancels and goes unseen here.
    """
    failures = []
    checked = 0
    for triple in triples:
        checked += 1
        try:
            b2 = alice_bits[triple.t_set2]
            b3 = alice_bits[triple.t_set3]
        except KeyError as missing:
            raise ValueError(
                f"no bit value recorded for timeslot {missing.args[0]}"
            ) from None
        if b2 != b3 ^ triple.flip:
            failures.append(triple)
    return VerificationResult(checked, tuple(failures))


def extract_key(triples: Iterable[Triple], bits: Mapping[int, Bit]) -> list[Bit]:
    """Read one key bit per triple from a party's own records.

    The published pair-reading rule (0,0/0,1 -> 0 and 1,0/1,1 -> 1, pairs
    ordered set-2 first) reduces to taking the set-2 bit, which both parties
    hold locally; nothing about the key ever crosses the public channel.
    """
    key = []
    for triple in triples:
        try:
            key.append(bits[triple.t_set2])
        except KeyError:
            raise ValueError(
                f"no bit value recorded for timeslot {triple.t_set2}"
            ) from None
    return key


@dataclass(frozen=True)
class DuplexConfig:
    """Parameters of one duplex session.

    ``variant`` selects how Bob publishes pairs: "flip_triples" (positional
    pairing with a flip bit) or "search_pairs" (same-bit-value search).
    ``max_pairs`` truncates the checked pairs, which lets experiments fix the
    number of comparisons per session; the surplus counts as unpaired.
    ``failure_policy`` is "abort" (any failure voids the key) or "threshold"
    (abort only when the failure rate exceeds ``failure_threshold``; failing
    pairs are dropped from the key either way).  ``keep_searched_key``
    controls whether search-variant pairs double as key material.
    """

    n_timeslots: int
    channel: ChannelModel = ChannelModel()
    eve: EveStrategy = EveStrategy.absent()
    variant: str = "flip_triples"
    failure_policy: str = "abort"
    failure_threshold: float = 0.0
    max_pairs: int | None = None
    keep_searched_key: bool = True
    interleaving: str = "odd_alice"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_timeslots < 2:
            raise ValueError(f"n_timeslots must be >= 2, got {self.n_timeslots}")
        if self.variant not in ("flip_triples", "search_pairs"):
            raise ValueError(f"unknown variant {self.variant!r}")
        if self.failure_policy not in ("abort", "threshold"):
            raise ValueError(f"unknown failure_policy {self.failure_policy!r}")
        if not 0.0 <= self.failure_threshold <= 1.0:
            raise ValueError("failure_threshold must lie in [0, 1]")
        if self.max_pairs is not None and self.max_pairs < 0:
            raise ValueError("max_pairs must be non-negative")


@dataclass
class DuplexSessionResult:
    """Full trace of one duplex session, public messages included.

    The announcement fields hold exactly what crossed the classical channel
    (and is therefore visible to Eve): Alice's bases, Bob's discard reply,
    and Bob's published pair list in wire form.
    """

    config: DuplexConfig
    transcript: Transcript
    eve_records: tuple[EveRecord, ...]
    announced_alice_bases: dict[int, Basis]
    announced_discard: frozenset[int]
    announced_pairs: tuple[tuple[int, ...], ...]
    partition: SetPartition
    triples: tuple[Triple, ...]
    unpaired: tuple[int, ...]
    verification: VerificationResult
    alice_key: list[Bit]
    bob_key: list[Bit]
    aborted: bool
    detected: bool
    key_triples: tuple[Triple, ...] = field(default=(), repr=False)

    @property
    def keys_agree(self) -> bool:
        return self.alice_key == self.bob_key


def _published_triples(
    config: DuplexConfig, set2_view: list[tuple[int, Bit]], set3_view: list[tuple[int, Bit]]
) -> tuple[tuple[Triple, ...], tuple[int, ...]]:
    """Bob's pair publication for the configured variant, with truncation."""
    if config.variant == "flip_triples":
        pairing = make_triples_flip(set2_view, set3_view)
        triples, leftovers = pairing.triples, list(pairing.unpaired)
    else:
        pairing = make_pairs_search(set2_view, set3_view)
        triples = pairing.as_triples()
        leftovers = list(pairing.unmatched_set2) + list(pairing.unused_set3)
    if config.max_pairs is not None and len(triples) > config.max_pairs:
        for dropped in triples[config.max_pairs :]:
            leftovers.extend((dropped.t_set2, dropped.t_set3))
        triples = triples[: config.max_pairs]
    return triples, tuple(sorted(leftovers))


def run_duplex_session(config: DuplexConfig) -> DuplexSessionResult:
    """Execute one complete duplex session: quantum phase through key bits.

    The classical exchange is modelled message by message: Alice announces
    her bases, Bob replies with the discard set and the pair list in wire
    form, and Alice rebuilds the partition and the set-2/set-3 roles from
    public data alone before verifying and extracting her key.
    """
    rng = seeded_rng(config.seed)
    eve_sink: list[EveRecord] = []
    transcript = run_duplex_transmission(
        config.n_timeslots,
        config.channel,
        config.eve,
        rng,
        interleaving=config.interleaving,
        eve_sink=eve_sink,
    )

    # Classical phase, Bob's side.
    alice_announcement = announce_bases(transcript, "alice")
    partition = filter_sets(transcript, alice_announcement, announce_bases(transcript, "bob"))
    set2_view, set3_view = bob_pairing_views(transcript, partition)
    triples, unpaired = _published_triples(config, set2_view, set3_view)
    announced_pairs = tuple(t.announced() for t in triples)

    # Classical phase, Alice's side: everything below uses public messages
    # plus her own records.
    directions = transcript.directions()
    alice_triples = tuple(
        triple_from_announcement(a, directions) for a in announced_pairs
    )
    alice_bits = party_bit_map(transcript, "alice")
    verification = verify_triples(alice_bits, alice_triples)

    failure_rate = (
        len(verification.failures) / verification.checked_pairs
        if verification.checked_pairs
        else 0.0
    )
    if config.failure_policy == "abort":
        aborted = not verification.passed
        detected = not verification.passed
    else:
        aborted = failure_rate > config.failure_threshold
        detected = failure_rate > config.failure_threshold

    keyed = config.variant == "flip_triples" or config.keep_searched_key
    if aborted or not keyed:
        key_triples: tuple[Triple, ...] = ()
    else:
        failed = set(verification.failures)
        key_triples = tuple(t for t in alice_triples if t not in failed)

    alice_key = extract_key(key_triples, alice_bits)
    bob_key = extract_key(key_triples, party_bit_map(transcript, "bob"))

    return DuplexSessionResult(
        config=config,
        transcript=transcript,
        eve_records=tuple(eve_sink),
        announced_alice_bases=alice_announcement,
        announced_discard=partition.discard,
        announced_pairs=announced_pairs,
        partition=partition,
        triples=triples,
        unpaired=unpaired,
        verification=verification,
        alice_key=alice_key,
        bob_key=bob_key,
        aborted=aborted,
        detected=detected,
        key_triples=key_triples,
    )


# --------------------------------------------------------------------------
# Transcript replay format
#
# Plain text, one row per timeslot:
#
#   timeslot  direction  sender_basis  sender_bit  receiver_basis  receiver_bit
#
# direction is A>B or B>A, bases are X or Y, bits are 0 or 1, and a lost
# photon is written LOST in the receiver_bit column.  '#' starts a comment.
# --------------------------------------------------------------------------

_LOST_TOKEN = "LOST"


class TranscriptFormatError(ValueError):
    """A transcript row that cannot be parsed; carries its line number."""

    def __init__(self, line_number: int, message: str):
        super().__init__(f"line {line_number}: {message}")
        self.line_number = line_number


def _parse_row(line_number: int, fields: list[str]) -> SlotRecord:
    if len(fields) != 6:
        raise TranscriptFormatError(
            line_number, f"expected 6 columns, got {len(fields)}"
        )
    raw_t, raw_dir, raw_sb, raw_sbit, raw_rb, raw_rbit = fields
    try:
        timeslot = int(raw_t)
    except ValueError:
        raise TranscriptFormatError(line_number, f"bad timeslot {raw_t!r}") from None
    if timeslot < 1:
        raise TranscriptFormatError(line_number, f"timeslot must be positive, got {timeslot}")
    try:
        direction = Direction(raw_dir)
    except ValueError:
        raise TranscriptFormatError(line_number, f"bad direction {raw_dir!r}") from None
    try:
        sender_basis = Basis(raw_sb)
        receiver_basis = Basis(raw_rb)
    except ValueError:
        raise TranscriptFormatError(
            line_number, f"bad basis in {raw_sb!r}/{raw_rb!r}"
        ) from None
    if raw_sbit not in ("0", "1"):
        raise TranscriptFormatError(line_number, f"bad sender bit {raw_sbit!r}")
    if raw_rbit == _LOST_TOKEN:
        receiver_bit: Bit | None = None
    elif raw_rbit in ("0", "1"):
        receiver_bit = int(raw_rbit)
    else:
        raise TranscriptFormatError(line_number, f"bad receiver bit {raw_rbit!r}")
    return SlotRecord(
        timeslot, direction, sender_basis, int(raw_sbit), receiver_basis, receiver_bit
    )


def parse_transcript(text: str) -> Transcript:
    """Parse replay-format text into a Transcript (empty text is valid)."""
    records: list[SlotRecord] = []
    seen: set[int] = set()
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        record = _parse_row(line_number, line.split())
        if record.timeslot in seen:
            raise TranscriptFormatError(
                line_number, f"duplicate timeslot {record.timeslot}"
            )
        seen.add(record.timeslot)
        records.append(record)
    records.sort(key=lambda r: r.timeslot)
    return Transcript(tuple(records), "file")


def read_transcript(path: str | Path) -> Transcript:
    return parse_transcript(Path(path).read_text(encoding="ascii"))


def format_transcript(transcript: Transcript) -> str:
    lines = ["# timeslot direction sender_basis sender_bit receiver_basis receiver_bit"]
    for r in transcript:
        rbit = _LOST_TOKEN if r.receiver_bit is None else str(r.receiver_bit)
        lines.append(
            f"{r.timeslot} {r.direction.value} {r.sender_basis.value} "
            f"{r.sender_bit} {r.receiver_basis.value} {rbit}"
        )
    return "\n".join(lines) + "\n"


def write_transcript(transcript: Transcript, path: str | Path) -> None:
    Path(path).write_text(format_transcript(transcript), encoding="ascii")


def example_transcript_path() -> Path:
    """Path of the bundled 20-slot worked-example transcript."""
    return Path(resources.files("duplexqkd").joinpath("data/duplex20.transcript"))

"""Duplex BB84 simulator: eavesdropper detection without public bit comparison.

The package models the classic single-direction BB84 protocol (module
``bb84``) and a duplex variant in which Alice and Bob interleave
transmissions towards each other and check every surviving timeslot by
publishing parity-linked slot pairs instead of sacrificing a random bit
sample (module ``duplex``).  Supporting modules supply the eigenstate-level
qubit and channel model (``quantum``), a pluggable intercept-resend
adversary (``adversary``), Monte Carlo aggregation and leakage accounting
(``stats``), and a command-line driver (``cli``).
"""

from .quantum import Basis, Bit, ChannelModel, QubitState, measure, prepare, transmit
from .adversary import BasisPolicy, EveKind, EveRecord, EveStrategy, maybe_intercept
from .bb84 import Bb84Config, Bb84Outcome, run_bb84, sift
from .duplex import (
    Direction,
    DuplexConfig,
    DuplexSessionResult,
    FlipPairing,
    SearchPairing,
    SetPartition,
    SlotRecord,
    Transcript,
    TranscriptFormatError,
    Triple,
    VerificationResult,
    announce_bases,
    bob_pairing_views,
    example_transcript_path,
    extract_key,
    filter_sets,
    format_transcript,
    make_pairs_search,
    make_triples_flip,
    parse_transcript,
    partition_from_discard,
    party_bit_map,
    read_transcript,
    run_duplex_session,
    run_duplex_transmission,
    triple_from_announcement,
    verify_triples,
    write_transcript,
)
from .stats import (
    AggregateStats,
    EveInformation,
    PairKnowledge,
    ProtocolComparison,
    SessionReport,
    SweepResult,
    aggregate_reports,
    compare_protocols,
    eve_information,
    flip_key_mutual_information,
    pair_error_probability,
    pair_reading_table,
    report_from_bb84,
    report_from_duplex,
    run_sessions,
    run_sweep,
    slot_error_probability,
    undetected_probability,
)
from .rng import derive_seed, seeded_rng

__version__ = "0.1.0"

__all__ = [
    "Basis",
    "Bit",
    "ChannelModel",
    "QubitState",
    "measure",
    "prepare",
    "transmit",
    "BasisPolicy",
    "EveKind",
    "EveRecord",
    "EveStrategy",
    "maybe_intercept",
    "Bb84Config",
    "Bb84Outcome",
    "run_bb84",
    "sift",
    "Direction",
    "DuplexConfig",
    "DuplexSessionResult",
    "FlipPairing",
    "SearchPairing",
    "SetPartition",
    "SlotRecord",
    "Transcript",
    "TranscriptFormatError",
    "Triple",
    "VerificationResult",
    "announce_bases",
    "bob_pairing_views",
    "example_transcript_path",
    "extract_key",
    "filter_sets",
    "format_transcript",
    "make_pairs_search",
    "make_triples_flip",
    "parse_transcript",
    "partition_from_discard",
    "party_bit_map",
    "read_transcript",
    "run_duplex_session",
    "run_duplex_transmission",
    "triple_from_announcement",
    "verify_triples",
    "write_transcript",
    "AggregateStats",
    "EveInformation",
    "PairKnowledge",
    "ProtocolComparison",
    "SessionReport",
    "SweepResult",
    "aggregate_reports",
    "compare_protocols",
    "eve_information",
    "flip_key_mutual_information",
    "pair_error_probability",
    "pair_reading_table",
    "report_from_bb84",
    "report_from_duplex",
    "run_sessions",
    "run_sweep",
    "slot_error_probability",
    "undetected_probability",
    "derive_seed",
    "seeded_rng",
]

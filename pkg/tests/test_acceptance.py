"""Acceptance gate: one test per criterion, each at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v -s`` to see one pass/fail line
per criterion.
"""

import functools
import itertools
import json
import time

from duplexqkd import (
    Basis,
    Bb84Config,
    ChannelModel,
    DuplexConfig,
    EveStrategy,
    Triple,
    announce_bases,
    bob_pairing_views,
    eve_information,
    filter_sets,
    flip_key_mutual_information,
    make_triples_flip,
    party_bit_map,
    read_transcript,
    run_bb84,
    run_duplex_session,
    run_duplex_transmission,
    run_sessions,
    verify_triples,
)
from duplexqkd.cli import main as cli_main
from duplexqkd.duplex import example_transcript_path
from duplexqkd.rng import seeded_rng

from _oracles import (
    enumerate_flip_key_joint,
    enumerate_pair_failure_probability,
    enumerate_slot_error_probability,
)


def criterion(number: int, description: str):
    def wrap(func):
        @functools.wraps(func)
        def run(*args, **kwargs):
            try:
                result = func(*args, **kwargs)
            except BaseException:
                print(f"[criterion {number}] FAIL — {description}")
                raise
            print(f"[criterion {number}] PASS — {description}")
            return result

        return run

    return wrap


@criterion(1, "worked-example replay reproduces every set, triple, and key bit")
def test_criterion_1_worked_example_replay():
    started = time.perf_counter()
    transcript = read_transcript(example_transcript_path())
    partition = filter_sets(
        transcript, announce_bases(transcript, "alice"), announce_bases(transcript, "bob")
    )
    pairing = make_triples_flip(*bob_pairing_views(transcript, partition))
    alice_bits = party_bit_map(transcript, "alice")
    verification = verify_triples(alice_bits, pairing.triples)
    alice_key = [alice_bits[t.t_set2] for t in pairing.triples]
    elapsed = time.perf_counter() - started

    assert set(partition.discard) == {1, 4, 7, 12, 13, 19, 20}
    assert partition.set2 == (3, 5, 9, 11, 15, 17)
    assert partition.set3 == (2, 6, 8, 10, 14, 16, 18)
    assert [t.announced() for t in pairing.triples] == [
        (3, 2, 1), (6, 5, 0), (9, 8, 0), (11, 10, 0), (15, 14, 1), (17, 16, 1)
    ]
    assert verification.checked_pairs == 6 and verification.failures == ()
    assert alice_key[0] == 1
    assert elapsed < 1.0


@criterion(2, "full interception drives the sifted error rate to 0.25 +/- 0.01")
def test_criterion_2_intercept_resend_error_rate():
    outcome = run_bb84(
        Bb84Config(n_timeslots=204_000, eve=EveStrategy.intercept_resend(), seed=2024)
    )
    sifted = outcome.sifted_records[:100_000]
    assert len(sifted) == 100_000
    errors = sum(r.receiver_bit != r.sender_bit for r in sifted)
    rate = errors / len(sifted)
    assert enumerate_slot_error_probability(1.0, "uniform") == 0.25
    assert abs(rate - 0.25) <= 0.01


@criterion(3, "pair failures hit 0.375 and session detection hits 1-(5/8)^n")
def test_criterion_3_duplex_detection_power():
    p_slot = enumerate_slot_error_probability(1.0, "uniform")
    p_pair = enumerate_pair_failure_probability(p_slot)
    assert p_pair == 0.375

    result = run_duplex_session(
        DuplexConfig(
            n_timeslots=430_000,
            eve=EveStrategy.intercept_resend(),
            max_pairs=100_000,
            seed=31,
        )
    )
    assert result.verification.checked_pairs == 100_000
    rate = len(result.verification.failures) / 100_000
    assert abs(rate - 0.375) <= 0.01

    for n_pairs, timeslots in ((1, 40), (5, 60), (10, 120)):
        config = DuplexConfig(
            n_timeslots=timeslots,
            eve=EveStrategy.intercept_resend(),
            max_pairs=n_pairs,
        )
        reports = run_sessions("duplex", config, 10_000, master_seed=100 + n_pairs)
        detected = sum(r.detected for r in reports) / len(reports)
        expected = 1.0 - 0.625**n_pairs
        assert abs(detected - expected) <= 0.01, (n_pairs, detected, expected)


@criterion(4, "noiseless honest sessions verify clean with full-length equal keys")
def test_criterion_4_noiseless_honesty():
    config = DuplexConfig(n_timeslots=120)
    reports = run_sessions("duplex", config, 1000, master_seed=55)
    assert all(r.failures == 0 for r in reports)
    assert all(r.keys_agree for r in reports)
    assert all(not r.detected and not r.aborted for r in reports)
    # Key length equals min(|set2|, |set3|): checked pairs all become key.
    assert all(r.key_length == r.sifted_or_paired for r in reports)
    assert all(2 * r.key_length + r.unpaired == r.sifted for r in reports)


@criterion(5, "flip bit = pair XOR, key independent of it, 2 residual candidates")
def test_criterion_5_leakage_invariants():
    for b2, b3 in itertools.product((0, 1), repeat=2):
        pairing = make_triples_flip([(1, b2)], [(2, b3)])
        assert pairing.triples[0].flip == b2 ^ b3

    joint = enumerate_flip_key_joint()
    for cell, probability in joint.items():
        assert probability == 0.25, cell  # product of the 1/2 marginals, exactly
    assert flip_key_mutual_information() == 0.0

    bases = {1: Basis.X, 2: Basis.Y}
    for flip in (0, 1):
        info = eve_information([Triple(1, 2, flip)], [], bases)
        candidates = info.pairs[0].candidates
        assert len(candidates) == 2
        assert all(b2 ^ b3 == flip for b2, b3 in candidates)


@criterion(6, "partition and pairing conservation hold on 10^4 random transcripts")
def test_criterion_6_partition_and_conservation():
    losses = (0.0, 0.1, 0.5)
    for index in range(10_000):
        loss = losses[index % 3]
        n = 2 + (index % 39)
        transcript = run_duplex_transmission(
            n,
            ChannelModel(loss_probability=loss),
            EveStrategy.intercept_resend(0.5) if index % 2 else EveStrategy.absent(),
            seeded_rng(600_000 + index),
        )
        partition = filter_sets(
            transcript,
            announce_bases(transcript, "alice"),
            announce_bases(transcript, "bob"),
        )
        assert partition.all_timeslots() == set(transcript.timeslots())
        assert len(partition.discard) + len(partition.set2) + len(partition.set3) == n
        pairing = make_triples_flip(*bob_pairing_views(transcript, partition))
        assert len(pairing.triples) == min(len(partition.set2), len(partition.set3))
        assert 2 * len(pairing.triples) + len(pairing.unpaired) == len(
            partition.set2
        ) + len(partition.set3)


@criterion(7, "verification fails exactly on odd-weight per-pair error patterns")
def test_criterion_7_even_parity_blindness():
    for e2, e3 in itertools.product((0, 1), repeat=2):
        for b2, b3 in itertools.product((0, 1), repeat=2):
            bob_bits = {1: b2 ^ e2, 2: b3}
            alice_bits = {1: b2, 2: b3 ^ e3}
            triple = Triple(1, 2, bob_bits[1] ^ bob_bits[2])
            passed = verify_triples(alice_bits, [triple]).passed
            assert passed == ((e2 + e3) % 2 == 0), (e2, e3, b2, b3)


@criterion(8, "identical config and seed produce byte-identical reports")
def test_criterion_8_determinism(tmp_path):
    argv = [
        "run", "--protocol", "duplex", "--timeslots", "100", "--intercept", "0.5",
        "--flip", "0.01", "--sessions", "50", "--seed", "2718",
    ]
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert cli_main(argv + ["--out", str(out_a)]) == 0
    assert cli_main(argv + ["--out", str(out_b)]) == 0
    report_a = (out_a / "report.json").read_bytes()
    assert report_a == (out_b / "report.json").read_bytes()
    assert (out_a / "sessions.csv").read_bytes() == (out_b / "sessions.csv").read_bytes()
    json.loads(report_a)  # the structured report must stay well-formed

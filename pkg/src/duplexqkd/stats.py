"""Monte Carlo aggregation, closed-form error rates, and leakage accounting.

Closed forms used throughout (uniform sender bases assumed):

* per-slot error probability under intercept-resend with interception
  fraction f: ``p_eve = f / 4`` (Eve guesses the wrong basis half the time,
  and a wrong-basis resend flips the matched-basis reading half the time);
* two independent error sources compose as an XOR:
  ``p = p_eve + p_chan - 2 * p_eve * p_chan``;
* a checked pair fails iff its two slots carry an odd number of errors:
  ``p_pair = 2 * p_slot * (1 - p_slot)``;
* n checked pairs all pass with probability ``(1 - p_pair) ** n``.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import numpy as np
from scipy.stats import beta

from .adversary import EveKind, EveRecord, EveStrategy
from .bb84 import Bb84Config, Bb84Outcome, run_bb84
from .duplex import DuplexConfig, DuplexSessionResult, Triple, run_duplex_session
from .quantum import Basis, ChannelModel
from .rng import derive_seed

__all__ = [
    "SessionReport",
    "AggregateStats",
    "SweepResult",
    "PairKnowledge",
    "EveInformation",
    "ProtocolComparison",
    "slot_error_probability",
    "pair_error_probability",
    "undetected_probability",
    "eve_information",
    "flip_key_mutual_information",
    "pair_reading_table",
    "normal_halfwidth",
    "binomial_interval",
    "report_from_duplex",
    "report_from_bb84",
    "run_sessions",
    "aggregate_reports",
    "compare_protocols",
    "run_sweep",
]


# --------------------------------------------------------------------------
# Session reports
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class SessionReport:
    """Uniform per-session summary for either protocol.

    ``sifted_or_paired`` is the protocol's native unit of checked data:
    sifted slots for the baseline, checked pairs for duplex.
    ``eve_pair_bits_revealed`` counts bits of bit-value information made
    public: one per compared sample slot (baseline, value published) or one
    per announced pair (duplex, only the XOR is published).
    """

    protocol: str
    n_timeslots: int
    sifted: int
    sifted_or_paired: int
    failures: int
    estimated_error_rate: float
    key_length: int
    keys_agree: bool
    eve_pair_bits_revealed: int
    detected: bool
    aborted: bool = False
    sampled: int = 0
    unpaired: int = 0
    variant: str | None = None
    keyed_search_pairs: bool | None = None
    session_index: int | None = None
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.failures > self.sifted_or_paired:
            raise ValueError("failures cannot exceed the checked count")
        if self.key_length < 0:
            raise ValueError("key_length must be non-negative")

    def to_dict(self) -> dict:
        return {
            "protocol": self.protocol,
            "n_timeslots": self.n_timeslots,
            "sifted": self.sifted,
            "sifted_or_paired": self.sifted_or_paired,
            "failures": self.failures,
            "estimated_error_rate": self.estimated_error_rate,
            "key_length": self.key_length,
            "keys_agree": self.keys_agree,
            "eve_pair_bits_revealed": self.eve_pair_bits_revealed,
            "detected": self.detected,
            "aborted": self.aborted,
            "sampled": self.sampled,
            "unpaired": self.unpaired,
            "variant": self.variant,
            "keyed_search_pairs": self.keyed_search_pairs,
            "session_index": self.session_index,
            "seed": self.seed,
        }


CSV_FIELDS = [
    "session_index",
    "protocol",
    "variant",
    "seed",
    "n_timeslots",
    "sifted",
    "sifted_or_paired",
    "sampled",
    "unpaired",
    "failures",
    "estimated_error_rate",
    "key_length",
    "keys_agree",
    "detected",
    "aborted",
    "eve_pair_bits_revealed",
]


def report_from_duplex(
    result: DuplexSessionResult,
    session_index: int | None = None,
    seed: int | None = None,
) -> SessionReport:
    checked = result.verification.checked_pairs
    failures = len(result.verification.failures)
    partition = result.partition
    return SessionReport(
        protocol="duplex",
        n_timeslots=len(result.transcript),
        sifted=len(partition.set2) + len(partition.set3),
        sifted_or_paired=checked,
        failures=failures,
        estimated_error_rate=failures / checked if checked else 0.0,
        key_length=len(result.alice_key),
        keys_agree=result.keys_agree,
        eve_pair_bits_revealed=checked,
        detected=result.detected,
        aborted=result.aborted,
        unpaired=len(result.unpaired),
        variant=result.config.variant,
        keyed_search_pairs=(
            result.config.keep_searched_key
            if result.config.variant == "search_pairs"
            else None
        ),
        session_index=session_index,
        seed=seed,
    )


def report_from_bb84(
    outcome: Bb84Outcome,
    config: Bb84Config,
    session_index: int | None = None,
    seed: int | None = None,
) -> SessionReport:
    sampled = len(outcome.sampled_timeslots)
    return SessionReport(
        protocol="bb84",
        n_timeslots=config.n_timeslots,
        sifted=len(outcome.sifted_records),
        sifted_or_paired=len(outcome.sifted_records),
        failures=outcome.sample_errors,
        estimated_error_rate=outcome.estimated_error_rate,
        key_length=len(outcome.key_bits_alice),
        keys_agree=outcome.key_bits_alice == outcome.key_bits_bob,
        eve_pair_bits_revealed=sampled,
        detected=outcome.detected,
        sampled=sampled,
        session_index=session_index,
        seed=seed,
    )


# --------------------------------------------------------------------------
# Closed forms
# --------------------------------------------------------------------------

def slot_error_probability(eve: EveStrategy, channel: ChannelModel) -> float:
    """Probability a matched-basis slot reads wrong, from attack plus noise.

    Holds for every basis policy because the sender's basis is uniform:
    a fixed-basis Eve is wrong on half the slots, a coin-flipping Eve is
    wrong with probability one half per slot.
    """
    p_eve = (
        0.25 * eve.intercept_fraction
        if eve.kind is EveKind.INTERCEPT_RESEND
        else 0.0
    )
    p_chan = channel.flip_probability
    return p_eve + p_chan - 2.0 * p_eve * p_chan


def pair_error_probability(eve: EveStrategy, channel: ChannelModel) -> float:
    """Probability one checked pair fails: odd error parity across its slots."""
    p = slot_error_probability(eve, channel)
    return 2.0 * p * (1.0 - p)


def undetected_probability(n_pairs: int, p_pair: float) -> float:
    """Chance that n checked pairs all pass despite per-pair failure p_pair."""
    if n_pairs < 0:
        raise ValueError("n_pairs must be non-negative")
    if not 0.0 <= p_pair <= 1.0:
        raise ValueError("p_pair must lie in [0, 1]")
    return (1.0 - p_pair) ** n_pairs


def pair_reading_table() -> dict[tuple[int, int], int]:
    """The published pair-reading rule as an explicit table.

    Pairs are ordered (set-2 bit, set-3 bit): 0,0 and 0,1 read as 0;
    1,0 and 1,1 read as 1.
    """
    return {(0, 0): 0, (0, 1): 0, (1, 0): 1, (1, 1): 1}


def flip_key_mutual_information() -> float:
    """Mutual information between the public flip bit and the key bit.

    Computed exactly over the four equally likely pair values.  The flip bit
    is the pair XOR and the key bit is the first pair element, so the joint
    distribution factorises and the result is exactly zero.
    """
    joint: dict[tuple[int, int], Fraction] = {}
    for b2 in (0, 1):
        for b3 in (0, 1):
            cell = (b2 ^ b3, pair_reading_table()[(b2, b3)])
            joint[cell] = joint.get(cell, Fraction(0)) + Fraction(1, 4)
    flip_marginal = {f: sum(p for (ff, _), p in joint.items() if ff == f) for f in (0, 1)}
    key_marginal = {k: sum(p for (_, kk), p in joint.items() if kk == k) for k in (0, 1)}
    mi = 0.0
    for (f, k), p in joint.items():
        if p:
            ratio = p / (flip_marginal[f] * key_marginal[k])
            mi += float(p) * math.log2(float(ratio))
    return mi


# --------------------------------------------------------------------------
# Eavesdropper information accounting
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class PairKnowledge:
    """What the public record plus Eve's notes say about one checked pair.

    ``candidates`` lists the (set-2 bit, set-3 bit) values still possible
    given the announcement: the flip bit always narrows four options to two.
    Matched-basis interceptions of either slot narrow further; the inference
    treats Eve's reading as the slot's true value, which is exact for the
    set-3 slot (she reads the sender's state before any noise) and exact for
    the set-2 slot on a noiseless channel.
    """

    triple: Triple
    candidates: tuple[tuple[int, int], ...]
    matched_interceptions: tuple[int, ...]
    known_key_bit: int | None

    @property
    def compromised(self) -> bool:
        return self.known_key_bit is not None


@dataclass(frozen=True)
class EveInformation:
    """Per-pair knowledge plus whole-session tallies."""

    pairs: tuple[PairKnowledge, ...]
    pair_bits_revealed: int
    compromised_pairs: int


def eve_information(
    triples: Iterable[Triple],
    eve_records: Iterable[EveRecord],
    sender_bases: Mapping[int, Basis],
) -> EveInformation:
    """Account for everything Eve can infer about the published pairs.

    Each announced pair hands her exactly one of the pair's two bits of
    bit-value information (the XOR); her own interception records, judged
    against the now-public sender bases, may expose the rest.
    """
    by_slot: dict[int, EveRecord] = {}
    for record in eve_records:
        if record.timeslot in by_slot:
            raise ValueError(f"duplicate interception record for timeslot {record.timeslot}")
        by_slot[record.timeslot] = record

    def matched_bit(timeslot: int) -> int | None:
        record = by_slot.get(timeslot)
        if record is None:
            return None
        basis = sender_bases.get(timeslot)
        if basis is None:
            raise ValueError(f"no sender basis known for timeslot {timeslot}")
        return record.measured_bit if record.measured_basis is basis else None

    pairs: list[PairKnowledge] = []
    for triple in triples:
        candidates = [(b2, b2 ^ triple.flip) for b2 in (0, 1)]
        matched: list[int] = []
        b2_known = matched_bit(triple.t_set2)
        if b2_known is not None:
            matched.append(triple.t_set2)
            candidates = [c for c in candidates if c[0] == b2_known]
        b3_known = matched_bit(triple.t_set3)
        if b3_known is not None:
            matched.append(triple.t_set3)
            candidates = [c for c in candidates if c[1] == b3_known]
        known_key = candidates[0][0] if len(candidates) == 1 else None
        pairs.append(
            PairKnowledge(triple, tuple(candidates), tuple(matched), known_key)
        )
    return EveInformation(
        pairs=tuple(pairs),
        pair_bits_revealed=len(pairs),
        compromised_pairs=sum(1 for p in pairs if p.compromised),
    )


# --------------------------------------------------------------------------
# Confidence intervals
# --------------------------------------------------------------------------

def normal_halfwidth(p_hat: float, n: int, z: float = 1.96) -> float:
    """Normal-approximation half-width for a binomial proportion."""
    if n <= 0:
        return float("nan")
    return z * math.sqrt(max(p_hat * (1.0 - p_hat), 0.0) / n)


def binomial_interval(successes: int, n: int, confidence: float = 0.95) -> tuple[float, float]:
    """Exact (Clopper-Pearson) binomial confidence interval, for small n."""
    if not 0 <= successes <= n:
        raise ValueError("successes must lie in [0, n]")
    alpha = 1.0 - confidence
    lower = 0.0 if successes == 0 else float(beta.ppf(alpha / 2, successes, n - successes + 1))
    upper = 1.0 if successes == n else float(beta.ppf(1 - alpha / 2, successes + 1, n - successes))
    return lower, upper


# --------------------------------------------------------------------------
# Monte Carlo batches
# --------------------------------------------------------------------------

def _run_one(
    protocol: str,
    config: Bb84Config | DuplexConfig,
    index: int,
    master_seed: int,
) -> SessionReport:
    seed = derive_seed(master_seed, index)
    cfg = replace(config, seed=seed)
    if protocol == "bb84":
        return report_from_bb84(run_bb84(cfg), cfg, session_index=index, seed=seed)
    return report_from_duplex(run_duplex_session(cfg), session_index=index, seed=seed)


def run_sessions(
    protocol: str,
    config: Bb84Config | DuplexConfig,
    sessions: int,
    master_seed: int,
    workers: int = 1,
) -> list[SessionReport]:
    """Run independent sessions; session k is seeded by derive_seed(master, k).

    With ``workers > 1`` sessions are dispatched to a process pool; results
    come back in session-index order either way.
    """
    if protocol not in ("bb84", "duplex"):
        raise ValueError(f"unknown protocol {protocol!r}")
    if sessions < 1:
        raise ValueError("sessions must be >= 1")
    indices = range(sessions)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(
                pool.map(
                    _run_one,
                    [protocol] * sessions,
                    [config] * sessions,
                    indices,
                    [master_seed] * sessions,
                    chunksize=max(1, sessions // (workers * 4)),
                )
            )
    return [_run_one(protocol, config, i, master_seed) for i in indices]


@dataclass(frozen=True)
class AggregateStats:
    """Pooled statistics over a batch of session reports."""

    sessions: int
    detection_rate: float
    detection_halfwidth: float
    mean_error_rate: float
    error_rate_halfwidth: float
    mean_key_length: float
    key_rate_per_timeslot: float
    key_rate_halfwidth: float
    keys_agree_rate: float
    abort_rate: float
    pair_failure_rate: float
    total_checked: int
    total_failures: int

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def aggregate_reports(reports: Sequence[SessionReport], z: float = 1.96) -> AggregateStats:
    """Fold a batch of reports into rates with normal-approximation CIs."""
    if not reports:
        raise ValueError("cannot aggregate zero session reports")
    n = len(reports)
    detection = sum(r.detected for r in reports) / n
    errors = np.array([r.estimated_error_rate for r in reports])
    key_rates = np.array([r.key_length / r.n_timeslots for r in reports])
    total_checked = sum(r.sifted_or_paired for r in reports)
    total_failures = sum(r.failures for r in reports)
    return AggregateStats(
        sessions=n,
        detection_rate=detection,
        detection_halfwidth=normal_halfwidth(detection, n, z),
        mean_error_rate=float(errors.mean()),
        error_rate_halfwidth=float(z * errors.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0,
        mean_key_length=float(np.mean([r.key_length for r in reports])),
        key_rate_per_timeslot=float(key_rates.mean()),
        key_rate_halfwidth=float(z * key_rates.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0,
        keys_agree_rate=sum(r.keys_agree for r in reports) / n,
        abort_rate=sum(r.aborted for r in reports) / n,
        pair_failure_rate=total_failures / total_checked if total_checked else 0.0,
        total_checked=total_checked,
        total_failures=total_failures,
    )


# --------------------------------------------------------------------------
# Protocol comparison
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class ProtocolComparison:
    """Side-by-side key-rate and detection table.

    The baseline's key rate appears twice: after the sampled bits are
    sacrificed (what it actually keeps) and before (its sifted potential),
    since the duplex scheme sacrifices nothing beyond its built-in
    two-slots-per-bit reduction.
    """

    rows: tuple[dict, ...]

    def to_dict(self) -> dict:
        return {"rows": list(self.rows)}

    def to_csv(self) -> str:
        fields = list(self.rows[0].keys())
        lines = [",".join(fields)]
        for row in self.rows:
            lines.append(",".join(_csv_cell(row[f]) for f in fields))
        return "\n".join(lines) + "\n"


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _comparison_row(protocol: str, reports: Sequence[SessionReport]) -> dict:
    n = len(reports)
    mean_slots = sum(r.n_timeslots for r in reports) / n
    mean_key = sum(r.key_length for r in reports) / n
    sacrificed = sum(r.sampled for r in reports) / n
    return {
        "protocol": protocol,
        "sessions": n,
        "mean_timeslots": mean_slots,
        "mean_sifted": sum(r.sifted for r in reports) / n,
        "mean_checked": sum(r.sifted_or_paired for r in reports) / n,
        "mean_key_length": mean_key,
        "key_bits_per_timeslot": mean_key / mean_slots if mean_slots else 0.0,
        "key_bits_per_timeslot_before_sacrifice": (
            (mean_key + sacrificed) / mean_slots if mean_slots else 0.0
        ),
        "bits_sacrificed_per_session": sacrificed,
        "detection_rate": sum(r.detected for r in reports) / n,
        "mean_error_rate": sum(r.estimated_error_rate for r in reports) / n,
        "keys_agree_rate": sum(r.keys_agree for r in reports) / n,
    }


def compare_protocols(
    duplex_reports: Sequence[SessionReport],
    bb84_reports: Sequence[SessionReport],
) -> ProtocolComparison:
    """Tabulate duplex against the baseline; both batches must be non-empty."""
    if not duplex_reports or not bb84_reports:
        raise ValueError("both report batches must be non-empty")
    return ProtocolComparison(
        rows=(
            _comparison_row("duplex", duplex_reports),
            _comparison_row("bb84", bb84_reports),
        )
    )


# --------------------------------------------------------------------------
# Parameter sweeps
# --------------------------------------------------------------------------

# Grid keys understood by run_sweep and how they map onto config fields.
SWEEPABLE = ("intercept_fraction", "flip_probability", "loss_probability", "n_timeslots")


@dataclass(frozen=True)
class SweepResult:
    """One aggregate row per grid cell; every row carries its sample count."""

    protocol: str
    rows: tuple[dict, ...]

    def to_dict(self) -> dict:
        return {"protocol": self.protocol, "rows": list(self.rows)}

    def to_csv(self) -> str:
        fields = list(self.rows[0].keys())
        lines = [",".join(fields)]
        for row in self.rows:
            lines.append(",".join(_csv_cell(row[f]) for f in fields))
        return "\n".join(lines) + "\n"


def _apply_cell(
    config: Bb84Config | DuplexConfig, params: Mapping[str, float]
) -> Bb84Config | DuplexConfig:
    channel = config.channel
    if "flip_probability" in params:
        channel = replace(channel, flip_probability=params["flip_probability"])
    if "loss_probability" in params:
        channel = replace(channel, loss_probability=params["loss_probability"])
    eve = config.eve
    if "intercept_fraction" in params:
        fraction = params["intercept_fraction"]
        eve = (
            EveStrategy.absent()
            if fraction == 0.0
            else EveStrategy.intercept_resend(fraction, config.eve.basis_policy)
        )
    updates: dict = {"channel": channel, "eve": eve}
    if "n_timeslots" in params:
        updates["n_timeslots"] = int(params["n_timeslots"])
    return replace(config, **updates)


def run_sweep(
    protocol: str,
    config: Bb84Config | DuplexConfig,
    grid: Mapping[str, Sequence[float]],
    sessions: int,
    master_seed: int,
    workers: int = 1,
    z: float = 1.96,
) -> SweepResult:
    """Cross a parameter grid and aggregate ``sessions`` runs per cell.

    Cell c's sessions use seeds derived from (master_seed, c, k), so any
    single cell can be reproduced without rerunning the sweep.
    """
    if not grid:
        raise ValueError("sweep grid must name at least one parameter")
    for key, values in grid.items():
        if key not in SWEEPABLE:
            raise ValueError(f"cannot sweep {key!r}; choose from {SWEEPABLE}")
        if len(values) == 0:
            raise ValueError(f"sweep grid for {key!r} is empty")

    names = [k for k in SWEEPABLE if k in grid]
    mesh = [()]
    for name in names:
        mesh = [cell + (value,) for cell in mesh for value in grid[name]]

    rows = []
    for cell_index, cell in enumerate(mesh):
        params = dict(zip(names, cell))
        cell_config = _apply_cell(config, params)
        reports = run_sessions(
            protocol, cell_config, sessions, derive_seed(master_seed, cell_index), workers
        )
        stats = aggregate_reports(reports, z)
        row = {**params}
        row.update(
            {
                "sessions": stats.sessions,
                "detection_rate": stats.detection_rate,
                "detection_halfwidth": stats.detection_halfwidth,
                "mean_error_rate": stats.mean_error_rate,
                "error_rate_halfwidth": stats.error_rate_halfwidth,
                "key_rate_per_timeslot": stats.key_rate_per_timeslot,
                "key_rate_halfwidth": stats.key_rate_halfwidth,
                "pair_failure_rate": stats.pair_failure_rate,
            }
        )
        rows.append(row)
    return SweepResult(protocol, tuple(rows))

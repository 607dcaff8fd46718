"""Command-line driver: seeded Monte Carlo runs, transcript replay, sweeps.

Subcommands::

    duplexqkd run    --protocol {bb84,duplex} [options]   Monte Carlo batch
    duplexqkd replay TRANSCRIPT [options]                 rerun a fixed transcript
    duplexqkd sweep  --protocol {bb84,duplex} [options]   parameter grid

Options may also come from a config file of ``key = value`` lines (``#``
comments allowed) passed with ``--config``; keys are the long option names
with ``-`` or ``_``.  Command-line flags override the file.  The environment
variable ``DUPLEXQKD_SEED`` overrides the master seed from both.

Reports are written as a structured JSON document plus a comma-separated
table.  Output is a pure function of configuration and seed: rerunning with
the same inputs reproduces the report files byte for byte.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import stats
from .adversary import BasisPolicy, EveStrategy
from .bb84 import Bb84Config
from .duplex import (
    DuplexConfig,
    DuplexSessionResult,
    Transcript,
    TranscriptFormatError,
    bob_pairing_views,
    announce_bases,
    extract_key,
    filter_sets,
    make_pairs_search,
    make_triples_flip,
    party_bit_map,
    read_transcript,
    verify_triples,
)
from .quantum import ChannelModel

SEED_ENV_VAR = "DUPLEXQKD_SEED"

_EVE_BASIS_CHOICES = {
    "uniform": BasisPolicy.UNIFORM_RANDOM,
    "always_x": BasisPolicy.ALWAYS_X,
    "always_y": BasisPolicy.ALWAYS_Y,
}


def _json_bytes(payload) -> bytes:
    return (json.dumps(payload, sort_keys=True, indent=2) + "\n").encode("ascii")


def _add_run_options(parser: argparse.ArgumentParser, *, sweep: bool) -> None:
    listy = (lambda s: [float(x) for x in s.split(",") if x != ""]) if sweep else float
    parser.add_argument("--protocol", choices=["bb84", "duplex"], default="duplex")
    parser.add_argument(
        "--variant",
        choices=["flip_triples", "search_pairs"],
        default="flip_triples",
        help="duplex pair-publication variant",
    )
    parser.add_argument("--timeslots", type=int, default=200, help="timeslots per session")
    if sweep:
        parser.add_argument("--intercept", type=listy, default=[0.0], metavar="LIST")
        parser.add_argument("--flip", type=listy, default=[0.0], metavar="LIST")
        parser.add_argument("--loss", type=listy, default=[0.0], metavar="LIST")
        parser.add_argument(
            "--sweep-timeslots", type=lambda s: [int(x) for x in s.split(",") if x != ""],
            default=None, metavar="LIST", help="grid over timeslots per session",
        )
    else:
        parser.add_argument("--intercept", type=float, default=0.0, help="interception fraction")
        parser.add_argument("--flip", type=float, default=0.0, help="channel flip probability")
        parser.add_argument("--loss", type=float, default=0.0, help="channel loss probability")
    parser.add_argument(
        "--eve-basis", choices=sorted(_EVE_BASIS_CHOICES), default="uniform",
        help="eavesdropper basis policy",
    )
    parser.add_argument("--sample-fraction", type=float, default=0.25, help="bb84 compared fraction")
    parser.add_argument("--sample-count", type=int, default=None, help="bb84 fixed compared count")
    parser.add_argument(
        "--detection-threshold", type=float, default=0.0,
        help="bb84 flags a session when the error estimate exceeds this",
    )
    parser.add_argument(
        "--failure-policy", choices=["abort", "threshold"], default="abort",
        help="duplex reaction to verification failures",
    )
    parser.add_argument("--failure-threshold", type=float, default=0.0)
    parser.add_argument("--max-pairs", type=int, default=None, help="cap on checked duplex pairs")
    parser.add_argument(
        "--discard-searched-key", action="store_true",
        help="search_pairs: drop checked pairs from the key instead of keeping them",
    )
    parser.add_argument("--sessions", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0, help="master seed")
    parser.add_argument("--workers", type=int, default=1, help="process pool size")
    parser.add_argument("--out", type=Path, default=None, help="directory for report files")
    parser.add_argument(
        "--format", choices=["json", "csv", "both"], default="both",
        dest="out_format", help="which report files to write",
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="duplexqkd",
        description="Duplex BB84 simulator: eavesdropper detection without public bit comparison.",
    )
    parser.add_argument("--config", type=Path, default=None, help="key = value defaults file")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run seeded Monte Carlo sessions")
    _add_run_options(run, sweep=False)

    replay = sub.add_parser("replay", help="rerun the classical phase on a fixed transcript")
    replay.add_argument("transcript", type=Path, help="transcript file to replay")
    replay.add_argument(
        "--variant", choices=["flip_triples", "search_pairs"], default="flip_triples"
    )
    replay.add_argument("--json", type=Path, default=None, help="also write the report as JSON")

    sweep = sub.add_parser("sweep", help="cross a parameter grid, one aggregate per cell")
    _add_run_options(sweep, sweep=True)
    return parser


def _config_file_argv(path: Path) -> list[str]:
    """Turn a key = value file into argv tokens placed before the real flags."""
    argv: list[str] = []
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise SystemExit(f"duplexqkd: cannot read config file: {exc}")
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise SystemExit(
                f"duplexqkd: {path}:{line_number}: expected 'key = value', got {raw!r}"
            )
        key, value = (part.strip() for part in line.split("=", 1))
        flag = "--" + key.replace("_", "-")
        if value.lower() in ("true", "false"):
            if value.lower() == "true":
                argv.append(flag)
        else:
            argv.extend([flag, value])
    return argv


def _eve_from_args(args: argparse.Namespace, intercept: float) -> EveStrategy:
    if intercept == 0.0:
        return EveStrategy.absent()
    return EveStrategy.intercept_resend(intercept, _EVE_BASIS_CHOICES[args.eve_basis])


def _session_config(args: argparse.Namespace):
    channel = ChannelModel(loss_probability=args.loss, flip_probability=args.flip)
    eve = _eve_from_args(args, args.intercept)
    if args.protocol == "bb84":
        return Bb84Config(
            n_timeslots=args.timeslots,
            channel=channel,
            eve=eve,
            sample_fraction=args.sample_fraction,
            sample_count=args.sample_count,
            detection_threshold=args.detection_threshold,
        )
    return DuplexConfig(
        n_timeslots=args.timeslots,
        channel=channel,
        eve=eve,
        variant=args.variant,
        failure_policy=args.failure_policy,
        failure_threshold=args.failure_threshold,
        max_pairs=args.max_pairs,
        keep_searched_key=not args.discard_searched_key,
    )


def _echo_config(args: argparse.Namespace) -> dict:
    skip = {"command", "config", "out", "out_format", "func"}
    echo = {}
    for key, value in sorted(vars(args).items()):
        if key in skip:
            continue
        echo[key] = str(value) if isinstance(value, Path) else value
    return echo


def _write_reports(
    out: Path | None,
    out_format: str,
    payload: dict,
    csv_text: str,
    json_name: str,
    csv_name: str,
) -> None:
    if out is None:
        return
    out.mkdir(parents=True, exist_ok=True)
    if out_format in ("json", "both"):
        (out / json_name).write_bytes(_json_bytes(payload))
    if out_format in ("csv", "both"):
        (out / csv_name).write_bytes(csv_text.encode("ascii"))


def _sessions_csv(reports) -> str:
    lines = [",".join(stats.CSV_FIELDS)]
    for report in reports:
        row = report.to_dict()
        lines.append(",".join(_cell(row[f]) for f in stats.CSV_FIELDS))
    return "\n".join(lines) + "\n"


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _cmd_run(args: argparse.Namespace) -> int:
    config = _session_config(args)
    reports = stats.run_sessions(args.protocol, config, args.sessions, args.seed, args.workers)
    aggregate = stats.aggregate_reports(reports)
    payload = {
        "config": _echo_config(args),
        "aggregate": aggregate.to_dict(),
        "sessions": [r.to_dict() for r in reports],
    }
    _write_reports(args.out, args.out_format, payload, _sessions_csv(reports), "report.json", "sessions.csv")
    print(f"protocol={args.protocol} sessions={args.sessions} seed={args.seed}")
    print(f"detection_rate={aggregate.detection_rate!r}")
    print(f"mean_error_rate={aggregate.mean_error_rate!r}")
    print(f"mean_key_length={aggregate.mean_key_length!r}")
    print(f"keys_agree_rate={aggregate.keys_agree_rate!r}")
    if args.out is not None:
        print(f"reports written to {args.out}")
    return 0


def _replay_payload(transcript: Transcript, variant: str) -> dict:
    alice_bases = announce_bases(transcript, "alice")
    bob_bases = announce_bases(transcript, "bob")
    partition = filter_sets(transcript, alice_bases, bob_bases)
    set2_view, set3_view = bob_pairing_views(transcript, partition)
    if variant == "flip_triples":
        pairing = make_triples_flip(set2_view, set3_view)
        triples, unpaired = pairing.triples, pairing.unpaired
    else:
        pairing = make_pairs_search(set2_view, set3_view)
        triples = pairing.as_triples()
        unpaired = tuple(pairing.unmatched_set2) + tuple(pairing.unused_set3)
    verification = verify_triples(party_bit_map(transcript, "alice"), triples)
    failed = set(verification.failures)
    key_triples = [t for t in triples if t not in failed]
    alice_key = extract_key(key_triples, party_bit_map(transcript, "alice"))
    bob_key = extract_key(key_triples, party_bit_map(transcript, "bob"))
    return {
        "n_timeslots": len(transcript),
        "variant": variant,
        "discard": sorted(partition.discard),
        "set2": list(partition.set2),
        "set3": list(partition.set3),
        "triples": [list(t.announced()) for t in triples],
        "unpaired": sorted(unpaired),
        "checked_pairs": verification.checked_pairs,
        "failures": [list(t.announced()) for t in verification.failures],
        "passed": verification.passed,
        "alice_key": alice_key,
        "bob_key": bob_key,
        "keys_agree": alice_key == bob_key,
    }


def _cmd_replay(args: argparse.Namespace) -> int:
    try:
        transcript = read_transcript(args.transcript)
    except TranscriptFormatError as exc:
        print(f"duplexqkd: {args.transcript}: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"duplexqkd: cannot read transcript: {exc}", file=sys.stderr)
        return 1
    payload = _replay_payload(transcript, args.variant)
    print(f"timeslots: {payload['n_timeslots']}")
    print("discard:", " ".join(map(str, payload["discard"])))
    print("set2:", " ".join(map(str, payload["set2"])))
    print("set3:", " ".join(map(str, payload["set3"])))
    print("triples:", " ".join(f"({a},{b},{f})" for a, b, f in payload["triples"]))
    print("unpaired:", " ".join(map(str, payload["unpaired"])))
    verdict = "PASS" if payload["passed"] else "FAIL"
    print(
        f"verification: {payload['checked_pairs']} checked, "
        f"{len(payload['failures'])} failed -> {verdict}"
    )
    print("alice_key:", "".join(map(str, payload["alice_key"])))
    print("bob_key:  ", "".join(map(str, payload["bob_key"])))
    print("keys_agree:", "yes" if payload["keys_agree"] else "no")
    if args.json is not None:
        args.json.parent.mkdir(parents=True, exist_ok=True)
        args.json.write_bytes(_json_bytes(payload))
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    grid: dict[str, list] = {}
    if args.intercept:
        grid["intercept_fraction"] = args.intercept
    if args.flip:
        grid["flip_probability"] = args.flip
    if args.loss:
        grid["loss_probability"] = args.loss
    if args.sweep_timeslots:
        grid["n_timeslots"] = args.sweep_timeslots
    if not grid:
        print("duplexqkd: sweep grid is empty", file=sys.stderr)
        return 2
    # Swept parameters are applied per cell; the base config holds neutral values.
    base = argparse.Namespace(**vars(args))
    base.intercept, base.flip, base.loss = 0.0, 0.0, 0.0
    config = _session_config(base)
    result = stats.run_sweep(
        args.protocol, config, grid, args.sessions, args.seed, args.workers
    )
    payload = {"config": _echo_config(args), "sweep": result.to_dict()}
    _write_reports(args.out, args.out_format, payload, result.to_csv(), "sweep.json", "sweep.csv")
    print(result.to_csv(), end="")
    if args.out is not None:
        print(f"reports written to {args.out}")
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()

    # A config file supplies defaults: its tokens are spliced in right after
    # the subcommand, so later (explicit) command-line flags win.
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", type=Path, default=None)
    known, _ = pre.parse_known_args(argv)
    if known.config is not None:
        file_argv = _config_file_argv(known.config)
        insert_at = None
        skip_next = False
        for i, token in enumerate(argv):
            if skip_next:
                skip_next = False
                continue
            if token == "--config":
                skip_next = True
                continue
            if token.startswith("--config="):
                continue
            insert_at = i + 1
            break
        if insert_at is None:
            print("duplexqkd: --config given without a subcommand", file=sys.stderr)
            return 2
        argv = argv[:insert_at] + file_argv + argv[insert_at:]

    args = parser.parse_args(argv)

    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None and hasattr(args, "seed"):
        try:
            args.seed = int(env_seed)
        except ValueError:
            print(f"duplexqkd: {SEED_ENV_VAR} must be an integer, got {env_seed!r}", file=sys.stderr)
            return 2

    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "replay":
            return _cmd_replay(args)
        return _cmd_sweep(args)
    except ValueError as exc:
        print(f"duplexqkd: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())

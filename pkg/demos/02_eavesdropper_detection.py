"""How fast the duplex scheme catches an intercept-resend attacker.

A full-interception attacker corrupts each checked pair with probability
3/8, so a session that checks n pairs slips past with probability (5/8)^n.
This script measures detection empirically against that closed form and
then sweeps the interception fraction.
"""

from duplexqkd import (
    ChannelModel,
    DuplexConfig,
    EveStrategy,
    pair_error_probability,
    run_sessions,
    run_sweep,
    undetected_probability,
)

SESSIONS = 2000

print("pairs checked | detection measured | detection predicted")
for n_pairs, timeslots in ((1, 40), (2, 40), (5, 60), (10, 120)):
    config = DuplexConfig(
        n_timeslots=timeslots,
        eve=EveStrategy.intercept_resend(),
        max_pairs=n_pairs,
    )
    reports = run_sessions("duplex", config, SESSIONS, master_seed=7)
    measured = sum(r.detected for r in reports) / SESSIONS
    p_pair = pair_error_probability(config.eve, config.channel)
    predicted = 1.0 - undetected_probability(n_pairs, p_pair)
    print(f"{n_pairs:>13} | {measured:>18.4f} | {predicted:>19.4f}")

print("\nsweep over the interception fraction (5 checked pairs per session):")
result = run_sweep(
    "duplex",
    DuplexConfig(n_timeslots=60, max_pairs=5),
    grid={"intercept_fraction": [0.0, 0.25, 0.5, 0.75, 1.0]},
    sessions=SESSIONS,
    master_seed=21,
)
print(f"{'intercept':>9} | {'pair failure rate':>17} | {'detection rate':>14}")
for row in result.rows:
    print(
        f"{row['intercept_fraction']:>9.2f} | {row['pair_failure_rate']:>17.4f} | "
        f"{row['detection_rate']:>14.4f}"
    )
print("\nEvery checked pair is also a key candidate: nothing was sacrificed.")

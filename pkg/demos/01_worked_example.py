"""Walk through the bundled 20-slot worked example, step by step.

The transcript interleaves the two directions: Alice sends in odd timeslots,
Bob in even ones.  Everything below the quantum phase is classical
post-processing, and the only values ever published are basis choices,
discarded timeslot numbers, and timeslot pairs with their flip bits.
"""

from duplexqkd import (
    announce_bases,
    bob_pairing_views,
    extract_key,
    filter_sets,
    make_pairs_search,
    make_triples_flip,
    party_bit_map,
    read_transcript,
    verify_triples,
)
from duplexqkd.duplex import example_transcript_path

transcript = read_transcript(example_transcript_path())
print(f"{len(transcript)} timeslots; odd = Alice sends, even = Bob sends\n")

for record in transcript:
    received = "LOST" if record.receiver_bit is None else record.receiver_bit
    tag = "match" if record.bases_match else "basis mismatch"
    print(
        f"  t={record.timeslot:>2}  {record.direction.value}  "
        f"sent {record.sender_bit} in {record.sender_basis}, "
        f"read {received} in {record.receiver_basis}  ({tag})"
    )

# Alice announces all her bases; Bob filters into the three sets.
partition = filter_sets(
    transcript, announce_bases(transcript, "alice"), announce_bases(transcript, "bob")
)
print("\ndiscard (mismatch or loss):", sorted(partition.discard))
print("set 2  (Alice sent, kept): ", list(partition.set2))
print("set 3  (Bob sent, kept):   ", list(partition.set3))

# Bob pairs the two sets positionally and publishes flip bits.
set2_view, set3_view = bob_pairing_views(transcript, partition)
pairing = make_triples_flip(set2_view, set3_view)
print("\npublished triples (later slot first, then the flip bit):")
for triple in pairing.triples:
    print("  ", triple.announced())
print("unpaired leftover:", list(pairing.unpaired))

# Alice checks every pair against her own records: one odd error anywhere
# in a pair would break the parity.
alice_bits = party_bit_map(transcript, "alice")
verification = verify_triples(alice_bits, pairing.triples)
print(
    f"\nverification: {verification.checked_pairs} pairs checked, "
    f"{len(verification.failures)} failed"
)

# Each verified pair contributes its set-2 bit as one key bit.
alice_key = extract_key(pairing.triples, alice_bits)
bob_key = extract_key(pairing.triples, party_bit_map(transcript, "bob"))
print("alice key:", "".join(map(str, alice_key)))
print("bob key:  ", "".join(map(str, bob_key)))

# The search variant reaches the same goal without flip bits: Bob hunts for
# a set-3 slot holding the same bit value.
search = make_pairs_search(set2_view, set3_view)
print("\nsearch-variant pairs:", list(search.pairs))
print("unmatched set-2 slots:", list(search.unmatched_set2))
print("unused set-3 slots:   ", list(search.unused_set3))

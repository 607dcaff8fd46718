import random

import pytest
from hypothesis import settings

from duplexqkd import Basis, Direction, SlotRecord, Transcript, read_transcript
from duplexqkd.duplex import example_transcript_path

settings.register_profile("suite", max_examples=60, deadline=None)
settings.load_profile("suite")


# The bundled 20-slot worked example, spelled out column by column.
# Odd slots: Alice sends, Bob measures.  Even slots: Bob sends, Alice measures.
ODD_ROWS = [
    # (timeslot, alice_basis, alice_bit, bob_basis, bob_bit)
    (1, "X", 1, "Y", 0),
    (3, "X", 1, "X", 1),
    (5, "Y", 1, "Y", 1),
    (7, "X", 0, "Y", 1),
    (9, "Y", 1, "Y", 1),
    (11, "X", 1, "X", 1),
    (13, "Y", 0, "X", 1),
    (15, "Y", 1, "Y", 1),
    (17, "Y", 0, "Y", 0),
    (19, "X", 0, "Y", 0),
]
EVEN_ROWS = [
    # (timeslot, bob_basis, bob_bit, alice_basis, alice_bit)
    (2, "X", 0, "X", 0),
    (4, "X", 0, "Y", 1),
    (6, "Y", 1, "Y", 1),
    (8, "X", 1, "X", 1),
    (10, "X", 1, "X", 1),
    (12, "Y", 0, "X", 0),
    (14, "Y", 0, "Y", 0),
    (16, "Y", 1, "Y", 1),
    (18, "X", 0, "X", 0),
    (20, "Y", 0, "X", 1),
]

EXPECTED_DISCARD = {1, 4, 7, 12, 13, 19, 20}
EXPECTED_SET2 = (3, 5, 9, 11, 15, 17)
EXPECTED_SET3 = (2, 6, 8, 10, 14, 16, 18)
EXPECTED_TRIPLES = [(3, 2, 1), (6, 5, 0), (9, 8, 0), (11, 10, 0), (15, 14, 1), (17, 16, 1)]
EXPECTED_UNPAIRED = (18,)
EXPECTED_KEY = [1, 1, 1, 1, 1, 0]
# Greedy same-bit-value matching, hand-traced over the two set views.
EXPECTED_SEARCH_PAIRS = ((3, 6), (5, 8), (9, 10), (11, 16), (17, 2))
EXPECTED_SEARCH_UNMATCHED = (15,)
EXPECTED_SEARCH_UNUSED = (14, 18)


def worked_example_records() -> list[SlotRecord]:
    records = []
    for t, ab, abit, bb, bbit in ODD_ROWS:
        records.append(
            SlotRecord(t, Direction.ALICE_TO_BOB, Basis(ab), abit, Basis(bb), bbit)
        )
    for t, bb, bbit, ab, abit in EVEN_ROWS:
        records.append(
            SlotRecord(t, Direction.BOB_TO_ALICE, Basis(bb), bbit, Basis(ab), abit)
        )
    records.sort(key=lambda r: r.timeslot)
    return records


@pytest.fixture(scope="session")
def example_path():
    return example_transcript_path()


@pytest.fixture(scope="session")
def example_transcript(example_path) -> Transcript:
    return read_transcript(example_path)


@pytest.fixture
def rng() -> random.Random:
    return random.Random(12345)

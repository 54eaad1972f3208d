import bnras
from bnras.rng import _splitmix64


def test_same_seed_same_sequence():
    a = bnras.RandomStream(12345)
    b = bnras.RandomStream(12345)
    assert [a.random() for _ in range(100)] == [b.random() for _ in range(100)]


def test_different_seeds_differ():
    a = bnras.RandomStream(1)
    b = bnras.RandomStream(2)
    assert [a.random() for _ in range(10)] != [b.random() for _ in range(10)]


def test_draws_in_unit_interval():
    rng = bnras.RandomStream(7)
    for _ in range(10000):
        u = rng.random()
        assert 0.0 <= u < 1.0


def test_spawn_deterministic_and_distinct():
    rng = bnras.RandomStream(42)
    kids = [rng.spawn(i) for i in range(8)]
    again = [bnras.RandomStream(42).spawn(i) for i in range(8)]
    seeds = [k.seed_value for k in kids]
    assert seeds == [k.seed_value for k in again]
    assert len(set(seeds)) == 8
    assert kids[0].random() == again[0].random()


def test_spawn_independent_of_parent_state():
    rng = bnras.RandomStream(42)
    rng.random()
    rng.random()
    assert rng.spawn(3).seed_value == bnras.RandomStream(42).spawn(3).seed_value


def test_derive_stream_seed_matches_spawn():
    master = bnras.RandomStream(99)
    assert master.spawn(5).seed_value == bnras.derive_stream_seed(99, 5)


def test_splitmix_mixes_against_reference():
    # independent transcription of the SplitMix64 finalizer
    def finalizer(x):
        mask = (1 << 64) - 1
        x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & mask
        x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & mask
        return (x ^ (x >> 31)) & mask

    for value in (0, 1, 2**32, 2**63 + 17):
        assert _splitmix64(value) == finalizer(value)


def test_seed_value_masked_to_64_bits():
    big = (1 << 70) + 123
    assert bnras.RandomStream(big).seed_value == big & ((1 << 64) - 1)

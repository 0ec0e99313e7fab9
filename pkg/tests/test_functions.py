import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import stats

from multiclaw.functions import (
    ClawWitness,
    CollisionWitness,
    FunctionTable,
    image_size,
    partition_domain,
    restrict_domain,
    sample_random_function,
    verify_claw,
    verify_collision,
)


def identity(n):
    return FunctionTable.from_values(range(n))


def test_single_point_function():
    f = sample_random_function(1, 1, seed=123)
    assert f.values.tolist() == [0]


def test_sampling_is_deterministic_under_seed():
    a = sample_random_function(8, 256, seed=5)
    b = sample_random_function(8, 256, seed=5)
    assert a == b
    assert a != sample_random_function(8, 256, seed=6)


@pytest.mark.parametrize("domain, rng", [(0, 4), (4, 0)])
def test_empty_domain_or_range_rejected(domain, rng):
    with pytest.raises(ValueError):
        sample_random_function(domain, rng, seed=0)


def test_sampler_is_uniform_chi_square():
    n = 2**20
    f = sample_random_function(n, n, seed=2024)
    # bin the range into 1024 buckets so expected counts are large
    buckets = np.bincount(f.values >> 10, minlength=1024)
    assert stats.chisquare(buckets).pvalue > 0.01


def test_table_is_immutable():
    f = sample_random_function(16, 4, seed=0)
    with pytest.raises(ValueError):
        f.values[0] = 1


@pytest.mark.parametrize("values", [[0, 4], [-1, 0], [[0, 1]]])
def test_values_must_lie_in_range(values):
    with pytest.raises(ValueError):
        FunctionTable(2, 4, np.array(values))


def test_image_size_examples():
    assert image_size(FunctionTable.from_values([3] * 8, range_size=5)) == 1
    assert image_size(identity(16)) == 16


@given(st.lists(st.integers(0, 9), min_size=1, max_size=50))
def test_image_size_matches_set(values):
    f = FunctionTable.from_values(values, range_size=10)
    assert image_size(f) == len(set(values))


def test_verify_claw_examples():
    fs = [identity(4), identity(4)]
    assert verify_claw(fs, ClawWitness((2, 2), 2))
    assert not verify_claw(fs, ClawWitness((2, 3), 2))


def test_verify_claw_rejects_bad_input():
    fs = [identity(4), identity(4)]
    with pytest.raises(ValueError):
        verify_claw(fs, ClawWitness((2, 4), 2))
    with pytest.raises(ValueError):
        verify_claw(fs, ClawWitness((2,), 2))


def test_verify_collision_examples():
    half = FunctionTable.from_values([x // 2 for x in range(8)])
    assert verify_collision(half, CollisionWitness((4, 5), 2))
    assert not verify_collision(half, CollisionWitness((4, 4), 2))
    const = FunctionTable.from_values([6] * 8, range_size=7)
    assert verify_collision(const, CollisionWitness((0, 1, 2), 6))


def test_partition_examples():
    assert partition_domain(12, 3) == [range(0, 4), range(4, 8), range(8, 12)]
    assert [len(r) for r in partition_domain(13, 3)] == [5, 4, 4]
    assert all(len(r) == 64 for r in partition_domain(4 * 64, 4))
    with pytest.raises(ValueError):
        partition_domain(2, 3)


@given(st.integers(1, 100).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n))))
def test_partition_covers_domain_disjointly(args):
    n, ell = args
    parts = partition_domain(n, ell)
    assert len(parts) == ell
    assert sorted(itertools.chain.from_iterable(parts)) == list(range(n))
    assert max(map(len, parts)) - min(map(len, parts)) <= 1


def test_restrict_domain():
    f = sample_random_function(8, 5, seed=1)
    assert restrict_domain(f, 8) is f
    assert restrict_domain(f, 4).values.tolist() == f.values[:4].tolist()
    N, c = 100, 3.0
    g = sample_random_function(int(N * c), N, seed=1)
    assert restrict_domain(g, 34).domain_size == 34
    with pytest.raises(ValueError):
        restrict_domain(f, 9)


@pytest.mark.parametrize("ell", [2, 3])
def test_claw_of_parts_is_collision_exhaustive(ell):
    """Every claw of the restrictions to a partition is a collision of the whole."""
    for n in range(ell, 7):
        parts = partition_domain(n, ell)
        for r in range(1, 5):
            for values in itertools.product(range(r), repeat=n):
                f = FunctionTable(n, r, np.array(values))
                pieces = [f.slice(p.start, p.stop) for p in parts]
                for xs in itertools.product(*(range(len(p)) for p in parts)):
                    y = pieces[0](xs[0])
                    claw = ClawWitness(xs, y)
                    if verify_claw(pieces, claw):
                        glob = tuple(p.start + x for p, x in zip(parts, xs))
                        assert verify_collision(f, CollisionWitness(glob, y))


def test_json_round_trip():
    f = sample_random_function(50, 7, seed=9)
    assert FunctionTable.from_json(f.to_json()) == f


@given(st.lists(st.integers(0, 2**40), min_size=1, max_size=40))
def test_binary_round_trip(values):
    f = FunctionTable.from_values(values, range_size=2**40 + 1)
    g = FunctionTable.from_bytes(f.to_bytes())
    assert g == f and g.range_size == f.range_size


def test_binary_rejects_garbage():
    with pytest.raises(ValueError):
        FunctionTable.from_bytes(b"nope" + bytes(16))

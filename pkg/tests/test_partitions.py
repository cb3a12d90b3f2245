import pytest

from qtau.partitions import (
    ENUMERATION_CEILING,
    arm,
    cells,
    conjugate,
    enumerate_pairs_upto,
    enumerate_partitions,
    leg,
    make_partition,
    weight,
)

SMALL = [lam for k in range(11) for lam in enumerate_partitions(k)]


def test_make_partition_validates():
    assert make_partition([3, 1, 0]) == (3, 1)
    with pytest.raises(ValueError):
        make_partition([1, 2])
    with pytest.raises(ValueError):
        make_partition([2, -1])


def test_conjugate_examples():
    assert conjugate(()) == ()
    assert conjugate((1,)) == (1,)
    assert conjugate((3, 1)) == (2, 1, 1)


def test_arm_leg_examples():
    assert (arm((), (1, 1)), leg((), (1, 1))) == (-1, -1)
    assert (arm((1,), (1, 1)), leg((1,), (1, 1))) == (0, 0)
    # conj((3, 1))[1] == 1, so the leg of (1, 2) is 1 - 1 = 0
    assert (arm((3, 1), (1, 2)), leg((3, 1), (1, 2))) == (1, 0)
    assert leg((3, 1), (2, 2)) == -1


def test_enumeration_counts_and_order():
    assert enumerate_partitions(0) == ((),)
    assert enumerate_partitions(3) == ((3,), (2, 1), (1, 1, 1))
    assert len(enumerate_partitions(5)) == 7
    assert [len(enumerate_partitions(k)) for k in range(11)] == [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]


def test_pair_enumeration():
    assert enumerate_pairs_upto(0) == (((), ()),)
    assert len(enumerate_pairs_upto(1)) == 3
    pairs = enumerate_pairs_upto(4)
    assert len(pairs) == 38
    totals = [weight(a) + weight(b) for a, b in pairs]
    assert totals == sorted(totals)
    assert len(set(pairs)) == len(pairs)


def test_ceiling():
    with pytest.raises(ValueError):
        enumerate_partitions(ENUMERATION_CEILING + 1)
    with pytest.raises(ValueError):
        enumerate_pairs_upto(-1)


@pytest.mark.parametrize("lam", [lam for lam in SMALL if weight(lam) <= 12])
def test_conjugation_is_weight_preserving_involution(lam):
    assert conjugate(conjugate(lam)) == lam
    assert weight(conjugate(lam)) == weight(lam)


def test_arm_leg_duality():
    for lam in (l for l in SMALL if weight(l) <= 8):
        lc = conjugate(lam)
        for i in range(1, 9):
            for j in range(1, 9):
                assert arm(lam, (i, j)) == leg(lc, (j, i))


def test_content_sum_identity():
    for lam in SMALL:
        lhs = sum(leg(lam, c) + arm((), c) + 1 for c in cells(lam))
        assert lhs == sum(i - j for i, j in cells(lam))

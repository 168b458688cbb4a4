import pytest

from cubic_scan.partitions import (
    PartitionKind,
    PartitionTable,
    a_series,
    congruence_violations,
    dp_oracle,
    p_pentagonal,
    p_series,
    partition_table,
)
from cubic_scan.products import euler
from cubic_scan.series import invert, mul

MAX_N = 2000


def test_p_series():
    """Test p_series function."""
    assert p_series(5).values == (1, 1, 2, 3, 5, 7)
    assert p_series(24)[24] == 1575
    assert p_series(0).values == (1,)
    assert p_series(10).limit == 10
    assert len(p_series(10)) == 11


def test_p_pentagonal():
    """Test p_pentagonal function."""
    assert p_pentagonal(100) == p_series(100)
    assert p_pentagonal(4)[4] == 5
    assert p_pentagonal(1)[1] == 1


def test_a_series():
    """Test a_series function."""
    assert a_series(2)[2] == 3
    assert a_series(5)[5] == 12
    assert a_series(8)[8] == 54
    assert a_series(0)[0] == 1
    assert a_series(8).values == (1, 1, 3, 4, 9, 12, 23, 31, 54)
    # the sparse route equals inverting the product directly
    assert a_series(150).as_series() == invert(mul(euler(1, 150), euler(2, 150)))


def test_dp_oracle():
    """Test dp_oracle function."""
    assert dp_oracle(PartitionKind.CUBIC, 5)[5] == 12
    assert dp_oracle(PartitionKind.CUBIC, 1)[1] == 1
    assert dp_oracle(PartitionKind.ORDINARY, 0).values == (1,)
    with pytest.raises(ValueError, match="non-negative"):
        dp_oracle(PartitionKind.ORDINARY, -1)


@pytest.mark.parametrize(("n", "p", "a"), [(2, 2, 3), (4, 5, 9), (5, 7, 12), (8, 22, 54), (24, 1575, None)])
def test_anchor_coefficients(n, p, a):
    """Anchor values agree between the series route and the counting oracle."""
    assert p_series(n)[n] == dp_oracle(PartitionKind.ORDINARY, n)[n] == p
    if a is not None:
        assert a_series(n)[n] == dp_oracle(PartitionKind.CUBIC, n)[n] == a


def test_three_routes_agree():
    """Series inversion, the pentagonal recurrence and the counting oracle give the same tables."""
    assert p_series(200).values == p_pentagonal(200).values == dp_oracle(PartitionKind.ORDINARY, 200).values
    assert a_series(120).values == dp_oracle(PartitionKind.CUBIC, 120).values


def test_table_invariants():
    """Values start at 1, never decrease, and cubic counts dominate ordinary ones."""
    p, a = p_series(150), a_series(150)
    assert p[0] == a[0] == 1
    assert all(0 < x <= y for x, y in zip(p.values[1:], p.values[2:], strict=False))
    assert all(0 < x <= y for x, y in zip(a.values[1:], a.values[2:], strict=False))
    assert all(pn <= an for pn, an in zip(p.values, a.values, strict=True))


def test_partition_table():
    """Test partition_table dispatch."""
    assert partition_table(PartitionKind.ORDINARY, 10) == p_series(10)
    assert partition_table(PartitionKind.CUBIC, 10).kind is PartitionKind.CUBIC


def test_congruence_violations():
    """Test congruence_violations on a small table."""
    table = PartitionTable(PartitionKind.ORDINARY, (1, 2, 3, 4, 5))
    assert congruence_violations(table, 1, 0, 2) == [0, 2, 4]
    assert congruence_violations(table, 2, 1, 2) == []
    # no index m n + r fits under the limit
    assert congruence_violations(table, 7, 5, 7) == []


@pytest.mark.parametrize(
    ("kind", "m", "r", "modulus"),
    [
        (PartitionKind.ORDINARY, 5, 4, 5),
        (PartitionKind.ORDINARY, 7, 5, 7),
        (PartitionKind.CUBIC, 3, 2, 3),
        (PartitionKind.CUBIC, 9, 8, 27),
    ],
)
def test_congruences_hold(kind, m, r, modulus):
    """The four congruence families hold for every n <= 2000."""
    table = partition_table(kind, m * MAX_N + r)
    assert congruence_violations(table, m, r, modulus) == []


def test_congruence_is_not_vacuous():
    """A wrong modulus is caught."""
    assert congruence_violations(p_series(100), 5, 4, 4)[0] == 0

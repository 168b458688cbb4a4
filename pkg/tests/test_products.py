import pytest

from cubic_scan.partitions import a_series
from cubic_scan.products import (
    Factor,
    NamedFunction,
    NamedTag,
    ProductSpec,
    euler,
    eval_product_spec,
    p_func,
    phi_neg,
    phi_neg_product,
    pochhammer,
    psi,
    psi_product,
    x_neg,
)
from cubic_scan.series import (
    TruncatedSeries,
    dissect,
    mul,
    nonzero_terms,
    power,
    substitute_power,
    truncate,
)

N = 200


def test_pochhammer():
    """Test pochhammer function."""
    assert nonzero_terms(pochhammer(1, 1, 15)) == [(0, 1), (1, -1), (2, -1), (5, 1), (7, 1), (12, -1), (15, -1)]
    # change of variable
    assert pochhammer(2, 2, N) == truncate(substitute_power(pochhammer(1, 1, N // 2), 2), N)
    # even and odd factors
    assert mul(pochhammer(1, 2, N), pochhammer(2, 2, N)) == pochhammer(1, 1, N)
    # residue classes of (q^6; q^6) split mod 18
    split = mul(mul(pochhammer(6, 18, N), pochhammer(12, 18, N)), pochhammer(18, 18, N))
    assert split == pochhammer(6, 6, N)

    with pytest.raises(ValueError, match="a >= 1"):
        pochhammer(0, 1, 10)


@pytest.mark.parametrize("k", [1, 2, 3, 9, 18])
def test_euler_matches_pochhammer(k):
    """The pentagonal expansion equals the direct product."""
    assert euler(k, N) == pochhammer(k, k, N)


def test_euler_partition_numbers():
    """Test the reciprocal of the Euler function against known partition numbers."""
    p = power(euler(1, 24), -1)
    assert p[24] == 1575
    assert p[24] == 63 * 5**2


def test_phi_neg():
    """Test phi_neg function."""
    assert phi_neg(1, 10).coeffs == (1, -2, 0, 0, 2, 0, 0, 0, 0, -2, 0)
    assert phi_neg(9, 900) == truncate(substitute_power(phi_neg(1, 100), 9), 900)
    with pytest.raises(ValueError, match="positive"):
        phi_neg(0, 10)


def test_psi():
    """Test psi function."""
    assert nonzero_terms(psi(1, 10)) == [(0, 1), (1, 1), (3, 1), (6, 1), (10, 1)]
    assert psi(3, 30) == truncate(substitute_power(psi(1, 10), 3), 30)


def test_theta_sum_and_product_forms_agree():
    """The theta sums equal their eta-product forms to order 1000."""
    assert phi_neg(1, 1000) == phi_neg_product(1, 1000)
    assert psi(1, 1000) == psi_product(1, 1000)
    assert phi_neg(3, 1000) == phi_neg_product(3, 1000)


def test_theta_products():
    """phi(-q) psi(q) = (q;q) (q^2;q^2) and X(-q) P(q) = (q^3;q^3) (q^6;q^6)."""
    assert mul(phi_neg(1, N), psi(1, N)) == mul(euler(1, N), euler(2, N))
    assert mul(phi_neg(9, N), psi(9, N)) == mul(euler(9, N), euler(18, N))
    assert mul(x_neg(1, N), p_func(1, N)) == mul(euler(3, N), euler(6, N))


def test_p_func_and_x_neg():
    """Test p_func and x_neg functions."""
    assert p_func(1, 10)[0] == 1
    assert x_neg(1, 10)[0] == 1
    assert x_neg(3, 300) == truncate(substitute_power(x_neg(1, 100), 3), 300)
    assert p_func(3, 300) == truncate(substitute_power(p_func(1, 100), 3), 300)
    with pytest.raises(ValueError, match="positive"):
        x_neg(0, 10)


def test_eval_product_spec():
    """Test eval_product_spec function."""
    assert eval_product_spec(ProductSpec(), 5) == TruncatedSeries.constant(1, 5)

    chan = ProductSpec.eta(3, 0, {3: 3, 6: 3, 1: -4, 2: -4})
    assert eval_product_spec(chan, 60) == dissect(a_series(3 * 60 + 2).as_series(), 3, 2)

    shifted = ProductSpec.eta(19 * 3**4, 2, {3: 12, 6: 12, 1: -13, 2: -13})
    f = eval_product_spec(shifted, 10)
    assert (f[0], f[1], f[2]) == (0, 0, 19 * 3**4)

    # q-power past the order leaves nothing
    assert eval_product_spec(ProductSpec(qpower=8), 5) == TruncatedSeries.zero(5)


def test_eval_product_spec_matches_factor_by_factor():
    """The one-pass expansion equals multiplying powers of the factors."""
    spec = ProductSpec(
        scalar=-7,
        qpower=1,
        factors=(Factor(3, 3, 3), Factor(1, 2, -2), Factor(2, 6, 1), Factor(1, 1, -4)),
    )
    expected = TruncatedSeries.monomial(-7, 1, N)
    for factor in spec.factors:
        expected = mul(expected, power(pochhammer(factor.a, factor.b, N), factor.e))
    assert eval_product_spec(spec, N) == expected


def test_product_spec_render():
    """Test ProductSpec.render method."""
    chan = ProductSpec.eta(3, 0, {3: 3, 6: 3, 1: -4, 2: -4})
    assert chan.render() == "3 * E(3,3)^3 * E(6,6)^3 / (E(1,1)^4 * E(2,2)^4)"
    assert ProductSpec.eta(-576, 11, {3: 3, 18: 17, 6: -3, 9: -1}).render() == (
        "-576 * q^11 * E(3,3)^3 * E(18,18)^17 / (E(6,6)^3 * E(9,9))"
    )
    assert ProductSpec.eta(1, 1, {1: -1}).render() == "q / E(1,1)"
    assert ProductSpec().render() == "1"


def test_product_spec_validation():
    """Test ProductSpec and Factor validation."""
    with pytest.raises(ValueError, match="non-negative"):
        ProductSpec(qpower=-1)
    with pytest.raises(ValueError, match="a >= 1"):
        Factor(0, 1, 1)
    assert ProductSpec.eta(5, 0, {5: 5}).with_scalar_offset(1).scalar == 6


def test_named_function():
    """Test NamedFunction methods."""
    phi9 = NamedFunction(NamedTag.PHI_NEG, 9)
    assert phi9.render() == "phi(9)"
    assert phi9.series(300) == phi9.product_form(300)
    assert NamedFunction(NamedTag.PSI, 1).sum_form(100) == psi(1, 100)
    assert NamedFunction(NamedTag.X_NEG, 3).series(100) == x_neg(3, 100)
    assert NamedFunction(NamedTag.P).product_spec().render() == "E(2,6) * E(4,6) * E(3,3)^2 / E(1,1)"

    with pytest.raises(ValueError, match="no theta-sum form"):
        NamedFunction(NamedTag.P).sum_form(10)
    with pytest.raises(ValueError, match="positive"):
        NamedFunction(NamedTag.PSI, 0)

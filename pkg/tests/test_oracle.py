"""Dense-matrix length oracle: counts, stability certificate, caps."""

import pytest

from hilbertkunz.errors import HilbertKunzError, MatrixTooLarge
from hilbertkunz.groebner import FreeElement
from hilbertkunz.oracle import (
    build_system,
    exact_box_count,
    monomials_up_to,
    oracle_length,
)
from hilbertkunz.poly import parse_polynomial, ring


def polys(S, *texts):
    return [parse_polynomial(t, S) for t in texts]


def test_monomials_up_to():
    ms = monomials_up_to(2, 2)
    assert set(ms) == {(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)}
    assert monomials_up_to(3, 0) == [(0, 0, 0)]
    assert monomials_up_to(2, -1) == []


def test_pure_power_pair():
    S = ring("x y", 5)
    count, stable = oracle_length(polys(S, "x^2", "y^3"), 1, 5, 6)
    assert (count, stable) == (6, True)


def test_quintic_collapses_into_the_box():
    # x^5 - y^5 lies inside (x^2, y^2), so the count is the plain 2x2 box
    S = ring("x y", 2)
    gens = polys(S, "x^5 + y^5", "x^2", "y^2")
    count, stable = oracle_length(gens, 1, 2, 5)
    assert (count, stable) == (4, True)
    assert exact_box_count(gens, 1, 2) == 4


def test_determinantal_point():
    S = ring("u v w x y z", 2)
    gens = polys(
        S,
        "v*z + w*y", "w*x + u*z", "u*y + v*x",
        "u^2", "v^2", "w^2", "x^2", "y^2", "z^2",
    )
    count, stable = oracle_length(gens, 1, 2, 7)
    assert (count, stable) == (23, True)
    assert exact_box_count(gens, 1, 2) == 23


def test_unstable_below_saturation():
    S = ring("x y", 5)
    count, stable = oracle_length(polys(S, "x^2", "y^3"), 1, 5, 3)
    assert not stable
    assert count >= 6  # truncated counts over-estimate, never under


def test_counts_non_increasing_in_degree():
    S = ring("x y", 3)
    gens = polys(S, "x^3 + x*y", "y^2 + x", "x^4", "y^4")
    counts = [build_system(gens, 1, 3, d).count for d in range(4, 12)]
    assert all(a >= b for a, b in zip(counts, counts[1:]))


def test_plateau_alone_does_not_certify():
    """The count can sit still for one degree and then keep falling; the
    certificate must not fire until the true value is reached. Here the
    ideal is the unit ideal: 1 = (x^2+1)^2 + x^4 over F_2."""
    S = ring("x y", 2)
    gens = polys(S, "x^4", "y^6", "x^2*y^4 + x^2 + 1", "x^2*y^2")
    assert exact_box_count(gens, 1, 2) == 0
    seen_false_plateau = False
    prev = None
    for d in range(5, 14):
        count, stable = oracle_length(gens, 1, 2, d)
        if stable:
            assert count == 0
            break
        if prev is not None and count == prev and count != 0:
            seen_false_plateau = True
        prev = count
    else:
        pytest.fail("never stabilized")
    assert seen_false_plateau


def test_module_rank_two():
    # S^2 / (x e1, y e1, (x+y) e2, x^2 e2, y^2 e2): component 1 contributes
    # 1, component 2 contributes 2 (x^2, y^2, and x+y cut the 2x2 box to 2)
    S = ring("x y", 2)
    zero = S.zero()
    x, y = S.variable(0), S.variable(1)
    rels = [
        FreeElement((x, zero)),
        FreeElement((y, zero)),
        FreeElement((zero, x + y)),
        FreeElement((zero, x * x)),
        FreeElement((zero, y * y)),
    ]
    count, stable = oracle_length(rels, 2, 2, 4)
    assert stable
    assert count == 3


def test_rank_mismatch_rejected():
    S = ring("x y", 2)
    with pytest.raises(HilbertKunzError, match="rank"):
        oracle_length(polys(S, "x^2"), 2, 2, 4)


def test_wrong_characteristic_rejected():
    S = ring("x y", 3)
    with pytest.raises(HilbertKunzError, match="p="):
        oracle_length(polys(S, "x^2", "y^2"), 1, 2, 4)


def test_matrix_cap():
    S = ring("x y z", 2)
    gens = polys(S, "x^2", "y^2", "z^2")
    with pytest.raises(MatrixTooLarge):
        oracle_length(gens, 1, 2, 60, cell_cap=10_000)


def test_no_pure_powers_no_certificate():
    S = ring("x y", 2)
    gens = polys(S, "x^2 + y", "y^3")  # no pure power in x
    with pytest.raises(HilbertKunzError, match="pure-power"):
        exact_box_count(gens, 1, 2)
    count, stable = oracle_length(gens, 1, 2, 8)
    assert not stable


def test_zero_rows_are_ignored():
    S = ring("x y", 2)
    gens = polys(S, "x^2", "y^2") + [S.zero()]
    assert oracle_length(gens, 1, 2, 4) == (4, True)
    with pytest.raises(HilbertKunzError, match="no nonzero relations"):
        oracle_length([S.zero()], 1, 2, 3)

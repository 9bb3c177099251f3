import itertools
import math

import numpy as np
import pytest

from diamond_wiretap.channel import FadingState, sample_fading
from diamond_wiretap.oracle import (Pmf, conditional_entropy, det_entropy_check,
                                    discrete_mutual_information, exact_entropy,
                                    floor_preimage_bound, random_joint_pmf)


def test_exact_entropy_examples():
    assert exact_entropy(Pmf([(0,)], [1.0])) == 0
    assert exact_entropy(Pmf.uniform([(k,) for k in range(8)])) == pytest.approx(3, abs=1e-12)
    assert exact_entropy(Pmf([(0,), (1,), (2,)], [0.5, 0.25, 0.25])) == pytest.approx(1.5, abs=1e-12)
    assert exact_entropy(Pmf([(0,), (1,)], [1.0, 0.0])) == 0


def test_pmf_validation():
    with pytest.raises(ValueError):
        Pmf([(0,), (1,)], [0.5, 0.6])
    with pytest.raises(ValueError):
        Pmf([(0,), (0,)], [0.5, 0.5])
    with pytest.raises(ValueError):
        Pmf([(0,), (1,)], [1.5, -0.5])
    with pytest.raises(TypeError):
        exact_entropy([0.5, 0.5])


def test_conditional_entropy_of_independent_pair():
    p = Pmf.uniform(list(itertools.product(range(4), range(2))))
    assert conditional_entropy(p, lambda s: s[0], lambda s: s[1]) == pytest.approx(2, abs=1e-12)
    assert conditional_entropy(p, lambda s: s[0], lambda s: s[0]) == pytest.approx(0, abs=1e-12)


def _hand_multiplicity(g, n):
    counts = {}
    for x in range(n + 1):
        y = math.floor(g * x)
        counts[y] = counts.get(y, 0) + 1
    return max(counts.values())


@pytest.mark.parametrize("g,L", [(1.0, 2), (0.5, 2), (1 / 3, 3)])
def test_floor_preimage_examples(g, L):
    for Pmax in (9, 16, 49, 961):
        mult, bound = floor_preimage_bound(g, Pmax, L)
        n = math.isqrt(Pmax)
        assert mult == _hand_multiplicity(g, n)
        assert bound == pytest.approx(math.log2(mult), abs=1e-15)
    assert floor_preimage_bound(0.5, 9, 2) == (2, 1.0)
    assert floor_preimage_bound(1.0, 49, 2) == (1, 0.0)


def test_floor_preimage_errors():
    with pytest.raises(ValueError):
        floor_preimage_bound(1 / 3, 49, 2)
    with pytest.raises(ValueError):
        floor_preimage_bound(1.0, 0, 2)


@pytest.mark.parametrize("L", [1.5, 2.0, 3.0, 4.0])
def test_floor_preimage_multiplicity_bound_and_monotone(L):
    gs = np.linspace(1 / L, L, 400)
    mults = [floor_preimage_bound(g, 961, L)[0] for g in gs]
    assert max(mults) <= math.ceil(L) + 1
    assert all(a >= b for a, b in zip(mults, mults[1:]))


def test_det_check_independent_injective_inputs():
    f = FadingState([1.3, 0.7], [1.1, 1.9])
    pmf = Pmf.uniform(list(itertools.product(range(8), repeat=2)))
    rep = det_entropy_check(f, 49, pmf)
    assert rep.holds and rep.H_X1_given_floor == 0
    assert rep.H_X1_given_X2 == pytest.approx(3, abs=1e-12)


def test_det_check_fully_correlated_inputs():
    f = sample_fading(4)
    pmf = Pmf.uniform([(k, k) for k in range(8)])
    rep = det_entropy_check(f, 49, pmf)
    assert rep.H_X1_given_X2 == pytest.approx(0, abs=1e-12)
    assert rep.holds and rep.slack >= 0


def test_det_check_random_instances():
    for i in range(50):
        f = sample_fading((5, i))
        rep = det_entropy_check(f, 49, random_joint_pmf((6, i), 7))
        assert rep.holds
        assert rep.H_Y2_given_X2 <= rep.H_Y2 + 1e-12


def test_det_check_errors():
    f = sample_fading(0)
    with pytest.raises(ValueError):
        det_entropy_check(f, 32 ** 2, random_joint_pmf(0, 2))
    with pytest.raises(ValueError):
        det_entropy_check(f, 4, Pmf.uniform([(0, 3)]))


def test_discrete_mi_closed_forms():
    pts = np.array([-1.0, 0.0, 1.0])
    assert discrete_mutual_information([1.0], [pts]) == pytest.approx(math.log2(3))
    # V1 + V2 + U with U nuisance: H(sum of three) - H(U)
    mi = discrete_mutual_information([1, 1, 1], [pts] * 3, [True, True, False])
    law = np.array([1, 3, 6, 7, 6, 3, 1]) / 27
    assert mi == pytest.approx(-np.sum(law * np.log2(law)) - math.log2(3), abs=1e-12)
    assert discrete_mutual_information([0.0, 1.0], [pts] * 2, [True, False]) == pytest.approx(0)

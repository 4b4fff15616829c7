import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from obliqueframes.errors import BadM, BadPotential, BadTrace, NonPositiveEigenvalue, ValidationError
from obliqueframes.majorization import (
    PotentialSpec, as_spectrum, leq_pointwise, log_majorizes, majorizes, order_chain_check,
    potential, submajorizes, waterfill, weak_log_majorizes,
)


# --- independent oracles -------------------------------------------------

def submaj_oracle(y, x):
    """x is submajorized by y iff sum (x_i - c)^+ <= sum (y_i - c)^+ for every c."""
    levels = set(x) | set(y) | {0.0}
    return all(sum(max(a - c, 0) for a in x) <= sum(max(b - c, 0) for b in y) + 1e-9 for c in levels)


def weak_log_oracle(y, x):
    """Exact partial products of integer vectors."""
    xs, ys = sorted(x, reverse=True), sorted(y, reverse=True)
    n = max(len(xs), len(ys))
    xs += [0] * (n - len(xs))
    ys += [0] * (n - len(ys))
    return all(math.prod(xs[:k]) <= math.prod(ys[:k]) for k in range(1, n + 1))


def waterfill_oracle(lam, m, t):
    """Level by bisection on the increasing map c -> sum_{i >= max(m,0)} (c - lam_i)^+."""
    k0 = max(m, 0)
    tail = np.asarray(lam[k0:], dtype=float)
    excess = t - float(np.sum(lam))
    lo, hi = float(tail.min()), float(tail.max()) + excess + 1.0
    for _ in range(200):
        mid = (lo + hi) / 2
        if np.sum(np.clip(mid - tail, 0, None)) < excess:
            lo = mid
        else:
            hi = mid
    nu = np.array(lam, dtype=float)
    nu[k0:] = np.maximum(tail, hi)
    return np.sort(nu)[::-1], hi


# --- examples ------------------------------------------------------------

def test_submajorization_examples():
    assert submajorizes([2, 0], [1, 1])
    assert majorizes([2, 0], [1, 1])
    assert not submajorizes([1, 1], [2, 0])
    assert submajorizes([3, 1, 2], [3, 1, 2])


def test_majorization_examples():
    assert majorizes([2, 0], [1, 1])
    assert not majorizes([2, 0], [1, 0.5])
    y = np.array([4.0, 1.5, 0.5, 0.0])
    assert majorizes(y, np.full(4, y.sum() / 4))


def test_log_majorization_examples():
    assert log_majorizes([4, 1], [2, 2])
    assert not log_majorizes([2, 2], [4, 1])
    assert log_majorizes([3, 0.5, 2], [3, 0.5, 2])


def test_chain_ignores_premises_that_hold_only_within_slack():
    r = order_chain_check([2.2e-309], [0.0])
    assert r.pointwise and not r.weak_log and r.chain_holds


def test_order_chain_examples():
    r = order_chain_check([1, 2], [2, 3])
    assert r.pointwise and r.sorted_pointwise and r.weak_log and r.weak
    assert not r.log  # total products 2 and 6 differ
    r = order_chain_check([2, 2], [4, 1])
    assert not r.pointwise and r.log and r.weak_log and r.weak
    r = order_chain_check([5, 0], [4, 1])
    assert not r.weak_log and not r.weak


def test_spectrum_validation():
    np.testing.assert_array_equal(as_spectrum([1, 3, 2]), [3, 2, 1])
    np.testing.assert_array_equal(as_spectrum([1, -1e-15]), [1, 0])
    with pytest.raises(ValidationError):
        as_spectrum([1, -0.1])
    with pytest.raises(ValidationError):
        as_spectrum([np.nan])
    assert leq_pointwise([1, 2], [1, 2, 0.5])
    assert not leq_pointwise([2, 1], [1, 2])


# --- potentials ----------------------------------------------------------

def test_potential_examples():
    assert potential(PotentialSpec.frame_potential(), [1.5, 0.5]) == pytest.approx(2.5, abs=1e-15)
    assert potential(PotentialSpec.mse(), [1, 1]) == 2
    s = [3.0, 1.25, 0.5]
    assert potential(PotentialSpec.power(1), s) == pytest.approx(sum(s))
    assert potential(PotentialSpec.piecewise_linear([1.0]), s) == pytest.approx(2.25)


def test_potential_ignores_padding_but_not_declared_zeros():
    assert potential(PotentialSpec.mse(), [2.0, 0.5, 0.0], d=2) == pytest.approx(2.5)
    with pytest.raises(NonPositiveEigenvalue):
        potential(PotentialSpec.mse(), [2.0, 0.0], d=2)


@pytest.mark.parametrize("text,kind", [("fp", "fp"), ("MSE", "mse"), ("pq:3", "power"), ("pl:0.5,2", "pl")])
def test_potential_parse(text, kind):
    assert PotentialSpec.parse(text).kind == kind


@pytest.mark.parametrize("text", ["pq:0.5", "log", "pl:-1"])
def test_potential_parse_rejects(text):
    with pytest.raises(BadPotential):
        PotentialSpec.parse(text)


# --- water-filling -------------------------------------------------------

@pytest.mark.parametrize("lam,m,t,nu,c", [
    ([2, 1], 0, 5, [2.5, 2.5], 2.5),
    ([2, 1], 0, 3, [2, 1], 1),
    ([3, 1, 1], 1, 6, [3, 1.5, 1.5], 1.5),
])
def test_waterfill_examples(lam, m, t, nu, c):
    got_nu, got_c = waterfill(lam, m, t)
    np.testing.assert_allclose(got_nu, nu, atol=1e-14)
    assert got_c == pytest.approx(c, abs=1e-14)


def test_waterfill_errors():
    with pytest.raises(BadM):
        waterfill([2, 1], 2, 5)
    with pytest.raises(BadTrace):
        waterfill([2, 1], 0, 2)
    with pytest.raises(ValidationError):
        waterfill([1, 2], 0, 5)


def test_waterfill_can_lift_above_frozen_block():
    # the tail may rise above the frozen entries; nu is reported sorted
    nu, c = waterfill([1.0, 0.5, 0.5], 1, 10)
    assert c == pytest.approx(4.5)
    np.testing.assert_allclose(nu, [4.5, 4.5, 1.0])


spectra = st.lists(st.floats(0, 10, allow_nan=False), min_size=1, max_size=8)


@settings(max_examples=300, deadline=None)
@given(spectra, st.integers(-6, 7), st.floats(0, 40))
def test_waterfill_against_bisection(values, m, extra):
    lam = np.sort(values)[::-1]
    assume(m < lam.size)
    t = float(lam.sum()) + extra
    nu, c = waterfill(lam, m, t)
    ref_nu, ref_c = waterfill_oracle(lam, m, t)
    np.testing.assert_allclose(nu, ref_nu, atol=1e-9)
    assert abs(c - ref_c) <= 1e-9 * max(1.0, ref_c) or extra == 0
    assert abs(nu.sum() - t) <= 1e-9 * max(1.0, t)
    assert submajorizes(nu, lam)


@settings(max_examples=400, deadline=None)
@given(st.lists(st.integers(0, 9), min_size=1, max_size=7), st.lists(st.integers(0, 9), min_size=1, max_size=7))
def test_orders_against_exact_oracles(x, y):
    assert submajorizes(y, x) == submaj_oracle([float(v) for v in y], [float(v) for v in x])
    assert weak_log_majorizes(y, x) == weak_log_oracle(list(y), list(x))


@settings(max_examples=400, deadline=None)
@given(st.lists(st.floats(0, 100, allow_nan=False), min_size=1, max_size=10), st.data())
def test_chain_never_breaks(x, data):
    y = data.draw(st.lists(st.floats(0, 100, allow_nan=False), min_size=len(x), max_size=len(x)))
    assert order_chain_check(x, y).chain_holds


def test_doubly_stochastic_images_are_majorized(rng):
    # Birkhoff: x = D y with D doubly stochastic  =>  x majorized by y
    for _ in range(200):
        n = int(rng.integers(1, 9))
        y = rng.exponential(size=n)
        weights = rng.dirichlet(np.ones(4))
        D = sum(w * np.eye(n)[rng.permutation(n)] for w in weights)
        assert majorizes(y, D @ y)

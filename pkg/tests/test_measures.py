import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ocx.errors import DomainError
from ocx.kernels import KernelSpec
from ocx.measures import (
    detection_activations,
    harmonic_mean,
    inlierness,
    neg_lse_pool,
    outlierness,
    outlierness_via_network,
)
from ocx.ocsvm import discriminant, make_model

from conftest import FAMILY_Q, random_model, random_point
from oracles import mp_outlierness

positive = st.floats(1e-3, 1e3)


def test_inlierness_examples():
    u = np.array([[0.5, -1.0]])
    model = make_model(u, [1.0], KernelSpec.gaussian(1.0))
    assert inlierness(model, u[0]) == 1.0
    assert inlierness(model, u[0] + 1e4) < 1e-6


def test_inlierness_is_discriminant():
    rng = np.random.default_rng(0)
    model = random_model(rng, "tstudent", 2.0)
    x = random_point(rng, model)
    assert inlierness(model, x) == discriminant(model, x)


def test_outlierness_examples():
    u = np.zeros((1, 2))
    exp1 = make_model(u, [1.0], KernelSpec.gaussian(1.0))
    assert outlierness(exp1, u[0]) == 0.0
    assert outlierness(exp1, np.array([2.0, 0.0])) == pytest.approx(float(-mpmath.log(mpmath.exp(-2))))
    st1 = make_model(u, [1.0], KernelSpec.tstudent(1.0))
    assert outlierness(st1, u[0]) == 1.0


def test_outlierness_keeps_growing_past_underflow():
    u = np.zeros((2, 1))
    model = make_model(u, [0.5, 0.5], KernelSpec.gaussian(1.0))
    near, far = outlierness(model, np.array([30.0])), outlierness(model, np.array([1e4]))
    assert near == pytest.approx(450.0)
    assert far == pytest.approx(0.5e8)


def test_activation_examples():
    u = np.array([[1.0, 1.0]])
    st1 = make_model(u, [1.0], KernelSpec.tstudent(2.5))
    np.testing.assert_array_equal(detection_activations(st1, u[0]).h, [2.5])
    ex1 = make_model(u, [1.0], KernelSpec.gaussian(1.0))
    np.testing.assert_array_equal(detection_activations(ex1, u[0]).h, [0.0])


@pytest.mark.parametrize("family,q", FAMILY_Q)
def test_activations_match_formula(family, q):
    rng = np.random.default_rng(1)
    model = random_model(rng, family, q, m=8, d=3)
    x = random_point(rng, model)
    act = detection_activations(model, x)
    spec = model.kernel
    for j, (u, a) in enumerate(zip(model.support_vectors, model.alphas)):
        d = mpmath.sqrt(mpmath.fsum((mpmath.mpf(xi) - mpmath.mpf(ui)) ** 2 for xi, ui in zip(x, u))) ** q
        if family == "exponential":
            ref = -mpmath.log(mpmath.mpf(a)) + d / (q * mpmath.mpf(spec.sigma) ** q)
        else:
            ref = (spec.a + d) / mpmath.mpf(a)
        assert act.h[j] == pytest.approx(float(ref), rel=1e-12)


def test_harmonic_mean_examples():
    assert harmonic_mean([2.0, 2.0]) == 2.0
    assert harmonic_mean([1.0, 1.0, 4.0]) == pytest.approx(3 / 2.25)
    with pytest.raises(DomainError):
        harmonic_mean([1.0, 0.0])
    with pytest.raises(DomainError):
        harmonic_mean([-1.0, 2.0])


@given(st.lists(positive, min_size=1, max_size=30))
def test_harmonic_mean_bounds(v):
    h = harmonic_mean(v)
    assert min(v) * (1 - 1e-12) <= h <= min(v) * len(v) * (1 + 1e-12)


def test_neg_lse_examples():
    assert neg_lse_pool([3.7]) == 3.7
    assert neg_lse_pool([0.0, 0.0]) == pytest.approx(float(-mpmath.log(2)), rel=1e-15)
    # large activations do not overflow
    assert neg_lse_pool([800.0, 800.0]) == pytest.approx(800 - np.log(2))


@given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=30))
def test_neg_lse_bounds(h):
    r = neg_lse_pool(h)
    lo = min(h)
    assert lo - np.log(len(h)) - 1e-9 <= r <= lo + 1e-9


@pytest.mark.parametrize("family,q", FAMILY_Q)
def test_network_equivalence(family, q):
    rng = np.random.default_rng(2)
    for _ in range(1000):
        model = random_model(rng, family, q)
        x = random_point(rng, model)
        net, direct = outlierness_via_network(model, x), outlierness(model, x)
        assert abs(net - direct) <= 1e-9 * (1 + abs(direct))


@pytest.mark.parametrize("family,q", FAMILY_Q)
def test_network_matches_high_precision(family, q):
    rng = np.random.default_rng(3)
    for _ in range(3):
        model = random_model(rng, family, q, m=6, d=4)
        x = random_point(rng, model)
        ref = float(mp_outlierness(model, x))
        assert outlierness_via_network(model, x) == pytest.approx(ref, rel=1e-9)


@pytest.mark.parametrize("spec", [KernelSpec.gaussian(0.7), KernelSpec.tstudent(1.2, 1)])
def test_single_support_vector_exact(spec):
    rng = np.random.default_rng(4)
    model = make_model(rng.normal(size=(1, 3)), [1.0], spec)
    x = rng.normal(size=3)
    assert outlierness_via_network(model, x) == pytest.approx(outlierness(model, x), rel=1e-15)


def test_split_support_vector_exponential():
    # duplicating a support vector with its coefficient split leaves g unchanged
    rng = np.random.default_rng(5)
    U = rng.normal(size=(4, 3))
    a = rng.dirichlet(np.ones(4))
    spec = KernelSpec.gaussian(1.1)
    merged = make_model(U, a, spec)
    split = make_model(np.vstack([U, U[:1]]), np.r_[a[0] / 2, a[1:], a[0] / 2], spec)
    x = rng.normal(size=3)
    assert outlierness_via_network(split, x) == pytest.approx(float(mp_outlierness(merged, x)), rel=1e-12)


def test_split_support_vector_tstudent():
    # t-Student outlierness scales with m, so splitting changes o by m'/m exactly
    rng = np.random.default_rng(6)
    U = rng.normal(size=(4, 3))
    a = rng.dirichlet(np.ones(4))
    spec = KernelSpec.tstudent(1.0)
    merged = make_model(U, a, spec)
    split = make_model(np.vstack([U, U[:1]]), np.r_[a[0] / 2, a[1:], a[0] / 2], spec)
    x = rng.normal(size=3)
    ref = float(mp_outlierness(merged, x)) * 5 / 4
    assert outlierness_via_network(split, x) == pytest.approx(ref, rel=1e-12)


@pytest.mark.parametrize("q", [1.0, 2.0, 4.0])
def test_asymptotic_growth(q):
    rng = np.random.default_rng(7)
    t = 1e4
    for _ in range(100):
        st_model = random_model(rng, "tstudent", q, m=int(rng.integers(1, 20)), d=3)
        x = rng.normal(size=3)
        r = outlierness(st_model, t * x) / np.linalg.norm(t * x) ** q
        assert abs(r - st_model.m) <= 0.05 * st_model.m

        ex = make_model(rng.normal(size=(5, 3)), rng.dirichlet(np.ones(5)), KernelSpec.exponential(1.0, q))
        r = outlierness(ex, t * x) * q / np.linalg.norm(t * x) ** q
        assert abs(r - 1) <= 0.05


def test_inlierness_bounds_and_decay():
    rng = np.random.default_rng(8)
    for family in ("exponential", "tstudent"):
        for _ in range(100):
            model = random_model(rng, family, float(rng.choice([1, 2, 4])), d=3)
            x = rng.normal(size=3)
            i = inlierness(model, x)
            assert 0 <= i <= model.kernel.k0
            far = [inlierness(model, t * x) for t in (1e2, 1e4, 1e6, 1e9)]
            assert np.all(np.diff(far) <= 0)
            assert far[-1] < 1e-6

"""Dense-network core: forward/backward exactness, ADAM, clipping, Polyak,
squashed-Gaussian sampling, and the binary parameter container."""

import io

import numpy as np
import pytest
from scipy.stats import norm

from slicerl import nn
from slicerl.nn import (
    AdamState,
    Mlp,
    adam_step,
    clip_gradients,
    gaussian_log_prob,
    gelu,
    load_mlp,
    polyak_blend,
    sample_squashed_gaussian,
    save_mlp,
)


# -- activations --------------------------------------------------------------


def test_gelu_reference_values():
    assert gelu(0.0) == 0.0
    assert gelu(10.0) == pytest.approx(10.0, rel=1e-6)
    assert gelu(1.0) == pytest.approx(norm.cdf(1.0), rel=1e-10)  # 1 * Phi(1)
    assert gelu(1.0) == pytest.approx(0.8413, abs=1e-4)
    assert gelu(-10.0) == pytest.approx(0.0, abs=1e-12)


# -- forward ------------------------------------------------------------------


def test_forward_zero_weights_returns_bias():
    net = Mlp([3, 4, 2], rng=np.random.default_rng(0))
    for w in net.weights:
        w[...] = 0.0
    net.biases[0][...] = 0.0
    net.biases[1][...] = np.array([1.5, -2.0])
    out = net.forward(np.ones(3))
    np.testing.assert_allclose(out[0], [1.5, -2.0])
    out2 = net.forward(-5 * np.ones(3))
    np.testing.assert_allclose(out2[0], [1.5, -2.0])


def test_forward_matches_hand_matrix_arithmetic():
    net = Mlp([2, 2, 1], activation="relu", rng=np.random.default_rng(1))
    net.weights[0][...] = np.array([[1.0, -1.0], [0.5, 2.0]])
    net.biases[0][...] = np.array([0.1, -0.2])
    net.weights[1][...] = np.array([[2.0], [3.0]])
    net.biases[1][...] = np.array([0.5])
    x = np.array([1.0, 2.0])
    h = np.maximum(x @ net.weights[0] + net.biases[0], 0.0)
    expected = h @ net.weights[1] + net.biases[1]
    np.testing.assert_allclose(net.forward(x)[0], expected)


def test_forward_shape_validation():
    net = Mlp([3, 2], rng=np.random.default_rng(0))
    with pytest.raises(ValueError):
        net.forward(np.ones(4))
    with pytest.raises(ValueError):
        Mlp([3])
    with pytest.raises(ValueError):
        Mlp([3, 2], activation="swish")


def test_final_scale_shrinks_last_layer_only():
    r1 = np.random.default_rng(5)
    r2 = np.random.default_rng(5)
    a = Mlp([4, 8, 2], rng=r1)
    b = Mlp([4, 8, 2], rng=r2, final_scale=1e-2)
    np.testing.assert_array_equal(a.weights[0], b.weights[0])
    np.testing.assert_allclose(b.weights[1], a.weights[1] * 1e-2)


# -- backward -----------------------------------------------------------------


def _flat_loss(net, x, G):
    out = net.forward(x)
    return float(np.sum(out * G))


def finite_difference_check(net, x, h=1e-5):
    """Max relative error of analytic vs central-difference gradients."""
    rng = np.random.default_rng(0)
    out, cache = net.forward_cached(x)
    G = rng.standard_normal(out.shape)
    grads = net.backward(cache, G)
    analytic = net.gradients_flat(grads) + [grads.d_input]
    params = net.parameters() + [np.atleast_2d(np.asarray(x, dtype=float))]
    worst = 0.0
    # perturb net parameters in place; the input copy is perturbed directly
    x_arr = params[-1]
    for p, g in zip(params, analytic):
        it = np.nditer(p, flags=["multi_index"])
        for _ in it:
            idx = it.multi_index
            orig = p[idx]
            p[idx] = orig + h
            up = _flat_loss(net, x_arr, G)
            p[idx] = orig - h
            down = _flat_loss(net, x_arr, G)
            p[idx] = orig
            fd = (up - down) / (2 * h)
            scale = max(abs(fd), abs(g[idx]), 1e-8)
            worst = max(worst, abs(fd - g[idx]) / scale)
    return worst


@pytest.mark.parametrize("activation", ["gelu", "relu"])
def test_backward_matches_finite_differences(activation):
    rng = np.random.default_rng(42)
    net = Mlp([3, 5, 4, 2], activation=activation, rng=rng)
    x = rng.standard_normal((2, 3))
    assert finite_difference_check(net, x) < 1e-5


def test_backward_zero_upstream_gives_zero_gradients():
    net = Mlp([3, 4, 2], rng=np.random.default_rng(2))
    _, cache = net.forward_cached(np.ones((2, 3)))
    grads = net.backward(cache, np.zeros((2, 2)))
    for g in net.gradients_flat(grads):
        assert np.all(g == 0.0)
    assert np.all(grads.d_input == 0.0)


def test_backward_linear_net_matches_least_squares_gradient():
    # Single affine layer with squared loss: grad_W = 2/n X^T (XW + b - y).
    net = Mlp([3, 1], rng=np.random.default_rng(3))
    rng = np.random.default_rng(4)
    X = rng.standard_normal((16, 3))
    y = rng.standard_normal(16)
    pred, cache = net.forward_cached(X)
    err = pred[:, 0] - y
    grads = net.backward(cache, (2.0 * err / 16)[:, None])
    expected_w = 2.0 / 16 * X.T @ err
    expected_b = 2.0 / 16 * err.sum()
    np.testing.assert_allclose(grads.d_weights[0][:, 0], expected_w, rtol=1e-12)
    assert grads.d_biases[0][0] == pytest.approx(expected_b, rel=1e-12)


def test_clone_and_copy_from():
    a = Mlp([3, 4, 2], rng=np.random.default_rng(6))
    b = a.clone()
    for pa, pb in zip(a.parameters(), b.parameters()):
        np.testing.assert_array_equal(pa, pb)
    b.weights[0][0, 0] += 1.0
    assert a.weights[0][0, 0] != b.weights[0][0, 0]  # deep copy
    assert a.all_finite()


# -- ADAM ---------------------------------------------------------------------


def test_adam_first_step_moves_by_learning_rate():
    p = np.array([1.0, -1.0])
    g = np.array([0.3, -0.7])
    state = AdamState.for_params([p], learning_rate=0.01)
    adam_step([p], [g], state)
    # bias-corrected m_hat/sqrt(v_hat) = sign(g) on step one (up to epsilon)
    np.testing.assert_allclose(p, [1.0 - 0.01, -1.0 + 0.01], atol=1e-6)
    assert state.step_count == 1


def test_adam_zero_gradient_leaves_params_unchanged():
    p = np.array([2.0])
    state = AdamState.for_params([p])
    adam_step([p], [np.zeros(1)], state)
    assert p[0] == 2.0
    assert state.step_count == 1


def test_adam_three_step_scalar_recurrence():
    lr, b1, b2, eps = 0.1, 0.9, 0.999, 1e-8
    p = np.array([0.0])
    state = AdamState.for_params([p], learning_rate=lr)
    g = 0.5
    # hand-rolled recurrence
    ref, m, v = 0.0, 0.0, 0.0
    for t in range(1, 4):
        m = b1 * m + (1 - b1) * g
        v = b2 * v + (1 - b2) * g * g
        ref -= lr * (m / (1 - b1**t)) / (np.sqrt(v / (1 - b2**t)) + eps)
        adam_step([p], [np.array([g])], state)
        assert p[0] == pytest.approx(ref, rel=1e-14)


def test_adam_length_mismatch():
    p = np.zeros(1)
    state = AdamState.for_params([p])
    with pytest.raises(ValueError):
        adam_step([p], [], state)


# -- clipping and Polyak ------------------------------------------------------


def test_clip_gradients_scales_only_above_threshold():
    g = [np.array([3.0]), np.array([4.0])]  # norm 5
    clipped = clip_gradients(g, 2.5)
    total = np.sqrt(sum(np.sum(x * x) for x in clipped))
    assert total == pytest.approx(2.5, rel=1e-12)
    untouched = clip_gradients(g, 100.0)
    np.testing.assert_array_equal(untouched[0], g[0])


@pytest.mark.parametrize("tau", [0.0, 0.5, 1.0])
def test_polyak_blend_exactness(tau):
    online = Mlp([2, 3, 1], rng=np.random.default_rng(7))
    target = Mlp([2, 3, 1], rng=np.random.default_rng(8))
    before = [p.copy() for p in target.parameters()]
    polyak_blend(target, online, tau)
    for pt, po, pb in zip(target.parameters(), online.parameters(), before):
        np.testing.assert_allclose(pt, tau * po + (1 - tau) * pb, rtol=1e-14)


def test_polyak_scalar_fixture():
    online = Mlp([1, 1], rng=np.random.default_rng(0))
    target = online.clone()
    online.weights[0][...] = 2.0
    target.weights[0][...] = 0.0
    polyak_blend(target, online, 0.5)
    assert target.weights[0][0, 0] == pytest.approx(1.0)


# -- squashed Gaussian --------------------------------------------------------


def test_squashed_sample_deterministic_mode():
    mean = np.array([0.3, -1.2])
    a, _ = sample_squashed_gaussian(mean, np.zeros(2), np.zeros(2))
    np.testing.assert_allclose(a, np.tanh(mean))


def test_squashed_sample_unit_noise():
    a, _ = sample_squashed_gaussian(np.zeros(1), np.zeros(1), np.ones(1))
    assert a[0] == pytest.approx(np.tanh(1.0), rel=1e-12)
    assert a[0] == pytest.approx(0.7616, abs=1e-4)


def test_squashed_actions_strictly_inside_unit_box():
    rng = np.random.default_rng(1)
    a, lp = sample_squashed_gaussian(
        rng.normal(size=(1000, 3)), rng.uniform(-2, 1, (1000, 3)),
        rng.normal(size=(1000, 3)),
    )
    assert np.all(np.abs(a) < 1.0)
    assert np.all(np.isfinite(lp))


def test_log_prob_finite_at_saturation():
    a, lp = sample_squashed_gaussian(np.array([20.0]), np.array([0.0]), np.zeros(1))
    assert np.isfinite(lp)
    a, lp = sample_squashed_gaussian(np.array([-20.0]), np.array([0.0]), np.zeros(1))
    assert np.isfinite(lp)


def test_squashed_density_integrates_to_one():
    # Quadrature oracle: the change-of-variables density over u must
    # integrate to ~1 when mapped through the tanh squashing.
    mean, log_std = 0.4, -0.3
    u = np.linspace(-8, 8, 200001)
    noise = (u - mean) / np.exp(log_std)
    _, lp = sample_squashed_gaussian(
        np.full_like(u, mean)[:, None], np.full_like(u, log_std)[:, None],
        noise[:, None],
    )
    a = np.tanh(u)
    # integrate exp(log p(a)) da  via the u-grid: da = (1 - tanh(u)^2) du
    integral = np.trapezoid(np.exp(lp) * (1 - a**2), u)
    assert integral == pytest.approx(1.0, abs=1e-3)


def test_gaussian_log_prob_matches_scipy():
    u = np.array([0.2, -1.0])
    lp = gaussian_log_prob(u, np.zeros(2), np.log(np.array([1.0, 0.5])))
    ref = norm.logpdf(u, scale=[1.0, 0.5])
    np.testing.assert_allclose(lp, ref, rtol=1e-12)


# -- binary container ---------------------------------------------------------


def test_mlp_save_load_round_trip_bit_exact():
    net = Mlp([4, 8, 8, 3], activation="gelu", rng=np.random.default_rng(9))
    buf = io.BytesIO()
    save_mlp(net, buf)
    buf.seek(0)
    loaded = load_mlp(buf)
    assert loaded.layer_sizes == net.layer_sizes
    assert loaded.activation == net.activation
    for pa, pb in zip(net.parameters(), loaded.parameters()):
        np.testing.assert_array_equal(pa, pb)


def test_mlp_load_rejects_bad_magic_and_corrupt_header():
    net = Mlp([2, 2], rng=np.random.default_rng(0))
    buf = io.BytesIO()
    save_mlp(net, buf)
    raw = bytearray(buf.getvalue())
    with pytest.raises(ValueError):
        load_mlp(io.BytesIO(b"XXXX" + bytes(raw[4:])))
    corrupted = bytearray(raw)
    corrupted[-8 * 2 * 2 - 8 * 2 - 1 - 4] ^= 0xFF  # flip a header byte
    with pytest.raises(ValueError):
        load_mlp(io.BytesIO(bytes(corrupted)))

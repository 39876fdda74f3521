# SPDX-License-Identifier: Apache-2.0
#
# xldma: near-field modeling and channel estimation for XL dynamic metasurface antennas
# Copyright (C) 2026 The xldma authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ------------------------------------------------------------------------
import math

import numpy as np
import pytest

import xldma

LAMBDA = 0.0107


def test_manifold_is_unit_norm_and_models_agree_far_away():
    g_sph = xldma.manifold(4, 32, LAMBDA, 0.1, 0.3, 1e6, "spherical")
    g_obl = xldma.manifold(4, 32, LAMBDA, 0.1, 0.3, 1e6, "oblong")
    assert g_sph.shape == (128,)
    assert np.linalg.norm(g_sph) == pytest.approx(1.0, abs=1e-12)
    assert xldma.beamforming_gain(g_sph, g_obl) == pytest.approx(1.0, abs=1e-6)


def test_manifold_is_a_kronecker_product_for_the_oblong_model():
    d = LAMBDA / 2
    g = xldma.manifold(2, 8, LAMBDA, 0.25, -0.4, 7.0, "oblong")
    a = xldma.steering_el(0.25, 2, d, LAMBDA)
    b = xldma.steering_az(-0.4, 7.0, 8, d, LAMBDA)
    assert np.allclose(g, np.kron(a, b), atol=1e-12)


def test_derivatives_match_finite_differences():
    d = LAMBDA / 2
    d_az, d_r = xldma.steering_az_derivatives(0.2, 0.05, 16, d, LAMBDA)
    h = 1e-6
    fd = (xldma.steering_az(0.2 + h, 20.0, 16, d, LAMBDA) - xldma.steering_az(0.2 - h, 20.0, 16, d, LAMBDA)) / (2 * h)
    assert np.allclose(d_az, fd, atol=1e-6)
    assert d_r.shape == (16,)


def test_bad_model_name_raises_config_error():
    with pytest.raises(xldma.ConfigError):
        xldma.manifold(1, 4, LAMBDA, 0.0, 0.0, 10.0, "parabolic")
    assert issubclass(xldma.ConfigError, xldma.Error)


def test_channel_energy_and_noiseless_measurement():
    paths = xldma.sample_paths(seed=3, num_paths=3)
    assert len(paths) == 3
    h = xldma.synthesize_channel(2, 16, LAMBDA, paths)
    assert h.shape == (32,)
    rng = np.random.default_rng(0)
    W = [rng.standard_normal((16, 6)) + 1j * rng.standard_normal((16, 6)) for _ in range(2)]
    y = xldma.measure(h, W)
    assert np.allclose(y[0], W[0].conj().T @ h[:16])
    assert np.allclose(y[1], W[1].conj().T @ h[16:])


def test_dictionary_shape_and_ols_recovery():
    assert xldma.az_dictionary(16, LAMBDA, 32, 4).shape == (16, 128)
    B = xldma.az_dictionary(16, LAMBDA, 32)
    assert np.allclose(np.linalg.norm(B, axis=0), 1.0)
    y = 2.0 * B[:, 5] - 1j * B[:, 20]
    support, coef, history = xldma.ols_recover(y, B, 2)
    assert sorted(support) == [5, 20]
    assert history[-1] < 1e-20 * history[0]
    assert xldma.nmse(y, y) == 0.0


def test_target_gram_and_coherence():
    phi = xldma.target_gram(4, 16, 2.0, seed=1)
    s = np.linalg.svd(phi, compute_uv=False)
    assert np.allclose(s, math.sqrt(2.0 / 4))
    B = xldma.az_dictionary(8, LAMBDA, 16)
    W = np.linalg.qr(np.random.default_rng(2).standard_normal((8, 4)))[0].astype(complex)
    assert xldma.scale_optimal_coherence(W, B) <= xldma.total_coherence(W, B) + 1e-9


def small_config():
    return xldma.Config.from_json(
        '{"M": 2, "N": 16, "P": 8, "trials": 2, "snr_db": [0, 10], "seed": 5,'
        ' "estimators": ["oracle-ls", "og-el-az-de"]}'
    )


def test_config_parsing_and_errors():
    cfg = small_config()
    assert (cfg.M, cfg.N, cfg.P, cfg.trials) == (2, 16, 8, 2)
    with pytest.raises(xldma.ConfigError):
        xldma.Config.from_json('{"not_a_key": 1}')


def test_nmse_sweep_rows_and_determinism():
    cfg = small_config()
    rows = xldma.run_nmse_sweep(cfg)
    assert len(rows) == 2 * 2 * 2
    assert {r["estimator"] for r in rows} == {"oracle-ls", "og-el-az-de"}
    assert all(r["nmse"] >= 0 for r in rows)
    assert rows[0]["seed"] == xldma.trial_seed(5, 0, 0)
    assert xldma.run_nmse_sweep(cfg) == rows


def test_design_weights_shapes():
    Q, W = xldma.design_weights(small_config())
    assert len(Q) == 2 and Q[0].shape == (16, 8)
    assert np.allclose(np.abs(Q[0] - 0.5j), 0.5)

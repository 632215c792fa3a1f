# Copyright 2026 The mdiqm Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import pytest

import mdiqm


def test_version_and_surface():
    assert mdiqm.__version__
    for name in (
        "Channel",
        "bsm_povm",
        "exact_witness",
        "simulate_rounds",
        "witness_estimate",
        "theory_curve",
        "run_tomography",
        "run_attack_comparison",
    ):
        assert hasattr(mdiqm, name), name


def test_exact_witness_closed_forms():
    bsm = mdiqm.bsm_povm(0.0)
    assert mdiqm.exact_witness(mdiqm.Channel.identity(), bsm) == pytest.approx(
        1.0, abs=1e-12
    )
    assert mdiqm.exact_witness(
        mdiqm.Channel.depolarizing(0.4), bsm
    ) == pytest.approx(0.4, abs=1e-12)
    noisy = mdiqm.bsm_povm(0.25)
    assert noisy.lambda_ == 0.25
    assert mdiqm.exact_witness(mdiqm.Channel.identity(), noisy) == pytest.approx(
        0.5, abs=1e-12
    )


def test_payoffs_and_distributions():
    assert mdiqm.payoff("+", "D", "D") == 1.0
    assert mdiqm.payoff("-", "R", "R") == 1.0
    assert mdiqm.payoff("+", "H", "V") == -0.5
    assert mdiqm.payoff("0", "H", "H") == 0.0

    dist = mdiqm.outcome_distribution(
        mdiqm.Channel.identity(), mdiqm.bsm_povm(0.0), "D", "D"
    )
    assert dist[0] == pytest.approx(0.5, abs=1e-12)
    assert dist[1] == pytest.approx(0.0, abs=1e-12)
    assert dist[2] == pytest.approx(0.5, abs=1e-12)
    assert sum(dist) == pytest.approx(1.0, abs=1e-12)


def test_channel_operations():
    depol = mdiqm.Channel.depolarizing(0.5)
    out = depol.apply(mdiqm.prepared_state("H"))
    assert out[0][0] == pytest.approx(0.75, abs=1e-12)
    assert out[1][1] == pytest.approx(0.25, abs=1e-12)
    assert out[0][1] == pytest.approx(0.0, abs=1e-12)

    chi = depol.chi_matrix()
    assert chi[0][0].real == pytest.approx(1 - 3 * 0.5 / 4, abs=1e-12)

    rebuilt = mdiqm.Channel.from_chi(chi, name="rebuilt")
    assert rebuilt.name == "rebuilt"
    assert not rebuilt.chi_was_projected
    bsm = mdiqm.bsm_povm(0.0)
    assert mdiqm.exact_witness(rebuilt, bsm) == pytest.approx(
        mdiqm.exact_witness(depol, bsm), abs=1e-10
    )

    breaking, margin = mdiqm.is_entanglement_breaking(
        mdiqm.Channel.intercept_resend("XYZ")
    )
    assert breaking
    assert margin >= -1e-12

    keeping, margin = mdiqm.is_entanglement_breaking(mdiqm.Channel.identity())
    assert not keeping
    assert margin == pytest.approx(-0.5, abs=1e-12)


def test_errors_surface_as_value_error():
    with pytest.raises(ValueError):
        mdiqm.Channel.depolarizing(1.5)
    with pytest.raises(ValueError):
        mdiqm.bsm_povm(0.7)
    with pytest.raises(ValueError):
        mdiqm.payoff("?", "H", "H")


def test_simulation_is_seeded_and_worker_invariant():
    channel = mdiqm.Channel.identity()
    bsm = mdiqm.bsm_povm(0.0)

    tally = mdiqm.simulate_rounds(channel, bsm, 1000, 5)
    assert tally.seed == 5
    assert tally.rounds_attempted == 1000
    assert tally.detected_total() == 1000
    # Frozen counts for this seed.
    assert tally.count("H", "H", "+") == 20
    assert tally.count("H", "H", "-") == 29
    assert tally.count("H", "H", "0") == 0
    assert tally.count("D", "D", "+") == 38

    result = mdiqm.witness_estimate(tally)
    assert result.value == pytest.approx(1.1081351018289418, rel=1e-12)
    assert result.std_error == pytest.approx(0.1533157902729719, rel=1e-12)
    assert result.rounds_used == 1000

    threaded = mdiqm.simulate_rounds(channel, bsm, 1000, 5, workers=3)
    assert threaded.detected_total() == 1000
    for x in "HVDR":
        for y in "HVDR":
            for b in "+-0":
                assert threaded.count(x, y, b) == tally.count(x, y, b)

    lossy = mdiqm.simulate_rounds(
        channel, bsm, 1000, 5, detection_efficiency=0.25
    )
    assert lossy.detected_total() == 226

    boot = mdiqm.witness_estimate(tally, method="bootstrap",
                                  bootstrap_resamples=200)
    assert boot.value == result.value
    assert boot.std_error > 0.0


def test_prediction_chain():
    params = mdiqm.default_memory_params()
    assert params.p_ph == 0.060
    assert params.visibility == 0.875

    assert mdiqm.storage_efficiency(58.2, 0.269, 58.2) == pytest.approx(
        0.269 / math.e, rel=1e-12
    )
    assert mdiqm.noise_strength(0.0, params) == pytest.approx(
        0.06786549170409695, rel=1e-12
    )

    curve = mdiqm.theory_curve(params, [0.0, 30.0, 60.0])
    assert len(curve) == 3
    assert curve[0].witness == pytest.approx(0.8982017624438541, rel=1e-12)
    assert curve[0].lambda_ == 0.0
    assert curve[0].p == pytest.approx(0.06786549170409695, rel=1e-12)

    noisy = mdiqm.theory_curve(params, [0.0], include_bsm_noise=True)
    assert noisy[0].lambda_ == pytest.approx(0.1171875, abs=1e-15)

    forced = mdiqm.theory_curve(params, [0.0], include_bsm_noise=True,
                                lambda_override=0.2)
    assert forced[0].lambda_ == 0.2

    assert mdiqm.lambda_from_visibility(0.875) == pytest.approx(
        0.1171875, abs=1e-15
    )
    assert mdiqm.visibility_from_overlap(0.9) == 0.9


def test_tomography_and_attack():
    record = mdiqm.run_tomography(mdiqm.Channel.identity(), 500, 3)
    assert record.shots == 500
    assert record.recorded_total() == 12 * 500

    chi = mdiqm.reconstruct_chi(record)
    assert mdiqm.process_fidelity_to_identity(chi) > 0.97

    exact = mdiqm.Channel.depolarizing(0.4).chi_matrix()
    assert mdiqm.process_fidelity_to_identity(exact) == pytest.approx(
        0.7, abs=1e-12
    )

    report = mdiqm.run_attack_comparison("before", 100, 2000, 7)
    assert report.leak == "before"
    assert report.apparent_efficiency == 1.0
    # 100 shots per setting leaves a visible PSD clipping penalty.
    assert report.reported_fidelity > 0.95
    assert report.reported_fidelity_psd > 0.9
    assert report.mdi_witness.value <= 3 * report.mdi_witness.std_error

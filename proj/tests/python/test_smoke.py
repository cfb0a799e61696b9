# Copyright 2026 The loopsynth Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import math

import numpy as np
import pytest

import loopsynth as ls


def test_vacuum_and_squeezing():
    vac = ls.vacuum(2)
    np.testing.assert_allclose(vac.cov, np.eye(4) / 4)
    sq = ls.squeezed_vacuum(ls.SqueezerSpec.pure(5.0))
    assert sq.cov[0, 0] == pytest.approx(10 ** -0.5 / 4)


def test_compile_epr_and_verify():
    schedule = ls.compile(ls.TargetState.epr())
    assert [b.T for b in schedule.bins] == [1.0, 0.5, 1.0]
    assert [b.theta_deg for b in schedule.bins] == [90.0, 0.0, 0.0]
    schedule.noise = ls.NoiseConfig.ideal()
    (row,) = ls.evaluate_schedule(schedule, ls.TargetState.epr(), ls.SqueezerSpec.pure(5.0), shots=2000, seed=3)
    assert row.analytic == pytest.approx(10 ** -0.5, abs=1e-9)
    assert abs(row.sampled.value - row.analytic) < 4 * row.sampled.std_error
    assert row.passed


def test_json_round_trip_and_parse_error():
    schedule = ls.compile(ls.TargetState.linear_cluster(4))
    again = ls.ControlSchedule.from_json(schedule.to_json())
    assert again == schedule
    with pytest.raises(ValueError):
        ls.ControlSchedule.from_json('{"bins": [{"T": 3}]}')


def test_loop_matches_unrolled():
    schedule = ls.compile(ls.TargetState.ghz(3))
    records = ls.run_loop(schedule, window=8)
    assert [r.mode for r in records] == [1, 2, 3]
    dense = ls.run_unrolled(schedule)
    window = records[-1].window
    assert window.labels == [1, 2, 3]
    np.testing.assert_allclose(window.state.cov, dense.cov, atol=1e-12)


def test_hardware_limits():
    assert ls.hardware_check(ls.compile(ls.TargetState.ghz(3))).feasible
    report = ls.hardware_check(ls.compile(ls.TargetState.ghz(4)))
    assert not report.feasible
    assert "INFEASIBLE" in report.summary()


def test_memory_and_calibration():
    values = [ls.memory_experiment(n) for n in range(1, 8)]
    assert values == sorted(values)
    ideal = ls.memory_experiment(5, noise=ls.NoiseConfig.ideal())
    assert ideal == pytest.approx(ls.memory_experiment(0, noise=ls.NoiseConfig.ideal()))
    cal = ls.calibrate_table()
    assert 0.85 < cal.efficiency <= 1.0
    assert cal.max_abs_residual <= 0.08


def test_waveform_orthogonality():
    gram = ls.orthogonality_matrix(ls.WaveformConfig(), 6)
    np.testing.assert_allclose(gram, np.eye(6), atol=1e-12)


def test_selfcheck_and_cli():
    assert all(r.passed for r in ls.selfcheck())
    code, out, _ = ls.run_cli(["compile", "ghz", "--n", "3"])
    assert code == 0
    assert out.startswith("# loopsynth compile")
    code, _, _ = ls.run_cli(["compile", "ghz", "--n", "4", "--strict-hardware"])
    assert code == 2
    assert math.isclose(ls.golden_transmissivity(), (math.sqrt(5) - 1) / 2)

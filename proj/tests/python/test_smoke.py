"""Smoke tests for the python bindings."""

import numpy as np
import pytest

import ldisc


def test_logspace_endpoints():
    w = ldisc.logspace_frequencies(1e-2, 1e2, 50)
    assert len(w) == 50
    assert w[0] == 1e-2
    assert w[-1] == 1e2


def test_dataset_from_numpy():
    omegas = np.array([0.5, 1.0, 2.0, 4.0])
    responses = [np.array([[1.0 / (1j * w + 1.0)]]) for w in omegas]
    data = ldisc.FrequencyDataset(omegas, responses)
    assert len(data) == 4
    assert data.outputs == 1 and data.inputs == 1
    np.testing.assert_allclose(data[1].response, responses[1])


def test_identification_and_norm():
    data = ldisc.examples.dc_motor_dataset()
    fit = ldisc.realize(data)
    assert fit.system.order == 2
    assert ldisc.is_stable(fit.system)
    dc_gain = 0.021 / (0.0182 * 0.56 + 0.021**2)
    assert ldisc.hinf_norm(fit.system).norm == pytest.approx(dc_gain, rel=1e-5)
    value = ldisc.evaluate_realization(fit.system, 0j)
    assert value[0, 0] == pytest.approx(dc_gain, rel=1e-8)


def test_controller_evaluation_matches_numpy():
    structure = ldisc.examples.dc_motor_structure()
    theta = np.array([15.7511, 0.1370, 25.5729, 2.9401, 14.3566])
    s = 2.0j
    expected = 14.3566 * np.polyval([1.0, 25.5729, 2.9401], s) / np.polyval(
        [1.0, 15.7511, 0.1370], s
    )
    value = ldisc.evaluate_controller(structure, theta, s)
    assert value[0, 0] == pytest.approx(expected, rel=1e-12)


def test_short_design_run_is_monotone():
    data = ldisc.examples.dc_motor_dataset()
    structure = ldisc.examples.dc_motor_structure()
    reference = ldisc.examples.dc_motor_reference()

    config = ldisc.DesignConfig()
    config.seed = 1
    config.max_iter = 4
    config.subproblem.max_evaluations = 60

    theta0 = ldisc.initialize_controller(data, structure, config)
    assert ldisc.verify_closed_loop_stability(data, structure, theta0).stable

    report = ldisc.run_ldisc(data, reference, structure, theta0, config)
    objectives = [r.objective for r in report.records]
    assert all(b <= a for a, b in zip(objectives, objectives[1:]))
    assert report.records[-1].objective <= objectives[0]


def test_errors_are_typed():
    with pytest.raises(ldisc.ParseError):
        ldisc.load_dataset("/nonexistent/nope.csv", 1, 1)

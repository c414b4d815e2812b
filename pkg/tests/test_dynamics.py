"""Tests for the semiclassical trajectory integrator."""

import dataclasses

import numpy as np
import pytest

from rydgauge.constants import ELEMENTARY_CHARGE, TWOPI
from rydgauge.dynamics import (
    TrajectoryConfig,
    adiabaticity,
    deflection_scenario,
    dressed_energy,
    force,
    integrate,
    traversal_time_s,
)
from rydgauge.model import (
    InteractionKind,
    InteractionModel,
    ModelUnits,
    get_preset,
)

GAETAN = get_preset("gaetan2009")
RDD_REP = InteractionModel(kind=InteractionKind.RDD, coefficient=+TWOPI * 3200e6 * 1e-18)
R_C = ModelUnits.from_experiment(GAETAN.drive, GAETAN.interaction).length_m


def _config(**overrides):
    base = dict(
        drive=GAETAN.drive,
        interaction=GAETAN.interaction,
        initial_position_m=(-3.0 * R_C, 1.0 * R_C, 0.0),
        initial_velocity_m_s=(0.10, 0.0, 0.0),
        max_time_s=20e-6,
        label="+",
        time_step_s=50e-9,
    )
    base.update(overrides)
    return TrajectoryConfig(**base)


def test_config_validation():
    with pytest.raises(ValueError, match="label"):
        _config(label="x")
    with pytest.raises(ValueError, match="time step"):
        _config(time_step_s=0.0)
    with pytest.raises(ValueError, match="max time"):
        _config(max_time_s=-1.0)
    with pytest.raises(ValueError, match="stride"):
        _config(output_stride=0)
    with pytest.raises(ValueError, match="separation"):
        _config(initial_position_m=(0.0, 0.0, 0.0))


def test_no_forces_gives_a_straight_line():
    config = _config(include_lorentz=False, include_adiabatic_potential=False)
    traj = integrate(config)
    assert not traj.aborted
    final = traj.states[-1]
    expected = np.asarray(config.initial_position_m) + final.t_s * np.asarray(
        config.initial_velocity_m_s
    )
    assert final.position_m == pytest.approx(expected, rel=1e-14)
    assert np.array_equal(final.velocity_m_s, config.initial_velocity_m_s)


def test_lorentz_force_is_perpendicular_to_velocity_and_scales_with_charge():
    config = _config(include_adiabatic_potential=False)
    pos = (-1.5 * R_C, 1.0 * R_C, 0.0)
    vel = (0.10, 0.02, 0.0)
    f1 = force(config, pos, vel)
    assert abs(np.dot(f1, vel)) <= 1e-12 * np.linalg.norm(f1) * np.linalg.norm(vel)
    doubled = force(dataclasses.replace(config, charge_C=2.0 * ELEMENTARY_CHARGE), pos, vel)
    assert doubled == pytest.approx(2.0 * f1, rel=1e-14)


def test_adiabatic_force_is_radial():
    config = _config(include_lorentz=False)
    pos = np.array([-1.5 * R_C, 1.0 * R_C, 0.0])
    f = force(config, pos, (0.0, 0.0, 0.0))
    assert np.linalg.norm(np.cross(f, pos)) <= 1e-12 * np.linalg.norm(f) * np.linalg.norm(pos)


def test_scalar_gradient_term_toggles():
    off = _config(include_lorentz=False, include_adiabatic_potential=False)
    on = dataclasses.replace(off, include_scalar_gradient=True)
    pos = (-1.2 * R_C, 0.8 * R_C, 0.0)
    assert np.linalg.norm(force(off, pos, (0.0, 0.0, 0.0))) == 0.0
    f_on = force(on, pos, (0.0, 0.0, 0.0))
    assert np.linalg.norm(f_on) > 0.0
    assert np.linalg.norm(np.cross(f_on, pos)) <= 1e-12 * np.linalg.norm(f_on) * np.linalg.norm(pos)


def test_kinetic_energy_is_conserved_under_lorentz_only():
    config = _config(include_adiabatic_potential=False, output_stride=100)
    traj = integrate(config)
    assert not traj.aborted
    v0 = np.linalg.norm(traj.states[0].velocity_m_s)
    v1 = np.linalg.norm(traj.states[-1].velocity_m_s)
    assert abs(v1 - v0) / v0 < 1e-10


def test_rk4_is_fourth_order():
    # halving the step must shrink the endpoint error about sixteenfold;
    # the repulsive branch keeps the flyby away from the validity floor
    def endpoint(dt_s):
        config = _config(
            interaction=RDD_REP,
            initial_velocity_m_s=(0.15, 0.0, 0.0),
            max_time_s=160e-6,
            time_step_s=dt_s,
            output_stride=10**6,
        )
        traj = integrate(config)
        assert not traj.aborted
        return traj.states[-1].position_m

    p4, p2, p1 = endpoint(4e-6), endpoint(2e-6), endpoint(1e-6)
    ratio = np.linalg.norm(p4 - p2) / np.linalg.norm(p2 - p1)
    assert 8.0 <= ratio <= 32.0


def test_abort_below_the_validity_floor():
    # drift in slowly with the steep core force off, so the integrator
    # samples the floor band instead of leaping across it in one substep
    config = _config(
        initial_position_m=(0.05 * R_C, 0.0, 0.0),
        initial_velocity_m_s=(-0.2, 0.0, 0.0),
        max_time_s=5e-6,
        time_step_s=10e-9,
        include_adiabatic_potential=False,
        output_stride=50,
    )
    traj = integrate(config)
    assert traj.aborted
    assert "validity floor" in traj.reason
    assert len(traj.states) >= 1
    # the recorded path never crosses the floor itself
    for state in traj.states:
        assert np.linalg.norm(state.position_m) / R_C >= 0.01


def test_adiabaticity_vanishes_at_rest_and_is_linear_in_speed():
    config = _config()
    pos = (-1.5 * R_C, 1.0 * R_C, 0.0)
    assert adiabaticity(config, pos, (0.0, 0.0, 0.0)) == 0.0
    one = adiabaticity(config, pos, (0.10, 0.0, 0.0))
    two = adiabaticity(config, pos, (0.20, 0.0, 0.0))
    assert one > 0.0
    assert two == pytest.approx(2.0 * one, rel=1e-12)


def test_dressed_energy_limits_far_out():
    # '+' connects to |gg> (zero energy), '1' to the upper dressed branch
    far = (-100.0 * R_C, 0.0, 0.0)
    hbar_omega = ModelUnits.from_experiment(GAETAN.drive, GAETAN.interaction).energy_J
    config = _config(background_energy_J=1e-27)
    assert dressed_energy(config, far) == pytest.approx(1e-27, rel=1e-4)
    lam = np.hypot(1.0, GAETAN.drive.detuning_ratio)
    upper = dressed_energy(dataclasses.replace(config, label="1"), far)
    assert upper == pytest.approx(lam * hbar_omega + 1e-27, rel=1e-4)


def test_label_swap_matches_between_branches():
    # with zero detuning the '1' state over an attractive interaction sees
    # the same connection as '+' over a repulsive one, so Lorentz-only
    # trajectories coincide step for step
    drive0 = dataclasses.replace(GAETAN.drive, detuning_rad_s=0.0)
    shared = dict(
        initial_position_m=(-2.0 * R_C, 1.0 * R_C, 0.0),
        initial_velocity_m_s=(0.10, 0.0, 0.0),
        max_time_s=40e-6,
        time_step_s=100e-9,
        include_adiabatic_potential=False,
        output_stride=100,
    )
    attractive = TrajectoryConfig(
        drive=drive0, interaction=GAETAN.interaction, label="1", **shared
    )
    repulsive = TrajectoryConfig(
        drive=drive0, interaction=RDD_REP, label="+", **shared
    )
    t_att = integrate(attractive)
    t_rep = integrate(repulsive)
    assert not t_att.aborted and not t_rep.aborted
    a_final = t_att.states[-1].position_m
    r_final = t_rep.states[-1].position_m
    assert a_final == pytest.approx(r_final, rel=1e-13)


def test_traversal_time_of_a_straight_crossing():
    speed = 0.20
    config = _config(
        include_lorentz=False,
        include_adiabatic_potential=False,
        initial_velocity_m_s=(speed, 0.0, 0.0),
        max_time_s=6.0 * R_C / speed,
        output_stride=20,
    )
    traj = integrate(config)
    assert traversal_time_s(traj, R_C) == pytest.approx(2.0 * R_C / speed, rel=1e-9)
    short = integrate(dataclasses.replace(config, max_time_s=1e-6))
    with pytest.raises(ValueError, match="does not span"):
        traversal_time_s(short, R_C)


def test_deflection_scenario_wiring():
    scenario = deflection_scenario(speed_m_s=0.12, impact_parameter_rc=0.8)
    assert scenario.include_lorentz
    assert not scenario.include_adiabatic_potential
    assert scenario.label == "+"
    assert scenario.initial_position_m[0] == pytest.approx(-6.0 * R_C)
    assert scenario.initial_position_m[1] == pytest.approx(0.8 * R_C)
    assert scenario.initial_velocity_m_s == (0.12, 0.0, 0.0)
    assert scenario.max_time_s == pytest.approx(12.0 * R_C / 0.12)
    # smoke: the first microseconds integrate cleanly
    probe = dataclasses.replace(scenario, max_time_s=2e-6, output_stride=10)
    assert not integrate(probe).aborted

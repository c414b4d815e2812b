"""Acceptance suite: every headline guarantee, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as
they print; each test asserts its own criterion at the stated tolerance.
"""

import dataclasses
import time

import numpy as np
import pytest

from rydgauge.analysis import scaling_fit, scan_1d
from rydgauge.cli import main
from rydgauge.com_frame import com_scalar_potentials, com_vector_potentials
from rydgauge.constants import BOLTZMANN, TWOPI
from rydgauge.dynamics import deflection_scenario, integrate, traversal_time_s
from rydgauge.gauge import (
    berry_connection_fd,
    connection_profile,
    field_profile,
    magnetic_field,
    scalar_potential,
    scalar_potential_fd,
    vector_potential,
)
from rydgauge.model import (
    InteractionKind,
    InteractionModel,
    ModelUnits,
    crossover_distance,
    get_preset,
    interaction_shift,
    reduced_parameters,
)
from rydgauge.regimes import blockade_correspondence, blockade_gauge, weak_expansion
from rydgauge.spectrum import PairConfiguration, eigenvalues_analytic
from rydgauge.validate import report, run_checks

SEED = 20260819

GAETAN = get_preset("gaetan2009")
RDD_ATT = GAETAN.interaction
RDD_REP = dataclasses.replace(RDD_ATT, coefficient=-RDD_ATT.coefficient)
VDW_ATT = InteractionModel(kind=InteractionKind.VDW, coefficient=-TWOPI * 300e9 * 1e-36)


def _drive(w: float):
    base = GAETAN.drive
    return dataclasses.replace(base, detuning_rad_s=w * base.rabi_magnitude_rad_s)


def _emit(name: str, ok: bool, detail: str) -> None:
    print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")
    assert ok, f"{name}: {detail}"


def test_analytic_energies_match_dense_diagonalization():
    started = time.perf_counter()
    draws = 10_000
    rng = np.random.default_rng(SEED)
    w = rng.uniform(-5.0, 5.0, size=draws)
    u = rng.uniform(-100.0, 100.0, size=draws)
    phases = rng.uniform(0.0, TWOPI, size=(draws, 2))
    matrices = np.zeros((draws, 4, 4), dtype=complex)
    coupling = np.exp(1j * phases[:, 0]) / np.sqrt(2.0)
    matrices[:, 1, 1] = u - w
    matrices[:, 3, 3] = w
    matrices[:, 1, 2] = coupling * np.exp(1j * phases[:, 1])
    matrices[:, 2, 1] = np.conj(matrices[:, 1, 2])
    matrices[:, 2, 3] = coupling
    matrices[:, 3, 2] = np.conj(coupling)
    analytic = np.empty((draws, 4))
    for i in range(draws):
        labeled = eigenvalues_analytic(1.0, w[i], u[i])
        analytic[i] = np.sort([0.0, labeled.e1, labeled.eminus, labeled.eplus])
    numeric = np.linalg.eigvalsh(matrices)
    worst = float((np.abs(numeric - analytic) / np.maximum(1.0, np.abs(analytic))).max())
    elapsed = time.perf_counter() - started
    _emit(
        "analytic energies vs dense solver",
        worst < 1e-10 and elapsed < 10.0,
        f"{draws} draws, worst rel {worst:.2e} (< 1e-10), {elapsed:.1f} s (< 10 s)",
    )


def _oracle_grid():
    return [
        (float(x), w, kind, label)
        for x in np.geomspace(0.1, 10.0, 12)
        for w in (-3.0, -2.0, -1.0, 0.0, 1.0)
        for kind in (InteractionKind.RDD, InteractionKind.VDW)
        for label in ("1", "+", "-")
    ]


def _model_for(kind: InteractionKind) -> InteractionModel:
    return RDD_ATT if kind is InteractionKind.RDD else VDW_ATT


def test_vector_potential_matches_berry_connection_oracle():
    worst = 0.0
    grid = _oracle_grid()
    for x, w, kind, label in grid:
        drive = _drive(w)
        model = _model_for(kind)
        closed = vector_potential(drive, model, label, x)
        positions = PairConfiguration((x, 0.0, 0.0), (0.0, 0.0, 0.0))
        oracle = berry_connection_fd(drive, model, label, positions)
        rel = np.linalg.norm(oracle.vector - closed) / np.linalg.norm(closed)
        worst = max(worst, float(rel), oracle.imag_residual)
    _emit(
        "vector potential vs finite-difference geometric connection",
        worst < 1e-6,
        f"{len(grid)} grid points, worst rel {worst:.2e} (< 1e-6)",
    )


def test_scalar_potential_matches_summed_overlap_oracle():
    worst = 0.0
    grid = _oracle_grid()
    for x, w, kind, label in grid:
        drive = _drive(w)
        model = _model_for(kind)
        closed = scalar_potential(drive, model, label, x)
        oracle = scalar_potential_fd(drive, model, label, x)
        worst = max(worst, abs(oracle - closed) / abs(closed))
    _emit(
        "scalar potential vs summed finite-difference overlaps",
        worst < 1e-6,
        f"{len(grid)} grid points, worst rel {worst:.2e} (< 1e-6)",
    )


def test_connection_plateaus_at_zero_detuning():
    reduced = reduced_parameters(_drive(0.0), RDD_ATT)
    near = np.sort(connection_profile(0.02, reduced))
    far = connection_profile(50.0, reduced)
    dev = max(
        abs(near[0] + 1.0),
        abs(near[1] + 0.25),
        abs(near[2] + 0.25),
        float(np.abs(far + 0.5).max()),
    )
    _emit(
        "short- and long-range plateaus of A at zero detuning",
        dev < 1e-3,
        f"targets {{-1, -1/4}} inward, -1/2 outward; worst deviation "
        f"{dev:.2e} hbar*k_L (< 1e-3)",
    )


def test_blockade_effective_theory_tracks_the_general_result():
    mapping = blockade_correspondence(RDD_ATT.sign)
    worst_mid = 0.0
    monotone = True
    for w in (0.0, -1.0):
        drive = _drive(w)
        devs = []
        for x in (0.1, 0.05, 0.02):
            dev = 0.0
            for branch, label in (("+", mapping["eff_plus"]), ("-", mapping["eff_minus"])):
                eff = blockade_gauge(drive, RDD_ATT, x, branch)
                general = vector_potential(drive, RDD_ATT, label, x)
                phi = scalar_potential(drive, RDD_ATT, label, x)
                dev = max(
                    dev,
                    float(np.linalg.norm(eff.vector_potential - general)
                          / np.linalg.norm(general)),
                    abs(eff.scalar_potential - phi) / abs(phi),
                )
            devs.append(dev)
        monotone = monotone and devs[0] > devs[1] > devs[2]
        worst_mid = max(worst_mid, devs[1])
    _emit(
        "blockade effective theory vs general connection",
        worst_mid < 0.01 and monotone,
        f"rel deviation {worst_mid:.2e} at 0.05 r_c (< 1%), "
        f"monotone over {{0.1, 0.05, 0.02}} r_c: {monotone}",
    )


def test_weak_interaction_residual_is_second_order():
    drive = _drive(-1.0)
    r_c = crossover_distance(RDD_ATT, drive)
    residuals = []
    # moving out by 2^(1/3) halves the cube-law shift exactly
    for x in (20.0, 20.0 * 2.0 ** (1.0 / 3.0)):
        shift = interaction_shift(RDD_ATT, x * r_c)
        general = vector_potential(drive, RDD_ATT, "1", x)
        linear = weak_expansion(drive, "1", shift)
        residuals.append(float(np.linalg.norm(general - linear)))
    ratio = residuals[0] / residuals[1]
    _emit(
        "weak-interaction expansion residual order",
        abs(ratio - 4.0) <= 0.4,
        f"residual ratio under shift halving {ratio:.4f} (4.0 +/- 0.4) at 20 r_c",
    )


def test_field_symmetries():
    xs = np.geomspace(0.3, 3.0, 9)
    w = -1.3
    b_fwd = field_profile(xs, reduced_parameters(_drive(w), RDD_ATT))
    b_rev = field_profile(xs, reduced_parameters(_drive(-w), RDD_REP))
    swap = float(np.abs(b_fwd[0] - b_rev[2]).max())  # B1(V,d) = B+(-V,-d)
    minus = float(np.abs(b_fwd[1] - b_rev[1]).max())  # B-(V,d) = B-(-V,-d)
    r_vec = np.array([0.8, 0.3, 0.6])
    b_a = magnetic_field(_drive(w), RDD_ATT, "1", r_vec, frame="atom_a")
    b_b = magnetic_field(_drive(w), RDD_ATT, "1", r_vec, frame="atom_b")
    anti = float(np.abs(b_a + b_b).max())
    khat = np.asarray(GAETAN.drive.wavevector_direction, dtype=float)
    azim = max(
        abs(float(np.dot(b_a, r_vec / np.linalg.norm(r_vec)))),
        abs(float(np.dot(b_a, khat))),
    )
    worst = max(swap, minus, anti, azim)
    _emit(
        "field symmetry suite",
        worst < 1e-10,
        f"sign-swap {swap:.2e}, antisymmetric-in-detuning {minus:.2e}, "
        f"opposite-atom {anti:.2e}, non-azimuthal {azim:.2e} (all < 1e-10 B0)",
    )


def test_peak_scaling_coefficients_at_large_detuning():
    started = time.perf_counter()
    ratios = (-10.0, -20.0, -40.0)
    checks = []

    fit = scaling_fit(GAETAN.drive, RDD_ATT, "1", ratios)
    target = 3.0 / (4.0 * np.sqrt(2.0))
    checks.append(("beta1 rdd", fit.coefficient, target, 0.03))

    fit = scaling_fit(GAETAN.drive, VDW_ATT, "1", ratios)
    target = 3.0 / (2.0 * np.sqrt(2.0))
    checks.append(("beta1 vdw", fit.coefficient, target, 0.03))

    fit = scaling_fit(GAETAN.drive, RDD_ATT, "+", ratios)
    checks.append(("betaplus rdd", fit.coefficient, 3.0 * 2.0 ** (1.0 / 3.0), 0.03))
    checks.append(("gammaplus rdd", fit.position, 2.0 ** (-1.0 / 3.0), 0.02))

    fit = scaling_fit(GAETAN.drive, VDW_ATT, "+", ratios)
    checks.append(("betaplus vdw", fit.coefficient, 6.0 * 2.0 ** (1.0 / 6.0), 0.03))
    checks.append(("gammaplus vdw", fit.position, 2.0 ** (-1.0 / 6.0), 0.02))

    quad = scaling_fit(GAETAN.drive, RDD_ATT, "-", ratios, kind="min")
    checks.append(("minus quadratic-minimum position", quad.position, 2.0 ** (-1.0 / 3.0), 0.02))
    lin = scaling_fit(GAETAN.drive, RDD_ATT, "-", ratios, kind="max")
    checks.append(("minus linear-maximum position", lin.position, 1.0, 0.05))

    ok = all(abs(got / want - 1.0) <= tol for _, got, want, tol in checks)
    ok = ok and 1.6 <= quad.exponent <= 2.4 and 0.8 <= lin.exponent <= 1.2
    elapsed = time.perf_counter() - started
    worst = max(abs(got / want - 1.0) / tol for _, got, want, tol in checks)
    _emit(
        "large-detuning peak scaling coefficients",
        ok and elapsed < 120.0,
        f"8 targets, worst deviation at {worst:.2f} of its tolerance; "
        f"exponents {quad.exponent:.3f} (quadratic), {lin.exponent:.3f} (linear); "
        f"{elapsed:.1f} s (< 2 min)",
    )


def test_preset_scales_match_the_experiments():
    units = ModelUnits.from_experiment(GAETAN.drive, GAETAN.interaction)
    r_c_um = units.length_m * 1e6
    b0_mt = units.field_T * 1e3
    ok = abs(r_c_um - 7.9) <= 0.4 and abs(b0_mt - 1.8) <= 0.2

    from rydgauge.model import (
        BEGUIN2013_C6_RANGE_RAD_S_M6,
        BEGUIN2013_RABI_RANGE_RAD_S,
    )

    beguin = get_preset("beguin2013")
    r_values, b_values = [], []
    for rabi in BEGUIN2013_RABI_RANGE_RAD_S:
        for c6 in BEGUIN2013_C6_RANGE_RAD_S_M6:
            drive = dataclasses.replace(beguin.drive, rabi_magnitude_rad_s=rabi)
            model = dataclasses.replace(beguin.interaction, coefficient=-c6)
            corner = ModelUnits.from_experiment(drive, model)
            r_values.append(corner.length_m * 1e6)
            b_values.append(corner.field_T * 1e3)
    ok = ok and 3.2 <= min(r_values) and max(r_values) <= 17.0
    ok = ok and 0.7 <= min(b_values) and max(b_values) <= 4.4

    recoil_uk = units.scalar_a_J / BOLTZMANN * 1e6
    ok = ok and 1.0 <= recoil_uk <= 1.5
    _emit(
        "experiment-scale presets",
        ok,
        f"gaetan2009 r_c {r_c_um:.2f} um (7.9 +/- 0.4), B0 {b0_mt:.2f} mT "
        f"(1.8 +/- 0.2); beguin2013 r_c {min(r_values):.1f}-{max(r_values):.1f} um "
        f"(within [3.2, 17]), B0 {min(b_values):.2f}-{max(b_values):.2f} mT "
        f"(within [0.7, 4.4]); recoil unit {recoil_uk:.2f} uK (1.0-1.5)",
    )


def test_flyby_deflection_scenario():
    started = time.perf_counter()
    scenario = deflection_scenario()
    trajectory = integrate(scenario)
    assert not trajectory.aborted, trajectory.reason
    deflection_um = trajectory.states[-1].position_m[2] * 1e6
    r_c = ModelUnits.from_experiment(scenario.drive, scenario.interaction).length_m
    crossing_us = traversal_time_s(trajectory, r_c) * 1e6
    worst_adiabaticity = max(s.adiabaticity for s in trajectory.states)
    speeds = [np.linalg.norm(s.velocity_m_s) for s in trajectory.states]
    energy_drift = abs(max(speeds) - min(speeds)) / speeds[0]

    def endpoint(dt_s):
        # order probe: cross the strong-field region with all force terms
        # active, on the repulsive branch so the path stays resolvable
        config = dataclasses.replace(
            scenario,
            interaction=RDD_REP,
            initial_position_m=(-3.0 * r_c, r_c, 0.0),
            initial_velocity_m_s=(0.15, 0.0, 0.0),
            max_time_s=160e-6,
            time_step_s=dt_s,
            include_adiabatic_potential=True,
            output_stride=10**6,
        )
        run = integrate(config)
        assert not run.aborted
        return run.states[-1].position_m

    p4, p2, p1 = endpoint(4e-6), endpoint(2e-6), endpoint(1e-6)
    order_ratio = float(np.linalg.norm(p4 - p2) / np.linalg.norm(p2 - p1))
    elapsed = time.perf_counter() - started
    ok = (
        0.3 <= abs(deflection_um) <= 3.0
        and abs(crossing_us - 160.0) <= 5.0
        and worst_adiabaticity <= 0.05
        and energy_drift < 1e-8
        and 8.0 <= order_ratio <= 32.0
        and elapsed < 60.0
    )
    _emit(
        "flyby deflection scenario",
        ok,
        f"z-deflection {deflection_um:.3f} um (in [0.3, 3]), crossing "
        f"{crossing_us:.1f} us (160 +/- 5), adiabaticity {worst_adiabaticity:.1e} "
        f"(<= 0.05), speed drift {energy_drift:.1e} (< 1e-8), step-halving ratio "
        f"{order_ratio:.1f} (in [8, 32]), {elapsed:.1f} s (< 1 min)",
    )


def test_com_frame_decomposition():
    mass_a = GAETAN.drive.mass_a_kg
    mass_b = mass_a * 40.0 / 87.0
    drive = dataclasses.replace(_drive(-1.0), mass_b_kg=mass_b)
    single = vector_potential(drive, RDD_ATT, "+", 1.0)
    a_com, _ = com_vector_potentials(single, single, mass_a, mass_b)
    sum_exact = bool(np.all(a_com == 2.0 * single))

    # the phase cross term enters the relative part only through the
    # squared mass asymmetry, so equal masses remove it entirely
    x_probe = 0.8
    equal = com_scalar_potentials(drive, RDD_ATT, "+", x_probe, mass_a, mass_a)
    mixed = com_scalar_potentials(drive, RDD_ATT, "+", x_probe, mass_a, mass_b)
    dm = (mass_b - mass_a) / (mass_a + mass_b)
    cross = mixed.phi_relative - equal.phi_relative
    cross_ok = cross == pytest.approx(dm * dm * mixed.phi_com / 4.0, rel=1e-10)

    grid = np.geomspace(0.1, 10.0, 200)
    nonneg = True
    for label in ("1", "+", "-"):
        for x in grid:
            com = com_scalar_potentials(drive, RDD_ATT, label, float(x))
            nonneg = nonneg and com.phi_com >= 0.0 and com.phi_relative >= 0.0
    _emit(
        "center-of-mass decomposition",
        sum_exact and cross_ok and nonneg,
        f"A sum exact: {sum_exact}; equal-mass cross term vanishes: {cross_ok}; "
        f"both scalar parts nonnegative over {grid.size}-point grid x 3 labels: {nonneg}",
    )


def test_deterministic_outputs(capsys):
    scan_args = [
        "scan", "--preset", "gaetan2009", "--detuning-ratio", "0",
        "--rmin", "0.1", "--rmax", "5", "--points", "400",
    ]
    assert main(scan_args) == 0
    first_scan = capsys.readouterr().out
    assert main(scan_args) == 0
    second_scan = capsys.readouterr().out

    first_report = report(run_checks(quick=True))
    second_report = report(run_checks(quick=True))
    ok = first_scan == second_scan and first_report == second_report
    with capsys.disabled():
        _emit(
            "deterministic outputs",
            ok and first_report.splitlines()[-1].endswith("0 failed"),
            f"reference scan byte-identical: {first_scan == second_scan}; "
            f"quick validation byte-identical: {first_report == second_report}",
        )

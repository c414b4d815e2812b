"""Self-contained oracle and invariant checks behind `validate`.

Every check is deterministic (fixed seeds, fixed grids) and returns a
named pass/fail with a one-line detail, so two consecutive runs produce
byte-identical reports.  The quick tier keeps grids small; the full tier
widens them to the acceptance-suite sizes.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

import numpy as np

from .analysis import scan_1d
from .com_frame import com_scalar_potentials, com_vector_potentials
from .constants import HBAR, TWOPI
from .gauge import (
    berry_connection_fd,
    connection_profile,
    field_profile,
    magnetic_field,
    scalar_potential,
    scalar_potential_fd,
    single_atom_gauge,
    vector_potential,
)
from .model import (
    DriveParams,
    InteractionKind,
    InteractionModel,
    crossover_distance,
    get_preset,
    interaction_shift,
    reduced_parameters,
)
from .regimes import (
    antiblockade_distances,
    blockade_correspondence,
    blockade_gauge,
    blockade_effective,
    effective_hamiltonian,
    weak_expansion,
)
from .spectrum import (
    LABELS,
    PairConfiguration,
    eigenvalues_analytic,
    eigenvalues_numeric,
)
from .tables import scan_to_csv

SEED = 20260819


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _drive(detuning_ratio: float = 0.0, rabi_mhz: float = 6.5) -> DriveParams:
    rabi = TWOPI * rabi_mhz * 1e6
    base = get_preset("gaetan2009").drive
    return dataclasses.replace(
        base,
        rabi_magnitude_rad_s=rabi,
        detuning_rad_s=detuning_ratio * rabi,
    )


def _model(kind: InteractionKind, sign: float) -> InteractionModel:
    coefficient = {
        InteractionKind.RDD: TWOPI * 3200e6 * 1e-18,
        InteractionKind.VDW: TWOPI * 300e9 * 1e-36,
    }[kind]
    return InteractionModel(kind=kind, coefficient=sign * coefficient)


def _check_eigenvalues(draws: int) -> CheckResult:
    rng = np.random.default_rng(SEED)
    w = rng.uniform(-5.0, 5.0, size=draws)
    u = rng.uniform(-100.0, 100.0, size=draws)
    phases = rng.uniform(0.0, TWOPI, size=(draws, 2))
    analytic = np.empty((draws, 4))
    matrices = np.zeros((draws, 4, 4), dtype=complex)
    coupling = np.exp(1j * phases[:, 0]) / np.sqrt(2.0)
    matrices[:, 1, 1] = u - w
    matrices[:, 3, 3] = w
    matrices[:, 1, 2] = coupling * np.exp(1j * phases[:, 1])
    matrices[:, 2, 1] = np.conj(matrices[:, 1, 2])
    matrices[:, 2, 3] = coupling
    matrices[:, 3, 2] = np.conj(coupling)
    for i in range(draws):
        labeled = eigenvalues_analytic(1.0, w[i], u[i])
        analytic[i] = np.sort([0.0, labeled.e1, labeled.eminus, labeled.eplus])
    numeric = np.linalg.eigvalsh(matrices)
    rel = np.abs(numeric - analytic) / np.maximum(1.0, np.abs(analytic))
    worst = float(rel.max())
    return CheckResult(
        name="eigenvalues_analytic_vs_dense",
        passed=worst < 1e-10,
        detail=f"{draws} draws, worst rel {worst:.2e}",
    )


def _check_berry(points) -> CheckResult:
    worst = 0.0
    for x, w, kind, label in points:
        drive = _drive(w)
        model = _model(kind, -1.0)
        closed = vector_potential(drive, model, label, x)
        positions = PairConfiguration((x, 0.0, 0.0), (0.0, 0.0, 0.0))
        oracle = berry_connection_fd(drive, model, label, positions)
        num = np.linalg.norm(oracle.vector - closed)
        worst = max(worst, num / np.linalg.norm(closed), oracle.imag_residual)
    return CheckResult(
        name="berry_connection_closed_vs_fd",
        passed=worst < 1e-6,
        detail=f"{len(points)} samples, worst rel {worst:.2e}",
    )


def _check_scalar(points) -> CheckResult:
    worst = 0.0
    for x, w, kind, label in points:
        drive = _drive(w)
        model = _model(kind, -1.0)
        closed = scalar_potential(drive, model, label, x)
        oracle = scalar_potential_fd(drive, model, label, x)
        worst = max(worst, abs(oracle - closed) / abs(closed))
    return CheckResult(
        name="scalar_potential_closed_vs_fd",
        passed=worst < 1e-6,
        detail=f"{len(points)} samples, worst rel {worst:.2e}",
    )


def _check_plateaus() -> CheckResult:
    drive = _drive(0.0)
    model = _model(InteractionKind.RDD, -1.0)
    reduced = reduced_parameters(drive, model)
    near = np.sort(connection_profile(0.02, reduced))
    far = connection_profile(50.0, reduced)
    dev = max(
        abs(near[0] + 1.0),
        abs(near[1] + 0.25),
        abs(near[2] + 0.25),
        float(np.abs(far + 0.5).max()),
    )
    return CheckResult(
        name="vector_potential_plateaus",
        passed=dev < 1e-3,
        detail=f"worst plateau deviation {dev:.2e} hbar*k_L",
    )


def _check_blockade() -> CheckResult:
    model = _model(InteractionKind.RDD, -1.0)
    mapping = blockade_correspondence(model.sign)
    worst_tail = 0.0
    monotone = True
    for w in (0.0, -1.0):
        drive = _drive(w)
        devs = []
        for x in (0.1, 0.05, 0.02):
            dev = 0.0
            for branch, label in (("+", mapping["eff_plus"]), ("-", mapping["eff_minus"])):
                eff = blockade_gauge(drive, model, x, branch)
                general = vector_potential(drive, model, label, x)
                phi = scalar_potential(drive, model, label, x)
                dev = max(
                    dev,
                    float(
                        np.linalg.norm(eff.vector_potential - general)
                        / np.linalg.norm(general)
                    ),
                    abs(eff.scalar_potential - phi) / abs(phi),
                )
            devs.append(dev)
        monotone = monotone and devs[0] > devs[1] > devs[2]
        worst_tail = max(worst_tail, devs[1])
    passed = monotone and worst_tail < 0.01
    return CheckResult(
        name="blockade_limit_matches_general",
        passed=passed,
        detail=f"dev at 0.05 r_c {worst_tail:.2e}, monotone {monotone}",
    )


def _check_weak() -> CheckResult:
    model = _model(InteractionKind.RDD, -1.0)
    drive = _drive(-1.0)
    r_c = crossover_distance(model, drive)
    residuals = []
    # x -> x*2^(1/3) halves the cube-law shift, so the quadratic error
    # of the first-order expansion must drop by a factor of 4.
    for x in (20.0, 20.0 * 2.0 ** (1.0 / 3.0)):
        shift = interaction_shift(model, x * r_c)
        general = vector_potential(drive, model, "1", x)
        weak = weak_expansion(drive, "1", shift)
        residuals.append(float(np.linalg.norm(general - weak)))
    ratio = residuals[0] / residuals[1]
    return CheckResult(
        name="weak_expansion_quadratic_residual",
        passed=abs(ratio - 4.0) <= 0.4,
        detail=f"residual ratio under V halving {ratio:.4f}",
    )


def _check_symmetry() -> CheckResult:
    xs = np.geomspace(0.3, 3.0, 7)
    w = -1.3
    drive_fwd = _drive(w)
    drive_rev = _drive(-w)
    model_att = _model(InteractionKind.RDD, -1.0)
    model_rep = _model(InteractionKind.RDD, +1.0)
    b_fwd = field_profile(xs, reduced_parameters(drive_fwd, model_att))
    b_rev = field_profile(xs, reduced_parameters(drive_rev, model_rep))
    one_plus = float(np.abs(b_fwd[0] - b_rev[2]).max())
    minus = float(np.abs(b_fwd[1] - b_rev[1]).max())
    r_vec = np.array([0.8, 0.3, 0.6])
    b_a = magnetic_field(drive_fwd, model_att, "1", r_vec, frame="atom_a")
    b_b = magnetic_field(drive_fwd, model_att, "1", r_vec, frame="atom_b")
    anti = float(np.abs(b_a + b_b).max())
    khat = np.asarray(drive_fwd.wavevector_direction, dtype=float)
    azim = max(
        abs(float(np.dot(b_a, r_vec / np.linalg.norm(r_vec)))),
        abs(float(np.dot(b_a, khat))),
    )
    worst = max(one_plus, minus, anti, azim)
    return CheckResult(
        name="field_symmetries",
        passed=worst < 1e-10,
        detail=f"worst deviation {worst:.2e} B0",
    )


def _check_com() -> CheckResult:
    drive = dataclasses.replace(_drive(-1.0), mass_b_kg=_drive(0.0).mass_b_kg * 40.0 / 87.0)
    model = _model(InteractionKind.RDD, -1.0)
    x = 1.0
    label = "+"
    a_single = vector_potential(drive, model, label, x)
    a_com, a_rel = com_vector_potentials(
        a_single, a_single, drive.mass_a_kg, drive.mass_b_kg
    )
    sum_exact = float(np.abs(a_com - 2.0 * a_single).max()) == 0.0
    phi = scalar_potential(drive, model, label, x)
    com = com_scalar_potentials(drive, model, label, x)
    m_a, m_b = drive.mass_a_kg, drive.mass_b_kg
    m_total = m_a + m_b
    mu = m_a * m_b / m_total
    lhs = phi / m_a + phi / m_b
    rhs = com.phi_com / m_total + com.phi_relative / mu
    identity = abs(lhs - rhs) / lhs
    nonneg = com.phi_com >= 0.0 and com.phi_relative >= 0.0
    passed = sum_exact and identity < 1e-10 and nonneg
    return CheckResult(
        name="com_frame_decomposition",
        passed=passed,
        detail=f"variance identity rel {identity:.2e}",
    )


def _check_antiblockade() -> CheckResult:
    model = _model(InteractionKind.RDD, -1.0)
    drive = _drive(-1.0)
    result = antiblockade_distances(drive, model)
    dev = abs(
        interaction_shift(model, result.r_two_photon_m) - 2.0 * drive.detuning_rad_s
    ) / abs(2.0 * drive.detuning_rad_s)
    dev = max(
        dev,
        abs(interaction_shift(model, result.r_single_photon_m) - drive.detuning_rad_s)
        / abs(drive.detuning_rad_s),
    )
    empty = antiblockade_distances(_drive(1.0), model)
    passed = dev < 1e-12 and empty.r_two_photon_m is None and bool(empty.reason)
    return CheckResult(
        name="antiblockade_distances_solve_resonance",
        passed=passed,
        detail=f"residual of V(r) at resonance {dev:.2e}",
    )


def _check_effective_hamiltonian() -> CheckResult:
    model = _model(InteractionKind.RDD, -1.0)
    drive = _drive(-0.7)
    config = PairConfiguration((0.05, 0.0, 0.0), (0.0, 0.0, 0.0))
    h = effective_hamiltonian(drive, model, config)
    eff = blockade_effective(drive, model, config)
    trace_dev = abs(np.trace(h).real + HBAR * eff.light_shift_rad_s)
    dark_dev = abs(h[0, 0].real + HBAR * drive.detuning_rad_s / 3.0)
    scale = HBAR * abs(drive.rabi_complex)
    block = np.array([[h[1, 1], h[1, 2]], [h[2, 1], h[2, 2]]])
    numeric = eigenvalues_numeric(block)
    closed = np.sort([eff.energy_plus_J, eff.energy_minus_J])
    pair_dev = float(np.abs(numeric - closed).max())
    ortho = abs(np.vdot(eff.eigenvector_plus, eff.eigenvector_minus))
    worst = max(trace_dev / scale, dark_dev / scale, pair_dev / scale, ortho)
    return CheckResult(
        name="blockade_effective_spectrum",
        passed=worst < 1e-12,
        detail=f"worst deviation {worst:.2e} (hbar*|Omega| units)",
    )


def _check_single_atom() -> CheckResult:
    drive = _drive(0.0)
    sample = single_atom_gauge(drive, "+")
    dev = max(
        abs(sample.vector_potential[2] + 0.5),
        abs(sample.scalar_potential - 0.25),
        float(np.abs(sample.magnetic_field).max()),
    )
    return CheckResult(
        name="single_atom_limits",
        passed=dev < 1e-14,
        detail=f"delta=0 branch '+' deviation {dev:.2e}",
    )


def _check_determinism() -> CheckResult:
    drive = _drive(0.0)
    model = _model(InteractionKind.RDD, -1.0)
    grid = np.geomspace(0.5, 2.0, 11)
    first = scan_to_csv(scan_1d(drive, model, ("1", "+", "-"), grid))
    second = scan_to_csv(scan_1d(drive, model, ("1", "+", "-"), grid))
    return CheckResult(
        name="scan_serialization_deterministic",
        passed=first == second,
        detail=f"{len(first)} bytes, identical {first == second}",
    )


def run_checks(quick: bool = True) -> list[CheckResult]:
    """Run the named validation suite; full mode widens draws and grids."""
    if quick:
        draws = 2000
        oracle_points = [
            (1.0, 0.0, InteractionKind.RDD, "1"),
            (1.0, 0.0, InteractionKind.RDD, "-"),
            (1.0, 0.0, InteractionKind.RDD, "+"),
            (0.5, -2.0, InteractionKind.VDW, "+"),
            (0.9427, -1.0, InteractionKind.VDW, "-"),
            (5.0, 1.0, InteractionKind.RDD, "1"),
        ]
        scalar_points = oracle_points
    else:
        draws = 10000
        oracle_points = [
            (x, w, kind, label)
            for kind in (InteractionKind.RDD, InteractionKind.VDW)
            for w in (-3.0, -2.0, -1.0, 0.0, 1.0)
            for label in LABELS
            for x in np.geomspace(0.1, 10.0, 8)
        ]
        scalar_points = oracle_points
    return [
        _check_eigenvalues(draws),
        _check_berry(oracle_points),
        _check_scalar(scalar_points),
        _check_plateaus(),
        _check_blockade(),
        _check_weak(),
        _check_symmetry(),
        _check_com(),
        _check_antiblockade(),
        _check_effective_hamiltonian(),
        _check_single_atom(),
        _check_determinism(),
    ]


def summary_line(results: list[CheckResult]) -> str:
    passed = sum(1 for r in results if r.passed)
    return f"oracles: {passed} passed, {len(results) - passed} failed"


def report(results: list[CheckResult]) -> str:
    lines = [
        f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}" for r in results
    ]
    lines.append(summary_line(results))
    return "\n".join(lines) + "\n"

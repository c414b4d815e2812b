"""Artificial gauge potentials of the dressed atom pair.

Closed-form vector potential, magnetic field and scalar potential for each
labeled internal state, the single-atom limits, and a finite-difference
Berry-connection oracle that validates the closed forms.

Outputs are in model units: A in hbar·k_L, B in B0 = hbar·k_L/(e·r_c),
scalar potentials in hbar^2·k_L^2/(2m) of the tagged atom.  Separations
are in crossover-distance units.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .model import (
    DriveParams,
    InteractionModel,
    ReducedParameters,
    reduced_parameters,
)
from .spectrum import (
    LABEL_INDEX,
    LABELS,
    PairConfiguration,
    bare_state_vector,
    dark_state_vector,
    labeled_spectrum,
)

FD_STEP = 1e-6  # default finite-difference step, crossover units


def _fd_step(step, x):
    """Cap the step so stencils at small separations stay one-sided safe."""
    return np.minimum(step, np.asarray(x, dtype=float) / 8.0)


def connection_profile(x_over_rc, reduced: ReducedParameters) -> np.ndarray:
    """Vector-potential magnitude a(x) for all labels, units hbar·k_L.

    Returns shape (3,) + x.shape, rows ordered per spectrum.LABELS.  The
    full vector potential is a(x)·e_k.
    """
    u = reduced.shift_ratio(x_over_rc)
    _, ee, gg = labeled_spectrum(u, reduced.detuning_ratio)
    n2 = 1.0 / (ee * ee + gg * gg + 2.0 * ee * ee * gg * gg)
    return -n2 * ee * ee * (1.0 + gg * gg)


def field_profile(x_over_rc, reduced: ReducedParameters, step: float = FD_STEP) -> np.ndarray:
    """Radial derivative da/dx for all labels (azimuthal field magnitude, B0 units)."""
    x = np.asarray(x_over_rc, dtype=float)
    h = _fd_step(step, x)
    d1 = (connection_profile(x + h, reduced) - connection_profile(x - h, reduced)) / (2.0 * h)
    d2 = (connection_profile(x + h / 2, reduced) - connection_profile(x - h / 2, reduced)) / h
    return (4.0 * d2 - d1) / 3.0


def scalar_profile(x_over_rc, reduced: ReducedParameters, step: float = FD_STEP) -> np.ndarray:
    """Scalar potential for all labels, units hbar^2·k_L^2/(2m).

    Implements the closed form: the dark-state channel plus the cross-label
    sum of derivative and phase-gradient terms.  The amplitude derivatives
    are Richardson central differences of the labeled amplitudes.
    """
    x = np.asarray(x_over_rc, dtype=float)
    w = reduced.detuning_ratio
    kappa = reduced.kappa

    def amplitudes(xq):
        _, ee, gg = labeled_spectrum(reduced.shift_ratio(xq), w)
        return ee, gg

    ee, gg = amplitudes(x)
    n2 = 1.0 / (ee * ee + gg * gg + 2.0 * ee * ee * gg * gg)
    h = _fd_step(step, x)
    ee_p1, gg_p1 = amplitudes(x + h)
    ee_m1, gg_m1 = amplitudes(x - h)
    ee_p2, gg_p2 = amplitudes(x + h / 2)
    ee_m2, gg_m2 = amplitudes(x - h / 2)
    dee = (4.0 * (ee_p2 - ee_m2) / h - (ee_p1 - ee_m1) / (2.0 * h)) / 3.0
    dgg = (4.0 * (gg_p2 - gg_m2) / h - (gg_p1 - gg_m1) / (2.0 * h)) / 3.0

    out = np.empty_like(ee)
    for i in range(3):
        acc = ee[i] ** 2 * gg[i] ** 2 / 2.0
        for j in range(3):
            if j == i:
                continue
            c_ee = 1.0 + 2.0 * ee[i] * ee[j]
            c_gg = 1.0 + 2.0 * gg[i] * gg[j]
            deriv = (dee[i] * ee[j] * c_gg + c_ee * dgg[i] * gg[j]) ** 2 / kappa**2
            phase = ee[i] ** 2 * ee[j] ** 2 * (1.0 + gg[i] * gg[j]) ** 2
            acc = acc + n2[j] * (deriv + phase)
        out[i] = n2[i] * acc
    return out


@dataclass(frozen=True)
class SingleAtomGauge:
    """Gauge potentials of one isolated dressed atom."""

    branch: str  # "+" or "-"
    vector_potential: np.ndarray  # hbar·k_L units, along e_k
    scalar_potential: float  # hbar^2·k_L^2/(2m) units
    magnetic_field: np.ndarray  # identically zero for uniform drive


@dataclass(frozen=True)
class GaugeSample:
    """Gauge potentials of one labeled pair state at one separation."""

    label: str
    r_ab: float  # crossover units
    vector_potential: np.ndarray  # hbar·k_L
    scalar_potential: float  # hbar^2·k_L^2/(2m) of the frame atom
    magnetic_field: np.ndarray  # B0 units
    frame: str = "atom_a"
    flags: tuple = ()


def single_atom_gauge(params: DriveParams, branch: str) -> SingleAtomGauge:
    """Closed-form single-atom potentials for a uniform drive.

    A = (-1 ± delta/Lambda)·hbar k_L/2 along the beam, phi is constant and
    B vanishes because the drive carries no gradients.
    """
    if branch not in ("+", "-"):
        raise ValueError("branch must be '+' or '-'")
    sign = 1.0 if branch == "+" else -1.0
    w = params.detuning_ratio
    lam = np.hypot(1.0, w)
    khat = np.asarray(params.wavevector_direction, dtype=float)
    a = 0.5 * (-1.0 + sign * w / lam)
    return SingleAtomGauge(
        branch=branch,
        vector_potential=a * khat,
        scalar_potential=1.0 / (4.0 * lam * lam),
        magnetic_field=np.zeros(3),
    )


def vector_potential(
    params: DriveParams, model: InteractionModel, label: str, r_ab: float
) -> np.ndarray:
    """Two-atom vector potential at separation r_ab (crossover units).

    Identical for both atoms and directed along e_k; depends on the
    positions only through their distance.
    """
    if label not in LABELS:
        raise ValueError(f"label must be one of {LABELS}")
    if not (r_ab > 0.0):
        raise ValueError("vector_potential requires r_ab > 0")
    reduced = reduced_parameters(params, model)
    a = connection_profile(float(r_ab), reduced)[LABEL_INDEX[label]]
    return a * np.asarray(params.wavevector_direction, dtype=float)


def magnetic_field(
    params: DriveParams,
    model: InteractionModel,
    label: str,
    r_vec,
    frame: str = "atom_a",
    step: float = FD_STEP,
) -> np.ndarray:
    """Artificial magnetic field at separation vector r_vec (B0 units).

    r_vec points from atom b to atom a; the field for atom b is the exact
    negative.  The radial derivative of the vector potential is taken by
    Richardson-extrapolated central differences; separations parallel to
    the beam give exactly zero (the azimuthal direction degenerates).
    """
    if frame not in ("atom_a", "atom_b"):
        raise ValueError("frame must be 'atom_a' or 'atom_b'")
    r_vec = np.asarray(r_vec, dtype=float)
    r = float(np.linalg.norm(r_vec))
    if not (r > 0.0):
        raise ValueError("magnetic_field requires a nonzero separation")
    reduced = reduced_parameters(params, model)
    dadx = float(field_profile(r, reduced, step=step)[LABEL_INDEX[label]])
    khat = np.asarray(params.wavevector_direction, dtype=float)
    azimuthal = np.cross(r_vec / r, khat)  # e_r x e_k, zero when parallel
    b = dadx * azimuthal
    return -b if frame == "atom_b" else b


def scalar_potential(
    params: DriveParams,
    model: InteractionModel,
    label: str,
    r_ab: float,
    mass_kg: float | None = None,
) -> float:
    """Two-atom scalar potential at separation r_ab (crossover units).

    The value is reported in units hbar^2·k_L^2/(2m) where m is
    ``mass_kg`` (default: atom a); in these units the number itself is
    mass independent, the mass only tags the SI conversion.
    """
    if label not in LABELS:
        raise ValueError(f"label must be one of {LABELS}")
    if not (r_ab > 0.0):
        raise ValueError("scalar_potential requires r_ab > 0")
    del mass_kg  # unit tag only; see docstring
    reduced = reduced_parameters(params, model)
    return float(scalar_profile(float(r_ab), reduced)[LABEL_INDEX[label]])


def gauge_sample(
    params: DriveParams,
    model: InteractionModel,
    label: str,
    r_vec,
    frame: str = "atom_a",
) -> GaugeSample:
    """Bundle A, phi and B of one labeled state at one separation vector."""
    r_vec = np.asarray(r_vec, dtype=float)
    r = float(np.linalg.norm(r_vec))
    reduced = reduced_parameters(params, model)
    energies, _, _ = labeled_spectrum(reduced.shift_ratio(r), reduced.detuning_ratio)
    ladder = np.concatenate(([0.0], energies))
    gaps = np.abs(ladder[:, None] - ladder[None, :])[np.triu_indices(4, k=1)]
    flags = ("near_degenerate",) if gaps.min() < 1e-10 else ()
    return GaugeSample(
        label=label,
        r_ab=r,
        vector_potential=vector_potential(params, model, label, r),
        scalar_potential=scalar_potential(params, model, label, r),
        magnetic_field=magnetic_field(params, model, label, r_vec, frame=frame),
        frame=frame,
        flags=flags,
    )


@dataclass(frozen=True)
class BerryConnection:
    """Finite-difference Berry connection with its quality diagnostics."""

    vector: np.ndarray  # hbar·k_L units
    imag_residual: float
    flags: tuple = ()


def berry_connection_fd(
    params: DriveParams,
    model: InteractionModel,
    label: str,
    positions: PairConfiguration,
    step: float = FD_STEP,
) -> BerryConnection:
    """Berry connection i·hbar<chi|grad_a chi> by central differences.

    Differentiates the gauge-fixed eigenvector with respect to the position
    of atom a, component by component, with Richardson extrapolation.  If
    the eigenvector field is not smooth across the stencil (overlap of the
    outer samples < 0.99) the step is halved and the computation retried;
    persistent failure flags the sample.
    """
    reduced = reduced_parameters(params, model)
    khat = np.asarray(params.wavevector_direction, dtype=float)
    pos_a = np.asarray(positions.position_a, dtype=float)
    pos_b = np.asarray(positions.position_b, dtype=float)

    def state(displacement):
        pa = pos_a + displacement
        r = float(np.linalg.norm(pa - pos_b))
        return bare_state_vector(
            float(reduced.shift_ratio(r)),
            reduced.detuning_ratio,
            label,
            phase_a=reduced.kappa * float(np.dot(khat, pa)),
            phase_b=reduced.kappa * float(np.dot(khat, pos_b)),
            rabi_phase=params.rabi_phase_rad,
        )

    center = state(np.zeros(3))
    connection = np.zeros(3)
    imag_residual = 0.0
    flags: list[str] = []
    for axis in range(3):
        unit = np.zeros(3)
        unit[axis] = 1.0
        h = step
        for attempt in range(4):
            outer_p, outer_m = state(h * unit), state(-h * unit)
            if abs(np.vdot(outer_p, outer_m)) >= 0.99:
                break
            h = h / 2.0
        else:
            flags.append("gauge_discontinuity")
        inner_p, inner_m = state(h / 2 * unit), state(-h / 2 * unit)
        d1 = (outer_p - outer_m) / (2.0 * h)
        d2 = (inner_p - inner_m) / h
        derivative = (4.0 * d2 - d1) / 3.0
        value = 1j * np.vdot(center, derivative) / reduced.kappa
        connection[axis] = value.real
        imag_residual = max(imag_residual, abs(value.imag))
    return BerryConnection(
        vector=connection, imag_residual=imag_residual, flags=tuple(flags)
    )


def scalar_potential_fd(
    params: DriveParams,
    model: InteractionModel,
    label: str,
    r_ab: float,
    step: float = 1e-5,
) -> float:
    """Scalar potential as a summed finite-difference overlap oracle.

    Places the separation perpendicular to the beam and accumulates
    |<chi_j|grad_a chi_i>|^2 over the three other internal states (the
    dark state included) for the radial and beam-axis displacements; the
    third axis contributes nothing at first order in this geometry.
    Units hbar^2*k_L^2/(2m), like :func:`scalar_potential`.
    """
    if label not in LABELS:
        raise ValueError(f"label must be one of {LABELS}")
    if not (r_ab > 0.0):
        raise ValueError("scalar_potential_fd requires r_ab > 0")
    reduced = reduced_parameters(params, model)
    kappa = reduced.kappa
    khat = np.asarray(params.wavevector_direction, dtype=float)
    helper = np.array([1.0, 0.0, 0.0])
    if abs(np.dot(helper, khat)) > 0.9:
        helper = np.array([0.0, 1.0, 0.0])
    e_sep = helper - np.dot(helper, khat) * khat
    e_sep = e_sep / np.linalg.norm(e_sep)

    def state(pos_a: np.ndarray) -> np.ndarray:
        r = float(np.linalg.norm(pos_a))
        return bare_state_vector(
            float(reduced.shift_ratio(r)),
            reduced.detuning_ratio,
            label,
            phase_a=kappa * float(np.dot(khat, pos_a)),
            phase_b=0.0,
            rabi_phase=params.rabi_phase_rad,
        )

    base = float(r_ab) * e_sep
    others = [
        bare_state_vector(
            float(reduced.shift_ratio(float(r_ab))),
            reduced.detuning_ratio,
            other,
            rabi_phase=params.rabi_phase_rad,
        )
        for other in LABELS
        if other != label
    ]
    others.append(dark_state_vector(0.0, 0.0))
    total = 0.0
    for axis in (e_sep, khat):
        d1 = (state(base + step * axis) - state(base - step * axis)) / (2.0 * step)
        d2 = (state(base + step / 2 * axis) - state(base - step / 2 * axis)) / step
        derivative = (4.0 * d2 - d1) / 3.0
        for other in others:
            total += abs(np.vdot(other, derivative)) ** 2
    return total / kappa**2


@dataclass(frozen=True)
class FieldMap:
    """Plane map of the artificial magnetic field around the pinned atom."""

    samples: list[GaugeSample] = field(default_factory=list)
    positions: tuple = ()  # (x, z) grid point of each sample
    skipped: tuple = ()  # grid points dropped (atom positions coincide)


def field_map(
    params: DriveParams, model: InteractionModel, label: str, x_grid, z_grid
) -> FieldMap:
    """Sample B of one labeled state over an (x, z) grid.

    Atom b sits at the origin with the beam along z; atom a is placed at
    each grid point (crossover units).  Points at the origin are skipped
    and recorded rather than raised.
    """
    if tuple(params.wavevector_direction) != (0.0, 0.0, 1.0):
        raise ValueError("field_map assumes the beam along +z")
    samples = []
    positions = []
    skipped = []
    for x in np.asarray(x_grid, dtype=float):
        for z in np.asarray(z_grid, dtype=float):
            if np.hypot(x, z) == 0.0:
                skipped.append((float(x), float(z)))
                continue
            samples.append(
                gauge_sample(params, model, label, np.array([x, 0.0, z]))
            )
            positions.append((float(x), float(z)))
    return FieldMap(samples=samples, positions=tuple(positions), skipped=tuple(skipped))

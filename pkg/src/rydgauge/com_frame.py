"""Center-of-mass and relative-coordinate form of the gauge potentials.

The lab-frame potentials transform linearly, so this module consumes
lab-frame results instead of re-deriving eigenstates: vector potentials
combine with the same mass weights as the momenta, and the scalar
potentials split the total momentum variance into a center-of-mass part
(weight 1/2M) and a relative part (weight 1/2mu).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import DriveParams, InteractionModel, reduced_parameters
from .spectrum import LABEL_INDEX, LABELS, labeled_spectrum

FD_STEP = 1e-6  # separation step for amplitude derivatives, crossover units


@dataclass(frozen=True)
class ComFrame:
    """Mass-weighted coordinates of the pair."""

    mass_a_kg: float
    mass_b_kg: float
    total_mass_kg: float
    reduced_mass_kg: float
    com_position: np.ndarray
    relative_position: np.ndarray  # points from atom b to atom a

    def __post_init__(self) -> None:
        m_sum = self.mass_a_kg + self.mass_b_kg
        mu = self.mass_a_kg * self.mass_b_kg / m_sum
        # atol=0: masses in kg are ~1e-25, the default atol would mask any error
        if not np.isclose(self.total_mass_kg, m_sum, rtol=1e-12, atol=0.0):
            raise ValueError("total mass inconsistent with per-atom masses")
        if not np.isclose(self.reduced_mass_kg, mu, rtol=1e-12, atol=0.0):
            raise ValueError("reduced mass inconsistent with per-atom masses")

    def lab_positions(self) -> tuple[np.ndarray, np.ndarray]:
        """Invert back to (position_a, position_b)."""
        frac_a = self.mass_a_kg / self.total_mass_kg
        pos_a = self.com_position + (1.0 - frac_a) * self.relative_position
        pos_b = self.com_position - frac_a * self.relative_position
        return pos_a, pos_b


def to_com(position_a, position_b, mass_a_kg: float, mass_b_kg: float) -> ComFrame:
    """Build the COM description of a pair of lab positions."""
    if mass_a_kg <= 0.0 or mass_b_kg <= 0.0:
        raise ValueError("masses must be positive")
    pos_a = np.asarray(position_a, dtype=float)
    pos_b = np.asarray(position_b, dtype=float)
    total = mass_a_kg + mass_b_kg
    return ComFrame(
        mass_a_kg=mass_a_kg,
        mass_b_kg=mass_b_kg,
        total_mass_kg=total,
        reduced_mass_kg=mass_a_kg * mass_b_kg / total,
        com_position=(mass_a_kg * pos_a + mass_b_kg * pos_b) / total,
        relative_position=pos_a - pos_b,
    )


def com_vector_potentials(
    vector_a, vector_b, mass_a_kg: float, mass_b_kg: float
) -> tuple[np.ndarray, np.ndarray]:
    """Combine per-atom vector potentials into (A_R, A_r).

    Same mass weights as the momentum map: the COM potential is the
    plain sum, the relative one is the mass-weighted difference.
    """
    a_vec = np.asarray(vector_a, dtype=float)
    b_vec = np.asarray(vector_b, dtype=float)
    total = mass_a_kg + mass_b_kg
    return a_vec + b_vec, (mass_b_kg * a_vec - mass_a_kg * b_vec) / total


def lab_vector_potentials(
    vector_com, vector_rel, mass_a_kg: float, mass_b_kg: float
) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of :func:`com_vector_potentials`."""
    com = np.asarray(vector_com, dtype=float)
    rel = np.asarray(vector_rel, dtype=float)
    total = mass_a_kg + mass_b_kg
    return mass_a_kg / total * com + rel, mass_b_kg / total * com - rel


@dataclass(frozen=True)
class ComScalarPotentials:
    """Scalar potentials of the COM split, dimensionless.

    ``phi_com`` is in units hbar^2*k_L^2/(2M), ``phi_relative`` in units
    hbar^2*k_L^2/(2mu).  Both are momentum variances, hence nonnegative.
    """

    phi_com: float
    phi_relative: float
    flags: tuple = ()


def com_scalar_potentials(
    params: DriveParams,
    model: InteractionModel,
    label: str,
    r_ab: float,
    mass_a_kg: float | None = None,
    mass_b_kg: float | None = None,
) -> ComScalarPotentials:
    """Scalar potentials of one labeled state in COM variables.

    The COM part keeps only the phase-gradient (total-momentum) terms;
    displacing both atoms together leaves the amplitudes unchanged, so
    each cross-label overlap picks up twice the single-photon recoil,
    hence the factor 4.  The relative part keeps the amplitude
    derivatives plus the phase terms damped by ((m_b - m_a)/M)^2.
    """
    if label not in LABELS:
        raise ValueError(f"label must be one of {LABELS}")
    if not (r_ab > 0.0):
        raise ValueError("com_scalar_potentials requires r_ab > 0")
    m_a = params.mass_a_kg if mass_a_kg is None else mass_a_kg
    m_b = params.mass_b_kg if mass_b_kg is None else mass_b_kg
    if m_a <= 0.0 or m_b <= 0.0:
        raise ValueError("masses must be positive")
    dm = (m_b - m_a) / (m_a + m_b)

    reduced = reduced_parameters(params, model)
    kappa = reduced.kappa
    w = reduced.detuning_ratio

    def amplitudes(xq: float):
        _, ee, gg = labeled_spectrum(reduced.shift_ratio(xq), w)
        return ee, gg

    x = float(r_ab)
    ee, gg = amplitudes(x)
    n2 = 1.0 / (ee * ee + gg * gg + 2.0 * ee * ee * gg * gg)
    h = min(FD_STEP, x / 8.0)
    ee_p1, gg_p1 = amplitudes(x + h)
    ee_m1, gg_m1 = amplitudes(x - h)
    ee_p2, gg_p2 = amplitudes(x + h / 2)
    ee_m2, gg_m2 = amplitudes(x - h / 2)
    dee = (4.0 * (ee_p2 - ee_m2) / h - (ee_p1 - ee_m1) / (2.0 * h)) / 3.0
    dgg = (4.0 * (gg_p2 - gg_m2) / h - (gg_p1 - gg_m1) / (2.0 * h)) / 3.0

    energies, _, _ = labeled_spectrum(reduced.shift_ratio(x), w)
    ladder = np.concatenate(([0.0], energies))
    gaps = np.abs(ladder[:, None] - ladder[None, :])[np.triu_indices(4, k=1)]
    flags = ("near_degenerate",) if gaps.min() < 1e-10 else ()

    i = LABEL_INDEX[label]
    phi_com = 0.0
    phi_rel = n2[i] * ee[i] ** 2 * gg[i] ** 2 / 2.0
    for j in range(3):
        if j == i:
            continue
        c_ee = 1.0 + 2.0 * ee[i] * ee[j]
        c_gg = 1.0 + 2.0 * gg[i] * gg[j]
        deriv = (dee[i] * ee[j] * c_gg + c_ee * dgg[i] * gg[j]) ** 2 / kappa**2
        phase = n2[j] * ee[i] ** 2 * ee[j] ** 2 * (1.0 + gg[i] * gg[j]) ** 2
        phi_com += 4.0 * n2[i] * phase
        phi_rel += n2[i] * (n2[j] * deriv + dm * dm * phase)
    return ComScalarPotentials(
        phi_com=float(phi_com), phi_relative=float(phi_rel), flags=flags
    )

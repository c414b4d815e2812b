"""Deterministic CSV and JSON serialization of result tables.

Fixed column schemas, 17-significant-digit floats, newline endings, no
timestamps: identical inputs must produce byte-identical files, and the
JSON rows parse back to exactly the CSV values.
"""

from __future__ import annotations

import json
import sys

from .analysis import PeakReport, ScalingFit, ScanTable
from .dynamics import Trajectory
from .gauge import FieldMap
from .model import ModelUnits

SCAN_HEADER = (
    "r_over_rc,A1,Aplus,Aminus,Bphi1,Bphiplus,Bphiminus,phi1,phiplus,phiminus"
)
SCAN_HEADER_SI = "r_m,A1,Aplus,Aminus,Bphi1,Bphiplus,Bphiminus,phi1,phiplus,phiminus"
TRAJECTORY_HEADER = "t_s,x_m,y_m,z_m,vx,vy,vz,adiabaticity"
MAP_HEADER = "x_over_rc,z_over_rc,Bx,By,Bz"
PEAKS_HEADER = "label,kind,r_peak_over_rc,field_peak,detuning_ratio,found,note"
SCALING_HEADER = "label,kind,exponent,coefficient,position,residual,flags"


def format_float(value: float) -> str:
    return f"{value:.16e}"


def _scan_columns(table: ScanTable, si: bool, units: ModelUnits | None):
    if si and units is None:
        raise ValueError("SI scan output needs the model units")
    if tuple(table.labels) != ("1", "+", "-"):
        raise ValueError("scan serialization expects labels ('1', '+', '-')")
    r = table.r_over_rc
    a, b, phi = table.vector_potential, table.azimuthal_field, table.scalar_potential
    if si:
        r = units.to_si(r, "length")
        a = units.to_si(a, "vector_potential")
        b = units.to_si(b, "field")
        phi = units.to_si(phi, "scalar_a")
    return [r, a[0], a[1], a[2], b[0], b[1], b[2], phi[0], phi[1], phi[2]]


def scan_to_csv(table: ScanTable, si: bool = False, units: ModelUnits | None = None) -> str:
    columns = _scan_columns(table, si, units)
    lines = [SCAN_HEADER_SI if si else SCAN_HEADER]
    for i in range(table.r_over_rc.size):
        lines.append(",".join(format_float(col[i]) for col in columns))
    return "\n".join(lines) + "\n"


def scan_to_json(table: ScanTable, si: bool = False, units: ModelUnits | None = None) -> str:
    columns = _scan_columns(table, si, units)
    header = SCAN_HEADER_SI if si else SCAN_HEADER
    metadata = dict(table.metadata)
    metadata["columns"] = header.split(",")
    metadata["excluded_rows"] = table.excluded_count
    rows = [
        [float(col[i]) for col in columns] for i in range(table.r_over_rc.size)
    ]
    return json.dumps({"metadata": metadata, "rows": rows}, sort_keys=True) + "\n"


def trajectory_to_csv(trajectory: Trajectory) -> str:
    lines = [TRAJECTORY_HEADER]
    for state in trajectory.states:
        row = (
            [state.t_s]
            + list(state.position_m)
            + list(state.velocity_m_s)
            + [state.adiabaticity]
        )
        lines.append(",".join(format_float(v) for v in row))
    return "\n".join(lines) + "\n"


def trajectory_to_json(trajectory: Trajectory) -> str:
    metadata = {
        "columns": TRAJECTORY_HEADER.split(","),
        "aborted": trajectory.aborted,
        "reason": trajectory.reason,
    }
    rows = [
        [float(state.t_s)]
        + [float(v) for v in state.position_m]
        + [float(v) for v in state.velocity_m_s]
        + [float(state.adiabaticity)]
        for state in trajectory.states
    ]
    return json.dumps({"metadata": metadata, "rows": rows}, sort_keys=True) + "\n"


def peaks_to_csv(reports: list[PeakReport]) -> str:
    lines = [PEAKS_HEADER]
    for rep in reports:
        lines.append(
            ",".join(
                [
                    rep.label,
                    rep.kind,
                    format_float(rep.r_peak_over_rc),
                    format_float(rep.field_peak),
                    format_float(rep.detuning_ratio),
                    str(rep.found).lower(),
                    rep.note.replace(",", ";"),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def peaks_to_json(reports: list[PeakReport]) -> str:
    rows = [
        {
            "label": rep.label,
            "kind": rep.kind,
            "r_peak_over_rc": float(rep.r_peak_over_rc),
            "field_peak": float(rep.field_peak),
            "detuning_ratio": float(rep.detuning_ratio),
            "found": rep.found,
            "note": rep.note,
        }
        for rep in reports
    ]
    metadata = {"columns": PEAKS_HEADER.split(",")}
    return json.dumps({"metadata": metadata, "rows": rows}, sort_keys=True) + "\n"


def map_to_csv(field_map: FieldMap) -> str:
    lines = [MAP_HEADER]
    for (x, z), sample in zip(field_map.positions, field_map.samples):
        lines.append(
            ",".join(
                format_float(v)
                for v in (x, z, *sample.magnetic_field)
            )
        )
    return "\n".join(lines) + "\n"


def map_to_json(field_map: FieldMap) -> str:
    metadata = {
        "columns": MAP_HEADER.split(","),
        "skipped": [list(point) for point in field_map.skipped],
    }
    rows = [
        [float(x), float(z)] + [float(v) for v in sample.magnetic_field]
        for (x, z), sample in zip(field_map.positions, field_map.samples)
    ]
    return json.dumps({"metadata": metadata, "rows": rows}, sort_keys=True) + "\n"


def scaling_to_csv(fits: list[ScalingFit]) -> str:
    lines = [SCALING_HEADER]
    for fit in fits:
        lines.append(
            ",".join(
                [
                    fit.label,
                    fit.kind,
                    format_float(fit.exponent),
                    format_float(fit.coefficient),
                    format_float(fit.position),
                    format_float(fit.residual),
                    ";".join(fit.flags),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def scaling_to_json(fits: list[ScalingFit]) -> str:
    rows = [
        {
            "label": fit.label,
            "kind": fit.kind,
            "exponent": float(fit.exponent),
            "coefficient": float(fit.coefficient),
            "position": float(fit.position),
            "residual": float(fit.residual),
            "flags": list(fit.flags),
        }
        for fit in fits
    ]
    metadata = {"columns": SCALING_HEADER.split(",")}
    return json.dumps({"metadata": metadata, "rows": rows}, sort_keys=True) + "\n"


def write_text(path: str | None, text: str) -> None:
    """Write to a file with plain newline endings, or to stdout."""
    if path is None:
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)

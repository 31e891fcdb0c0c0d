"""CSV schemas used by the command-line surface.

All files are plain comma-separated text with a header row; parsing then
re-emitting a file reproduces it byte for byte (round-trip identity), which
the golden tests rely on.

Schemas:

* decay table:    ``m,mean,variance,N,R``
* sequence records: ``m,sequence,probability,shots,R``
* sweep table:    ``param,value,m,A,B,Y,Z,stderr_A,stderr_B,R_star,V_at_1,V_at_R0,V_at_Rstar``
* runtime input:  ``R,N,T_seconds``
* calibration report: ``R,N,T,T0_pred,ratio``

Floats are written with :func:`format_float` (repr shortest round-trip);
the sweep ``R_star`` column holds an integer, or ``unbounded`` when the
between-circuit variance vanishes and reusing one circuit forever is
optimal.
"""

from __future__ import annotations

import csv
import io
from typing import Iterable

from .calibrate import RuntimeRecord
from .protocol import DecayRow, SequenceResult

__all__ = [
    "DECAY_HEADER",
    "RECORDS_HEADER",
    "REPORT_HEADER",
    "RUNTIME_HEADER",
    "SWEEP_HEADER",
    "format_float",
    "read_decay_csv",
    "read_runtime_csv",
    "read_sweep_csv",
    "write_decay_csv",
    "write_records_csv",
    "write_report_csv",
    "write_sweep_csv",
]

DECAY_HEADER = ["m", "mean", "variance", "N", "R"]
RECORDS_HEADER = ["m", "sequence", "probability", "shots", "R"]
SWEEP_HEADER = [
    "param", "value", "m", "A", "B", "Y", "Z",
    "stderr_A", "stderr_B", "R_star", "V_at_1", "V_at_R0", "V_at_Rstar",
]
RUNTIME_HEADER = ["R", "N", "T_seconds"]
REPORT_HEADER = ["R", "N", "T", "T0_pred", "ratio"]

UNBOUNDED = "unbounded"


def format_float(x: float) -> str:
    return repr(float(x))


def _write_rows(header: list[str], rows: Iterable[Iterable]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def _read_rows(text: str, header: list[str]) -> list[dict[str, str]]:
    reader = csv.DictReader(io.StringIO(text))
    if reader.fieldnames != header:
        raise ValueError(f"expected header {header}, got {reader.fieldnames}")
    return list(reader)


def write_decay_csv(rows: Iterable[DecayRow]) -> str:
    return _write_rows(
        DECAY_HEADER,
        (
            [r.length, format_float(r.mean), format_float(r.variance),
             r.n_sequences, r.reuse]
            for r in rows
        ),
    )


def read_decay_csv(text: str) -> list[DecayRow]:
    return [
        DecayRow(int(r["m"]), float(r["mean"]), float(r["variance"]),
                 int(r["N"]), int(r["R"]))
        for r in _read_rows(text, DECAY_HEADER)
    ]


def write_records_csv(records: Iterable[SequenceResult]) -> str:
    return _write_rows(
        RECORDS_HEADER,
        (
            [r.length, r.index, format_float(r.probability), r.shots, r.reuse]
            for r in records
        ),
    )


def write_sweep_csv(rows: Iterable[dict]) -> str:
    return _write_rows(
        SWEEP_HEADER,
        (
            [
                r["param"], format_float(r["value"]), r["m"],
                format_float(r["A"]), format_float(r["B"]),
                format_float(r["Y"]), format_float(r["Z"]),
                format_float(r["stderr_A"]), format_float(r["stderr_B"]),
                UNBOUNDED if r["R_star"] is None else int(r["R_star"]),
                format_float(r["V_at_1"]), format_float(r["V_at_R0"]),
                format_float(r["V_at_Rstar"]),
            ]
            for r in rows
        ),
    )


def read_sweep_csv(text: str) -> list[dict]:
    out = []
    for r in _read_rows(text, SWEEP_HEADER):
        out.append(
            {
                "param": r["param"],
                "value": float(r["value"]),
                "m": int(r["m"]),
                "A": float(r["A"]),
                "B": float(r["B"]),
                "Y": float(r["Y"]),
                "Z": float(r["Z"]),
                "stderr_A": float(r["stderr_A"]),
                "stderr_B": float(r["stderr_B"]),
                "R_star": None if r["R_star"] == UNBOUNDED else int(r["R_star"]),
                "V_at_1": float(r["V_at_1"]),
                "V_at_R0": float(r["V_at_R0"]),
                "V_at_Rstar": float(r["V_at_Rstar"]),
            }
        )
    return out


def read_runtime_csv(text: str) -> list[RuntimeRecord]:
    return [
        RuntimeRecord(int(r["R"]), int(r["N"]), float(r["T_seconds"]))
        for r in _read_rows(text, RUNTIME_HEADER)
    ]


def write_runtime_csv(records: Iterable[RuntimeRecord]) -> str:
    return _write_rows(
        RUNTIME_HEADER,
        ([r.reuse, r.n_sequences, format_float(r.seconds)] for r in records),
    )


def write_report_csv(rows: Iterable[dict]) -> str:
    return _write_rows(
        REPORT_HEADER,
        (
            [r["R"], r["N"], format_float(r["T"]), format_float(r["T0_pred"]),
             format_float(r["ratio"])]
            for r in rows
        ),
    )

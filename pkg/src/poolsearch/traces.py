"""Trace records and their JSON-lines / CSV serialization.

JSON lines are lossless: exact values are written as ``"p/q"`` strings.  CSV
keeps only the float columns and is meant for plotting.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import IO, Iterable, Optional

from .billiards import BilliardState, Trace
from .grover import GroverState, angle_of
from .numerics import format_rational


@dataclass(frozen=True)
class TraceRecord:
    step: int
    side: str  # billiard | grover | both
    event: str  # initial | wall | balls | oracle | diffusion
    exact_values: Optional[list[str]]
    float_values: list[float]
    theta: float

    def exact(self) -> Optional[list[Fraction]]:
        if self.exact_values is None:
            return None
        return [Fraction(x) for x in self.exact_values]

    def to_json(self) -> str:
        return json.dumps(asdict(self), separators=(",", ":"))

    @classmethod
    def from_json(cls, line: str) -> "TraceRecord":
        return cls(**json.loads(line))


def billiard_record(step: int, event: str, state: BilliardState, side: str = "billiard") -> TraceRecord:
    return TraceRecord(
        step,
        side,
        event,
        [format_rational(state.V), format_rational(state.v)],
        list(state.floats()),
        state.theta,
    )


def billiard_records(trace: Trace) -> list[TraceRecord]:
    records = [billiard_record(0, "initial", trace.initial)]
    records += [billiard_record(e.index, e.kind.value, e.state) for e in trace.events]
    return records


def grover_record(step: int, event: str, state: GroverState, side: str = "grover") -> TraceRecord:
    exact = [format_rational(a) for a in state.amplitudes] if state.exact else None
    return TraceRecord(
        step, side, event, exact, [float(a) for a in state.amplitudes], angle_of(state).theta
    )


def write_jsonl(records: Iterable[TraceRecord], fh: IO[str]) -> None:
    for rec in records:
        fh.write(rec.to_json())
        fh.write("\n")


def read_jsonl(fh: IO[str]) -> list[TraceRecord]:
    return [TraceRecord.from_json(line) for line in fh if line.strip()]


def write_csv(records: Iterable[TraceRecord], fh: IO[str]) -> None:
    records = list(records)
    width = max((len(r.float_values) for r in records), default=0)
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(["step", "side", "event", "theta"] + [f"v{i}" for i in range(width)])
    for r in records:
        writer.writerow([r.step, r.side, r.event, repr(r.theta)] + [repr(x) for x in r.float_values])


def write_records(records: Iterable[TraceRecord], path: str, fmt: str = "jsonl") -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        if fmt == "jsonl":
            write_jsonl(records, fh)
        elif fmt == "csv":
            write_csv(records, fh)
        else:
            raise ValueError(f"unknown trace format {fmt!r}")

"""Session data: CSV reading, data preparation, sampling and a synthetic office lot.

CSV contract (header required, UTF-8, epoch seconds)::

    session_id,arrival_ts,departure_ts,energy_kwh[,avg_power_kw]
"""

from __future__ import annotations

import csv
import math
import random
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Sequence

from .instance import Job

REQUIRED_COLUMNS = ("session_id", "arrival_ts", "departure_ts", "energy_kwh")
OPTIONAL_COLUMNS = ("avg_power_kw",)

SECONDS_PER_DAY = 86400
# 2022-09-01T00:00:00Z, only used to give synthetic sessions realistic timestamps
SYNTH_EPOCH_DAY = 1661990400


class SessionFormatError(ValueError):
    pass


@dataclass(frozen=True)
class RawSession:
    session_id: str
    arrival_ts: float
    departure_ts: float
    energy_kwh: float
    avg_power_kw: float | None = None
    # explicit charger limit in kW; when absent the 11/22 kW rule applies
    power_cap_kw: float | None = None

    def __post_init__(self):
        if not self.departure_ts > self.arrival_ts:
            raise SessionFormatError(f"session {self.session_id}: departure not after arrival")
        if self.energy_kwh < 0:
            raise SessionFormatError(f"session {self.session_id}: negative energy")
        if self.avg_power_kw is None:
            hours = (self.departure_ts - self.arrival_ts) / 3600.0
            object.__setattr__(self, "avg_power_kw", self.energy_kwh / hours)

    @property
    def duration_h(self) -> float:
        return (self.departure_ts - self.arrival_ts) / 3600.0


def parse_sessions(path: str | Path) -> list[RawSession]:
    path = Path(path)
    sessions = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        missing = [c for c in REQUIRED_COLUMNS if c not in header]
        if missing:
            raise SessionFormatError(f"{path}: missing column(s) {', '.join(missing)}")
        for row in reader:
            line = reader.line_num
            try:
                avg = row.get("avg_power_kw")
                sessions.append(
                    RawSession(
                        session_id=row["session_id"],
                        arrival_ts=float(row["arrival_ts"]),
                        departure_ts=float(row["departure_ts"]),
                        energy_kwh=float(row["energy_kwh"]),
                        avg_power_kw=float(avg) if avg not in (None, "") else None,
                    )
                )
            except (TypeError, ValueError) as exc:
                raise SessionFormatError(f"{path}:{line}: {exc}") from exc
    return sessions


def write_sessions(sessions: Sequence[RawSession], path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(REQUIRED_COLUMNS + OPTIONAL_COLUMNS)
        for s in sessions:
            writer.writerow([s.session_id, s.arrival_ts, s.departure_ts, s.energy_kwh, s.avg_power_kw])


def assign_pmax(session: RawSession) -> float:
    """22 kW for sessions that averaged more than 11 kW, else 11 kW."""
    return 22.0 if session.avg_power_kw > 11.0 else 11.0


def sample_instance(sessions: Sequence[RawSession], n: int, seed: int) -> list[RawSession]:
    if n > len(sessions):
        raise ValueError(f"cannot sample {n} sessions from {len(sessions)}")
    return random.Random(seed).sample(list(sessions), n)


def rebase_to_day(sessions: Sequence[RawSession]) -> list[RawSession]:
    """Move every session onto day zero, keeping time of day and duration."""
    out = []
    for s in sessions:
        shift = s.arrival_ts - s.arrival_ts % SECONDS_PER_DAY
        out.append(replace(s, arrival_ts=s.arrival_ts - shift, departure_ts=s.departure_ts - shift))
    return out


def clamp_to_noon(jobs: Sequence[Job], t_noon: float = 12.0) -> list[Job]:
    """Restrict jobs to start at ``t_noon``; keep their full energy unless infeasible."""
    out = []
    for job in jobs:
        if job.departure <= t_noon:
            continue
        arrival = max(job.arrival, t_noon)
        demand = min(job.demand, job.power_cap * (job.departure - arrival))
        out.append(replace(job, arrival=arrival, demand=demand))
    return out


@dataclass(frozen=True)
class OfficeParams:
    """Synthetic office parking lot; times are hours of the day."""

    arrival_window: tuple[float, float] = (7.0, 10.0)
    departure_window: tuple[float, float] = (15.0, 18.0)
    energy_range: tuple[float, float] = (5.0, 60.0)
    energy_median: float = 18.0
    energy_sigma: float = 0.6
    # visitors that come and go during the day
    short_visit_fraction: float = 0.1
    short_visit_hours: tuple[float, float] = (1.0, 3.0)

    def validate(self):
        for name in ("arrival_window", "departure_window", "energy_range", "short_visit_hours"):
            lo, hi = getattr(self, name)
            if not lo < hi:
                raise ValueError(f"{name}: empty range {lo}..{hi}")
        if self.energy_range[0] < 0 or self.energy_sigma <= 0 or self.energy_median <= 0:
            raise ValueError("energy distribution parameters must be positive")
        if not 0 <= self.short_visit_fraction <= 1:
            raise ValueError("short_visit_fraction must lie in [0, 1]")
        if self.arrival_window[1] >= self.departure_window[0]:
            raise ValueError("arrival window must end before the departure window starts")


def _truncated(rng: random.Random, draw, lo: float, hi: float) -> float:
    for _ in range(1000):
        x = draw()
        if lo <= x <= hi:
            return x
    return min(max(draw(), lo), hi)


def synth_office(n: int, seed: int, params: OfficeParams | None = None) -> list[RawSession]:
    params = params or OfficeParams()
    params.validate()
    rng = random.Random(seed)
    sessions = []
    for k in range(n):
        if rng.random() < params.short_visit_fraction:
            start = rng.uniform(params.arrival_window[0], params.departure_window[1] - params.short_visit_hours[0])
            end = min(start + rng.uniform(*params.short_visit_hours), 23.5)
        else:
            a_lo, a_hi = params.arrival_window
            d_lo, d_hi = params.departure_window
            start = _truncated(rng, lambda: rng.gauss((a_lo + a_hi) / 2, (a_hi - a_lo) / 4), a_lo, a_hi)
            end = _truncated(rng, lambda: rng.gauss((d_lo + d_hi) / 2, (d_hi - d_lo) / 4), d_lo, d_hi)
        hours = end - start
        energy = _truncated(
            rng,
            lambda: rng.lognormvariate(math.log(params.energy_median), params.energy_sigma),
            *params.energy_range,
        )
        # physical limit of a 22 kW socket
        energy = min(energy, 22.0 * hours)
        arrival = SYNTH_EPOCH_DAY + round(start * 3600)
        departure = SYNTH_EPOCH_DAY + round(end * 3600)
        sessions.append(RawSession(f"synth-{seed}-{k}", float(arrival), float(departure), round(energy, 3)))
    return sessions


__all__ = [
    "OfficeParams",
    "RawSession",
    "SessionFormatError",
    "assign_pmax",
    "clamp_to_noon",
    "parse_sessions",
    "rebase_to_day",
    "sample_instance",
    "synth_office",
    "write_sessions",
]

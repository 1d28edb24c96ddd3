"""Structured run reports with byte-stable metric blocks.

A report carries the command, the echoed configuration, named metrics,
per-assertion pass flags and the calibration constants in force.  The metric
block serializes with sorted keys and repr-exact floats, so reruns with the
same configuration and seed produce byte-identical blocks; wall time lives
outside the block.
"""

from __future__ import annotations

import csv
import json
import time
from dataclasses import dataclass, field
from typing import Dict, List


def _jsonable(value):
    import numpy as np

    if isinstance(value, (np.floating,)):
        return float(value)
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


@dataclass
class Report:
    command: str
    config: Dict[str, object]
    metrics: Dict[str, object] = field(default_factory=dict)
    assertions: Dict[str, bool] = field(default_factory=dict)
    calibration: Dict[str, object] = field(default_factory=dict)
    wall_time_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(self.assertions.values())

    def metric_block(self) -> bytes:
        payload = {
            "command": self.command,
            "config": _jsonable(self.config),
            "metrics": _jsonable(self.metrics),
            "assertions": _jsonable(self.assertions),
            "calibration": _jsonable(self.calibration),
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()

    def to_json(self) -> dict:
        out = json.loads(self.metric_block())
        out["passed"] = self.passed
        out["wall_time_s"] = self.wall_time_s
        return out

    def write(self, path: str) -> None:
        with open(path, "w") as fh:
            json.dump(self.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")


class Stopwatch:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
        return False


def write_csv(path: str, rows: List[dict]) -> None:
    if not rows:
        with open(path, "w"):
            pass
        return
    keys = list(rows[0].keys())
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=keys)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: _jsonable(v) for k, v in row.items()})

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

import numpy as np


@dataclass
class TimeSeries:
    """Sampled observables: one ``times`` axis plus named value columns."""

    times: np.ndarray
    columns: dict[str, np.ndarray]
    metadata: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_records(
        cls, times: Iterable[float], records: Iterable[Mapping[str, float]], metadata=None
    ) -> "TimeSeries":
        times = np.asarray(list(times), dtype=float)
        records = list(records)
        names = list(records[0]) if records else []
        cols = {k: np.asarray([r[k] for r in records], dtype=float) for k in names}
        return cls(times, cols, dict(metadata or {}))

    def __getitem__(self, name: str) -> np.ndarray:
        return self.columns[name]

    def __len__(self) -> int:
        return len(self.times)

"""Ordered (momentum, sorted eigenvalues) series, the common output of all
spectrum computations, with optional per-state weight annotations."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict

import numpy as np


@dataclass
class SpectrumSeries:
    """Eigenvalue curves over a momentum sweep.

    ``values[i]`` holds the ascending eigenvalues at ``momenta[i]``.
    ``weights`` may carry named per-state scalars of the same shape
    (e.g. subsystem-edge weight fractions used for mode classification).
    """

    momenta: np.ndarray
    values: np.ndarray
    weights: Dict[str, np.ndarray] = field(default_factory=dict)
    label: str = ""

    def __post_init__(self):
        self.momenta = np.asarray(self.momenta, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape[0] != self.momenta.shape[0]:
            raise ValueError("values and momenta disagree in length")
        for name, w in self.weights.items():
            if np.shape(w) != self.values.shape:
                raise ValueError(f"weight array {name!r} has wrong shape")

    @property
    def n_momenta(self) -> int:
        return len(self.momenta)

    @property
    def n_bands(self) -> int:
        return self.values.shape[1]

    def midpoint(self) -> float:
        """Center of the spectral range, the default chiral-crossing level."""
        return 0.5 * (float(self.values.min()) + float(self.values.max()))

    def span(self) -> float:
        return float(self.values.max()) - float(self.values.min())


def uniform_momenta(n: int) -> np.ndarray:
    """n momenta uniformly covering [-pi, pi), endpoint excluded (periodic sweeps)."""
    return -np.pi + 2.0 * np.pi * np.arange(int(n)) / int(n)


def ordered_map(fn, items, threads: int = 1) -> list:
    """Map preserving input order; optionally fanned out over worker threads.

    Results are identical to the serial map because every item is computed
    independently and collected in order.
    """
    if threads and threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            return list(pool.map(fn, items))
    return [fn(x) for x in items]

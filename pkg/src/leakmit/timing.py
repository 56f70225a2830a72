"""Timing functions, timing datasets, and synthetic benchmark generators.

A timing function maps a public input magnitude to an execution time for one
fixed secret.  A dataset holds one such function per secret, sampled on a
shared grid of public values.  The two generators model a square-and-multiply
style loop (cost proportional to the number of set bits of the secret) and a
secret-dependent branch whose loop count grows linearly in the public value.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "PublicGrid",
    "TimingFunction",
    "TimingDataset",
    "upper_envelope",
    "gen_mod_exp",
    "gen_branch_loop",
    "write_csv",
    "read_csv",
]

CSV_HEADER = ("secret_id", "public_value", "time_seconds")


def _frozen_array(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class PublicGrid:
    """Strictly increasing public-input magnitudes shared by all functions."""

    points: tuple[float, ...]

    def __post_init__(self):
        pts = tuple(float(p) for p in self.points)
        if not pts:
            raise ValueError("public grid must contain at least one point")
        if any(b <= a for a, b in zip(pts, pts[1:])):
            raise ValueError("public grid points must be strictly increasing")
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return len(self.points)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.points, dtype=float)


@dataclass(frozen=True)
class TimingFunction:
    """Execution time of one secret as a function of the public input."""

    grid: PublicGrid
    values: np.ndarray

    def __post_init__(self):
        vals = _frozen_array(self.values)
        if vals.ndim != 1 or vals.size != len(self.grid):
            raise ValueError("timing values must align with the public grid")
        if np.any(vals < 0):
            raise ValueError("execution times must be non-negative")
        object.__setattr__(self, "values", vals)

    def mean(self) -> float:
        return float(self.values.mean())


def upper_envelope(functions: Sequence[TimingFunction]) -> TimingFunction:
    """Pointwise maximum of timing functions defined on a common grid.

    The envelope of a set of functions is the cheapest single function that
    every member can be padded up to.
    """
    fns = list(functions)
    if not fns:
        raise ValueError("upper_envelope needs at least one function")
    grid = fns[0].grid
    for fn in fns[1:]:
        if fn.grid.points != grid.points:
            raise ValueError("functions must share one public grid")
    stacked = np.vstack([fn.values for fn in fns])
    return TimingFunction(grid, np.maximum.reduce(stacked, axis=0))


@dataclass(frozen=True)
class TimingDataset:
    """Per-secret timing functions over a shared grid.

    ``times[i, p]`` is the observed execution time of ``secrets[i]`` at grid
    point ``p``.  The matrix is frozen; derived datasets are new objects.
    """

    secrets: tuple[int, ...]
    grid: PublicGrid
    times: np.ndarray
    noise_seed: int = 0

    def __post_init__(self):
        secrets = tuple(int(s) for s in self.secrets)
        if not secrets:
            raise ValueError("dataset must contain at least one secret")
        if len(set(secrets)) != len(secrets):
            raise ValueError("secret identifiers must be unique")
        times = _frozen_array(self.times)
        if times.shape != (len(secrets), len(self.grid)):
            raise ValueError("times matrix must be n_secrets x n_grid_points")
        if np.any(times < 0):
            raise ValueError("execution times must be non-negative")
        object.__setattr__(self, "secrets", secrets)
        object.__setattr__(self, "times", times)

    @property
    def n_secrets(self) -> int:
        return len(self.secrets)

    def function_for(self, secret: int) -> TimingFunction:
        try:
            row = self.secrets.index(int(secret))
        except ValueError:
            raise KeyError(f"unknown secret {secret!r}") from None
        return TimingFunction(self.grid, self.times[row])

    def with_times(self, times: np.ndarray) -> "TimingDataset":
        return TimingDataset(self.secrets, self.grid, times, self.noise_seed)


def _apply_noise(times: np.ndarray, sigma: float, seed: int) -> np.ndarray:
    if sigma < 0:
        raise ValueError("noise_sigma must be >= 0")
    if sigma == 0:
        return times
    rng = np.random.default_rng(seed)
    noisy = times + rng.normal(0.0, sigma, size=times.shape)
    return np.clip(noisy, 0.0, None)


def gen_mod_exp(
    n_bits: int,
    unit_cost: float = 1.0,
    noise_sigma: float = 0.0,
    seed: int = 0,
) -> TimingDataset:
    """Square-and-multiply cost model: time(s, y) = unit_cost * setbits(s) * y.

    Secrets are every integer in [1, 2**n_bits - 1], the public grid is the
    possible set-bit counts {1..n_bits}, and optional Gaussian noise is added
    per observation (clamped at zero).
    """
    if not 1 <= int(n_bits) <= 20:
        raise ValueError("n_bits must be in [1, 20]")
    if unit_cost <= 0:
        raise ValueError("unit_cost must be positive")
    n_bits = int(n_bits)
    secrets = np.arange(1, 2**n_bits, dtype=np.int64)
    setbits = np.zeros(secrets.size, dtype=np.int64)
    for b in range(n_bits):
        setbits += (secrets >> b) & 1
    grid = PublicGrid(tuple(float(y) for y in range(1, n_bits + 1)))
    base = unit_cost * setbits[:, None].astype(float) * grid.array[None, :]
    times = _apply_noise(base, noise_sigma, seed)
    return TimingDataset(tuple(int(s) for s in secrets), grid, times, seed)


def gen_branch_loop(
    group_sizes: Sequence[int],
    slopes: Sequence[float],
    n_publics: int = 50,
    noise_sigma: float = 0.0,
    seed: int = 0,
) -> TimingDataset:
    """Secret-dependent branch: group g loops slopes[g] times per public unit.

    ``group_sizes[g]`` secrets share the g-th branch, so with zero noise the
    dataset collapses into exactly ``len(group_sizes)`` distinct functions.
    """
    sizes = [int(g) for g in group_sizes]
    slope_list = [float(s) for s in slopes]
    if len(sizes) != len(slope_list):
        raise ValueError("group_sizes and slopes must have equal length")
    if not sizes:
        raise ValueError("need at least one group")
    if any(g <= 0 for g in sizes):
        raise ValueError("group sizes must be positive")
    if any(s <= 0 for s in slope_list) or any(
        b <= a for a, b in zip(slope_list, slope_list[1:])
    ):
        raise ValueError("slopes must be positive and strictly increasing")
    if int(n_publics) < 1:
        raise ValueError("n_publics must be >= 1")
    slope_per_secret = np.repeat(np.asarray(slope_list), sizes)
    grid = PublicGrid(tuple(float(y) for y in range(1, int(n_publics) + 1)))
    base = slope_per_secret[:, None] * grid.array[None, :]
    times = _apply_noise(base, noise_sigma, seed)
    return TimingDataset(tuple(range(len(slope_per_secret))), grid, times, seed)


def write_csv(dataset: TimingDataset, path: str | Path) -> None:
    """Write rows secret-major, grid-ascending: secret_id,public_value,time_seconds."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for i, secret in enumerate(dataset.secrets):
            for p, y in enumerate(dataset.grid.points):
                writer.writerow((secret, repr(y), repr(float(dataset.times[i, p]))))


def read_csv(path: str | Path) -> TimingDataset:
    """Load a dataset written by :func:`write_csv`.

    Every secret must be observed at every grid point exactly once.  The
    noise seed is generation metadata and is not stored in the CSV, so loaded
    datasets carry seed 0.
    """
    cells: dict[int, dict[float, float]] = {}
    order: list[int] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != CSV_HEADER:
            raise ValueError(f"{path}: expected header {','.join(CSV_HEADER)}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != 3:
                raise ValueError(f"{path}:{lineno}: expected 3 columns")
            try:
                secret = int(row[0])
                public = float(row[1])
                time = float(row[2])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
            per_secret = cells.setdefault(secret, {})
            if not per_secret:
                order.append(secret)
            if public in per_secret:
                raise ValueError(
                    f"{path}:{lineno}: duplicate observation for secret {secret}"
                )
            per_secret[public] = time
    if not cells:
        raise ValueError(f"{path}: no observations")
    grid_points = sorted({p for obs in cells.values() for p in obs})
    grid = PublicGrid(tuple(grid_points))
    times = np.empty((len(order), len(grid_points)))
    for i, secret in enumerate(order):
        obs = cells[secret]
        if len(obs) != len(grid_points):
            raise ValueError(f"{path}: secret {secret} is missing grid points")
        for p, y in enumerate(grid_points):
            times[i, p] = obs[y]
    return TimingDataset(tuple(order), grid, times, noise_seed=0)

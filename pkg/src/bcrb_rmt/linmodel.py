"""Random-design Bayesian linear model y = A x + e with hierarchical noise."""

from __future__ import annotations

import csv
import enum
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .distributions import (
    AmplitudePrior,
    NoisePrior,
    sample_gamma_hyper,
    sample_noise_conditional,
    variance_inflation,
)
from .errors import DimensionError, DomainError


class MatrixEnsemble(str, enum.Enum):
    GAUSSIAN = "gaussian"
    RADEMACHER = "rademacher"


@dataclass(frozen=True)
class ModelDims:
    n_obs: int
    n_params: int

    def __post_init__(self):
        if self.n_params < 1:
            raise DimensionError(f"K={self.n_params} must be at least 1")
        if self.n_params >= self.n_obs:
            raise DimensionError(f"need K < N, got K={self.n_params}, N={self.n_obs}")

    @property
    def beta(self) -> float:
        return self.n_params / self.n_obs


@dataclass(frozen=True, eq=False)
class Dataset:
    design: np.ndarray
    amplitudes: np.ndarray
    gamma: float
    noise: np.ndarray
    observations: np.ndarray

    def __post_init__(self):
        for arr in (self.design, self.amplitudes, self.noise, self.observations):
            arr.setflags(write=False)


def _as_seed_sequence(seed) -> np.random.SeedSequence:
    if isinstance(seed, np.random.SeedSequence):
        # fresh copy: spawn() mutates its parent, reuse must stay reproducible
        return np.random.SeedSequence(seed.entropy, spawn_key=seed.spawn_key,
                                      pool_size=seed.pool_size)
    return np.random.SeedSequence(seed)


def component_streams(seed) -> dict[str, np.random.Generator]:
    """Independent generators for the matrix, amplitudes, gamma and noise.

    Each component owns its own child of the master seed, so fixing the seed
    and swapping e.g. the noise prior leaves A and x unchanged.
    """
    children = _as_seed_sequence(seed).spawn(4)
    names = ("matrix", "amplitudes", "gamma", "noise")
    return {name: np.random.default_rng(ss) for name, ss in zip(names, children)}


def generate_matrix(dims: ModelDims, ensemble, rng: np.random.Generator) -> np.ndarray:
    """N x K matrix with i.i.d. zero-mean, variance-1/N entries."""
    ensemble = MatrixEnsemble(ensemble)
    n, k = dims.n_obs, dims.n_params
    scale = 1.0 / math.sqrt(n)
    if ensemble is MatrixEnsemble.GAUSSIAN:
        return rng.standard_normal((n, k)) * scale
    signs = rng.integers(0, 2, size=(n, k), dtype=np.int8)
    return np.where(signs == 1, scale, -scale)


def synthesize(dims: ModelDims, ampl: AmplitudePrior, noise: NoisePrior, ensemble,
               seed, design: np.ndarray | None = None) -> Dataset:
    """Draw one realization (A, x, gamma, e, y).

    A single gamma is shared by all N noise entries. Pass ``design`` to hold
    A fixed (conditional studies); the matrix stream is then unused.
    """
    variance_inflation(noise.nu)  # nu > 2 guard
    streams = component_streams(seed)
    if design is None:
        design = generate_matrix(dims, ensemble, streams["matrix"])
    elif design.shape != (dims.n_obs, dims.n_params):
        raise DimensionError(f"design shape {design.shape} != {(dims.n_obs, dims.n_params)}")
    x = streams["amplitudes"].standard_normal(dims.n_params) * math.sqrt(ampl.sigma_x2)
    gamma = sample_gamma_hyper(noise, streams["gamma"])
    e = sample_noise_conditional(noise, gamma, dims.n_obs, streams["noise"])
    y = design @ x + e
    return Dataset(design=np.array(design, copy=True), amplitudes=x, gamma=gamma,
                   noise=e, observations=y)


def dump_dataset(ds: Dataset, directory) -> list[Path]:
    """Write one CSV per component into ``directory``.

    design.csv has header a0..a{K-1} and N rows; amplitudes.csv, noise.csv and
    observations.csv have header ``index,value``; gamma.csv holds one value.
    """
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    fmt = lambda v: format(float(v), ".17g")  # noqa: E731
    written = []

    path = out / "design.csv"
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([f"a{j}" for j in range(ds.design.shape[1])])
        w.writerows([[fmt(v) for v in row] for row in ds.design])
    written.append(path)

    for name, vec in (("amplitudes", ds.amplitudes), ("noise", ds.noise),
                      ("observations", ds.observations)):
        path = out / f"{name}.csv"
        with path.open("w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["index", "value"])
            w.writerows([[i, fmt(v)] for i, v in enumerate(vec)])
        written.append(path)

    path = out / "gamma.csv"
    path.write_text(f"gamma\n{fmt(ds.gamma)}\n")
    written.append(path)
    return written


def load_dataset(directory) -> Dataset:
    src = Path(directory)
    design = np.loadtxt(src / "design.csv", delimiter=",", skiprows=1, ndmin=2)
    vec = lambda name: np.loadtxt(src / f"{name}.csv", delimiter=",", skiprows=1, ndmin=2)[:, 1]  # noqa: E731
    gamma = float((src / "gamma.csv").read_text().split()[1])
    if not gamma > 0:
        raise DomainError("gamma", gamma, "must be positive")
    return Dataset(design=design, amplitudes=vec("amplitudes"), gamma=gamma,
                   noise=vec("noise"), observations=vec("observations"))

"""Scenario configuration: a flat ``key = value`` text format.

Example::

    # spin-1/2 readout of s_z on |+X>
    observable = spin-z
    state = plus-x
    delta = 0.5

Explicit matrices are row-major comma lists with real and imaginary parts
paired, so a ``d x d`` matrix takes ``2 d^2`` numbers::

    dim = 2
    observable.matrix = 0.5,0, 0,0, 0,0, -0.5,0
    state.vector = 0.7071067811865476,0, 0.7071067811865476,0

Recognized keys: ``dim``, ``observable``, ``observable.matrix``, ``state``,
``state.vector``, ``state.matrix``, ``b``, ``b.matrix``, ``delta``,
``grid.lo``, ``grid.hi``, ``grid.n``, ``outcomes``, ``seed``, ``out``.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .engine import DensityMatrix, MeasurementModel, OutcomeGrid, default_grid
from .errors import ConfigError
from .linalg import HermitianObservable
from .states import (
    MINUS_X,
    MINUS_Z,
    PLUS_X,
    PLUS_Z,
    SX,
    SY,
    SZ,
    random_hermitian,
    random_mixed_matrix,
    random_pure_vector,
)

KEYS = {
    "dim", "observable", "observable.matrix", "state", "state.vector", "state.matrix",
    "b", "b.matrix", "delta", "grid.lo", "grid.hi", "grid.n", "outcomes", "seed", "out",
}

SPIN_OPERATORS = {"spin-x": SX, "spin-y": SY, "spin-z": SZ}
SPIN_STATES = {"plus-x": PLUS_X, "minus-x": MINUS_X, "plus-z": PLUS_Z, "minus-z": MINUS_Z}


def parse_text(text: str) -> dict[str, str]:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key not in KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        values[key] = value
    return values


def _complex_list(text: str, key: str) -> np.ndarray:
    try:
        nums = [float(t) for t in text.replace(" ", "").split(",") if t]
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from None
    if len(nums) % 2:
        raise ConfigError(f"{key}: needs real/imaginary pairs")
    arr = np.array(nums)
    return arr[0::2] + 1j * arr[1::2]


def _square(text: str, key: str, dim: int | None) -> np.ndarray:
    entries = _complex_list(text, key)
    n = int(round(np.sqrt(entries.size)))
    if n * n != entries.size or n == 0:
        raise ConfigError(f"{key}: {entries.size} entries do not form a square matrix")
    if dim is not None and n != dim:
        raise ConfigError(f"{key}: size {n} disagrees with dim = {dim}")
    return entries.reshape(n, n)


@dataclass
class ScenarioConfig:
    dim: int | None = None
    observable: str = "spin-z"
    observable_matrix: str | None = None
    state: str = "plus-x"
    state_vector: str | None = None
    state_matrix: str | None = None
    b: str = "auto"
    b_matrix: str | None = None
    delta: float = 0.5
    grid_lo: float | None = None
    grid_hi: float | None = None
    grid_n: int | None = None
    outcomes: int | None = None
    seed: int = 0
    out: str | None = None
    _built: dict = field(default_factory=dict, repr=False, compare=False)

    @classmethod
    def from_mapping(cls, values: dict[str, str]) -> "ScenarioConfig":
        cfg = cls()
        conv = {"dim": int, "delta": float, "grid.lo": float, "grid.hi": float,
                "grid.n": int, "outcomes": int, "seed": int}
        for key, raw in values.items():
            try:
                val = conv[key](raw) if key in conv else raw
            except ValueError:
                raise ConfigError(f"{key}: cannot parse {raw!r}") from None
            setattr(cfg, key.replace(".", "_"), val)
        return cfg

    @classmethod
    def from_file(cls, path) -> "ScenarioConfig":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(str(exc)) from None
        return cls.from_mapping(parse_text(text))

    def override(self, **kwargs) -> "ScenarioConfig":
        return replace(self, _built={}, **{k: v for k, v in kwargs.items() if v is not None})

    def validate(self) -> "ScenarioConfig":
        """Build every object once so that bad input fails before any output."""
        if not self.delta > 0:
            raise ConfigError(f"delta must be positive, got {self.delta}")
        if self.outcomes is not None and self.outcomes < 1:
            raise ConfigError("outcomes must be positive")
        rng = np.random.default_rng(self.seed)
        try:
            obs = self._operator(self.observable, self.observable_matrix, "observable", rng)
            dim = obs.dim
            state = self._state(dim, rng)
            b = self._operator(self.b, self.b_matrix, "b", rng, dim=dim, obs=obs)
            model = MeasurementModel(obs, self.delta)
            grid = self._grid(model)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        self._built.update(model=model, state=state, b=b, grid=grid)
        return self

    def _operator(self, name, matrix, key, rng, dim=None, obs=None) -> HermitianObservable:
        dim = self.dim if dim is None else dim
        if name == "auto":
            name = "spin-x" if dim == 2 else "random"
        if matrix is not None:
            return HermitianObservable(_square(matrix, f"{key}.matrix", dim))
        if name in SPIN_OPERATORS:
            if dim not in (None, 2):
                raise ConfigError(f"{key} = {name} needs dim = 2")
            return HermitianObservable(SPIN_OPERATORS[name])
        if name == "identity":
            return HermitianObservable(np.eye(dim or 2))
        if name == "observable" and obs is not None:
            return obs
        if name == "random":
            if dim is None:
                raise ConfigError(f"{key} = random needs dim")
            return HermitianObservable(random_hermitian(dim, rng, scale=1 / np.sqrt(dim)))
        raise ConfigError(f"{key}: unknown preset {name!r}")

    def _state(self, dim, rng) -> DensityMatrix:
        if self.state_matrix is not None:
            return DensityMatrix(_square(self.state_matrix, "state.matrix", dim))
        if self.state_vector is not None:
            v = _complex_list(self.state_vector, "state.vector")
            if v.size != dim:
                raise ConfigError(f"state.vector has {v.size} entries, expected {dim}")
            if np.linalg.norm(v) == 0:
                raise ConfigError("state.vector is zero")
            return DensityMatrix.pure(v)
        if self.state in SPIN_STATES:
            if dim != 2:
                raise ConfigError(f"state = {self.state} needs dim = 2")
            return DensityMatrix.pure(SPIN_STATES[self.state])
        if self.state == "mixed":
            return DensityMatrix.maximally_mixed(dim)
        if self.state == "random":
            return DensityMatrix.pure(random_pure_vector(dim, rng))
        if self.state == "random-mixed":
            return DensityMatrix(random_mixed_matrix(dim, rng))
        raise ConfigError(f"state: unknown preset {self.state!r}")

    def _grid(self, model) -> OutcomeGrid:
        base = default_grid(model)
        lo = base.lo if self.grid_lo is None else self.grid_lo
        hi = base.hi if self.grid_hi is None else self.grid_hi
        n = base.n if self.grid_n is None else self.grid_n
        try:
            return OutcomeGrid(lo, hi, n)
        except ValueError as exc:
            raise ConfigError(f"grid: {exc}") from None

    def _get(self, key):
        if not self._built:
            self.validate()
        return self._built[key]

    @property
    def model(self) -> MeasurementModel:
        return self._get("model")

    @property
    def rho(self) -> DensityMatrix:
        return self._get("state")

    @property
    def b_observable(self) -> HermitianObservable:
        return self._get("b")

    @property
    def grid(self) -> OutcomeGrid:
        return self._get("grid")

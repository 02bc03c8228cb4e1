"""Least-squares fits of the Bleaney-Bowers dimer model to susceptibility data."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Dict, Tuple

import numpy as np
from scipy.optimize import minimize

from .errors import DegenerateData, InsufficientData, InvalidDataset
from .magnetics import DimerModel, check_temperature, susceptibility

CSV_HEADER = ("temperature_K", "chi_emu_per_mol")

PARAMETERS = ("j_over_kb", "g", "impurity_fraction", "tip")

DEFAULT_BOUNDS = {
    "j_over_kb": (-500.0, 500.0),
    "g": (1.5, 3.0),
    "impurity_fraction": (0.0, 0.2),
    "tip": (0.0, 1e-3),
}


@dataclass(frozen=True)
class SusceptibilityDataset:
    """Ordered ``(T, chi)`` records; ``T`` in kelvin, ``chi`` in emu/mol."""

    temperatures: np.ndarray
    chi: np.ndarray
    label: str = ""

    def __post_init__(self):
        t = np.atleast_1d(np.asarray(self.temperatures, dtype=float))
        c = np.atleast_1d(np.asarray(self.chi, dtype=float))
        if t.ndim != 1 or t.shape != c.shape:
            raise InvalidDataset("temperatures and chi must be 1-d arrays of equal length")
        if t.size:
            if np.any(~np.isfinite(t)) or np.any(t <= 0.0):
                raise InvalidDataset("temperatures must be finite and > 0")
            if np.any(np.diff(t) <= 0.0):
                raise InvalidDataset("temperatures must be strictly increasing")
            if np.any(~np.isfinite(c)) or np.any(c < 0.0):
                raise InvalidDataset("susceptibilities must be finite and >= 0")
        t.setflags(write=False)
        c.setflags(write=False)
        object.__setattr__(self, "temperatures", t)
        object.__setattr__(self, "chi", c)

    def __len__(self):
        return int(self.temperatures.size)

    @classmethod
    def from_csv(cls, source, label=None):
        """Read a ``temperature_K,chi_emu_per_mol`` CSV; ``#`` lines are comments."""
        if isinstance(source, (str, Path)):
            with open(source, newline="", encoding="utf-8") as fh:
                text = fh.read()
            label = str(source) if label is None else label
        else:
            text = source.read()
        lines = [ln for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
        if not lines:
            raise InvalidDataset("missing header row")
        rows = list(csv.reader(lines))
        header = tuple(h.strip() for h in rows[0])
        if header != CSV_HEADER:
            raise InvalidDataset(f"malformed header {','.join(header)!r}; "
                                 f"expected {','.join(CSV_HEADER)!r}")
        ts, chis = [], []
        for lineno, row in enumerate(rows[1:], start=2):
            if len(row) != 2:
                raise InvalidDataset(f"data row {lineno}: expected 2 fields, got {len(row)}")
            try:
                ts.append(float(row[0]))
                chis.append(float(row[1]))
            except ValueError as exc:
                raise InvalidDataset(f"data row {lineno}: {exc}") from None
        return cls(np.array(ts), np.array(chis), label or "")

    def to_csv(self, dest=None, comment=None):
        """Write as CSV; returns the text when ``dest`` is None."""
        buf = io.StringIO()
        if comment:
            for line in comment.splitlines():
                buf.write(f"# {line}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for t, c in zip(self.temperatures, self.chi):
            writer.writerow([repr(float(t)), repr(float(c))])
        text = buf.getvalue()
        if dest is None:
            return text
        with open(dest, "w", newline="", encoding="utf-8") as fh:
            fh.write(text)
        return text


@dataclass(frozen=True)
class FitConfig:
    free_parameters: Tuple[str, ...] = ("j_over_kb", "g")
    initial_guess: DimerModel = field(default_factory=lambda: DimerModel(j_over_kb=0.0, g_factor=2.0))
    bounds: Dict[str, Tuple[float, float]] = field(default_factory=lambda: dict(DEFAULT_BOUNDS))
    tolerance: float = 1e-10
    max_iter: int = 1000
    weighted: bool = False
    n_starts: int = 8
    seed: int = 0

    def __post_init__(self):
        unknown = set(self.free_parameters) - set(PARAMETERS)
        if unknown:
            raise ValueError(f"unknown free parameters: {sorted(unknown)}")
        if not self.free_parameters:
            raise ValueError("at least one free parameter is required")
        if len(set(self.free_parameters)) != len(self.free_parameters):
            raise ValueError("duplicate free parameters")
        bounds = dict(DEFAULT_BOUNDS)
        bounds.update(self.bounds)
        object.__setattr__(self, "bounds", bounds)
        for name in self.free_parameters:
            lo, hi = bounds[name]
            if not lo < hi:
                raise ValueError(f"empty bounds for {name}: {lo}, {hi}")
            value = _get_param(self.initial_guess, name)
            if not lo <= value <= hi:
                raise ValueError(f"initial {name}={value} outside bounds [{lo}, {hi}]")
        if self.n_starts < 1 or self.max_iter < 1:
            raise ValueError("n_starts and max_iter must be >= 1")


@dataclass(frozen=True)
class FitResult:
    model: DimerModel
    cost: float
    residuals: np.ndarray
    converged: bool
    iterations: int
    start_index: int = 0


def _get_param(model, name):
    if name == "j_over_kb":
        return model.j_over_kb
    if name == "g":
        return model.g
    if name == "impurity_fraction":
        return model.impurity_fraction
    return model.temperature_independent_chi


def _with_params(base, names, values):
    changes = {}
    for name, v in zip(names, values):
        if name == "g":
            changes["g_factor"] = float(v)
        elif name == "tip":
            changes["temperature_independent_chi"] = float(v)
        else:
            changes[name] = float(v)
    return replace(base, **changes)


def predict(model, temperatures):
    """Model susceptibility at each temperature (emu/mol)."""
    ts = np.asarray(temperatures, dtype=float)
    if ts.size == 0:
        return np.empty(0)
    check_temperature(ts)
    return np.array([susceptibility(model, float(t)) for t in ts.ravel()]).reshape(ts.shape)


# Normalized cost below which the fit is exact to ~1e-10 relative and the
# relative-change test becomes meaningless.
_COST_FLOOR = 1e-20


# Bounded parameters are mapped to an unbounded variable z by
# p = lo + (hi - lo) (1 + sin z) / 2, so the bounds are reachable exactly.

def _to_internal(p, lo, hi):
    u = np.clip(2.0 * (p - lo) / (hi - lo) - 1.0, -1.0, 1.0)
    return np.arcsin(u)


def _to_external(z, lo, hi):
    return lo + (hi - lo) * (1.0 + np.sin(z)) / 2.0


def _check_data(data, config):
    n_free = len(config.free_parameters)
    if len(data) < n_free + 2:
        raise InsufficientData(
            f"{len(data)} points for {n_free} free parameters "
            f"(need at least {n_free + 2})")
    t = data.temperatures
    if t[-1] - t[0] < 1.0:
        raise DegenerateData("all temperatures lie within a 1 K window")
    if config.weighted and np.any(data.chi <= 0.0):
        raise InvalidDataset("1/chi^2 weighting needs strictly positive susceptibilities")


def fit_bleaney_bowers(data, config=None):
    """Fit the free dimer parameters to ``data`` by multi-start Nelder-Mead.

    Start 0 is the initial guess, the remaining starts are drawn uniformly
    within the bounds from ``config.seed``. The lowest-cost result wins (ties
    go to the earlier start). Non-converged results are returned with
    ``converged=False`` rather than raised.
    """
    config = config or FitConfig()
    _check_data(data, config)

    names = config.free_parameters
    lo = np.array([config.bounds[n][0] for n in names])
    hi = np.array([config.bounds[n][1] for n in names])
    temps = data.temperatures
    chi = data.chi
    weights = 1.0 / chi ** 2 if config.weighted else np.ones_like(chi)
    scale = float(np.sum(weights * chi ** 2)) or 1.0

    def cost_of(z):
        model = _with_params(config.initial_guess, names, _to_external(z, lo, hi))
        r = chi - susceptibility(model, temps)
        return float(np.sum(weights * r * r)) / scale

    rng = np.random.default_rng(config.seed)
    p0 = np.array([_get_param(config.initial_guess, n) for n in names])
    starts = [p0] + [rng.uniform(lo, hi) for _ in range(config.n_starts - 1)]

    best = None
    for index, start in enumerate(starts):
        z, f, nit, ok = _refine(cost_of, _to_internal(start, lo, hi), config)
        if best is None or f < best[1]:
            best = (z, f, nit, ok, index)

    z, f, nit, ok, index = best
    model = _with_params(config.initial_guess, names, _to_external(z, lo, hi))
    residuals = chi - predict(model, temps)
    return FitResult(
        model=model,
        cost=float(np.sum(weights * residuals ** 2)),
        residuals=residuals,
        converged=ok,
        iterations=nit,
        start_index=index,
    )


def _refine(cost_of, z0, config):
    """Nelder-Mead with restarts until the relative cost change drops below
    ``config.tolerance`` or the iteration budget is spent."""
    z = np.asarray(z0, dtype=float)
    f = cost_of(z)
    used = 0
    step = 0.2
    converged = False
    while used < config.max_iter:
        simplex = np.vstack([z, z + step * np.eye(z.size)])
        res = minimize(
            cost_of, z, method="Nelder-Mead",
            options={"initial_simplex": simplex, "maxiter": config.max_iter - used,
                     "xatol": 1e-12, "fatol": config.tolerance * f},
        )
        used += int(res.nit)
        improved = f - res.fun
        if res.fun <= f:
            z, f_prev, f = res.x, f, float(res.fun)
        else:
            f_prev = f
        if f <= _COST_FLOOR or (res.success and improved <= config.tolerance * max(f_prev, 1e-300)):
            converged = True
            break
        step = max(step * 0.1, 1e-6)
    return z, f, used, converged

"""Synthetic susceptibility datasets for the two reference materials.

The shipped CSV files under ``superdiscord/data`` are produced by
:func:`write_fixtures` and are model output, not measurements.
"""
from __future__ import annotations

from importlib import resources
from pathlib import Path

import numpy as np

from .fitting import SusceptibilityDataset, predict
from .magnetics import DimerModel

#: Iron nitrosyl complex Fe2(SC3H5N2)2(NO)4, antiferromagnetic.
IRON_NITROSYL = DimerModel(j_over_kb=-68.0, g_factor=2.0)
#: Binuclear copper(II) acetate complex [Cu2L(OAc)].6H2O, ferromagnetic.
COPPER_ACETATE = DimerModel(j_over_kb=35.4, g_factor=2.13)

FIXTURE_TEMPERATURES = np.linspace(5.0, 300.0, 30)
NOISE_LEVEL = 0.01
NOISE_SEED = 0

FIXTURES = {
    "iron_nitrosyl_synthetic.csv": (IRON_NITROSYL, 0.0),
    "copper_acetate_synthetic.csv": (COPPER_ACETATE, 0.0),
    "copper_acetate_synthetic_noise1pct.csv": (COPPER_ACETATE, NOISE_LEVEL),
}


def synthetic_dataset(model, temperatures=FIXTURE_TEMPERATURES, noise=0.0, seed=NOISE_SEED, label=""):
    """Model susceptibility, optionally with multiplicative Gaussian noise
    ``chi * (1 + noise * N(0, 1))``."""
    chi = predict(model, temperatures)
    if noise:
        rng = np.random.default_rng(seed)
        chi = chi * (1.0 + noise * rng.standard_normal(chi.shape))
        chi = np.clip(chi, 0.0, None)
    return SusceptibilityDataset(np.asarray(temperatures, dtype=float), chi, label)


def _comment(model, noise):
    lines = [
        "SYNTHETIC data generated by superdiscord from the Bleaney-Bowers model",
        f"j_over_kb_K={model.j_over_kb!r} g={model.g!r}",
    ]
    if noise:
        lines.append(f"multiplicative gaussian noise {noise!r}, numpy default_rng seed {NOISE_SEED}")
    else:
        lines.append("noise-free")
    return "\n".join(lines)


def fixture_text(name):
    model, noise = FIXTURES[name]
    return synthetic_dataset(model, noise=noise, label=name).to_csv(comment=_comment(model, noise))


def write_fixtures(directory):
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    for name in FIXTURES:
        (directory / name).write_text(fixture_text(name), encoding="utf-8", newline="\n")


def fixture_path(name):
    """Filesystem path of a shipped fixture."""
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; known: {sorted(FIXTURES)}")
    return Path(str(resources.files("superdiscord") / "data" / name))


def load_fixture(name):
    return SusceptibilityDataset.from_csv(fixture_path(name), label=name)

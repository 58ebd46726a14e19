"""Parameter sweeps for the four standard demonstration figures.

The captions behind these figures fix the shadow and clustering parameters
but leave the swept values open ("different values of alpha/mu"), so the
sweeps below are frozen artifact defaults and are recorded in the emitted
metadata.  Figure 1 also needs a LOS power ratio, frozen at kappa = 1.
"""

from __future__ import annotations

import numpy as np

from .composite import CompositeModel
from .models import AkmParams, AmParams, ExtremeParams, GammaShadowParams

__all__ = ["FIGURE_IDS", "ALPHA_SWEEP", "MU_SWEEP", "figure_curves", "default_grid"]

FIGURE_IDS = (1, 2, 3, 4)
ALPHA_SWEEP = (1.0, 1.5, 2.0, 3.0, 4.0)
MU_SWEEP = (0.5, 1.0, 2.0, 4.0)

_FIG1_KAPPA = 1.0


def default_grid(points: int = 200) -> np.ndarray:
    return np.linspace(0.01, 4.0, points)


def figure_curves(figure_id: int) -> list:
    """Curve definitions for one figure: (label, model, fixed, swept)."""
    if figure_id == 1:
        shadow = GammaShadowParams(b=1.1, omega=0.9)
        fixed = {"b": 1.1, "omega": 0.9, "mu": 2.1, "kappa": _FIG1_KAPPA}
        return [
            {
                "label": f"alpha={alpha:g}",
                "model": CompositeModel(AkmParams(alpha, _FIG1_KAPPA, 2.1), shadow),
                "fixed": fixed,
                "swept": {"alpha": alpha},
            }
            for alpha in ALPHA_SWEEP
        ]
    if figure_id == 2:
        shadow = GammaShadowParams(b=1.8, omega=0.7)
        fixed = {"b": 1.8, "omega": 0.7, "kappa": 4.0, "alpha": 2.0}
        return [
            {
                "label": f"mu={mu:g}",
                "model": CompositeModel(AkmParams(2.0, 4.0, mu), shadow),
                "fixed": fixed,
                "swept": {"mu": mu},
            }
            for mu in MU_SWEEP
        ]
    if figure_id == 3:
        shadow = GammaShadowParams(b=1.1, omega=0.9)
        fixed = {"b": 1.1, "omega": 0.9, "mu": 2.1}
        return [
            {
                "label": f"alpha={alpha:g}",
                "model": CompositeModel(AmParams(alpha, 2.1), shadow),
                "fixed": fixed,
                "swept": {"alpha": alpha},
            }
            for alpha in ALPHA_SWEEP
        ]
    if figure_id == 4:
        shadow = GammaShadowParams(b=1.2, omega=0.8)
        fixed = {"b": 1.2, "omega": 0.8, "m": 1.1}
        return [
            {
                "label": f"alpha={alpha:g}",
                "model": CompositeModel(ExtremeParams(alpha, 1.1), shadow),
                "fixed": fixed,
                "swept": {"alpha": alpha},
            }
            for alpha in ALPHA_SWEEP
        ]
    raise ValueError(f"figure_id must be one of {FIGURE_IDS}, got {figure_id!r}")

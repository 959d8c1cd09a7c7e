"""Radial profile ``f`` of the exponentially stretched plane.

``f(t) = t`` near the origin, ``f(t) = e^t`` far out, glued by a smooth step
built from ``ψ(x) = exp(-1/x)``. The step is flat to all orders at both ends,
so ``f`` is smooth and equals the two model pieces exactly outside the gluing
interval.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import brentq

from geoflow.exceptions import ConfigurationError

MONOTONE_SAMPLES = 10_000
INVERSE_XTOL = 1e-14


def _psi(x: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """``ψ`` and its first two derivatives; zero for ``x <= 0``."""
    x = np.asarray(x, dtype=float)
    pos = x > 0.0
    safe = np.where(pos, x, 1.0)
    value = np.where(pos, np.exp(-1.0 / safe), 0.0)
    d1 = value / safe**2
    d2 = value * (1.0 / safe**4 - 2.0 / safe**3)
    return value, d1, d2


class Blend:
    """Smooth profile with derivatives and inverse.

    Args:
        inner: end of the identity zone
        outer: start of the exponential zone
    """

    def __init__(self, inner: float = 0.5, outer: float = 1.0) -> None:
        if not 0.0 < inner < outer:
            raise ConfigurationError(
                "混合区间必须满足 0 < inner < outer",
                data={"blend_inner": inner, "blend_outer": outer},
            )
        self.inner = float(inner)
        self.outer = float(outer)
        self.check_monotone()

    def step(self, t) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Smooth step ``w`` and its derivatives in ``t``."""
        width = self.outer - self.inner
        x = (np.asarray(t, dtype=float) - self.inner) / width
        a, a1, a2 = _psi(x)
        b, b1, b2 = _psi(1.0 - x)
        # ψ(1 - x) 对 x 求导
        b1 = -b1
        total = a + b
        num = a1 * b - a * b1
        w = a / total
        w1 = num / total**2
        dnum = a2 * b - a * b2
        dtotal = a1 + b1
        w2 = (dnum * total - 2.0 * num * dtotal) / total**3
        return w, w1 / width, w2 / width**2

    def f(self, t):
        t = np.asarray(t, dtype=float)
        w, _, _ = self.step(t)
        return (1.0 - w) * t + w * np.exp(t)

    def df(self, t):
        t = np.asarray(t, dtype=float)
        w, w1, _ = self.step(t)
        e = np.exp(t)
        return (1.0 - w) + w * e + w1 * (e - t)

    def d2f(self, t):
        t = np.asarray(t, dtype=float)
        w, w1, w2 = self.step(t)
        e = np.exp(t)
        return w * e + 2.0 * w1 * (e - 1.0) + w2 * (e - t)

    def inverse(self, y):
        """``f⁻¹`` for ``y >= 0``: identity, logarithm, or a bracketed root in between."""
        y = np.asarray(y, dtype=float)
        out = np.where(y < self.inner, y, 0.0)
        upper = np.exp(self.outer)
        far = y >= upper
        out = np.where(far, np.log(np.where(far, y, 1.0)), out)
        middle = (y >= self.inner) & ~far
        if np.any(middle):
            flat = out.reshape(-1)
            for i in np.flatnonzero(middle.reshape(-1)):
                target = float(y.reshape(-1)[i])
                flat[i] = brentq(lambda t: float(self.f(t)) - target, self.inner, self.outer, xtol=INVERSE_XTOL)
            out = flat.reshape(y.shape)
        return out

    def check_monotone(self, upper: float = 10.0) -> None:
        grid = np.linspace(0.0, upper, MONOTONE_SAMPLES)
        slope = self.df(grid)
        if np.any(slope <= 0.0) or np.any(np.diff(self.f(grid)) <= 0.0):
            raise ConfigurationError(
                "径向轮廓不单调",
                data={"blend_inner": self.inner, "blend_outer": self.outer},
            )

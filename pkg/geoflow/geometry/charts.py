"""Charts: metric tensors in coordinates and the Christoffel symbols derived from them.

All functions are vectorized over a leading batch axis. Christoffel arrays use
the layout ``gamma[n, k, i, j] = Γ^k_{ij}`` at point ``n``.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from collections.abc import Callable

import numpy as np

from geoflow.exceptions import NumericalError
from geoflow.geometry.types import ChartDomain

MetricFn = Callable[[np.ndarray], np.ndarray]


def fd_steps(P: np.ndarray) -> np.ndarray:
    """Central-difference steps ``1e-5 * max(1, |x|)`` per coordinate."""
    return 1e-5 * np.maximum(1.0, np.abs(P))


def metric_derivatives(metric: MetricFn, P: np.ndarray) -> np.ndarray:
    """``dg[n, l, i, j] = ∂_l g_ij`` by central differences."""
    P = np.atleast_2d(P)
    h = fd_steps(P)
    dg = np.empty((len(P), 2, 2, 2))
    for axis in (0, 1):
        shift = np.zeros_like(P)
        shift[:, axis] = h[:, axis]
        dg[:, axis] = (metric(P + shift) - metric(P - shift)) / (2.0 * h[:, axis, None, None])
    return dg


def checked_inverse(g: np.ndarray, P: np.ndarray) -> np.ndarray:
    """Inverse of a batch of 2x2 metrics; degenerate entries raise with their location."""
    det = g[:, 0, 0] * g[:, 1, 1] - g[:, 0, 1] * g[:, 1, 0]
    bad = ~np.isfinite(det) | (det <= 0.0)
    if np.any(bad):
        where = np.atleast_2d(P)[np.argmax(bad)]
        raise NumericalError(
            "度量在该点退化",
            module="geometry",
            data={"u": float(where[0]), "v": float(where[1]), "det": float(det[np.argmax(bad)])},
        )
    inv = np.empty_like(g)
    inv[:, 0, 0] = g[:, 1, 1] / det
    inv[:, 1, 1] = g[:, 0, 0] / det
    inv[:, 0, 1] = -g[:, 0, 1] / det
    inv[:, 1, 0] = -g[:, 1, 0] / det
    return inv


def christoffel_from_derivatives(g: np.ndarray, dg: np.ndarray, P: np.ndarray) -> np.ndarray:
    """Γ^k_ij = ½ g^{kl} (∂_i g_jl + ∂_j g_il − ∂_l g_ij), symmetrized in (i, j)."""
    ginv = checked_inverse(g, P)
    first = 0.5 * (
        np.einsum("nijl->nlij", dg) + np.einsum("njil->nlij", dg) - dg
    )
    gamma = np.einsum("nkl,nlij->nkij", ginv, first)
    return 0.5 * (gamma + gamma.swapaxes(2, 3))


def fd_christoffel(metric: MetricFn, P: np.ndarray) -> np.ndarray:
    P = np.atleast_2d(np.asarray(P, dtype=float))
    return christoffel_from_derivatives(metric(P), metric_derivatives(metric, P), P)


class Chart(ABC):
    """One coordinate chart of a surface.

    ``quality`` measures how well conditioned the chart is at a point. The
    integrator moves an orbit to another chart once its quality drops below
    ``switch_below``; ``floor`` is where the chart stops being usable and
    ``quality_rate`` bounds how fast quality can change along a unit-speed orbit.
    """

    name: str = "chart"
    switch_below: float = -np.inf
    floor: float = -np.inf
    quality_rate: float = 1.0

    def __init__(self, domain: ChartDomain) -> None:
        self.domain = domain

    @abstractmethod
    def metric(self, P: np.ndarray) -> np.ndarray:
        """Metric components ``(N, 2, 2)`` at chart points ``(N, 2)``."""

    def christoffel(self, P: np.ndarray) -> np.ndarray:
        return fd_christoffel(self.metric, P)

    def christoffel_fd(self, P: np.ndarray) -> np.ndarray:
        return fd_christoffel(self.metric, P)

    def quality(self, P: np.ndarray) -> np.ndarray:
        return np.full(len(np.atleast_2d(P)), np.inf)

    def norm(self, P: np.ndarray, V: np.ndarray) -> np.ndarray:
        g = self.metric(P)
        return np.sqrt(np.einsum("ni,nij,nj->n", V, g, V))

    def inner(self, P: np.ndarray, V1: np.ndarray, V2: np.ndarray) -> np.ndarray:
        return np.einsum("ni,nij,nj->n", V1, self.metric(P), V2)

    def orthonormal_frame(self, P: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """g-orthonormal frame ``(e1, e2)`` with ``e1`` along ``∂_u``."""
        g = self.metric(P)
        n = len(g)
        e1 = np.zeros((n, 2))
        e1[:, 0] = 1.0 / np.sqrt(g[:, 0, 0])
        raw = np.zeros((n, 2))
        raw[:, 1] = 1.0
        proj = np.einsum("ni,nij,nj->n", raw, g, e1)
        e2 = raw - proj[:, None] * e1
        e2 /= np.sqrt(np.einsum("ni,nij,nj->n", e2, g, e2))[:, None]
        return e1, e2

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name!r})"


class FunctionChart(Chart):
    """A chart given by plain callables, used for one-off and test surfaces."""

    def __init__(
        self,
        domain: ChartDomain,
        metric_fn: MetricFn,
        christoffel_fn: Callable[[np.ndarray], np.ndarray] | None = None,
        name: str = "chart",
    ) -> None:
        super().__init__(domain)
        self._metric_fn = metric_fn
        self._christoffel_fn = christoffel_fn
        self.name = name

    def metric(self, P: np.ndarray) -> np.ndarray:
        return self._metric_fn(np.atleast_2d(np.asarray(P, dtype=float)))

    def christoffel(self, P: np.ndarray) -> np.ndarray:
        if self._christoffel_fn is None:
            return super().christoffel(P)
        return self._christoffel_fn(np.atleast_2d(np.asarray(P, dtype=float)))

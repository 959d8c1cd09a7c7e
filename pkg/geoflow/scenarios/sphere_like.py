"""Sphere-like surfaces: round sphere, triaxial ellipsoid and Zoll spheres of revolution.

All three share the unit parameter sphere S² ⊂ ℝ³ as ambient model and an
atlas of three spherical charts whose poles sit on the z, x and y axes. A chart
``(θ, φ)`` with rotation ``R`` maps to ``X = R s(θ, φ)`` with
``s = (sinθ cosφ, sinθ sinφ, cosθ)``.
"""

from __future__ import annotations

from collections.abc import Callable

import numpy as np
from numpy.polynomial import Polynomial

from geoflow.exceptions import ConfigurationError
from geoflow.geometry.charts import Chart, checked_inverse
from geoflow.geometry.surface import Surface
from geoflow.geometry.transport import curve_lengths, transport_batch
from geoflow.geometry.types import ChartDomain

POLAR_CAP = 1e-3

# 三个坐标卡的旋转: 极点分别在 z, x, y 轴上
ROTATIONS = (
    np.eye(3),
    np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]]),
    np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, 0.0, 0.0]]),
)

SPHERE_DOMAIN = ChartDomain(lower=(0.0, 0.0), upper=(np.pi, 2.0 * np.pi), periodic=(False, True))

AmbientInner = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]


def _frame(P: np.ndarray):
    """``s`` and its first and second partial derivatives at ``(θ, φ)``."""
    th, ph = P[:, 0], P[:, 1]
    st, ct, sp, cp = np.sin(th), np.cos(th), np.sin(ph), np.cos(ph)
    zero = np.zeros_like(th)
    s = np.stack([st * cp, st * sp, ct], axis=1)
    s_t = np.stack([ct * cp, ct * sp, -st], axis=1)
    s_p = np.stack([-st * sp, st * cp, zero], axis=1)
    s_tt = -s
    s_tp = np.stack([-ct * sp, ct * cp, zero], axis=1)
    s_pp = np.stack([-st * cp, -st * sp, zero], axis=1)
    return s, s_t, s_p, s_tt, s_tp, s_pp


class SphericalChart(Chart):
    """A rotated polar chart on the parameter sphere."""

    switch_below = 0.7
    floor = 0.3

    def __init__(
        self,
        rotation: np.ndarray,
        inner: AmbientInner,
        *,
        name: str,
        speed_bound: float,
        christoffel_fn: Callable[[np.ndarray], np.ndarray] | None = None,
    ) -> None:
        super().__init__(SPHERE_DOMAIN)
        self.rotation = rotation
        self._inner = inner
        self._christoffel_fn = christoffel_fn
        self.name = name
        self.quality_rate = speed_bound

    def metric(self, P: np.ndarray) -> np.ndarray:
        P = np.atleast_2d(P)
        s, s_t, s_p, *_ = _frame(P)
        R = self.rotation
        X, Xt, Xp = s @ R.T, s_t @ R.T, s_p @ R.T
        g = np.empty((len(P), 2, 2))
        g[:, 0, 0] = self._inner(X, Xt, Xt)
        g[:, 0, 1] = g[:, 1, 0] = self._inner(X, Xt, Xp)
        g[:, 1, 1] = self._inner(X, Xp, Xp)
        return g

    def christoffel(self, P: np.ndarray) -> np.ndarray:
        if self._christoffel_fn is None:
            return super().christoffel(P)
        return self._christoffel_fn(np.atleast_2d(P))

    def quality(self, P: np.ndarray) -> np.ndarray:
        return np.sin(np.atleast_2d(P)[:, 0])


class SphereLikeSurface(Surface):
    """Common ambient model for surfaces parametrized by the unit sphere."""

    ambient_dim = 3
    injectivity_hint = np.pi
    speed_bound: float = 1.0

    def _build_charts(self, analytic: Callable[[int], Callable | None]) -> tuple[Chart, ...]:
        names = ("pole-z", "pole-x", "pole-y")
        return tuple(
            SphericalChart(
                R,
                self.ambient_inner,
                name=name,
                speed_bound=self.speed_bound,
                christoffel_fn=analytic(k),
            )
            for k, (R, name) in enumerate(zip(ROTATIONS, names, strict=True))
        )

    # -- ambient model -----------------------------------------------------

    def point_to_ambient(self, chart: int, P: np.ndarray) -> np.ndarray:
        s = _frame(np.atleast_2d(P))[0]
        return s @ ROTATIONS[chart].T

    def ambient_to_point(self, chart: int, X: np.ndarray) -> np.ndarray:
        Y = np.atleast_2d(X) @ ROTATIONS[chart]
        theta = np.arctan2(np.hypot(Y[:, 0], Y[:, 1]), Y[:, 2])
        phi = np.mod(np.arctan2(Y[:, 1], Y[:, 0]), 2.0 * np.pi)
        return np.stack([theta, phi], axis=1)

    def push_forward(self, chart: int, P: np.ndarray, V: np.ndarray) -> np.ndarray:
        _, s_t, s_p, *_ = _frame(np.atleast_2d(P))
        return (s_t * V[:, :1] + s_p * V[:, 1:]) @ ROTATIONS[chart].T

    def pull_back(self, chart: int, P: np.ndarray, W: np.ndarray) -> np.ndarray:
        P = np.atleast_2d(P)
        _, s_t, s_p, *_ = _frame(P)
        w = np.atleast_2d(W) @ ROTATIONS[chart]
        sin2 = np.sin(P[:, 0]) ** 2
        return np.stack([np.sum(w * s_t, axis=1), np.sum(w * s_p, axis=1) / sin2], axis=1)

    def left_rotation(self, X: np.ndarray, T: np.ndarray) -> np.ndarray:
        return np.cross(X, T)

    def project(self, X: np.ndarray) -> np.ndarray:
        return X / np.linalg.norm(X, axis=1, keepdims=True)

    def sample_ambient(self, n: int, rng: np.random.Generator) -> np.ndarray:
        out = np.empty((0, 3))
        limit = np.cos(POLAR_CAP)
        while len(out) < n:
            draw = rng.normal(size=(2 * n, 3))
            draw /= np.linalg.norm(draw, axis=1, keepdims=True)
            out = np.vstack([out, draw[np.abs(draw[:, 2]) <= limit]])
        return out[:n]

    # -- distances ---------------------------------------------------------

    @staticmethod
    def _arc_angle(XA: np.ndarray, XB: np.ndarray) -> np.ndarray:
        cross = np.linalg.norm(np.cross(XA, XB), axis=1)
        return np.arctan2(cross, np.sum(XA * XB, axis=1))

    def _path_groups(self, XA: np.ndarray, XB: np.ndarray):
        """Chart per pair keeping the great-circle arc away from that chart's pole."""
        normal = np.cross(XA, XB)
        # 坐标卡 k 的极点: z, x, y
        poles = np.abs(normal[:, [2, 0, 1]])
        charts = np.argmax(poles, axis=1)
        degenerate = np.linalg.norm(normal, axis=1) < 1e-14
        charts[degenerate] = self.best_chart(XA[degenerate])
        return charts

    def _arc_path(self, chart: int, XA: np.ndarray, XB: np.ndarray):
        omega = self._arc_angle(XA, XB)
        small = omega < 1e-300
        sin_omega = np.where(small, 1.0, np.sin(omega))

        def path(tau: float):
            a = np.where(small, 1.0 - tau, np.sin((1.0 - tau) * omega) / sin_omega)
            b = np.where(small, tau, np.sin(tau * omega) / sin_omega)
            da = np.where(small, -1.0, -omega * np.cos((1.0 - tau) * omega) / sin_omega)
            db = np.where(small, 1.0, omega * np.cos(tau * omega) / sin_omega)
            X = a[:, None] * XA + b[:, None] * XB
            dX = da[:, None] * XA + db[:, None] * XB
            P = self.ambient_to_point(chart, X)
            return P, self.pull_back(chart, P, dX)

        return path

    def _lower_bound(self, XA: np.ndarray, XB: np.ndarray, upper: np.ndarray) -> np.ndarray:
        return np.zeros_like(upper)

    def base_distance_ambient(self, XA, XB):
        XA, XB = np.atleast_2d(XA), np.atleast_2d(XB)
        upper = np.zeros(len(XA))
        charts = self._path_groups(XA, XB)
        for c in np.unique(charts):
            idx = charts == c
            upper[idx] = curve_lengths(self.charts[int(c)], self._arc_path(int(c), XA[idx], XB[idx]))
        return upper, upper - self._lower_bound(XA, XB, upper)

    def _g_angle(self, X: np.ndarray, W1: np.ndarray, W2: np.ndarray) -> np.ndarray:
        """Unsigned angle between tangent vectors at the same points, computed with atan2."""
        unit = self.g_normalize(X, W2)
        normal = self.left_normal(X, unit)
        return np.abs(
            np.arctan2(self.ambient_inner(X, W1, normal), self.ambient_inner(X, W1, unit))
        )

    def transport_angle_ambient(self, XA, WA, XB, WB):
        XA, WA, XB, WB = map(np.atleast_2d, (XA, WA, XB, WB))
        moved = np.empty_like(WA)
        charts = self._path_groups(XA, XB)
        for c in np.unique(charts):
            idx = charts == c
            chart = self.charts[int(c)]
            PA = self.ambient_to_point(int(c), XA[idx])
            PB = self.ambient_to_point(int(c), XB[idx])
            V0 = self.pull_back(int(c), PA, WA[idx])
            same = np.all(XA[idx] == XB[idx], axis=1)
            V1 = V0.copy()
            if not np.all(same):
                sub = ~same
                path = self._arc_path(int(c), XA[idx][sub], XB[idx][sub])
                V1[sub] = transport_batch(chart, path, V0[sub])
            moved[idx] = self.push_forward(int(c), PB, V1)
        return self._g_angle(XB, moved, WB)

    def clairaut(self, X: np.ndarray, W: np.ndarray) -> np.ndarray | None:
        if not self.revolution:
            return None
        killing = np.cross(np.array([0.0, 0.0, 1.0]), X)
        return self.ambient_inner(X, W, killing)


class Ellipsoid(SphereLikeSurface):
    """Triaxial ellipsoid ``x²/a² + y²/b² + z²/c² = 1`` as the image ``D·S²``."""

    def __init__(self, semi_axes=(1.0, 1.2, 1.5), *, name: str = "ellipsoid") -> None:
        axes = np.asarray(semi_axes, dtype=float)
        if axes.shape != (3,) or np.any(axes <= 0):
            raise ConfigurationError("椭球半轴必须是三个正数", data={"semi_axes": list(axes)})
        self.axes = axes
        self.speed_bound = 1.0 / float(np.min(axes))
        charts = self._build_charts(lambda k: self._embedded_christoffel(ROTATIONS[k]))
        super().__init__(name, charts, compact=True, params={"semi_axes": axes.tolist()})

    def ambient_inner(self, X, W1, W2):
        d2 = self.axes**2
        return np.sum(np.atleast_2d(W1) * np.atleast_2d(W2) * d2, axis=1)

    def embed(self, X: np.ndarray) -> np.ndarray:
        return np.atleast_2d(X) * self.axes

    def _embedded_christoffel(self, R: np.ndarray):
        """Γ^k_ij = g^{kl} ⟨E_ij, E_l⟩ for the embedding ``E = D R s``."""
        D = self.axes

        def gamma(P: np.ndarray) -> np.ndarray:
            _, s_t, s_p, s_tt, s_tp, s_pp = _frame(P)
            first = [(s_t @ R.T) * D, (s_p @ R.T) * D]
            second = [[(s_tt @ R.T) * D, (s_tp @ R.T) * D], [(s_tp @ R.T) * D, (s_pp @ R.T) * D]]
            g = np.empty((len(P), 2, 2))
            for i in range(2):
                for j in range(2):
                    g[:, i, j] = np.sum(first[i] * first[j], axis=1)
            ginv = checked_inverse(g, P)
            lowered = np.empty((len(P), 2, 2, 2))
            for lo in range(2):
                for i in range(2):
                    for j in range(2):
                        lowered[:, lo, i, j] = np.sum(second[i][j] * first[lo], axis=1)
            return np.einsum("nkl,nlij->nkij", ginv, lowered)

        return gamma

    def _lower_bound(self, XA, XB, upper):
        # 弦长不超过测地距离
        return np.linalg.norm((XA - XB) * self.axes, axis=1)


class RoundSphere(Ellipsoid):
    """Round sphere of radius ``R`` with closed-form distance and transport."""

    revolution = True

    def __init__(self, radius: float = 1.0) -> None:
        if radius <= 0:
            raise ConfigurationError("球半径必须为正", data={"radius": radius})
        super().__init__((radius, radius, radius), name="sphere")
        self.radius = float(radius)
        self.params = {"radius": self.radius}

    def base_distance_ambient(self, XA, XB):
        XA, XB = np.atleast_2d(XA), np.atleast_2d(XB)
        dist = self.radius * self._arc_angle(XA, XB)
        return dist, np.zeros_like(dist)

    def transport_angle_ambient(self, XA, WA, XB, WB):
        XA, WA, XB, WB = map(np.atleast_2d, (XA, WA, XB, WB))
        axis = np.cross(XA, XB)
        size = np.linalg.norm(axis, axis=1)
        omega = np.arctan2(size, np.sum(XA * XB, axis=1))
        # 对径点: 任取与 XA 垂直的轴
        fallback = np.cross(XA, WA)
        axis = np.where((size < 1e-14)[:, None], fallback, axis)
        axis /= np.linalg.norm(axis, axis=1, keepdims=True)
        cos, sin = np.cos(omega)[:, None], np.sin(omega)[:, None]
        dot = np.sum(axis * WA, axis=1, keepdims=True)
        moved = WA * cos + np.cross(axis, WA) * sin + axis * dot * (1.0 - cos)
        cross = np.linalg.norm(np.cross(moved, WB), axis=1)
        return np.arctan2(cross, np.sum(moved * WB, axis=1))


class ZollSphere(SphereLikeSurface):
    """Zoll sphere of revolution ``(1 + λ p(cosθ))² dθ² + sin²θ dφ²``.

    ``p(x) = (1 - x²) q(x)`` with ``q`` an odd polynomial; the default
    ``q(x) = x`` gives ``p(x) = x(1 - x²)``.
    """

    revolution = True

    def __init__(self, zoll_lambda: float = 0.3, q_coefficients=(0.0, 1.0)) -> None:
        q = Polynomial(np.asarray(q_coefficients, dtype=float))
        if np.any(np.abs(q.coef[0::2]) > 0):
            raise ConfigurationError("q 必须是奇多项式", data={"q": q.coef.tolist()})
        self.lam = float(zoll_lambda)
        self.p = Polynomial([1.0, 0.0, -1.0]) * q
        self.dp = self.p.deriv()
        self._q = q
        grid = np.linspace(-1.0, 1.0, 10_001)
        profile = 1.0 + self.lam * self.p(grid)
        if abs(self.lam) >= 1.0 or np.min(profile) <= 0.0:
            raise ConfigurationError(
                "Zoll 参数使度量退化", data={"zoll_lambda": self.lam, "min_profile": float(np.min(profile))}
            )
        self.profile_min = float(np.min(profile))
        self.speed_bound = 1.0 / min(1.0, self.profile_min)
        charts = self._build_charts(lambda k: self._primary_christoffel if k == 0 else None)
        super().__init__(
            "zoll",
            charts,
            compact=True,
            params={"zoll_lambda": self.lam, "q": q.coef.tolist()},
        )

    def ambient_inner(self, X, W1, W2):
        X, W1, W2 = map(np.atleast_2d, (X, W1, W2))
        z = X[:, 2]
        weight = self.lam * self._q(z) * (2.0 + self.lam * self.p(z))
        return np.sum(W1 * W2, axis=1) + weight * W1[:, 2] * W2[:, 2]

    def _primary_christoffel(self, P: np.ndarray) -> np.ndarray:
        th = P[:, 0]
        st, ct = np.sin(th), np.cos(th)
        A = 1.0 + self.lam * self.p(ct)
        A_t = -self.lam * self.dp(ct) * st
        gamma = np.zeros((len(P), 2, 2, 2))
        gamma[:, 0, 0, 0] = A_t / A
        gamma[:, 0, 1, 1] = -st * ct / A**2
        gamma[:, 1, 0, 1] = gamma[:, 1, 1, 0] = ct / st
        return gamma

    def _lower_bound(self, XA, XB, upper):
        return min(1.0, self.profile_min) * self._arc_angle(XA, XB)


PRINCIPAL_PLANES = {"xy": (0, 1), "xz": (0, 2), "yz": (1, 2)}


def middle_axis_plane(semi_axes) -> str:
    """Coordinate plane of the principal ellipse through the longest and shortest axes."""
    order = np.argsort(np.asarray(semi_axes, dtype=float))
    axes = tuple(sorted((int(order[0]), int(order[2]))))
    return next(name for name, pair in PRINCIPAL_PLANES.items() if pair == axes)


def principal_anchors(surface: SphereLikeSurface, plane: str, n: int, offset: float = 0.1):
    """``n`` unit tangents along the principal ellipse in a coordinate plane.

    Raises:
        ConfigurationError: unknown plane name
    """
    if plane not in PRINCIPAL_PLANES:
        raise ConfigurationError(f"未知坐标平面: {plane}", module="scenarios", data={"plane": plane})
    i, j = PRINCIPAL_PLANES[plane]
    s = offset + 2.0 * np.pi * np.arange(n) / n
    X = np.zeros((n, 3))
    W = np.zeros((n, 3))
    X[:, i], X[:, j] = np.cos(s), np.sin(s)
    W[:, i], W[:, j] = -np.sin(s), np.cos(s)
    return surface.from_ambient(X, surface.g_normalize(X, W))

"""
分析命令组

``geoflow analyze equicont|recur|distal|almostperiod``: each subcommand runs
one estimator and prints a one-line verdict.
"""

from geoflow.commands.base import BaseCommand


class AnalyzeCommand(BaseCommand):
    """动力学性质估计"""

    def equicont(
        self,
        scenario: str | None = None,
        config: str | None = None,
        seed: int | None = None,
        tol: float | None = None,
        t_max: float | None = None,
        samples: int | None = None,
        epsilon: float | None = None,
        metric: str | None = None,
        mode: str | None = None,
        ladder_depth: int | None = None,
        perturbations: int | None = None,
        anchor_plane: str | None = None,
        initial: tuple[float, float, float, float] | None = None,
        out: str | None = None,
        format: str | None = None,
        expect: str | None = None,
    ) -> None:
        """
        等度连续模估计: 在 δ = ε/2, ε/4, ... 上寻找满足条件的 δ 或违例见证

        Args:
            samples: 每层随机点对数量 (uniform 模式)
            epsilon: ε
            metric: sasaki 或 d1
            mode: uniform 或 pointwise
            ladder_depth: δ 层数
            perturbations: 每个锚点的扰动数量
            anchor_plane: 椭球主平面锚点 (xy, xz, yz, middle)
            initial: 锚点向量
        """
        self._launch(
            "equicont",
            config,
            scenario=scenario,
            seed=seed,
            tol=tol,
            t_max=t_max,
            samples=samples,
            epsilon=epsilon,
            metric=metric,
            mode=mode,
            ladder_depth=ladder_depth,
            perturbations=perturbations,
            anchor_plane=anchor_plane,
            initial=initial,
            out=out,
            format=format,
            expect=expect,
        )

    def recur(
        self,
        scenario: str | None = None,
        config: str | None = None,
        tol: float | None = None,
        samples: int | None = None,
        map_name: str | None = None,
        n_max: int | None = None,
        near_return_tol: float | None = None,
        power: int | None = None,
        out: str | None = None,
        format: str | None = None,
        expect: str | None = None,
    ) -> None:
        """
        回归剖面 sup d(Fⁿx, x), n = 1..n_max

        Args:
            samples: 网格点数 (取平方根作为每个方向的分辨率)
            map_name: return, twist 或 identity
            n_max: 最大迭代次数
            near_return_tol: 近回归阈值
            power: 幂回归检查的 m
        """
        self._launch(
            "recur",
            config,
            scenario=scenario,
            tol=tol,
            samples=samples,
            map_name=map_name,
            n_max=n_max,
            near_return_tol=near_return_tol,
            power=power,
            out=out,
            format=format,
            expect=expect,
        )

    def distal(
        self,
        scenario: str | None = None,
        config: str | None = None,
        seed: int | None = None,
        tol: float | None = None,
        t_max: float | None = None,
        samples: int | None = None,
        metric: str | None = None,
        distal_floor: float | None = None,
        out: str | None = None,
        format: str | None = None,
        expect: str | None = None,
    ) -> None:
        """
        随机点对在 [-t_max, t_max] 上的最小距离估计

        Args:
            samples: 点对数量
            distal_floor: 判定为远离的下界
        """
        self._launch(
            "distal",
            config,
            scenario=scenario,
            seed=seed,
            tol=tol,
            t_max=t_max,
            samples=samples,
            metric=metric,
            distal_floor=distal_floor,
            out=out,
            format=format,
            expect=expect,
        )

    def almostperiod(
        self,
        scenario: str | None = None,
        config: str | None = None,
        seed: int | None = None,
        tol: float | None = None,
        t_max: float | None = None,
        samples: int | None = None,
        epsilon: float | None = None,
        tau: float | None = None,
        out: str | None = None,
        format: str | None = None,
        expect: str | None = None,
    ) -> None:
        """
        在 [0, t_max] 中搜索 ε-几乎周期, 检查每个长度为 τ 的窗口

        Args:
            samples: 采样点数量
            epsilon: ε
            tau: 窗口长度
        """
        self._launch(
            "almostperiod",
            config,
            scenario=scenario,
            seed=seed,
            tol=tol,
            t_max=t_max,
            samples=samples,
            epsilon=epsilon,
            tau=tau,
            out=out,
            format=format,
            expect=expect,
        )

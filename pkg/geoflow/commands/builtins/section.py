"""截面命令"""

from geoflow.commands.base import BaseCommand


class SectionCommand(BaseCommand):
    """在参考闭测地线上构造截面并计算回归映射网格"""

    def run(
        self,
        scenario: str | None = None,
        config: str | None = None,
        seed: int | None = None,
        tol: float | None = None,
        samples: int | None = None,
        crossing_mode: str | None = None,
        guard: float | None = None,
        horizon: float | None = None,
        out: str | None = None,
        format: str | None = None,
        expect: str | None = None,
    ) -> None:
        """
        输出 (s, θ) 网格上的一次回归

        Args:
            scenario: 紧致场景名称
            samples: 网格点数 (近似)
            crossing_mode: transversal 或 same_side
            guard: 相切保护带 θ_min
            horizon: 单次回归的时间上限
        """
        self._launch(
            "section",
            config,
            scenario=scenario,
            seed=seed,
            tol=tol,
            samples=samples,
            crossing_mode=crossing_mode,
            guard=guard,
            horizon=horizon,
            out=out,
            format=format,
            expect=expect,
        )

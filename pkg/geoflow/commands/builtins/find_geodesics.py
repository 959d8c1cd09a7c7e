"""闭测地线搜索命令"""

from geoflow.commands.base import BaseCommand


class FindGeodesicsCommand(BaseCommand):
    """打靶法寻找闭测地线"""

    def run(
        self,
        scenario: str | None = None,
        config: str | None = None,
        seed: int | None = None,
        tol: float | None = None,
        samples: int | None = None,
        period_range: tuple[float, float] | None = None,
        shooting_tol: float | None = None,
        initial: tuple[float, float, float, float] | None = None,
        out: str | None = None,
        format: str | None = None,
        expect: str | None = None,
    ) -> None:
        """
        从种子向量出发打靶, 去重后报告闭测地线及其周期

        Args:
            samples: 随机种子数量 (椭球默认使用主平面种子)
            period_range: 周期搜索范围
            shooting_tol: 闭合判据 d̃(Φ_T v, v) < shooting_tol
            initial: 单个种子向量
        """
        self._launch(
            "closed-geodesics",
            config,
            scenario=scenario,
            seed=seed,
            tol=tol,
            samples=samples,
            period_range=period_range,
            shooting_tol=shooting_tol,
            initial=initial,
            out=out,
            format=format,
            expect=expect,
        )

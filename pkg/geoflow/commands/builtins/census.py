"""不动点普查命令"""

from geoflow.commands.base import BaseCommand


class CensusCommand(BaseCommand):
    """扩展回归映射 (或其幂) 的不动点普查"""

    def run(
        self,
        scenario: str | None = None,
        config: str | None = None,
        tol: float | None = None,
        map_name: str | None = None,
        grid: tuple[int, int] | None = None,
        census_tol: float | None = None,
        power: int | None = None,
        out: str | None = None,
        format: str | None = None,
        expect: str | None = None,
    ) -> None:
        """
        Args:
            map_name: return, twist 或 identity
            grid: (n_s, n_θ) 网格分辨率
            census_tol: 位移阈值
            power: 迭代次数 m, 普查 F^m 的不动点
        """
        self._launch(
            "census",
            config,
            scenario=scenario,
            tol=tol,
            map_name=map_name,
            grid=grid,
            census_tol=census_tol,
            power=power,
            out=out,
            format=format,
            expect=expect,
        )

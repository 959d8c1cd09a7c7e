"""解析解对照命令"""

from geoflow.commands.base import BaseCommand


class OracleCheckCommand(BaseCommand):
    """将积分结果与解析解逐点比较"""

    def run(
        self,
        scenario: str | None = None,
        config: str | None = None,
        seed: int | None = None,
        tol: float | None = None,
        t_max: float | None = None,
        samples: int | None = None,
        oracle_tol: float | None = None,
        out: str | None = None,
        format: str | None = None,
        expect: str | None = None,
    ) -> None:
        """
        Args:
            t_max: 随机时间 |t| 的上限
            samples: 随机初值数量
            oracle_tol: 允许的最大误差
        """
        self._launch(
            "oracle-check",
            config,
            scenario=scenario,
            seed=seed,
            tol=tol,
            t_max=t_max,
            samples=samples,
            oracle_tol=oracle_tol,
            out=out,
            format=format,
            expect=expect,
        )

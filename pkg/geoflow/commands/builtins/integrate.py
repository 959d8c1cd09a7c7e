"""积分命令"""

from geoflow.commands.base import BaseCommand


class IntegrateCommand(BaseCommand):
    """对单条测地线积分并输出采样轨迹"""

    def run(
        self,
        scenario: str | None = None,
        config: str | None = None,
        seed: int | None = None,
        tol: float | None = None,
        t_max: float | None = None,
        samples: int | None = None,
        initial: tuple[float, float, float, float] | None = None,
        out: str | None = None,
        format: str | None = None,
        expect: str | None = None,
    ) -> None:
        """
        积分测地线 γ_v 并报告守恒诊断

        Args:
            scenario: 场景名称
            config: key=value 配置文件
            seed: 随机种子 (未给出 initial 时随机取初值)
            tol: 积分器局部误差目标
            t_max: 积分时长
            samples: 采样点数
            initial: 初始向量 (u, v, du, dv)
            out: 输出路径
            format: csv 或 json
            expect: 期望结论
        """
        self._launch(
            "integrate",
            config,
            scenario=scenario,
            seed=seed,
            tol=tol,
            t_max=t_max,
            samples=samples,
            initial=initial,
            out=out,
            format=format,
            expect=expect,
        )

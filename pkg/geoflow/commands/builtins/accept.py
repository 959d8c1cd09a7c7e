"""验收命令"""

from geoflow.commands.base import BaseCommand


class AcceptCommand(BaseCommand):
    """运行场景对应的验收条目"""

    def run(
        self,
        scenario: str | None = None,
        config: str | None = None,
        seed: int | None = None,
        criteria: tuple[int, ...] | None = None,
        out: str | None = None,
        format: str | None = None,
        expect: str | None = None,
    ) -> None:
        """
        Args:
            scenario: 场景名称, 决定运行哪些条目
            criteria: 条目编号子集
            expect: 期望结论, 默认 satisfied
        """
        if isinstance(criteria, int):
            criteria = (criteria,)
        self._launch(
            "accept",
            config,
            scenario=scenario,
            seed=seed,
            criteria=criteria,
            out=out,
            format=format,
            expect=expect,
        )

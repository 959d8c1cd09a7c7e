"""
实验运行器

``run`` executes one configured experiment, writes its artifact and maps the
outcome to a process exit status: 0 on success, 1 when the verdict
contradicts the declared expectation, 2 on any execution or usage error.
"""

from __future__ import annotations

from typing import Any

from rich.console import Console

from geoflow.exceptions import ConfigurationError, get_manager
from geoflow.experiments import acceptance  # noqa: F401  注册 accept 任务
from geoflow.experiments.config import ExperimentConfig, load_config
from geoflow.experiments.export import CSV_SCHEMAS, ExperimentResult, write_csv, write_json
from geoflow.experiments.tasks import TASKS
from geoflow.utils.logger import log_info, log_warning

console = Console()

EXIT_OK = 0
EXIT_MISMATCH = 1

VERDICT_STYLE = {"satisfied": "green", "violated": "red", "inconclusive": "yellow"}


def execute(config: ExperimentConfig) -> ExperimentResult:
    """Run the configured experiment and write its artifact to ``config.out`` if set."""
    if config.format == "csv" and config.out and config.experiment not in CSV_SCHEMAS:
        raise ConfigurationError(
            f"实验 {config.experiment} 没有 CSV 输出",
            data={"experiment": config.experiment, "csv": sorted(CSV_SCHEMAS)},
        )
    log_info("实验", resource="实验", resource_id=config.experiment, status="开始", details={"scenario": config.scenario})
    result = TASKS[config.experiment](config)
    if config.out:
        if config.format == "csv":
            write_csv(config.out, result)
        else:
            write_json(config.out, result, config)
    log_info(
        "实验",
        resource="实验",
        resource_id=config.experiment,
        status="完成",
        details={"verdict": result.verdict, "out": config.out},
    )
    return result


def expected_verdict(config: ExperimentConfig) -> str | None:
    if config.expect is None and config.experiment == "accept":
        return "satisfied"
    return config.expect


def exit_status(result: ExperimentResult, expect: str | None) -> int:
    if expect is None or result.verdict is None or result.verdict == expect:
        return EXIT_OK
    log_warning(
        "实验",
        resource="实验",
        resource_id=result.experiment,
        status="结论不符",
        details={"verdict": result.verdict, "expect": expect},
    )
    return EXIT_MISMATCH


def summary_line(result: ExperimentResult) -> str:
    if result.verdict is None:
        return f"[bold]{result.experiment}[/bold] {result.summary}"
    style = VERDICT_STYLE.get(result.verdict, "white")
    return f"[bold]{result.experiment}[/bold] [{style}]{result.verdict}[/{style}] {result.summary}"


def run(config: ExperimentConfig) -> int:
    """Execute ``config`` and return the process exit status."""
    try:
        result = execute(config)
    except Exception as exc:
        return get_manager().handle(exc)
    console.print(summary_line(result))
    return exit_status(result, expected_verdict(config))


def run_from(path: str | None = None, **overrides: Any) -> int:
    """Load a config file, apply flag overrides and :func:`run` it; invalid configs exit with 2."""
    try:
        config = load_config(path, **overrides)
    except Exception as exc:
        return get_manager().handle(exc)
    return run(config)

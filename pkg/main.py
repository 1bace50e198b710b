#!/usr/bin/env python3
"""
KwongLab 命令行入口
结构化矩阵族的生成、惯性计算、闭式预测验证、轨迹扫描与结构检查

退出码: 0 成功 / 1 验证存在 FAIL / 2 参数或校验错误 / 3 数值失败
"""

import random
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import click
import pandas as pd

# 添加项目根目录到Python路径
sys.path.append(str(Path(__file__).parent))

from core.config_manager import ConfigManager, get_setting, set_config_manager
from core.domain import (
    Exponent,
    Family,
    FamilySpec,
    Points,
    ScalarMode,
    format_scalar,
    is_exact_scalar,
    parse_scalar,
)
from core.exceptions import KwongLabError, NumericalError, ValidationError
from core.logger import LoggerManager, setup_logging
from core.run_config import RunConfig, build_run_config, parse_r_grid
from core.serialization import dumps, matrix_to_csv, matrix_to_dict
from framework.engine_manager import compute_inertia, make_spec
from framework.oracle import predict_inertia, predict_kwong_inertia
from framework.sweep import detect_transitions, emit_trajectory, sweep_inertia, sweep_to_dict
from framework.verification import InertiaVerifier, random_rational_points
from matrix_lib import PREDICTED_FAMILIES, generators, signs, structure

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2
EXIT_NUMERICAL = 3


def _wants_json(argv: Sequence[str]) -> bool:
    """默认输出为 JSON；显式 --format csv 时错误按文本输出"""
    for index, arg in enumerate(argv):
        if arg == "--format" and index + 1 < len(argv):
            return argv[index + 1] != "csv"
        if arg.startswith("--format="):
            return arg.split("=", 1)[1] != "csv"
    return True


def _emit_error(error_name: str, detail: str, as_json: bool):
    if as_json:
        click.echo(dumps({"error": error_name, "detail": detail}))
    else:
        click.echo(f"Error: {error_name}: {detail}", err=True)


class JsonAwareGroup(click.Group):
    """统一错误出口：领域错误与 click 用法错误都映射为退出码与 {error, detail}"""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        argv = list(sys.argv[1:] if args is None else args)
        as_json = _wants_json(argv)
        try:
            rv = super().main(args=argv, prog_name=prog_name, complete_var=complete_var,
                              standalone_mode=False, **extra)
        except click.ClickException as exc:
            _emit_error("UsageError", exc.format_message(), as_json)
            rv = EXIT_USAGE
        except click.Abort:
            click.echo("Aborted!", err=True)
            rv = EXIT_FAIL
        except NumericalError as exc:
            _emit_error(exc.error_name, exc.detail, as_json)
            rv = EXIT_NUMERICAL
        except KwongLabError as exc:
            _emit_error(exc.error_name, exc.detail, as_json)
            rv = EXIT_USAGE

        code = rv if isinstance(rv, int) else EXIT_OK
        if standalone_mode:
            sys.exit(code)
        return code


def _echo_json(data: Any):
    click.echo(dumps(data))


def _echo_frame(rows: List[Dict[str, Any]]):
    click.echo(pd.DataFrame(rows).to_csv(index=False, lineterminator="\n"), nl=False)


def _default_jobs(jobs: Optional[int]) -> int:
    return int(jobs if jobs is not None else get_setting("runtime.jobs", 1))


def _r_values(r: Sequence[str], r_grid: Optional[str]) -> List[Exponent]:
    values = [Exponent.of(text.strip()) for item in r for text in item.split(",") if text.strip()]
    if r_grid:
        values.extend(parse_r_grid(r_grid))
    return values


def _single_r(config: RunConfig) -> Exponent:
    if len(config.r_values) != 1:
        raise ValidationError("需要恰好一个 --r")
    return config.r_values[0]


# 各子命令共享的选项
points_option = click.option("--points", "points", default=None, help="逗号分隔的正节点，如 1,2,5,10")
n_option = click.option("--n", "n", type=int, default=None, help="阶数；未给 --points 时节点取 1..n")
r_option = click.option("--r", "r", multiple=True, help="指数，可重复或逗号分隔")
format_option = click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="json",
                             show_default=True, help="输出格式")
jobs_option = click.option("--jobs", type=int, default=None, help="并行进程数，默认读取 KWONG_JOBS")


@click.group(cls=JsonAwareGroup)
@click.option("--env", default=None, help="配置环境 development/testing/production")
@click.option("--log-level", default=None, help="日志级别，覆盖配置")
@click.pass_context
def cli(ctx: click.Context, env: Optional[str], log_level: Optional[str]):
    """KwongLab - Kwong 矩阵族惯性计算与验证工具"""
    if env:
        set_config_manager(ConfigManager(environment=env))
    ctx.obj = setup_logging(get_setting("logging", {}), level=log_level)


@cli.command()
@click.option("--family", default="kwong", type=click.Choice(["kwong", "absdiff"]), show_default=True)
@points_option
@n_option
@r_option
@click.option("--r-grid", default=None, help="start:stop:step（含端点）")
@click.option("--engine", default="auto", type=click.Choice(["exact", "float", "auto", "both"]),
              show_default=True)
@click.option("--random-sets", type=int, default=0, show_default=True, help="追加的随机有理节点集个数")
@click.option("--seed", type=int, default=0, show_default=True)
@format_option
@jobs_option
@click.pass_obj
def verify(logger_manager: LoggerManager, family, points, n, r, r_grid, engine, random_sets, seed, fmt, jobs):
    """逐点比对计算惯性与闭式预测，存在 FAIL 时退出码为 1"""
    config = build_run_config(subcommand="verify", points=points, n=n, r_values=_r_values(r, r_grid),
                              engine=engine, format=fmt, seed=seed, jobs=_default_jobs(jobs))
    if not config.r_values:
        raise ValidationError("需要 --r 或 --r-grid")

    point_sets = [config.resolved_points()]
    rng = random.Random(config.seed)
    point_sets.extend(random_rational_points(rng, config.order) for _ in range(random_sets))

    verifier = InertiaVerifier(family, config.engine, config.jobs, logger_manager)
    report = verifier.run(point_sets, config.r_values)
    if config.format == "csv":
        click.echo(report.to_csv(), nl=False)
    else:
        _echo_json(report.to_dict())
    return EXIT_OK if report.all_passed else EXIT_FAIL


@cli.command()
@click.option("--family", default="kwong", type=click.Choice([f.value for f in PREDICTED_FAMILIES]),
              show_default=True)
@points_option
@n_option
@r_option
@format_option
def predict(family, points, n, r, fmt):
    """闭式惯性预测"""
    config = build_run_config(subcommand="predict", points=points, n=n, r_values=_r_values(r, None),
                              format=fmt)
    exponent = _single_r(config)
    family = Family.parse(family)
    if family is Family.KWONG:
        data = predict_kwong_inertia(config.order, exponent).to_dict()
    else:
        inertia = predict_inertia(family, config.order, exponent)
        if inertia is None:
            raise ValidationError(f"{family.label} 在 r={exponent} 处没有闭式预测")
        data = {"n": config.order, "r": exponent.to_json(), "family": family.label,
                "inertia": inertia.to_list()}

    if config.format == "csv":
        row = {key: value for key, value in data.items() if key != "inertia"}
        row.update(zip(("pi", "zeta", "nu"), data["inertia"]))
        _echo_frame([row])
    else:
        _echo_json(data)


def _build_spec(family: str, config: RunConfig, second_points: Optional[str]) -> FamilySpec:
    family = Family.parse(family)
    r = None if family is Family.CAUCHY else _single_r(config)
    second = Points.from_text(second_points) if second_points else None
    return make_spec(family, config.resolved_points(), r, second)


@cli.command()
@click.option("--family", default="kwong", show_default=True,
              help="kwong/loewner/absdiff/cosh/cauchy/cross/powersum")
@points_option
@n_option
@r_option
@click.option("--second-points", default=None, help="交叉 Kwong 矩阵的第二组节点")
@click.option("--mode", default="auto", type=click.Choice(["exact", "float", "auto"]), show_default=True)
@format_option
def gen(family, points, n, r, second_points, mode, fmt):
    """生成矩阵"""
    config = build_run_config(subcommand="gen", points=points, n=n, r_values=_r_values(r, None), format=fmt)
    spec = _build_spec(family, config, second_points)
    scalar_mode = None if mode == "auto" else ScalarMode(mode)
    matrix = generators.build_matrix(spec, scalar_mode)
    if config.format == "csv":
        click.echo(matrix_to_csv(matrix))
    else:
        _echo_json(matrix_to_dict(matrix))


@cli.command()
@click.option("--family", default="kwong", show_default=True)
@points_option
@n_option
@r_option
@click.option("--engine", default="auto", type=click.Choice(["exact", "float", "auto"]), show_default=True)
@click.option("--policy", default="auto", type=click.Choice(["auto", "direct", "cosh"]), show_default=True,
              help="浮点引擎的条件化路线")
@click.option("--explain", is_flag=True, help="输出精确引擎的主元记录")
@format_option
@click.pass_obj
def inertia(logger_manager: LoggerManager, family, points, n, r, engine, policy, explain, fmt):
    """计算惯性"""
    config = build_run_config(subcommand="inertia", points=points, n=n, r_values=_r_values(r, None),
                              engine=engine, format=fmt, explain=explain)
    spec = _build_spec(family, config, None)
    kwargs = {"policy": policy} if config.engine != "exact" else {}
    try:
        result = compute_inertia(spec, config.engine, **kwargs)
    except NumericalError as e:
        log = logger_manager.create_logger("kwonglab.inertia")
        logger_manager.log_exception(log, e, f"计算惯性 {spec.family.label} r={spec.r}")
        raise
    if config.format == "csv":
        _echo_frame([{"engine": result.engine.value, "pi": result.inertia.pi,
                      "zeta": result.inertia.zeta, "nu": result.inertia.nu}])
    else:
        _echo_json(result.to_dict(explain=config.explain))


@cli.command()
@click.option("--family", default="kwong", type=click.Choice(["kwong", "absdiff", "loewner", "cosh"]),
              show_default=True)
@points_option
@n_option
@click.option("--r-min", type=float, required=True)
@click.option("--r-max", type=float, required=True)
@click.option("--steps", type=int, required=True, help="网格点数（含端点）")
@click.option("--policy", default="auto", type=click.Choice(["auto", "direct", "cosh"]), show_default=True)
@click.option("--out", "out", type=click.Path(dir_okay=False), default=None, help="轨迹 CSV 输出文件")
@format_option
@jobs_option
@click.pass_obj
def sweep(logger_manager: LoggerManager, family, points, n, r_min, r_max, steps, policy, out, fmt, jobs):
    """特征值轨迹扫描与惯性跳变检测"""
    config = build_run_config(subcommand="sweep", points=points, n=n, format=fmt, jobs=_default_jobs(jobs))
    records = sweep_inertia(config.resolved_points(), r_min, r_max, steps, policy, family, config.jobs)
    transitions = detect_transitions(records, engine_policy=policy)
    log = logger_manager.create_logger("kwonglab.sweep")
    for transition in transitions:
        logger_manager.log_event(log, "transition", transition.to_dict())

    trajectory = emit_trajectory(records)
    if out:
        Path(out).write_text(trajectory, encoding="utf-8")
    if config.format == "csv":
        if not out:
            click.echo(trajectory, nl=False)
        else:
            _echo_frame([{"location": t.location, "width": t.width,
                          "before": str(t.inertia_before), "after": str(t.inertia_after)}
                         for t in transitions])
    else:
        data = sweep_to_dict(records, transitions)
        if out:
            data = {"out": str(out), "transitions": data["transitions"]}
        _echo_json(data)


@cli.command()
@click.option("--family", default="kwong", show_default=True)
@points_option
@n_option
@r_option
@click.option("--second-points", default=None)
@click.option("--m", "max_order", type=int, required=True, help="检查到的最大子式阶数")
@click.option("--fail-fast", is_flag=True, help="首个违例阶数后停止")
def ssr(family, points, n, r, second_points, max_order, fail_fast):
    """严格符号正则 (SSR) 子式检查，输出 JSON"""
    config = build_run_config(subcommand="ssr", points=points, n=n, r_values=_r_values(r, None))
    spec = _build_spec(family, config, second_points)
    matrix = generators.build_matrix(spec, ScalarMode.EXACT)
    _echo_json(signs.ssr_check(matrix, max_order, fail_fast=fail_fast).to_dict())


@cli.command()
@click.option("--family", default="kwong", type=click.Choice(["kwong", "loewner"]), show_default=True)
@points_option
@n_option
@r_option
@click.option("--json", "as_json", is_flag=True, help="以 JSON 输出分解")
def factor(family, points, n, r, as_json):
    """Vandermonde 分解 M = WᵀVW 的构造与逐元素校验"""
    config = build_run_config(subcommand="factor", points=points, n=n, r_values=_r_values(r, None),
                              format="json" if as_json else "csv")
    points_ = config.resolved_points()
    exponent = _single_r(config)
    if Family.parse(family) is Family.LOEWNER:
        check = structure.verify_loewner_factorization(points_, exponent)
    else:
        check = structure.verify_vandermonde_factorization(points_, exponent)
    sylvester = structure.generalized_sylvester_check(check.pair.V, check.pair.W)

    if as_json:
        _echo_json({
            "W": matrix_to_dict(check.pair.W),
            "V": matrix_to_dict(check.pair.V),
            "residual": format_scalar(check.residual),
            "holds": check.holds,
            "inertia": sylvester.compressed.to_list(),
            "sylvesterHolds": sylvester.holds,
        })
        return
    click.echo("W =")
    click.echo(matrix_to_csv(check.pair.W))
    click.echo("V =")
    click.echo(matrix_to_csv(check.pair.V))
    click.echo(f"residual = {format_scalar(check.residual)}")
    click.echo(f"inertia = {sylvester.compressed}")


@cli.command()
@points_option
@n_option
@r_option
@click.option("--weights", "weights", required=True, help="逗号分隔的权重 c_1..c_n")
@click.option("--scan-samples", type=int, default=None, help="零点扫描网格点数")
@format_option
def descartes(points, n, r, weights, scan_samples, fmt):
    """f 的 Descartes 零点上界与数值零点计数"""
    config = build_run_config(subcommand="descartes", points=points, n=n, r_values=_r_values(r, None),
                              format=fmt)
    points_ = config.resolved_points()
    exponent = _single_r(config)
    c = [parse_scalar(text, exact=is_exact_scalar(text)) for text in weights.split(",") if text.strip()]
    coeffs = signs.build_g_coeffs(points_, c, exponent)
    s = signs.descartes_zero_bound(points_, c, exponent)
    s0 = signs.companion_sign_changes(points_, c, exponent)
    scan = signs.count_positive_zeros_f(points_, c, exponent, scan_samples)

    data = {
        "alpha": [format_scalar(v) for v in coeffs.alpha],
        "beta": [format_scalar(v) for v in coeffs.beta],
        "s": s,
        "s0": s0,
        "zeroCount": scan.count,
        "roots": list(scan.roots),
    }
    if config.format == "csv":
        _echo_frame([{"s": s, "s0": s0, "zeroCount": scan.count}])
    else:
        _echo_json(data)


if __name__ == "__main__":
    cli()

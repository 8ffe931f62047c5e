"""ultradisc command line: linearization discs of maps over Q((T))."""
import logging
import sys
from fractions import Fraction

import click
from rich.console import Console
from rich.logging import RichHandler

import config
from cli_io import FORMATS, METHODS, Command, render_report, run, usage_report, write_report
from errors import INPUT_ERROR

logger = logging.getLogger("ultradisc")

VERBOSITY = {0: None, 1: "INFO", 2: "DEBUG"}


def setup_logging(verbose):
    """Route every module logger to stderr through rich"""
    level = VERBOSITY.get(min(verbose, 2)) or config.default_log_level()
    logging.basicConfig(
        level=level,
        format="%(name)s: %(message)s",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def _fraction(ctx, param, value):
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError):
        raise click.BadParameter(f"expected a rational such as 1/2, got {value!r}")


def common_options(func):
    options = [
        click.option("--map", "map_text", help='Map as "lambda = 1+T; a2 = 1".'),
        click.option("--map-file", "map_path", type=click.Path(dir_okay=False),
                     help="JSON or YAML map document."),
        click.option("--N", "n", type=int, default=config.DEFAULT_N, show_default=True,
                     help="Length of the distance profile and root-of-unity check."),
        click.option("--K", "k", type=int, default=config.DEFAULT_K, show_default=True,
                     help="Number of conjugacy coefficients."),
        click.option("--t-precision", type=int, default=None,
                     help=f"Relative T-precision of divisions [default: ${config.PRECISION_ENV} or "
                          f"{config.DEFAULT_T_PRECISION}]."),
        click.option("--display-epsilon", default=str(config.DEFAULT_DISPLAY_EPSILON),
                     callback=_fraction, show_default=True, help="|T| used when printing radii."),
        click.option("--format", "output_format", type=click.Choice(FORMATS), default="json",
                     show_default=True),
        click.option("--out", "out_path", type=click.Path(dir_okay=False), help="Write the report here."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def execute(name, **options):
    command = Command(
        name=name,
        map_text=options.get("map_text"),
        map_path=options.get("map_path"),
        lambda_text=options.get("lambda_text"),
        poly_text=options.get("poly_text"),
        N=options.get("n", config.DEFAULT_N),
        K=options.get("k", config.DEFAULT_K),
        t_precision=options.get("t_precision"),
        method=options.get("method", "composition"),
        display_epsilon=options.get("display_epsilon", config.DEFAULT_DISPLAY_EPSILON),
        output_format=options.get("output_format", "json"),
        out_path=options.get("out_path"),
    )
    report, exit_code = run(command)
    try:
        text = write_report(report, command.output_format, command.out_path)
    except OSError as e:
        logger.error(f"❌ Could not write report: {e}")
        sys.exit(INPUT_ERROR)
    if text is not None:
        click.echo(text, nl=False)
    sys.exit(exit_code)


class ReportingGroup(click.Group):
    """Turns click's option errors into usage-error reports with exit code 1"""

    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except click.UsageError as e:
            sub_ctx = e.ctx if e.ctx is not None and e.ctx.command is not self else None
            name = sub_ctx.info_name if sub_ctx else None
            logger.error(f"❌ {e.format_message()}")
            click.echo(render_report(usage_report(name, e.format_message())), nl=False)
            sys.exit(INPUT_ERROR)


@click.group(cls=ReportingGroup)
@click.option("-v", "--verbose", count=True, help="-v for progress, -vv for debug output.")
def cli(verbose):
    """Linearization discs of indifferent fixed points over Q((T))."""
    setup_logging(verbose)


@cli.command("estimate-disc")
@common_options
def estimate_disc(**options):
    """Lower and upper bounds for the linearization disc, with witnesses."""
    execute("estimate-disc", **options)


@cli.command("solve-conjugacy")
@common_options
@click.option("--method", type=click.Choice(METHODS), default="composition", show_default=True)
def solve_conjugacy(**options):
    """Coefficients of g with g∘f = λg."""
    execute("solve-conjugacy", **options)


@cli.command("check-bounds")
@common_options
def check_bounds(**options):
    """Check the coefficient bound, injectivity and the conjugacy on sample points."""
    execute("check-bounds", **options)


@cli.command("distance-profile")
@common_options
@click.option("--lambda", "lambda_text", help="Multiplier as a series, e.g. 1+T.")
def distance_profile(**options):
    """v(1 − λⁿ) for n = 1..N."""
    execute("distance-profile", **options)


@cli.command("newton-polygon")
@common_options
@click.option("--poly", "poly_text", help='Polynomial as "c0 = T^3; c1 = -T-T^2; c2 = 1".')
def newton_polygon(**options):
    """Newton polygon and root valuations of a polynomial over Q((T))."""
    execute("newton-polygon", **options)


@cli.command("witness")
@common_options
def witness(**options):
    """Points showing the lower bound cannot be enlarged."""
    execute("witness", **options)


if __name__ == "__main__":
    cli()

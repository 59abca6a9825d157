"""``gsx <experiment> --config cfg.json [--out DIR] [--seed N] [--trials N]``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import sys

import click

from .errors import ConfigError, NumericalError, ParseError
from .experiments import EXPERIMENTS, execute, load_config

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _run(experiment: str, config: str, out: str, seed: int | None, trials: int | None) -> int:
    try:
        cfg = load_config(config, experiment)
        if seed is not None:
            cfg.seed = seed
        if trials is not None:
            if trials < 1:
                raise ConfigError("--trials must be >= 1")
            cfg.trials = trials
        result, paths = execute(cfg, out)
    except NumericalError as exc:
        click.echo(f"numerical failure ({type(exc).__name__}): {exc}", err=True)
        return EXIT_NUMERICAL
    except (ConfigError, ParseError, OSError, ValueError) as exc:
        # remaining ValueErrors come from inputs the config described
        click.echo(f"config error: {exc}", err=True)
        return EXIT_CONFIG
    for p in paths:
        click.echo(str(p))
    return 0


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(package_name="gsx", prog_name="gsx", message="%(prog)s %(version)s")
def main():
    """Graph shift operator experiments. GSX_THREADS caps worker threads."""


def _command(slug: str):
    @click.option("--config", "config", required=True, type=click.Path(dir_okay=False),
                  help="JSON experiment config.")
    @click.option("--out", default="gsx-out", show_default=True, type=click.Path(file_okay=False),
                  help="Output directory.")
    @click.option("--seed", type=click.IntRange(0, 2**64 - 1), default=None,
                  help="Master seed for per-trial noise.")
    @click.option("--trials", type=int, default=None, help="Override the trial count.")
    def cmd(config, out, seed, trials):
        sys.exit(_run(slug, config, out, seed, trials))

    cmd.__doc__ = f"Run the {EXPERIMENTS[slug]} experiment."
    return main.command(name=slug)(cmd)


for _slug in EXPERIMENTS:
    _command(_slug)


if __name__ == "__main__":
    main()

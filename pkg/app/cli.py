"""
AV Keyword Miner - Command Line Interface
==========================================

Cara menjalankan:
    cd app
    python cli.py synth --out-reports data/reports.ndjson --out-gt data/groundtruth.csv
    python cli.py mine --reports data/reports.ndjson --state data/state --out data/keywords.tsv
    python cli.py update --reports data/new.ndjson --state data/state --out data/keywords.tsv
    python cli.py eval --out data/keywords.tsv --gt data/groundtruth.csv

Exit code: 0 sukses, 1 usage/config error, 2 data error, 3 internal error.
"""
import logging
import os
import sys
from pathlib import Path
from typing import Optional

# Add app directory to path for imports
APP_DIR = Path(__file__).resolve().parent
sys.path.insert(0, str(APP_DIR))

import click

from repositories.groundtruth_repository import GroundTruthRepository
from repositories.report_repository import write_report_file
from schemas.config import RunConfig
from schemas.report import Corpus
from services.evaluation_service import EvaluationService, format_subsample_table, format_table, run_subsample
from services.ingestion_service import add_reports
from services.pipeline_service import MiningService
from services.synth_service import SynthParams, synth_corpus
from utils.errors import ConfigError, InvariantViolation, MinerError

logger = logging.getLogger("cli")

EXIT_USAGE = 1
EXIT_INTERNAL = 3


def configure_logging(verbose: bool) -> None:
    """Log ke stderr; stdout hanya untuk hasil command."""
    level = logging.DEBUG if verbose else logging.INFO
    root = logging.getLogger()
    if not root.handlers:
        logging.basicConfig(level=level, stream=sys.stderr,
                            format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    root.setLevel(level)


def load_config(config_path: Optional[str], **overrides) -> RunConfig:
    """Default < file config < flag CLI."""
    config = RunConfig.from_file(config_path) if config_path else RunConfig()
    return config.with_overrides(**overrides)


class MinerGroup(click.Group):
    """click.Group dengan pemetaan exception ke exit code pipeline."""

    def main(self, args=None, prog_name=None, complete_var=None, standalone_mode=True, **extra):
        try:
            rv = super().main(args=args, prog_name=prog_name, complete_var=complete_var,
                              standalone_mode=False, **extra)
            code = rv if isinstance(rv, int) else 0
        except click.ClickException as e:
            e.show()
            code = EXIT_USAGE
        except click.Abort:
            click.echo("Aborted!", err=True)
            code = EXIT_USAGE
        except (MinerError, InvariantViolation) as e:
            click.echo(f"Error: {e}", err=True)
            code = e.exit_code
        except Exception as e:
            logger.exception("Internal error")
            click.echo(f"Internal error: {e}", err=True)
            code = EXIT_INTERNAL
        if standalone_mode:
            sys.exit(code)
        return code


def run_options(func):
    """Option bersama untuk command yang menjalankan pipeline."""
    options = [
        click.option("--config", "config_path", type=click.Path(dir_okay=False), help="File TOML key = value"),
        click.option("--top-n", type=int, default=None, help="Jumlah keyword per sampel"),
        click.option("--seed", type=int, default=None, help="Seed training (default 0)"),
        click.option("--threads", type=int, default=None, help="Jumlah worker; 1 = mode deterministik"),
        click.option("--ascii-sep", is_flag=True, default=False, help="Pakai '||' sebagai pemisah output"),
        click.option("--format", "input_format", type=click.Choice(["ndjson", "vt"]), default=None,
                     help="Format file report"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _config_from(config_path, top_n, seed, threads, ascii_sep, input_format, **paths) -> RunConfig:
    return load_config(config_path, top_n=top_n, seed=seed, threads=threads,
                       ascii_separator=True if ascii_sep else None, input_format=input_format, **paths)


@click.group(cls=MinerGroup)
@click.option("--verbose", "-v", is_flag=True, help="Log level DEBUG")
def cli(verbose: bool):
    """Mining keyword malware dari label anti-virus multi-vendor."""
    configure_logging(verbose)


# ============ mine ============

@cli.command()
@click.option("--reports", "reports_path", required=True, help="File report NDJSON / VirusTotal")
@click.option("--out", "output_path", default=None, help="File output TSV")
@click.option("--state", "state_dir", default=None, help="State directory (corpus + model)")
@click.option("--skip-duplicates", is_flag=True, help="Lewati sample_id duplikat")
@run_options
def mine(reports_path, output_path, state_dir, skip_duplicates, **options):
    """Jalankan pipeline penuh dan tulis keyword per sampel."""
    config = _config_from(**options, reports_path=reports_path, state_dir=state_dir, output_path=output_path)
    if not output_path and not state_dir:
        raise ConfigError("Butuh --out atau --state")
    result = MiningService(config).mine(reports_path, state_dir, output_path, skip_duplicates)
    click.echo(f"{len(result.ranked)} sampel -> {output_path or state_dir}")


# ============ update ============

@cli.command()
@click.option("--reports", "reports_path", required=True, help="File report baru")
@click.option("--state", "state_dir", required=True, help="State directory hasil mine")
@click.option("--out", "output_path", default=None, help="File output TSV")
@click.option("--skip-duplicates", is_flag=True, help="Lewati sample_id yang sudah ada")
@run_options
def update(reports_path, state_dir, output_path, skip_duplicates, **options):
    """Tambah report ke state lalu latih ulang atas corpus gabungan."""
    config = _config_from(**options, reports_path=reports_path, state_dir=state_dir, output_path=output_path)
    result = MiningService(config).update(state_dir, reports_path, output_path, skip_duplicates)
    click.echo(f"corpus v{result.corpus.version}: {len(result.ranked)} sampel -> {output_path or state_dir}")


# ============ eval ============

@cli.command(name="eval")
@click.option("--out", "outputs_path", required=True, help="File output TSV hasil mine/update")
@click.option("--gt", "groundtruth_path", required=True, help="Ground truth CSV (sample_id,family)")
@click.option("--json", "as_json", is_flag=True, help="Cetak EvalReport sebagai JSON")
def evaluate_cmd(outputs_path, groundtruth_path, as_json):
    """Akurasi Top-1..Top-10 terhadap ground truth."""
    report = EvaluationService(outputs_path, groundtruth_path).run()
    click.echo(report.model_dump_json(indent=2) if as_json else format_table(report))


# ============ synth ============

@cli.command()
@click.option("--families", type=int, default=20, show_default=True)
@click.option("--samples", type=int, default=500, show_default=True)
@click.option("--vendors", type=int, default=30, show_default=True)
@click.option("--noise", type=float, default=0.3, show_default=True)
@click.option("--misspell", type=float, default=0.1, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out-reports", required=True, help="File NDJSON output")
@click.option("--out-gt", required=True, help="File ground truth CSV output")
def synth(families, samples, vendors, noise, misspell, seed, out_reports, out_gt):
    """Generate corpus sintetis beserta ground truth."""
    params = SynthParams.build(families=families, samples=samples, vendors=vendors,
                               noise=noise, misspell=misspell, seed=seed)
    corpus = synth_corpus(params)
    write_report_file(out_reports, corpus.reports)
    GroundTruthRepository(out_gt).save(corpus.truth)
    click.echo(f"{len(corpus.reports)} report -> {out_reports}, ground truth -> {out_gt}")


# ============ subsample ============

@cli.command()
@click.option("--reports", "reports_path", required=True)
@click.option("--gt", "groundtruth_path", required=True)
@click.option("--fractions", default="0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9", show_default=True)
@click.option("--repeats", type=int, default=10, show_default=True)
@run_options
def subsample(reports_path, groundtruth_path, fractions, repeats, **options):
    """Sensitivitas akurasi terhadap jumlah sampel."""
    config = _config_from(**options, reports_path=reports_path)
    try:
        fraction_list = [float(f) for f in fractions.split(",") if f.strip()]
    except ValueError:
        raise ConfigError(f"--fractions tidak valid: '{fractions}'") from None

    service = MiningService(config)
    corpus = add_reports(Corpus(), service.read_reports(reports_path))
    truth = GroundTruthRepository(groundtruth_path).load()
    report = run_subsample(config, corpus, truth, fraction_list, repeats)
    click.echo(format_subsample_table(report))


# ============ serve ============

@cli.command()
@click.option("--state", "state_dir", required=True, help="State directory hasil mine")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(state_dir, host, port):
    """Jalankan query API read-only."""
    import uvicorn

    os.environ["MINER_STATE_DIR"] = str(Path(state_dir).resolve())
    uvicorn.run("main:app", host=host, port=port, log_level="info")


if __name__ == "__main__":
    cli()

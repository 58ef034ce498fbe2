"""Command-line interface.

Subcommands cover the full pipeline: assess a chart against a trained model,
train and evaluate models on annotation corpora, generate suggestions for a
group, build synthetic planted corpora, and run the HTTP service. Failures
print a JSON error object to stderr and exit with a code per error class.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from . import report as report_mod
from .advisor import generate_suggestions
from .annotations import extract_positive_pairs, load_corpus, sample_negative_pairs, save_corpus
from .chart.parse import parse_chart
from .effects import extract_features
from .errors import NotFound, PsightError
from .evaluation import PlantedConfig, evaluate_corpus, generate_planted_corpus
from .model import ModelConfig, load_model, save_model, train as train_model

_EXIT_CODES = {
    "internal": 1,
    "not_found": 2,
    "bad_request": 3,
    "conflict": 4,
    "unprocessable": 5,
}


def _fail(code: str, message: str, detail: str) -> None:
    payload = {"code": code, "message": message, "detail": detail}
    click.echo(json.dumps(payload), err=True)
    sys.exit(_EXIT_CODES.get(code, 1))


def handle_errors(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except PsightError as exc:
            _fail(exc.api_code, str(exc), type(exc).__name__)
        except FileNotFoundError as exc:
            _fail("not_found", str(exc), "FileNotFoundError")
        except (ValueError, KeyError, json.JSONDecodeError) as exc:
            _fail("bad_request", str(exc), type(exc).__name__)
    return wrapper


def _write_json(payload: dict, out: str | None) -> None:
    data = report_mod.serialize_json(payload)
    if out:
        Path(out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)


def _load_model_arg(path: str | None):
    if path is None:
        raise NotFound("no model given (use --model or set PSIGHT_MODEL)")
    if not Path(path).exists():
        raise NotFound(f"model file {path!r} does not exist")
    return load_model(path)


_model_option = click.option(
    "--model", "model_path", envvar="PSIGHT_MODEL", default=None,
    help="Path to a trained model file (defaults to $PSIGHT_MODEL).")


@click.group()
def main() -> None:
    """Perceptual grouping assessment and design suggestions for SVG charts."""


@main.command()
@click.option("--svg", "svg_path", required=True, type=click.Path())
@_model_option
@click.option("--scope-exclude", "excluded", default="",
              help="Comma-separated element ids to drop from the scope.")
@click.option("--json", "json_out", default=None, type=click.Path(),
              help="Write the report here instead of stdout.")
@handle_errors
def assess(svg_path: str, model_path: str | None, excluded: str,
           json_out: str | None) -> None:
    """Identify patterns in a chart and score their salience."""
    model = _load_model_arg(model_path)
    doc = parse_chart(Path(svg_path).read_text())
    excluded_ids = [v for v in excluded.split(",") if v] if excluded else []
    _write_json(report_mod.assess(model, doc, excluded_ids), json_out)


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path())
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--config", "config_path", default=None, type=click.Path(),
              help="JSON file of model hyperparameters.")
@click.option("--seed", default=None, type=int, help="Override the config seed.")
@handle_errors
def train(corpus_path: str, out_path: str, config_path: str | None,
          seed: int | None) -> None:
    """Train a perception model on an annotation corpus."""
    corpus = load_corpus(corpus_path)
    overrides = {}
    if config_path:
        overrides = json.loads(Path(config_path).read_text())
    if seed is not None:
        overrides["seed"] = seed
    config = ModelConfig(**overrides)
    features = {cid: extract_features(doc) for cid, doc in corpus.charts.items()}
    positives = extract_positive_pairs(corpus)
    negatives, warnings = sample_negative_pairs(corpus, features)
    for warning in warnings:
        click.echo(f"warning: {warning}", err=True)
    model, losses = train_model(config, positives + negatives, features)
    save_model(model, out_path)
    losses_path = Path(out_path).with_suffix(Path(out_path).suffix + ".losses.csv")
    with open(losses_path, "w") as handle:
        handle.write("epoch,loss\n")
        for epoch, loss in enumerate(losses):
            handle.write(f"{epoch},{loss:.12g}\n")
    click.echo(f"trained {len(positives)} positive / {len(negatives)} negative "
               f"pairs over {config.epochs} epochs -> {out_path}")


@main.command()
@click.option("--corpus", "corpus_path", required=True, type=click.Path())
@_model_option
@click.option("--json", "json_out", default=None, type=click.Path())
@handle_errors
def evaluate(corpus_path: str, model_path: str | None,
             json_out: str | None) -> None:
    """Score a model against a corpus with EGA, PCR, and AC."""
    model = _load_model_arg(model_path)
    corpus = load_corpus(corpus_path)
    report = evaluate_corpus(model, corpus)
    payload = {
        "charts": [
            {
                "chart_id": run.chart_id,
                "k": run.k,
                "ega": run.ega,
                "pcr": run.pcr,
                "ac": run.ac,
                "flags": list(run.flags),
            }
            for run in report.runs
        ],
        "overall": {
            "ega": {"mean": report.mean_ega, "std": report.std_ega},
            "pcr": {"mean": report.mean_pcr, "std": report.std_pcr},
            "ac": {"mean": report.mean_ac, "std": report.std_ac},
        },
    }
    _write_json(payload, json_out)


@main.command()
@click.option("--svg", "svg_path", required=True, type=click.Path())
@_model_option
@click.option("--group", required=True,
              help="Comma-separated element ids of the target group.")
@click.option("--scope-exclude", "excluded", default="")
@click.option("--json", "json_out", default=None, type=click.Path())
@handle_errors
def suggest(svg_path: str, model_path: str | None, group: str, excluded: str,
            json_out: str | None) -> None:
    """Generate ranked suggestions to strengthen a group's salience."""
    model = _load_model_arg(model_path)
    doc = parse_chart(Path(svg_path).read_text())
    excluded_ids = [v for v in excluded.split(",") if v] if excluded else []
    scope = report_mod.scope_elements(doc, excluded_ids)
    features = extract_features(doc, scope)
    group_ids = frozenset(v for v in group.split(",") if v)
    suggestions = generate_suggestions(model, doc, features, group_ids)
    _write_json(report_mod.suggestions_to_dict(suggestions), json_out)


@main.command("gen-corpus")
@click.option("--config", "config_path", default=None, type=click.Path(),
              help="JSON file of planted-corpus settings.")
@click.option("--out", "out_dir", required=True, type=click.Path())
@handle_errors
def gen_corpus(config_path: str | None, out_dir: str) -> None:
    """Generate a synthetic planted-grouping corpus."""
    overrides = {}
    if config_path:
        overrides = json.loads(Path(config_path).read_text())
    for key in ("n_groups_per_chart", "elements_per_group"):
        if isinstance(overrides.get(key), list):
            overrides[key] = tuple(overrides[key])
    config = PlantedConfig(**overrides)
    corpus = generate_planted_corpus(config)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_corpus(corpus, out / "corpus.json")
    click.echo(f"wrote {len(corpus.charts)} charts and "
               f"{len(corpus.annotations)} annotations to {out}")


@main.command()
@_model_option
@click.option("--port", default=8000, type=int)
@click.option("--host", default="127.0.0.1")
@click.option("--static", "static_dir", default=None, type=click.Path(),
              help="Directory of built UI assets to serve at /.")
@click.option("--session-dir", default=None, type=click.Path(),
              help="Persist session revisions and reports here.")
@handle_errors
def serve(model_path: str | None, port: int, host: str,
          static_dir: str | None, session_dir: str | None) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    model = _load_model_arg(model_path)
    app = create_app(model, static_dir=static_dir, session_dir=session_dir)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()

"""Batch command-line front end.

Commands: features (extract image measures), fit (regression tables),
periods (per-period fits), summarize (descriptive statistics), synth
(planted-coefficient validation corpora).

Defaults can live in one JSON config file (--config) with per-command
sections; explicit flags win over the file. Exit codes: 0 success or
partial-with-output, 2 extraction produced no output, 3 configuration or
schema error, 4 numerical failure.
"""
from __future__ import annotations

import functools
import json
from pathlib import Path
from typing import Optional

import click

from .errors import (
    ArtfeatError,
    CollinearColumnsError,
    DomainError,
    ImageTooSmallError,
    NoChromaticPixelsError,
    NonPositiveValueError,
    OutOfRangeError,
    RankDeficientError,
    SpecError,
)
from .features import ExtractionConfig
from .corpus import (
    DEFAULT_VARIABLES,
    PlantSpec,
    extract_batch,
    generate_synthetic,
    list_image_files,
    load_corpus,
    save_features_csv,
    save_records_csv,
    summary_statistics,
)
from .hedonic import (
    load_spec_file,
    period_specs,
    render_markdown,
    render_tsv,
    run_specification_suite,
)
from .manifest import RunManifest, hash_inputs

EXIT_OK = 0
EXIT_NO_DECODE = 2
EXIT_CONFIG = 3
EXIT_NUMERIC = 4

NUMERIC_ERRORS = (
    RankDeficientError,
    CollinearColumnsError,
    NonPositiveValueError,
    NoChromaticPixelsError,
    DomainError,
    OutOfRangeError,
    ImageTooSmallError,
)

CONFIG_SECTIONS = ("extraction", "fit", "periods", "summarize", "synth")

DEFAULT_YEAR_RANGE = "2000:2018"


def _exit_code_for(exc: ArtfeatError) -> int:
    return EXIT_NUMERIC if isinstance(exc, NUMERIC_ERRORS) else EXIT_CONFIG


def _guard(fn):
    """Map raised package errors onto the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except ArtfeatError as exc:
            click.echo(f"error: {exc}", err=True)
            return _exit_code_for(exc)

    return wrapper


class _Options:
    """Flag -> config-file -> default resolution for one command section."""

    def __init__(self, config: dict, section: str):
        self.name = section
        self.section = config.get(section, {})
        if not isinstance(self.section, dict):
            raise SpecError(f"config section {section!r} must be an object")
        self.seen: set[str] = set()

    def get(self, key: str, flag_value, default):
        self.seen.add(key)
        if flag_value is not None:
            return flag_value
        return self.section.get(key, default)

    def check(self) -> None:
        unknown = sorted(set(self.section) - self.seen)
        if unknown:
            raise SpecError(f"config section {self.name!r}: unknown key(s): {', '.join(unknown)}")


def _load_config(path: Optional[str]) -> dict:
    if path is None:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            config = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON: {exc}") from exc
    if not isinstance(config, dict):
        raise SpecError(f"{path}: config must be a JSON object of command sections")
    unknown = sorted(set(config) - set(CONFIG_SECTIONS))
    if unknown:
        raise SpecError(f"{path}: unknown config section(s): {', '.join(unknown)}")
    return config


def _extraction_config(
    config: dict,
    resize: Optional[str] = None,
    edge_threshold: Optional[float] = None,
    hue_mode: Optional[str] = None,
    hue_scale: Optional[float] = None,
) -> ExtractionConfig:
    opts = _Options(config, "extraction")
    resize = opts.get("resize", resize, 512)
    edge_threshold = opts.get("edge_threshold", edge_threshold, 0.25)
    hue_mode = opts.get("hue_mode", hue_mode, "standard")
    hue_scale = opts.get("hue_scale", hue_scale, 1.0 / 360.0)
    opts.check()
    if isinstance(resize, str):
        if resize.lower() == "off":
            resize = None
        else:
            try:
                resize = int(resize)
            except ValueError:
                raise SpecError(f"resize must be a pixel count or 'off', got {resize!r}") from None
    try:
        return ExtractionConfig(
            resize_max_side=resize,
            edge_threshold=float(edge_threshold),
            hue_mode=str(hue_mode),
            hue_scale=float(hue_scale),
        )
    except DomainError as exc:
        raise SpecError(f"bad extraction settings: {exc}") from exc


def _parse_year_range(value) -> Optional[tuple[int, int]]:
    if value is None:
        return None
    if isinstance(value, str):
        if value.lower() == "off":
            return None
        lo, sep, hi = value.partition(":")
        if not sep:
            raise SpecError(f"sale year range must look like '2000:2018' or 'off', got {value!r}")
        try:
            return int(lo), int(hi)
        except ValueError:
            raise SpecError(f"sale year range must be integers, got {value!r}") from None
    if isinstance(value, (list, tuple)) and len(value) == 2:
        return int(value[0]), int(value[1])
    raise SpecError(f"sale year range must be 'LO:HI', 'off', or [LO, HI], got {value!r}")


def _pick_format(fmt: Optional[str], out_path: Path) -> str:
    if fmt is not None:
        if fmt not in ("tsv", "md"):
            raise SpecError(f"format must be 'tsv' or 'md', got {fmt!r}")
        return fmt
    return "md" if out_path.suffix.lower() in (".md", ".markdown") else "tsv"


def _write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _load_corpus_for(
    opts: _Options,
    config: dict,
    corpus_path: str,
    features_path: Optional[str],
    sale_year_range: Optional[str],
    exclude_city: tuple[str, ...],
):
    year_range = _parse_year_range(
        opts.get("sale_year_range", sale_year_range, DEFAULT_YEAR_RANGE)
    )
    cities = opts.get("exclude_cities", list(exclude_city) or None, [])
    cfg = _extraction_config(config)
    return load_corpus(
        corpus_path,
        features_path,
        cfg=cfg,
        sale_year_range=year_range,
        exclude_cities=tuple(cities),
    )


@click.group()
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="JSON file of per-command default options; flags win.",
)
@click.pass_context
def cli(ctx, config_path):
    """Painting-effort measures and hedonic price regressions."""
    ctx.obj = _load_config(config_path)


@cli.command("features")
@click.option("--input", "input_path", required=True,
              type=click.Path(exists=True, path_type=Path),
              help="Image file or directory of PNG/JPEG files.")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--resize", default=None, help="Max side in pixels, or 'off'.")
@click.option("--edge-threshold", type=float, default=None)
@click.option("--hue-mode", type=click.Choice(("standard", "paper_literal")), default=None)
@click.option("--hue-scale", type=float, default=None)
@click.option("--threads", type=int, default=None,
              help="Extraction workers (capped by ARTFEAT_THREADS).")
@click.pass_context
@_guard
def cmd_features(ctx, input_path, out_path, resize, edge_threshold, hue_mode, hue_scale, threads):
    """Extract line/color variance features from images into a CSV."""
    cfg = _extraction_config(ctx.obj, resize, edge_threshold, hue_mode, hue_scale)
    paths = list_image_files(input_path) if input_path.is_dir() else [input_path]
    features, failures = extract_batch(paths, cfg, threads)
    for _, reason in failures:
        click.echo(f"error: {reason}", err=True)
    if not features:
        click.echo("error: no input image decoded", err=True)
        return EXIT_NO_DECODE
    out_path.parent.mkdir(parents=True, exist_ok=True)
    save_features_csv(features, out_path)
    RunManifest(
        command="features",
        options={
            "input": str(input_path),
            "out": str(out_path),
            "resize": cfg.resize_max_side,
            "edge_threshold": cfg.edge_threshold,
            "hue_mode": cfg.hue_mode,
            "hue_scale": cfg.hue_scale,
        },
        input_hashes=hash_inputs({p.name: p for p in paths if p.stem in features}),
    ).write(out_path.parent)
    click.echo(
        f"wrote {len(features)} feature row(s) to {out_path}"
        + (f" ({len(failures)} file(s) failed)" if failures else ""),
        err=True,
    )
    return EXIT_OK


def _run_suite_command(
    ctx, command: str, corpus_path, features_path, specs, out_path, fmt,
    sale_year_range, exclude_city, spec_input: Optional[str],
):
    opts = _Options(ctx.obj, command)
    fmt = _pick_format(opts.get("format", fmt, None), out_path)
    corpus, report = _load_corpus_for(
        opts, ctx.obj, corpus_path, features_path, sale_year_range, exclude_city
    )
    opts.check()
    if not corpus.joined():
        raise SpecError("no records with joined features; nothing to fit")
    entries = run_specification_suite(corpus, specs)
    for entry in entries:
        if entry.error is not None:
            note = "skipped" if "empty subsample" in entry.error else "failed"
            click.echo(f"{entry.name} {note}: {entry.error}", err=True)
    text = render_markdown(entries) if fmt == "md" else render_tsv(entries)
    _write_text(out_path, text)
    _write_text(out_path.parent / "exclusions.txt", report.render())
    inputs = {"records": corpus_path}
    if features_path and Path(features_path).is_file():
        inputs["features"] = features_path
    if spec_input:
        inputs["spec"] = spec_input
    RunManifest(
        command=command,
        options={
            "corpus": str(corpus_path),
            "features": str(features_path),
            "out": str(out_path),
            "format": fmt,
        },
        input_hashes=hash_inputs(inputs),
    ).write(out_path.parent)
    fitted = sum(1 for e in entries if e.fit is not None)
    click.echo(f"fitted {fitted}/{len(entries)} specification(s); table at {out_path}", err=True)
    if fitted == 0:
        return EXIT_NUMERIC
    return EXIT_OK


@cli.command("fit")
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--features", "features_path", required=True, type=click.Path(exists=True),
              help="Features CSV, or an image directory to extract from.")
@click.option("--spec", "spec_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Model spec JSON: one spec object or {'suite': [...]}.")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--format", "fmt", type=click.Choice(("tsv", "md")), default=None,
              help="Default: by --out extension (md for .md, else tsv).")
@click.option("--sale-year-range", default=None, help="'LO:HI' or 'off'.")
@click.option("--exclude-city", multiple=True, help="Drop records sold in this city.")
@click.pass_context
@_guard
def cmd_fit(ctx, corpus_path, features_path, spec_path, out_path, fmt,
            sale_year_range, exclude_city):
    """Fit model spec(s) against a corpus and write a coefficient table."""
    specs = load_spec_file(spec_path)
    return _run_suite_command(
        ctx, "fit", corpus_path, features_path, specs, out_path, fmt,
        sale_year_range, exclude_city, spec_input=spec_path,
    )


@cli.command("periods")
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--features", "features_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--format", "fmt", type=click.Choice(("tsv", "md")), default=None)
@click.option("--sale-year-range", default=None)
@click.option("--exclude-city", multiple=True)
@click.pass_context
@_guard
def cmd_periods(ctx, corpus_path, features_path, out_path, fmt, sale_year_range, exclude_city):
    """Fit the effort-only model on each career-period subsample."""
    return _run_suite_command(
        ctx, "periods", corpus_path, features_path, period_specs(), out_path, fmt,
        sale_year_range, exclude_city, spec_input=None,
    )


def _render_summary_tsv(rows) -> str:
    lines = ["variable\tn\tmean\tsd\tmin\tmax"]
    lines += [
        f"{r.name}\t{r.n}\t{r.mean!r}\t{r.sd!r}\t{r.minimum!r}\t{r.maximum!r}" for r in rows
    ]
    return "\n".join(lines) + "\n"


def _render_summary_md(rows) -> str:
    headers = ["variable", "n", "mean", "sd", "min", "max"]
    table = [headers] + [
        [r.name, str(r.n), f"{r.mean:.4g}", f"{r.sd:.4g}", f"{r.minimum:.4g}", f"{r.maximum:.4g}"]
        for r in rows
    ]
    widths = [max(len(row[i]) for row in table) for i in range(len(headers))]
    out = ["| " + " | ".join(c.ljust(w) for c, w in zip(row, widths)) + " |" for row in table]
    out.insert(1, "|" + "|".join("-" * (w + 2) for w in widths) + "|")
    return "\n".join(out) + "\n"


@cli.command("summarize")
@click.option("--corpus", "corpus_path", required=True,
              type=click.Path(exists=True, dir_okay=False))
@click.option("--features", "features_path", default=None, type=click.Path(exists=True))
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--format", "fmt", type=click.Choice(("tsv", "md")), default=None)
@click.option("--variables", default=None, help="Comma-separated variable list.")
@click.option("--sale-year-range", default=None)
@click.option("--exclude-city", multiple=True)
@click.pass_context
@_guard
def cmd_summarize(ctx, corpus_path, features_path, out_path, fmt, variables,
                  sale_year_range, exclude_city):
    """Write a descriptive-statistics table for a corpus."""
    opts = _Options(ctx.obj, "summarize")
    fmt = _pick_format(opts.get("format", fmt, None), out_path)
    corpus, report = _load_corpus_for(
        opts, ctx.obj, corpus_path, features_path, sale_year_range, exclude_city
    )
    variables = opts.get("variables", variables, None)
    opts.check()
    if isinstance(variables, str):
        variables = tuple(v.strip() for v in variables.split(",") if v.strip())
    if variables is None:
        variables = DEFAULT_VARIABLES
        if not corpus.features:
            feature_vars = ("Lline", "Lcolor", "line_variance", "color_variance")
            variables = tuple(v for v in variables if v not in feature_vars)
    rows = summary_statistics(corpus, variables)
    text = _render_summary_md(rows) if fmt == "md" else _render_summary_tsv(rows)
    _write_text(out_path, text)
    _write_text(out_path.parent / "exclusions.txt", report.render())
    inputs = {"records": corpus_path}
    if features_path and Path(features_path).is_file():
        inputs["features"] = features_path
    RunManifest(
        command="summarize",
        options={
            "corpus": str(corpus_path),
            "features": str(features_path),
            "out": str(out_path),
            "format": fmt,
            "variables": list(variables),
        },
        input_hashes=hash_inputs(inputs),
    ).write(out_path.parent)
    click.echo(f"wrote {len(rows)} summary row(s) to {out_path}", err=True)
    return EXIT_OK


@cli.command("synth")
@click.option("--n", "n", type=int, default=None)
@click.option("--seed", type=int, default=None)
@click.option("--plant", "plant_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="JSON object mapping term names to planted coefficients.")
@click.option("--noise-sd", type=float, default=None)
@click.option("--out", "out_dir", required=True, type=click.Path(file_okay=False, path_type=Path))
@click.option("--images/--no-images", "images", default=None,
              help="Render a synthetic painting per record and extract its features.")
@click.option("--image-size", type=int, default=None)
@click.option("--surface-scale", type=float, default=None)
@click.pass_context
@_guard
def cmd_synth(ctx, n, seed, plant_path, noise_sd, out_dir, images, image_size, surface_scale):
    """Generate a synthetic corpus with known planted coefficients."""
    opts = _Options(ctx.obj, "synth")
    n = opts.get("n", n, None)
    seed = opts.get("seed", seed, None)
    noise_sd = opts.get("noise_sd", noise_sd, None)
    images = bool(opts.get("images", images, False))
    image_size = int(opts.get("image_size", image_size, 96))
    surface_scale = float(opts.get("surface_scale", surface_scale, 1000.0))
    opts.check()
    for label, value in (("--n", n), ("--seed", seed), ("--noise-sd", noise_sd)):
        if value is None:
            raise SpecError(f"{label} is required (flag or config)")
    try:
        with open(plant_path, encoding="utf-8") as fh:
            plant_data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{plant_path}: invalid JSON: {exc}") from exc
    if not isinstance(plant_data, dict):
        raise SpecError(f"{plant_path}: plant spec must be a JSON object of coefficients")
    plant = PlantSpec(plant_data)

    cfg = _extraction_config(ctx.obj)
    corpus = generate_synthetic(
        int(n), plant, float(noise_sd), int(seed),
        image_dir=(out_dir / "images") if images else None,
        cfg=cfg,
        surface_scale=surface_scale,
        image_size=image_size,
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    save_records_csv(corpus.records, out_dir / "records.csv")
    save_features_csv(corpus.features, out_dir / "features.csv")
    RunManifest(
        command="synth",
        options={
            "n": int(n),
            "noise_sd": float(noise_sd),
            "images": images,
            "image_size": image_size,
            "surface_scale": surface_scale,
            "out": str(out_dir),
        },
        input_hashes=hash_inputs({"plant": plant_path}),
        seed=int(seed),
    ).write(out_dir)
    click.echo(f"wrote {len(corpus)} synthetic records to {out_dir}", err=True)
    return EXIT_OK


def main(argv=None) -> int:
    """Entry point returning the documented exit codes."""
    try:
        rv = cli.main(args=argv, standalone_mode=False)
    except click.exceptions.Exit as exc:
        return int(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        return EXIT_CONFIG
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 130
    except ArtfeatError as exc:
        click.echo(f"error: {exc}", err=True)
        return _exit_code_for(exc)
    return rv if isinstance(rv, int) else EXIT_OK

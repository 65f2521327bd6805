"""Command-line interface for the full pipeline.

Subcommands: synth, profile, build-store, evaluate-baselines, recommend,
evaluate, table. Exit codes: 0 success, 1 domain error, 2 usage error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import baselines, store as store_mod
from .errors import TsAdvisorError
from .recommend import hit_ratio_at_k, ndcg_at_k, recommend as run_recommend
from .profiling import ProfileConfig, profile_set, save_profiles, load_profiles
from .series import SeriesSet, SplitSpec, TimeSeries, load_csv, save_csv
from .synth import SynthConfig, generate_dataset, save_provenance


def _check_overwrite(path: str, force: bool) -> None:
    if Path(path).exists() and not force:
        raise TsAdvisorError(f"{path} exists; pass --force to overwrite")


@click.group()
def main() -> None:
    """Time series profiling, synthesis and model recommendation."""


def _run(fn, *args, **kwargs):
    try:
        fn(*args, **kwargs)
    except TsAdvisorError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


@main.command()
@click.option("--n", "n_series", type=int, default=200, show_default=True)
@click.option("--length", type=int, default=1024, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--out", type=click.Path(), required=True)
@click.option("--provenance-out", type=click.Path(), default=None)
@click.option("--force", is_flag=True)
def synth(n_series, length, seed, out, provenance_out, force):
    """Generate synthetic series from random kernel compositions."""

    def go():
        _check_overwrite(out, force)
        config = SynthConfig(n_series=n_series, length=length, seed=seed)
        dataset, provenance = generate_dataset(config)
        save_csv(dataset, out)
        if provenance_out:
            _check_overwrite(provenance_out, force)
            save_provenance(provenance, provenance_out)
        click.echo(f"wrote {len(dataset)} series of length {length} to {out}")

    _run(go)


def _history_prefix(series_set: SeriesSet, spec: SplitSpec) -> SeriesSet:
    """Train+validation prefix of each series (the history segment)."""
    out = []
    for ts in series_set:
        L = len(ts)
        n_hist = int(L * spec.train_ratio) + int(L * spec.val_ratio)
        out.append(TimeSeries(ts.id, ts.values[:n_hist]))
    return SeriesSet(tuple(out))


@main.command("profile")
@click.option("--data", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(), required=True)
@click.option("--segment", type=click.Choice(["full", "history"]), default="full",
              show_default=True, help="Profile whole series or the train+val prefix.")
@click.option("--threads", type=int, default=1, show_default=True)
@click.option("--force", is_flag=True)
def profile_cmd(data, out, segment, threads, force):
    """Compute the property profile of every series in a CSV."""

    def go():
        _check_overwrite(out, force)
        dataset = load_csv(data)
        if segment == "history":
            dataset = _history_prefix(dataset, SplitSpec())
        config = ProfileConfig()
        profiles = profile_set(dataset, config, workers=threads)
        save_profiles(profiles, out, config)
        click.echo(f"profiled {len(profiles)} series -> {out}")

    _run(go)


@main.command("build-store")
@click.option("--profiles", "profiles_path", type=click.Path(exists=True), required=True)
@click.option("--log", "log_path", type=click.Path(exists=True), required=True)
@click.option("--out", type=click.Path(), required=True)
@click.option("--force", is_flag=True)
def build_store_cmd(profiles_path, log_path, out, force):
    """Build the property-indexed performance store."""

    def go():
        _check_overwrite(out, force)
        profiles = load_profiles(profiles_path)
        log = store_mod.ingest_log(log_path)
        st = store_mod.build_store(profiles, log, config_hash=ProfileConfig().hash())
        store_mod.save_store(st, out)
        click.echo(
            f"store: {len(st.index)} keys, {st.n_series()} series,"
            f" {st.excluded_stationary} stationary excluded -> {out}"
        )

    _run(go)


@main.command("evaluate-baselines")
@click.option("--data", type=click.Path(exists=True), required=True)
@click.option("--history", "history_len", type=int, default=336, show_default=True)
@click.option("--horizon", type=int, default=96, show_default=True)
@click.option("--stride", type=int, default=1, show_default=True)
@click.option("--models", default="hi,naive_mean,seasonal_naive,ar,linear", show_default=True)
@click.option("--out", type=click.Path(), required=True)
@click.option("--force", is_flag=True)
def evaluate_baselines_cmd(data, history_len, horizon, stride, models, out, force):
    """Evaluate local forecasting baselines and write a performance log."""

    def go():
        _check_overwrite(out, force)
        dataset = load_csv(data)
        names = tuple(m.strip() for m in models.split(",") if m.strip())
        for name in names:
            if name not in baselines.MODEL_NAMES:
                raise TsAdvisorError(
                    f"unknown model {name!r}; choose from {','.join(baselines.MODEL_NAMES)}"
                )
        spec = SplitSpec(history_len=history_len, horizon=horizon, stride=stride)
        results, skipped = baselines.evaluate(names, dataset, spec)
        store_mod.write_log(baselines.results_to_log(results), out)
        click.echo(f"{len(results)} rows ({skipped} series skipped) -> {out}")

    _run(go)


@main.command("recommend")
@click.option("--store", "store_path", type=click.Path(exists=True), required=True)
@click.option("--data", type=click.Path(exists=True), required=True)
@click.option("--tau", type=float, default=1.0, show_default=True)
@click.option("--seed", type=int, required=True)
@click.option("--report-out", type=click.Path(), required=True)
@click.option("--force", is_flag=True)
def recommend_cmd(store_path, data, tau, seed, report_out, force):
    """Recommend models for a practical dataset; writes JSON and text."""

    def go():
        text_out = str(Path(report_out).with_suffix(".txt"))
        _check_overwrite(report_out, force)
        _check_overwrite(text_out, force)
        st = store_mod.load_store(store_path)
        queries = load_csv(data)
        report = run_recommend(st, queries, tau=tau, seed=seed)
        Path(report_out).write_text(report.to_json() + "\n", encoding="utf-8")
        Path(text_out).write_text(report.to_text(), encoding="utf-8")
        click.echo(report.to_text())

    _run(go)


@main.command("evaluate")
@click.option("--recommended", type=click.Path(exists=True), required=True,
              help="Report JSON from `recommend`.")
@click.option("--truth", type=click.Path(exists=True), required=True,
              help="Performance-log CSV defining the ground-truth ranking.")
@click.option("--k", "ks", default="3,5,7,10", show_default=True)
def evaluate_cmd(recommended, truth, ks):
    """Score a recommendation against a ground-truth log (HR@K, NDCG@K)."""

    def go():
        with open(recommended, encoding="utf-8") as fh:
            report = json.load(fh)
        rec_list = [entry["model"] for entry in report["ranked_models"]]
        log = store_mod.ingest_log(truth)
        by_model: dict[str, list[tuple[float, float]]] = {}
        for _, record in log:
            by_model.setdefault(record.model, []).append((record.mae, record.mse))
        truth_list = sorted(
            by_model,
            key=lambda m: (
                sum(v[0] for v in by_model[m]) / len(by_model[m]),
                sum(v[1] for v in by_model[m]) / len(by_model[m]),
                m,
            ),
        )
        for k in (int(v) for v in ks.split(",")):
            hr = hit_ratio_at_k(rec_list, truth_list, k)
            ndcg = ndcg_at_k(rec_list, truth_list, k)
            click.echo(f"k={k} hit_ratio={hr:.4f} ndcg={ndcg:.4f}")

    _run(go)


@main.command("table")
@click.option("--profiles", "profiles_path", type=click.Path(exists=True), required=True)
@click.option("--log", "log_path", type=click.Path(exists=True), required=True)
@click.option("--property", "property_name", type=click.Choice(store_mod.PROPERTY_NAMES),
              required=True)
@click.option("--format", "fmt", type=click.Choice(["csv", "md"]), default="md",
              show_default=True)
def table_cmd(profiles_path, log_path, property_name, fmt):
    """Per-property-bin aggregation table of model performance."""

    def go():
        profiles = load_profiles(profiles_path)
        log = store_mod.ingest_log(log_path)
        table = store_mod.aggregate_table(profiles, log, property_name)
        columns = table["columns"]
        if fmt == "csv":
            click.echo("model," + ",".join(f"{c} mean MAE,{c} median MAE" for c in columns))
            for model, cells in table["models"].items():
                row = [model]
                for c in columns:
                    cell = cells.get(c)
                    row += (
                        [f"{cell['mae_mean']:.4f}", f"{cell['mae_median']:.4f}"]
                        if cell
                        else ["", ""]
                    )
                click.echo(",".join(row))
        else:
            header = "| model | " + " | ".join(columns) + " |"
            click.echo(header)
            click.echo("|" + "---|" * (len(columns) + 1))
            for model, cells in table["models"].items():
                row = [model]
                for c in columns:
                    cell = cells.get(c)
                    row.append(
                        f"{cell['mae_mean']:.4f}/{cell['mae_median']:.4f}" if cell else "-"
                    )
                click.echo("| " + " | ".join(row) + " |")

    _run(go)


if __name__ == "__main__":
    main()

"""Command-line interface: exit codes, config precedence, outputs."""
import json
import subprocess
import sys

import numpy as np
import pytest

from artfeat.cli import main
from artfeat.corpus import encode_png, save_features_csv, save_records_csv
from artfeat.corpus.images import resolve_thread_count
from artfeat.features import FeatureVector, RgbImage
from artfeat.manifest import RunManifest

from test_corpus import make_record  # shared record factory


def write_json(path, payload):
    path.write_text(json.dumps(payload))
    return str(path)


def two_hue_png(path):
    """Left red, right green: positive line and color variance."""
    px = np.zeros((8, 8, 3))
    px[:, :4] = (1.0, 0.0, 0.0)
    px[:, 4:] = (0.0, 1.0, 0.0)
    encode_png(RgbImage(px), path)
    return path


def synth_dir(tmp_path, name="corpus", n=200, seed=7, noise="0.0", extra=()):
    plant = write_json(tmp_path / "plant.json",
                       {"const": 6.0, "Lline": 0.537, "Lcolor": 0.404})
    out = tmp_path / name
    code = main(["synth", "--n", str(n), "--seed", str(seed), "--noise-sd", noise,
                 "--plant", plant, "--out", str(out), *extra])
    assert code == 0
    return out


# --- synth ------------------------------------------------------------------

def test_synth_writes_corpus_and_manifest(tmp_path, capsys):
    out = synth_dir(tmp_path)
    assert (out / "records.csv").is_file()
    assert (out / "features.csv").is_file()
    manifest = RunManifest.read(out / "manifest.json")
    assert manifest.command == "synth"
    assert manifest.seed == 7
    assert manifest.options["n"] == 200
    assert "plant" in manifest.input_hashes
    assert "wrote 200 synthetic records" in capsys.readouterr().err


def test_synth_is_reproducible(tmp_path):
    a = synth_dir(tmp_path, "a", seed=11)
    b = synth_dir(tmp_path, "b", seed=11)
    c = synth_dir(tmp_path, "c", seed=12)
    assert (a / "records.csv").read_bytes() == (b / "records.csv").read_bytes()
    assert (a / "features.csv").read_bytes() == (b / "features.csv").read_bytes()
    assert (a / "records.csv").read_bytes() != (c / "records.csv").read_bytes()


def test_synth_requires_n_seed_noise(tmp_path):
    plant = write_json(tmp_path / "plant.json", {"const": 1.0})
    code = main(["synth", "--plant", plant, "--out", str(tmp_path / "x")])
    assert code == 3


def test_synth_rejects_bad_plant(tmp_path, capsys):
    plant = write_json(tmp_path / "plant.json", {"bogus": 1.0})
    code = main(["synth", "--n", "50", "--seed", "1", "--noise-sd", "0",
                 "--plant", plant, "--out", str(tmp_path / "x")])
    assert code == 3  # an unknown plant term is a configuration error
    assert "bogus" in capsys.readouterr().err

    not_object = write_json(tmp_path / "plant2.json", ["const"])
    code = main(["synth", "--n", "50", "--seed", "1", "--noise-sd", "0",
                 "--plant", not_object, "--out", str(tmp_path / "x")])
    assert code == 3


def test_synth_config_supplies_defaults_flags_win(tmp_path):
    plant = write_json(tmp_path / "plant.json", {"const": 1.0})
    config = write_json(tmp_path / "config.json",
                        {"synth": {"n": 50, "seed": 3, "noise_sd": 0.0}})
    out = tmp_path / "from_config"
    assert main(["--config", config, "synth", "--plant", plant, "--out", str(out)]) == 0
    assert len((out / "records.csv").read_text().splitlines()) == 51  # header + 50

    out2 = tmp_path / "flag_wins"
    assert main(["--config", config, "synth", "--plant", plant, "--out", str(out2),
                 "--n", "60"]) == 0
    assert len((out2 / "records.csv").read_text().splitlines()) == 61


def test_unknown_config_keys_rejected(tmp_path):
    plant = write_json(tmp_path / "plant.json", {"const": 1.0})
    bad_section = write_json(tmp_path / "c1.json", {"bogus": {}})
    assert main(["--config", bad_section, "synth", "--n", "50", "--seed", "1",
                 "--noise-sd", "0", "--plant", plant, "--out", str(tmp_path / "x")]) == 3
    bad_key = write_json(tmp_path / "c2.json", {"synth": {"bogus": 1}})
    assert main(["--config", bad_key, "synth", "--n", "50", "--seed", "1",
                 "--noise-sd", "0", "--plant", plant, "--out", str(tmp_path / "x")]) == 3
    not_object = write_json(tmp_path / "c3.json", {"synth": []})
    assert main(["--config", not_object, "synth", "--n", "50", "--seed", "1",
                 "--noise-sd", "0", "--plant", plant, "--out", str(tmp_path / "x")]) == 3


# --- features ---------------------------------------------------------------

def test_features_single_file_and_directory(tmp_path, capsys):
    img_dir = tmp_path / "imgs"
    img_dir.mkdir()
    two_hue_png(img_dir / "one.png")
    two_hue_png(img_dir / "two.png")

    out = tmp_path / "single.csv"
    assert main(["features", "--input", str(img_dir / "one.png"), "--out", str(out)]) == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 2 and lines[1].startswith("one,")

    out_dir = tmp_path / "both.csv"
    assert main(["features", "--input", str(img_dir), "--out", str(out_dir)]) == 0
    ids = [l.split(",")[0] for l in out_dir.read_text().splitlines()[1:]]
    assert ids == ["one", "two"]
    manifest = RunManifest.read(out_dir.parent / "manifest.json")
    assert set(manifest.input_hashes) == {"one.png", "two.png"}
    capsys.readouterr()


def test_features_partial_failure_still_succeeds(tmp_path, capsys):
    img_dir = tmp_path / "imgs"
    img_dir.mkdir()
    two_hue_png(img_dir / "good.png")
    (img_dir / "bad.png").write_bytes(b"junk")
    out = tmp_path / "features.csv"
    assert main(["features", "--input", str(img_dir), "--out", str(out)]) == 0
    err = capsys.readouterr().err
    assert "bad.png" in err and "1 file(s) failed" in err
    assert len(out.read_text().splitlines()) == 2


def test_features_no_decodable_input_exits_2(tmp_path, capsys):
    img_dir = tmp_path / "imgs"
    img_dir.mkdir()
    assert main(["features", "--input", str(img_dir), "--out", str(tmp_path / "f.csv")]) == 2
    (img_dir / "bad.png").write_bytes(b"junk")
    assert main(["features", "--input", str(img_dir), "--out", str(tmp_path / "f.csv")]) == 2
    assert "no input image decoded" in capsys.readouterr().err
    assert not (tmp_path / "f.csv").exists()


def test_features_config_extraction_flags_win(tmp_path):
    img = two_hue_png(tmp_path / "img.png")
    config = write_json(tmp_path / "config.json", {"extraction": {"edge_threshold": 0.9}})

    def extracted_lv(args):
        out = tmp_path / "out.csv"
        assert main([*args, "features", "--input", str(img), "--out", str(out)]) == 0
        return float(out.read_text().splitlines()[1].split(",")[1])

    assert extracted_lv([]) > 0.0                      # default threshold sees the step
    assert extracted_lv(["--config", config]) == 0.0   # config raises it above the step
    out = tmp_path / "out.csv"
    assert main(["--config", config, "features", "--input", str(img),
                 "--out", str(out), "--edge-threshold", "0.25"]) == 0
    assert float(out.read_text().splitlines()[1].split(",")[1]) > 0.0


def test_features_bad_extraction_settings(tmp_path):
    img = two_hue_png(tmp_path / "img.png")
    out = str(tmp_path / "out.csv")
    assert main(["features", "--input", str(img), "--out", out, "--resize", "nope"]) == 3
    assert main(["features", "--input", str(img), "--out", out, "--edge-threshold", "2.0"]) == 3
    assert main(["features", "--input", str(img), "--out", out, "--resize", "off"]) == 0


def test_usage_errors_exit_3(tmp_path):
    assert main(["features", "--input", str(tmp_path / "missing.png"),
                 "--out", str(tmp_path / "o.csv")]) == 3
    assert main(["features"]) == 3          # missing required options
    assert main(["not-a-command"]) == 3
    assert main(["fit", "--corpus", "nope.csv", "--features", "nope.csv",
                 "--spec", "nope.json", "--out", "t.tsv"]) == 3


def test_help_exits_zero(capsys):
    assert main(["--help"]) == 0
    out = capsys.readouterr().out
    for command in ("features", "fit", "periods", "summarize", "synth"):
        assert command in out


# --- fit and periods ----------------------------------------------------------

def test_fit_recovers_noiseless_plant(tmp_path, capsys):
    corpus = synth_dir(tmp_path)
    spec = write_json(tmp_path / "spec.json", {"regressors": ["Lline", "Lcolor"]})
    table = tmp_path / "table.tsv"
    code = main(["fit", "--corpus", str(corpus / "records.csv"),
                 "--features", str(corpus / "features.csv"),
                 "--spec", spec, "--out", str(table)])
    assert code == 0
    assert "fitted 1/1" in capsys.readouterr().err
    rows = {}
    for line in table.read_text().splitlines()[1:]:
        cells = line.split("\t")
        rows[cells[1]] = float(cells[2])
    assert rows["const"] == pytest.approx(6.0, abs=1e-9)
    assert rows["Lline"] == pytest.approx(0.537, abs=1e-9)
    assert rows["Lcolor"] == pytest.approx(0.404, abs=1e-9)
    assert (tmp_path / "exclusions.txt").is_file()
    manifest = RunManifest.read(tmp_path / "manifest.json")
    assert set(manifest.input_hashes) == {"records", "features", "spec"}


def test_fit_format_follows_extension(tmp_path):
    corpus = synth_dir(tmp_path)
    spec = write_json(tmp_path / "spec.json", {"regressors": ["Lline"]})
    base = ["fit", "--corpus", str(corpus / "records.csv"),
            "--features", str(corpus / "features.csv"), "--spec", spec]
    md_out = tmp_path / "table.md"
    assert main([*base, "--out", str(md_out)]) == 0
    assert md_out.read_text().startswith("| term")
    tsv_out = tmp_path / "table.txt"
    assert main([*base, "--out", str(tsv_out)]) == 0
    assert tsv_out.read_text().startswith("spec\tterm")
    forced = tmp_path / "forced.md"
    assert main([*base, "--out", str(forced), "--format", "tsv"]) == 0
    assert forced.read_text().startswith("spec\tterm")


def test_fit_suite_spec_file(tmp_path):
    corpus = synth_dir(tmp_path)
    spec = write_json(tmp_path / "suite.json", {"suite": [
        {"name": "lean", "spec": {"regressors": ["Lline"]}},
        {"name": "full", "spec": {"regressors": ["Lline", "Lcolor", "Surface"]}},
    ]})
    table = tmp_path / "table.tsv"
    assert main(["fit", "--corpus", str(corpus / "records.csv"),
                 "--features", str(corpus / "features.csv"),
                 "--spec", spec, "--out", str(table)]) == 0
    specs = {line.split("\t")[0] for line in table.read_text().splitlines()[1:]}
    assert specs == {"lean", "full"}


def test_fit_bad_spec_exits_3(tmp_path, capsys):
    corpus = synth_dir(tmp_path)
    spec = write_json(tmp_path / "spec.json", {"regressors": ["bogus"]})
    assert main(["fit", "--corpus", str(corpus / "records.csv"),
                 "--features", str(corpus / "features.csv"),
                 "--spec", spec, "--out", str(tmp_path / "t.tsv")]) == 3
    assert "bogus" in capsys.readouterr().err


def test_fit_all_specs_failing_exits_4(tmp_path, capsys):
    records = [make_record(rid, signature=False, price_usd=float(i + 1))
               for i, rid in enumerate("abcd")]
    rec_path = tmp_path / "records.csv"
    save_records_csv(records, rec_path)
    features = {r.id: FeatureVector(0.01 * (i + 1), 0.01 * (i + 1), 1.0, "h")
                for i, r in enumerate(records)}
    feat_path = tmp_path / "features.csv"
    save_features_csv(features, feat_path)
    spec = write_json(tmp_path / "spec.json", {"regressors": ["Lline", "Signature"]})
    table = tmp_path / "t.tsv"
    code = main(["fit", "--corpus", str(rec_path), "--features", str(feat_path),
                 "--spec", spec, "--out", str(table)])
    assert code == 4
    err = capsys.readouterr().err
    assert "model failed" in err and "Signature" in err
    assert table.is_file()  # the table is still written, with the failure note
    assert "# model:" in table.read_text()


def test_fit_sale_year_filter_can_empty_the_corpus(tmp_path, capsys):
    records = [make_record(rid, sale_year=1995 + i, creation_year=1950)
               for i, rid in enumerate("abcd")]
    rec_path = tmp_path / "records.csv"
    save_records_csv(records, rec_path)
    features = {r.id: FeatureVector(0.01 * (i + 1), 0.01, 1.0, "h")
                for i, r in enumerate(records)}
    feat_path = tmp_path / "features.csv"
    save_features_csv(features, feat_path)
    spec = write_json(tmp_path / "spec.json", {"regressors": ["Lline"]})
    base = ["fit", "--corpus", str(rec_path), "--features", str(feat_path),
            "--spec", spec, "--out", str(tmp_path / "t.tsv")]
    assert main(base) == 3  # default 2000:2018 drops every sale
    assert "nothing to fit" in capsys.readouterr().err
    assert main([*base, "--sale-year-range", "off"]) == 0
    assert main([*base, "--sale-year-range", "1995:1998"]) == 0
    assert main([*base, "--sale-year-range", "nope"]) == 3


def test_periods_command(tmp_path, capsys):
    corpus = synth_dir(tmp_path, n=400, seed=23)
    table = tmp_path / "periods.tsv"
    code = main(["periods", "--corpus", str(corpus / "records.csv"),
                 "--features", str(corpus / "features.csv"), "--out", str(table)])
    assert code == 0
    fitted = {line.split("\t")[0] for line in table.read_text().splitlines()[1:]
              if not line.startswith("#")}
    assert len(fitted) >= 6
    assert all(name.startswith("period ") for name in fitted)
    capsys.readouterr()


# --- summarize ----------------------------------------------------------------

def test_summarize_tsv_and_variables(tmp_path):
    corpus = synth_dir(tmp_path)
    out = tmp_path / "summary.tsv"
    assert main(["summarize", "--corpus", str(corpus / "records.csv"),
                 "--features", str(corpus / "features.csv"),
                 "--out", str(out), "--variables", "Lprice, Age"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "variable\tn\tmean\tsd\tmin\tmax"
    assert [l.split("\t")[0] for l in lines[1:]] == ["Lprice", "Age"]
    assert all(len(l.split("\t")) == 6 for l in lines[1:])
    row = lines[1].split("\t")
    assert int(row[1]) == 200
    assert float(row[2]) > 0.0


def test_summarize_defaults_adapt_to_missing_features(tmp_path):
    corpus = synth_dir(tmp_path)
    out = tmp_path / "summary.tsv"
    assert main(["summarize", "--corpus", str(corpus / "records.csv"),
                 "--out", str(out)]) == 0
    names = [l.split("\t")[0] for l in out.read_text().splitlines()[1:]]
    assert "Lprice" in names and "Lline" not in names

    with_features = tmp_path / "with_features.md"
    assert main(["summarize", "--corpus", str(corpus / "records.csv"),
                 "--features", str(corpus / "features.csv"),
                 "--out", str(with_features)]) == 0
    text = with_features.read_text()
    assert text.startswith("| variable") and "Lline" in text


def test_summarize_numeric_failure_exits_4(tmp_path, capsys):
    records = [make_record(rid, price_usd=float(i + 1)) for i, rid in enumerate("abc")]
    rec_path = tmp_path / "records.csv"
    save_records_csv(records, rec_path)
    features = {r.id: FeatureVector(0.0, 0.01, 1.0, "h") for r in records}
    feat_path = tmp_path / "features.csv"
    save_features_csv(features, feat_path)
    assert main(["summarize", "--corpus", str(rec_path), "--features", str(feat_path),
                 "--out", str(tmp_path / "s.tsv"), "--variables", "Lline"]) == 4
    assert "line_variance" in capsys.readouterr().err


def test_summarize_unknown_variable_exits_3(tmp_path):
    corpus = synth_dir(tmp_path)
    assert main(["summarize", "--corpus", str(corpus / "records.csv"),
                 "--out", str(tmp_path / "s.tsv"), "--variables", "bogus"]) == 3


# --- plumbing -----------------------------------------------------------------

def test_thread_count_env_cap(monkeypatch):
    monkeypatch.setenv("ARTFEAT_THREADS", "2")
    assert resolve_thread_count(8) == 2
    assert resolve_thread_count(1) == 1
    assert resolve_thread_count(None) == 2
    monkeypatch.delenv("ARTFEAT_THREADS")
    assert resolve_thread_count(1) == 1


def test_module_entry_point_runs():
    proc = subprocess.run(
        [sys.executable, "-m", "artfeat", "--help"],
        capture_output=True, text=True, timeout=60,
    )
    assert proc.returncode == 0
    assert "features" in proc.stdout

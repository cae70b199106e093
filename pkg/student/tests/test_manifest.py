"""Manifest loading, path resolution and validation."""

import json

import pytest

from student_trainer import ManifestError, TrainManifest, load_manifest


def write_manifest(path, **overrides):
    doc = {
        "train": "export/train.jsonl",
        "dev": "export/dev.jsonl",
        "labels": "export/labels.txt",
        "base_model": "some-compact-encoder",
        "output_dir": "model",
    }
    doc.update(overrides)
    path.write_text(json.dumps(doc), encoding="utf-8")
    return path


class TestLoad:
    def test_round_trip_all_fields(self, tmp_path):
        path = write_manifest(
            tmp_path / "m.json",
            epochs=5,
            learning_rate=0.001,
            seed=99,
            batch_size=4,
            max_length=64,
            warmup_fraction=0.1,
        )
        m = load_manifest(path)
        assert m.epochs == 5
        assert m.learning_rate == 0.001
        assert m.seed == 99
        assert m.batch_size == 4
        assert m.max_length == 64
        assert m.warmup_fraction == 0.1
        assert m.base_model == "some-compact-encoder"

    def test_defaults_applied(self, tmp_path):
        m = load_manifest(write_manifest(tmp_path / "m.json"))
        assert m.epochs == 3
        assert m.learning_rate == 2e-5
        assert m.seed == 13
        assert m.batch_size == 16
        assert m.max_length == 128
        assert m.warmup_fraction == 0.06

    def test_relative_paths_resolve_against_manifest_dir(self, tmp_path):
        nested = tmp_path / "runs" / "a"
        nested.mkdir(parents=True)
        m = load_manifest(write_manifest(nested / "m.json"))
        assert m.train == nested / "export" / "train.jsonl"
        assert m.output_dir == nested / "model"

    def test_absolute_paths_kept(self, tmp_path):
        m = load_manifest(
            write_manifest(tmp_path / "m.json", train=str(tmp_path / "t.jsonl"))
        )
        assert m.train == tmp_path / "t.jsonl"

    def test_base_model_name_passes_through(self, tmp_path):
        m = load_manifest(write_manifest(tmp_path / "m.json"))
        assert m.base_model == "some-compact-encoder"

    def test_base_model_local_dir_resolves(self, tmp_path):
        (tmp_path / "base").mkdir()
        m = load_manifest(write_manifest(tmp_path / "m.json", base_model="base"))
        assert m.base_model == str(tmp_path / "base")

    def test_missing_required_key(self, tmp_path):
        path = tmp_path / "m.json"
        doc = {"train": "t", "dev": "d", "labels": "l", "base_model": "b"}
        path.write_text(json.dumps(doc), encoding="utf-8")
        with pytest.raises(ManifestError, match="output_dir"):
            load_manifest(path)

    def test_unknown_key_rejected(self, tmp_path):
        path = write_manifest(tmp_path / "m.json", epoch=5)
        with pytest.raises(ManifestError, match="unknown keys: epoch"):
            load_manifest(path)

    def test_bool_epochs_rejected(self, tmp_path):
        path = write_manifest(tmp_path / "m.json", epochs=True)
        with pytest.raises(ManifestError, match="epochs must be an integer"):
            load_manifest(path)

    def test_path_value_must_be_string(self, tmp_path):
        path = write_manifest(tmp_path / "m.json", train=3)
        with pytest.raises(ManifestError, match="train must be a non-empty string"):
            load_manifest(path)

    def test_non_object_manifest(self, tmp_path):
        path = tmp_path / "m.json"
        path.write_text("[1, 2]", encoding="utf-8")
        with pytest.raises(ManifestError, match="JSON object"):
            load_manifest(path)

    def test_invalid_json(self, tmp_path):
        path = tmp_path / "m.json"
        path.write_text("{nope", encoding="utf-8")
        with pytest.raises(ManifestError, match="invalid JSON"):
            load_manifest(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ManifestError, match="cannot read"):
            load_manifest(tmp_path / "absent.json")


class TestValidation:
    @pytest.mark.parametrize(
        "overrides, match",
        [
            ({"epochs": -1}, "epochs must be >= 0"),
            ({"learning_rate": 0}, "learning_rate must be > 0"),
            ({"batch_size": 0}, "batch_size must be >= 1"),
            ({"max_length": 4}, "max_length must be >= 8"),
            ({"warmup_fraction": 1.0}, "warmup_fraction must be in"),
        ],
    )
    def test_rejected_values(self, tmp_path, overrides, match):
        path = write_manifest(tmp_path / "m.json", **overrides)
        with pytest.raises(ManifestError, match=match):
            load_manifest(path)

    def test_zero_epochs_allowed(self, tmp_path):
        m = load_manifest(write_manifest(tmp_path / "m.json", epochs=0))
        assert m.epochs == 0

    def test_direct_construction_validates(self, tmp_path):
        with pytest.raises(ManifestError, match="batch_size"):
            TrainManifest(
                train=tmp_path / "t",
                dev=tmp_path / "d",
                labels=tmp_path / "l",
                base_model="b",
                output_dir=tmp_path / "o",
                batch_size=0,
            )

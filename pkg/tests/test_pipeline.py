import json

import numpy as np
import pytest

from hostiletext.corpus import Task, parse_dataset
from hostiletext.embeddings import EmbeddingConfig
from hostiletext.modelfile import (
    ModelCorruptError,
    ModelDimensionError,
    ModelTruncatedError,
    ModelVersionError,
    load_model,
    save_model,
)
from hostiletext.pipeline import (
    PipelineSpec,
    PipelineSpecError,
    evaluate_pipeline,
    predict_dataset,
    train_pipeline,
)
from hostiletext.svm import TrainOptions
from hostiletext.textprep import NgramRange


def spec_a(**kwargs):
    return PipelineSpec(task=Task.A, model="svm-tfidf", **kwargs)


class TestPipelineSpec:
    def test_lpsvm_requires_task_b(self):
        with pytest.raises(PipelineSpecError):
            PipelineSpec(task=Task.A, model="lpsvm")

    @pytest.mark.parametrize("kind", ["svm-tfidf", "svm-w2v"])
    def test_svm_kinds_require_task_a(self, kind):
        with pytest.raises(PipelineSpecError):
            PipelineSpec(task=Task.B, model=kind)

    def test_unknown_kind(self):
        with pytest.raises(PipelineSpecError):
            PipelineSpec(task=Task.A, model="bert")

    def test_w2v_gets_default_embedding_config(self):
        spec = PipelineSpec(task=Task.A, model="svm-w2v")
        assert spec.embedding is not None

    def test_seed_flows_into_stage_configs(self):
        spec = PipelineSpec(task=Task.A, model="svm-w2v", seed=99)
        assert spec.effective_options().seed == 99
        assert spec.effective_embedding().seed == 99


class TestTfidfPipeline:
    def test_memorizes_separable_corpus(self, task_a_corpus):
        data = parse_dataset(task_a_corpus(80).encode(), Task.A)
        trained = train_pipeline(data, spec_a(seed=3))
        report = evaluate_pipeline(trained, data)
        assert report.accuracy == 1.0

    def test_generalizes_to_heldout(self, task_a_corpus):
        train = parse_dataset(task_a_corpus(120, seed=0).encode(), Task.A)
        test = parse_dataset(task_a_corpus(60, seed=1, id_prefix="t").encode(), Task.A)
        trained = train_pipeline(train, spec_a())
        report = evaluate_pipeline(trained, test)
        assert report.weighted_f1 >= 0.95

    def test_task_mismatch_rejected(self, task_b_corpus):
        data = parse_dataset(task_b_corpus(20).encode(), Task.B)
        with pytest.raises(PipelineSpecError):
            train_pipeline(data, spec_a())


class TestW2vPipeline:
    def w2v_spec(self, seed=0):
        return PipelineSpec(
            task=Task.A,
            model="svm-w2v",
            embedding=EmbeddingConfig(dim=12, window=3, epochs=4, negatives=3),
            seed=seed,
        )

    def test_trains_and_separates(self, task_a_corpus):
        data = parse_dataset(task_a_corpus(60).encode(), Task.A)
        trained = train_pipeline(data, self.w2v_spec())
        report = evaluate_pipeline(trained, data)
        assert report.accuracy >= 0.9

    def test_deterministic(self, task_a_corpus):
        data = parse_dataset(task_a_corpus(30).encode(), Task.A)
        a = train_pipeline(data, self.w2v_spec(seed=5))
        b = train_pipeline(data, self.w2v_spec(seed=5))
        np.testing.assert_array_equal(
            a.embeddings.input_vectors, b.embeddings.input_vectors
        )
        np.testing.assert_array_equal(a.binary.weights, b.binary.weights)


class TestLpsvmPipeline:
    def lp_spec(self):
        return PipelineSpec(
            task=Task.B,
            model="lpsvm",
            ngram_range=NgramRange(1, 1),
            min_df=1,
            options=TrainOptions(C=1.7),
        )

    def test_memorizes_disjoint_combos(self, task_b_corpus):
        data = parse_dataset(task_b_corpus(60).encode(), Task.B)
        trained = train_pipeline(data, self.lp_spec())
        report = evaluate_pipeline(trained, data)
        assert report.accuracy == 1.0
        assert report.coarse_grained_f1 == 1.0

    def test_prediction_rows_are_canonical(self, task_b_corpus):
        data = parse_dataset(task_b_corpus(20).encode(), Task.B)
        trained = train_pipeline(data, self.lp_spec())
        rows = predict_dataset(trained, data)
        assert [doc_id for doc_id, _ in rows] == [d.id for d in data]
        for _, labels in rows:
            tokens = labels.split(",")
            if "non-hostile" in tokens:
                assert tokens == ["non-hostile"]


class TestModelFile:
    @pytest.fixture
    def trained(self, task_a_corpus):
        data = parse_dataset(task_a_corpus(40).encode(), Task.A)
        return train_pipeline(data, spec_a(seed=11))

    @pytest.fixture
    def trained_lp(self, task_b_corpus):
        data = parse_dataset(task_b_corpus(40).encode(), Task.B)
        spec = PipelineSpec(
            task=Task.B,
            model="lpsvm",
            ngram_range=NgramRange(1, 1),
            min_df=1,
            options=TrainOptions(C=1.7),
            seed=11,
        )
        return train_pipeline(data, spec)

    def test_round_trip_scores_bit_exact(self, trained, tmp_path):
        path = tmp_path / "model.json"
        save_model(path, trained)
        loaded = load_model(path)
        rng = np.random.default_rng(0)
        words = ["mask", "vaccine", "bleach", "hoax", "doctor", "unknown"]
        for _ in range(10):
            text = " ".join(rng.choice(words, size=int(rng.integers(1, 8))))
            assert loaded.decision_value(text) == trained.decision_value(text)

    def test_round_trip_lpsvm_predictions(self, trained_lp, tmp_path):
        path = tmp_path / "model.json"
        save_model(path, trained_lp)
        loaded = load_model(path)
        for text in ("seva shanti", "jhooth afwa", "badnaam gaali", ""):
            assert loaded.predict(text) == trained_lp.predict(text)

    def test_save_is_byte_deterministic(self, trained, tmp_path):
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        save_model(first, trained)
        save_model(second, trained)
        assert first.read_bytes() == second.read_bytes()

    def test_w2v_round_trip(self, task_a_corpus, tmp_path):
        data = parse_dataset(task_a_corpus(30).encode(), Task.A)
        spec = PipelineSpec(
            task=Task.A,
            model="svm-w2v",
            embedding=EmbeddingConfig(dim=8, window=2, epochs=2),
            seed=4,
        )
        trained = train_pipeline(data, spec)
        path = tmp_path / "model.json"
        save_model(path, trained)
        loaded = load_model(path)
        np.testing.assert_array_equal(
            loaded.embeddings.input_vectors, trained.embeddings.input_vectors
        )
        assert loaded.decision_value("mask vaccine") == trained.decision_value(
            "mask vaccine"
        )

    def test_corrupt_weight_byte_is_detected(self, trained, tmp_path):
        path = tmp_path / "model.json"
        save_model(path, trained)
        text = path.read_text()
        marker = text.index('"data": "') + len('"data": "')
        corrupted = text[:marker] + ("!" if text[marker] != "!" else "?") + text[marker + 1 :]
        path.write_text(corrupted)
        with pytest.raises((ModelCorruptError, ModelTruncatedError)):
            load_model(path)

    def test_truncated_file_is_detected(self, trained, tmp_path):
        path = tmp_path / "model.json"
        save_model(path, trained)
        path.write_bytes(path.read_bytes()[:200])
        with pytest.raises(ModelTruncatedError):
            load_model(path)

    def test_future_version_rejected(self, trained, tmp_path):
        path = tmp_path / "model.json"
        save_model(path, trained)
        doc = json.loads(path.read_text())
        doc["format_version"] = 999
        path.write_text(json.dumps(doc))
        with pytest.raises(ModelVersionError):
            load_model(path)

    def test_dimension_inconsistency_rejected(self, trained, tmp_path):
        import hashlib
        from hostiletext.modelfile import _canonical_payload_bytes

        path = tmp_path / "model.json"
        save_model(path, trained)
        doc = json.loads(path.read_text())
        doc["payload"]["binary_model"]["dim"] += 1
        doc["payload_sha256"] = hashlib.sha256(
            _canonical_payload_bytes(doc["payload"])
        ).hexdigest()
        path.write_text(json.dumps(doc))
        with pytest.raises(ModelDimensionError):
            load_model(path)

import random
import statistics

import numpy as np
import pytest

from cossu import (
    Alphabet,
    Model,
    Rule,
    Sequence,
    SyntheticSpec,
    bigram_baseline,
    classify,
    evaluate_prediction,
    frequencies,
    hit_rate,
    predict_next,
    rule_support_confidence,
    synth_generate,
    train_classifier,
)
from cossu.evaluation import UniformPredictor

from conftest import char_seq


class TestSynthGenerate:
    def test_reproducible_and_exact_length(self):
        spec = SyntheticSpec(seed=42, length=777)
        s1, t1 = synth_generate(spec)
        s2, _ = synth_generate(spec)
        assert s1.ids == s2.ids
        assert len(s1) == 777
        assert [r.tokens(s1.alphabet) for r in t1] == [
            (("A",), ("B",))
        ]

    def test_zero_insertion_is_base_draw(self):
        on = SyntheticSpec(seed=9, insertion_probability=0.0)
        off = SyntheticSpec(seed=9, rules=())
        s1, _ = synth_generate(on)
        s2, _ = synth_generate(off)
        assert s1.ids == s2.ids

    def test_forced_insertion(self):
        spec = SyntheticSpec(seed=4, length=300, insertion_probability=1.0)
        s, targets = synth_generate(spec)
        a = s.alphabet.id_of("A")
        b = s.alphabet.id_of("B")
        # every A is followed by B (the last element may be a truncated A)
        for t, sid in enumerate(s.ids[:-1]):
            if sid == a:
                assert s.ids[t + 1] == b

    def test_confidence_matches_insertion_relation(self):
        # realized confidence ~= ip + (1 - ip) * P(B) for the uniform base
        confs = []
        for seed in range(20):
            s, targets = synth_generate(SyntheticSpec(seed=seed))
            _, conf = rule_support_confidence(targets[0], s)
            confs.append(conf)
        mean = statistics.mean(confs)
        assert abs(mean - 0.6) <= 0.03

    def test_distribution_validated(self):
        with pytest.raises(ValueError):
            SyntheticSpec(distribution={"A": 1.0})
        with pytest.raises(ValueError):
            SyntheticSpec(insertion_probability=1.5)

    def test_custom_distribution_respected(self):
        dist = {"A": 0.7, "B": 0.1, "C": 0.1, "D": 0.05, "E": 0.05}
        spec = SyntheticSpec(seed=2, distribution=dist, rules=())
        s, _ = synth_generate(spec)
        f = frequencies(s)
        assert f.prob(s.alphabet.id_of("A")) == pytest.approx(0.7, abs=0.03)


class TestHitRate:
    def _model_with(self, worked, pairs):
        m = Model.empty(frequencies(worked))
        for ant, cons in pairs:
            m = m.with_rule(
                Rule.from_tokens(worked.alphabet, ant, cons), 0.5
            )
        return m

    def test_all_hits(self, worked):
        target = [Rule.from_tokens(worked.alphabet, ["a"], ["b"])]
        models = [self._model_with(worked, [(["a"], ["b"])])] * 3
        assert hit_rate(models, target, worked.alphabet) == 100.0

    def test_superset_is_miss(self, worked):
        target = [Rule.from_tokens(worked.alphabet, ["a"], ["b"])]
        extra = self._model_with(
            worked, [(["a"], ["b"]), ([], ["b", "c"])]
        )
        exact = self._model_with(worked, [(["a"], ["b"])])
        assert hit_rate([extra, exact], target, worked.alphabet) == 50.0

    def test_empty_target_empty_output(self, worked):
        models = [Model.empty(frequencies(worked))] * 2
        assert hit_rate(models, [], worked.alphabet) == 100.0


class TestPredictNext:
    def test_never_abstains_at_zero(self, worked):
        m = Model.empty(frequencies(worked))
        assert predict_next(m, (), 0.0) is not None

    def test_singleton_only_predicts_mode(self, worked):
        m = Model.empty(frequencies(worked))
        a = worked.alphabet.id_of("a")
        assert predict_next(m, (), 0.2) == a  # f_a = 1/3 is the maximum
        assert predict_next(m, (), 0.5) is None

    def test_strong_rule_prediction(self, worked):
        f = frequencies(worked)
        m = Model.empty(f).with_rule(
            Rule.from_tokens(worked.alphabet, ["a", "b"], ["c"]), 1.0
        )
        hist = char_seq("ab").reindexed(worked.alphabet)
        # P(c | ..ab) = 7/12 > 0.5
        assert predict_next(m, hist, 0.5) == worked.alphabet.id_of("c")


class TestEvaluatePrediction:
    def test_deterministic_alternation(self):
        alphabet = Alphabet(["a", "b"])
        train = Sequence.from_tokens(alphabet, list("ab" * 40))
        test = Sequence.from_tokens(alphabet, list("ab" * 10))
        f = frequencies(train)
        m = (
            Model.empty(f)
            .with_rule(Rule.from_tokens(alphabet, ["a"], ["b"]), 50.0)
            .with_rule(Rule.from_tokens(alphabet, ["b"], ["a"]), 50.0)
        )
        outcome = evaluate_prediction(m, test, taus=(0.5,))
        tm = outcome.at(0.5)
        assert tm.precision == pytest.approx(1.0, abs=0.06)
        assert tm.recall >= 0.9

    def test_recall_is_answer_rate_and_full_at_zero(self, worked):
        m = Model.empty(frequencies(worked))
        outcome = evaluate_prediction(m, worked, taus=(0.0, 0.9))
        assert outcome.at(0.0).recall == 1.0
        assert outcome.at(0.9).recall == 0.0
        assert outcome.at(0.9).predicted == 0
        assert outcome.at(0.9).f1 == 0.0

    def test_uniform_baseline_chance_precision(self):
        s, _ = synth_generate(SyntheticSpec(seed=15, rules=()))
        outcome = evaluate_prediction(
            UniformPredictor(s.alphabet), s, taus=(0.0,)
        )
        assert outcome.at(0.0).precision == pytest.approx(0.2, abs=0.02)
        assert outcome.at(0.0).recall == 1.0

    def test_uniform_baseline_abstains_above_chance(self):
        s, _ = synth_generate(SyntheticSpec(seed=15, rules=()))
        outcome = evaluate_prediction(
            UniformPredictor(s.alphabet), s, taus=(0.3,)
        )
        assert outcome.at(0.3).predicted == 0

    def test_auc_trapezoid(self, worked):
        m = Model.empty(frequencies(worked))
        outcome = evaluate_prediction(m, worked, taus=(0.0, 0.3, 0.9))
        xs = [p[0] for p in outcome.roc_points]
        ys = [p[1] for p in outcome.roc_points]
        expect = sum(
            (x2 - x1) * (y1 + y2) / 2
            for (x1, y1), (x2, y2) in zip(
                outcome.roc_points, outcome.roc_points[1:]
            )
        )
        assert outcome.auc == pytest.approx(expect, abs=1e-12)
        assert xs == sorted(xs)


class TestBigram:
    def test_alternation_perfect(self):
        alphabet = Alphabet(["a", "b"])
        train = Sequence.from_tokens(alphabet, list("ab" * 30))
        test = Sequence.from_tokens(alphabet, list("ab" * 8))
        predictor = bigram_baseline(train)
        outcome = evaluate_prediction(predictor, test, taus=(0.5,))
        tm = outcome.at(0.5)
        # abstains only at the history-free first position
        assert tm.predicted == len(test) - 1
        assert tm.correct == tm.predicted

    def test_first_position_abstains(self):
        alphabet = Alphabet(["a", "b"])
        train = Sequence.from_tokens(alphabet, list("abab"))
        predictor = bigram_baseline(train)
        rows = predictor.position_distributions(
            Sequence.from_tokens(alphabet, list("ab"))
        )
        assert rows[0].sum() == 0.0

    def test_uniform_noise_near_chance(self):
        s, _ = synth_generate(SyntheticSpec(seed=77, rules=()))
        train = Sequence(s.alphabet, s.ids[:4000])
        test = Sequence(s.alphabet, s.ids[4000:])
        outcome = evaluate_prediction(bigram_baseline(train), test, (0.0,))
        assert outcome.at(0.0).precision == pytest.approx(0.2, abs=0.05)


class TestClassifier:
    def test_frequency_only_classification(self):
        heavy_a = Alphabet(["x", "y"])
        s_a = Sequence.from_tokens(heavy_a, list("x" * 30 + "y" * 10))
        s_b = Sequence.from_tokens(heavy_a, list("y" * 30 + "x" * 10))
        clf = train_classifier({"a": s_a, "b": s_b})
        probe_a = Sequence.from_tokens(heavy_a, list("xxxxxxxx"))
        probe_b = Sequence.from_tokens(heavy_a, list("yyyyyyyy"))
        assert classify(clf, probe_a) == "a"
        assert classify(clf, probe_b) == "b"

    def test_identical_models_tie_break_canonical(self):
        alphabet = Alphabet(["x", "y"])
        s = Sequence.from_tokens(alphabet, list("xyxy" * 10))
        clf = train_classifier({"b": s, "a": s})
        assert classify(clf, s) == "a"

    def test_shared_alphabet_union(self):
        s_a = char_seq("aaab")
        s_b = char_seq("cccd")
        clf = train_classifier({"first": s_a, "second": s_b})
        assert clf.alphabet.tokens == ("a", "b", "c", "d")
        # either model can score symbols it never saw
        assert classify(clf, char_seq("aa").reindexed(clf.alphabet)) == "first"

import random

import pytest

from cossu import (
    MiningConfig,
    Model,
    OptimizerConfig,
    Sequence,
    cossu_mine,
    format_rule,
    frequencies,
    model_to_json,
    singleton_rules,
    total_dl,
)

from conftest import char_seq, random_seq


class TestWorkedExample:
    def test_returns_empty_rule_set(self, worked):
        model = cossu_mine(worked)
        assert model.non_singletons() == ()
        assert model.rules == singleton_rules(worked.alphabet)

    def test_rejects_empty_input(self, worked):
        with pytest.raises(ValueError, match="empty input"):
            cossu_mine(Sequence(worked.alphabet, ()))

    def test_final_weights_normalized(self, worked):
        model = cossu_mine(worked)
        assert all(0.0 < w < 1.0 for w in model.weights)

    def test_final_total_beats_empty_model(self, worked):
        model = cossu_mine(worked)
        base = Model.empty(frequencies(worked))
        # same singleton layout, but tuned and quantized weights
        assert total_dl(model, worked).data_bits <= (
            total_dl(base, worked).data_bits + 1.0
        )


class TestTrace:
    def test_incumbent_monotone(self):
        rng = random.Random(21)
        s = random_seq(rng, 300, 3)
        events = []
        cossu_mine(s, trace=events.append)
        incumbent = None
        for e in events:
            if e["event"] == "init":
                incumbent = e["total"]
            elif e["event"] == "candidate" and e["decision"] == "accept":
                assert e["tentative"] < incumbent
                incumbent = e["tentative"]
            elif e["event"] == "prune":
                assert e["total"] <= incumbent
                incumbent = e["total"]
        assert incumbent is not None

    def test_rejected_candidates_leave_model_unchanged(self):
        rng = random.Random(31)
        s = random_seq(rng, 200, 3)
        events = []
        model = cossu_mine(s, trace=events.append)
        accepted = [
            e["rule"]
            for e in events
            if e["event"] == "candidate" and e["decision"] == "accept"
        ]
        pruned = [e["rule"] for e in events if e["event"] == "prune"]
        mined = [format_rule(r, model.alphabet) for r in model.non_singletons()]
        assert sorted(mined) == sorted(
            r for r in accepted if r not in pruned
        )


class TestDeterminism:
    def test_byte_identical_reruns(self):
        rng = random.Random(41)
        s = random_seq(rng, 400, 4)
        m1 = cossu_mine(s)
        m2 = cossu_mine(s)
        assert model_to_json(m1) == model_to_json(m2)

    def test_config_validation(self):
        with pytest.raises(ValueError):
            MiningConfig(minsup=1)
        with pytest.raises(ValueError):
            MiningConfig(max_pattern_len=0)


class TestFastScreen:
    def test_same_result_on_planted_rule(self):
        from cossu import SyntheticSpec, synth_generate

        seq, targets = synth_generate(SyntheticSpec(seed=3, length=2000))
        full = cossu_mine(seq)
        fast = cossu_mine(seq, MiningConfig(fast_screen=True))
        assert {r.tokens(full.alphabet) for r in full.non_singletons()} == {
            r.tokens(fast.alphabet) for r in fast.non_singletons()
        }

    def test_opt_passes_respected(self):
        rng = random.Random(77)
        s = random_seq(rng, 150, 3)
        two_pass = MiningConfig(optimizer=OptimizerConfig(passes=2))
        m1 = cossu_mine(s)
        m2 = cossu_mine(s, two_pass)
        assert {r for r in m1.non_singletons()} == {
            r for r in m2.non_singletons()
        }

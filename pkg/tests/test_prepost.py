"""Tests for forced values and the ABL probability."""

import math

import numpy as np
import pytest

from qpp import (
    ABLUndefinedError,
    Context,
    LabeledProjector,
    PREDICTION,
    RETRODICTION,
    PrePostScenario,
    SelectionInconsistencyError,
    StateVector,
    abl_probability,
    apply,
    cabello_scenario,
    forced_values,
    hardy_scenario,
    inner,
    selection_probability,
    single_qubit_scenario,
)


class TestSelectionProbability:
    def test_cabello_value(self):
        assert selection_probability(cabello_scenario()) == pytest.approx(1.0 / 9.0, abs=1e-15)

    def test_orthogonal_selection_vanishes(self):
        s = single_qubit_scenario(1, 2)
        flipped = PrePostScenario(
            dim=2, pre=s.pre,
            post=StateVector([-np.conj(s.pre.amps[1]), np.conj(s.pre.amps[0])]),
            projectors=s.projectors, contexts=s.contexts,
        )
        assert selection_probability(flipped) < 1e-25


class TestForcedValues:
    def test_cabello_five_zeros(self):
        forced = forced_values(cabello_scenario())
        assert [(f.label, f.bit, f.justification) for f in forced] == [
            ("alpha", 0, PREDICTION),
            ("beta+", 0, PREDICTION),
            ("beta-", 0, PREDICTION),
            ("gamma+", 0, RETRODICTION),
            ("gamma-", 0, RETRODICTION),
        ]

    def test_hardy_five_zeros(self):
        rng = np.random.default_rng(47)
        for _ in range(10):
            ta, tb = rng.uniform(0.1, math.pi / 2.0 - 0.1, 2)
            forced = forced_values(hardy_scenario(ta, tb))
            assert [(f.label, f.bit) for f in forced] == [
                ("alpha", 0), ("beta+", 0), ("beta-", 0), ("gamma+", 0), ("gamma-", 0),
            ]

    def test_justifications_reflect_eigenvector_relations(self):
        """Prediction entries hold against pre, retrodiction against post."""
        s = cabello_scenario()
        pm = s.projector_map()
        for f in forced_values(s):
            op = pm[f.label].operator
            if f.justification == PREDICTION:
                assert np.linalg.norm(apply(op, s.pre)) < 1e-12
            else:
                assert np.linalg.norm(apply(op, s.post)) < 1e-12

    def test_prediction_takes_precedence(self):
        """A projector forced by both selections reports prediction."""
        e0, e1 = StateVector([1.0, 0.0]), StateVector([0.0, 1.0])
        s = PrePostScenario(
            dim=2, pre=e0, post=StateVector([0.8, 0.6]),
            projectors=(LabeledProjector("up", e0), LabeledProjector("down", e1)),
            contexts=(Context(("up", "down")),),
        )
        forced = {f.label: f for f in forced_values(s)}
        assert forced["up"].bit == 1 and forced["up"].justification == PREDICTION
        assert forced["down"].bit == 0 and forced["down"].justification == PREDICTION

    def test_inconsistent_selections_raise(self):
        e0, e1 = StateVector([1.0, 0.0]), StateVector([0.0, 1.0])
        eps = 1e-5
        post = StateVector([eps, math.sqrt(1.0 - eps * eps)])
        s = PrePostScenario(
            dim=2, pre=e0, post=post,
            projectors=(LabeledProjector("up", e0), LabeledProjector("down", e1)),
            contexts=(Context(("up", "down")),),
        )
        # at a loose tolerance retrodiction reads post as the down state,
        # contradicting the prediction down=0; labels are scanned sorted
        with pytest.raises(SelectionInconsistencyError, match="down"):
            forced_values(s, tol=1e-4)
        forced = {f.label: f.bit for f in forced_values(s, tol=1e-9)}
        assert forced == {"up": 1, "down": 0}


class TestABLProbability:
    def test_cabello_deltas_are_certain(self):
        s = cabello_scenario()
        assert abl_probability(s, "delta+") == pytest.approx(1.0, abs=1e-15)
        assert abl_probability(s, "delta-") == pytest.approx(1.0, abs=1e-15)

    def test_cabello_forced_zeros_have_zero_probability(self):
        s = cabello_scenario()
        for lab in ("alpha", "beta+", "beta-", "gamma+", "gamma-"):
            assert abl_probability(s, lab) == pytest.approx(0.0, abs=1e-15)

    def test_unknown_label(self):
        with pytest.raises(ValueError, match="unknown projector label"):
            abl_probability(cabello_scenario(), "epsilon")

    def test_forced_values_agree_with_abl(self):
        """Whenever a value is forced, the ABL probability equals it."""
        rng = np.random.default_rng(51)
        scenarios = [cabello_scenario()]
        scenarios += [
            hardy_scenario(*rng.uniform(0.1, math.pi / 2.0 - 0.1, 2)) for _ in range(20)
        ]
        for s in scenarios:
            for f in forced_values(s):
                assert abl_probability(s, f.label) == pytest.approx(float(f.bit), abs=1e-9)

    def test_probabilities_lie_in_unit_interval(self):
        rng = np.random.default_rng(53)
        for seed in range(20):
            s = single_qubit_scenario(3, seed)
            for p in s.projectors:
                val = abl_probability(s, p.label)
                assert 0.0 <= val <= 1.0

    def test_undefined_ratio_raises(self):
        """Both branch weights below tolerance leave the ratio undefined."""
        eps = 1e-8
        e0 = StateVector([1.0, 0.0])
        post = StateVector([eps, math.sqrt(1.0 - eps * eps)])
        s = PrePostScenario(
            dim=2, pre=e0, post=post,
            projectors=(
                LabeledProjector("up", e0),
                LabeledProjector("down", StateVector([0.0, 1.0])),
            ),
            contexts=(Context(("up", "down")),),
        )
        # N1 = |<post|up><up|pre>|^2 = eps^2, N0 = 0: total 1e-16 under 1e-9
        with pytest.raises(ABLUndefinedError, match="up"):
            abl_probability(s, "up")

    def test_complementary_projectors_sum_to_one(self):
        rng = np.random.default_rng(57)
        for seed in range(10):
            s = single_qubit_scenario(2, seed)
            for ctx in s.contexts:
                a, b = ctx.members
                total = abl_probability(s, a) + abl_probability(s, b)
                assert total == pytest.approx(1.0, abs=1e-9)

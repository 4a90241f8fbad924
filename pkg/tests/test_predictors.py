import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lwocp.data import STAR, LiftedSequence, mask
from lwocp.predictors import (KNN, MLP, PAPER_PREDICTORS, CountFeature,
                              DummyPredictor, Kernel, Ridge, Tree,
                              estimate_oos_stability, fit, fit_arrays,
                              format_spec, parse_spec, spec_from_dict,
                              spec_to_dict)

ALL_SPECS = list(PAPER_PREDICTORS) + [CountFeature(KNN(3)), CountFeature(Ridge(1.0))]


@pytest.fixture
def xy(rng):
    X = rng.normal(size=(40, 3))
    Y = np.column_stack([X @ [1.0, -2.0, 0.5], X[:, 0] ** 2]) + 0.1 * rng.normal(size=(40, 2))
    return X, Y


class TestRidge:
    def test_matches_augmented_least_squares(self, xy):
        # independent route: ridge is OLS on [X; sqrt(lam) I] against [Y; 0]
        X, Y = xy
        lam = 2.5
        Xa = np.vstack([X, np.sqrt(lam) * np.eye(3)])
        Ya = np.vstack([Y, np.zeros((3, 2))])
        ref = np.linalg.lstsq(Xa, Ya, rcond=None)[0]
        Q = np.eye(3)
        np.testing.assert_allclose(fit(Ridge(lam), (X, Y)).predict_array(Q), ref, atol=1e-10)

    def test_hand_example(self):
        # X = (1, 2), Y = (1, 2), lam = 1: coef = 5 / 6
        model = fit(Ridge(1.0), (np.array([[1.0], [2.0]]), np.array([1.0, 2.0])))
        assert model.predict([3.0])[0] == pytest.approx(2.5)

    def test_intercept_unpenalized(self):
        X = np.arange(6.0)[:, None]
        model = fit(Ridge(0.0, intercept=True), (X, 3 + 2 * X[:, 0]))
        assert model.predict([10.0])[0] == pytest.approx(23.0)

    def test_negative_penalty(self):
        with pytest.raises(ValueError):
            Ridge(-1.0)


class TestNeighbors:
    def test_knn_brute_force(self, xy, rng):
        X, Y = xy
        Q = rng.normal(size=(5, 3))
        pred = fit(KNN(4), (X, Y)).predict_array(Q)
        for q, p in zip(Q, pred):
            idx = np.argsort(((X - q) ** 2).sum(1))[:4]
            np.testing.assert_allclose(p, Y[idx].mean(0))

    def test_knn_k_capped_at_n(self):
        model = fit(KNN(10), (np.zeros((3, 1)), np.array([1.0, 2.0, 6.0])))
        assert model.predict([0.0])[0] == pytest.approx(3.0)

    def test_knn_ties_independent_of_order(self):
        X = np.array([[-1.0], [1.0], [0.0]])
        Y = np.array([10.0, 20.0, 0.0])
        a = fit(KNN(2), (X, Y)).predict([0.0])
        b = fit(KNN(2), (X[::-1], Y[::-1])).predict([0.0])
        assert a[0] == b[0] == 5.0  # the canonical order puts x=-1 first

    def test_kernel_formula(self, xy, rng):
        X, Y = xy
        q = rng.normal(size=3)
        w = np.exp(-((X - q) ** 2).sum(1) / (2 * 0.7 ** 2))
        np.testing.assert_allclose(fit(Kernel(0.7), (X, Y)).predict(q),
                                   w @ Y / w.sum(), rtol=1e-10)

    def test_kernel_far_query_stays_finite(self, xy):
        X, Y = xy
        far = fit(Kernel(0.01), (X, Y)).predict(np.full(3, 1e3))
        assert np.isfinite(far).all()

    @pytest.mark.parametrize("bad", [KNN, Kernel])
    def test_bad_hyperparameter(self, bad):
        with pytest.raises(ValueError):
            bad(0)


class TestTree:
    def test_stump(self):
        X = np.array([[0.0], [1.0], [2.0], [3.0]])
        Y = np.array([0.0, 0.0, 10.0, 10.0])
        model = fit(Tree(1, 1), (X, Y))
        assert model.threshold[0] == 1.5
        np.testing.assert_array_equal(model.predict_array(np.array([[1.4], [1.6]])).ravel(), [0, 10])

    def test_min_leaf_respected(self, xy):
        X, Y = xy
        model = fit(Tree(8, 7), (X, Y))
        counts = np.bincount(model.apply(X))
        assert counts[counts > 0].min() >= 7

    def test_constant_response_is_a_leaf(self):
        model = fit(Tree(3, 1), (np.arange(5.0)[:, None], np.ones(5)))
        assert len(model.value) == 1

    def test_tie_prefers_lowest_feature(self):
        X = np.array([[0.0, 0.0], [1.0, 1.0]])
        model = fit(Tree(1, 1), (X, np.array([0.0, 1.0])))
        assert model.feature[0] == 0


class TestMLP:
    def test_zero_epochs_is_initialization(self, xy):
        X, Y = xy
        a = fit(MLP(5, epochs=0), (X, Y), rng_seed=3).predict_array(X)
        b = fit(MLP(5, epochs=0), (X, Y), rng_seed=4).predict_array(X)
        assert not np.allclose(a, b)

    def test_training_reduces_error(self, xy):
        X, Y = xy
        err = [np.mean((fit(MLP(20, epochs=e, lr=0.05), (X, Y), 1).predict_array(X) - Y) ** 2)
               for e in (0, 300)]
        assert err[1] < 0.5 * err[0]

    def test_seed_reproducible(self, xy):
        X, Y = xy
        a = fit(MLP(8), (X, Y), 11).predict_array(X)
        np.testing.assert_array_equal(a, fit(MLP(8), (X, Y), 11).predict_array(X))


class TestCountFeature:
    def test_feature_counts(self):
        X = np.array([[1.0], [1.0], [2.0], [1.0]])
        model = fit(CountFeature(KNN(1)), (X, np.array([5.0, 5.0, 9.0, 5.0])))
        np.testing.assert_array_equal(model.featurize(np.array([[1.0], [2.0], [3.0]])).ravel(),
                                      [3, 1, 0])
        # unseen covariate has count 0, nearest count is 1 (the x=2 row)
        assert model.predict([3.0])[0] == 9.0

    def test_bit_exact_equality(self):
        X = np.array([[0.1 + 0.2], [0.3]])
        model = fit(CountFeature(KNN(1)), (X, np.zeros(2)))
        assert model.featurize(np.array([[0.3]]))[0, 0] == 1


class TestSymmetry:
    @pytest.mark.parametrize("spec", ALL_SPECS, ids=format_spec)
    def test_permutation_invariant(self, spec, rng):
        X = np.round(rng.normal(size=(25, 2)), 1)  # rounding creates ties
        Y = rng.normal(size=25)
        Q = rng.normal(size=(6, 2))
        perm = rng.permutation(25)
        a = fit(spec, (X, Y), 5).predict_array(Q)
        b = fit(spec, (X[perm], Y[perm]), 5).predict_array(Q)
        np.testing.assert_array_equal(a, b)

    @pytest.mark.parametrize("spec", ALL_SPECS, ids=format_spec)
    def test_empty_training_set_gives_dummy(self, spec):
        model = fit_arrays(spec, np.zeros((0, 2)), np.zeros((0, 1)))
        assert isinstance(model, DummyPredictor)
        assert model.predict([0.0, 0.0]) is STAR

    def test_fit_skips_dummies(self, small_seq):
        masked = mask(small_seq, 2, 4)
        a = fit(Ridge(), masked).predict_array(small_seq.features)
        keep = masked.present
        b = fit(Ridge(), (small_seq.features[keep], small_seq.responses[keep])).predict_array(
            small_seq.features)
        np.testing.assert_array_equal(a, b)

    def test_predict_dummy_covariate(self, xy):
        assert fit(Ridge(), xy).predict(STAR) is STAR

    def test_predict_shape_checked(self, xy):
        with pytest.raises(ValueError, match="shape"):
            fit(Ridge(), xy).predict([1.0, 2.0])


class TestSpecs:
    @pytest.mark.parametrize("spec", ALL_SPECS + [Ridge(0.5, intercept=True)], ids=format_spec)
    def test_dict_round_trip(self, spec):
        assert spec_from_dict(spec_to_dict(spec)) == spec

    @pytest.mark.parametrize("text,expected", [
        ("ridge", Ridge()), ("knn:3", KNN(3)), ("kernel:0.25", Kernel(0.25)),
        ("tree:4:3", Tree(4, 3)), ("mlp:16", MLP(16)),
        ("count:knn:10", CountFeature(KNN(10))),
    ])
    def test_parse(self, text, expected):
        assert parse_spec(text) == expected

    @given(st.integers(1, 500))
    def test_string_round_trip(self, k):
        assert parse_spec(format_spec(KNN(k))) == KNN(k)

    @pytest.mark.parametrize("bad", ["svm", "knn:1:2", "count", "knn:x"])
    def test_bad_strings(self, bad):
        with pytest.raises(ValueError):
            parse_spec(bad)


class TestStability:
    def test_ridge_with_no_masked_change_tolerance(self, small_seq):
        nu = estimate_oos_stability(Ridge(), small_seq, 2, t=1e9, trials=30)
        assert nu == 0.0

    def test_knn_rate_on_fresh_sequences(self):
        def gen(seed):
            r = np.random.default_rng(seed)
            X = r.normal(size=(61, 2))
            return LiftedSequence.from_arrays(X, X[:, :1])
        nu = estimate_oos_stability(KNN(3), gen(0), 2, trials=400, generator=gen)
        # a length-2 block can only move the score if it hits one of 3 neighbors
        assert nu <= 3 * 2 / 60 + 3 * np.sqrt(0.1 * 0.9 / 400)

    @pytest.mark.parametrize("ell", [0, 11])
    def test_bad_block(self, small_seq, ell):
        with pytest.raises(ValueError):
            estimate_oos_stability(KNN(1), small_seq, ell)

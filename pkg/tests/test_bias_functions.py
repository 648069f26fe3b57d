import numpy as np
import pytest

from trustbias import (
    BiasFunctionSpec,
    DimensionError,
    DomainError,
    VariantMismatchError,
    evaluate_bias,
    generate_synthetic,
    l1_avg_bias,
    l1_max_bias,
    l2_avg_bias,
    l2_avg_signed_bias,
    l2_max_bias,
    l2_max_signed_bias,
    mb_bias,
    mb_raw_bias,
    resolve_spec,
)
from conftest import make_signed_twin, single_rater_graph


def rater_with(weights, prestige):
    """Node 0 rating nodes 1..k; prestige vector aligned to that layout."""
    g = single_rater_graph(weights)
    r = np.concatenate(([0.0], np.asarray(prestige, dtype=float)))
    return g, r


class TestSpec:
    def test_unknown_variant(self):
        with pytest.raises(DomainError):
            BiasFunctionSpec("l3-avg", 0.5)

    def test_decay_range(self):
        with pytest.raises(DomainError):
            BiasFunctionSpec("l1-avg", 1.0)
        with pytest.raises(DomainError):
            BiasFunctionSpec("l1-avg", -0.1)
        BiasFunctionSpec("l1-avg", 0.0)  # boundary is fine

    def test_mb_ignores_decay(self):
        assert BiasFunctionSpec("mb", 0.9).effective_contraction == 0.5
        assert BiasFunctionSpec("l1-avg", 0.3).effective_contraction == 0.3

    def test_l2_variants_need_matching_signedness(self, small_unsigned, small_signed):
        with pytest.raises(VariantMismatchError):
            BiasFunctionSpec("l2-avg", 0.5).validate_for_graph(small_signed)
        with pytest.raises(VariantMismatchError):
            BiasFunctionSpec("l2-max-signed", 0.5).validate_for_graph(small_unsigned)

    def test_signed_l1_decay_cap(self, small_signed):
        with pytest.raises(DomainError):
            BiasFunctionSpec("l1-avg", 0.6).validate_for_graph(small_signed)
        BiasFunctionSpec("l1-avg", 0.5).validate_for_graph(small_signed)

    def test_resolve_substitutes_on_signed(self, small_signed, small_unsigned):
        spec = resolve_spec(BiasFunctionSpec("l2-avg", 0.5), small_signed)
        assert spec.variant == "l2-avg-signed"
        assert resolve_spec(BiasFunctionSpec("l2-avg", 0.5), small_unsigned).variant == "l2-avg"


class TestMbBias:
    def test_agreement_gives_zero(self):
        g, r = rater_with([0.4, 0.7], [0.4, 0.7])
        assert mb_bias(r, g)[0] == 0.0

    def test_cancellation(self):
        # opposite differences of equal size cancel in the signed mean
        g, r = rater_with([0.1, 0.9], [0.8, 0.2])
        assert mb_bias(r, g)[0] == pytest.approx(0.0)
        assert mb_raw_bias(r, g)[0] == pytest.approx(0.0)

    def test_single_edge(self):
        g, r = rater_with([1.0], [0.0])
        assert mb_bias(r, g)[0] == pytest.approx(0.5)

    def test_negative_mean_clipped_but_raw_keeps_sign(self):
        g, r = rater_with([0.1], [0.9])
        assert mb_bias(r, g)[0] == 0.0
        assert mb_raw_bias(r, g)[0] == pytest.approx(-0.4)

    def test_dimension_mismatch(self, small_unsigned):
        with pytest.raises(DimensionError):
            mb_bias(np.zeros(3), small_unsigned)


class TestL1Bias:
    def test_agreement_gives_zero(self):
        g, r = rater_with([0.4, 0.7], [0.4, 0.7])
        assert l1_avg_bias(r, g, 0.5)[0] == 0.0

    def test_no_cancellation(self):
        g, r = rater_with([0.1, 0.9], [0.8, 0.2])
        assert l1_avg_bias(r, g, 0.5)[0] == pytest.approx(0.35)

    def test_zero_decay(self, small_unsigned):
        r = np.random.default_rng(0).random(small_unsigned.node_count)
        assert np.all(l1_avg_bias(r, small_unsigned, 0.0) == 0.0)
        assert np.all(l1_max_bias(r, small_unsigned, 0.0) == 0.0)

    def test_max_variant(self):
        g, r = rater_with([0.5, 0.5], [0.5, 0.4])
        assert l1_max_bias(r, g, 0.5)[0] == pytest.approx(0.05)

    def test_single_edge_max_equals_avg(self):
        g, r = rater_with([0.9], [0.3])
        assert l1_max_bias(r, g, 0.5)[0] == l1_avg_bias(r, g, 0.5)[0]


class TestL2Bias:
    def test_agreement_gives_zero(self):
        g, r = rater_with([0.4, 0.7], [0.4, 0.7])
        assert l2_avg_bias(r, g, 0.5)[0] == 0.0
        assert l2_max_bias(r, g, 0.5)[0] == 0.0

    def test_single_edge_value(self):
        g, r = rater_with([1.0], [0.0])
        assert l2_avg_bias(r, g, 0.5)[0] == pytest.approx(0.25)
        assert l2_max_bias(r, g, 0.5)[0] == pytest.approx(0.25)

    def test_pair_value(self):
        g, r = rater_with([0.1, 0.9], [0.8, 0.2])
        assert l2_avg_bias(r, g, 0.5)[0] == pytest.approx(0.1225)
        assert l2_max_bias(r, g, 0.5)[0] == pytest.approx(0.1225)

    def test_rejected_on_signed_graph(self, small_signed):
        r = np.zeros(small_signed.node_count)
        with pytest.raises(VariantMismatchError):
            l2_avg_bias(r, small_signed, 0.5)
        with pytest.raises(VariantMismatchError):
            l2_max_bias(r, small_signed, 0.5)


class TestSignedL2Bias:
    def test_agreement_gives_zero(self):
        g, r = rater_with([-0.4, 0.7], [-0.4, 0.7])
        assert l2_avg_signed_bias(r, g, 0.5)[0] == 0.0

    def test_extreme_difference(self):
        g, r = rater_with([-1.0], [1.0])
        assert l2_avg_signed_bias(r, g, 0.5)[0] == pytest.approx(0.5)
        assert l2_max_signed_bias(r, g, 0.5)[0] == pytest.approx(0.5)

    def test_half_of_unsigned_form(self, small_unsigned):
        twin = make_signed_twin(small_unsigned)
        r = np.random.default_rng(1).random(small_unsigned.node_count)
        np.testing.assert_array_equal(
            l2_avg_signed_bias(r, twin, 0.5), l2_avg_bias(r, small_unsigned, 0.5) / 2.0
        )
        np.testing.assert_array_equal(
            l2_max_signed_bias(r, twin, 0.5), l2_max_bias(r, small_unsigned, 0.5) / 2.0
        )

    def test_rejected_on_unsigned_graph(self, small_unsigned):
        r = np.zeros(small_unsigned.node_count)
        with pytest.raises(VariantMismatchError):
            l2_avg_signed_bias(r, small_unsigned, 0.5)
        with pytest.raises(VariantMismatchError):
            l2_max_signed_bias(r, small_unsigned, 0.5)


class TestSharedProperties:
    def test_no_out_edges_means_zero_bias(self):
        g = single_rater_graph([0.5, 0.7])  # nodes 1, 2 rate nobody
        r = np.array([0.9, 0.1, 0.2])
        for spec in (BiasFunctionSpec("mb"), BiasFunctionSpec("l1-avg", 0.5),
                     BiasFunctionSpec("l1-max", 0.5), BiasFunctionSpec("l2-avg", 0.5),
                     BiasFunctionSpec("l2-max", 0.5)):
            assert np.all(evaluate_bias(spec, r, g)[1:] == 0.0)

    def test_avg_equals_max_on_single_out_edge(self):
        rng = np.random.default_rng(3)
        g = generate_synthetic(30, 1, "uniform", seed=11)
        r = rng.random(30)
        np.testing.assert_array_equal(l1_avg_bias(r, g, 0.4), l1_max_bias(r, g, 0.4))
        np.testing.assert_array_equal(l2_avg_bias(r, g, 0.4), l2_max_bias(r, g, 0.4))

    def test_contraction_and_range_quick(self):
        rng = np.random.default_rng(5)
        cases = [("mb", False), ("l1-avg", False), ("l1-max", False), ("l2-avg", False),
                 ("l2-max", False), ("l2-avg-signed", True), ("l2-max-signed", True)]
        for variant, signed in cases:
            g = generate_synthetic(25, 3, "signed" if signed else "uniform",
                                   seed=int(rng.integers(0, 1000)))
            lo = -1.0 if signed else 0.0
            for _ in range(25):
                decay = float(rng.uniform(0.0, 0.95))
                spec = BiasFunctionSpec(variant, decay)
                x = rng.uniform(lo, 1.0, g.node_count)
                y = rng.uniform(lo, 1.0, g.node_count)
                fx, fy = evaluate_bias(spec, x, g), evaluate_bias(spec, y, g)
                bound = spec.effective_contraction * np.max(np.abs(x - y)) + 1e-12
                assert np.all(np.abs(fx - fy) <= bound)
                assert fx.min() >= 0.0 and fx.max() <= 1.0 + 1e-12

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import scipy_t_from_summaries, scipy_two_tailed_p
from starmotif import (
    AgentType,
    ConfigError,
    DegenerateVarianceError,
    InsufficientSampleError,
    MetricRecord,
    SampleSummary,
    TestVariant,
    bonferroni,
    compare_bots_humans,
    regularized_incomplete_beta,
    t_p_value,
    two_sample_t,
)


def summaries_of(values):
    return SampleSummary.from_values(values)


class TestTwoSampleT:
    def test_identical_samples_give_zero(self):
        a = summaries_of([1.0, 2.0, 3.0])
        t, df = two_sample_t(a, a)
        assert t == 0.0
        assert df == 4.0

    def test_known_student_case(self):
        a = SampleSummary(10, 1.0, 1.0)
        b = SampleSummary(10, 0.0, 1.0)
        t, df = two_sample_t(a, b)
        assert df == 18.0
        assert t == pytest.approx(2.2360679774997896, abs=1e-12)

    @pytest.mark.parametrize("variant, equal_var", [
        (TestVariant.STUDENT, True),
        (TestVariant.WELCH, False),
    ])
    def test_against_scipy(self, variant, equal_var):
        a = SampleSummary(12, 3.25, 2.5)
        b = SampleSummary(7, 1.5, 0.75)
        t, df = two_sample_t(a, b, variant)
        ref_t, ref_p = scipy_t_from_summaries(a, b, equal_var=equal_var)
        assert t == pytest.approx(ref_t, abs=1e-12)
        assert t_p_value(t, df) == pytest.approx(ref_p, abs=1e-12)

    def test_zero_variance_equal_means_defined(self):
        a = SampleSummary(5, 2.0, 0.0)
        assert two_sample_t(a, a) == (0.0, 8.0)

    def test_zero_variance_unequal_means_errors(self):
        a = SampleSummary(5, 2.0, 0.0)
        b = SampleSummary(5, 3.0, 0.0)
        with pytest.raises(DegenerateVarianceError):
            two_sample_t(a, b)

    def test_antisymmetry_under_group_swap(self):
        a = SampleSummary(9, 0.8, 0.4)
        b = SampleSummary(14, 0.1, 0.9)
        for variant in TestVariant:
            t_ab, df_ab = two_sample_t(a, b, variant)
            t_ba, df_ba = two_sample_t(b, a, variant)
            assert abs(t_ab + t_ba) < 1e-12
            assert df_ab == df_ba
            assert abs(t_p_value(t_ab, df_ab) - t_p_value(t_ba, df_ba)) < 1e-12

    def test_sample_summary_validation(self):
        with pytest.raises(Exception):
            SampleSummary(1, 0.0, 1.0)
        with pytest.raises(Exception):
            SampleSummary(3, 0.0, -1.0)
        with pytest.raises(Exception):
            SampleSummary.from_values([1.0])


class TestPValue:
    def test_zero_statistic_gives_one_exactly(self):
        assert t_p_value(0.0, 5.0) == 1.0
        assert t_p_value(0.0, 0.5) == 1.0

    def test_known_case(self):
        # Frozen from the reference incomplete-beta oracle.
        assert t_p_value(2.0, 18.0) == pytest.approx(0.06082146566933253, abs=1e-10)

    def test_monotone_decreasing_in_abs_t(self):
        values = [t_p_value(t, 7.0) for t in (0.0, 0.5, 1.0, 2.0, 5.0, 20.0, 90.0)]
        assert values == sorted(values, reverse=True)
        assert values[-1] < 1e-10

    def test_tends_to_zero(self):
        assert t_p_value(1e6, 3.0) < 1e-12

    def test_matches_scipy_on_grid(self):
        for df in (1, 2, 3.5, 7, 18, 30, 64, 120):
            for t in (0.01, 0.3, 1.0, 2.5, 7.0, 25.0, 100.0):
                assert t_p_value(t, df) == pytest.approx(
                    scipy_two_tailed_p(t, df), abs=1e-10
                ), (t, df)

    def test_normal_approximation_envelope(self):
        # For df >= 30 and |t| <= 5 the normal tail is within 0.01.
        for df in (30, 60, 200):
            for t in (0.5, 1.0, 2.0, 3.5, 5.0):
                normal = 2.0 * (1.0 - 0.5 * (1.0 + math.erf(t / math.sqrt(2.0))))
                assert abs(t_p_value(t, df) - normal) < 0.01

    def test_df_must_be_positive(self):
        with pytest.raises(Exception):
            t_p_value(1.0, 0.0)

    def test_only_two_sided_supported(self):
        with pytest.raises(ConfigError):
            t_p_value(1.0, 3.0, tails="greater")


class TestIncompleteBeta:
    def test_matches_scipy(self):
        from scipy.special import betainc as scipy_betainc

        for a in (0.5, 1.0, 2.5, 9.0, 50.0):
            for b in (0.5, 1.0, 4.0):
                for x in (0.0, 1e-6, 0.1, 0.5, 0.9, 1 - 1e-6, 1.0):
                    assert regularized_incomplete_beta(a, b, x) == pytest.approx(
                        float(scipy_betainc(a, b, x)), abs=1e-10
                    ), (a, b, x)

    def test_domain_checks(self):
        with pytest.raises(Exception):
            regularized_incomplete_beta(-1.0, 1.0, 0.5)
        with pytest.raises(Exception):
            regularized_incomplete_beta(1.0, 1.0, 1.5)


class TestBonferroni:
    def test_table_values_at_m_12(self):
        assert bonferroni(8.09e-3, 12) == pytest.approx(9.708e-2, rel=1e-9)
        assert bonferroni(1.59e-1, 12) == 1.0
        assert bonferroni(2.96e-8, 12) == pytest.approx(3.552e-7, rel=1e-9)

    def test_identity_at_m_one(self):
        assert bonferroni(0.123, 1) == 0.123

    @given(st.floats(min_value=0, max_value=1), st.integers(min_value=1, max_value=1000))
    def test_never_decreases_never_exceeds_one(self, p, m):
        corrected = bonferroni(p, m)
        assert corrected >= p
        assert corrected <= 1.0

    def test_validation(self):
        with pytest.raises(Exception):
            bonferroni(1.2, 3)
        with pytest.raises(ConfigError):
            bonferroni(0.5, 0)


def records(bot_values, human_values, metric="total_degree"):
    rows = []
    for i, v in enumerate(bot_values):
        rows.append(MetricRecord(f"b{i}", AgentType.BOT, v, v, v))
    for i, v in enumerate(human_values):
        rows.append(MetricRecord(f"h{i}", AgentType.HUMAN, v, v, v))
    return rows


class TestCompareBotsHumans:
    def test_identical_constants_degenerate(self):
        with pytest.raises(DegenerateVarianceError):
            compare_bots_humans(records([1.0, 1.0], [1.0, 1.0]))

    def test_equal_means_and_variances(self):
        out = compare_bots_humans(records([1, 1, 2, 2], [1, 2, 1, 2]),
                                  metrics=["total_degree"])
        (result,) = out
        assert result.t_statistic == 0.0
        assert result.p_value == 1.0
        assert result.corrected_p == 1.0
        assert not result.significant

    def test_separated_groups_significant(self):
        bots = [1.0 + 0.01 * i for i in range(10)]
        humans = [0.0 + 0.01 * i for i in range(10)]
        out = compare_bots_humans(records(bots, humans))
        assert all(r.significant for r in out)
        ref_t, ref_p = scipy_t_from_summaries(
            SampleSummary.from_values(bots), SampleSummary.from_values(humans)
        )
        assert out[0].t_statistic == pytest.approx(ref_t, abs=1e-10)
        assert out[0].p_value == pytest.approx(ref_p, abs=1e-10)

    def test_insufficient_sample_names_group(self):
        with pytest.raises(InsufficientSampleError, match="bot"):
            compare_bots_humans(records([1.0], [0.0, 0.1, 0.2]))
        with pytest.raises(InsufficientSampleError, match="human"):
            compare_bots_humans(records([1.0, 1.1], [0.0]))

    def test_m_defaults_to_metric_count_and_is_overridable(self):
        rows = records([1.0, 1.1, 1.2], [0.0, 0.05, 0.1])
        default = compare_bots_humans(rows, metrics=["betweenness"])
        assert default[0].corrected_p == default[0].p_value
        at_12 = compare_bots_humans(rows, metrics=["betweenness"], m=12)
        assert at_12[0].corrected_p == pytest.approx(
            min(1.0, default[0].p_value * 12), rel=1e-12
        )

    def test_unknown_metric_rejected(self):
        with pytest.raises(ConfigError):
            compare_bots_humans(records([1, 2], [3, 4]), metrics=["pagerank"])

    def test_empty_metrics_rejected(self):
        with pytest.raises(ConfigError):
            compare_bots_humans(records([1, 2], [3, 4]), metrics=[])

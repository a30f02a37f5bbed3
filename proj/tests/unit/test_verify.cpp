#include <cmath>
#include <cstdlib>
#include <string>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "tentkit/error.hpp"
#include "tentkit/verify.hpp"

using namespace tentkit;
using nlohmann::json;

namespace {

ExperimentSpec small_spec()
{
    ExperimentSpec s;
    s.name = "unit";
    s.grid = GridSpec::make(1, 1.0, 32, 1.0 / 1024.0, 0.25, 10);
    s.family_params.k_lo = 2;
    s.family_params.k_hi = 12;
    s.family_params.modes = 8;
    s.samples = 4;
    s.seed = 11;
    s.refine = false;
    s.sensitivity = false;
    return s;
}

} // namespace

TEST(SpecHash, StableAndSensitive)
{
    auto a = small_spec();
    auto b = small_spec();
    EXPECT_EQ(spec_json(a), spec_json(b));
    EXPECT_EQ(spec_hash(a), spec_hash(b));
    EXPECT_EQ(spec_hash(a).size(), 16u);
    b.seed = 12;
    EXPECT_NE(spec_hash(a), spec_hash(b));
    auto j = json::parse(spec_json(a));
    EXPECT_TRUE(j.is_object());
}

TEST(RefineGrid, DoublesPointsAndIntervals)
{
    auto g = GridSpec::make(2, 1.0, 16, 1.0 / 64.0, 0.25, 8);
    auto r = refine_grid(g);
    EXPECT_EQ(r.points, 32);
    EXPECT_EQ(r.levels, 15);
    EXPECT_EQ(r.n, 2);
    EXPECT_DOUBLE_EQ(r.t_min, g.t_min);
    EXPECT_DOUBLE_EQ(r.t_max, g.t_max);
    EXPECT_NEAR(r.rho() * r.rho(), g.rho(), 1e-12);
}

TEST(BandSummary, MinMaxBand)
{
    auto b = BandSummary::of({2.0, 0.5, 1.0, 4.0});
    EXPECT_EQ(b.min, 0.5);
    EXPECT_EQ(b.max, 4.0);
    EXPECT_EQ(b.band, 8.0);
    auto e = BandSummary::of({});
    EXPECT_EQ(e.band, 0.0);
}

TEST(Verdict, Strings)
{
    EXPECT_EQ(to_string(Verdict::pass), "pass");
    EXPECT_EQ(to_string(Verdict::fail), "fail");
    EXPECT_EQ(to_string(Verdict::out_of_theory), "out-of-theory");
}

TEST(Heat, DeterministicForSeed)
{
    auto s = small_spec();
    auto r1 = run_heat_characterization(s);
    auto r2 = run_heat_characterization(s);
    EXPECT_EQ(r1.label, "in-theory");
    ASSERT_EQ(r1.base.ratios.size(), 4u);
    EXPECT_EQ(r1.base.ratios, r2.base.ratios);
    EXPECT_EQ(report_json(r1, s), report_json(r2, s));
    EXPECT_GE(r1.base.band, 1.0);
}

TEST(Heat, ThreadCountDoesNotChangeResults)
{
    auto s = small_spec();
    setenv("TENTKIT_THREADS", "1", 1);
    EXPECT_EQ(thread_count(), 1);
    auto r1 = run_heat_characterization(s);
    setenv("TENTKIT_THREADS", "3", 1);
    EXPECT_EQ(thread_count(), 3);
    auto r3 = run_heat_characterization(s);
    unsetenv("TENTKIT_THREADS");
    EXPECT_GE(thread_count(), 1);
    EXPECT_EQ(r1.base.ratios, r3.base.ratios);
}

TEST(Heat, OutOfTheoryIsLabelledNotRun)
{
    auto s = small_spec();
    s.s = 0.25;
    auto r = run_heat_characterization(s);
    EXPECT_EQ(r.verdict, Verdict::out_of_theory);
    EXPECT_NE(r.label.find("s < 0"), std::string::npos);
    EXPECT_TRUE(r.base.ratios.empty());

    s.variant = "gradient";
    s.s = 1.0;
    EXPECT_EQ(run_heat_characterization(s).verdict, Verdict::out_of_theory);
    s.s = 0.5;
    EXPECT_NE(run_heat_characterization(s).verdict, Verdict::out_of_theory);

    s.variant = "sideways";
    EXPECT_THROW(run_heat_characterization(s), Error);
}

TEST(Heat, RefinementFillsStability)
{
    auto s = small_spec();
    s.refine = true;
    auto r = run_heat_characterization(s);
    ASSERT_EQ(r.refined.ratios.size(), 4u);
    const double expect = std::max(std::abs(r.refined.min / r.base.min - 1.0), std::abs(r.refined.max / r.base.max - 1.0));
    EXPECT_NEAR(r.stability, expect, 1e-12);
}

TEST(Report, EnvelopeFields)
{
    auto s = small_spec();
    auto r = run_heat_characterization(s);
    auto j = json::parse(report_json(r, s));
    EXPECT_EQ(j["schema"], "tentkit.report/1");
    EXPECT_EQ(j["kind"], "heat");
    EXPECT_EQ(j["spec_hash"], spec_hash(s));
    EXPECT_EQ(j["verdict"], to_string(r.verdict));
    EXPECT_EQ(j["label"], "in-theory");
    EXPECT_TRUE(j["spec"].is_object());
    EXPECT_EQ(j["base"]["ratios"].size(), 4u);
}

TEST(Report, BandCsvHasOneRowPerSample)
{
    auto s = small_spec();
    auto r = run_heat_characterization(s);
    auto csv = band_csv(r);
    int lines = 0;
    for (char c : csv) lines += c == '\n';
    EXPECT_GE(lines, 5); // header plus four samples
}

TEST(Global, LineAndOrderingAreValidated)
{
    auto s = small_spec();
    s.beta = -0.5;
    s.p = Exponent::finite(2.0);
    s.gamma = 0.0;
    s.q = Exponent::finite(2.0);
    EXPECT_THROW(run_global_estimate(s), Error); // off the line
    s.gamma = -0.75;
    s.q = Exponent::infinity(); // on the line, but gamma < beta
    EXPECT_THROW(run_global_estimate(s), Error);
}

TEST(Global, GammaAtMinusHalfIsOutOfTheory)
{
    auto s = small_spec();
    s.samples = 1;
    s.beta = -0.5;
    s.p = Exponent::finite(2.0);
    s.gamma = -0.5;
    s.q = Exponent::finite(2.0);
    auto r = run_global_estimate(s);
    EXPECT_EQ(r.verdict, Verdict::out_of_theory);
    EXPECT_NE(r.label.find("gamma <= -1/2"), std::string::npos);
}

TEST(Embedding, ChainValidation)
{
    auto s = small_spec();
    s.chain = {{-0.5, Exponent::finite(2.0)}, {-0.5, Exponent::finite(2.0)}};
    EXPECT_THROW(run_embedding_sweep(s), Error);
    s.chain = {{-0.5, Exponent::finite(4.0)}, {-0.5, Exponent::finite(2.0)}, {-0.5, Exponent::finite(8.0)}};
    EXPECT_THROW(run_embedding_sweep(s), Error);
    s.chain = {{-0.5, Exponent::finite(1.0)}, {-0.5, Exponent::finite(2.0)}, {-0.5, Exponent::finite(4.0)}};
    EXPECT_THROW(run_embedding_sweep(s), Error); // not on one line
}

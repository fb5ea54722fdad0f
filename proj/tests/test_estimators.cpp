// SPDX-License-Identifier: Apache-2.0
//
// twdp-sim: sum-of-sinusoids simulator for TWDP fading channels
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "twdp/estimators.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace twdp;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

ScenarioConfig kg_config(double k, double gamma, std::uint64_t seed)
{
    ScenarioConfig cfg;
    cfg.params = ChannelParams::from_k_gamma(k, gamma);
    cfg.seed = seed;
    return cfg;
}

// Ensemble of `m` copies of one synthetic sample sequence.
TraceEnsemble synthetic(const std::vector<cplx> &samples, std::size_t m = 3)
{
    ScenarioConfig cfg;
    cfg.n_trials = static_cast<std::int64_t>(m);
    cfg.n_samples = static_cast<std::int64_t>(samples.size());
    const auto s = require_valid(cfg);
    std::vector<FadingTrace> traces(m);
    for (std::size_t i = 0; i < m; ++i)
    {
        traces[i].samples = samples;
        traces[i].sample_period_s = cfg.sample_period_s;
        traces[i].trial_index = static_cast<std::uint32_t>(i);
    }
    return assemble_ensemble(s, std::move(traces));
}

double max_abs_diff(const std::vector<double> &a, const std::vector<double> &b)
{
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, std::abs(a[i] - b[i]));
    return worst;
}

double rms_diff(const std::vector<double> &a, const std::vector<double> &b)
{
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        ss += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(ss / static_cast<double>(a.size()));
}

const LagGrid fig_grid = LagGrid::normalized(10.0, 0.01, 1000.0);

} // namespace

TEST_CASE("AnchorPolicy: every tenth sample, clear of the last max-lag window")
{
    const auto a = AnchorPolicy{}.anchors(3000, 1000);
    REQUIRE(a.size() == 200);
    CHECK(a.front() == 0);
    CHECK(a.back() == 1990);
    AnchorPolicy late{10, 1000, 1999};
    CHECK(late.anchors(3000, 1000).front() == 1000);
    CHECK(late.anchors(3000, 1000).back() == 1990);
    AnchorPolicy early{10, 0, 999};
    CHECK(early.anchors(3000, 1000).back() == 990);
    CHECK_THROWS_AS(AnchorPolicy{}.anchors(100, 100), std::out_of_range);
    CHECK_THROWS_AS((AnchorPolicy{0, 0, std::nullopt}.anchors(100, 1)), std::invalid_argument);
}

TEST_CASE("ensemble_correlation: constant unit ensemble")
{
    const auto ens = synthetic(std::vector<cplx>(2000, cplx{1.0, 0.0}));
    for (auto kind : {CorrelationKind::rzz_real, CorrelationKind::rsq, CorrelationKind::rxx})
    {
        const auto s = ensemble_correlation(ens, kind, fig_grid);
        CHECK(s.source == SeriesSource::empirical);
        CHECK(s.n_trials == 3u);
        for (std::size_t i = 0; i < s.values.size(); ++i)
        {
            REQUIRE(s.values[i] == 1.0);
            REQUIRE(s.std_errors[i] == 0.0);
        }
    }
    for (double v : ensemble_correlation(ens, CorrelationKind::rzz_imag, fig_grid).values)
        REQUIRE(v == 0.0);
}

TEST_CASE("ensemble_correlation: lag products follow the conjugation convention")
{
    // z[n] = exp(j w n): z(t) conj(z(t+tau)) = exp(-j w lag)
    const double w = 0.05;
    std::vector<cplx> tone(1500);
    for (std::size_t n = 0; n < tone.size(); ++n)
        tone[n] = std::polar(1.0, w * double(n));
    const auto ens = synthetic(tone);
    const auto grid = LagGrid::normalized(1.0, 0.01, 1000.0);
    const auto re = ensemble_correlation(ens, CorrelationKind::rzz_real, grid);
    const auto im = ensemble_correlation(ens, CorrelationKind::rzz_imag, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        REQUIRE_THAT(re.values[i], WithinAbs(std::cos(w * double(i)), 1e-12));
        REQUIRE_THAT(im.values[i], WithinAbs(-std::sin(w * double(i)), 1e-12));
    }
}

TEST_CASE("ensemble_correlation: rejects lags off the sample grid or beyond the trace")
{
    const auto ens = synthetic(std::vector<cplx>(500, cplx{1.0, 0.0}));
    LagGrid off;
    off.doppler_hz = 1000.0;
    off.lags_s = {0.0, 1.5e-5};
    CHECK_THROWS_AS(ensemble_correlation(ens, CorrelationKind::rxx, off), std::invalid_argument);
    LagGrid far;
    far.doppler_hz = 1000.0;
    far.lags_s = {0.0, 500e-5};
    CHECK_THROWS_AS(ensemble_correlation(ens, CorrelationKind::rxx, far), std::out_of_range);
}

TEST_CASE("ensemble_correlation: single pure tone")
{
    ScenarioConfig cfg;
    cfg.params = ChannelParams::from_amplitudes(1.0, 0.0, 0.0);
    cfg.seed = 5;
    const auto s = require_valid(cfg);
    const auto emp = ensemble_correlation(generate_ensemble(s), CorrelationKind::rxx, fig_grid);
    std::vector<double> expected;
    for (double tau : fig_grid.lags_s)
        expected.push_back(0.5 * std::cos(s.tone1().phase_rate * tau));
    CHECK(max_abs_diff(emp.values, expected) <= 0.03);
}

TEST_CASE("ensemble_correlation: K = 10, Gamma = 0.5 against the closed forms")
{
    const auto s = require_valid(kg_config(10.0, 0.5, 11));
    const auto ens = generate_ensemble(s);
    const auto rxx = ensemble_correlation(ens, CorrelationKind::rxx, fig_grid);
    const auto ryy = ensemble_correlation(ens, CorrelationKind::ryy, fig_grid);
    const auto rxy = ensemble_correlation(ens, CorrelationKind::rxy, fig_grid);
    const auto ryx = ensemble_correlation(ens, CorrelationKind::ryx, fig_grid);
    const auto oracle = closed_form(CorrelationKind::rxx, SeriesSource::simulator_formula, s, fig_grid);
    CHECK(max_abs_diff(rxx.values, oracle.values) <= 0.05);
    CHECK(max_abs_diff(rxx.values, ryy.values) <= 0.05);
    std::vector<double> neg_ryx;
    for (double v : ryx.values)
        neg_ryx.push_back(-v);
    CHECK(max_abs_diff(rxy.values, neg_ryx) <= 0.1);
}

TEST_CASE("property: correlation error shrinks with the number of trials")
{
    const auto grid = LagGrid::normalized(2.0, 0.01, 1000.0);
    double rms500 = 0.0, rms2000 = 0.0;
    for (std::uint64_t k = 0; k < 10; ++k)
    {
        auto cfg = kg_config(10.0, 0.5, 300 + k);
        cfg.n_samples = 1000;
        const auto small = require_valid(cfg);
        const auto big = small.with_trials(2000).with_seed(400 + k);
        const auto oracle = closed_form(CorrelationKind::rxx, SeriesSource::simulator_formula, small, grid).values;
        rms500 += rms_diff(ensemble_correlation(generate_ensemble(small), CorrelationKind::rxx, grid).values, oracle);
        rms2000 += rms_diff(ensemble_correlation(generate_ensemble(big), CorrelationKind::rxx, grid).values, oracle);
    }
    CHECK(rms2000 < rms500);
}

TEST_CASE("property: early and late anchor sets agree")
{
    const auto s = require_valid(kg_config(10.0, 1.0, 21));
    const auto ens = generate_ensemble(s);
    const auto early = ensemble_correlation(ens, CorrelationKind::rzz_real, fig_grid, {10, 0, 999});
    const auto late = ensemble_correlation(ens, CorrelationKind::rzz_real, fig_grid, {10, 1000, 1999});
    CHECK(max_abs_diff(early.values, late.values) <= 0.1);
}

TEST_CASE("decorrelation_stride: two Doppler periods")
{
    CHECK(decorrelation_stride(1000.0, 1e-5) == 200);
    CHECK(decorrelation_stride(1000.0, 3e-4) == 7);
    CHECK(1000.0 * 7 * 3e-4 >= 2.0);
}

TEST_CASE("histogram_density: constant envelope fills one bin")
{
    const auto ens = synthetic(std::vector<cplx>(1000, cplx{0.6, 0.8}));
    const auto h = envelope_pdf(ens, 100, 0.0, 3.0);
    const double w = 0.03;
    int occupied = 0;
    for (std::size_t i = 0; i < h.densities.size(); ++i)
        if (h.densities[i] > 0.0)
        {
            ++occupied;
            CHECK_THAT(h.densities[i], WithinRel(1.0 / w, 1e-12));
            CHECK(h.bin_edges[i] <= 1.0);
            CHECK(h.bin_edges[i + 1] > 1.0);
        }
    CHECK(occupied == 1);
    CHECK(h.n_samples == 3 * 5);
}

TEST_CASE("histogram_density: normalized, non-negative, with out-of-range accounting")
{
    std::vector<double> v;
    for (int i = 0; i < 10000; ++i)
        v.push_back(std::fmod(i * 0.618034, 3.5));
    const auto h = histogram_density(v, 37, 0.0, 3.0);
    double total = 0.0;
    for (std::size_t i = 0; i < h.densities.size(); ++i)
    {
        CHECK(h.densities[i] >= 0.0);
        total += h.densities[i] * (h.bin_edges[i + 1] - h.bin_edges[i]);
    }
    CHECK_THAT(total, WithinAbs(1.0, 1e-12));
    CHECK(h.n_samples + h.n_out_of_range == v.size());
    CHECK(h.bin_centers().size() == 37);
    CHECK_THROWS_AS(histogram_density(v, 1, 0.0, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(histogram_density({}, 10, 0.0, 3.0), std::invalid_argument);
    CHECK_THROWS_AS(histogram_density(v, 10, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("envelope_pdf: Rayleigh picks follow 1 - exp(-z^2)")
{
    // 64 sinusoids: at 8 the diffuse sum is visibly non-Gaussian at this sample size.
    auto cfg = kg_config(0.0, 0.0, 61);
    cfg.n_sinusoids = 64;
    cfg.n_samples = 40000;
    const auto ens = generate_ensemble(require_valid(cfg));
    const auto picks = envelope_picks(ens);
    REQUIRE(picks.size() == 100000);
    CHECK(sup_cdf_distance(picks, oracle::rayleigh_cdf) <= 0.01);
}

TEST_CASE("envelope_pdf: K = 10, Gamma = 1 against the reference density per bin")
{
    auto cfg = kg_config(10.0, 1.0, 62);
    cfg.n_samples = 40000;
    const auto s = require_valid(cfg);
    const auto ens = generate_ensemble(s);
    const auto h = envelope_pdf(ens, 100, 0.0, 3.0);
    const EnvelopeCdf cdf(s.params(), 4.0, 0.001);
    const double n = static_cast<double>(h.n_samples + h.n_out_of_range);
    const double inside = static_cast<double>(h.n_samples) / n;
    double worst = 0.0;
    for (std::size_t b = 0; b < h.densities.size(); ++b)
    {
        const double w = h.bin_edges[b + 1] - h.bin_edges[b];
        const double prob = cdf(h.bin_edges[b + 1]) - cdf(h.bin_edges[b]);
        const double se = std::sqrt(prob * (1.0 - prob) / n) / w;
        if (se > 0.0)
            worst = std::max(worst, std::abs(h.densities[b] * inside - prob / w) / se);
    }
    // 100 simultaneous bins: 3.9 standard errors is the 1% family-wise level.
    CHECK(worst <= 3.9);
}

TEST_CASE("level_crossing_rate: ramp crosses once")
{
    std::vector<cplx> ramp(1001);
    for (std::size_t n = 0; n < ramp.size(); ++n)
        ramp[n] = {2.0 * double(n) / 1000.0, 0.0};
    const auto ens = synthetic(ramp);
    const double levels[] = {1.0, 5.0, 0.0};
    const auto curve = level_crossing_rate(ens, levels);
    const double t = 1000.0 * 1e-5;
    CHECK_THAT(curve.rates[0], WithinRel(1.0 / (t * 1000.0), 1e-12));
    CHECK(curve.rates[1] == 0.0);
    CHECK_THAT(curve.rates[2], WithinRel(1.0 / (t * 1000.0), 1e-12)); // sample 0 sits on the level
    CHECK_THAT(curve.std_errors[0], WithinAbs(0.0, 1e-12));
    CHECK_THAT(curve.observation_time_s, WithinRel(3.0 * t, 1e-12));
}

TEST_CASE("level_crossing_rate: constant traces give zero")
{
    const auto ens = synthetic(std::vector<cplx>(100, cplx{0.5, 0.0}));
    const double levels[] = {0.25, 0.5, 1.0};
    for (double r : level_crossing_rate(ens, levels).rates)
        CHECK(r == 0.0);
}

TEST_CASE("level_crossing_rate: Rayleigh oracle and vanishing tails")
{
    auto cfg = kg_config(0.0, 0.0, 71);
    cfg.aoa1 = pi / 2.0;
    cfg.aoa2 = -pi / 2.0;
    cfg.n_sinusoids = 64;
    cfg.n_samples = 10000;
    const auto ens = generate_ensemble(require_valid(cfg));
    const double levels[] = {1e-3, 0.5, 1.0, 2.0, 5.0};
    const auto curve = level_crossing_rate(ens, levels);
    for (int i = 1; i <= 3; ++i)
        CHECK_THAT(curve.rates[i], WithinRel(rayleigh_lcr_oracle(levels[i]), 0.05));
    CHECK(curve.rates[0] < 0.01);
    CHECK(curve.rates[4] == 0.0);
    for (double r : curve.rates)
        CHECK(r >= 0.0);
}

TEST_CASE("ensemble_mean: synthetic and simulated ensembles")
{
    CHECK(ensemble_mean(synthetic(std::vector<cplx>(50, cplx{0.0, 0.0}))).value == cplx{0.0, 0.0});
    const auto one = ensemble_mean(synthetic(std::vector<cplx>(50, cplx{1.0, 0.0})));
    CHECK(one.value == cplx{1.0, 0.0});
    CHECK(one.std_error == 0.0);

    const auto m = ensemble_mean(generate_ensemble(require_valid(kg_config(10.0, 0.5, 81))));
    CHECK(m.std_error > 0.0);
    CHECK(std::abs(m.value) <= 3.0 * m.std_error);
}

TEST_CASE("estimators reject empty ensembles")
{
    const auto s = require_valid(ScenarioConfig{});
    const TraceEnsemble empty{s, {}};
    CHECK_THROWS_AS(ensemble_mean(empty), std::invalid_argument);
    CHECK_THROWS_AS(envelope_pdf(empty), std::invalid_argument);
    CHECK_THROWS_AS(ensemble_correlation(empty, CorrelationKind::rxx, fig_grid), std::invalid_argument);
}

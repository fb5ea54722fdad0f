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

#include "twdp/sos.hpp"
#include "twdp/theory.hpp"

#include "oracles.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <functional>
#include <random>

using namespace twdp;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{

ValidatedScenario scenario_kg(double k, double gamma, double aoa1 = pi / 4.0, double aoa2 = 2.0 * pi / 3.0)
{
    ScenarioConfig cfg;
    cfg.params = ChannelParams::from_k_gamma(k, gamma);
    cfg.aoa1 = aoa1;
    cfg.aoa2 = aoa2;
    return require_valid(cfg);
}

LagGrid default_grid() { return LagGrid::normalized(10.0, 0.01, 1000.0); }

LagGrid signed_grid(double sign)
{
    LagGrid g;
    g.doppler_hz = 1000.0;
    for (int i = 0; i <= 200; ++i)
        g.lags_s.push_back(sign * i * 3.7e-5);
    return g;
}

double simpson(const std::function<double(double)> &f, double a, double b, int intervals)
{
    const double h = (b - a) / intervals;
    double s = f(a) + f(b);
    for (int i = 1; i < intervals; ++i)
        s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
    return s * h / 3.0;
}

} // namespace

TEST_CASE("bessel_j0: examples")
{
    CHECK(bessel_j0(0.0) == 1.0);
    CHECK_THAT(bessel_j0(2.404826), WithinAbs(0.0, 1e-6));
    CHECK_THAT(bessel_j0(1.0), WithinAbs(0.7651976866, 1e-9));
    CHECK(bessel_j0(-3.3) == bessel_j0(3.3));
}

TEST_CASE("bessel_j0: matches the long-double series up to |x| = 20")
{
    double worst = 0.0;
    for (double x = 0.0; x <= 20.0; x += 0.01)
        worst = std::max(worst, std::abs(bessel_j0(x) - oracle::j0_series(x)));
    CHECK(worst <= 1e-10);
}

TEST_CASE("bessel_j0: matches the standard library up to |x| = 1e4")
{
    double worst = 0.0;
    for (double x = 0.0; x <= 1e4; x += 0.37)
        worst = std::max(worst, std::abs(bessel_j0(x) - std::cyl_bessel_j(0.0, x)));
    // across the method crossovers
    for (double x : {7.999999, 8.0, 8.000001, 24.999999, 25.0, 25.000001})
        worst = std::max(worst, std::abs(bessel_j0(x) - std::cyl_bessel_j(0.0, x)));
    CHECK(worst <= 1e-10);
}

TEST_CASE("panel kernels: values at the origin")
{
    CHECK(f_c(0.0, 8) == 0.125);
    CHECK(f_s(0.0, 8) == 0.0);
    CHECK(f_c(0.0, 1) == 1.0);
}

TEST_CASE("panel kernels: agree with a fixed Simpson rule and respect the modulus bound")
{
    for (int n : {1, 4, 8, 16, 64})
        for (double x : {0.1, 0.5, 1.0, 2.4, 5.0, 10.0, 20.0, 63.0})
        {
            const auto k = panel_kernels(x, n);
            const auto o = oracle::panel_kernels_simpson(x, n);
            INFO("x = " << x << ", N = " << n);
            CHECK_THAT(k.fc, WithinAbs(o.fc, 1e-10));
            CHECK_THAT(k.fs, WithinAbs(o.fs, 1e-10));
            CHECK(k.fc >= 0.0);
            CHECK(k.fs >= 0.0);
            CHECK(k.fc + k.fs <= 1.0 / n + 1e-15);
            CHECK(f_c(x, n) == k.fc);
            CHECK(f_s(x, n) == k.fs);
        }
}

TEST_CASE("panel kernels: Monte-Carlo integration at (5, 8)")
{
    // Per-panel sample means of cos(x cos g); the delta method gives the standard error of the sum of
    // squared means.
    const double x = 5.0;
    const int n = 8;
    const int draws = 1'000'000;
    std::mt19937_64 rng(31337);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double estimate = 0.0, variance = 0.0;
    for (int m = 1; m <= n; ++m)
    {
        const double lo = (2.0 * pi * m - pi) / n;
        double s = 0.0, s2 = 0.0;
        for (int i = 0; i < draws; ++i)
        {
            const double c = std::cos(x * std::cos(lo + 2.0 * pi / n * u(rng)));
            s += c;
            s2 += c * c;
        }
        const double mean = s / draws;
        const double var = (s2 / draws - mean * mean) / draws;
        estimate += mean * mean / (n * n);
        variance += std::pow(2.0 * mean / (n * n), 2) * var;
    }
    CHECK(std::abs(f_c(x, n) - estimate) <= 3.0 * std::sqrt(variance));
}

TEST_CASE("LagGrid::normalized: ascending from zero, one lag per sample at the defaults")
{
    const auto g = default_grid();
    REQUIRE(g.size() == 1001);
    CHECK(g.lags_s.front() == 0.0);
    CHECK_THAT(g.lags_s.back(), WithinRel(0.01, 1e-12));
    for (std::size_t i = 1; i < g.size(); ++i)
        REQUIRE(g.lags_s[i] > g.lags_s[i - 1]);
    const auto fdt = g.fd_tau();
    CHECK_THAT(fdt[250], WithinAbs(2.5, 1e-12));
}

TEST_CASE("correlation kinds round trip through their names")
{
    for (auto k : {CorrelationKind::rxx, CorrelationKind::ryy, CorrelationKind::rxy, CorrelationKind::ryx,
                   CorrelationKind::rzz_real, CorrelationKind::rzz_imag, CorrelationKind::rsq})
        CHECK(parse_correlation_kind(to_string(k)) == k);
    CHECK_FALSE(parse_correlation_kind("rzz").has_value());
}

TEST_CASE("quadrature ACF: examples")
{
    const auto grid = default_grid();
    for (auto [k, g] : {std::pair{0.0, 0.0}, {10.0, 0.5}, {3.0, 1.0}})
    {
        const auto s = scenario_kg(k, g);
        CHECK_THAT(ref_acf_quadrature(s.params(), tone_rates(s), 1000.0, grid).values[0], WithinAbs(0.5, 1e-15));
    }

    const auto ray = scenario_kg(0.0, 0.0);
    LagGrid zero;
    zero.doppler_hz = 1000.0;
    zero.lags_s = {2.404826 / (2.0 * pi) / 1000.0};
    CHECK_THAT(ref_acf_quadrature(ray.params(), tone_rates(ray), 1000.0, zero).values[0], WithinAbs(0.0, 1e-6));

    const auto frozen = scenario_kg(1e12, 1.0, pi / 2.0, -pi / 2.0);
    for (double v : ref_acf_quadrature(frozen.params(), tone_rates(frozen), 1000.0, grid).values)
        REQUIRE_THAT(v, WithinAbs(0.5, 1e-11));
}

TEST_CASE("cross-correlation: examples")
{
    const auto grid = default_grid();
    const auto s = scenario_kg(10.0, 0.5);
    CHECK(ref_ccf_quadrature(s.params(), tone_rates(s), grid).values[0] == 0.0);
    const auto ray = scenario_kg(0.0, 0.0);
    for (double v : ref_ccf_quadrature(ray.params(), tone_rates(ray), grid).values)
        REQUIRE(v == 0.0);

    const auto pos = ref_ccf_quadrature(s.params(), tone_rates(s), signed_grid(1.0)).values;
    const auto neg = ref_ccf_quadrature(s.params(), tone_rates(s), signed_grid(-1.0)).values;
    for (std::size_t i = 0; i < pos.size(); ++i)
        REQUIRE(neg[i] == -pos[i]);
}

TEST_CASE("complex ACF: normalization, consistency and symmetry")
{
    const auto grid = default_grid();
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i)
    {
        const auto s = scenario_kg(20.0 * u(rng), u(rng), 2.0 * pi * u(rng), 2.0 * pi * u(rng));
        const auto rates = tone_rates(s);
        const auto [re, im] = ref_acf_complex(s.params(), rates, 1000.0, grid);
        CHECK_THAT(re.values[0], WithinAbs(1.0, 1e-15));
        CHECK(im.values[0] == 0.0);
        const auto rxx = ref_acf_quadrature(s.params(), rates, 1000.0, grid);
        const auto rxy = ref_ccf_quadrature(s.params(), rates, grid);
        for (std::size_t j = 0; j < grid.size(); ++j)
        {
            REQUIRE_THAT(re.values[j], WithinAbs(2.0 * rxx.values[j], 1e-14));
            REQUIRE_THAT(im.values[j], WithinAbs(-2.0 * rxy.values[j], 1e-14));
        }

        const auto [rp, ip] = ref_acf_complex(s.params(), rates, 1000.0, signed_grid(1.0));
        const auto [rn, in] = ref_acf_complex(s.params(), rates, 1000.0, signed_grid(-1.0));
        for (std::size_t j = 0; j < rp.values.size(); ++j)
        {
            REQUIRE(rn.values[j] == rp.values[j]);
            REQUIRE(in.values[j] == -ip.values[j]);
        }
    }
}

TEST_CASE("closed forms agree with scalar oracles on random scenarios")
{
    const auto grid = default_grid();
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 20; ++i)
    {
        const auto s = scenario_kg(i == 0 ? 0.0 : 30.0 * u(rng), u(rng), 2.0 * pi * u(rng), 2.0 * pi * u(rng));
        const auto r = tone_rates(s);
        CHECK(r.rate1 == s.tone1().phase_rate);
        CHECK(r.rate2 == s.tone2().phase_rate);
        const auto w = oracle::powers(s.params());
        const auto rxx = ref_acf_quadrature(s.params(), r, 1000.0, grid);
        const auto rxy = ref_ccf_quadrature(s.params(), r, grid);
        const auto rsq = ref_acf_squared(s.params(), r, 1000.0, grid);
        const auto sim = sim_acf_squared(s.params(), r, 1000.0, 8, grid);
        static const auto kernels = [&] {
            std::vector<oracle::Kernels> k;
            for (double tau : grid.lags_s)
                k.push_back(oracle::panel_kernels_simpson(2.0 * pi * 1000.0 * tau, 8));
            return k;
        }();
        for (std::size_t j = 0; j < grid.size(); ++j)
        {
            const double tau = grid.lags_s[j];
            REQUIRE_THAT(rxx.values[j], WithinAbs(oracle::rxx(w, r.rate1, r.rate2, 1000.0, tau), 1e-12));
            REQUIRE_THAT(rxy.values[j], WithinAbs(oracle::rxy(w, r.rate1, r.rate2, tau), 1e-12));
            const double ref = oracle::rsq_reference(w, r.rate1, r.rate2, 1000.0, tau);
            REQUIRE_THAT(rsq.values[j], WithinAbs(ref, 1e-12));
            REQUIRE_THAT(sim.values[j], WithinAbs(ref - w.d * w.d * (kernels[j].fc + kernels[j].fs), 1e-10));
        }
    }
}

TEST_CASE("squared-envelope ACF: examples")
{
    const auto grid = default_grid();
    const auto ray = scenario_kg(0.0, 0.0);
    CHECK_THAT(ref_acf_squared(ray.params(), tone_rates(ray), 1000.0, grid).values[0], WithinAbs(2.0, 1e-15));
    CHECK_THAT(sim_acf_squared(ray.params(), tone_rates(ray), 1000.0, 8, grid).values[0], WithinAbs(1.875, 1e-15));

    const auto s = scenario_kg(10.0, 0.5);
    const auto w = oracle::powers(s.params());
    CHECK_THAT(ref_acf_squared(s.params(), tone_rates(s), 1000.0, grid).values[0],
               WithinAbs(1.0 + w.d * (w.d + 2.0 * w.p1 + 2.0 * w.p2) + 2.0 * w.p1 * w.p2, 1e-14));

    ScenarioConfig tones;
    tones.params = ChannelParams::from_amplitudes(std::sqrt(0.5), std::sqrt(0.5), 0.0);
    const auto t = require_valid(tones);
    const auto r = tone_rates(t);
    const auto v = ref_acf_squared(t.params(), r, 1000.0, grid);
    for (std::size_t j = 0; j < grid.size(); ++j)
        REQUIRE_THAT(v.values[j], WithinAbs(1.0 + 0.5 * std::cos((r.rate1 - r.rate2) * grid.lags_s[j]), 1e-14));
}

TEST_CASE("simulator squared-envelope ACF: bounded gap to the reference form")
{
    const auto grid = default_grid();
    for (auto [k, g] : {std::pair{0.0, 0.0}, {10.0, 0.5}, {1.0, 1.0}})
    {
        const auto s = scenario_kg(k, g);
        const double d = s.params().diffuse_power() / s.params().omega();
        const auto ref = ref_acf_squared(s.params(), tone_rates(s), 1000.0, grid);
        for (int n : {8, 1024})
        {
            if (n == 1024 && k != 0.0)
                continue;
            const auto sim = sim_acf_squared(s.params(), tone_rates(s), 1000.0, n, grid);
            double worst = 0.0;
            for (std::size_t j = 0; j < grid.size(); ++j)
            {
                REQUIRE(sim.values[j] <= ref.values[j] + 1e-15);
                worst = std::max(worst, ref.values[j] - sim.values[j]);
            }
            CHECK(worst * n <= d * d * (1.0 + 1e-9));
            if (k == 10.0 && g == 0.5 && n == 8)
            {
                CHECK(worst <= d * d / 8.0 * (1.0 + 1e-12));
                CHECK_THAT(d * d / 8.0, WithinAbs(1.03e-3, 5e-6));
            }
        }
    }
}

TEST_CASE("N-independent simulator forms are the reference functions")
{
    CHECK(&sim_acf_quadrature == &ref_acf_quadrature);
    CHECK(&sim_ccf_quadrature == &ref_ccf_quadrature);
    CHECK(&sim_acf_complex == &ref_acf_complex);
}

TEST_CASE("closed_form: dispatch by kind and source")
{
    const auto s = scenario_kg(10.0, 1.0);
    const auto grid = default_grid();
    const auto rxy = closed_form(CorrelationKind::rxy, SeriesSource::reference, s, grid);
    const auto ryx = closed_form(CorrelationKind::ryx, SeriesSource::simulator_formula, s, grid);
    for (std::size_t j = 0; j < grid.size(); ++j)
        REQUIRE(ryx.values[j] == -rxy.values[j]);
    CHECK(closed_form(CorrelationKind::ryy, SeriesSource::reference, s, grid).values ==
          closed_form(CorrelationKind::rxx, SeriesSource::reference, s, grid).values);
    const auto sim = closed_form(CorrelationKind::rsq, SeriesSource::simulator_formula, s, grid);
    CHECK(sim.values == sim_acf_squared(s.params(), tone_rates(s), 1000.0, 8, grid).values);
    CHECK(sim.kind == CorrelationKind::rsq);
    CHECK(sim.source == SeriesSource::simulator_formula);
    CHECK_FALSE(sim.n_trials.has_value());
    CHECK_THROWS_AS(closed_form(CorrelationKind::rxx, SeriesSource::empirical, s, grid), std::invalid_argument);
}

TEST_CASE("reference envelope PDF: Rayleigh closed form")
{
    const auto p = ChannelParams::from_k_gamma(0.0, 0.0);
    CHECK_THAT(envelope_pdf_reference(p, 1.0), WithinAbs(2.0 / std::exp(1.0), 1e-8));
    CHECK_THAT(envelope_pdf_reference(p, 1.0), WithinAbs(0.735759, 1e-6));
    for (double z = 0.0; z <= 4.0; z += 0.05)
        REQUIRE_THAT(envelope_pdf_reference(p, z), WithinAbs(2.0 * z * std::exp(-z * z), 1e-8));

    const EnvelopeCdf cdf(p);
    for (double z = 0.0; z <= 3.5; z += 0.013)
        REQUIRE_THAT(cdf(z), WithinAbs(oracle::rayleigh_cdf(z), 1e-6));
    CHECK(cdf(10.0) == 1.0);
    CHECK(cdf(-1.0) == 0.0);
}

TEST_CASE("reference envelope PDF: non-negative and normalized")
{
    for (auto [k, g] : {std::pair{0.0, 0.0}, {5.0, 0.5}, {10.0, 1.0}})
    {
        const auto p = ChannelParams::from_k_gamma(k, g);
        const double total = simpson([&](double z) { return envelope_pdf_reference(p, z); }, 0.0, 6.0, 1200);
        CHECK_THAT(total, WithinAbs(1.0, 1e-6));
        const double second = simpson([&](double z) { return z * z * envelope_pdf_reference(p, z); }, 0.0, 6.0, 1200);
        CHECK_THAT(second, WithinAbs(1.0, 1e-6));
        for (double z = 0.0; z <= 4.0; z += 0.01)
            REQUIRE(envelope_pdf_reference(p, z) >= 0.0);
    }
    CHECK_THROWS_AS(envelope_pdf_reference(ChannelParams::from_amplitudes(1.0, 0.5, 0.0), 1.0), std::domain_error);
}

TEST_CASE("reference envelope PDF: K = 10, Gamma = 1 against a 256-sinusoid Monte-Carlo histogram")
{
    const auto p = ChannelParams::from_k_gamma(10.0, 1.0);
    const int draws = 500'000;
    const int bins = 200;
    const double hi = 3.0;
    const double w = hi / bins;
    std::vector<double> counts(bins, 0.0);
    double m1 = 0.0, m1sq = 0.0;
    const double root = std::sqrt(p.omega());
    for (int t = 0; t < draws; ++t)
    {
        const auto r = draw_trial_randoms(4242, static_cast<std::uint64_t>(t), 256);
        const double time = 0.0173;
        const cplx z = (std::polar(p.v1(), r.phase1) + std::polar(p.v2(), r.phase2) +
                        diffuse_sample(r.diffuse, p.diffuse_power(), 1000.0, time)) /
                       root;
        const double e = std::abs(z);
        m1 += e;
        m1sq += e * e;
        if (e < hi)
            counts[static_cast<std::size_t>(e / w)] += 1.0;
    }

    // 200 simultaneous comparisons: 4 standard errors keeps the family-wise false alarm near 1%.
    const EnvelopeCdf cdf(p, 4.0, 0.001);
    int worst_bin = -1;
    double worst_z = 0.0;
    for (int b = 0; b < bins; ++b)
    {
        const double prob = cdf((b + 1) * w) - cdf(b * w);
        const double se = std::sqrt(prob * (1.0 - prob) / draws) / w;
        const double diff = counts[b] / draws / w - prob / w;
        if (se > 0.0 && std::abs(diff) / se > worst_z)
        {
            worst_z = std::abs(diff) / se;
            worst_bin = b;
        }
    }
    INFO("worst bin " << worst_bin << " at " << worst_z << " standard errors");
    CHECK(worst_z <= 4.0);

    const double mean = simpson([&](double z) { return z * envelope_pdf_reference(p, z); }, 0.0, 6.0, 1200);
    const double mc_mean = m1 / draws;
    const double mc_se = std::sqrt((m1sq / draws - mc_mean * mc_mean) / draws);
    CHECK(std::abs(mc_mean - mean) <= 3.0 * mc_se);
}

TEST_CASE("Rayleigh LCR oracle: examples")
{
    CHECK(rayleigh_lcr_oracle(0.0) == 0.0);
    CHECK_THAT(rayleigh_lcr_oracle(1.0), WithinAbs(0.922137, 1e-6));
    CHECK_THAT(rayleigh_lcr_oracle(3.0), WithinRel(9.28e-4, 1e-3));
}

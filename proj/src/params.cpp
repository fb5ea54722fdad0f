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

#include "twdp/params.hpp"

#include <cmath>
#include <limits>

namespace twdp
{

double wrap_angle(double radians)
{
    if (!std::isfinite(radians))
        return radians;
    double w = std::fmod(radians + pi, 2.0 * pi);
    if (w < 0.0)
        w += 2.0 * pi;
    w -= pi;
    // fmod can land exactly on the excluded upper edge after the shift
    if (w >= pi)
        w = -pi;
    return w;
}

ChannelParams ChannelParams::from_amplitudes(double v1, double v2, double diffuse_power)
{
    if (!std::isfinite(v1) || !std::isfinite(v2) || !std::isfinite(diffuse_power))
        throw std::invalid_argument("ChannelParams: amplitudes and diffuse power must be finite");
    if (v1 < 0.0 || v2 < 0.0 || diffuse_power < 0.0)
        throw std::invalid_argument("ChannelParams: amplitudes and diffuse power must be non-negative");
    if (v2 > v1)
        throw std::invalid_argument("ChannelParams: canonical ordering requires v2 <= v1");
    if (v1 == 0.0 && diffuse_power == 0.0)
        throw std::invalid_argument("ChannelParams: v1 or diffuse power must be positive");
    return ChannelParams(v1, v2, diffuse_power, v1 * v1 + v2 * v2 + diffuse_power);
}

ChannelParams ChannelParams::from_amplitudes(double v1, double v2, double diffuse_power, double omega)
{
    const auto p = from_amplitudes(v1, v2, diffuse_power);
    if (!std::isfinite(omega) || std::abs(omega - p.omega_) > 1e-12 * p.omega_)
        throw std::invalid_argument("ChannelParams: Omega disagrees with V1^2 + V2^2 + diffuse power");
    return ChannelParams(v1, v2, diffuse_power, omega);
}

ChannelParams ChannelParams::from_k_gamma(double k, double gamma, double omega)
{
    if (!std::isfinite(k) || k < 0.0)
        throw std::invalid_argument("ChannelParams: K must be finite and non-negative");
    if (!(gamma >= 0.0 && gamma <= 1.0))
        throw std::invalid_argument("ChannelParams: Gamma must lie in [0, 1]");
    if (!std::isfinite(omega) || omega <= 0.0)
        throw std::invalid_argument("ChannelParams: Omega must be positive");

    const double diffuse = omega / (1.0 + k);
    const double v1 = std::sqrt(omega * k / ((1.0 + k) * (1.0 + gamma * gamma)));
    const double v2 = gamma * v1;
    return ChannelParams(v1, v2, diffuse, omega);
}

KGamma to_k_gamma(double v1, double v2, double diffuse_power)
{
    if (v1 == 0.0 && v2 > 0.0)
        throw std::invalid_argument("to_k_gamma: v2 > 0 with v1 = 0 violates the v2 <= v1 ordering");
    return to_k_gamma(ChannelParams::from_amplitudes(v1, v2, diffuse_power));
}

KGamma to_k_gamma(const ChannelParams &p)
{
    KGamma out;
    const double specular = p.v1() * p.v1() + p.v2() * p.v2();
    out.k = p.diffuse_power() > 0.0 ? specular / p.diffuse_power() : std::numeric_limits<double>::infinity();
    out.gamma = p.v1() > 0.0 ? p.v2() / p.v1() : 0.0;
    return out;
}

double phase_rate(double aoa, double doppler_hz)
{
    return -2.0 * pi * doppler_hz * std::cos(aoa);
}

std::string_view to_string(ScenarioIssue issue)
{
    switch (issue)
    {
    case ScenarioIssue::non_positive_doppler:
        return "non_positive_doppler";
    case ScenarioIssue::non_positive_sample_period:
        return "non_positive_sample_period";
    case ScenarioIssue::undersampled_doppler:
        return "undersampled_doppler";
    case ScenarioIssue::too_few_sinusoids:
        return "too_few_sinusoids";
    case ScenarioIssue::too_few_trials:
        return "too_few_trials";
    case ScenarioIssue::too_few_samples:
        return "too_few_samples";
    case ScenarioIssue::non_finite_angle:
        return "non_finite_angle";
    }
    return "unknown";
}

namespace
{
std::string describe(const std::vector<ScenarioIssue> &issues)
{
    std::string msg = "invalid scenario:";
    for (auto issue : issues)
    {
        msg += ' ';
        msg += to_string(issue);
    }
    return msg;
}
} // namespace

InvalidScenario::InvalidScenario(std::vector<ScenarioIssue> issues)
    : std::invalid_argument(describe(issues)), issues_(std::move(issues))
{
}

std::variant<ValidatedScenario, std::vector<ScenarioIssue>> validate_scenario(const ScenarioConfig &cfg)
{
    std::vector<ScenarioIssue> issues;
    const bool doppler_ok = std::isfinite(cfg.doppler_hz) && cfg.doppler_hz > 0.0;
    const bool period_ok = std::isfinite(cfg.sample_period_s) && cfg.sample_period_s > 0.0;
    if (!doppler_ok)
        issues.push_back(ScenarioIssue::non_positive_doppler);
    if (!period_ok)
        issues.push_back(ScenarioIssue::non_positive_sample_period);
    if (doppler_ok && period_ok && cfg.fd_ts() > 0.5)
        issues.push_back(ScenarioIssue::undersampled_doppler);
    if (cfg.n_sinusoids < 1)
        issues.push_back(ScenarioIssue::too_few_sinusoids);
    if (cfg.n_trials < 1)
        issues.push_back(ScenarioIssue::too_few_trials);
    if (cfg.n_samples < 2)
        issues.push_back(ScenarioIssue::too_few_samples);
    if (!std::isfinite(cfg.aoa1) || !std::isfinite(cfg.aoa2))
        issues.push_back(ScenarioIssue::non_finite_angle);
    if (!issues.empty())
        return issues;

    ValidatedScenario out;
    out.config_ = cfg;
    out.config_.aoa1 = wrap_angle(cfg.aoa1);
    out.config_.aoa2 = wrap_angle(cfg.aoa2);
    out.tone1_ = {cfg.params.v1(), out.config_.aoa1, phase_rate(out.config_.aoa1, cfg.doppler_hz)};
    out.tone2_ = {cfg.params.v2(), out.config_.aoa2, phase_rate(out.config_.aoa2, cfg.doppler_hz)};
    return out;
}

ValidatedScenario require_valid(const ScenarioConfig &cfg)
{
    auto result = validate_scenario(cfg);
    if (auto *issues = std::get_if<std::vector<ScenarioIssue>>(&result))
        throw InvalidScenario(std::move(*issues));
    return std::get<ValidatedScenario>(std::move(result));
}

ValidatedScenario ValidatedScenario::with_seed(std::uint64_t seed) const
{
    ScenarioConfig cfg = config_;
    cfg.seed = seed;
    return require_valid(cfg);
}

ValidatedScenario ValidatedScenario::with_trials(std::int64_t n_trials) const
{
    ScenarioConfig cfg = config_;
    cfg.n_trials = n_trials;
    return require_valid(cfg);
}

} // namespace twdp

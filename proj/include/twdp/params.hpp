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

#ifndef TWDP_PARAMS_HPP
#define TWDP_PARAMS_HPP

#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace twdp
{

inline constexpr double pi = std::numbers::pi;

/// Reduces an angle to [-pi, pi).
double wrap_angle(double radians);

/// Physical TWDP parameters: two specular amplitudes V1 >= V2 and the diffuse power 2*sigma^2.
/// Omega = V1^2 + V2^2 + 2*sigma^2 holds by construction.
class ChannelParams
{
  public:
    // Throws std::invalid_argument on negative/non-finite input, V2 > V1, or zero V1 and diffuse power.
    static ChannelParams from_amplitudes(double v1, double v2, double diffuse_power);

    // As above, with Omega given explicitly. It must match V1^2 + V2^2 + diffuse_power to a relative
    // 1e-12 and is stored as given, so parameters built from (K, Gamma, Omega) can be restated exactly.
    static ChannelParams from_amplitudes(double v1, double v2, double diffuse_power, double omega);

    // K = (V1^2 + V2^2) / (2 sigma^2), Gamma = V2 / V1.
    static ChannelParams from_k_gamma(double k, double gamma, double omega = 1.0);

    double v1() const { return v1_; }
    double v2() const { return v2_; }
    double diffuse_power() const { return diffuse_power_; }
    double omega() const { return omega_; }
    double sigma2() const { return 0.5 * diffuse_power_; } // sigma^2, per-quadrature diffuse power

    bool operator==(const ChannelParams &) const = default;

  private:
    ChannelParams(double v1, double v2, double diffuse_power, double omega)
        : v1_(v1), v2_(v2), diffuse_power_(diffuse_power), omega_(omega)
    {
    }

    double v1_ = 0.0;
    double v2_ = 0.0;
    double diffuse_power_ = 1.0;
    double omega_ = 1.0;
};

struct KGamma
{
    double k = 0.0;     // +infinity when the diffuse power is zero
    double gamma = 0.0; // 0 when both specular amplitudes vanish
};

KGamma to_k_gamma(const ChannelParams &p);

// Raw-amplitude form; rejects V1 = 0 with V2 > 0 and any other ordering violation.
KGamma to_k_gamma(double v1, double v2, double diffuse_power);

/// Doppler phase rate of a specular wave arriving at `aoa`: -2*pi*f_D*cos(aoa), in rad/s.
double phase_rate(double aoa, double doppler_hz);

struct SpecularSpec
{
    double amplitude = 0.0;
    double aoa = 0.0;        // radians, [-pi, pi)
    double phase_rate = 0.0; // rad/s
};

/// Experiment description. Defaults follow the reference simulation setup:
/// N = 8 sinusoids, 500 trials, f_D = 1 kHz and f_D * T_s = 0.01.
struct ScenarioConfig
{
    ChannelParams params = ChannelParams::from_k_gamma(0.0, 0.0);
    double aoa1 = pi / 4.0;
    double aoa2 = 2.0 * pi / 3.0;
    double doppler_hz = 1000.0;
    double sample_period_s = 1e-5;
    std::int64_t n_sinusoids = 8;
    std::int64_t n_trials = 500;
    std::int64_t n_samples = 3000;
    std::uint64_t seed = 0;

    double fd_ts() const { return doppler_hz * sample_period_s; }
};

enum class ScenarioIssue
{
    non_positive_doppler,
    non_positive_sample_period,
    undersampled_doppler, // f_D * T_s > 0.5
    too_few_sinusoids,
    too_few_trials,
    too_few_samples,
    non_finite_angle,
};

std::string_view to_string(ScenarioIssue issue);

/// A scenario whose constraints have been checked; angles are wrapped and tone phase rates attached.
class ValidatedScenario
{
  public:
    const ScenarioConfig &config() const { return config_; }
    const ChannelParams &params() const { return config_.params; }
    const SpecularSpec &tone1() const { return tone1_; }
    const SpecularSpec &tone2() const { return tone2_; }

    // Same scenario with a different seed or trial count; both keep every invariant.
    ValidatedScenario with_seed(std::uint64_t seed) const;
    ValidatedScenario with_trials(std::int64_t n_trials) const;

  private:
    friend std::variant<ValidatedScenario, std::vector<ScenarioIssue>> validate_scenario(const ScenarioConfig &);
    ValidatedScenario() = default;

    ScenarioConfig config_;
    SpecularSpec tone1_;
    SpecularSpec tone2_;
};

/// Returns the normalized scenario or every violated constraint.
std::variant<ValidatedScenario, std::vector<ScenarioIssue>> validate_scenario(const ScenarioConfig &cfg);

class InvalidScenario : public std::invalid_argument
{
  public:
    explicit InvalidScenario(std::vector<ScenarioIssue> issues);
    const std::vector<ScenarioIssue> &issues() const { return issues_; }

  private:
    std::vector<ScenarioIssue> issues_;
};

/// validate_scenario, throwing InvalidScenario on failure.
ValidatedScenario require_valid(const ScenarioConfig &cfg);

} // namespace twdp

#endif

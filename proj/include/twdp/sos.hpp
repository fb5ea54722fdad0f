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

#ifndef TWDP_SOS_HPP
#define TWDP_SOS_HPP

#include "twdp/params.hpp"

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace twdp
{

using cplx = std::complex<double>;

/// Counter-based uniform stream keyed by (seed, trial). Draw k of a substream depends only on
/// (seed, trial, k), so trials can be generated in any order on any platform.
class TrialStream
{
  public:
    TrialStream(std::uint64_t seed, std::uint64_t trial) : seed_(seed), trial_(trial) {}

    std::uint64_t bits(std::uint64_t counter) const;

    // Uniform on [0, 1) with 53 random bits.
    double unit(std::uint64_t counter) const;

    // Uniform on [-pi, pi).
    double angle(std::uint64_t counter) const;

  private:
    std::uint64_t seed_;
    std::uint64_t trial_;
};

/// Angles of the N diffuse sinusoids. aoas[i] = (2*pi*(i+1) + thetas[i]) / N, wrapped to [-pi, pi).
struct DiffuseRealization
{
    std::vector<double> thetas;
    std::vector<double> init_phases;
    std::vector<double> aoas;
    std::vector<double> aoa_cosines; // cos(aoas[i]), cached for sample evaluation

    std::size_t n_sinusoids() const { return thetas.size(); }
};

/// Builds a realization from drawn thetas and phases (equal length, N >= 1).
DiffuseRealization make_realization(std::vector<double> thetas, std::vector<double> init_phases);

struct TrialRandoms
{
    double phase1 = 0.0;
    double phase2 = 0.0;
    DiffuseRealization diffuse;
};

/// Specular initial phases and diffuse angles for one trial, i.i.d. uniform on [-pi, pi).
TrialRandoms draw_trial_randoms(std::uint64_t seed, std::uint64_t trial_index, std::size_t n_sinusoids);

/// s[n] = amplitude * exp(j*(init_phase + phase_rate*n*T_s)), n = 0..n_samples-1.
std::vector<cplx> specular_tone(double amplitude, double init_phase, double phase_rate, double sample_period_s,
                                std::size_t n_samples);

/// n(t) = sqrt(2 sigma^2 / N) * sum_i exp(j*(2*pi*f_D*t*cos(beta_i) + phi_i)).
cplx diffuse_sample(const DiffuseRealization &realization, double diffuse_power, double doppler_hz, double t);

/// n(k*T_s) for k = 0..n_samples-1. Each sinusoid is advanced by phasor rotation and re-anchored to
/// the exact phase every 64 samples, so values agree with diffuse_sample to ~1e-13.
std::vector<cplx> diffuse_series(const DiffuseRealization &realization, double diffuse_power, double doppler_hz,
                                 double sample_period_s, std::size_t n_samples);

struct FadingTrace
{
    std::vector<cplx> samples;
    double sample_period_s = 0.0;
    std::uint64_t scenario_digest = 0;
    std::uint32_t trial_index = 0;
    std::uint64_t seed = 0;

    bool operator==(const FadingTrace &) const = default;
};

/// Every scenario field that shapes trace content. The trial count is excluded: it decides how many
/// traces exist, not what any one of them holds.
struct TraceProvenance
{
    double v1 = 0.0;
    double v2 = 0.0;
    double diffuse_power = 0.0;
    double omega = 0.0;
    double aoa1 = 0.0;
    double aoa2 = 0.0;
    double doppler_hz = 0.0;
    double sample_period_s = 0.0;
    std::uint64_t n_sinusoids = 0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = 0;
};

TraceProvenance provenance(const ScenarioConfig &cfg);

/// FNV-1a over the little-endian bytes of the provenance fields, in declaration order.
std::uint64_t provenance_digest(const TraceProvenance &prov);

inline std::uint64_t scenario_digest(const ScenarioConfig &cfg) { return provenance_digest(provenance(cfg)); }

/// One trial of the normalized lowpass TWDP process, deterministic per (seed, trial_index).
FadingTrace generate_trace(const ValidatedScenario &scenario, std::uint32_t trial_index);

struct TraceEnsemble
{
    ValidatedScenario scenario;
    std::vector<FadingTrace> traces;
};

/// M traces with trial indices 0..M-1. `workers` = 0 picks the hardware concurrency; the result is
/// identical for every worker count.
TraceEnsemble generate_ensemble(const ValidatedScenario &scenario, unsigned workers = 0);

/// Wraps externally produced traces (synthetic inputs, traces read from disk) as an ensemble.
/// Throws std::invalid_argument unless the traces share one sample period and have trial indices 0..M-1.
TraceEnsemble assemble_ensemble(const ValidatedScenario &scenario, std::vector<FadingTrace> traces);

} // namespace twdp

#endif

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

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace twdp
{

namespace
{

constexpr std::uint64_t golden = 0x9E3779B97F4A7C15ULL;

// splitmix64 finalizer
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Draw slots within a trial substream
constexpr std::uint64_t slot_phase1 = 0;
constexpr std::uint64_t slot_phase2 = 1;
constexpr std::uint64_t slot_theta(std::size_t i) { return 2 + 2 * static_cast<std::uint64_t>(i); }
constexpr std::uint64_t slot_phi(std::size_t i) { return 3 + 2 * static_cast<std::uint64_t>(i); }

class Fnv1a
{
  public:
    void add_bytes(const void *data, std::size_t n)
    {
        const auto *p = static_cast<const unsigned char *>(data);
        for (std::size_t i = 0; i < n; ++i)
        {
            hash_ ^= p[i];
            hash_ *= 0x100000001B3ULL;
        }
    }
    void add(double v) { add(std::bit_cast<std::uint64_t>(v)); }
    void add(std::uint64_t v)
    {
        unsigned char bytes[8];
        for (int i = 0; i < 8; ++i)
            bytes[i] = static_cast<unsigned char>(v >> (8 * i));
        add_bytes(bytes, 8);
    }
    std::uint64_t value() const { return hash_; }

  private:
    std::uint64_t hash_ = 0xCBF29CE484222325ULL;
};

} // namespace

std::uint64_t TrialStream::bits(std::uint64_t counter) const
{
    const std::uint64_t key = mix64(mix64(seed_ + golden) ^ (trial_ * 0xD1B54A32D192ED03ULL + golden));
    return mix64(key + (counter + 1) * golden);
}

double TrialStream::unit(std::uint64_t counter) const
{
    return static_cast<double>(bits(counter) >> 11) * 0x1.0p-53;
}

double TrialStream::angle(std::uint64_t counter) const
{
    const double a = -pi + 2.0 * pi * unit(counter);
    return a < pi ? a : -pi;
}

DiffuseRealization make_realization(std::vector<double> thetas, std::vector<double> init_phases)
{
    if (thetas.empty() || thetas.size() != init_phases.size())
        throw std::invalid_argument("make_realization: need N >= 1 thetas and as many phases");
    DiffuseRealization r;
    const auto n = thetas.size();
    r.aoas.resize(n);
    r.aoa_cosines.resize(n);
    for (std::size_t i = 0; i < n; ++i)
    {
        const double index = static_cast<double>(i + 1);
        r.aoas[i] = wrap_angle((2.0 * pi * index + thetas[i]) / static_cast<double>(n));
        r.aoa_cosines[i] = std::cos(r.aoas[i]);
    }
    r.thetas = std::move(thetas);
    r.init_phases = std::move(init_phases);
    return r;
}

TrialRandoms draw_trial_randoms(std::uint64_t seed, std::uint64_t trial_index, std::size_t n_sinusoids)
{
    const TrialStream stream(seed, trial_index);
    std::vector<double> thetas(n_sinusoids);
    std::vector<double> phases(n_sinusoids);
    for (std::size_t i = 0; i < n_sinusoids; ++i)
    {
        thetas[i] = stream.angle(slot_theta(i));
        phases[i] = stream.angle(slot_phi(i));
    }
    TrialRandoms out;
    out.phase1 = stream.angle(slot_phase1);
    out.phase2 = stream.angle(slot_phase2);
    out.diffuse = make_realization(std::move(thetas), std::move(phases));
    return out;
}

std::vector<cplx> specular_tone(double amplitude, double init_phase, double phase_rate, double sample_period_s,
                                std::size_t n_samples)
{
    std::vector<cplx> s(n_samples);
    if (amplitude == 0.0)
        return s;
    for (std::size_t n = 0; n < n_samples; ++n)
    {
        const double t = static_cast<double>(n) * sample_period_s;
        s[n] = std::polar(amplitude, init_phase + phase_rate * t);
    }
    return s;
}

cplx diffuse_sample(const DiffuseRealization &realization, double diffuse_power, double doppler_hz, double t)
{
    if (diffuse_power == 0.0)
        return {0.0, 0.0};
    const double w = 2.0 * pi * doppler_hz * t;
    double re = 0.0;
    double im = 0.0;
    for (std::size_t i = 0; i < realization.n_sinusoids(); ++i)
    {
        const double arg = w * realization.aoa_cosines[i] + realization.init_phases[i];
        re += std::cos(arg);
        im += std::sin(arg);
    }
    const double scale = std::sqrt(diffuse_power / static_cast<double>(realization.n_sinusoids()));
    return {scale * re, scale * im};
}

std::vector<cplx> diffuse_series(const DiffuseRealization &realization, double diffuse_power, double doppler_hz,
                                 double sample_period_s, std::size_t n_samples)
{
    std::vector<cplx> out(n_samples);
    if (diffuse_power == 0.0)
        return out;
    constexpr std::size_t block = 64;
    std::vector<double> re(n_samples, 0.0);
    std::vector<double> im(n_samples, 0.0);
    for (std::size_t i = 0; i < realization.n_sinusoids(); ++i)
    {
        const double c = realization.aoa_cosines[i];
        const double phi = realization.init_phases[i];
        const double step = 2.0 * pi * doppler_hz * sample_period_s * c;
        const double rot_re = std::cos(step);
        const double rot_im = std::sin(step);
        for (std::size_t b = 0; b < n_samples; b += block)
        {
            // same argument expression as diffuse_sample
            const double t = static_cast<double>(b) * sample_period_s;
            const double arg = 2.0 * pi * doppler_hz * t * c + phi;
            double p_re = std::cos(arg);
            double p_im = std::sin(arg);
            const std::size_t end = std::min(n_samples, b + block);
            for (std::size_t n = b; n < end; ++n)
            {
                re[n] += p_re;
                im[n] += p_im;
                const double next_re = p_re * rot_re - p_im * rot_im;
                p_im = p_re * rot_im + p_im * rot_re;
                p_re = next_re;
            }
        }
    }
    const double scale = std::sqrt(diffuse_power / static_cast<double>(realization.n_sinusoids()));
    for (std::size_t n = 0; n < n_samples; ++n)
        out[n] = {scale * re[n], scale * im[n]};
    return out;
}

TraceProvenance provenance(const ScenarioConfig &cfg)
{
    return {cfg.params.v1(),
            cfg.params.v2(),
            cfg.params.diffuse_power(),
            cfg.params.omega(),
            cfg.aoa1,
            cfg.aoa2,
            cfg.doppler_hz,
            cfg.sample_period_s,
            static_cast<std::uint64_t>(cfg.n_sinusoids),
            static_cast<std::uint64_t>(cfg.n_samples),
            cfg.seed};
}

std::uint64_t provenance_digest(const TraceProvenance &prov)
{
    Fnv1a h;
    h.add(prov.v1);
    h.add(prov.v2);
    h.add(prov.diffuse_power);
    h.add(prov.omega);
    h.add(prov.aoa1);
    h.add(prov.aoa2);
    h.add(prov.doppler_hz);
    h.add(prov.sample_period_s);
    h.add(prov.n_sinusoids);
    h.add(prov.n_samples);
    h.add(prov.seed);
    return h.value();
}

FadingTrace generate_trace(const ValidatedScenario &scenario, std::uint32_t trial_index)
{
    const auto &cfg = scenario.config();
    const auto &p = cfg.params;
    const auto n_samples = static_cast<std::size_t>(cfg.n_samples);
    const auto randoms = draw_trial_randoms(cfg.seed, trial_index, static_cast<std::size_t>(cfg.n_sinusoids));

    const auto tone1 = specular_tone(p.v1(), randoms.phase1, scenario.tone1().phase_rate, cfg.sample_period_s, n_samples);
    const auto tone2 = specular_tone(p.v2(), randoms.phase2, scenario.tone2().phase_rate, cfg.sample_period_s, n_samples);

    FadingTrace trace;
    trace.samples.resize(n_samples);
    trace.sample_period_s = cfg.sample_period_s;
    trace.scenario_digest = scenario_digest(cfg);
    trace.trial_index = trial_index;
    trace.seed = cfg.seed;

    const auto diffuse =
        diffuse_series(randoms.diffuse, p.diffuse_power(), cfg.doppler_hz, cfg.sample_period_s, n_samples);
    const double inv_norm = 1.0 / std::sqrt(p.omega());
    for (std::size_t n = 0; n < n_samples; ++n)
        trace.samples[n] = (tone1[n] + tone2[n] + diffuse[n]) * inv_norm;
    return trace;
}

TraceEnsemble generate_ensemble(const ValidatedScenario &scenario, unsigned workers)
{
    const auto m = static_cast<std::size_t>(scenario.config().n_trials);
    TraceEnsemble ens{scenario, std::vector<FadingTrace>(m)};

    if (workers == 0)
        workers = std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, m));

    std::atomic<std::size_t> next{0};
    auto run = [&] {
        for (std::size_t i = next++; i < m; i = next++)
            ens.traces[i] = generate_trace(scenario, static_cast<std::uint32_t>(i));
    };
    if (workers <= 1)
    {
        run();
        return ens;
    }
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back(run);
    pool.clear();
    return ens;
}

TraceEnsemble assemble_ensemble(const ValidatedScenario &scenario, std::vector<FadingTrace> traces)
{
    for (std::size_t i = 0; i < traces.size(); ++i)
    {
        if (traces[i].trial_index != i)
            throw std::invalid_argument("assemble_ensemble: trial indices must run 0..M-1 without gaps");
        if (traces[i].sample_period_s != traces.front().sample_period_s)
            throw std::invalid_argument("assemble_ensemble: traces must share one sample period");
    }
    return TraceEnsemble{scenario, std::move(traces)};
}

} // namespace twdp

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

#include <cmath>
#include <stdexcept>

namespace twdp
{

namespace
{

std::vector<std::size_t> lag_indices(const LagGrid &grid, double sample_period_s, std::size_t n_samples)
{
    std::vector<std::size_t> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        const double steps = grid.lags_s[i] / sample_period_s;
        const double rounded = std::round(steps);
        if (steps < 0.0 || std::abs(steps - rounded) > 1e-6 * std::max(1.0, rounded))
            throw std::invalid_argument("ensemble_correlation: lag is not on the sample grid");
        if (rounded >= static_cast<double>(n_samples))
            throw std::out_of_range("ensemble_correlation: lag exceeds the trace length");
        out[i] = static_cast<std::size_t>(rounded);
    }
    return out;
}

double lag_product(CorrelationKind kind, cplx a, cplx b)
{
    switch (kind)
    {
    case CorrelationKind::rxx:
        return a.real() * b.real();
    case CorrelationKind::ryy:
        return a.imag() * b.imag();
    case CorrelationKind::rxy:
        return a.real() * b.imag();
    case CorrelationKind::ryx:
        return a.imag() * b.real();
    case CorrelationKind::rzz_real:
        // Re{a conj(b)}
        return a.real() * b.real() + a.imag() * b.imag();
    case CorrelationKind::rzz_imag:
        // Im{a conj(b)}
        return a.imag() * b.real() - a.real() * b.imag();
    case CorrelationKind::rsq:
        return std::norm(a) * std::norm(b);
    }
    return 0.0;
}

std::size_t common_length(const TraceEnsemble &ens)
{
    if (ens.traces.empty())
        throw std::invalid_argument("estimator: empty ensemble");
    const auto n = ens.traces.front().samples.size();
    for (const auto &t : ens.traces)
    {
        if (t.samples.size() != n)
            throw std::invalid_argument("estimator: traces differ in length");
    }
    return n;
}

struct MeanAndError
{
    double mean;
    double std_error;
};

MeanAndError summarize(std::span<const double> per_trial)
{
    const double m = static_cast<double>(per_trial.size());
    double sum = 0.0;
    for (double v : per_trial)
        sum += v;
    const double mean = sum / m;
    if (per_trial.size() < 2)
        return {mean, 0.0};
    double ss = 0.0;
    for (double v : per_trial)
        ss += (v - mean) * (v - mean);
    return {mean, std::sqrt(ss / (m - 1.0) / m)};
}

} // namespace

std::vector<std::size_t> AnchorPolicy::anchors(std::size_t n_samples, std::size_t max_lag) const
{
    if (stride == 0)
        throw std::invalid_argument("AnchorPolicy: stride must be positive");
    std::vector<std::size_t> out;
    for (std::size_t a = first; a + max_lag < n_samples; a += stride)
    {
        if (last && a > *last)
            break;
        out.push_back(a);
    }
    if (out.empty())
        throw std::out_of_range("AnchorPolicy: no anchor leaves room for the largest lag");
    return out;
}

std::vector<std::vector<double>> trial_correlations(const TraceEnsemble &ens, CorrelationKind kind,
                                                    const LagGrid &grid, const AnchorPolicy &policy)
{
    const auto n_samples = common_length(ens);
    const auto lags = lag_indices(grid, ens.traces.front().sample_period_s, n_samples);
    std::size_t max_lag = 0;
    for (auto l : lags)
        max_lag = std::max(max_lag, l);
    const auto anchors = policy.anchors(n_samples, max_lag);
    const double inv_anchors = 1.0 / static_cast<double>(anchors.size());

    std::vector<std::vector<double>> rows(ens.traces.size(), std::vector<double>(lags.size(), 0.0));
    for (std::size_t m = 0; m < ens.traces.size(); ++m)
    {
        const auto &z = ens.traces[m].samples;
        auto &row = rows[m];
        for (auto a : anchors)
        {
            const cplx za = z[a];
            for (std::size_t i = 0; i < lags.size(); ++i)
                row[i] += lag_product(kind, za, z[a + lags[i]]);
        }
        for (auto &v : row)
            v *= inv_anchors;
    }
    return rows;
}

CorrelationSeries ensemble_correlation(const TraceEnsemble &ens, CorrelationKind kind, const LagGrid &grid,
                                       const AnchorPolicy &anchors)
{
    const auto rows = trial_correlations(ens, kind, grid, anchors);
    CorrelationSeries s;
    s.kind = kind;
    s.source = SeriesSource::empirical;
    s.grid = grid;
    s.n_trials = rows.size();
    s.values.resize(grid.size());
    s.std_errors.resize(grid.size());
    std::vector<double> column(rows.size());
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        for (std::size_t m = 0; m < rows.size(); ++m)
            column[m] = rows[m][i];
        const auto summary = summarize(column);
        s.values[i] = summary.mean;
        s.std_errors[i] = summary.std_error;
    }
    return s;
}

std::vector<double> HistogramDensity::bin_centers() const
{
    std::vector<double> out(densities.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = 0.5 * (bin_edges[i] + bin_edges[i + 1]);
    return out;
}

std::size_t decorrelation_stride(double doppler_hz, double sample_period_s)
{
    return static_cast<std::size_t>(std::ceil(2.0 / (doppler_hz * sample_period_s) - 1e-9));
}

std::vector<double> envelope_picks(const TraceEnsemble &ens)
{
    const auto n_samples = common_length(ens);
    const auto stride = decorrelation_stride(ens.scenario.config().doppler_hz, ens.traces.front().sample_period_s);
    std::vector<double> picks;
    picks.reserve(ens.traces.size() * (n_samples / stride + 1));
    for (const auto &t : ens.traces)
    {
        for (std::size_t n = 0; n < n_samples; n += stride)
            picks.push_back(std::abs(t.samples[n]));
    }
    return picks;
}

HistogramDensity histogram_density(std::span<const double> values, std::size_t bins, double lo, double hi)
{
    if (bins < 2)
        throw std::invalid_argument("histogram_density: need at least two bins");
    if (!(hi > lo))
        throw std::invalid_argument("histogram_density: empty range");
    if (values.empty())
        throw std::invalid_argument("histogram_density: no samples");

    HistogramDensity h;
    const double width = (hi - lo) / static_cast<double>(bins);
    h.bin_edges.resize(bins + 1);
    for (std::size_t i = 0; i <= bins; ++i)
        h.bin_edges[i] = lo + width * static_cast<double>(i);

    std::vector<std::size_t> counts(bins, 0);
    for (double v : values)
    {
        if (!(v >= lo && v < hi))
        {
            ++h.n_out_of_range;
            continue;
        }
        auto bin = static_cast<std::size_t>((v - lo) / width);
        counts[std::min(bin, bins - 1)]++;
        ++h.n_samples;
    }
    if (h.n_samples == 0)
        throw std::invalid_argument("histogram_density: every sample lies outside the range");

    h.densities.resize(bins);
    const double scale = 1.0 / (static_cast<double>(h.n_samples) * width);
    for (std::size_t i = 0; i < bins; ++i)
        h.densities[i] = static_cast<double>(counts[i]) * scale;
    return h;
}

HistogramDensity envelope_pdf(const TraceEnsemble &ens, std::size_t bins, double lo, double hi)
{
    const auto picks = envelope_picks(ens);
    return histogram_density(picks, bins, lo, hi);
}

LcrCurve level_crossing_rate(const TraceEnsemble &ens, std::span<const double> thresholds)
{
    const auto n_samples = common_length(ens);
    const double ts = ens.traces.front().sample_period_s;
    const double fd = ens.scenario.config().doppler_hz;
    const double trial_time = static_cast<double>(n_samples - 1) * ts;

    LcrCurve curve;
    curve.thresholds.assign(thresholds.begin(), thresholds.end());
    curve.rates.resize(thresholds.size());
    curve.std_errors.resize(thresholds.size());
    curve.observation_time_s = trial_time * static_cast<double>(ens.traces.size());

    std::vector<std::vector<double>> per_trial(thresholds.size(), std::vector<double>(ens.traces.size()));
    std::vector<double> envelope(n_samples);
    for (std::size_t m = 0; m < ens.traces.size(); ++m)
    {
        const auto &z = ens.traces[m].samples;
        for (std::size_t n = 0; n < n_samples; ++n)
            envelope[n] = std::abs(z[n]);
        for (std::size_t k = 0; k < thresholds.size(); ++k)
        {
            const double rho = thresholds[k];
            std::size_t up = 0;
            for (std::size_t n = 0; n + 1 < n_samples; ++n)
                up += (envelope[n] <= rho && envelope[n + 1] > rho) ? 1 : 0;
            per_trial[k][m] = static_cast<double>(up) / trial_time / fd;
        }
    }
    for (std::size_t k = 0; k < thresholds.size(); ++k)
    {
        const auto summary = summarize(per_trial[k]);
        curve.rates[k] = summary.mean;
        curve.std_errors[k] = summary.std_error;
    }
    return curve;
}

EnsembleMean ensemble_mean(const TraceEnsemble &ens)
{
    const auto n_samples = common_length(ens);
    std::vector<double> re(ens.traces.size());
    std::vector<double> im(ens.traces.size());
    for (std::size_t m = 0; m < ens.traces.size(); ++m)
    {
        cplx sum{0.0, 0.0};
        for (const auto &v : ens.traces[m].samples)
            sum += v;
        sum /= static_cast<double>(n_samples);
        re[m] = sum.real();
        im[m] = sum.imag();
    }
    const auto sr = summarize(re);
    const auto si = summarize(im);
    return {cplx{sr.mean, si.mean}, std::hypot(sr.std_error, si.std_error)};
}

} // namespace twdp

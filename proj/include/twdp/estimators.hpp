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

#ifndef TWDP_ESTIMATORS_HPP
#define TWDP_ESTIMATORS_HPP

#include "twdp/sos.hpp"
#include "twdp/theory.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace twdp
{

/// Anchor times t at which lag products are averaged: every `stride`-th sample from `first`, stopping
/// before the final max-lag window (and before `last`, when set).
struct AnchorPolicy
{
    std::size_t stride = 10;
    std::size_t first = 0;
    std::optional<std::size_t> last; // inclusive upper bound on the anchor index

    std::vector<std::size_t> anchors(std::size_t n_samples, std::size_t max_lag) const;
};

/// Ensemble-averaged correlation of `kind` over trials and anchors. Lags must be integer multiples of
/// the sample period and shorter than the traces. Per-trial averages give the across-trial standard
/// error stored in `std_errors`.
CorrelationSeries ensemble_correlation(const TraceEnsemble &ens, CorrelationKind kind, const LagGrid &grid,
                                       const AnchorPolicy &anchors = {});

/// Per-trial anchor averages, one row per trial (rows x lags); the building block of ensemble_correlation.
std::vector<std::vector<double>> trial_correlations(const TraceEnsemble &ens, CorrelationKind kind,
                                                    const LagGrid &grid, const AnchorPolicy &anchors = {});

struct HistogramDensity
{
    std::vector<double> bin_edges; // ascending, bins + 1 entries
    std::vector<double> densities;
    std::size_t n_samples = 0;       // picks inside the range
    std::size_t n_out_of_range = 0;  // picks outside, excluded from the normalization

    std::vector<double> bin_centers() const;
};

/// Smallest stride (samples) with f_D * stride * T_s >= 2, beyond the main J0 lobe.
std::size_t decorrelation_stride(double doppler_hz, double sample_period_s);

/// Envelope values |z| picked once per trial per decorrelation stride, in trial order.
std::vector<double> envelope_picks(const TraceEnsemble &ens);

/// Unit-integral histogram of the envelope picks over [lo, hi) with `bins` equal bins.
HistogramDensity envelope_pdf(const TraceEnsemble &ens, std::size_t bins = 100, double lo = 0.0, double hi = 3.0);

HistogramDensity histogram_density(std::span<const double> values, std::size_t bins, double lo, double hi);

struct LcrCurve
{
    std::vector<double> thresholds;  // rho, envelope / sqrt(Omega)
    std::vector<double> rates;       // upward crossings per second / f_D
    std::vector<double> std_errors;  // across-trial standard error of each rate
    double observation_time_s = 0.0; // total over all trials
};

/// Upward crossings (sample at or below rho followed by one above) per trial, per second of trace,
/// averaged over trials and normalized by f_D.
LcrCurve level_crossing_rate(const TraceEnsemble &ens, std::span<const double> thresholds);

struct EnsembleMean
{
    cplx value;
    double std_error = 0.0; // sqrt(var(Re) + var(Im)) of the per-trial means, over sqrt(M)
};

/// Mean of z over trials and time.
EnsembleMean ensemble_mean(const TraceEnsemble &ens);

/// Largest |ecdf - cdf| over the sorted sample, checking both sides of every step.
template <class Cdf>
double sup_cdf_distance(std::vector<double> sample, Cdf &&cdf);

} // namespace twdp

#include <algorithm>
#include <cmath>

template <class Cdf>
double twdp::sup_cdf_distance(std::vector<double> sample, Cdf &&cdf)
{
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i)
    {
        const double f = cdf(sample[i]);
        worst = std::max({worst, std::abs(f - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - f)});
    }
    return worst;
}

#endif

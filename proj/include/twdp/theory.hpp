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

#ifndef TWDP_THEORY_HPP
#define TWDP_THEORY_HPP

#include "twdp/params.hpp"

#include <optional>
#include <string_view>
#include <utility>
#include <vector>

namespace twdp
{

/// Zero-order Bessel function of the first kind.
/// Ascending series for |x| <= 8, Miller backward recurrence up to 25, Hankel asymptotic beyond.
double bessel_j0(double x);

/// Panel kernels of the sum-of-sinusoids diffuse model:
///   f_c(x, N) = sum_{n=1..N} [ (1/2pi) * integral over [(2pi n - pi)/N, (2pi n + pi)/N] of cos(x cos g) dg ]^2
/// and f_s likewise with sin. Both lie in [0, 1/N]; f_c + f_s <= 1/N.
double f_c(double x, int n);
double f_s(double x, int n);

struct PanelKernels
{
    double fc = 0.0;
    double fs = 0.0;
};

// Both kernels from one pass over the panels.
PanelKernels panel_kernels(double x, int n);

/// Ascending lag grid in seconds. f_D is carried so callers can read the normalized lag f_D*tau.
struct LagGrid
{
    std::vector<double> lags_s;
    double doppler_hz = 1.0;

    /// f_D*tau = 0, step, 2*step, ... up to fd_tau_max (inclusive within rounding).
    static LagGrid normalized(double fd_tau_max, double fd_tau_step, double doppler_hz);

    std::vector<double> fd_tau() const;
    std::size_t size() const { return lags_s.size(); }
};

enum class CorrelationKind
{
    rxx,
    ryy,
    rxy,
    ryx,
    rzz_real,
    rzz_imag,
    rsq,
};

enum class SeriesSource
{
    reference,
    simulator_formula,
    empirical,
};

std::string_view to_string(CorrelationKind kind);
std::string_view to_string(SeriesSource source);
std::optional<CorrelationKind> parse_correlation_kind(std::string_view name);

struct CorrelationSeries
{
    CorrelationKind kind = CorrelationKind::rxx;
    SeriesSource source = SeriesSource::reference;
    LagGrid grid;
    std::vector<double> values;
    std::optional<std::size_t> n_trials;  // set for empirical series
    std::vector<double> std_errors;       // across-trial standard errors; empty for closed forms
};

/// Specular phase rates (rad/s) of the two tones.
struct ToneRates
{
    double rate1 = 0.0;
    double rate2 = 0.0;
};

ToneRates tone_rates(const ValidatedScenario &scenario);

// Closed-form correlations of the reference model (N -> infinity). All powers are normalized by Omega.

/// R_xx(tau) = R_yy(tau).
CorrelationSeries ref_acf_quadrature(const ChannelParams &p, ToneRates rates, double doppler_hz, const LagGrid &grid);

/// R_xy(tau) = -R_yx(tau).
CorrelationSeries ref_ccf_quadrature(const ChannelParams &p, ToneRates rates, const LagGrid &grid);

/// R_zz(tau) = E{z(t) z*(t+tau)} as (real, imaginary) series.
std::pair<CorrelationSeries, CorrelationSeries> ref_acf_complex(const ChannelParams &p, ToneRates rates,
                                                                double doppler_hz, const LagGrid &grid);

/// R_{|z|^2|z|^2}(tau).
CorrelationSeries ref_acf_squared(const ChannelParams &p, ToneRates rates, double doppler_hz, const LagGrid &grid);

// The simulator's quadrature, cross and complex correlations do not depend on N and coincide with the
// reference forms; these aliases name the same functions.
inline constexpr auto &sim_acf_quadrature = ref_acf_quadrature;
inline constexpr auto &sim_ccf_quadrature = ref_ccf_quadrature;
inline constexpr auto &sim_acf_complex = ref_acf_complex;

/// Squared-envelope ACF of the N-sinusoid simulator: the reference form minus
/// (4 sigma^4 / Omega^2) * [f_c(2 pi f_D tau, N) + f_s(2 pi f_D tau, N)].
CorrelationSeries sim_acf_squared(const ChannelParams &p, ToneRates rates, double doppler_hz, int n_sinusoids,
                                  const LagGrid &grid);

/// Dispatches to the closed form for `kind` under `source` (reference or simulator_formula).
CorrelationSeries closed_form(CorrelationKind kind, SeriesSource source, const ValidatedScenario &scenario,
                              const LagGrid &grid);

/// Envelope PDF of the normalized two-tone-plus-Gaussian process, from the Hankel-transform form
///   f(z) = z * int_0^inf u J0(z u) J0(v1 u) J0(v2 u) exp(-s2 u^2 / 2) du,
/// with v_i = V_i / sqrt(Omega) and s2 = sigma^2 / Omega. Throws std::domain_error for zero diffuse power.
double envelope_pdf_reference(const ChannelParams &p, double z);

/// CDF of envelope_pdf_reference tabulated on [0, z_max] by Simpson steps; cubic Hermite interpolation
/// between nodes, 1 beyond.
class EnvelopeCdf
{
  public:
    EnvelopeCdf(const ChannelParams &p, double z_max = 4.0, double step = 0.005);

    double operator()(double z) const;
    double z_max() const { return step_ * static_cast<double>(values_.size() - 1); }

  private:
    double step_;
    std::vector<double> values_;
    std::vector<double> densities_;
};

/// Normalized Rayleigh level crossing rate sqrt(2 pi) * rho * exp(-rho^2), rho = threshold / sqrt(Omega).
double rayleigh_lcr_oracle(double rho);

} // namespace twdp

#endif

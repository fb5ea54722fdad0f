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

#include "twdp/theory.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace twdp
{

namespace
{

double j0_series(double x)
{
    // sum_k (-1)^k (x^2/4)^k / (k!)^2
    const double q = 0.25 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int k = 1; k < 200; ++k)
    {
        term *= -q / (static_cast<double>(k) * static_cast<double>(k));
        sum += term;
        if (std::abs(term) < 1e-17 * std::max(1.0, std::abs(sum)))
            break;
    }
    return sum;
}

double j0_miller(double x)
{
    // Backward recurrence J_{k-1} = (2k/x) J_k - J_{k+1}, normalized with J0 + 2 sum J_{2k} = 1.
    const int start = 2 * ((static_cast<int>(x) + 40) / 2);
    double j_next = 0.0;
    double j_cur = 1e-30;
    double even_sum = 0.0;
    double j0 = 0.0;
    for (int k = start; k > 0; --k)
    {
        const double j_prev = (2.0 * k / x) * j_cur - j_next;
        j_next = j_cur;
        j_cur = j_prev;
        if (std::abs(j_cur) > 1e250)
        {
            j_cur *= 1e-250;
            j_next *= 1e-250;
            even_sum *= 1e-250;
        }
        // j_cur now holds J_{k-1}
        if ((k - 1) % 2 == 0 && k - 1 > 0)
            even_sum += j_cur;
        if (k - 1 == 0)
            j0 = j_cur;
    }
    return j0 / (j0 + 2.0 * even_sum);
}

double j0_asymptotic(double x)
{
    // Hankel expansion: J0 = sqrt(2/(pi x)) [P cos(x - pi/4) - Q sin(x - pi/4)]
    double p = 1.0;
    double q = 0.0;
    double term = 1.0;
    double prev_mag = 1.0;
    for (int k = 1; k < 100; ++k)
    {
        const double odd = 2.0 * k - 1.0;
        term *= -(odd * odd) / (8.0 * k * x);
        const double mag = std::abs(term);
        if (mag > prev_mag)
            break;
        prev_mag = mag;
        // a_k / x^k enters P (k even) or Q (k odd) with alternating sign (-1)^floor(k/2)
        const double signed_term = ((k / 2) % 2 == 0) ? term : -term;
        if (k % 2 == 0)
            p += signed_term;
        else
            q += signed_term;
        if (mag < 1e-17)
            break;
    }
    const double c = std::cos(x);
    const double s = std::sin(x);
    const double cos_chi = (c + s) / std::sqrt(2.0);
    const double sin_chi = (s - c) / std::sqrt(2.0);
    return std::sqrt(2.0 / (pi * x)) * (p * cos_chi - q * sin_chi);
}

// 31-point Kronrod rule on pieces of [a, b] over which the integrand's phase advances by at most
// 8 rad (`rate` bounds the phase speed). On such pieces the rule is exact to rounding, so no adaptive
// refinement is needed; a relative-tolerance scheme would also stall on panels whose integral is 0.
template <class F>
double integrate(F f, double a, double b, double rate)
{
    using rule = boost::math::quadrature::gauss_kronrod<double, 31>;
    const auto pieces = std::max(1, static_cast<int>(std::ceil(rate * (b - a) / 8.0)));
    const double h = (b - a) / pieces;
    double sum = 0.0;
    for (int i = 0; i < pieces; ++i)
        sum += rule::integrate(f, a + i * h, i + 1 == pieces ? b : a + (i + 1) * h, 0, 0.0);
    return sum;
}

CorrelationSeries make_series(CorrelationKind kind, SeriesSource source, const LagGrid &grid)
{
    CorrelationSeries s;
    s.kind = kind;
    s.source = source;
    s.grid = grid;
    s.values.resize(grid.size());
    return s;
}

struct Normalized
{
    double p1;      // V1^2 / Omega
    double p2;      // V2^2 / Omega
    double diffuse; // 2 sigma^2 / Omega
};

Normalized normalized_powers(const ChannelParams &p)
{
    return {p.v1() * p.v1() / p.omega(), p.v2() * p.v2() / p.omega(), p.diffuse_power() / p.omega()};
}

double ref_squared_at(const Normalized &w, ToneRates rates, double doppler_hz, double tau)
{
    const double j = bessel_j0(2.0 * pi * doppler_hz * tau);
    const double c1 = std::cos(rates.rate1 * tau);
    const double c2 = std::cos(rates.rate2 * tau);
    return w.diffuse * j * (w.diffuse * j + 2.0 * w.p1 * c1 + 2.0 * w.p2 * c2) + 1.0 +
           2.0 * w.p1 * w.p2 * std::cos((rates.rate1 - rates.rate2) * tau);
}

} // namespace

double bessel_j0(double x)
{
    const double ax = std::abs(x);
    if (ax <= 8.0)
        return j0_series(ax);
    if (ax <= 25.0)
        return j0_miller(ax);
    return j0_asymptotic(ax);
}

PanelKernels panel_kernels(double x, int n)
{
    if (n < 1)
        throw std::invalid_argument("panel_kernels: N must be >= 1");
    PanelKernels k;
    const double nn = static_cast<double>(n);
    if (x == 0.0)
    {
        // Integrand is exactly 1 (cos) or 0 (sin) on every panel of width 2pi/N.
        k.fc = 1.0 / nn;
        return k;
    }
    const auto cos_part = [x](double g) { return std::cos(x * std::cos(g)); };
    const auto sin_part = [x](double g) { return std::sin(x * std::cos(g)); };
    for (int m = 1; m <= n; ++m)
    {
        const double a = (2.0 * pi * m - pi) / nn;
        const double b = (2.0 * pi * m + pi) / nn;
        const double ic = integrate(cos_part, a, b, std::abs(x)) / (2.0 * pi);
        const double is = integrate(sin_part, a, b, std::abs(x)) / (2.0 * pi);
        k.fc += ic * ic;
        k.fs += is * is;
    }
    return k;
}

double f_c(double x, int n)
{
    return panel_kernels(x, n).fc;
}

double f_s(double x, int n)
{
    return panel_kernels(x, n).fs;
}

LagGrid LagGrid::normalized(double fd_tau_max, double fd_tau_step, double doppler_hz)
{
    if (!(fd_tau_step > 0.0) || !(fd_tau_max >= 0.0) || !(doppler_hz > 0.0))
        throw std::invalid_argument("LagGrid: need step > 0, max >= 0 and f_D > 0");
    LagGrid g;
    g.doppler_hz = doppler_hz;
    const auto count = static_cast<std::size_t>(std::floor(fd_tau_max / fd_tau_step + 1e-9)) + 1;
    g.lags_s.resize(count);
    for (std::size_t i = 0; i < count; ++i)
        g.lags_s[i] = static_cast<double>(i) * fd_tau_step / doppler_hz;
    return g;
}

std::vector<double> LagGrid::fd_tau() const
{
    std::vector<double> out(lags_s.size());
    std::transform(lags_s.begin(), lags_s.end(), out.begin(), [this](double t) { return t * doppler_hz; });
    return out;
}

std::string_view to_string(CorrelationKind kind)
{
    switch (kind)
    {
    case CorrelationKind::rxx:
        return "rxx";
    case CorrelationKind::ryy:
        return "ryy";
    case CorrelationKind::rxy:
        return "rxy";
    case CorrelationKind::ryx:
        return "ryx";
    case CorrelationKind::rzz_real:
        return "rzz_real";
    case CorrelationKind::rzz_imag:
        return "rzz_imag";
    case CorrelationKind::rsq:
        return "rsq";
    }
    return "unknown";
}

std::string_view to_string(SeriesSource source)
{
    switch (source)
    {
    case SeriesSource::reference:
        return "reference";
    case SeriesSource::simulator_formula:
        return "simulator_formula";
    case SeriesSource::empirical:
        return "empirical";
    }
    return "unknown";
}

std::optional<CorrelationKind> parse_correlation_kind(std::string_view name)
{
    for (auto kind : {CorrelationKind::rxx, CorrelationKind::ryy, CorrelationKind::rxy, CorrelationKind::ryx,
                      CorrelationKind::rzz_real, CorrelationKind::rzz_imag, CorrelationKind::rsq})
    {
        if (to_string(kind) == name)
            return kind;
    }
    return std::nullopt;
}

ToneRates tone_rates(const ValidatedScenario &scenario)
{
    return {scenario.tone1().phase_rate, scenario.tone2().phase_rate};
}

CorrelationSeries ref_acf_quadrature(const ChannelParams &p, ToneRates rates, double doppler_hz, const LagGrid &grid)
{
    const auto w = normalized_powers(p);
    auto s = make_series(CorrelationKind::rxx, SeriesSource::reference, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        const double tau = grid.lags_s[i];
        s.values[i] = 0.5 * w.p1 * std::cos(rates.rate1 * tau) + 0.5 * w.p2 * std::cos(rates.rate2 * tau) +
                      0.5 * w.diffuse * bessel_j0(2.0 * pi * doppler_hz * tau);
    }
    return s;
}

CorrelationSeries ref_ccf_quadrature(const ChannelParams &p, ToneRates rates, const LagGrid &grid)
{
    const auto w = normalized_powers(p);
    auto s = make_series(CorrelationKind::rxy, SeriesSource::reference, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        const double tau = grid.lags_s[i];
        s.values[i] = 0.5 * w.p1 * std::sin(rates.rate1 * tau) + 0.5 * w.p2 * std::sin(rates.rate2 * tau);
    }
    return s;
}

std::pair<CorrelationSeries, CorrelationSeries> ref_acf_complex(const ChannelParams &p, ToneRates rates,
                                                                double doppler_hz, const LagGrid &grid)
{
    const auto w = normalized_powers(p);
    auto re = make_series(CorrelationKind::rzz_real, SeriesSource::reference, grid);
    auto im = make_series(CorrelationKind::rzz_imag, SeriesSource::reference, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        const double tau = grid.lags_s[i];
        re.values[i] = w.p1 * std::cos(rates.rate1 * tau) + w.p2 * std::cos(rates.rate2 * tau) +
                       w.diffuse * bessel_j0(2.0 * pi * doppler_hz * tau);
        im.values[i] = -w.p1 * std::sin(rates.rate1 * tau) - w.p2 * std::sin(rates.rate2 * tau);
    }
    return {std::move(re), std::move(im)};
}

CorrelationSeries ref_acf_squared(const ChannelParams &p, ToneRates rates, double doppler_hz, const LagGrid &grid)
{
    const auto w = normalized_powers(p);
    auto s = make_series(CorrelationKind::rsq, SeriesSource::reference, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        s.values[i] = ref_squared_at(w, rates, doppler_hz, grid.lags_s[i]);
    return s;
}

CorrelationSeries sim_acf_squared(const ChannelParams &p, ToneRates rates, double doppler_hz, int n_sinusoids,
                                  const LagGrid &grid)
{
    if (n_sinusoids < 1)
        throw std::invalid_argument("sim_acf_squared: N must be >= 1");
    const auto w = normalized_powers(p);
    // 4 sigma^4 / Omega^2 = (2 sigma^2 / Omega)^2
    const double weight = w.diffuse * w.diffuse;
    auto s = make_series(CorrelationKind::rsq, SeriesSource::simulator_formula, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
    {
        const double tau = grid.lags_s[i];
        double correction = 0.0;
        if (weight > 0.0)
        {
            const auto k = panel_kernels(2.0 * pi * doppler_hz * tau, n_sinusoids);
            correction = weight * (k.fc + k.fs);
        }
        s.values[i] = ref_squared_at(w, rates, doppler_hz, tau) - correction;
    }
    return s;
}

CorrelationSeries closed_form(CorrelationKind kind, SeriesSource source, const ValidatedScenario &scenario,
                              const LagGrid &grid)
{
    if (source == SeriesSource::empirical)
        throw std::invalid_argument("closed_form: source must be reference or simulator_formula");
    const auto &p = scenario.params();
    const auto rates = tone_rates(scenario);
    const double fd = scenario.config().doppler_hz;

    CorrelationSeries out;
    switch (kind)
    {
    case CorrelationKind::rxx:
    case CorrelationKind::ryy:
        out = ref_acf_quadrature(p, rates, fd, grid);
        break;
    case CorrelationKind::rxy:
        out = ref_ccf_quadrature(p, rates, grid);
        break;
    case CorrelationKind::ryx:
        out = ref_ccf_quadrature(p, rates, grid);
        for (auto &v : out.values)
            v = -v;
        break;
    case CorrelationKind::rzz_real:
        out = ref_acf_complex(p, rates, fd, grid).first;
        break;
    case CorrelationKind::rzz_imag:
        out = ref_acf_complex(p, rates, fd, grid).second;
        break;
    case CorrelationKind::rsq:
        out = source == SeriesSource::reference
                  ? ref_acf_squared(p, rates, fd, grid)
                  : sim_acf_squared(p, rates, fd, static_cast<int>(scenario.config().n_sinusoids), grid);
        break;
    }
    out.kind = kind;
    out.source = source;
    return out;
}

double envelope_pdf_reference(const ChannelParams &p, double z)
{
    if (p.diffuse_power() <= 0.0)
        throw std::domain_error("envelope_pdf_reference: density is singular without diffuse power");
    if (!(z >= 0.0))
        throw std::invalid_argument("envelope_pdf_reference: envelope must be non-negative");
    if (z == 0.0)
        return 0.0;

    const double a1 = p.v1() / std::sqrt(p.omega());
    const double a2 = p.v2() / std::sqrt(p.omega());
    const double s2 = p.sigma2() / p.omega();
    // Gaussian factor exp(-s2 u^2 / 2) drops below 1e-14 beyond u_max
    const double u_max = std::sqrt(2.0 * std::log(1e14) / s2);

    const auto integrand = [&](double u) {
        return u * bessel_j0(z * u) * bessel_j0(a1 * u) * bessel_j0(a2 * u) * std::exp(-0.5 * s2 * u * u);
    };
    // each J0 factor turns at most at its argument's rate; the Gaussian adds s2 * u_max
    const double rate = z + a1 + a2 + s2 * u_max + 1.0;
    const double density = z * integrate(integrand, 0.0, u_max, rate);
    if (density < -1e-8)
        throw std::runtime_error("envelope_pdf_reference: quadrature produced a negative density");
    return std::max(density, 0.0);
}

EnvelopeCdf::EnvelopeCdf(const ChannelParams &p, double z_max, double step) : step_(step)
{
    if (!(step > 0.0) || !(z_max > step))
        throw std::invalid_argument("EnvelopeCdf: need 0 < step < z_max");
    const auto nodes = static_cast<std::size_t>(std::ceil(z_max / step));
    values_.resize(nodes + 1);
    densities_.resize(nodes + 1);
    values_[0] = 0.0;
    densities_[0] = envelope_pdf_reference(p, 0.0);
    for (std::size_t i = 0; i < nodes; ++i)
    {
        const double a = static_cast<double>(i) * step;
        const double mid = envelope_pdf_reference(p, a + 0.5 * step);
        densities_[i + 1] = envelope_pdf_reference(p, a + step);
        values_[i + 1] = values_[i] + step / 6.0 * (densities_[i] + 4.0 * mid + densities_[i + 1]);
    }
}

double EnvelopeCdf::operator()(double z) const
{
    if (z <= 0.0)
        return 0.0;
    const double pos = z / step_;
    const auto i = static_cast<std::size_t>(pos);
    if (i + 1 >= values_.size())
        return 1.0;
    // cubic Hermite: the node densities are the CDF slopes
    const double t = pos - static_cast<double>(i);
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2.0 * t3 - 3.0 * t2 + 1.0) * values_[i] + (t3 - 2.0 * t2 + t) * step_ * densities_[i] +
           (3.0 * t2 - 2.0 * t3) * values_[i + 1] + (t3 - t2) * step_ * densities_[i + 1];
}

double rayleigh_lcr_oracle(double rho)
{
    if (!(rho >= 0.0))
        throw std::invalid_argument("rayleigh_lcr_oracle: rho must be non-negative");
    return std::sqrt(2.0 * pi) * rho * std::exp(-rho * rho);
}

} // namespace twdp

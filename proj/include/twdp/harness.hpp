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

#ifndef TWDP_HARNESS_HPP
#define TWDP_HARNESS_HPP

#include "twdp/estimators.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace twdp
{

enum class Statistic
{
    rxx,
    ryy,
    rxy,
    ryx,
    rzz_real,
    rzz_imag,
    rsq,
    envelope_pdf,
    lcr,
};

std::string_view to_string(Statistic stat);
std::optional<CorrelationKind> correlation_kind(Statistic stat);

enum class OracleKind
{
    reference_formula,  // closed forms of the N -> infinity model
    simulator_formula,  // closed forms of the N-sinusoid simulator
    closed_form_oracle, // reference envelope PDF, or the Rayleigh LCR
    seed_consistency,   // a second ensemble from a disjoint seed, compared in standard errors
};

std::string_view to_string(OracleKind oracle);

struct Tolerance
{
    double max_abs = 0.05;
    double rms = 0.02;
};

/// One declarative comparison. Correlations are checked on f_D*tau in [0, fd_tau_max]; PDF picks are
/// histogrammed on [0, pdf_range); LCR curves are evaluated at `lcr_thresholds`.
struct ValidationScenario
{
    std::string name;
    ScenarioConfig scenario;
    std::vector<Statistic> statistics;
    std::vector<Tolerance> tolerances; // parallel to statistics
    OracleKind oracle = OracleKind::simulator_formula;
    std::string note;

    double fd_tau_max = 10.0;
    std::size_t pdf_bins = 100;
    double pdf_range = 3.0;
    std::vector<double> lcr_thresholds;
};

struct DeviationRecord
{
    double max_abs = 0.0;
    double rms = 0.0;
};

/// Max-abs and RMS difference of two series on the same grid and kind. Throws std::invalid_argument on
/// mismatch.
DeviationRecord compare_series(const CorrelationSeries &a, const CorrelationSeries &b);

struct StatisticRecord
{
    std::string scenario;
    Statistic statistic = Statistic::rxx;
    OracleKind oracle = OracleKind::simulator_formula;
    std::string metric;
    DeviationRecord deviation;
    Tolerance tolerance;
    bool pass = false;
    std::size_t n_trials = 0;
    std::uint64_t seed = 0;
};

struct ValidationReport
{
    std::uint64_t seed = 0;
    std::vector<StatisticRecord> records;
    bool pass = true; // AND of record verdicts

    std::string to_json() const;
};

/// Correlation, PDF and LCR scenarios at the reference geometry (N = 8, M = 500, f_D = 1 kHz,
/// f_D*T_s = 0.01).
std::vector<ValidationScenario> builtin_scenarios();

/// Seed used for scenario `name` when the run seed is `run_seed`.
std::uint64_t scenario_seed(std::uint64_t run_seed, std::string_view name);

/// Generates every scenario's ensemble, estimates its statistics and checks them against the oracle.
/// A failed tolerance is recorded, not thrown.
ValidationReport run_validation(const std::vector<ValidationScenario> &scenarios, std::uint64_t seed);

} // namespace twdp

#endif

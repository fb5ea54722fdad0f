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

#ifndef TWDP_IO_HPP
#define TWDP_IO_HPP

#include "twdp/sos.hpp"
#include "twdp/theory.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace twdp
{

// Trace file layout, all little-endian:
//   0  magic "TWDPTRC1"         8 bytes
//   8  version                  u16 (= 1)
//  10  v1, v2, diffuse_power, omega, aoa1, aoa2, doppler_hz, sample_period_s   f64 each
//  74  n_sinusoids              u32
//  78  trial_index              u32
//  82  seed                     u64
//  90  n_samples                u64
//  98  payload: n_samples interleaved (re, im) f64
inline constexpr std::size_t trace_header_size = 98;
inline constexpr std::uint16_t trace_format_version = 1;

enum class TraceFormatErrorKind
{
    bad_magic,
    version_mismatch,
    truncated,
    inconsistent, // header fields disagree with the trace (writing) or are out of range (reading)
};

class TraceFormatError : public std::runtime_error
{
  public:
    TraceFormatError(TraceFormatErrorKind kind, const std::string &what) : std::runtime_error(what), kind_(kind) {}
    TraceFormatErrorKind kind() const { return kind_; }

  private:
    TraceFormatErrorKind kind_;
};

struct StoredTrace
{
    TraceProvenance header;
    FadingTrace trace;
};

/// Writes header and payload. `prov` must describe the trace: its digest, seed, sample period and
/// sample count are checked against the trace, otherwise TraceFormatError(inconsistent).
void write_trace(std::ostream &sink, const FadingTrace &trace, const TraceProvenance &prov);
void write_trace(std::ostream &sink, const FadingTrace &trace, const ScenarioConfig &cfg);

/// Reads one trace; the scenario digest is recomputed from the header fields.
StoredTrace read_trace_file(std::istream &source);
FadingTrace read_trace(std::istream &source);

class ConfigError : public std::invalid_argument
{
  public:
    using std::invalid_argument::invalid_argument;
};

/// Parses a "key = value" document ('#' starts a comment) and returns the validated scenario
/// configuration. Keys: k, gamma or v1, v2, diffuse_power, each optionally with omega (with amplitudes
/// it must equal their power sum); aoa1_rad, aoa2_rad, doppler_hz, fd_ts or sample_period_s,
/// n_sinusoids, n_trials, n_samples, seed. Missing keys keep ScenarioConfig defaults.
/// Throws ConfigError on syntax errors, unknown or repeated keys, and mixed (k, gamma) / (v1, v2)
/// parameterizations; InvalidScenario when the result fails validation.
ScenarioConfig parse_config(std::string_view text);

/// Renders `cfg` as a config document that parse_config maps back to the identical configuration.
std::string format_config(const ScenarioConfig &cfg);

/// Numeric table with named columns; the in-memory form of every CSV/JSON series file.
struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    bool operator==(const Table &) const = default;
};

/// Header row plus one row per record, values printed with 17 significant digits. Throws
/// std::invalid_argument on a ragged row or a non-finite value.
std::string to_csv(const Table &table);
Table parse_csv(std::string_view text);

/// Array of row objects keyed by column name, in column order.
std::string to_json(const Table &table);

/// lag_s, fd_tau, value
Table series_table(const CorrelationSeries &series);

} // namespace twdp

#endif

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

#include "twdp/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>

namespace twdp
{

namespace
{

constexpr char trace_magic[8] = {'T', 'W', 'D', 'P', 'T', 'R', 'C', '1'};

template <class U>
void put_le(unsigned char *dst, U v)
{
    for (std::size_t i = 0; i < sizeof(U); ++i)
        dst[i] = static_cast<unsigned char>(static_cast<std::uint64_t>(v) >> (8 * i));
}

template <class U>
U get_le(const unsigned char *src)
{
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i)
        v |= static_cast<std::uint64_t>(src[i]) << (8 * i);
    return static_cast<U>(v);
}

void put_f64(unsigned char *dst, double v) { put_le(dst, std::bit_cast<std::uint64_t>(v)); }
double get_f64(const unsigned char *src) { return std::bit_cast<double>(get_le<std::uint64_t>(src)); }

std::size_t read_some(std::istream &in, unsigned char *dst, std::size_t n)
{
    in.read(reinterpret_cast<char *>(dst), static_cast<std::streamsize>(n));
    return static_cast<std::size_t>(in.gcount());
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <class T>
std::optional<T> parse_number(std::string_view s)
{
    T v{};
    const auto *end = s.data() + s.size();
    const auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end)
        return std::nullopt;
    return v;
}

std::string format_double(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

enum class KeyType
{
    real,
    integer,
    unsigned_integer,
};

const std::map<std::string, KeyType, std::less<>> config_keys = {
    {"k", KeyType::real},
    {"gamma", KeyType::real},
    {"omega", KeyType::real},
    {"v1", KeyType::real},
    {"v2", KeyType::real},
    {"diffuse_power", KeyType::real},
    {"aoa1_rad", KeyType::real},
    {"aoa2_rad", KeyType::real},
    {"doppler_hz", KeyType::real},
    {"fd_ts", KeyType::real},
    {"sample_period_s", KeyType::real},
    {"n_sinusoids", KeyType::integer},
    {"n_trials", KeyType::integer},
    {"n_samples", KeyType::integer},
    {"seed", KeyType::unsigned_integer},
};

struct ConfigValue
{
    double real = 0.0;
    std::int64_t integer = 0;
    std::uint64_t unsigned_integer = 0;
};

} // namespace

void write_trace(std::ostream &sink, const FadingTrace &trace, const TraceProvenance &prov)
{
    if (provenance_digest(prov) != trace.scenario_digest)
        throw TraceFormatError(TraceFormatErrorKind::inconsistent, "write_trace: header does not match the trace digest");
    if (prov.seed != trace.seed || prov.sample_period_s != trace.sample_period_s ||
        prov.n_samples != trace.samples.size())
        throw TraceFormatError(TraceFormatErrorKind::inconsistent,
                               "write_trace: header seed, sample period or length differs from the trace");
    if (prov.n_sinusoids > std::numeric_limits<std::uint32_t>::max())
        throw TraceFormatError(TraceFormatErrorKind::inconsistent, "write_trace: n_sinusoids exceeds 32 bits");

    std::array<unsigned char, trace_header_size> h{};
    std::memcpy(h.data(), trace_magic, 8);
    put_le<std::uint16_t>(h.data() + 8, trace_format_version);
    const double fields[] = {prov.v1,   prov.v2,   prov.diffuse_power, prov.omega,
                             prov.aoa1, prov.aoa2, prov.doppler_hz,    prov.sample_period_s};
    for (std::size_t i = 0; i < 8; ++i)
        put_f64(h.data() + 10 + 8 * i, fields[i]);
    put_le<std::uint32_t>(h.data() + 74, static_cast<std::uint32_t>(prov.n_sinusoids));
    put_le<std::uint32_t>(h.data() + 78, trace.trial_index);
    put_le<std::uint64_t>(h.data() + 82, prov.seed);
    put_le<std::uint64_t>(h.data() + 90, prov.n_samples);
    sink.write(reinterpret_cast<const char *>(h.data()), static_cast<std::streamsize>(h.size()));

    std::vector<unsigned char> payload(16 * trace.samples.size());
    for (std::size_t n = 0; n < trace.samples.size(); ++n)
    {
        put_f64(payload.data() + 16 * n, trace.samples[n].real());
        put_f64(payload.data() + 16 * n + 8, trace.samples[n].imag());
    }
    sink.write(reinterpret_cast<const char *>(payload.data()), static_cast<std::streamsize>(payload.size()));
    if (!sink)
        throw std::runtime_error("write_trace: write failed");
}

void write_trace(std::ostream &sink, const FadingTrace &trace, const ScenarioConfig &cfg)
{
    write_trace(sink, trace, provenance(cfg));
}

StoredTrace read_trace_file(std::istream &source)
{
    std::array<unsigned char, trace_header_size> h{};
    const std::size_t got = read_some(source, h.data(), h.size());
    if (got < 8)
        throw TraceFormatError(TraceFormatErrorKind::truncated, "read_trace: file shorter than the magic");
    if (std::memcmp(h.data(), trace_magic, 8) != 0)
        throw TraceFormatError(TraceFormatErrorKind::bad_magic, "read_trace: bad magic");
    if (got < 10)
        throw TraceFormatError(TraceFormatErrorKind::truncated, "read_trace: file ends inside the version field");
    const auto version = get_le<std::uint16_t>(h.data() + 8);
    if (version != trace_format_version)
        throw TraceFormatError(TraceFormatErrorKind::version_mismatch,
                               "read_trace: unsupported version " + std::to_string(version));
    if (got < h.size())
        throw TraceFormatError(TraceFormatErrorKind::truncated, "read_trace: truncated header");

    StoredTrace out;
    auto &prov = out.header;
    prov.v1 = get_f64(h.data() + 10);
    prov.v2 = get_f64(h.data() + 18);
    prov.diffuse_power = get_f64(h.data() + 26);
    prov.omega = get_f64(h.data() + 34);
    prov.aoa1 = get_f64(h.data() + 42);
    prov.aoa2 = get_f64(h.data() + 50);
    prov.doppler_hz = get_f64(h.data() + 58);
    prov.sample_period_s = get_f64(h.data() + 66);
    prov.n_sinusoids = get_le<std::uint32_t>(h.data() + 74);
    const auto trial = get_le<std::uint32_t>(h.data() + 78);
    prov.seed = get_le<std::uint64_t>(h.data() + 82);
    prov.n_samples = get_le<std::uint64_t>(h.data() + 90);

    auto &trace = out.trace;
    trace.sample_period_s = prov.sample_period_s;
    trace.scenario_digest = provenance_digest(prov);
    trace.trial_index = trial;
    trace.seed = prov.seed;

    // Read in chunks so a corrupt length cannot trigger one huge allocation.
    constexpr std::uint64_t chunk = 1 << 16;
    std::vector<unsigned char> buf;
    for (std::uint64_t done = 0; done < prov.n_samples;)
    {
        const auto n = std::min(chunk, prov.n_samples - done);
        buf.resize(16 * n);
        if (read_some(source, buf.data(), buf.size()) != buf.size())
            throw TraceFormatError(TraceFormatErrorKind::truncated,
                                   "read_trace: payload shorter than the declared " +
                                       std::to_string(prov.n_samples) + " samples");
        for (std::uint64_t i = 0; i < n; ++i)
            trace.samples.emplace_back(get_f64(buf.data() + 16 * i), get_f64(buf.data() + 16 * i + 8));
        done += n;
    }
    return out;
}

FadingTrace read_trace(std::istream &source) { return read_trace_file(source).trace; }

ScenarioConfig parse_config(std::string_view text)
{
    std::map<std::string, ConfigValue, std::less<>> values;
    std::size_t line_no = 0;
    while (!text.empty())
    {
        ++line_no;
        const auto eol = text.find('\n');
        auto line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;

        const auto where = "line " + std::to_string(line_no) + ": ";
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(where + "expected 'key = value'");
        const auto key = trim(line.substr(0, eq));
        const auto raw = trim(line.substr(eq + 1));
        const auto entry = config_keys.find(key);
        if (entry == config_keys.end())
            throw ConfigError(where + "unknown key '" + std::string(key) + "'");
        if (values.contains(key))
            throw ConfigError(where + "key '" + std::string(key) + "' given twice");

        ConfigValue v;
        bool ok = false;
        switch (entry->second)
        {
        case KeyType::real:
            if (auto x = parse_number<double>(raw); x && std::isfinite(*x))
            {
                v.real = *x;
                ok = true;
            }
            break;
        case KeyType::integer:
            if (auto x = parse_number<std::int64_t>(raw))
            {
                v.integer = *x;
                ok = true;
            }
            break;
        case KeyType::unsigned_integer:
            if (auto x = parse_number<std::uint64_t>(raw))
            {
                v.unsigned_integer = *x;
                ok = true;
            }
            break;
        }
        if (!ok)
            throw ConfigError(where + "bad value '" + std::string(raw) + "' for '" + std::string(key) + "'");
        values.emplace(std::string(key), v);
    }

    const auto has = [&](std::string_view k) { return values.contains(k); };
    const auto real_or = [&](std::string_view k, double fallback) {
        const auto it = values.find(k);
        return it == values.end() ? fallback : it->second.real;
    };

    const bool k_form = has("k") || has("gamma");
    const bool amplitude_form = has("v1") || has("v2") || has("diffuse_power");
    if (k_form && amplitude_form)
        throw ConfigError("ambiguous parameters: give either k, gamma or v1, v2, diffuse_power");
    if (has("fd_ts") && has("sample_period_s"))
        throw ConfigError("ambiguous sampling: give either fd_ts or sample_period_s");

    ScenarioConfig cfg;
    try
    {
        if (amplitude_form && has("omega"))
            cfg.params = ChannelParams::from_amplitudes(real_or("v1", 0.0), real_or("v2", 0.0),
                                                        real_or("diffuse_power", 0.0), real_or("omega", 0.0));
        else if (amplitude_form)
            cfg.params = ChannelParams::from_amplitudes(real_or("v1", 0.0), real_or("v2", 0.0),
                                                        real_or("diffuse_power", 0.0));
        else
            cfg.params = ChannelParams::from_k_gamma(real_or("k", 0.0), real_or("gamma", 0.0), real_or("omega", 1.0));
    }
    catch (const std::invalid_argument &e)
    {
        throw ConfigError(e.what());
    }

    const ScenarioConfig defaults;
    cfg.aoa1 = real_or("aoa1_rad", defaults.aoa1);
    cfg.aoa2 = real_or("aoa2_rad", defaults.aoa2);
    cfg.doppler_hz = real_or("doppler_hz", defaults.doppler_hz);
    if (has("sample_period_s"))
        cfg.sample_period_s = real_or("sample_period_s", 0.0);
    else if (has("fd_ts") || cfg.doppler_hz != defaults.doppler_hz)
        cfg.sample_period_s = real_or("fd_ts", defaults.fd_ts()) / cfg.doppler_hz;

    if (auto it = values.find("n_sinusoids"); it != values.end())
        cfg.n_sinusoids = it->second.integer;
    if (auto it = values.find("n_trials"); it != values.end())
        cfg.n_trials = it->second.integer;
    if (auto it = values.find("n_samples"); it != values.end())
        cfg.n_samples = it->second.integer;
    if (auto it = values.find("seed"); it != values.end())
        cfg.seed = it->second.unsigned_integer;

    require_valid(cfg);
    return cfg;
}

std::string format_config(const ScenarioConfig &cfg)
{
    const auto &p = cfg.params;
    const auto kg = to_k_gamma(p);
    std::string out;
    const auto line = [&](std::string_view key, const std::string &value) {
        out.append(key).append(" = ").append(value).push_back('\n');
    };

    // Prefer (k, gamma, omega) when it reproduces the parameters bit for bit. Otherwise state the
    // amplitudes, plus omega when the stored value is not exactly their sum.
    bool k_form_exact = false;
    if (std::isfinite(kg.k))
    {
        try
        {
            k_form_exact = ChannelParams::from_k_gamma(kg.k, kg.gamma, p.omega()) == p;
        }
        catch (const std::invalid_argument &)
        {
        }
    }
    if (k_form_exact)
    {
        line("k", format_double(kg.k));
        line("gamma", format_double(kg.gamma));
        line("omega", format_double(p.omega()));
    }
    else
    {
        line("v1", format_double(p.v1()));
        line("v2", format_double(p.v2()));
        line("diffuse_power", format_double(p.diffuse_power()));
        if (ChannelParams::from_amplitudes(p.v1(), p.v2(), p.diffuse_power()).omega() != p.omega())
            line("omega", format_double(p.omega()));
    }
    line("aoa1_rad", format_double(cfg.aoa1));
    line("aoa2_rad", format_double(cfg.aoa2));
    line("doppler_hz", format_double(cfg.doppler_hz));
    line("sample_period_s", format_double(cfg.sample_period_s));
    line("n_sinusoids", std::to_string(cfg.n_sinusoids));
    line("n_trials", std::to_string(cfg.n_trials));
    line("n_samples", std::to_string(cfg.n_samples));
    line("seed", std::to_string(cfg.seed));
    return out;
}

std::string to_csv(const Table &table)
{
    if (table.columns.empty())
        throw std::invalid_argument("to_csv: table has no columns");
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c)
    {
        if (table.columns[c].find_first_of(",\n\"") != std::string::npos)
            throw std::invalid_argument("to_csv: column names may not contain commas, quotes or newlines");
        out += (c ? "," : "") + table.columns[c];
    }
    out += '\n';
    for (const auto &row : table.rows)
    {
        if (row.size() != table.columns.size())
            throw std::invalid_argument("to_csv: row width differs from the header");
        for (std::size_t c = 0; c < row.size(); ++c)
        {
            if (!std::isfinite(row[c]))
                throw std::invalid_argument("to_csv: non-finite value in column '" + table.columns[c] + "'");
            out += (c ? "," : "") + format_double(row[c]);
        }
        out += '\n';
    }
    return out;
}

Table parse_csv(std::string_view text)
{
    Table t;
    bool header = true;
    std::size_t line_no = 0;
    while (!text.empty())
    {
        ++line_no;
        const auto eol = text.find('\n');
        auto line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line.empty())
            continue;

        std::vector<std::string_view> cells;
        for (std::size_t start = 0;;)
        {
            const auto comma = line.find(',', start);
            cells.push_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
            if (comma == std::string_view::npos)
                break;
            start = comma + 1;
        }
        if (header)
        {
            for (auto c : cells)
                t.columns.emplace_back(c);
            header = false;
            continue;
        }
        if (cells.size() != t.columns.size())
            throw std::invalid_argument("parse_csv: line " + std::to_string(line_no) + " has " +
                                        std::to_string(cells.size()) + " cells, expected " +
                                        std::to_string(t.columns.size()));
        std::vector<double> row;
        row.reserve(cells.size());
        for (auto c : cells)
        {
            const auto v = parse_number<double>(c);
            if (!v || !std::isfinite(*v))
                throw std::invalid_argument("parse_csv: line " + std::to_string(line_no) + ": bad number '" +
                                            std::string(c) + "'");
            row.push_back(*v);
        }
        t.rows.push_back(std::move(row));
    }
    if (header)
        throw std::invalid_argument("parse_csv: missing header row");
    return t;
}

std::string to_json(const Table &table)
{
    auto rows = nlohmann::ordered_json::array();
    for (const auto &row : table.rows)
    {
        if (row.size() != table.columns.size())
            throw std::invalid_argument("to_json: row width differs from the header");
        nlohmann::ordered_json obj = nlohmann::ordered_json::object();
        for (std::size_t c = 0; c < row.size(); ++c)
        {
            if (!std::isfinite(row[c]))
                throw std::invalid_argument("to_json: non-finite value in column '" + table.columns[c] + "'");
            obj[table.columns[c]] = row[c];
        }
        rows.push_back(std::move(obj));
    }
    return rows.dump(2) + "\n";
}

Table series_table(const CorrelationSeries &series)
{
    Table t{{"lag_s", "fd_tau", "value"}, {}};
    const auto fd_tau = series.grid.fd_tau();
    for (std::size_t i = 0; i < series.values.size(); ++i)
        t.rows.push_back({series.grid.lags_s[i], fd_tau[i], series.values[i]});
    return t;
}

} // namespace twdp

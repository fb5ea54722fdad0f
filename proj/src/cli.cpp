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

#include "twdp/cli.hpp"

#include "twdp/harness.hpp"
#include "twdp/io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <sstream>

namespace twdp
{

namespace
{

struct CommonOptions
{
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string out_path;
    std::string format; // empty until parsed; then the subcommand's default applies
    std::optional<std::int64_t> n_trials;
    std::optional<std::int64_t> n_samples;
};

void add_common(CLI::App *cmd, CommonOptions &o, std::string default_format, bool with_format = true)
{
    cmd->add_option("--config", o.config_path, "Scenario config document (key = value lines)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "Master seed, overrides the config");
    cmd->add_option("--out", o.out_path, "Output path (standard output when omitted)");
    // The options struct is shared by all subcommands, so the default is only shown here and applied
    // after parsing.
    if (with_format)
        cmd->add_option("--format", o.format, "Series format")
            ->check(CLI::IsMember({"csv", "json"}))
            ->default_str(std::move(default_format));
    cmd->add_option("--trials", o.n_trials, "Number of trials M, overrides the config");
    cmd->add_option("--samples", o.n_samples, "Samples per trace, overrides the config");
}

std::string read_file(const std::string &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void log_scenario(std::ostream &err, std::string_view label, const ScenarioConfig &cfg)
{
    err << "# resolved scenario" << (label.empty() ? "" : " ") << label << "\n";
    std::istringstream lines(format_config(cfg));
    for (std::string line; std::getline(lines, line);)
        err << "#   " << line << "\n";
}

ScenarioConfig apply_overrides(ScenarioConfig cfg, const CommonOptions &o)
{
    if (o.seed)
        cfg.seed = *o.seed;
    if (o.n_trials)
        cfg.n_trials = *o.n_trials;
    if (o.n_samples)
        cfg.n_samples = *o.n_samples;
    return cfg;
}

ValidatedScenario load_scenario(const CommonOptions &o, std::ostream &err)
{
    ScenarioConfig cfg = o.config_path.empty() ? ScenarioConfig{} : parse_config(read_file(o.config_path));
    const auto scenario = require_valid(apply_overrides(cfg, o));
    log_scenario(err, "", scenario.config());
    return scenario;
}

void emit(const CommonOptions &o, std::ostream &out, const std::string &text)
{
    if (o.out_path.empty())
    {
        out << text;
        return;
    }
    std::ofstream f(o.out_path, std::ios::binary);
    if (!(f << text))
        throw std::runtime_error("cannot write '" + o.out_path + "'");
}

void emit_table(const CommonOptions &o, std::ostream &out, const Table &t)
{
    emit(o, out, o.format == "json" ? to_json(t) : to_csv(t));
}

void append_column(Table &t, std::string name, const std::vector<double> &values)
{
    t.columns.push_back(std::move(name));
    for (std::size_t i = 0; i < t.rows.size(); ++i)
        t.rows[i].push_back(values.at(i));
}

// "rzz" expands to its real and imaginary parts; every other name maps to one kind.
std::vector<CorrelationKind> kinds_for(const std::string &name)
{
    if (name == "rzz")
        return {CorrelationKind::rzz_real, CorrelationKind::rzz_imag};
    if (auto k = parse_correlation_kind(name))
        return {*k};
    throw CLI::ValidationError("--kind", "unknown correlation kind '" + name + "'");
}

SeriesSource source_for(const std::string &model)
{
    return model == "reference" ? SeriesSource::reference : SeriesSource::simulator_formula;
}

const std::vector<std::string> kind_names = {"rxx", "ryy", "rxy", "ryx", "rzz", "rzz_real", "rzz_imag", "rsq"};

struct LagOptions
{
    double fd_tau_max = 10.0;
    std::optional<double> fd_tau_step;

    LagGrid grid(const ScenarioConfig &cfg) const
    {
        return LagGrid::normalized(fd_tau_max, fd_tau_step.value_or(cfg.fd_ts()), cfg.doppler_hz);
    }
};

void add_lag_options(CLI::App *cmd, LagOptions &o)
{
    cmd->add_option("--fd-tau-max", o.fd_tau_max, "Largest normalized lag f_D*tau")->check(CLI::NonNegativeNumber);
    cmd->add_option("--fd-tau-step", o.fd_tau_step, "Normalized lag step (default f_D*T_s)")
        ->check(CLI::PositiveNumber);
}

void run_gen(const CommonOptions &o, std::ostream &err)
{
    if (o.out_path.empty())
        throw CLI::ValidationError("--out", "gen needs --out DIR for the trace files");
    const auto scenario = load_scenario(o, err);
    const auto ens = generate_ensemble(scenario);
    std::filesystem::create_directories(o.out_path);
    const auto prov = provenance(scenario.config());
    for (const auto &trace : ens.traces)
    {
        char name[32];
        std::snprintf(name, sizeof name, "trial_%05u.twdp", static_cast<unsigned>(trace.trial_index));
        const auto path = std::filesystem::path(o.out_path) / name;
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot open '" + path.string() + "'");
        write_trace(f, trace, prov);
    }
    err << "# wrote " << ens.traces.size() << " traces to " << o.out_path << "\n";
}

void run_theory(const CommonOptions &o, const LagOptions &lags, const std::string &kind, const std::string &model,
                std::ostream &out, std::ostream &err)
{
    const auto scenario = load_scenario(o, err);
    const auto grid = lags.grid(scenario.config());
    const auto kinds = kinds_for(kind);
    Table t;
    for (std::size_t i = 0; i < kinds.size(); ++i)
    {
        const auto s = closed_form(kinds[i], source_for(model), scenario, grid);
        if (i == 0)
            t = series_table(s);
        else
            append_column(t, "value_imag", s.values);
    }
    emit_table(o, out, t);
}

void run_acf(const CommonOptions &o, const LagOptions &lags, const std::string &kind, const std::string &model,
             std::ostream &out, std::ostream &err)
{
    const auto scenario = load_scenario(o, err);
    const auto grid = lags.grid(scenario.config());
    const auto ens = generate_ensemble(scenario);
    const auto kinds = kinds_for(kind);
    Table t;
    for (std::size_t i = 0; i < kinds.size(); ++i)
    {
        const auto empirical = ensemble_correlation(ens, kinds[i], grid);
        const auto oracle = closed_form(kinds[i], source_for(model), scenario, grid);
        const std::string suffix = i == 0 ? "" : "_imag";
        if (i == 0)
            t = series_table(empirical);
        else
            append_column(t, "value" + suffix, empirical.values);
        append_column(t, "oracle_value" + suffix, oracle.values);
        append_column(t, "std_error" + suffix, empirical.std_errors);

        double worst = 0.0;
        for (std::size_t j = 0; j < grid.size(); ++j)
            worst = std::max(worst, std::abs(empirical.values[j] - oracle.values[j]));
        err << "# " << to_string(kinds[i]) << ": max |empirical - " << model << "| = " << worst << "\n";
    }
    emit_table(o, out, t);
}

void run_pdf(const CommonOptions &o, std::size_t bins, double z_max, std::ostream &out, std::ostream &err)
{
    const auto scenario = load_scenario(o, err);
    const auto ens = generate_ensemble(scenario);
    const auto hist = envelope_pdf(ens, bins, 0.0, z_max);
    Table t{{"z", "density"}, {}};
    const auto centers = hist.bin_centers();
    for (std::size_t i = 0; i < centers.size(); ++i)
        t.rows.push_back({centers[i], hist.densities[i]});

    const auto &p = scenario.params();
    if (p.diffuse_power() > 0.0)
    {
        std::vector<double> oracle;
        for (double z : centers)
            oracle.push_back(envelope_pdf_reference(p, z));
        append_column(t, "oracle_density", oracle);
        err << "# sup-CDF distance to the reference envelope law: "
            << sup_cdf_distance(envelope_picks(ens), EnvelopeCdf(p, std::max(4.0, z_max + 1.0))) << "\n";
    }
    else
    {
        err << "# no diffuse power: the reference envelope density is a distribution, oracle column omitted\n";
    }
    err << "# " << hist.n_samples << " picks in range, " << hist.n_out_of_range << " outside\n";
    emit_table(o, out, t);
}

void run_lcr(const CommonOptions &o, double db_min, double db_max, double db_step, std::ostream &out,
             std::ostream &err)
{
    if (db_max < db_min)
        throw CLI::ValidationError("--rho-db-max", "must not be below --rho-db-min");
    const auto scenario = load_scenario(o, err);
    std::vector<double> rho_db;
    for (double db = db_min; db <= db_max + 1e-9 * db_step; db += db_step)
        rho_db.push_back(db);
    std::vector<double> rho;
    for (double db : rho_db)
        rho.push_back(std::pow(10.0, db / 20.0));

    const auto curve = level_crossing_rate(generate_ensemble(scenario), rho);
    Table t{{"rho", "rho_db", "rate", "std_error"}, {}};
    for (std::size_t i = 0; i < rho.size(); ++i)
        t.rows.push_back({rho[i], rho_db[i], curve.rates[i], curve.std_errors[i]});
    if (scenario.params().v1() == 0.0)
    {
        std::vector<double> oracle;
        for (double r : rho)
            oracle.push_back(rayleigh_lcr_oracle(r));
        append_column(t, "oracle_rate", oracle);
    }
    emit_table(o, out, t);
}

std::vector<ValidationScenario> configured_scenarios(const ScenarioConfig &cfg, const std::string &model)
{
    ValidationScenario corr;
    corr.name = "configured_correlations";
    corr.scenario = cfg;
    corr.statistics = {Statistic::rxx,      Statistic::ryy,      Statistic::rxy, Statistic::ryx,
                       Statistic::rzz_real, Statistic::rzz_imag, Statistic::rsq};
    corr.tolerances.assign(corr.statistics.size(), Tolerance{});
    corr.oracle = model == "reference" ? OracleKind::reference_formula : OracleKind::simulator_formula;
    std::vector<ValidationScenario> out{corr};

    if (cfg.params.diffuse_power() > 0.0)
    {
        ValidationScenario pdf;
        pdf.name = "configured_pdf";
        pdf.scenario = cfg;
        pdf.statistics = {Statistic::envelope_pdf};
        pdf.tolerances = {Tolerance{0.01, 0.01}};
        pdf.oracle = OracleKind::closed_form_oracle;
        out.push_back(pdf);
    }
    return out;
}

int run_validate(const CommonOptions &o, const std::string &model, std::ostream &out, std::ostream &err)
{
    std::vector<ValidationScenario> scenarios;
    if (o.config_path.empty())
    {
        scenarios = builtin_scenarios();
        for (auto &s : scenarios)
        {
            if (o.n_trials)
                s.scenario.n_trials = *o.n_trials;
            if (o.n_samples)
                s.scenario.n_samples = *o.n_samples;
        }
    }
    else
    {
        CommonOptions no_seed = o;
        no_seed.seed.reset();
        scenarios = configured_scenarios(apply_overrides(parse_config(read_file(o.config_path)), no_seed), model);
    }
    const std::uint64_t seed = o.seed.value_or(0);
    for (auto &s : scenarios)
    {
        auto cfg = require_valid(s.scenario).config();
        cfg.seed = scenario_seed(seed, s.name);
        log_scenario(err, s.name, cfg);
    }

    const auto report = run_validation(scenarios, seed);
    emit(o, out, report.to_json() + "\n");
    for (const auto &r : report.records)
        if (!r.pass)
            err << "# FAIL " << r.scenario << " " << to_string(r.statistic) << ": " << r.metric << " max "
                << r.deviation.max_abs << " (tol " << r.tolerance.max_abs << "), rms " << r.deviation.rms << " (tol "
                << r.tolerance.rms << ")\n";
    err << "# verdict: " << (report.pass ? "pass" : "fail") << "\n";
    return report.pass ? exit_ok : exit_failure;
}

} // namespace

int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"Sum-of-sinusoids TWDP fading simulator"};
    app.name("twdp");
    app.require_subcommand(1);

    CommonOptions common;
    LagOptions lags;
    std::string kind = "rxx";
    std::string model = "simulator";
    std::size_t bins = 100;
    double z_max = 3.0;
    double db_min = -30.0, db_max = 6.0, db_step = 2.0;

    auto *gen = app.add_subcommand("gen", "Generate an ensemble and write one trace file per trial");
    add_common(gen, common, "csv", false);

    auto *theory = app.add_subcommand("theory", "Closed-form correlation series");
    auto *acf = app.add_subcommand("acf", "Empirical correlation series with oracle columns");
    for (auto *cmd : {theory, acf})
    {
        add_common(cmd, common, "csv");
        add_lag_options(cmd, lags);
        cmd->add_option("--kind", kind, "Correlation kind")->check(CLI::IsMember(kind_names));
        cmd->add_option("--model", model, "Closed-form model")->check(CLI::IsMember({"reference", "simulator"}));
    }

    auto *pdf = app.add_subcommand("pdf", "Envelope histogram with the reference density");
    add_common(pdf, common, "csv");
    pdf->add_option("--bins", bins, "Histogram bins")->check(CLI::Range(std::size_t{1}, std::size_t{1000000}));
    pdf->add_option("--z-max", z_max, "Histogram upper edge")->check(CLI::PositiveNumber);

    auto *lcr = app.add_subcommand("lcr", "Normalized level crossing rate");
    add_common(lcr, common, "csv");
    lcr->add_option("--rho-db-min", db_min, "Lowest threshold, dB relative to rms");
    lcr->add_option("--rho-db-max", db_max, "Highest threshold, dB relative to rms");
    lcr->add_option("--rho-db-step", db_step, "Threshold step in dB")->check(CLI::PositiveNumber);

    auto *validate = app.add_subcommand("validate", "Run validation scenarios and emit a JSON report");
    add_common(validate, common, "json");
    validate->get_option("--format")->check(CLI::IsMember({"json"}));
    validate->add_option("--model", model, "Correlation oracle for a configured scenario")
        ->check(CLI::IsMember({"reference", "simulator"}));

    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::CallForHelp &)
    {
        out << app.help();
        return exit_ok;
    }
    catch (const CLI::CallForAllHelp &)
    {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    }
    catch (const CLI::ParseError &e)
    {
        err << "twdp: " << e.what() << "\n" << app.help();
        return exit_usage;
    }

    if (common.format.empty())
        common.format = validate->parsed() ? "json" : "csv";

    try
    {
        if (gen->parsed())
            run_gen(common, err);
        else if (theory->parsed())
            run_theory(common, lags, kind, model, out, err);
        else if (acf->parsed())
            run_acf(common, lags, kind, model, out, err);
        else if (pdf->parsed())
            run_pdf(common, bins, z_max, out, err);
        else if (lcr->parsed())
            run_lcr(common, db_min, db_max, db_step, out, err);
        else
            return run_validate(common, model, out, err);
        return exit_ok;
    }
    catch (const CLI::ParseError &e)
    {
        err << "twdp: " << e.what() << "\n";
        return exit_usage;
    }
    catch (const ConfigError &e)
    {
        err << "twdp: config: " << e.what() << "\n";
        return exit_usage;
    }
    catch (const InvalidScenario &e)
    {
        err << "twdp: invalid scenario: " << e.what() << "\n";
        return exit_usage;
    }
    catch (const std::exception &e)
    {
        err << "twdp: " << e.what() << "\n";
        return exit_failure;
    }
}

} // namespace twdp

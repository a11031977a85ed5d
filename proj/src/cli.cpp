/*
   Copyright 2026 The beamtrack Authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

       http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "beamtrack/cli.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "beamtrack/config.hpp"
#include "beamtrack/export.hpp"

namespace beamtrack {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string config_path;
    std::string codebook_path;
    std::vector<std::string> schemes;
    std::string axis = "velocity";
    std::vector<std::string> value_tokens;
    std::vector<double> values;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    int jobs = 0;
};

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<double> parse_values(const std::vector<std::string>& tokens) {
    std::vector<double> values;
    for (const auto& token : tokens) {
        double v = 0.0;
        const auto res = std::from_chars(token.data(), token.data() + token.size(), v);
        if (token.empty() || res.ec != std::errc() || res.ptr != token.data() + token.size() ||
            !std::isfinite(v))
            throw UsageError("--values: '" + token + "' is not a number");
        values.push_back(v);
    }
    return values;
}

std::string slug(Scheme scheme) {
    switch (scheme) {
    case Scheme::sensing_assisted:
        return "proposed";
    case Scheme::conventional:
        return "conventional";
    case Scheme::event_based:
        return "event_based";
    }
    return "unknown";
}

RunConfig resolve_config(const Options& opt) {
    RunConfig cfg = opt.config_path.empty() ? RunConfig{} : load_config(opt.config_path);
    if (opt.seed)
        cfg.optimizer.seed = *opt.seed;
    if (!opt.out_dir.empty())
        cfg.output.directory = opt.out_dir;
    if (!opt.codebook_path.empty())
        cfg.codebook.path = opt.codebook_path;
    return cfg;
}

std::vector<Scheme> resolve_schemes(const Options& opt) {
    if (opt.schemes.empty())
        return {Scheme::sensing_assisted, Scheme::conventional, Scheme::event_based};
    std::vector<Scheme> schemes;
    for (const auto& name : opt.schemes) {
        const auto s = parse_scheme(name);
        if (!s)
            throw UsageError("unknown scheme '" + name + "'");
        schemes.push_back(*s);
    }
    return schemes;
}

std::ofstream open_output(const fs::path& path) {
    if (path.has_parent_path())
        fs::create_directories(path.parent_path());
    std::ofstream file(path);
    if (!file)
        throw RunError("cannot write '" + path.string() + "'");
    file.exceptions(std::ios::badbit | std::ios::failbit);
    return file;
}

// Codebooks keyed by scenario fingerprint. A file on disk seeds the cache;
// scenarios it does not match are built on demand.
class CodebookCache {
public:
    CodebookCache(const RunConfig& cfg, bool explicit_path, int jobs, std::ostream& err)
        : grid_(to_grid(cfg)), pso_(to_pso(cfg)), jobs_(jobs), err_(err) {
        const auto& path = cfg.codebook.path;
        if (explicit_path || fs::exists(path)) {
            auto cb = std::make_shared<const Codebook>(load(path));
            books_[cb->fingerprint] = cb;
            from_file_ = cb;
        }
    }

    std::shared_ptr<const Codebook> get(const Scenario& sc) {
        std::lock_guard lock(mutex_);
        const auto fp = sc.fingerprint();
        if (const auto it = books_.find(fp); it != books_.end())
            return it->second;
        err_ << "note: building codebook for fingerprint " << fingerprint_hex(fp) << " ("
             << grid_.size() << " cells)\n";
        auto cb = std::make_shared<const Codebook>(
            build_codebook(grid_, sc.objective_template(), pso_, jobs_));
        books_[fp] = cb;
        return cb;
    }

    // Strict variant for single-scenario runs: a loaded file must match.
    std::shared_ptr<const Codebook> require(const Scenario& sc) {
        if (from_file_ && from_file_->fingerprint != sc.fingerprint())
            throw CodebookError(CodebookError::Kind::fingerprint_mismatch,
                                "codebook fingerprint " + fingerprint_hex(from_file_->fingerprint) +
                                    " does not match scenario " + fingerprint_hex(sc.fingerprint()));
        return get(sc);
    }

private:
    CodebookGrid grid_;
    PsoConfig pso_;
    int jobs_;
    std::ostream& err_;
    std::mutex mutex_;
    std::map<std::uint64_t, std::shared_ptr<const Codebook>> books_;
    std::shared_ptr<const Codebook> from_file_;
};

void cmd_codebook_build(const Options& opt, std::ostream& out) {
    const RunConfig cfg = resolve_config(opt);
    const Scenario sc = to_scenario(cfg);
    const PsoConfig pso = to_pso(cfg);
    const CodebookGrid grid = to_grid(cfg);
    const auto start = std::chrono::steady_clock::now();
    const Codebook cb = build_codebook(grid, sc.objective_template(), pso, opt.jobs);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    auto file = open_output(cfg.codebook.path);
    save(cb, file);
    out << "codebook: " << cb.entries.size() << " cells, seed " << cfg.optimizer.seed
        << ", fingerprint " << fingerprint_hex(cb.fingerprint) << ", " << format_number(elapsed)
        << " s -> " << cfg.codebook.path << '\n';
}

void print_summary(std::ostream& out, const std::string& prefix, Scheme scheme, const Metrics& m) {
    out << prefix << "scheme=" << slug(scheme) << " avg_rate_bps=" << format_number(m.avg_rate)
        << " outage_prob=" << format_number(m.outage_prob)
        << " realignments=" << m.realignment_count << '\n';
}

void cmd_simulate(const Options& opt, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = resolve_config(opt);
    const Scenario sc = to_scenario(cfg);
    const auto schemes = resolve_schemes(opt);
    const EventBasedParams ev = to_event_params(cfg);
    const AngularWindow window{sc.start_angle, sc.end_angle};
    const fs::path dir(cfg.output.directory);

    std::unique_ptr<CodebookCache> cache;
    for (const Scheme scheme : schemes) {
        TrackRecord rec;
        switch (scheme) {
        case Scheme::sensing_assisted:
            if (!cache)
                cache = std::make_unique<CodebookCache>(cfg, !opt.codebook_path.empty(), opt.jobs, err);
            rec = run_sensing_assisted(sc, *cache->require(sc));
            break;
        case Scheme::conventional:
            rec = run_conventional(sc);
            break;
        case Scheme::event_based:
            rec = run_event_based(sc, ev);
            break;
        }
        auto file = open_output(dir / ("track_" + slug(scheme) + ".csv"));
        write_track_csv(file, rec);
        print_summary(out, "", scheme, compute_metrics(rec, window));
    }
}

void cmd_sweep(const Options& opt, std::ostream& out, std::ostream& err) {
    if (opt.values.empty())
        throw UsageError("sweep needs at least one value (--values)");
    SweepAxis axis;
    if (opt.axis == "velocity")
        axis = SweepAxis::velocity;
    else if (opt.axis == "power")
        axis = SweepAxis::tx_power;
    else
        throw UsageError("unknown axis '" + opt.axis + "' (velocity or power)");

    const RunConfig cfg = resolve_config(opt);
    const Scenario sc = to_scenario(cfg);
    const auto schemes = resolve_schemes(opt);
    std::unique_ptr<CodebookCache> cache;
    if (std::find(schemes.begin(), schemes.end(), Scheme::sensing_assisted) != schemes.end())
        cache = std::make_unique<CodebookCache>(cfg, !opt.codebook_path.empty(), opt.jobs, err);
    CodebookProvider provider;
    if (cache)
        provider = [&cache](const Scenario& s) { return cache->get(s); };

    const auto rows = sweep(sc, axis, opt.values, schemes, provider, to_event_params(cfg), opt.jobs);
    const fs::path dir(cfg.output.directory);
    {
        auto file = open_output(dir / ("sweep_" + opt.axis + ".csv"));
        write_sweep_csv(file, rows);
    }
    for (const Scheme scheme : schemes) {
        auto file = open_output(dir / ("sweep_" + opt.axis + "_" + slug(scheme) + ".csv"));
        write_sweep_series(file, rows, scheme);
    }
    for (const auto& r : rows)
        print_summary(out, opt.axis + "=" + format_number(r.value) + " ", r.scheme, r.metrics);
}

void cmd_pattern(const Options& opt, std::ostream& out, std::ostream& err) {
    const RunConfig cfg = resolve_config(opt);
    const Scenario base = to_scenario(cfg);
    const std::vector<double> velocities =
        opt.values.empty() ? std::vector<double>{base.velocity} : opt.values;
    const fs::path dir(cfg.output.directory);
    std::unique_ptr<CodebookCache> cache;
    if (!opt.codebook_path.empty())
        cache = std::make_unique<CodebookCache>(cfg, true, opt.jobs, err);

    for (const double v : velocities) {
        const Scenario sc = apply_axis(base, SweepAxis::velocity, v);
        sc.validate();
        const ObjectiveSpec spec = sc.objective_template();
        double omega = 0.0;
        if (cache) {
            omega = lookup(*cache->require(sc), spec.interval).omega;
        } else {
            omega = optimize_omega(spec, to_pso(cfg)).omega_star;
        }
        const auto beam = adaptive_precoder(spec.interval, omega, sc.cfg);
        const auto pattern = beam_pattern(beam, sc.cfg, 2001);
        const std::string tag = "v" + format_number(v);
        {
            auto file = open_output(dir / ("pattern_" + tag + ".csv"));
            write_pattern_csv(file, pattern);
        }
        {
            auto file = open_output(dir / ("precoder_" + tag + ".csv"));
            write_precoder_record(file, beam, true);
        }
        out << "velocity=" << format_number(v) << " theta_m=" << format_number(spec.interval.theta_m)
            << " delta=" << format_number(spec.interval.delta)
            << " omega_over_pi=" << format_number(omega / kPi<double>)
            << " peak_gain=" << format_number(peak_gain(pattern))
            << " lobe_width_3db=" << format_number(main_lobe_width(pattern)) << '\n';
    }
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sensing-assisted adaptive beamwidth tracking simulator", "beamtrack"};
    app.require_subcommand(1);
    Options opt;

    const auto common = [&opt](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "YAML run configuration")->check(CLI::ExistingFile);
        sub->add_option("--codebook", opt.codebook_path, "Codebook file");
        sub->add_option("--out", opt.out_dir, "Output directory");
        sub->add_option("--seed", opt.seed, "Master seed (overrides optimizer.seed)");
        sub->add_option("--jobs", opt.jobs, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    };

    auto* build = app.add_subcommand("codebook-build", "Optimize every codebook cell and save the codebook");
    common(build);
    auto* simulate = app.add_subcommand("simulate", "Track one trajectory and write per-scheme traces");
    common(simulate);
    simulate->add_option("--scheme", opt.schemes, "proposed, conventional, event-based")->delimiter(',');
    auto* sweep_cmd = app.add_subcommand("sweep", "Average rate and outage over a swept parameter");
    common(sweep_cmd);
    sweep_cmd->add_option("--scheme", opt.schemes, "proposed, conventional, event-based")->delimiter(',');
    sweep_cmd->add_option("--axis", opt.axis, "velocity (m/s) or power (dBm)");
    sweep_cmd->add_option("--values", opt.value_tokens, "Comma-separated axis values")->delimiter(',');
    auto* pattern = app.add_subcommand("pattern", "Beam patterns of the first-period precoder per velocity");
    common(pattern);
    pattern->add_option("--values", opt.value_tokens, "Comma-separated velocities (m/s)")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        opt.values = parse_values(opt.value_tokens);
        if (build->parsed())
            cmd_codebook_build(opt, out);
        else if (simulate->parsed())
            cmd_simulate(opt, out, err);
        else if (sweep_cmd->parsed())
            cmd_sweep(opt, out, err);
        else if (pattern->parsed())
            cmd_pattern(opt, out, err);
        return kExitOk;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const CodebookError& e) {
        err << "error: " << e.what() << '\n';
        return kExitCodebook;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRun;
    }
}

} // namespace beamtrack

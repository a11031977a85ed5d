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

#include "beamtrack/codebook.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "beamtrack/seed.hpp"
#include "parallel.hpp"

namespace beamtrack {

namespace {

constexpr std::string_view kMagic = "beamtrack-codebook";

std::uint64_t hash_u64(std::uint64_t hash, std::uint64_t value) {
    for (int b = 0; b < 8; ++b) {
        hash ^= (value >> (8 * b)) & 0xffU;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::uint64_t hash_double(std::uint64_t hash, double value) {
    return hash_u64(hash, std::bit_cast<std::uint64_t>(value));
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

CodebookError corrupt(const std::string& what) {
    return CodebookError(CodebookError::Kind::corrupt_payload, "codebook payload corrupt: " + what);
}

std::vector<std::string_view> split_words(std::string_view line) {
    std::vector<std::string_view> words;
    std::size_t pos = 0;
    while (pos < line.size()) {
        const auto start = line.find_first_not_of(' ', pos);
        if (start == std::string_view::npos)
            break;
        const auto end = line.find(' ', start);
        words.push_back(line.substr(start, end == std::string_view::npos ? end : end - start));
        pos = end == std::string_view::npos ? line.size() : end;
    }
    return words;
}

template <typename T>
T parse_number(std::string_view word, const char* field) {
    T value{};
    const auto res = std::from_chars(word.data(), word.data() + word.size(), value);
    if (res.ec != std::errc() || res.ptr != word.data() + word.size())
        throw corrupt(std::string("bad ") + field + " '" + std::string(word) + "'");
    return value;
}

std::uint64_t parse_hex(std::string_view word, const char* field) {
    std::uint64_t value = 0;
    const auto res = std::from_chars(word.data(), word.data() + word.size(), value, 16);
    if (word.size() != 16 || res.ec != std::errc() || res.ptr != word.data() + word.size())
        throw corrupt(std::string("bad ") + field + " '" + std::string(word) + "'");
    return value;
}

} // namespace

int CodebookGrid::n_theta() const {
    return int(std::floor((theta_hi - theta_lo) / theta_step + 1e-9)) + 1;
}

int CodebookGrid::n_delta() const {
    return int(std::floor(delta_max / delta_step + 1e-9)) + 1;
}

void CodebookGrid::validate() const {
    if (!(theta_step > 0) || !(delta_step > 0) || !std::isfinite(theta_step) ||
        !std::isfinite(delta_step))
        throw DomainError("CodebookGrid: steps must be positive");
    if (!(theta_lo <= theta_hi) || !(delta_max >= 0) || !std::isfinite(theta_lo) ||
        !std::isfinite(theta_hi) || !std::isfinite(delta_max))
        throw DomainError("CodebookGrid: need theta_lo <= theta_hi and delta_max >= 0");
    const double last_theta = theta_at(n_theta() - 1);
    const double widest = delta_at(n_delta() - 1);
    if (theta_lo - widest < -1.0 || last_theta + widest > 1.0 || !(theta_lo > -1.0) ||
        !(last_theta < 1.0))
        throw DomainError("CodebookGrid: cells extend outside sine space [-1, 1]");
}

std::uint64_t scenario_fingerprint(const ArrayConfig<double>& cfg, const LinkBudget<double>& budget,
                                   double tau, double alpha, double r_min) {
    std::uint64_t h = fnv1a("beamtrack-scenario-v1");
    h = hash_u64(h, std::uint64_t(cfg.n_antennas()));
    h = hash_double(h, cfg.carrier_freq());
    h = hash_double(h, budget.tx_power);
    h = hash_double(h, budget.noise_psd);
    h = hash_double(h, budget.bandwidth);
    h = hash_double(h, budget.absorption_coeff);
    h = hash_double(h, tau);
    h = hash_double(h, alpha);
    h = hash_double(h, r_min);
    return h;
}

std::uint64_t scenario_fingerprint(const ObjectiveSpec& spec) {
    return scenario_fingerprint(spec.cfg, spec.budget, spec.tau, spec.alpha, spec.r_min);
}

std::string fingerprint_hex(std::uint64_t fingerprint) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << fingerprint;
    return os.str();
}

ObjectiveSpec cell_objective(const ObjectiveSpec& tmpl, const AngularInterval<double>& cell) {
    if (!cell.valid())
        throw DomainError("cell_objective: invalid cell interval");
    const Vec2<double> offset = tmpl.state.position - tmpl.geom.origin;
    const double range = offset.dot(tmpl.geom.boresight);
    if (!(range > 0))
        throw DomainError("cell_objective: template target must lie in front of the array");
    const auto lateral_at = [range](double s) { return range * s / std::sqrt(1.0 - s * s); };
    const double y0 = lateral_at(cell.lower());
    const double y1 = lateral_at(cell.upper());

    ObjectiveSpec spec = tmpl;
    spec.state.position = tmpl.geom.origin + range * tmpl.geom.boresight + y0 * tmpl.geom.lateral();
    spec.state.velocity = ((y1 - y0) / tmpl.tau) * tmpl.geom.lateral();
    spec.interval = cell;
    return spec;
}

Codebook build_codebook(const CodebookGrid& grid, const ObjectiveSpec& tmpl, const PsoConfig& pso,
                        int jobs) {
    grid.validate();
    tmpl.validate();
    Codebook cb;
    cb.grid = grid;
    cb.fingerprint = scenario_fingerprint(tmpl);
    cb.entries.resize(grid.size());
    const int n_delta = grid.n_delta();

    detail::parallel_for(grid.size(), jobs, [&](std::size_t flat) {
        const int i = int(flat / std::size_t(n_delta));
        const int j = int(flat % std::size_t(n_delta));
        const AngularInterval<double> cell{grid.theta_at(i), grid.delta_at(j)};
        try {
            PsoConfig cell_pso = pso;
            cell_pso.bounds = default_omega_bounds(tmpl.cfg.n_antennas());
            cell_pso.seed = derive_seed(pso.seed, std::uint64_t(i), std::uint64_t(j));
            const auto result = optimize_omega(cell_objective(tmpl, cell), cell_pso);
            cb.entries[flat] = {cell, result.omega_star, result.objective_value, cell_pso.seed,
                                tmpl.n_quad};
        } catch (const std::exception& e) {
            throw CodebookError(CodebookError::Kind::build_failure,
                                "codebook cell (" + std::to_string(i) + ", " + std::to_string(j) +
                                    ") theta_m=" + format_double(cell.theta_m) +
                                    " delta=" + format_double(cell.delta) + ": " + e.what());
        }
    });
    return cb;
}

CellIndex locate(const Codebook& cb, const AngularInterval<double>& query) {
    const auto& grid = cb.grid;
    if (!query.valid())
        throw CodebookError(CodebookError::Kind::out_of_range, "lookup: invalid query interval");
    const double x = (query.theta_m - grid.theta_lo) / grid.theta_step;
    const int i = int(std::ceil(x - 0.5 - 1e-9));
    const int j = std::max(0, int(std::ceil(query.delta / grid.delta_step - 1e-9)));
    const bool theta_ok = i >= 0 && i < grid.n_theta() &&
                          std::abs(query.theta_m - grid.theta_at(i)) <=
                              0.5 * grid.theta_step * (1.0 + 1e-9);
    if (!theta_ok || j >= grid.n_delta())
        throw CodebookError(CodebookError::Kind::out_of_range,
                            "lookup: interval theta_m=" + format_double(query.theta_m) +
                                " delta=" + format_double(query.delta) +
                                " is outside the codebook grid");
    return {i, j};
}

const CodebookEntry& lookup(const Codebook& cb, const AngularInterval<double>& query) {
    return cb.at(locate(cb, query));
}

Precoder<double> entry_precoder(const CodebookEntry& entry, const ArrayConfig<double>& cfg) {
    return adaptive_precoder(entry.interval, entry.omega, cfg);
}

std::string serialize(const Codebook& cb) {
    std::string out;
    out += std::string(kMagic) + ' ' + std::to_string(kCodebookFormatVersion) + '\n';
    out += "fingerprint " + fingerprint_hex(cb.fingerprint) + '\n';
    out += "grid " + format_double(cb.grid.theta_lo) + ' ' + format_double(cb.grid.theta_hi) + ' ' +
           format_double(cb.grid.theta_step) + ' ' + format_double(cb.grid.delta_step) + ' ' +
           format_double(cb.grid.delta_max) + '\n';
    out += "cells " + std::to_string(cb.grid.n_theta()) + ' ' + std::to_string(cb.grid.n_delta()) +
           '\n';
    const int n_delta = cb.grid.n_delta();
    for (std::size_t k = 0; k < cb.entries.size(); ++k) {
        const auto& e = cb.entries[k];
        out += std::to_string(k / std::size_t(n_delta)) + ' ' +
               std::to_string(k % std::size_t(n_delta)) + ' ' + format_double(e.interval.theta_m) +
               ' ' + format_double(e.interval.delta) + ' ' + format_double(e.omega) + ' ' +
               format_double(e.objective_value) + ' ' + std::to_string(e.seed) + ' ' +
               std::to_string(e.n_quad) + '\n';
    }
    out += "checksum " + fingerprint_hex(fnv1a(out)) + '\n';
    return out;
}

void save(const Codebook& cb, std::ostream& sink) {
    sink << serialize(cb);
    if (!sink)
        throw std::runtime_error("codebook save: write failed");
}

void save(const Codebook& cb, const std::string& path) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file)
        throw std::runtime_error("codebook save: cannot open '" + path + "'");
    save(cb, file);
}

Codebook deserialize(const std::string& text, std::optional<std::uint64_t> expected_fingerprint) {
    const std::string_view all(text);
    const auto first_end = all.find('\n');
    if (first_end == std::string_view::npos)
        throw corrupt("missing header");
    const auto header = split_words(all.substr(0, first_end));
    if (header.size() != 2 || header[0] != kMagic)
        throw corrupt("not a beamtrack codebook");
    const int version = parse_number<int>(header[1], "version");
    if (version != kCodebookFormatVersion)
        throw CodebookError(CodebookError::Kind::version_mismatch,
                            "codebook format version " + std::to_string(version) +
                                " is not supported (expected " +
                                std::to_string(kCodebookFormatVersion) + ")");

    // The trailer covers every byte before it.
    if (all.empty() || all.back() != '\n')
        throw corrupt("truncated trailer");
    const auto trailer_start = all.rfind('\n', all.size() - 2);
    if (trailer_start == std::string_view::npos)
        throw corrupt("missing checksum");
    const auto body = all.substr(0, trailer_start + 1);
    const auto trailer = split_words(all.substr(trailer_start + 1, all.size() - trailer_start - 2));
    if (trailer.size() != 2 || trailer[0] != "checksum")
        throw corrupt("missing checksum");
    if (parse_hex(trailer[1], "checksum") != fnv1a(body))
        throw corrupt("checksum mismatch");

    std::vector<std::string_view> lines;
    for (std::size_t pos = first_end + 1; pos < body.size();) {
        const auto end = body.find('\n', pos);
        lines.push_back(body.substr(pos, end - pos));
        pos = end + 1;
    }
    if (lines.size() < 3)
        throw corrupt("missing header records");

    Codebook cb;
    const auto fp = split_words(lines[0]);
    if (fp.size() != 2 || fp[0] != "fingerprint")
        throw corrupt("missing fingerprint");
    cb.fingerprint = parse_hex(fp[1], "fingerprint");

    const auto grid = split_words(lines[1]);
    if (grid.size() != 6 || grid[0] != "grid")
        throw corrupt("missing grid");
    cb.grid = {parse_number<double>(grid[1], "theta_lo"), parse_number<double>(grid[2], "theta_hi"),
               parse_number<double>(grid[3], "theta_step"),
               parse_number<double>(grid[4], "delta_step"),
               parse_number<double>(grid[5], "delta_max")};
    try {
        cb.grid.validate();
    } catch (const DomainError& e) {
        throw corrupt(e.what());
    }

    const auto cells = split_words(lines[2]);
    if (cells.size() != 3 || cells[0] != "cells" ||
        parse_number<int>(cells[1], "n_theta") != cb.grid.n_theta() ||
        parse_number<int>(cells[2], "n_delta") != cb.grid.n_delta())
        throw corrupt("cell count disagrees with grid");
    if (lines.size() - 3 != cb.grid.size())
        throw corrupt("expected " + std::to_string(cb.grid.size()) + " entries, found " +
                      std::to_string(lines.size() - 3));

    const int n_delta = cb.grid.n_delta();
    cb.entries.reserve(cb.grid.size());
    for (std::size_t k = 0; k < cb.grid.size(); ++k) {
        const auto w = split_words(lines[3 + k]);
        if (w.size() != 8)
            throw corrupt("entry " + std::to_string(k) + " has " + std::to_string(w.size()) +
                          " fields");
        if (parse_number<std::size_t>(w[0], "theta index") != k / std::size_t(n_delta) ||
            parse_number<std::size_t>(w[1], "delta index") != k % std::size_t(n_delta))
            throw corrupt("entry " + std::to_string(k) + " out of row-major order");
        CodebookEntry e{{parse_number<double>(w[2], "theta_m"), parse_number<double>(w[3], "delta")},
                        parse_number<double>(w[4], "omega"),
                        parse_number<double>(w[5], "objective"),
                        parse_number<std::uint64_t>(w[6], "seed"),
                        parse_number<int>(w[7], "n_quad")};
        if (!e.interval.valid() || !std::isfinite(e.omega))
            throw corrupt("entry " + std::to_string(k) + " has invalid parameters");
        cb.entries.push_back(e);
    }

    if (expected_fingerprint && *expected_fingerprint != cb.fingerprint)
        throw CodebookError(CodebookError::Kind::fingerprint_mismatch,
                            "codebook fingerprint " + fingerprint_hex(cb.fingerprint) +
                                " does not match the active scenario " +
                                fingerprint_hex(*expected_fingerprint));
    return cb;
}

Codebook load(std::istream& source, std::optional<std::uint64_t> expected_fingerprint) {
    std::ostringstream buffer;
    buffer << source.rdbuf();
    return deserialize(buffer.str(), expected_fingerprint);
}

Codebook load(const std::string& path, std::optional<std::uint64_t> expected_fingerprint) {
    std::ifstream file(path, std::ios::binary);
    if (!file)
        throw CodebookError(CodebookError::Kind::corrupt_payload,
                            "codebook load: cannot open '" + path + "'");
    return load(file, expected_fingerprint);
}

} // namespace beamtrack

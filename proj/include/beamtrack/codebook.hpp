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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "beamtrack/optimizer.hpp"

namespace beamtrack {

/// Uniform (theta_m, delta) lattice in sine space. Row i holds center
/// theta_lo + i * theta_step, column j holds half-width j * delta_step.
struct CodebookGrid {
    double theta_lo = 0.0;
    double theta_hi = 0.4;
    double theta_step = 0.01;
    double delta_step = 0.002;
    double delta_max = 0.1;

    int n_theta() const;
    int n_delta() const;
    double theta_at(int i) const { return theta_lo + i * theta_step; }
    double delta_at(int j) const { return j * delta_step; }
    std::size_t size() const { return std::size_t(n_theta()) * std::size_t(n_delta()); }

    void validate() const;

    friend bool operator==(const CodebookGrid&, const CodebookGrid&) = default;
};

struct CodebookEntry {
    AngularInterval<double> interval;
    double omega;
    double objective_value;
    std::uint64_t seed;
    int n_quad;

    friend bool operator==(const CodebookEntry&, const CodebookEntry&) = default;
};

struct CellIndex {
    int theta_index;
    int delta_index;

    friend bool operator==(const CellIndex&, const CellIndex&) = default;
};

struct Codebook {
    CodebookGrid grid;
    std::vector<CodebookEntry> entries;  // row-major over (theta_index, delta_index)
    std::uint64_t fingerprint = 0;

    std::size_t flat_index(CellIndex cell) const {
        return std::size_t(cell.theta_index) * std::size_t(grid.n_delta()) +
               std::size_t(cell.delta_index);
    }
    const CodebookEntry& at(CellIndex cell) const { return entries.at(flat_index(cell)); }

    friend bool operator==(const Codebook&, const Codebook&) = default;
};

inline constexpr int kCodebookFormatVersion = 1;

/// Hash identifying the physical scenario a codebook was optimized for.
std::uint64_t scenario_fingerprint(const ArrayConfig<double>& cfg, const LinkBudget<double>& budget,
                                   double tau, double alpha, double r_min);
std::uint64_t scenario_fingerprint(const ObjectiveSpec& spec);

/// Objective for one codebook cell: a target on the template's path line
/// (same perpendicular range) sweeping exactly the cell's sine interval in one period.
ObjectiveSpec cell_objective(const ObjectiveSpec& tmpl, const AngularInterval<double>& cell);

/// Optimizes every cell. Search bounds always follow default_omega_bounds; the
/// PSO seed of cell (i, j) is derive_seed(pso.seed, i, j). `jobs` <= 0 uses all cores.
Codebook build_codebook(const CodebookGrid& grid, const ObjectiveSpec& tmpl,
                        const PsoConfig& pso, int jobs = 0);

/// Nearest center (ties to the lower index) and the smallest half-width that
/// still covers the query.
CellIndex locate(const Codebook& cb, const AngularInterval<double>& query);
const CodebookEntry& lookup(const Codebook& cb, const AngularInterval<double>& query);

Precoder<double> entry_precoder(const CodebookEntry& entry, const ArrayConfig<double>& cfg);

std::string serialize(const Codebook& cb);
void save(const Codebook& cb, std::ostream& sink);
void save(const Codebook& cb, const std::string& path);

/// Throws CodebookError: version_mismatch, corrupt_payload, or
/// fingerprint_mismatch when `expected_fingerprint` is given and differs.
Codebook deserialize(const std::string& text,
                     std::optional<std::uint64_t> expected_fingerprint = std::nullopt);
Codebook load(std::istream& source,
              std::optional<std::uint64_t> expected_fingerprint = std::nullopt);
Codebook load(const std::string& path,
              std::optional<std::uint64_t> expected_fingerprint = std::nullopt);

std::string fingerprint_hex(std::uint64_t fingerprint);

} // namespace beamtrack

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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "beamtrack/codebook.hpp"
#include "beamtrack/errors.hpp"
#include "beamtrack/seed.hpp"
#include "beamtrack/tracking.hpp"

using namespace beamtrack;

namespace {

CodebookGrid small_grid() { return {0.0, 0.05, 0.01, 0.002, 0.01}; }

PsoConfig small_pso() {
    PsoConfig pso;
    pso.n_particles = 8;
    pso.n_iterations = 8;
    pso.seed = 99;
    pso.bounds = default_omega_bounds(128);
    return pso;
}

const Codebook& shared_book() {
    static const Codebook cb =
        build_codebook(small_grid(), Scenario{}.objective_template(), small_pso(), 1);
    return cb;
}

CodebookError::Kind load_error(const std::string& text, std::optional<std::uint64_t> fp = {}) {
    try {
        deserialize(text, fp);
    } catch (const CodebookError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "expected a CodebookError";
    return CodebookError::Kind::build_failure;
}

} // namespace

TEST(CodebookGrid, CountsAndCenters) {
    const CodebookGrid g;
    EXPECT_EQ(g.n_theta(), 41);
    EXPECT_EQ(g.n_delta(), 51);
    EXPECT_EQ(g.size(), 2091u);
    EXPECT_NEAR(g.theta_at(30), 0.3, 1e-15);
    EXPECT_NEAR(g.delta_at(50), 0.1, 1e-15);
}

TEST(CodebookGrid, RejectsBadGrids) {
    EXPECT_THROW((CodebookGrid{0.0, 0.3, 0.0, 0.002, 0.1}.validate()), DomainError);
    EXPECT_THROW((CodebookGrid{0.3, 0.0, 0.01, 0.002, 0.1}.validate()), DomainError);
    EXPECT_THROW((CodebookGrid{0.0, 0.95, 0.01, 0.01, 0.1}.validate()), DomainError);
}

TEST(Codebook, CellsCoverGridWithDerivedSeeds) {
    const auto& cb = shared_book();
    const auto grid = small_grid();
    ASSERT_EQ(cb.entries.size(), grid.size());
    const auto bounds = default_omega_bounds(128);
    for (int i = 0; i < grid.n_theta(); ++i)
        for (int j = 0; j < grid.n_delta(); ++j) {
            const auto& e = cb.at({i, j});
            EXPECT_DOUBLE_EQ(e.interval.theta_m, grid.theta_at(i));
            EXPECT_DOUBLE_EQ(e.interval.delta, grid.delta_at(j));
            EXPECT_EQ(e.seed, derive_seed(99, std::uint64_t(i), std::uint64_t(j)));
            EXPECT_GE(e.omega, bounds.lo);
            EXPECT_LE(e.omega, bounds.hi);
            EXPECT_TRUE(std::isfinite(e.objective_value));
        }
}

TEST(Codebook, RebuildIsByteIdenticalAcrossThreadCounts) {
    const auto again =
        build_codebook(small_grid(), Scenario{}.objective_template(), small_pso(), 3);
    EXPECT_EQ(serialize(again), serialize(shared_book()));
}

TEST(Codebook, CellObjectiveSweepsExactlyTheCell) {
    const auto tmpl = Scenario{}.objective_template();
    const AngularInterval<double> cell{0.2, 0.03};
    const auto spec = cell_objective(tmpl, cell);
    const auto iv = path_to_interval(spec.state, spec.tau, spec.geom);
    EXPECT_NEAR(iv.theta_m, 0.2, 1e-12);
    EXPECT_NEAR(iv.delta, 0.03, 1e-12);
    EXPECT_NEAR(spec.state.position.x(), 100.0, 1e-12);
}

TEST(Codebook, SaveLoadRoundTripIsExact) {
    const auto& cb = shared_book();
    const auto text = serialize(cb);
    EXPECT_EQ(deserialize(text, cb.fingerprint), cb);

    const auto path = std::filesystem::temp_directory_path() / "beamtrack_cb_roundtrip.txt";
    save(cb, path.string());
    EXPECT_EQ(load(path.string(), cb.fingerprint), cb);
    std::filesystem::remove(path);
}

TEST(Codebook, TruncatedFileIsCorrupt) {
    const auto text = serialize(shared_book());
    EXPECT_EQ(load_error(text.substr(0, text.size() / 2)), CodebookError::Kind::corrupt_payload);
    EXPECT_EQ(load_error(text.substr(0, text.size() - 1)), CodebookError::Kind::corrupt_payload);
}

TEST(Codebook, FlippedByteFailsChecksum) {
    auto text = serialize(shared_book());
    const auto pos = text.find('\n', text.find("cells")) + 5;
    text[pos] = text[pos] == '1' ? '2' : '1';
    EXPECT_EQ(load_error(text), CodebookError::Kind::corrupt_payload);
}

TEST(Codebook, VersionMismatchDetected) {
    auto text = serialize(shared_book());
    text.replace(0, text.find('\n'), "beamtrack-codebook 2");
    EXPECT_EQ(load_error(text), CodebookError::Kind::version_mismatch);
}

TEST(Codebook, FingerprintMismatchDetected) {
    const auto& cb = shared_book();
    EXPECT_EQ(load_error(serialize(cb), cb.fingerprint ^ 1u),
              CodebookError::Kind::fingerprint_mismatch);
}

TEST(Codebook, MissingFileIsReported) {
    EXPECT_THROW(load("/nonexistent/beamtrack/codebook.txt"), CodebookError);
}

TEST(Codebook, FingerprintTracksPhysicsNotMotion) {
    Scenario a;
    Scenario b = a;
    b.velocity = 90.0;
    EXPECT_EQ(a.fingerprint(), b.fingerprint());
    b = apply_axis(a, SweepAxis::tx_power, 30.0);
    EXPECT_NE(a.fingerprint(), b.fingerprint());
    b = a;
    b.tau = 0.1;
    EXPECT_NE(a.fingerprint(), b.fingerprint());
    EXPECT_EQ(shared_book().fingerprint, a.fingerprint());
    EXPECT_EQ(fingerprint_hex(0x1234u), "0000000000001234");
}

TEST(Lookup, NearestCenterWithTiesToLowerIndex) {
    const auto& cb = shared_book();
    EXPECT_EQ(locate(cb, {0.012, 0.0}), (CellIndex{1, 0}));
    EXPECT_EQ(locate(cb, {0.018, 0.0}), (CellIndex{2, 0}));
    EXPECT_EQ(locate(cb, {0.015, 0.0}), (CellIndex{1, 0}));
    EXPECT_EQ(locate(cb, {0.05 + 0.004, 0.0}), (CellIndex{5, 0}));
}

TEST(Lookup, SmallestCoveringHalfWidth) {
    const auto& cb = shared_book();
    EXPECT_EQ(locate(cb, {0.02, 0.0}).delta_index, 0);
    EXPECT_EQ(locate(cb, {0.02, 0.0001}).delta_index, 1);
    EXPECT_EQ(locate(cb, {0.02, 0.004}).delta_index, 2);
    EXPECT_EQ(locate(cb, {0.02, 0.0041}).delta_index, 3);
    EXPECT_EQ(&lookup(cb, {0.02, 0.004}), &cb.at({2, 2}));
}

TEST(Lookup, OutsideGridThrows) {
    const auto& cb = shared_book();
    const auto kind_of = [&](AngularInterval<double> q) {
        try {
            locate(cb, q);
        } catch (const CodebookError& e) {
            return e.kind();
        }
        return CodebookError::Kind::build_failure;
    };
    EXPECT_EQ(kind_of({0.02, 0.0101}), CodebookError::Kind::out_of_range);
    EXPECT_EQ(kind_of({0.0551, 0.0}), CodebookError::Kind::out_of_range);
    EXPECT_EQ(kind_of({-0.0051, 0.0}), CodebookError::Kind::out_of_range);
    EXPECT_EQ(kind_of({0.0, -0.1}), CodebookError::Kind::out_of_range);
}

TEST(Lookup, EntryPrecoderRebuildsStoredBeam) {
    const auto& cb = shared_book();
    const auto& e = cb.at({3, 4});
    const ArrayConfig<double> cfg(128, 220e9);
    const auto p = entry_precoder(e, cfg);
    EXPECT_EQ(p.omega, e.omega);
    EXPECT_NEAR(p.weights.squaredNorm(), 1.0, 1e-12);
    EXPECT_LT((p.weights - adaptive_precoder(e.interval, e.omega, cfg).weights).norm(), 1e-15);
}

TEST(Codebook, ObjectivePositiveAndDecreasingInWidth) {
    const auto& cb = shared_book();
    for (int i = 0; i < cb.grid.n_theta(); ++i)
        for (int j = 0; j < cb.grid.n_delta(); ++j) {
            EXPECT_GT(cb.at({i, j}).objective_value, 0.0);
            if (j > 0) {
                EXPECT_LT(cb.at({i, j}).objective_value, cb.at({i, j - 1}).objective_value)
                    << i << ' ' << j;
            }
        }
}

TEST(Codebook, SingleCellEqualsDirectOptimization) {
    const auto tmpl = Scenario{}.objective_template();
    const CodebookGrid one{0.1, 0.1, 0.01, 0.004, 0.004};
    const auto cb = build_codebook(one, tmpl, small_pso(), 1);
    auto pso = small_pso();
    pso.seed = derive_seed(99, 0, 1);
    const auto direct = optimize_omega(cell_objective(tmpl, {0.1, 0.004}), pso);
    EXPECT_EQ(cb.at({0, 1}).omega, direct.omega_star);
    EXPECT_EQ(cb.at({0, 1}).objective_value, direct.objective_value);
}

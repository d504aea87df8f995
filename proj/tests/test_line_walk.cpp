#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "helpers.hpp"
#include "spinwalk/line_walk.hpp"

using Catch::Approx;
using namespace spinwalk;
namespace ts = testing_support;

TEST_CASE("init_line places a right-mover at the origin") {
    const auto s = init_line(0.4, SpinWindow::all());
    REQUIRE(s.tau == 0);
    REQUIRE(s.amps.size() == 1);
    const auto& [key, amp] = *s.amps.begin();
    CHECK(key == AmpKey{0, Direction::Right, 0});
    CHECK(amp == Complex(1.0, 0.0));
    CHECK(s.params.t == Complex(std::sqrt(0.4), 0.0));
    CHECK(s.params.r == Complex(0.0, std::sqrt(0.6)));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS(init_line(-0.1, SpinWindow::all()), InvalidTransparency);
    CHECK_THROWS_AS(init_line(1.5, SpinWindow::all()), InvalidTransparency);
    CHECK_THROWS_AS(SpinWindow::finite(4), InvalidWindow);
    CHECK_THROWS_AS(SpinWindow::finite(0), InvalidWindow);
    CHECK_THROWS_AS(SpinWindow::finite(-3), InvalidWindow);
}

TEST_CASE("perfect mirror and ballistic limits") {
    SECTION("T = 0 bounces at the origin") {
        auto s = init_line(0.0, SpinWindow::all());
        for (int tau = 1; tau <= 8; ++tau) {
            s = step_line(s);
            if (tau % 2 == 0) {
                const auto p = position_probabilities(s);
                REQUIRE(p.entries.count(0) == 1);
                CHECK(p.entries.at(0) == Approx(1.0).epsilon(1e-12));
            }
        }
    }
    SECTION("T = 1 moves ballistically") {
        auto s = init_line(1.0, SpinWindow::all());
        for (int tau = 1; tau <= 8; ++tau) {
            s = step_line(s);
            REQUIRE(s.amps.size() == 1);
            const auto& [key, amp] = *s.amps.begin();
            CHECK(key.cell == tau);
            CHECK(key.dir == Direction::Right);
            CHECK(std::abs(amp - Complex(1.0, 0.0)) < 1e-12);
        }
    }
}

TEST_CASE("first two steps at T = 0.4 match the closed form") {
    auto s = step_line(init_line(0.4, SpinWindow::all()));
    REQUIRE(s.amps.size() == 2);
    CHECK(std::abs(s.amps.at({1, Direction::Right, 0}) - Complex(0.6324555320336759, 0.0)) <
          1e-12);
    CHECK(std::abs(s.amps.at({0, Direction::Left, 0}) - Complex(0.0, 0.7745966692414834)) <
          1e-12);
    auto p = position_probabilities(s);
    CHECK(p.entries.at(1) == Approx(0.4).epsilon(1e-12));
    CHECK(p.entries.at(0) == Approx(0.6).epsilon(1e-12));

    s = step_line(s);
    p = position_probabilities(s);
    CHECK(p.entries.at(2) == Approx(0.16).epsilon(1e-12));
    CHECK(p.entries.at(1) == Approx(0.24).epsilon(1e-12));
    CHECK(p.entries.at(-1) == Approx(0.24).epsilon(1e-12));
    CHECK(p.entries.at(0) == Approx(0.36).epsilon(1e-12));
    CHECK(p.sum() == Approx(1.0).margin(1e-10));
}

TEST_CASE("norm, parity and support invariants hold at every step") {
    for (const auto& window :
         {SpinWindow::none(), SpinWindow::all(), SpinWindow::finite(3), SpinWindow::finite(7)}) {
        auto s = init_line(0.4, window);
        for (int tau = 1; tau <= 40; ++tau) {
            s = step_line(s);
            CHECK(std::abs(total_norm(s) - 1.0) < 1e-12);
            for (const auto& [key, amp] : s.amps) {
                CHECK(std::abs(key.cell) <= tau);
                if (key.dir == Direction::Left)
                    CHECK((key.cell + tau) % 2 != 0);
                else
                    CHECK((key.cell + tau) % 2 == 0);
                CHECK(std::abs(amp) >= kAmplitudePruneTol);
            }
        }
    }
}

TEST_CASE("amplitudes equal the coherent sum over enumerated paths") {
    for (const auto& window : {SpinWindow::none(), SpinWindow::finite(3), SpinWindow::finite(5)}) {
        for (double T : {0.4, 0.7}) {
            auto s = init_line(T, window);
            for (int tau = 1; tau <= 10; ++tau) {
                s = step_line(s);
                const auto oracle = ts::line_oracle_amplitudes(T, window, tau);
                std::size_t oracle_nonzero = 0;
                for (const auto& [key, amp] : oracle) {
                    if (std::abs(amp) < kAmplitudePruneTol) continue;
                    ++oracle_nonzero;
                    REQUIRE(s.amps.count(key) == 1);
                    CHECK(std::abs(s.amps.at(key) - amp) < 1e-12);
                }
                CHECK(s.amps.size() == oracle_nonzero);
            }
        }
    }
}

TEST_CASE("with every boundary monitored the record follows the position") {
    // Crossing parity of boundary k is fixed by the endpoint alone, which is
    // what justifies keying All-mode amplitudes by (cell, dir) only.
    const auto paths = ts::enumerate_line_paths(0.4, 9);
    std::map<int, std::set<int>> record_by_cell;
    for (const auto& p : paths) {
        auto [it, inserted] = record_by_cell.try_emplace(p.cell, p.flipped);
        CHECK(it->second == p.flipped);
    }
    // All-mode amplitudes then coincide with the bare walk's
    auto s = init_line(0.4, SpinWindow::all());
    for (int tau = 1; tau <= 9; ++tau) s = step_line(s);
    const auto oracle = ts::line_oracle_amplitudes(0.4, SpinWindow::all(), 9);
    for (const auto& [key, amp] : oracle)
        if (std::abs(amp) >= kAmplitudePruneTol) CHECK(std::abs(s.amps.at(key) - amp) < 1e-12);
}

TEST_CASE("reduced density matrix per window mode") {
    SECTION("no spins: rank-1 projector, zero entropy") {
        auto s = init_line(0.4, SpinWindow::none());
        for (int tau = 0; tau <= 20; ++tau) {
            const auto rho = reduced_density_matrix_line(s);
            CHECK(validate_density_matrix(rho).empty());
            CHECK(von_neumann_entropy(rho) < 1e-12);
            s = step_line(s);
        }
    }
    SECTION("all spins: diagonal in the position basis") {
        auto s = init_line(0.4, SpinWindow::all());
        for (int tau = 0; tau <= 15; ++tau) {
            const auto rho = reduced_density_matrix_line(s);
            CHECK(validate_density_matrix(rho).empty());
            double max_off = 0.0;
            for (Eigen::Index a = 0; a < rho.dim(); ++a)
                for (Eigen::Index b = 0; b < rho.dim(); ++b)
                    if (a != b) max_off = std::max(max_off, std::abs(rho.entries(a, b)));
            CHECK(max_off < 1e-14);
            s = step_line(s);
        }
    }
    SECTION("single spin at tau = 1 fully distinguishes the two branches") {
        const auto s = step_line(init_line(0.4, SpinWindow::finite(1)));
        const auto rho = reduced_density_matrix_line(s);
        REQUIRE(rho.dim() == 2);
        // labels sorted by (cell, dir): (0,L) then (1,R)
        CHECK(rho.basis_labels[0] == "(0,L)");
        CHECK(rho.basis_labels[1] == "(1,R)");
        CHECK(rho.entries(0, 0).real() == Approx(0.6).epsilon(1e-12));
        CHECK(rho.entries(1, 1).real() == Approx(0.4).epsilon(1e-12));
        CHECK(std::abs(rho.entries(0, 1)) < 1e-15);
    }
    SECTION("finite windows produce valid density matrices") {
        auto s = init_line(0.7, SpinWindow::finite(5));
        for (int tau = 0; tau <= 25; ++tau) {
            CHECK(validate_density_matrix(reduced_density_matrix_line(s)).empty());
            s = step_line(s);
        }
    }
}

TEST_CASE("run_line series") {
    SECTION("starts at zero entropy") {
        for (const auto& window : {SpinWindow::none(), SpinWindow::all(), SpinWindow::finite(3)})
            CHECK(run_line(0.4, window, 0).values.at(0) == Approx(0.0).margin(1e-12));
    }
    SECTION("unmonitored evolution stays at zero entropy") {
        const auto series = run_line(0.3, SpinWindow::none(), 50);
        for (double v : series.values) CHECK(std::abs(v) < 1e-12);
    }
    SECTION("all-spins series at T = 0.4 drops between steps 2-3 and 7-8") {
        const auto series = run_line(0.4, SpinWindow::all(), 10);
        CHECK(series.values[3] < series.values[2] - 1e-12);
        CHECK(series.values[8] < series.values[7] - 1e-12);
    }
    SECTION("negative step count is rejected") {
        CHECK_THROWS_AS(run_line(0.4, SpinWindow::all(), -1), std::invalid_argument);
    }
}

TEST_CASE("finite windows reproduce the all-spins series until the front escapes") {
    const auto all_series = run_line(0.4, SpinWindow::all(), 12);
    for (int n : {1, 3, 5, 7}) {
        const auto series = run_line(0.4, SpinWindow::finite(n), 12);
        const int horizon = (n - 1) / 2 + 1;
        for (int tau = 0; tau <= horizon; ++tau)
            CHECK(std::abs(series.values[static_cast<std::size_t>(tau)] -
                           all_series.values[static_cast<std::size_t>(tau)]) < 1e-9);
        // and visibly departs afterwards (saturation vs logarithmic growth)
        CHECK(series.values.back() < all_series.values.back());
    }
}

TEST_CASE("side weights split the distribution around the window") {
    SECTION("single spin: no interior, left + right = 1 at every step") {
        auto s = init_line(0.4, SpinWindow::finite(1));
        for (int tau = 0; tau <= 30; ++tau) {
            const auto w = side_weights(s);
            CHECK(w.inside == 0.0);
            CHECK(w.left + w.right == Approx(1.0).margin(1e-10));
            s = step_line(s);
        }
    }
    SECTION("wider windows: weights partition the norm") {
        auto s = init_line(0.4, SpinWindow::finite(5));
        for (int tau = 0; tau <= 30; ++tau) {
            const auto w = side_weights(s);
            CHECK(w.left + w.right + w.inside == Approx(1.0).margin(1e-10));
            s = step_line(s);
        }
        const auto w = side_weights(s);
        CHECK(w.inside < 0.2);  // interior weight decays as the front departs
    }
}

#pragma once

// Shared test utilities: seeded random operators and the independent oracles
// (explicit path enumerations, classical propagation) the models are checked
// against. Everything here recomputes physics from first principles rather
// than reusing the library's propagation shortcuts.

#include <cmath>
#include <complex>
#include <map>
#include <random>
#include <set>
#include <vector>

#include <Eigen/Dense>

#include "spinwalk/lattice.hpp"
#include "spinwalk/line_walk.hpp"
#include "spinwalk/tree.hpp"

namespace testing_support {

using spinwalk::Complex;

inline std::mt19937_64 seeded_rng(std::uint64_t seed = 0x5eed5eedULL) {
    return std::mt19937_64(seed);
}

inline Eigen::MatrixXcd random_hermitian(Eigen::Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXcd m(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i)
        for (Eigen::Index j = 0; j < dim; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
    return 0.5 * (m + m.adjoint());
}

/// Unitary built from a product of random complex Givens rotations; unitary
/// by construction regardless of round-off.
inline Eigen::MatrixXcd random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    std::uniform_int_distribution<Eigen::Index> pick(0, dim - 1);
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(dim, dim);
    const Eigen::Index rotations = 4 * dim * dim;
    for (Eigen::Index k = 0; k < rotations; ++k) {
        Eigen::Index p = pick(rng), q = pick(rng);
        if (p == q) continue;
        const double theta = angle(rng), phi = angle(rng);
        const Complex c(std::cos(theta), 0.0);
        const Complex s = std::sin(theta) * Complex(std::cos(phi), std::sin(phi));
        Eigen::VectorXcd row_p = u.row(p), row_q = u.row(q);
        u.row(p) = c * row_p + s * row_q;
        u.row(q) = -std::conj(s) * row_p + c * row_q;
    }
    return u;
}

/// Random mixed state: normalized mixture of a few random pure states.
inline spinwalk::DensityMatrix random_density_matrix(Eigen::Index dim, std::mt19937_64& rng,
                                                     int rank = 0) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.1, 1.0);
    if (rank <= 0) rank = static_cast<int>(dim);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
    for (int k = 0; k < rank; ++k) {
        Eigen::VectorXcd psi(dim);
        for (Eigen::Index i = 0; i < dim; ++i) psi(i) = Complex(gauss(rng), gauss(rng));
        psi.normalize();
        m += unif(rng) * psi * psi.adjoint();
    }
    m /= m.trace().real();
    spinwalk::DensityMatrix rho;
    rho.entries = m;
    rho.basis_labels.resize(static_cast<std::size_t>(dim));
    for (Eigen::Index i = 0; i < dim; ++i)
        rho.basis_labels[static_cast<std::size_t>(i)] = std::to_string(i);
    return rho;
}

// ---------------------------------------------------------------------------
// Line-walk oracle: explicit Feynman paths.

struct LinePath {
    Complex amp;
    int cell = 0;
    spinwalk::Direction dir = spinwalk::Direction::Right;
    std::set<int> flipped;  // boundaries crossed an odd number of times
};

/// All 2^tau transmit/reflect histories of the line walk, with the exact
/// per-boundary crossing parities.
inline std::vector<LinePath> enumerate_line_paths(double transparency, int tau) {
    const auto params = spinwalk::make_scatterer(transparency);
    std::vector<LinePath> paths{{Complex(1.0, 0.0), 0, spinwalk::Direction::Right, {}}};
    for (int step = 0; step < tau; ++step) {
        std::vector<LinePath> grown;
        grown.reserve(paths.size() * 2);
        for (const auto& p : paths) {
            LinePath transmitted = p;
            transmitted.amp *= params.t;
            const int boundary =
                p.dir == spinwalk::Direction::Right ? p.cell : p.cell - 1;
            if (transmitted.flipped.count(boundary))
                transmitted.flipped.erase(boundary);
            else
                transmitted.flipped.insert(boundary);
            transmitted.cell += p.dir == spinwalk::Direction::Right ? 1 : -1;
            grown.push_back(std::move(transmitted));
            LinePath reflected = p;
            reflected.amp *= params.r;
            reflected.dir = p.dir == spinwalk::Direction::Right ? spinwalk::Direction::Left
                                                                : spinwalk::Direction::Right;
            grown.push_back(std::move(reflected));
        }
        paths = std::move(grown);
    }
    return paths;
}

/// Coherent sums over enumerated paths keyed the same way as LineWalkState:
/// (cell, dir, mask restricted to the window's monitored boundaries).
inline std::map<spinwalk::AmpKey, Complex> line_oracle_amplitudes(double transparency,
                                                                  spinwalk::SpinWindow window,
                                                                  int tau) {
    std::map<spinwalk::AmpKey, Complex> amps;
    for (const auto& p : enumerate_line_paths(transparency, tau)) {
        std::uint64_t mask = 0;
        if (window.mode == spinwalk::SpinWindow::Mode::Finite)
            for (int b : p.flipped)
                if (window.monitors(b)) mask ^= window.mask_bit(b);
        amps[{p.cell, p.dir, mask}] += p.amp;
    }
    return amps;
}

// ---------------------------------------------------------------------------
// Tree oracle: joint electron x record states with explicit two-level spins.

/// Density matrix rebuilt from per-edge record vectors: every edge of the
/// depth-tau tree holds a two-level spin that is (1, 0) untouched and
/// (alpha, sqrt(1-|alpha|^2)) once rotated. Uses a complex alpha to check
/// that only |alpha|^2 is observable.
inline spinwalk::DensityMatrix tree_oracle(const spinwalk::TreeParams& p, int tau,
                                           double alpha_phase = 0.7310) {
    const auto paths = spinwalk::all_paths(p.Z, tau);
    const Complex alpha =
        std::sqrt(p.overlap.beta) * Complex(std::cos(alpha_phase), std::sin(alpha_phase));
    auto edges = [](const spinwalk::PathIndex& path) {
        std::set<std::string> out;
        std::string prefix;
        for (int d : path.digits) {
            prefix += static_cast<char>('0' + d);
            out.insert(prefix);
        }
        return out;
    };
    std::vector<Complex> amp(paths.size());
    std::vector<std::set<std::string>> touched(paths.size());
    for (std::size_t k = 0; k < paths.size(); ++k) {
        amp[k] = spinwalk::path_amplitude(p, paths[k]);
        touched[k] = edges(paths[k]);
    }
    const auto n = static_cast<Eigen::Index>(paths.size());
    spinwalk::DensityMatrix rho;
    rho.entries.resize(n, n);
    for (std::size_t a = 0; a < paths.size(); ++a) {
        for (std::size_t b = 0; b < paths.size(); ++b) {
            Complex record(1.0, 0.0);
            for (const auto& e : touched[a])
                if (!touched[b].count(e)) record *= alpha;  // <initial|rotated>
            for (const auto& e : touched[b])
                if (!touched[a].count(e)) record *= std::conj(alpha);
            rho.entries(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
                amp[a] * std::conj(amp[b]) * record;
        }
    }
    rho.basis_labels.reserve(paths.size());
    for (const auto& path : paths) rho.basis_labels.push_back(path.label());
    return rho;
}

// ---------------------------------------------------------------------------
// Classical persistent random walk (beta = 0 limit of the lattice model).

inline std::map<std::pair<int, int>, double> classical_persistent_walk(double transparency,
                                                                       int tau) {
    const double T = transparency;
    std::map<std::pair<int, int>, double> prob{{{0, 0}, 1.0}};  // (cell, 0=R/1=L)
    for (int step = 0; step < tau; ++step) {
        std::map<std::pair<int, int>, double> next;
        for (const auto& [state, p] : prob) {
            const auto [cell, dir] = state;
            if (dir == 0) {
                next[{cell + 1, 0}] += T * p;
                next[{cell, 1}] += (1.0 - T) * p;
            } else {
                next[{cell - 1, 1}] += T * p;
                next[{cell, 0}] += (1.0 - T) * p;
            }
        }
        prob = std::move(next);
    }
    return prob;
}

}  // namespace testing_support

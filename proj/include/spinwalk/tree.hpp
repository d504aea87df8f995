#pragma once

// Interference-free splitter tree. A particle entering the root is split at
// every node into Z outgoing arms with fixed amplitudes and no backscattering,
// rotating one fresh reservoir spin per arm traversed. After tau steps the
// electron occupies Z^tau leaves; tracing out the spin records leaves
//
//     rho[a][b] = A_a conj(A_b) beta^(tau - d(a, b)),
//
// where A_a is the product of branch amplitudes along path a, d is the length
// of the paths' common prefix and beta the squared record overlap: each arm
// where the two paths differ contributes one factor alpha from one record and
// conj(alpha) from the other, so only beta = |alpha|^2 is observable.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "spinwalk/numerics.hpp"
#include "spinwalk/reservoir.hpp"
#include "spinwalk/scatterer.hpp"
#include "spinwalk/series.hpp"

namespace spinwalk {

struct InvalidDigit : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct LengthMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct DimensionCap : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr long long kDefaultDimensionCap = 4096;

/// Largest matrix dimension any tree routine will materialize. The
/// WALK_DIM_CAP environment variable overrides the default of 4096.
inline long long dimension_cap() {
    if (const char* env = std::getenv("WALK_DIM_CAP")) {
        char* end = nullptr;
        const long long v = std::strtoll(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return v;
    }
    return kDefaultDimensionCap;
}

/// Branch choices from the root, one digit in [0, Z) per step.
struct PathIndex {
    std::vector<int> digits;

    int length() const { return static_cast<int>(digits.size()); }

    std::string label() const {
        std::string out;
        for (int d : digits) {
            if (d < 10)
                out += static_cast<char>('0' + d);
            else
                out += "[" + std::to_string(d) + "]";
        }
        return out;
    }
};

/// Uniform splitter parameters used at every node: Z outgoing arms whose
/// amplitudes form one column of a unitary, plus the record overlap.
struct TreeParams {
    int Z;
    std::vector<Complex> branch_amps;
    ReservoirOverlap overlap;
};

/// Canonical splitter: arm 0 takes t = sqrt(T); the remaining Z-1 arms share
/// the reflected weight evenly with the i sqrt(...) phase of a scatterer, so
/// Z = 2 reduces to branch_amps = (t, r).
inline TreeParams make_tree_params(int outputs, double transparency, double beta) {
    if (outputs < 2)
        throw std::invalid_argument("tree splitter needs at least 2 outputs, got " +
                                    std::to_string(outputs));
    const ScattererParams sc = make_scatterer(transparency);
    TreeParams p;
    p.Z = outputs;
    p.overlap = make_overlap(beta);
    p.branch_amps.reserve(outputs);
    p.branch_amps.push_back(sc.t);
    const double share = std::sqrt((1.0 - transparency) / (outputs - 1));
    for (int k = 1; k < outputs; ++k) p.branch_amps.emplace_back(0.0, share);
    return p;
}

/// The branch amplitudes must form one column of a unitary.
inline void validate_tree_params(const TreeParams& p) {
    if (p.Z < 2 || p.branch_amps.size() != static_cast<std::size_t>(p.Z))
        throw std::invalid_argument("tree splitter needs Z >= 2 branch amplitudes");
    double norm = 0.0;
    for (const auto& a : p.branch_amps) norm += std::norm(a);
    if (std::abs(norm - 1.0) > 1e-12)
        throw std::invalid_argument("branch amplitudes are not a unit column, |.|^2 sums to " +
                                    std::to_string(norm));
    if (!(p.overlap.beta >= 0.0 && p.overlap.beta <= 1.0))
        throw InvalidBeta("overlap beta must lie in [0, 1]");
}

inline Complex path_amplitude(const TreeParams& p, const PathIndex& path) {
    Complex a(1.0, 0.0);
    for (int d : path.digits) {
        if (d < 0 || d >= p.Z)
            throw InvalidDigit("path digit " + std::to_string(d) + " outside [0, " +
                               std::to_string(p.Z) + ")");
        a *= p.branch_amps[static_cast<std::size_t>(d)];
    }
    return a;
}

/// Length of the longest common prefix; equals the path length iff a = b.
inline int divergence_depth(const PathIndex& a, const PathIndex& b) {
    if (a.digits.size() != b.digits.size())
        throw LengthMismatch("divergence_depth: paths of length " +
                             std::to_string(a.digits.size()) + " and " +
                             std::to_string(b.digits.size()));
    int d = 0;
    while (d < a.length() && a.digits[d] == b.digits[d]) ++d;
    return d;
}

/// Record overlap of two equal-length paths: beta^(tau - d). Real because
/// the alpha phases of the two records cancel pairwise.
inline double overlap_kernel(const PathIndex& a, const PathIndex& b,
                             const ReservoirOverlap& overlap) {
    const int d = divergence_depth(a, b);
    return std::pow(overlap.beta, a.length() - d);
}

inline std::vector<PathIndex> all_paths(int outputs, int tau) {
    std::vector<PathIndex> out;
    PathIndex current;
    current.digits.assign(static_cast<std::size_t>(tau), 0);
    while (true) {
        out.push_back(current);
        int pos = tau - 1;
        while (pos >= 0 && current.digits[pos] == outputs - 1) current.digits[pos--] = 0;
        if (pos < 0) break;
        ++current.digits[pos];
    }
    return out;
}

namespace detail {

inline long long checked_pow(long long base, int exp, long long limit) {
    long long v = 1;
    for (int k = 0; k < exp; ++k) {
        if (v > limit / base) return limit + 1;
        v *= base;
    }
    return v;
}

}  // namespace detail

/// Electron density matrix over the Z^tau path labels, materialized densely.
inline DensityMatrix tree_density_matrix(const TreeParams& p, int tau,
                                         long long cap = dimension_cap()) {
    if (tau < 0) throw std::invalid_argument("tree_density_matrix: tau must be >= 0");
    validate_tree_params(p);
    const long long dim = detail::checked_pow(p.Z, tau, cap);
    if (dim > cap)
        throw DimensionCap("tree at depth " + std::to_string(tau) + " needs more than " +
                           std::to_string(cap) + " basis states");
    const auto paths = all_paths(p.Z, tau);
    const auto n = static_cast<Eigen::Index>(paths.size());
    std::vector<Complex> amp(paths.size());
    for (std::size_t k = 0; k < paths.size(); ++k) amp[k] = path_amplitude(p, paths[k]);
    DensityMatrix rho;
    rho.entries.resize(n, n);
    for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
            rho.entries(a, b) =
                amp[a] * std::conj(amp[b]) *
                overlap_kernel(paths[static_cast<std::size_t>(a)],
                               paths[static_cast<std::size_t>(b)], p.overlap);
    rho.basis_labels.reserve(paths.size());
    for (const auto& path : paths) rho.basis_labels.push_back(path.label());
    return rho;
}

namespace detail {

/// Spectrum solver that never touches the Z^tau space.
///
/// It applies when the Z-1 non-transmitted arms carry equal magnitudes, which
/// makes them exchangeable at every node. The spectrum of rho only depends on
/// the magnitudes |A_a| (a diagonal unitary absorbs the phases), so work with
/// the real matrix H[a][b] = |A_a||A_b| beta^(tau-d). Writing m0 = |a_0|^2 and
/// s = |a_k|^2 for the tail arms, H at depth k splits against the first digit
/// into Z blocks coupled only through the rank-one top-level record term:
///
///   H_k = sum_j m_j E_jj (x) H_{k-1} + beta^k (sqrt(m) sqrt(m)^T - diag(m)) (x) u u^T,
///
/// with u the unit vector of leaf magnitudes of H_{k-1}. Vectors that are
/// antisymmetric across the exchangeable arms are annihilated by the record
/// term, so each of the Z-2 zero-sum directions contributes an exact
/// invariant block s * (H_{k-1} - beta^k u u^T); u itself is symmetric, so the
/// same reduction applies recursively inside it. What remains is the fully
/// arm-symmetric sector of dimension 2^k, reached by collapsing the tail arms
/// onto their normalized sum: with v = (sqrt(m0), sqrt(1-m0)) and
/// Dt = diag(m0, s),
///
///   TV(k, c) = Dt (x) TV(k-1, 0) + [(beta^k + c) v v^T - beta^k Dt] (x) w w^T,
///
/// where TV(k, c) represents H_k + c u u^T in the symmetric basis, w = v^(x)(k-1)
/// represents u, and TV(0, c) = [1 + c]. The full spectrum is the symmetric
/// sector's eigenvalues plus scaled copies of the deflated blocks; every block
/// is H restricted to an invariant subspace, so positivity is inherited. The
/// bookkeeping below tracks the scalar prefactors m0^a s^b of each block type
/// with exact integer multiplicities. Cross-checked against the dense matrix
/// in the test suite.
class ExchangeableTreeSpectrum {
  public:
    ExchangeableTreeSpectrum(const TreeParams& p, int max_depth, long long cap)
        : Z_(p.Z), beta_(p.overlap.beta), max_depth_(max_depth) {
        if (max_depth > 62 || (1LL << max_depth) > cap)
            throw DimensionCap("symmetric sector at depth " + std::to_string(max_depth) +
                               " needs more than " + std::to_string(cap) + " basis states");
        if (max_depth * std::log2(std::max(2, Z_)) > 62.0)
            throw DimensionCap("path multiplicities overflow at depth " +
                               std::to_string(max_depth));
        m0_ = std::norm(p.branch_amps[0]);
        double tail = 0.0;
        for (int k = 1; k < Z_; ++k) tail += std::norm(p.branch_amps[static_cast<std::size_t>(k)]);
        s_ = std::norm(p.branch_amps[1]);
        v_ = Eigen::Vector2d(std::sqrt(m0_), std::sqrt(tail));
        dt_ = Eigen::Vector2d(m0_, s_);
        build_chain();
    }

    /// True when the reduction applies: all tail arms share one magnitude.
    static bool eligible(const TreeParams& p) {
        for (int k = 2; k < p.Z; ++k)
            if (std::abs(std::abs(p.branch_amps[static_cast<std::size_t>(k)]) -
                         std::abs(p.branch_amps[1])) > 1e-14)
                return false;
        return true;
    }

    /// Spectrum of the depth-tau density matrix as (eigenvalue, multiplicity)
    /// pairs; multiplicities sum to Z^tau.
    std::vector<std::pair<double, std::uint64_t>> weighted_spectrum(int tau) const {
        std::vector<std::pair<double, std::uint64_t>> out;
        for (double lambda : chain_eigs_[static_cast<std::size_t>(tau)])
            out.emplace_back(lambda, 1);
        for (const auto& [block, scalars] : block_weights(tau)) {
            const auto& eigs = block_eigs_[static_cast<std::size_t>(block)];
            for (const auto& [key, count] : scalars) {
                const double scale =
                    std::pow(m0_, key.first) * std::pow(s_, key.second);
                for (double lambda : eigs) out.emplace_back(scale * lambda, count);
            }
        }
        return out;
    }

    double entropy(int tau) const {
        double total = 0.0;
        for (const auto& [lambda, count] : weighted_spectrum(tau)) {
            if (lambda < -kPsdTol)
                throw NotPositiveSemidefinite("tree spectrum eigenvalue " +
                                              std::to_string(lambda));
            if (lambda <= 0.0) continue;
            total -= static_cast<double>(count) * lambda * std::log(lambda);
        }
        return total;
    }

  private:
    using ScalarKey = std::pair<int, int>;  // exponents of m0 and s
    using ScalarWeights = std::map<ScalarKey, std::uint64_t>;

    void build_chain() {
        chain_.resize(static_cast<std::size_t>(max_depth_) + 1);
        w_.resize(static_cast<std::size_t>(max_depth_) + 1);
        chain_eigs_.resize(static_cast<std::size_t>(max_depth_) + 1);
        block_eigs_.resize(static_cast<std::size_t>(max_depth_) + 1);
        chain_[0] = Eigen::MatrixXd::Constant(1, 1, 1.0);
        w_[0] = Eigen::VectorXd::Constant(1, 1.0);
        chain_eigs_[0] = {1.0};
        for (int k = 1; k <= max_depth_; ++k) {
            const auto ks = static_cast<std::size_t>(k);
            w_[ks] = kron_vec(v_, w_[ks - 1]);
            chain_[ks] = symmetric_sector(k, 0.0);
            chain_eigs_[ks] = eig(chain_[ks]);
        }
        // deflated block of type j is H_{j-1} - beta^j u u^T in the same basis
        for (int j = 1; j <= max_depth_; ++j)
            block_eigs_[static_cast<std::size_t>(j)] =
                eig(symmetric_sector(j - 1, -std::pow(beta_, j)));
    }

    Eigen::MatrixXd symmetric_sector(int k, double tail_coeff) const {
        if (k == 0) return Eigen::MatrixXd::Constant(1, 1, 1.0 + tail_coeff);
        const auto& inner = chain_[static_cast<std::size_t>(k) - 1];
        const auto& w = w_[static_cast<std::size_t>(k) - 1];
        const double bk = std::pow(beta_, k);
        Eigen::Matrix2d head = (bk + tail_coeff) * (v_ * v_.transpose());
        head(0, 0) -= bk * dt_(0);
        head(1, 1) -= bk * dt_(1);
        const Eigen::Index n = inner.rows();
        Eigen::MatrixXd out(2 * n, 2 * n);
        const Eigen::MatrixXd record = w * w.transpose();
        for (int bi = 0; bi < 2; ++bi)
            for (int bj = 0; bj < 2; ++bj) {
                out.block(bi * n, bj * n, n, n) = head(bi, bj) * record;
                if (bi == bj) out.block(bi * n, bj * n, n, n).noalias() += dt_(bi) * inner;
            }
        return out;
    }

    /// Scalar prefactors of every deflated block present at depth tau.
    /// Each Op(k, .) object spawns, for j = 1..k, (Z-2) copies of the type-j
    /// block per word over the letters {m0, s} of length k-j, times one s
    /// from the zero-sum sector; blocks then spawn recursively.
    std::map<int, ScalarWeights> block_weights(int tau) const {
        std::map<int, ScalarWeights> weights;
        if (Z_ <= 2 || tau < 1) return weights;
        const auto mult = static_cast<std::uint64_t>(Z_ - 2);
        auto spawn = [&](int k, ScalarKey key, std::uint64_t count) {
            for (int j = 1; j <= k; ++j) {
                const int len = k - j;
                std::uint64_t binom = 1;
                for (int a = 0; a <= len; ++a) {
                    weights[j][{key.first + a, key.second + (len - a) + 1}] +=
                        count * mult * binom;
                    binom = binom * static_cast<std::uint64_t>(len - a) /
                            static_cast<std::uint64_t>(a + 1);
                }
            }
        };
        spawn(tau, {0, 0}, 1);
        for (int j = tau; j >= 2; --j)
            for (const auto& [key, count] : ScalarWeights(weights[j])) spawn(j - 1, key, count);
        return weights;
    }

    static std::vector<double> eig(const Eigen::MatrixXd& m) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
        if (solver.info() != Eigen::Success)
            throw ConvergenceFailure("tree spectrum: eigensolver did not converge");
        return {solver.eigenvalues().data(),
                solver.eigenvalues().data() + solver.eigenvalues().size()};
    }

    static Eigen::VectorXd kron_vec(const Eigen::Vector2d& a, const Eigen::VectorXd& b) {
        Eigen::VectorXd out(2 * b.size());
        out.head(b.size()) = a(0) * b;
        out.tail(b.size()) = a(1) * b;
        return out;
    }

    int Z_;
    double beta_;
    int max_depth_;
    double m0_ = 0.0;
    double s_ = 0.0;
    Eigen::Vector2d v_;
    Eigen::Vector2d dt_;
    std::vector<Eigen::MatrixXd> chain_;            // TV(k, 0)
    std::vector<Eigen::VectorXd> w_;                // v^(x)k
    std::vector<std::vector<double>> chain_eigs_;   // eig TV(k, 0)
    std::vector<std::vector<double>> block_eigs_;   // eig TV(j-1, -beta^j)
};

}  // namespace detail

/// Full spectrum of the depth-tau density matrix, descending. Dispatches to
/// the exchangeable-arm solver when it applies and the dense matrix
/// otherwise; either way the result has Z^tau entries, so this surface is
/// meant for moderate depths (validation, small runs).
inline Spectrum tree_spectrum(const TreeParams& p, int tau, long long cap = dimension_cap()) {
    validate_tree_params(p);
    if (detail::ExchangeableTreeSpectrum::eligible(p)) {
        const long long dim = detail::checked_pow(p.Z, tau, 1 << 20);
        if (dim > (1 << 20))
            throw DimensionCap("expanded spectrum at depth " + std::to_string(tau) +
                               " is too large to enumerate");
        detail::ExchangeableTreeSpectrum engine(p, tau, cap);
        Spectrum out;
        out.eigenvalues.reserve(static_cast<std::size_t>(dim));
        for (const auto& [lambda, count] : engine.weighted_spectrum(tau))
            out.eigenvalues.insert(out.eigenvalues.end(), count, lambda);
        std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), std::greater<double>());
        return out;
    }
    return hermitian_eigenvalues(tree_density_matrix(p, tau, cap));
}

/// Entropy series S(0..tau_max). With exchangeable tail arms the symmetric-
/// sector solver handles depths whose full path space (Z^tau) is far beyond
/// the cap; the cap then bounds the 2^tau symmetric sector instead.
inline EntropySeries run_tree(const TreeParams& p, int tau_max, long long cap = dimension_cap()) {
    if (tau_max < 0) throw std::invalid_argument("run_tree: tau_max must be >= 0");
    validate_tree_params(p);
    EntropySeries series;
    series.meta = RunMeta{"tree", std::norm(p.branch_amps[0]), p.overlap.beta, p.Z, "", tau_max};
    series.values.reserve(static_cast<std::size_t>(tau_max) + 1);
    if (detail::ExchangeableTreeSpectrum::eligible(p)) {
        detail::ExchangeableTreeSpectrum engine(p, tau_max, cap);
        for (int tau = 0; tau <= tau_max; ++tau) series.values.push_back(engine.entropy(tau));
        return series;
    }
    for (int tau = 0; tau <= tau_max; ++tau)
        series.values.push_back(von_neumann_entropy(tree_density_matrix(p, tau, cap)));
    return series;
}

}  // namespace spinwalk

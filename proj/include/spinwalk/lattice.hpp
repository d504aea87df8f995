#pragma once

// Tree-with-interference model in its one-dimensional equivalent form: the
// coherent line-walk step, but with both spin sets (one met before the
// scatterer, one after) replaced by fresh spins in their initial state after
// every step. Each set damps coherences between different (cell, direction)
// labels by beta once per step, so one step acts as
//
//     rho' = D(U D(rho) U^dag),
//
// where U is the unitary line-walk step and D multiplies every off-diagonal
// entry by beta. Comparing two single-step histories: each rotates one spin
// in the pre-scatterer set at its source label and one in the post-scatterer
// set at its destination label, and every set where those labels differ
// contributes <i|f><f|i> = beta to the overlap, which is exactly the D-U-D
// factorization. The brute_force_lattice oracle below rebuilds rho from
// explicit trajectory pairs with the same mark convention and no
// factorization.

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "spinwalk/line_walk.hpp"
#include "spinwalk/numerics.hpp"
#include "spinwalk/reservoir.hpp"
#include "spinwalk/scatterer.hpp"
#include "spinwalk/series.hpp"

namespace spinwalk {

struct PathCap : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct CellDir {
    int cell;
    Direction dir;

    auto operator<=>(const CellDir&) const = default;

    std::string label() const {
        return "(" + std::to_string(cell) + "," + direction_tag(dir) + ")";
    }
};

/// Sites a walker starting right-moving from cell 0 can reach after tau
/// steps: cells -(tau-1)..tau, direction fixed by the parity rule that
/// right-movers need cell+tau even. 2*tau labels for tau >= 1.
inline std::vector<CellDir> reachable_sites(int tau) {
    std::vector<CellDir> sites;
    if (tau == 0) return {{0, Direction::Right}};
    sites.reserve(static_cast<std::size_t>(2 * tau));
    for (int cell = -(tau - 1); cell <= tau; ++cell)
        sites.push_back({cell, (cell + tau) % 2 == 0 ? Direction::Right : Direction::Left});
    return sites;
}

struct LatticeState {
    int tau = 0;
    DensityMatrix rho;
    std::vector<CellDir> sites;  // basis of rho, in label order
    ScattererParams params;
    ReservoirOverlap overlap;
};

inline LatticeState init_lattice(double transparency, double beta) {
    LatticeState s;
    s.params = make_scatterer(transparency);
    s.overlap = make_overlap(beta);
    s.sites = reachable_sites(0);
    s.rho.entries = Eigen::MatrixXcd::Constant(1, 1, Complex(1.0, 0.0));
    s.rho.basis_labels = {s.sites[0].label()};
    return s;
}

namespace detail {

inline void damp_coherences(Eigen::MatrixXcd& m, double beta) {
    const Eigen::VectorXcd diag = m.diagonal();
    m *= beta;
    m.diagonal() = diag;
}

}  // namespace detail

inline LatticeState step_lattice(const LatticeState& s) {
    LatticeState next;
    next.tau = s.tau + 1;
    next.params = s.params;
    next.overlap = s.overlap;
    next.sites = reachable_sites(next.tau);

    Eigen::MatrixXcd mid = s.rho.entries;
    detail::damp_coherences(mid, s.overlap.beta);

    std::map<CellDir, Eigen::Index> index;
    for (std::size_t k = 0; k < next.sites.size(); ++k)
        index.emplace(next.sites[k], static_cast<Eigen::Index>(k));
    auto targets = [&](const CellDir& from) {
        // U|i,R> = t|i+1,R> + r|i,L>;  U|i,L> = t|i-1,L> + r|i,R>
        const CellDir transmitted = from.dir == Direction::Right
                                        ? CellDir{from.cell + 1, Direction::Right}
                                        : CellDir{from.cell - 1, Direction::Left};
        const CellDir reflected = {from.cell, from.dir == Direction::Right ? Direction::Left
                                                                           : Direction::Right};
        return std::pair{index.at(transmitted), index.at(reflected)};
    };

    const auto n = static_cast<Eigen::Index>(next.sites.size());
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
    const Complex t = s.params.t;
    const Complex r = s.params.r;
    for (std::size_t a = 0; a < s.sites.size(); ++a) {
        const auto [ta, ra] = targets(s.sites[a]);
        for (std::size_t b = 0; b < s.sites.size(); ++b) {
            const auto [tb, rb] = targets(s.sites[b]);
            const Complex value = mid(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            out(ta, tb) += t * value * std::conj(t);
            out(ta, rb) += t * value * std::conj(r);
            out(ra, tb) += r * value * std::conj(t);
            out(ra, rb) += r * value * std::conj(r);
        }
    }
    detail::damp_coherences(out, s.overlap.beta);

    next.rho.entries = std::move(out);
    next.rho.basis_labels.reserve(next.sites.size());
    for (const auto& site : next.sites) next.rho.basis_labels.push_back(site.label());
    return next;
}

inline EntropySeries run_lattice(double transparency, double beta, int steps) {
    if (steps < 0) throw std::invalid_argument("run_lattice: steps must be >= 0");
    EntropySeries series;
    series.meta = RunMeta{"lattice", transparency, beta, 0, "", steps};
    series.values.reserve(static_cast<std::size_t>(steps) + 1);
    LatticeState state = init_lattice(transparency, beta);
    for (int tau = 0;; ++tau) {
        series.values.push_back(von_neumann_entropy(state.rho));
        if (tau == steps) break;
        state = step_lattice(state);
    }
    return series;
}

/// Independent reconstruction of the depth-tau density matrix from all 2^tau
/// branch histories. Every trajectory carries its amplitude, endpoint, and
/// the per-step (source, destination) marks; a pair of trajectories is
/// weighted by beta per step and per spin set whose marks differ. Must equal
/// iterated step_lattice; keeps the mark convention in one place so the
/// factorized propagator cannot drift from it unnoticed.
inline DensityMatrix brute_force_lattice(double transparency, double beta, int tau) {
    if (tau < 0) throw std::invalid_argument("brute_force_lattice: tau must be >= 0");
    if (tau > 12)
        throw PathCap("brute_force_lattice enumerates 2^tau trajectories; tau = " +
                      std::to_string(tau) + " exceeds 12");
    const ScattererParams params = make_scatterer(transparency);
    make_overlap(beta);

    struct Trajectory {
        Complex amp;
        CellDir end;
        std::vector<std::pair<CellDir, CellDir>> marks;
    };
    std::vector<Trajectory> trajectories{{Complex(1.0, 0.0), {0, Direction::Right}, {}}};
    trajectories.reserve(std::size_t{1} << tau);
    for (int step = 0; step < tau; ++step) {
        std::vector<Trajectory> grown;
        grown.reserve(trajectories.size() * 2);
        for (const auto& tr : trajectories) {
            const CellDir transmitted = tr.end.dir == Direction::Right
                                            ? CellDir{tr.end.cell + 1, Direction::Right}
                                            : CellDir{tr.end.cell - 1, Direction::Left};
            const CellDir reflected = {tr.end.cell, tr.end.dir == Direction::Right
                                                        ? Direction::Left
                                                        : Direction::Right};
            Trajectory a = tr;
            a.amp *= params.t;
            a.marks.emplace_back(tr.end, transmitted);
            a.end = transmitted;
            grown.push_back(std::move(a));
            Trajectory b = tr;
            b.amp *= params.r;
            b.marks.emplace_back(tr.end, reflected);
            b.end = reflected;
            grown.push_back(std::move(b));
        }
        trajectories = std::move(grown);
    }

    const auto sites = reachable_sites(tau);
    std::map<CellDir, Eigen::Index> index;
    for (std::size_t k = 0; k < sites.size(); ++k)
        index.emplace(sites[k], static_cast<Eigen::Index>(k));
    DensityMatrix rho;
    rho.entries = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(sites.size()),
                                         static_cast<Eigen::Index>(sites.size()));
    for (const auto& ta : trajectories) {
        for (const auto& tb : trajectories) {
            int differing = 0;
            for (int step = 0; step < tau; ++step) {
                differing += ta.marks[static_cast<std::size_t>(step)].first !=
                             tb.marks[static_cast<std::size_t>(step)].first;
                differing += ta.marks[static_cast<std::size_t>(step)].second !=
                             tb.marks[static_cast<std::size_t>(step)].second;
            }
            rho.entries(index.at(ta.end), index.at(tb.end)) +=
                ta.amp * std::conj(tb.amp) * std::pow(beta, differing);
        }
    }
    rho.basis_labels.reserve(sites.size());
    for (const auto& site : sites) rho.basis_labels.push_back(site.label());
    return rho;
}

}  // namespace spinwalk

#pragma once

// One-dimensional coherent walk over equally spaced scatterers, with
// pi-rotating spins on all boundaries, on a finite symmetric window of
// boundaries, or on none. Cells are integers; boundary k separates cells
// k and k+1; the boundary first hit by the right-moving particle is
// boundary 0 (between cells 0 and 1).

#include <cassert>
#include <cmath>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "spinwalk/numerics.hpp"
#include "spinwalk/scatterer.hpp"
#include "spinwalk/series.hpp"

namespace spinwalk {

struct InvalidWindow : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

inline constexpr double kAmplitudePruneTol = 1e-15;

enum class Direction : int { Right = 0, Left = 1 };

inline std::string direction_tag(Direction d) { return d == Direction::Right ? "R" : "L"; }

/// Which boundaries carry a monitored spin.
///
/// Finite mode monitors an odd number n of boundaries symmetric around the
/// first-hit one: boundaries -(n-1)/2 .. (n-1)/2. Mask bit j records the
/// crossing parity of boundary lo()+j.
struct SpinWindow {
    enum class Mode { None, All, Finite };
    Mode mode = Mode::None;
    int count = 0;  // Finite mode only; odd and positive

    static SpinWindow none() { return SpinWindow{Mode::None, 0}; }
    static SpinWindow all() { return SpinWindow{Mode::All, 0}; }
    static SpinWindow finite(int n) {
        if (n <= 0 || n % 2 == 0)
            throw InvalidWindow("finite spin window needs an odd positive count, got " +
                                std::to_string(n));
        if (n > 63) throw InvalidWindow("finite spin window limited to 63 boundaries");
        return SpinWindow{Mode::Finite, n};
    }

    int lo() const { return -(count - 1) / 2; }
    int hi() const { return (count - 1) / 2; }
    bool monitors(int boundary) const {
        return mode == Mode::Finite && boundary >= lo() && boundary <= hi();
    }
    std::uint64_t mask_bit(int boundary) const {
        return std::uint64_t{1} << (boundary - lo());
    }

    std::string label() const {
        switch (mode) {
            case Mode::None: return "none";
            case Mode::All: return "all";
            default: return std::to_string(count);
        }
    }
};

struct AmpKey {
    int cell;
    Direction dir;
    std::uint64_t mask;  // crossing parity of monitored boundaries

    auto operator<=>(const AmpKey&) const = default;
};

/// Joint electron+record amplitudes at discrete step tau.
///
/// In All mode the mask field stays 0: with every boundary monitored, the
/// crossing parity of boundary k is "the current cell lies on the opposite
/// side of k from the start", so the full spin record is a function of the
/// cell and never needs to be tracked per amplitude. Amplitudes keyed by
/// (cell, dir) then evolve exactly like the bare coherent walk, and the
/// record only reappears when reducing to a density matrix, where it
/// decoheres different cells from each other. The Finite-mode propagation
/// tracks masks explicitly and cross-checks this shortcut for small windows.
struct LineWalkState {
    int tau = 0;
    std::map<AmpKey, Complex> amps;
    ScattererParams params;
    SpinWindow window;
};

inline LineWalkState init_line(double transparency, SpinWindow window) {
    LineWalkState s;
    s.tau = 0;
    s.params = make_scatterer(transparency);
    s.window = window;
    s.amps[{0, Direction::Right, 0}] = Complex(1.0, 0.0);
    return s;
}

inline double total_norm(const LineWalkState& s) {
    double n = 0.0;
    for (const auto& [key, amp] : s.amps) n += std::norm(amp);
    return n;
}

/// One step of the walk. A right-mover in cell i meets boundary i and either
/// transmits to (i+1, Right) with amplitude t, flipping the boundary's spin
/// if monitored, or reflects to (i, Left) with amplitude r, touching nothing.
/// A left-mover in cell i meets boundary i-1 symmetrically.
inline LineWalkState step_line(const LineWalkState& s) {
    LineWalkState next;
    next.tau = s.tau + 1;
    next.params = s.params;
    next.window = s.window;
    const Complex t = s.params.t;
    const Complex r = s.params.r;
    auto crossed = [&s](std::uint64_t mask, int boundary) {
        return s.window.monitors(boundary) ? (mask ^ s.window.mask_bit(boundary)) : mask;
    };
    std::map<AmpKey, Complex> out;
    for (const auto& [key, amp] : s.amps) {
        if (key.dir == Direction::Right) {
            out[{key.cell + 1, Direction::Right, crossed(key.mask, key.cell)}] += t * amp;
            out[{key.cell, Direction::Left, key.mask}] += r * amp;
        } else {
            out[{key.cell - 1, Direction::Left, crossed(key.mask, key.cell - 1)}] += t * amp;
            out[{key.cell, Direction::Right, key.mask}] += r * amp;
        }
    }
    for (const auto& [key, amp] : out)
        if (std::abs(amp) >= kAmplitudePruneTol) next.amps.emplace(key, amp);
    return next;
}

/// P_i = sum over direction and record of |amplitude|^2.
inline ProbabilityVector<int> position_probabilities(const LineWalkState& s) {
    ProbabilityVector<int> p;
    for (const auto& [key, amp] : s.amps) p.entries[key.cell] += std::norm(amp);
    return p;
}

namespace detail {

/// Spin-record class of an All-mode amplitude: the record is the set of
/// boundaries between the cell and the origin, so the cell itself indexes it.
inline std::uint64_t all_mode_record(int cell) {
    return static_cast<std::uint64_t>(static_cast<std::int64_t>(cell));
}

}  // namespace detail

/// Reduced density matrix of the electron over the occupied (cell, dir)
/// labels, rho[a][b] = sum over records of amp(a, rec) * conj(amp(b, rec)).
/// Amplitudes whose records differ land in orthogonal reservoir states
/// (pi rotations), so they contribute nothing off-diagonal.
inline DensityMatrix reduced_density_matrix_line(const LineWalkState& s) {
    std::map<std::pair<int, Direction>, Eigen::Index> index;
    for (const auto& [key, amp] : s.amps) index.emplace(std::make_pair(key.cell, key.dir), 0);
    Eigen::Index n = 0;
    for (auto& [label, idx] : index) idx = n++;

    // group amplitudes by record class, then sum the outer products
    std::map<std::uint64_t, Eigen::VectorXcd> classes;
    for (const auto& [key, amp] : s.amps) {
        const std::uint64_t rec = s.window.mode == SpinWindow::Mode::All
                                      ? detail::all_mode_record(key.cell)
                                      : key.mask;
        auto [it, inserted] = classes.try_emplace(rec, Eigen::VectorXcd::Zero(n));
        it->second(index.at({key.cell, key.dir})) += amp;
    }
    DensityMatrix rho;
    rho.entries = Eigen::MatrixXcd::Zero(n, n);
    for (const auto& [rec, v] : classes) rho.entries.noalias() += v * v.adjoint();
    rho.basis_labels.resize(n);
    for (const auto& [label, idx] : index)
        rho.basis_labels[idx] =
            "(" + std::to_string(label.first) + "," + direction_tag(label.second) + ")";
    return rho;
}

/// Probability weight left of, right of, and inside the monitored window.
/// Left means cells <= lo(), right means cells >= hi()+1; for a single spin
/// the interior is empty and left + right = 1 at every step.
struct SideWeights {
    double left = 0.0;
    double right = 0.0;
    double inside = 0.0;
};

inline SideWeights side_weights(const LineWalkState& s) {
    SideWeights w;
    const int lo = s.window.mode == SpinWindow::Mode::Finite ? s.window.lo() : 0;
    const int hi = s.window.mode == SpinWindow::Mode::Finite ? s.window.hi() : 0;
    for (const auto& [key, amp] : s.amps) {
        const double p = std::norm(amp);
        if (key.cell <= lo)
            w.left += p;
        else if (key.cell >= hi + 1)
            w.right += p;
        else
            w.inside += p;
    }
    return w;
}

/// Entropy series S(0..steps). All mode reduces to the Shannon entropy of
/// the position distribution (the reduced matrix is diagonal there); None
/// and Finite modes take the von Neumann entropy of the reduced matrix.
inline EntropySeries run_line(double transparency, SpinWindow window, int steps) {
    if (steps < 0) throw std::invalid_argument("run_line: steps must be >= 0");
    EntropySeries series;
    series.meta = RunMeta{"line", transparency, -1.0, 0, window.label(), steps};
    series.values.reserve(static_cast<std::size_t>(steps) + 1);
    LineWalkState state = init_line(transparency, window);
    for (int tau = 0;; ++tau) {
        if (window.mode == SpinWindow::Mode::All)
            series.values.push_back(shannon_entropy(position_probabilities(state)));
        else
            series.values.push_back(von_neumann_entropy(reduced_density_matrix_line(state)));
        if (tau == steps) break;
        state = step_line(state);
    }
    return series;
}

}  // namespace spinwalk

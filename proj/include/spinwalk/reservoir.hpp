#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace spinwalk {

struct InvalidBeta : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Phase-breaking parameter of a spin reservoir. A spin rotated by a passing
/// particle overlaps its unrotated state by a constant alpha, and every
/// observable here depends on alpha only through beta = alpha * conj(alpha),
/// so the overlap is stored as the single real beta in [0, 1]. beta = 1 means
/// the records are useless (no decoherence), beta = 0 means orthogonal
/// records (full which-path information).
struct ReservoirOverlap {
    double beta;
    double alpha_magnitude;  // sqrt(beta), kept for documentation
};

inline ReservoirOverlap make_overlap(double beta) {
    if (!(beta >= 0.0 && beta <= 1.0))
        throw InvalidBeta("overlap beta must lie in [0, 1], got " + std::to_string(beta));
    return ReservoirOverlap{beta, std::sqrt(beta)};
}

}  // namespace spinwalk

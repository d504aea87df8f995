#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include "spinwalk/numerics.hpp"

namespace spinwalk {

struct InvalidTransparency : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Transmission/reflection amplitudes of one scatterer, derived from the
/// transparency T: t = sqrt(T), r = i sqrt(1-T). The 2x2 step matrix
/// [[t, r], [r, t]] is unitary, and |t|^2 + |r|^2 = 1 exactly.
struct ScattererParams {
    double transparency;
    Complex t;
    Complex r;
};

inline ScattererParams make_scatterer(double transparency) {
    if (!(transparency >= 0.0 && transparency <= 1.0))
        throw InvalidTransparency("transparency must lie in [0, 1], got " +
                                  std::to_string(transparency));
    return ScattererParams{transparency, Complex(std::sqrt(transparency), 0.0),
                           Complex(0.0, std::sqrt(1.0 - transparency))};
}

}  // namespace spinwalk

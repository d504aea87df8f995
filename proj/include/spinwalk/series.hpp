#pragma once

#include <string>
#include <vector>

namespace spinwalk {

/// Identifies the run that produced an entropy series; used for CSV/SVG
/// legends and for reproducing a curve from its output file.
struct RunMeta {
    std::string model;  // "line", "tree" or "lattice"
    double transparency = 0.0;
    double beta = -1.0;        // < 0 when the model has no overlap parameter
    int outputs = 0;           // splitter outputs (tree only)
    std::string window;        // spin window spec (line only)
    int steps = 0;

    std::string label() const {
        std::string out = model;
        char buf[48];
        std::snprintf(buf, sizeof buf, " T=%g", transparency);
        out += buf;
        if (beta >= 0.0) {
            std::snprintf(buf, sizeof buf, " beta=%g", beta);
            out += buf;
        }
        if (outputs > 0) {
            std::snprintf(buf, sizeof buf, " Z=%d", outputs);
            out += buf;
        }
        if (!window.empty()) out += " spins=" + window;
        return out;
    }
};

/// Entropy values S(tau) in nats, indexed by step tau from 0.
struct EntropySeries {
    std::vector<double> values;
    RunMeta meta;

    int steps() const { return static_cast<int>(values.size()) - 1; }
};

}  // namespace spinwalk

#pragma once

// Scalar types, density matrices, Hermitian eigenvalues and the entropy
// functionals shared by every model in this library.

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace spinwalk {

using Complex = std::complex<double>;

// Tolerances used across the library.
inline constexpr double kHermitianTol = 1e-10;  // entrywise |m - m^dag|
inline constexpr double kTraceTol = 1e-9;       // |tr(rho) - 1|
inline constexpr double kPsdTol = 1e-9;         // eigenvalues >= -kPsdTol
inline constexpr double kNormTol = 1e-12;       // state norm drift per step
inline constexpr double kDistributionTol = 1e-9;

struct NonHermitianInput : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};
struct ConvergenceFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NotPositiveSemidefinite : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InvalidDistribution : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Hermitian, unit-trace, positive-semidefinite operator over a finite
/// labeled basis. The invariants are not enforced by construction; use
/// validate_density_matrix to check them at the documented tolerances.
struct DensityMatrix {
    Eigen::MatrixXcd entries;
    std::vector<std::string> basis_labels;

    Eigen::Index dim() const { return entries.rows(); }
};

/// Real eigenvalues in descending order.
struct Spectrum {
    std::vector<double> eigenvalues;

    double sum() const {
        double s = 0.0;
        for (double v : eigenvalues) s += v;
        return s;
    }
};

/// Normalized distribution over opaque labels.
template <typename Label>
struct ProbabilityVector {
    std::map<Label, double> entries;

    double sum() const {
        double s = 0.0;
        for (const auto& [label, p] : entries) s += p;
        return s;
    }
};

struct InvariantViolation {
    enum class Kind { Hermiticity, Trace, Positivity };
    Kind kind;
    double magnitude;  // how far past the tolerance the check landed
    std::string detail;
};

using ValidationReport = std::vector<InvariantViolation>;

inline double max_hermiticity_defect(const Eigen::MatrixXcd& m) {
    return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

/// All eigenvalues of a Hermitian operator, descending.
///
/// The input must be Hermitian to kHermitianTol; the symmetrized matrix
/// (m + m^dag)/2 is what gets decomposed, so round-off asymmetry below the
/// tolerance cannot leak into the result. Handles dim 2048 in minutes.
inline Spectrum hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols() || m.rows() < 1)
        throw NonHermitianInput("hermitian_eigenvalues: matrix must be square and non-empty");
    const double defect = max_hermiticity_defect(m);
    if (defect > kHermitianTol)
        throw NonHermitianInput("hermitian_eigenvalues: Hermiticity defect " +
                                std::to_string(defect));
    Eigen::MatrixXcd sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(sym, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw ConvergenceFailure("hermitian_eigenvalues: eigensolver did not converge");
    Spectrum out;
    out.eigenvalues.assign(solver.eigenvalues().data(),
                           solver.eigenvalues().data() + solver.eigenvalues().size());
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(), std::greater<double>());
    return out;
}

inline Spectrum hermitian_eigenvalues(const DensityMatrix& m) {
    return hermitian_eigenvalues(m.entries);
}

/// -sum(p ln p) over a spectrum, with 0 ln 0 := 0. Values in
/// [-psd_tol, 0] are round-off and clamp to zero; anything below
/// -psd_tol is a genuine invariant violation.
inline double entropy_from_spectrum(const std::vector<double>& eigenvalues,
                                    double psd_tol = kPsdTol) {
    double s = 0.0;
    for (double lambda : eigenvalues) {
        if (lambda < -psd_tol)
            throw NotPositiveSemidefinite("entropy_from_spectrum: eigenvalue " +
                                          std::to_string(lambda));
        if (lambda <= 0.0) continue;
        s -= lambda * std::log(lambda);
    }
    return s;
}

/// Von Neumann entropy -tr(rho ln rho) in nats.
inline double von_neumann_entropy(const DensityMatrix& m) {
    return entropy_from_spectrum(hermitian_eigenvalues(m).eigenvalues);
}

/// Shannon entropy -sum(P ln P) in nats; equals the von Neumann entropy of
/// the diagonal density matrix with the same entries.
template <typename Label>
double shannon_entropy(const ProbabilityVector<Label>& p) {
    double total = 0.0;
    double s = 0.0;
    for (const auto& [label, prob] : p.entries) {
        if (prob < -1e-12 || prob > 1.0 + 1e-12)
            throw InvalidDistribution("shannon_entropy: entry outside [0, 1]");
        total += prob;
        if (prob > 0.0) s -= prob * std::log(prob);
    }
    if (std::abs(total - 1.0) > kDistributionTol)
        throw InvalidDistribution("shannon_entropy: entries sum to " + std::to_string(total));
    return s;
}

/// Checks the DensityMatrix invariants; an empty report means all hold.
/// Violations are data, not errors.
inline ValidationReport validate_density_matrix(const DensityMatrix& m) {
    ValidationReport report;
    if (m.dim() == 0 || m.entries.rows() != m.entries.cols()) {
        report.push_back({InvariantViolation::Kind::Hermiticity, 0.0, "matrix is empty or non-square"});
        return report;
    }
    const double defect = max_hermiticity_defect(m.entries);
    if (defect > kHermitianTol)
        report.push_back({InvariantViolation::Kind::Hermiticity, defect,
                          "max |m - m^dag| = " + std::to_string(defect)});
    const Complex tr = m.entries.trace();
    const double trace_err = std::abs(tr - Complex(1.0, 0.0));
    if (trace_err > kTraceTol)
        report.push_back({InvariantViolation::Kind::Trace, trace_err,
                          "trace = " + std::to_string(tr.real()) + " + " +
                              std::to_string(tr.imag()) + "i"});
    if (defect <= kHermitianTol) {
        const auto spectrum = hermitian_eigenvalues(m.entries);
        const double lambda_min = spectrum.eigenvalues.back();
        if (lambda_min < -kPsdTol)
            report.push_back({InvariantViolation::Kind::Positivity, -lambda_min,
                              "min eigenvalue = " + std::to_string(lambda_min)});
    }
    return report;
}

}  // namespace spinwalk

#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace conenav {

/// Position / velocity vector in R^n, n >= 2. Dimension is dynamic so the
/// same code paths serve planar and spatial scenes.
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Thrown when a caller violates an operation's documented precondition
/// (non-finite input, wrong dimension, bad configuration, ...).
struct InputError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Thrown when an iterative numerical procedure exhausts its search budget.
/// The message carries diagnostics (query point, budget, primitive).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline bool all_finite(const Vec& v) { return v.allFinite(); }

inline void require_point(const Vec& x, const char* what) {
    if (x.size() < 2) throw InputError(std::string(what) + ": dimension must be >= 2");
    if (!x.allFinite()) throw InputError(std::string(what) + ": non-finite coordinates");
}

}  // namespace conenav

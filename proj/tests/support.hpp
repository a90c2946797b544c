#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "faw/hilbert.hpp"
#include "faw/measures.hpp"

namespace faw::testing {

inline Representation trivial_rep() { return Representation::finite({}, 2); }
inline Representation block_rep(double omega = 1.0) { return Representation::finite({omega}); }
// Nodes -a, 0, a.
inline Representation atomic_rep(double a = 0.7) {
    return Representation::measure(SymmetricMeasure::atomic({{a, 0.3}}, 0.4));
}

inline std::vector<Representation> oracle_reps() { return {trivial_rep(), block_rep(), atomic_rep()}; }

// Smallest eigenvalue of a Hermitian matrix.
inline double min_eigenvalue(const Eigen::MatrixXcd& G) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (G + G.adjoint()));
    return es.eigenvalues().minCoeff();
}

} // namespace faw::testing

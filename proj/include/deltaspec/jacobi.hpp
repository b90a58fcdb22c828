#pragma once

#include <cstddef>
#include <vector>

#include "deltaspec/matrix.hpp"

namespace deltaspec {

/// Spectral decomposition M = V diag(values) Vᵀ with values ascending and the
/// k-th eigenvector stored in column k of `vectors`.
struct EigenBranches {
    std::vector<double> values;
    Matrix vectors;

    std::vector<double> vector(std::size_t k) const;
};

struct JacobiOptions {
    std::size_t max_size = 64;
    int max_sweeps = 100;
    double symmetry_tol = 1e-12;
};

/// Cyclic Jacobi rotations. Throws std::invalid_argument if M is asymmetric
/// beyond `symmetry_tol` (relative) or larger than `max_size`.
EigenBranches symmetric_eigen(const Matrix& m, const JacobiOptions& opts = {});

}  // namespace deltaspec

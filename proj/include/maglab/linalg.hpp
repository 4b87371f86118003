#pragma once

#include <Eigen/Dense>
#include <optional>

#include "maglab/common.hpp"
#include "maglab/grid.hpp"

namespace maglab {

struct EigenSystem {
    Eigen::VectorXd values;    // ascending
    Eigen::MatrixXcd vectors;  // orthonormal columns, one per value
};

/// Full eigendecomposition of a dense Hermitian matrix. Rejects input with
/// max|A - A^*| > 1e-10 max|A|. Matrices whose imaginary part is negligible
/// take the real-symmetric path, which is about 4x faster.
EigenSystem hermitian_eigs(const Eigen::MatrixXcd& a);

/// Eigenpairs with eigenvalue <= bound only (same contract otherwise).
EigenSystem hermitian_eigs_below(const Eigen::MatrixXcd& a, double bound);

/// Basis in which a dense operator's entries are expressed. Position couples
/// to sampled values directly; Momentum couples to the plain unitary DFT of
/// the sampled values (FFT index order).
enum class OperatorBasis { Position, Momentum };

/// Dense Hermitian operator on the grid, tagged with its basis, with a lazily
/// cached eigendecomposition. Instances are not meant to be shared across
/// threads while the cache is cold; sweeps give each task its own operator.
class HermitianOperatorDense {
public:
    HermitianOperatorDense(Eigen::MatrixXcd matrix, OperatorBasis basis, UniformGrid grid,
                           double hbar);

    const Eigen::MatrixXcd& matrix() const { return matrix_; }
    OperatorBasis basis() const { return basis_; }
    const UniformGrid& grid() const { return grid_; }
    double hbar() const { return hbar_; }
    int dim() const { return static_cast<int>(matrix_.rows()); }

    /// Full decomposition, computed on first use.
    const EigenSystem& eigensystem() const;

    /// Decomposition truncated to eigenvalues <= bound. Reuses the cache when
    /// it already covers the request.
    const EigenSystem& eigensystem_below(double bound) const;

private:
    Eigen::MatrixXcd matrix_;
    OperatorBasis basis_;
    UniformGrid grid_;
    double hbar_;
    mutable std::optional<EigenSystem> eigs_;
    mutable bool full_ = false;
    mutable double covered_ = 0.0;
};

}  // namespace maglab

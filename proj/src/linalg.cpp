#include "maglab/linalg.hpp"

#include <lapacke.h>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace maglab {

namespace {

double max_abs(const Eigen::MatrixXcd& a) {
    return a.cwiseAbs().maxCoeff();
}

void check_hermitian(const Eigen::MatrixXcd& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("hermitian_eigs: matrix must be square");
    const double scale = max_abs(a);
    const double defect = (a - a.adjoint()).cwiseAbs().maxCoeff();
    if (defect > 1e-10 * std::max(scale, 1e-300))
        throw std::invalid_argument("hermitian_eigs: matrix is not Hermitian within tolerance");
}

// Gershgorin lower bound, used as the open left end of LAPACK value ranges.
double gershgorin_lower(const Eigen::MatrixXcd& a) {
    double lo = std::numeric_limits<double>::max();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        double off = 0.0;
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            if (j != i) off += std::abs(a(i, j));
        lo = std::min(lo, a(i, i).real() - off);
    }
    return lo - 1.0;
}

bool effectively_real(const Eigen::MatrixXcd& a) {
    return a.imag().cwiseAbs().maxCoeff() <= 1e-12 * std::max(max_abs(a), 1e-300);
}

EigenSystem decompose(const Eigen::MatrixXcd& a, bool full, double bound) {
    check_hermitian(a);
    const int n = static_cast<int>(a.rows());
    EigenSystem sys;

    if (effectively_real(a)) {
        Eigen::MatrixXd w = 0.5 * (a.real() + a.real().transpose());
        if (full) {
            std::vector<double> vals(n);
            const int info =
                LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, w.data(), n, vals.data());
            if (info != 0) throw numeric_error("dsyevd failed");
            sys.values = Eigen::Map<Eigen::VectorXd>(vals.data(), n);
            sys.vectors = w.cast<cdouble>();
        } else {
            const double vl = gershgorin_lower(a);
            std::vector<double> vals(n);
            Eigen::MatrixXd z(n, n);
            std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
            lapack_int m = 0;
            const int info =
                LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', 'V', 'L', n, w.data(), n, vl, bound, 0, 0,
                               0.0, &m, vals.data(), z.data(), n, isuppz.data());
            if (info != 0) throw numeric_error("dsyevr failed");
            sys.values = Eigen::Map<Eigen::VectorXd>(vals.data(), m);
            sys.vectors = z.leftCols(m).cast<cdouble>();
        }
        return sys;
    }

    Eigen::MatrixXcd w = a;
    if (full) {
        std::vector<double> vals(n);
        const int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                                        reinterpret_cast<lapack_complex_double*>(w.data()), n,
                                        vals.data());
        if (info != 0) throw numeric_error("zheevd failed");
        sys.values = Eigen::Map<Eigen::VectorXd>(vals.data(), n);
        sys.vectors = std::move(w);
    } else {
        const double vl = gershgorin_lower(a);
        std::vector<double> vals(n);
        Eigen::MatrixXcd z(n, n);
        std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(n));
        lapack_int m = 0;
        const int info = LAPACKE_zheevr(LAPACK_COL_MAJOR, 'V', 'V', 'L', n,
                                        reinterpret_cast<lapack_complex_double*>(w.data()), n, vl,
                                        bound, 0, 0, 0.0, &m, vals.data(),
                                        reinterpret_cast<lapack_complex_double*>(z.data()), n,
                                        isuppz.data());
        if (info != 0) throw numeric_error("zheevr failed");
        sys.values = Eigen::Map<Eigen::VectorXd>(vals.data(), m);
        sys.vectors = z.leftCols(m);
    }
    return sys;
}

}  // namespace

EigenSystem hermitian_eigs(const Eigen::MatrixXcd& a) {
    return decompose(a, true, 0.0);
}

EigenSystem hermitian_eigs_below(const Eigen::MatrixXcd& a, double bound) {
    return decompose(a, false, bound);
}

HermitianOperatorDense::HermitianOperatorDense(Eigen::MatrixXcd matrix, OperatorBasis basis,
                                               UniformGrid grid, double hbar)
    : matrix_(std::move(matrix)), basis_(basis), grid_(grid), hbar_(hbar) {
    if (matrix_.rows() != grid_.count)
        throw std::invalid_argument("HermitianOperatorDense: matrix size must match grid");
    check_hermitian(matrix_);
}

const EigenSystem& HermitianOperatorDense::eigensystem() const {
    if (!eigs_ || !full_) {
        eigs_ = hermitian_eigs(matrix_);
        full_ = true;
    }
    return *eigs_;
}

const EigenSystem& HermitianOperatorDense::eigensystem_below(double bound) const {
    if (eigs_ && (full_ || covered_ >= bound)) return *eigs_;
    eigs_ = hermitian_eigs_below(matrix_, bound);
    covered_ = bound;
    full_ = eigs_->values.size() == matrix_.rows();
    return *eigs_;
}

}  // namespace maglab

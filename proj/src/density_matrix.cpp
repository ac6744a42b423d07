#include "cqed/density_matrix.hpp"

#include <cmath>
#include <sstream>

#include "cqed/errors.hpp"

namespace cqed {

DensityMatrix::DensityMatrix(Matrix rho) : rho_(std::move(rho)) {
    if (rho_.rows() != rho_.cols() || rho_.rows() < 1) {
        throw NumericError("DensityMatrix: matrix must be square");
    }
}

DensityMatrix DensityMatrix::pure(const Vector& state) {
    double n2 = state.squaredNorm();
    if (n2 <= 0.0) throw NumericError("DensityMatrix::pure: zero state");
    return DensityMatrix((state * state.adjoint()) / n2);
}

DensityMatrix DensityMatrix::ground(const HilbertSpace& hs) {
    Vector v = Vector::Zero(hs.total_dim());
    v(0) = 1.0;  // |g, 0>
    return pure(v);
}

DensityMatrix DensityMatrix::excited(const HilbertSpace& hs) {
    Vector v = Vector::Zero(hs.total_dim());
    v(hs.fock_dim) = 1.0;  // |e, 0>
    return pure(v);
}

double DensityMatrix::purity() const { return (rho_ * rho_).trace().real(); }

double DensityMatrix::expectation(const Matrix& observable) const {
    return (observable * rho_).trace().real();
}

double DensityMatrix::min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho_ + rho_.adjoint()),
                                             Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff();
}

void DensityMatrix::check(const RhoTolerances& tol, const std::string& where) const {
    const double trace_err = std::abs(trace_real() - 1.0);
    const double herm_err = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    if (!std::isfinite(trace_err) || trace_err > tol.trace || herm_err > tol.hermiticity) {
        std::ostringstream msg;
        msg << "density matrix invariant violated";
        if (!where.empty()) msg << " at " << where;
        msg << ": |tr-1| = " << trace_err << ", ||rho-rho'||_max = " << herm_err;
        throw InvariantError(msg.str());
    }
}

}  // namespace cqed

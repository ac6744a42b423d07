#include "cqed/liouvillian.hpp"

#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

#include "cqed/errors.hpp"

namespace cqed {

Vector vectorize(const Matrix& rho) {
    return Eigen::Map<const Vector>(rho.data(), rho.size());
}

Matrix unvectorize(const Vector& v, int dim) {
    if (static_cast<int>(v.size()) != dim * dim) {
        throw NumericError("unvectorize: size mismatch");
    }
    return Eigen::Map<const Matrix>(v.data(), dim, dim);
}

Liouvillian::Liouvillian(const Matrix& hamiltonian, const std::vector<Matrix>& jump_operators)
    : dim_(static_cast<int>(hamiltonian.rows())) {
    if (hamiltonian.rows() != hamiltonian.cols()) {
        throw NumericError("Liouvillian: Hamiltonian must be square");
    }
    if (!is_hermitian(hamiltonian, 1e-12 * std::max(1.0, hamiltonian.cwiseAbs().maxCoeff()))) {
        throw NumericError("Liouvillian: Hamiltonian must be Hermitian");
    }
    const Matrix id = Matrix::Identity(dim_, dim_);
    const Complex i_unit(0.0, 1.0);

    super_ = -i_unit * (Eigen::kroneckerProduct(id, hamiltonian).eval() -
                        Eigen::kroneckerProduct(hamiltonian.transpose(), id).eval());

    for (const Matrix& c : jump_operators) {
        if (c.rows() != dim_ || c.cols() != dim_) {
            throw NumericError("Liouvillian: jump operator dimension mismatch");
        }
        const Matrix cdc = c.adjoint() * c;
        super_ += Eigen::kroneckerProduct(c.conjugate(), c).eval();
        super_ -= 0.5 * Eigen::kroneckerProduct(id, cdc).eval();
        super_ -= 0.5 * Eigen::kroneckerProduct(cdc.transpose(), id).eval();
    }
}

Matrix propagator(const Liouvillian& l, double dt) {
    if (!(dt > 0.0)) throw NumericError("propagator: dt must be > 0");
    Matrix p = (l.matrix() * dt).exp();
    if (!p.allFinite()) throw NumericError("propagator: non-finite entries in exp(L dt)");
    return p;
}

}  // namespace cqed

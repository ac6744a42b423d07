#include "cqed/hilbert.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include "cqed/errors.hpp"

namespace cqed {

Matrix tensor(const Matrix& a, const Matrix& b) {
    if (a.rows() != a.cols() || b.rows() != b.cols()) {
        throw NumericError("tensor: operands must be square");
    }
    return Eigen::kroneckerProduct(a, b);
}

Matrix sigma_minus_bare() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = 1.0;  // |g><e|
    return m;
}

Matrix sigma_plus_bare() {
    Matrix m = Matrix::Zero(2, 2);
    m(1, 0) = 1.0;  // |e><g|
    return m;
}

Matrix sigma_z_bare() {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = -1.0;
    m(1, 1) = 1.0;
    return m;
}

Matrix annihilation_bare(int fock_dim) {
    if (fock_dim < 2) throw NumericError("annihilation_bare: fock_dim must be >= 2");
    Matrix a = Matrix::Zero(fock_dim, fock_dim);
    for (int n = 1; n < fock_dim; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return a;
}

namespace {
Matrix fock_identity(const HilbertSpace& hs) { return Matrix::Identity(hs.fock_dim, hs.fock_dim); }
Matrix atom_identity() { return Matrix::Identity(2, 2); }
}  // namespace

Matrix atom_lowering(const HilbertSpace& hs) { return tensor(sigma_minus_bare(), fock_identity(hs)); }
Matrix atom_raising(const HilbertSpace& hs) { return tensor(sigma_plus_bare(), fock_identity(hs)); }
Matrix atom_sigma_z(const HilbertSpace& hs) { return tensor(sigma_z_bare(), fock_identity(hs)); }

Matrix atom_excited_projector(const HilbertSpace& hs) {
    Matrix p = Matrix::Zero(2, 2);
    p(1, 1) = 1.0;
    return tensor(p, fock_identity(hs));
}

Matrix cavity_annihilation(const HilbertSpace& hs) {
    return tensor(atom_identity(), annihilation_bare(hs.fock_dim));
}

Matrix cavity_number(const HilbertSpace& hs) {
    Matrix a = annihilation_bare(hs.fock_dim);
    return tensor(atom_identity(), (a.adjoint() * a).eval());
}

Matrix top_fock_projector(const HilbertSpace& hs) {
    Matrix p = Matrix::Zero(hs.fock_dim, hs.fock_dim);
    p(hs.fock_dim - 1, hs.fock_dim - 1) = 1.0;
    return tensor(atom_identity(), p);
}

bool is_hermitian(const Matrix& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return (a - a.adjoint()).cwiseAbs().maxCoeff() < tol;
}

}  // namespace cqed

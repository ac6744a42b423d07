#pragma once

#include <Eigen/Dense>
#include <complex>

namespace cqed {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Operators are plain dense complex matrices; helpers below build the usual
// two-level and truncated-Fock ladder operators on the composite space.
using QuantumOperator = Matrix;

// Composite space of one two-level atom and one truncated cavity mode.
// Basis ordering is atom ⊗ field with the atomic ground state first:
// |atom i, fock n> -> index i * fock_dim + n, i = 0 (ground), 1 (excited).
struct HilbertSpace {
    static constexpr int atom_dim = 2;
    int fock_dim = 5;  // N_max + 1 photon number states

    int total_dim() const { return atom_dim * fock_dim; }
    int n_max() const { return fock_dim - 1; }
    bool valid() const { return fock_dim >= 2; }
};

// Kronecker product, fixed ordering a ⊗ b (atom ⊗ field throughout).
Matrix tensor(const Matrix& a, const Matrix& b);

// Bare two-level operators (2x2), ground state first.
Matrix sigma_minus_bare();
Matrix sigma_plus_bare();
Matrix sigma_z_bare();

// Bare truncated-mode annihilation operator (fock_dim x fock_dim).
Matrix annihilation_bare(int fock_dim);

// Composite-space embeddings.
Matrix atom_lowering(const HilbertSpace& hs);       // sigma_- ⊗ I
Matrix atom_raising(const HilbertSpace& hs);        // sigma_+ ⊗ I
Matrix atom_sigma_z(const HilbertSpace& hs);        // sigma_z ⊗ I
Matrix atom_excited_projector(const HilbertSpace& hs);  // sigma_+ sigma_- ⊗ I
Matrix cavity_annihilation(const HilbertSpace& hs);     // I ⊗ a
Matrix cavity_number(const HilbertSpace& hs);           // I ⊗ a†a
Matrix top_fock_projector(const HilbertSpace& hs);      // I ⊗ |N><N|

// Max-norm Hermiticity test, ||A - A†||_max < tol.
bool is_hermitian(const Matrix& a, double tol = 1e-12);

}  // namespace cqed

#pragma once

#include <vector>

#include "cqed/density_matrix.hpp"
#include "cqed/hilbert.hpp"

namespace cqed {

// Vectorization convention: column-stacking, vec(rho) concatenates the
// columns of rho, so vec(A rho B) = (Bᵀ ⊗ A) vec(rho). Fixed here once and
// asserted by a round-trip unit test.
Vector vectorize(const Matrix& rho);
Matrix unvectorize(const Vector& v, int dim);

// Lindblad generator acting on column-vectorized density matrices:
//   L = -i [(I ⊗ H) - (Hᵀ ⊗ I)]
//       + Σ_k [ conj(C_k) ⊗ C_k - ½ (I ⊗ C_k†C_k) - ½ ((C_k†C_k)ᵀ ⊗ I) ]
// H must be Hermitian; all operators share one dimension.
class Liouvillian {
public:
    Liouvillian(const Matrix& hamiltonian, const std::vector<Matrix>& jump_operators);

    int dim() const { return dim_; }                  // Hilbert dimension
    const Matrix& matrix() const { return super_; }   // dim² x dim²

private:
    int dim_;
    Matrix super_;
};

// exp(L dt), reusable across steps of equal dt. Throws NumericError on
// non-finite entries; dt must be > 0.
Matrix propagator(const Liouvillian& l, double dt);

}  // namespace cqed

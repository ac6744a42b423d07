#pragma once

#include "cqed/hilbert.hpp"

namespace cqed {

// Tolerances the evolution layer enforces on every recorded sample.
struct RhoTolerances {
    double trace = 1e-8;        // |Tr rho - 1|
    double hermiticity = 1e-10; // ||rho - rho†||_max
    double positivity = 1e-8;   // min eigenvalue > -positivity
};

// Density matrix on a small dense Hilbert space. Construction and evolution
// keep it Hermitian with unit trace; check() verifies.
class DensityMatrix {
public:
    explicit DensityMatrix(Matrix rho);

    static DensityMatrix pure(const Vector& state);
    // |g, 0> on the composite space.
    static DensityMatrix ground(const HilbertSpace& hs);
    // |e, 0> on the composite space.
    static DensityMatrix excited(const HilbertSpace& hs);

    int dim() const { return static_cast<int>(rho_.rows()); }
    const Matrix& matrix() const { return rho_; }

    double trace_real() const { return rho_.trace().real(); }
    double purity() const;                 // Tr(rho^2)
    double expectation(const Matrix& observable) const;  // real part of Tr(O rho)
    double min_eigenvalue() const;

    // Throws InvariantError when outside tolerance; `where` tags diagnostics.
    void check(const RhoTolerances& tol, const std::string& where = {}) const;

private:
    Matrix rho_;
};

}  // namespace cqed

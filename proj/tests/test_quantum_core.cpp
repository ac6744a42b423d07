#include <doctest.h>

#include <cmath>
#include <random>

#include "cqed/constants.hpp"
#include "cqed/density_matrix.hpp"
#include "cqed/errors.hpp"
#include "cqed/evolve.hpp"
#include "cqed/hilbert.hpp"
#include "cqed/liouvillian.hpp"

using namespace cqed;

namespace {

Matrix random_density(int dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix a(dim, dim);
    for (int i = 0; i < dim; ++i) {
        for (int j = 0; j < dim; ++j) a(i, j) = Complex(n(rng), n(rng));
    }
    Matrix rho = a * a.adjoint();
    return rho / rho.trace().real();
}

}  // namespace

TEST_CASE("tensor product basics") {
    const Matrix id6 = tensor(Matrix::Identity(2, 2), Matrix::Identity(3, 3));
    CHECK(id6.rows() == 6);
    CHECK((id6 - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff() == doctest::Approx(0.0));

    // sigma_z ⊗ I has eigenvalues {+1, +1, -1, -1}
    const Matrix sz = tensor(sigma_z_bare(), Matrix::Identity(2, 2));
    Eigen::SelfAdjointEigenSolver<Matrix> es(sz);
    const Eigen::VectorXd ev = es.eigenvalues();
    CHECK(ev(0) == doctest::Approx(-1.0));
    CHECK(ev(1) == doctest::Approx(-1.0));
    CHECK(ev(2) == doctest::Approx(1.0));
    CHECK(ev(3) == doctest::Approx(1.0));

    // (sigma_- ⊗ a†) |e, 0> = |g, 1>
    const HilbertSpace hs{3};
    const Matrix op = tensor(sigma_minus_bare(), annihilation_bare(3).adjoint());
    Vector e0 = Vector::Zero(hs.total_dim());
    e0(hs.fock_dim) = 1.0;  // |e, 0>
    const Vector mapped = op * e0;
    Vector g1 = Vector::Zero(hs.total_dim());
    g1(1) = 1.0;  // |g, 1>
    CHECK((mapped - g1).cwiseAbs().maxCoeff() < 1e-15);

    CHECK_THROWS_AS(tensor(Matrix::Zero(2, 3), Matrix::Identity(2, 2)), NumericError);
}

TEST_CASE("column-stacking vectorization round trip") {
    const Matrix rho = random_density(4, 7);
    const Vector v = vectorize(rho);
    // Column stacking: entry (row r, col c) sits at index c * dim + r.
    CHECK(v(1 * 4 + 2) == rho(2, 1));
    const Matrix back = unvectorize(v, 4);
    CHECK((back - rho).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("amplitude damping matches the analytic decay") {
    const double gamma0 = angular(169.3e3);
    const Matrix h = Matrix::Zero(2, 2);
    const Liouvillian l(h, {std::sqrt(gamma0) * sigma_minus_bare()});

    Matrix rho_e = Matrix::Zero(2, 2);
    rho_e(1, 1) = 1.0;
    const double dt = 50e-9;
    const Matrix p = propagator(l, dt);
    Vector v = vectorize(rho_e);
    for (int step = 1; step <= 20; ++step) {
        v = p * v;
        const Matrix rho = unvectorize(v, 2);
        const double expected = std::exp(-gamma0 * dt * step);
        CHECK(rho(1, 1).real() == doctest::Approx(expected).epsilon(1e-9));
        CHECK(std::abs(rho.trace().real() - 1.0) < 1e-12);
    }
}

TEST_CASE("pure dephasing leaves populations and kills coherence") {
    const double gamma_d = angular(0.5e9);
    const Liouvillian l(Matrix::Zero(2, 2), {std::sqrt(gamma_d / 2.0) * sigma_z_bare()});

    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 0.5;
    rho(1, 1) = 0.5;
    rho(0, 1) = 0.5;
    rho(1, 0) = 0.5;
    const double dt = 0.2e-9;
    const Matrix p = propagator(l, dt);
    Vector v = vectorize(rho);
    for (int step = 1; step <= 10; ++step) {
        v = p * v;
        const Matrix r = unvectorize(v, 2);
        CHECK(r(0, 0).real() == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(r(1, 1).real() == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(std::abs(r(0, 1)) ==
              doctest::Approx(0.5 * std::exp(-gamma_d * dt * step)).epsilon(1e-9));
    }
}

TEST_CASE("closed system evolution is unitary") {
    Matrix h(2, 2);
    h(0, 0) = 0.0;
    h(1, 1) = angular(1e9);
    h(0, 1) = angular(0.2e9);
    h(1, 0) = angular(0.2e9);
    const Liouvillian l(h, {});

    const Matrix rho0 = random_density(2, 3);
    const double purity0 = (rho0 * rho0).trace().real();
    const Matrix p = propagator(l, 1e-9);
    Vector v = vectorize(rho0);
    for (int step = 0; step < 50; ++step) v = p * v;
    const Matrix rho = unvectorize(v, 2);
    CHECK((rho * rho).trace().real() == doctest::Approx(purity0).epsilon(1e-8));
}

TEST_CASE("liouvillian conserves trace and rejects bad input") {
    const HilbertSpace hs{3};
    const double kappa = angular(5e9);
    const Liouvillian l(Matrix::Zero(hs.total_dim(), hs.total_dim()),
                        {std::sqrt(kappa) * cavity_annihilation(hs)});
    const Matrix rho = random_density(hs.total_dim(), 11);
    const Matrix drho = unvectorize(l.matrix() * vectorize(rho), hs.total_dim());
    CHECK(std::abs(drho.trace()) < 1e-10 * kappa);

    Matrix not_hermitian = Matrix::Zero(2, 2);
    not_hermitian(0, 1) = 1.0;
    CHECK_THROWS_AS(Liouvillian(not_hermitian, {}), NumericError);
    CHECK_THROWS_AS(Liouvillian(Matrix::Zero(2, 2), {Matrix::Zero(3, 3)}), NumericError);
}

TEST_CASE("propagator identity, lifetime factor, and semigroup property") {
    const Liouvillian zero(Matrix::Zero(2, 2), {});
    const Matrix p0 = propagator(zero, 1e-6);
    CHECK((p0 - Matrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-12);

    // One bulk lifetime of amplitude damping multiplies the excited
    // population by exactly 1/e; for 2pi x 169.3 kHz that lifetime is 940 ns
    // to within rounding.
    const double gamma0 = angular(169.3e3);
    const double lifetime = 1.0 / gamma0;
    CHECK(std::abs(940e-9 * gamma0 - 1.0) < 1e-3);
    const Liouvillian damp(Matrix::Zero(2, 2), {std::sqrt(gamma0) * sigma_minus_bare()});
    Matrix rho_e = Matrix::Zero(2, 2);
    rho_e(1, 1) = 1.0;
    const Matrix rho1 = unvectorize(propagator(damp, lifetime) * vectorize(rho_e), 2);
    CHECK(std::abs(rho1(1, 1).real() - std::exp(-1.0)) < 1e-6);

    const Matrix p_dt = propagator(damp, 1e-9);
    const Matrix p_2dt = propagator(damp, 2e-9);
    CHECK((p_dt * p_dt - p_2dt).cwiseAbs().maxCoeff() < 1e-9);

    CHECK_THROWS_AS(propagator(damp, 0.0), NumericError);
    CHECK_THROWS_AS(propagator(damp, -1e-9), NumericError);
}

TEST_CASE("evolve_trace ground state stays dark") {
    const HilbertSpace hs{4};
    const Liouvillian l(Matrix::Zero(hs.total_dim(), hs.total_dim()),
                        {std::sqrt(angular(169.3e3)) * atom_lowering(hs)});
    EvolveOptions opts;
    opts.dt_record = 10e-9;
    const EvolveResult r = evolve_trace(DensityMatrix::ground(hs), {{&l, 1e-6}},
                                        {atom_excited_projector(hs)}, opts);
    for (double y : r.traces[0].y) CHECK(std::abs(y) < 1e-14);
}

TEST_CASE("evolve_trace excited decay matches the exponential at all samples") {
    const HilbertSpace hs{2};
    const double gamma0 = angular(169.3e3);
    const Liouvillian l(Matrix::Zero(hs.total_dim(), hs.total_dim()),
                        {std::sqrt(gamma0) * atom_lowering(hs)});
    EvolveOptions opts;
    opts.dt_record = 20e-9;
    opts.check_positivity = true;
    const EvolveResult r = evolve_trace(DensityMatrix::excited(hs), {{&l, 4e-6}},
                                        {atom_excited_projector(hs)}, opts);
    for (std::size_t i = 0; i < r.traces[0].size(); ++i) {
        CHECK(std::abs(r.traces[0].y[i] - std::exp(-gamma0 * r.traces[0].x[i])) < 1e-6);
    }
    CHECK(r.traces[0].x.front() == 0.0);
    CHECK(r.traces[0].x.back() == doctest::Approx(4e-6).epsilon(1e-12));
}

TEST_CASE("evolve_trace raises on Fock truncation overflow") {
    const HilbertSpace hs{4};
    // Strong coherent drive on the cavity mode fills the truncated ladder.
    const Matrix a = cavity_annihilation(hs);
    const Matrix h = angular(2e9) * (a + a.adjoint());
    const Liouvillian l(h, {});
    EvolveOptions opts;
    opts.dt_record = 1e-11;
    opts.truncation_projector = top_fock_projector(hs);
    CHECK_THROWS_AS(
        evolve_trace(DensityMatrix::ground(hs), {{&l, 1e-9}}, {cavity_number(hs)}, opts),
        TruncationError);
}

TEST_CASE("density matrix validation") {
    const HilbertSpace hs{3};
    CHECK(DensityMatrix::ground(hs).trace_real() == doctest::Approx(1.0));
    CHECK(DensityMatrix::excited(hs).expectation(atom_excited_projector(hs)) ==
          doctest::Approx(1.0));

    Matrix bad = Matrix::Zero(2, 2);
    bad(0, 0) = 1.0;
    bad(0, 1) = 0.5;  // not Hermitian
    CHECK_THROWS_AS(DensityMatrix(bad).check(RhoTolerances{}), InvariantError);

    Matrix scaled = Matrix::Identity(2, 2);  // trace 2
    CHECK_THROWS_AS(DensityMatrix(scaled).check(RhoTolerances{}), InvariantError);

    CHECK(DensityMatrix(random_density(6, 5)).min_eigenvalue() > -1e-12);
}

TEST_CASE("hilbert space shape") {
    const HilbertSpace hs{5};
    CHECK(hs.total_dim() == 10);
    CHECK(hs.n_max() == 4);
    CHECK(hs.valid());
    CHECK_FALSE(HilbertSpace{1}.valid());
}

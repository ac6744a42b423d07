#include "cqed/evolve.hpp"

#include <cmath>
#include <sstream>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

// Per-sample bookkeeping on the vectorized state, kept allocation-free: the
// recording loop runs hundreds of thousands of times across a sweep.
struct SampleKernel {
    int dim = 0;
    RhoTolerances tol;
    bool check_positivity = false;
    std::vector<Vector> observable_vecs;  // vec(Oᵀ), so <O> = Re(o · v)
    Vector truncation_vec;                // vec(Pᵀ) of the truncation monitor
    bool has_truncation = false;
    double truncation_tol = 1e-6;

    double trace_of(const Vector& v) const {
        double tr = 0.0;
        for (int k = 0; k < dim; ++k) tr += v[k * dim + k].real();
        return tr;
    }

    double hermiticity_defect(const Vector& v) const {
        double worst = 0.0;
        for (int r = 0; r < dim; ++r) {
            for (int c = r; c < dim; ++c) {
                const Complex d = v[c * dim + r] - std::conj(v[r * dim + c]);
                worst = std::max(worst, std::abs(d));
            }
        }
        return worst;
    }

    void check(const Vector& v, double t) const {
        const double trace_err = std::abs(trace_of(v) - 1.0);
        const double herm_err = hermiticity_defect(v);
        if (!std::isfinite(trace_err) || trace_err > tol.trace || herm_err > tol.hermiticity) {
            std::ostringstream msg;
            msg << "density matrix invariant violated at t = " << t
                << " s: |tr-1| = " << trace_err << ", ||rho-rho'||_max = " << herm_err;
            throw InvariantError(msg.str());
        }
        if (check_positivity) {
            const Matrix rho = unvectorize(v, dim);
            Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho + rho.adjoint()),
                                                     Eigen::EigenvaluesOnly);
            if (es.eigenvalues().minCoeff() < -tol.positivity) {
                std::ostringstream msg;
                msg << "density matrix not positive semidefinite at t = " << t << " s";
                throw InvariantError(msg.str());
            }
        }
        if (has_truncation) {
            const double top = expectation(truncation_vec, v);
            if (!(top < truncation_tol)) {
                std::ostringstream msg;
                msg << "Fock truncation inadequate at t = " << t << " s: top-level population "
                    << top << " >= " << truncation_tol;
                throw TruncationError(msg.str());
            }
        }
    }

    static double expectation(const Vector& o, const Vector& v) {
        // Tr(O rho) = vec(Oᵀ)ᵀ vec(rho)
        return o.dot(v).real();
    }

    void sample(const Vector& v, double t, std::vector<SimCurve>& traces) const {
        check(v, t);
        for (std::size_t k = 0; k < observable_vecs.size(); ++k) {
            traces[k].x.push_back(t);
            traces[k].y.push_back(expectation(observable_vecs[k], v));
        }
    }
};

}  // namespace

EvolveResult evolve_trace(const DensityMatrix& rho0, const std::vector<Segment>& segments,
                          const std::vector<Matrix>& observables, const EvolveOptions& opts) {
    if (!(opts.dt_record > 0.0)) throw NumericError("evolve_trace: dt_record must be > 0");
    for (const Segment& seg : segments) {
        if (seg.generator == nullptr || !(seg.duration > 0.0)) {
            throw NumericError("evolve_trace: segment needs a generator and duration > 0");
        }
    }

    SampleKernel kernel;
    kernel.dim = rho0.dim();
    kernel.tol = opts.tolerances;
    kernel.check_positivity = opts.check_positivity;
    kernel.truncation_tol = opts.truncation_tol;
    for (const Matrix& o : observables) {
        kernel.observable_vecs.push_back(vectorize(o.transpose()).conjugate());
    }
    if (opts.truncation_projector) {
        kernel.truncation_vec = vectorize(opts.truncation_projector->transpose()).conjugate();
        kernel.has_truncation = true;
    }

    std::vector<SimCurve> traces(observables.size());
    Vector v = vectorize(rho0.matrix());
    Vector next(v.size());
    double t = 0.0;

    kernel.sample(v, t, traces);

    for (const Segment& seg : segments) {
        const auto n_steps = static_cast<long>(std::ceil(seg.duration / opts.dt_record - 1e-12));
        const long steps = std::max<long>(1, n_steps);
        const double dt = seg.duration / static_cast<double>(steps);
        const Matrix prop = propagator(*seg.generator, dt);
        for (long k = 0; k < steps; ++k) {
            next.noalias() = prop * v;
            v.swap(next);
            t += dt;
            kernel.sample(v, t, traces);
        }
    }

    return EvolveResult{std::move(traces), DensityMatrix(unvectorize(v, kernel.dim))};
}

}  // namespace cqed

#pragma once

#include <optional>
#include <vector>

#include "cqed/curve.hpp"
#include "cqed/density_matrix.hpp"
#include "cqed/liouvillian.hpp"

namespace cqed {

// One piecewise-constant stretch of evolution.
struct Segment {
    const Liouvillian* generator = nullptr;
    double duration = 0.0;  // s
};

struct EvolveOptions {
    double dt_record = 1e-9;  // sampling step, s; adjusted per segment so
                              // segment boundaries land exactly on samples
    RhoTolerances tolerances;
    bool check_positivity = false;  // eigenvalue check at every sample (slow)
    // Optional truncation monitor: population of this projector must stay
    // below truncation_tol at every sample or TruncationError is thrown.
    std::optional<Matrix> truncation_projector;
    double truncation_tol = 1e-6;
};

struct EvolveResult {
    // One curve per observable: x = time (s), y = Re Tr(O rho(t)).
    std::vector<SimCurve> traces;
    DensityMatrix final_state;
};

// Evolves rho0 through the segments, sampling every observable roughly every
// dt_record (each segment uses dt = duration / ceil(duration / dt_record)).
// The t = 0 state is the first sample. Trace and Hermiticity invariants are
// enforced at every sample.
EvolveResult evolve_trace(const DensityMatrix& rho0, const std::vector<Segment>& segments,
                          const std::vector<Matrix>& observables, const EvolveOptions& opts);

}  // namespace cqed

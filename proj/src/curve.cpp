#include "cqed/curve.hpp"

#include "cqed/errors.hpp"

namespace cqed {

bool SimCurve::consistent() const {
    if (x.size() != y.size()) return false;
    if (!sigma.empty() && sigma.size() != x.size()) return false;
    for (std::size_t i = 1; i < x.size(); ++i) {
        if (!(x[i] > x[i - 1])) return false;
    }
    return true;
}

void SimCurve::require_consistent() const {
    if (!consistent()) {
        throw NumericError("SimCurve: length mismatch or non-monotone abscissa");
    }
}

}  // namespace cqed

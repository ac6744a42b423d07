#pragma once

#include <map>
#include <string>
#include <vector>

namespace cqed {

// Generic (abscissa, ordinate, uncertainty) series: decay trace, spectrum,
// saturation curve, detuning map row. x must be strictly monotone; sigma is
// either empty or one entry per point. meta carries free-form labels and
// units (e.g. x_label, x_unit, y_label, y_unit).
struct SimCurve {
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> sigma;
    std::map<std::string, std::string> meta;

    std::size_t size() const { return x.size(); }
    bool consistent() const;        // equal lengths, strictly monotone x
    void require_consistent() const;  // throws NumericError otherwise
};

}  // namespace cqed

#pragma once

#include <string>
#include <vector>

#include "cqed/curve.hpp"

// CSV curve files: '#'-prefixed metadata lines (key=value), then a header row
// naming the columns as label[unit], then comma-delimited data rows with '.'
// decimal separator at 17 significant digits (lossless round trip).

namespace cqed {

void write_curve(const SimCurve& curve, const std::string& path);

// Throws ConfigError on ragged rows or non-numeric cells (naming the row).
// A non-monotone abscissa is reported through `warnings`, not an error.
SimCurve read_curve(const std::string& path, std::vector<std::string>* warnings = nullptr);

}  // namespace cqed

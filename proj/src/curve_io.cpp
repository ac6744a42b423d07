#include "cqed/curve_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cqed/errors.hpp"

namespace cqed {

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

// Column header "label[unit]" from curve metadata.
std::string column_name(const SimCurve& c, const char* label_key, const char* unit_key,
                        const char* fallback) {
    const auto label = c.meta.find(label_key);
    const auto unit = c.meta.find(unit_key);
    std::string name = label != c.meta.end() ? label->second : fallback;
    if (unit != c.meta.end()) name += "[" + unit->second + "]";
    return name;
}

void split_column_name(const std::string& name, const std::string& label_key,
                       const std::string& unit_key, SimCurve& c) {
    const std::size_t open = name.find('[');
    if (open == std::string::npos || name.back() != ']') {
        c.meta[label_key] = name;
        return;
    }
    c.meta[label_key] = name.substr(0, open);
    c.meta[unit_key] = name.substr(open + 1, name.size() - open - 2);
}

bool parse_cell(const std::string& cell, double& out) {
    char* end = nullptr;
    out = std::strtod(cell.c_str(), &end);
    return end != cell.c_str() && *end == '\0' && std::isfinite(out);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace

void write_curve(const SimCurve& curve, const std::string& path) {
    if (curve.x.size() != curve.y.size() ||
        (!curve.sigma.empty() && curve.sigma.size() != curve.x.size())) {
        throw NumericError("write_curve: column length mismatch");
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write curve file: " + path);

    out << "# cqed-curve v1\n";
    for (const auto& [key, value] : curve.meta) {
        if (key == "x_label" || key == "x_unit" || key == "y_label" || key == "y_unit") continue;
        out << "# " << key << "=" << value << "\n";
    }
    out << column_name(curve, "x_label", "x_unit", "x") << ","
        << column_name(curve, "y_label", "y_unit", "y");
    if (!curve.sigma.empty()) out << ",sigma";
    out << "\n";
    for (std::size_t i = 0; i < curve.x.size(); ++i) {
        out << fmt17(curve.x[i]) << "," << fmt17(curve.y[i]);
        if (!curve.sigma.empty()) out << "," << fmt17(curve.sigma[i]);
        out << "\n";
    }
}

SimCurve read_curve(const std::string& path, std::vector<std::string>* warnings) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open curve file: " + path);

    SimCurve curve;
    std::string line;
    bool header_seen = false;
    std::size_t columns = 0;
    long row = 0;

    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            if (!body.empty() && body.front() == ' ') body.erase(0, 1);
            const std::size_t eq = body.find('=');
            if (eq != std::string::npos) {
                curve.meta[body.substr(0, eq)] = body.substr(eq + 1);
            }
            continue;
        }
        const std::vector<std::string> cells = split_csv(line);
        if (!header_seen) {
            if (cells.size() < 2 || cells.size() > 3) {
                throw ConfigError("curve file header must name 2 or 3 columns: " + path);
            }
            split_column_name(cells[0], "x_label", "x_unit", curve);
            split_column_name(cells[1], "y_label", "y_unit", curve);
            columns = cells.size();
            header_seen = true;
            continue;
        }
        if (cells.size() != columns) {
            throw ConfigError("ragged row " + std::to_string(row) + " in " + path + ": expected " +
                              std::to_string(columns) + " cells, got " + std::to_string(cells.size()));
        }
        double vx, vy;
        if (!parse_cell(cells[0], vx) || !parse_cell(cells[1], vy)) {
            throw ConfigError("non-numeric cell in row " + std::to_string(row) + " of " + path);
        }
        curve.x.push_back(vx);
        curve.y.push_back(vy);
        if (columns == 3) {
            double vs;
            if (!parse_cell(cells[2], vs)) {
                throw ConfigError("non-numeric cell in row " + std::to_string(row) + " of " + path);
            }
            curve.sigma.push_back(vs);
        }
    }
    if (!header_seen) throw ConfigError("curve file has no header row: " + path);

    for (std::size_t i = 1; i < curve.x.size(); ++i) {
        if (!(curve.x[i] > curve.x[i - 1])) {
            if (warnings) {
                warnings->push_back("non-monotone abscissa at data row " + std::to_string(i + 1) +
                                    " of " + path);
            }
            break;
        }
    }
    return curve;
}

}  // namespace cqed

#include "fbd/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fbd {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string CsvTable::str() const {
    std::ostringstream out;
    for (const auto& c : comments) out << "# " << c << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) out << (i ? "," : "") << columns[i];
    out << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
    return out.str();
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << text;
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void write_csv(const std::string& path, const CsvTable& table) { write_text(path, table.str()); }

void write_json(const std::string& path, const Json& json) { write_text(path, json.dump(2) + "\n"); }

CsvTable profile_table(const ProfileFn& f, const std::string& value_name) {
    CsvTable t;
    t.columns = {"x", value_name};
    const Domain& d = f.domain();
    for (std::size_t j = 0; j < d.size(); ++j) t.rows.push_back({d.x(j), f.samples()[j]});
    return t;
}

Json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

Json profile_sidecar(const ProfileFn& f, double alpha) {
    Json j;
    const auto& tr = f.tracked();
    j["jump_pos"] = tr ? number(tr->pos) : Json(nullptr);
    j["left_limit"] = tr ? number(tr->left) : Json(nullptr);
    j["right_limit"] = tr ? number(tr->right) : Json(nullptr);
    j["alpha"] = number(alpha);
    return j;
}

CsvTable interface_table(const Trajectory& traj) {
    CsvTable t;
    t.comments = {"mode: 0 = initial state, 1 = LM (left move), 2 = RM (right move), 3 = ST (standing)"};
    t.columns = {"t", "xi", "mode", "p_at_xi"};
    for (const auto& s : traj.steps) {
        t.rows.push_back({s.t, s.xi, static_cast<double>(static_cast<int>(s.mode)), s.p_at_xi});
    }
    return t;
}

}  // namespace fbd

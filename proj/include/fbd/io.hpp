#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "fbd/profile.hpp"
#include "fbd/scheme.hpp"

namespace fbd {

using Json = nlohmann::ordered_json;

/// 17 significant digits, enough to round-trip any double.
std::string format_double(double v);

/// Comma-separated table with a header row and LF line endings. Lines in
/// `comments` are written first, each prefixed with "# ".
struct CsvTable {
    std::vector<std::string> comments;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::string str() const;
};

void write_text(const std::string& path, const std::string& text);
void write_csv(const std::string& path, const CsvTable& table);
void write_json(const std::string& path, const Json& json);

/// x,value over the grid samples.
CsvTable profile_table(const ProfileFn& f, const std::string& value_name = "value");

/// {jump_pos, left_limit, right_limit, alpha}; nulls when nothing is tracked.
Json profile_sidecar(const ProfileFn& f, double alpha);

/// t, xi, mode, p_at_xi; the mode column holds 0 none, 1 LM, 2 RM, 3 ST and
/// is spelled out in a comment line.
CsvTable interface_table(const Trajectory& traj);

/// Non-finite numbers become null (JSON has no inf or NaN).
Json number(double v);

}  // namespace fbd

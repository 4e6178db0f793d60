#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "fbd/grid.hpp"
#include "fbd/heat.hpp"
#include "fbd/state.hpp"

namespace fbd {

/// Invalid or unreadable configuration; `key` names the offending entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string key, const std::string& what)
        : std::runtime_error(key.empty() ? what : key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

/// Initial data u = slope * x + intercept on [from, to].
struct Segment {
    double from;
    double to;
    double slope;
    double intercept;

    bool operator==(const Segment&) const = default;
};

struct Tolerances {
    double root = -1.0;           // bisection bracket width; <= 0 means 1e-12 * domain width
    double admissibility = -1.0;  // <= 0 means 1e-8 (analytic) or 10 h² (fd-neumann)
    double quadrature = 1e-13;

    bool operator==(const Tolerances&) const = default;
};

struct ExperimentConfig {
    // [experiment]
    double eps2 = 0.01;
    DomainKind backend = DomainKind::BoundedNeumann;
    double t_final = 0.25;
    std::vector<double> snapshot_times;
    bool strict = false;
    std::uint64_t seed = 1;
    // [domain]
    double left = -2.0;
    double right = 2.0;
    double h = 0.0025;
    // [init]
    double xi0 = 0.0;
    std::vector<Segment> segments;
    // [tolerances]
    Tolerances tol;
    // [decompose]
    std::vector<double> decompose_times;
    // [sweep]
    std::vector<double> sweep_eps2;
    double gamma = 0.25;
    int holder_pairs = 10000;
    double compare_time = 0.1;
    double split_time = 0.15;
    double stefan_time = 0.15;
    // [kernelcheck]
    double kc_eps = 0.1;
    std::vector<int> kc_n_list;
    std::vector<int> a1_n_list;

    bool operator==(const ExperimentConfig&) const = default;

    /// Throws ConfigError naming the first broken invariant.
    void validate() const;

    Epsilon eps() const { return Epsilon::from_dt(eps2); }
    Domain domain() const { return Domain(backend, left, right, h); }
    /// Initial u as a whole-line function (end segments extend linearly).
    PiecewiseLinear u_ini() const;
    /// p_ini = u_ini - sgn(. - xi0).
    PiecewiseLinear p_ini() const;
    /// Smallest majorant slope of u_ini on the whole line.
    double alpha() const;
    double admissibility_tol() const;
    double root_tol() const;
    SimState initial_state() const;
    /// Same experiment with a different time step.
    ExperimentConfig with_eps2(double e2) const;
};

/// The reference experiment: bounded [-2, 2] with Neumann walls, eps² = 0.01,
/// h = 1/400, xi0 = 0, u = 2x - 0.6 left and 7x + 1.4 right, T = 0.25.
ExperimentConfig preset_reference();

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace fbd

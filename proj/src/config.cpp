#include "fbd/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace fbd {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size() || !std::isfinite(v)) {
        throw ConfigError(key, "expected a finite number, got '" + raw + "'");
    }
    return v;
}

long long to_integer(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ConfigError(key, "expected an integer, got '" + raw + "'");
    }
    return v;
}

bool to_bool(const std::string& key, const std::string& raw) {
    const std::string s = trim(raw);
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw ConfigError(key, "expected true or false, got '" + raw + "'");
}

std::vector<std::string> split(const std::string& raw, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(raw);
    if (sep == ' ') {
        while (in >> item) out.push_back(item);
        return out;
    }
    while (std::getline(in, item, sep)) {
        if (!trim(item).empty()) out.push_back(item);
    }
    return out;
}

std::vector<double> to_doubles(const std::string& key, const std::string& raw) {
    std::vector<double> out;
    for (const auto& item : split(raw, ',')) out.push_back(to_double(key, item));
    return out;
}

std::vector<int> to_ints(const std::string& key, const std::string& raw) {
    std::vector<int> out;
    for (const auto& item : split(raw, ',')) out.push_back(static_cast<int>(to_integer(key, item)));
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        if constexpr (std::is_floating_point_v<T>) {
            out += fmt(v[i]);
        } else {
            out += std::to_string(v[i]);
        }
    }
    return out;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (!(eps2 > 0.0)) throw ConfigError("experiment.eps2", "must be positive");
    if (!(t_final > 0.0)) throw ConfigError("experiment.T_final", "must be positive");
    if (eps2 > t_final) throw ConfigError("experiment.eps2", "time step exceeds T_final");
    for (double t : snapshot_times) {
        if (t < 0.0 || t > t_final) throw ConfigError("experiment.snapshot_times", "time outside [0, T_final]");
    }
    for (double t : decompose_times) {
        if (t < 0.0 || t > t_final) throw ConfigError("decompose.times", "time outside [0, T_final]");
    }
    if (!(right > left)) throw ConfigError("domain.right", "must exceed domain.left");
    Domain d(DomainKind::WholeLine, 0.0, 1.0, 0.5);
    try {
        d = domain();
        d.require_resolves(eps());
    } catch (const std::invalid_argument& e) {
        throw ConfigError("domain.h", e.what());
    }
    if (segments.empty()) throw ConfigError("init.segment1", "at least one segment is required");
    if (segments.front().from != left) {
        throw ConfigError("init.segment1", "first segment must start at domain.left");
    }
    if (segments.back().to != right) {
        throw ConfigError("init.segment" + std::to_string(segments.size()),
                          "last segment must end at domain.right");
    }
    for (std::size_t i = 0; i < segments.size(); ++i) {
        const std::string key = "init.segment" + std::to_string(i + 1);
        if (!(segments[i].to > segments[i].from)) throw ConfigError(key, "empty segment");
        if (i > 0 && segments[i].from != segments[i - 1].to) {
            throw ConfigError(key, "segments must be contiguous");
        }
    }
    if (!(xi0 > left && xi0 < right)) throw ConfigError("init.xi0", "must lie inside the domain");
    if (!(gamma > 0.0 && gamma < 0.5)) throw ConfigError("sweep.gamma", "must lie in (0, 1/2)");
    if (holder_pairs < 1) throw ConfigError("sweep.holder_pairs", "must be positive");
    if (!(kc_eps > 0.0)) throw ConfigError("kernelcheck.eps", "must be positive");
    for (int n : kc_n_list) {
        if (n < 1) throw ConfigError("kernelcheck.n_list", "entries must be positive");
    }
    for (int n : a1_n_list) {
        if (n < 1) throw ConfigError("kernelcheck.a1_n_list", "entries must be positive");
    }
    for (double e2 : sweep_eps2) {
        if (!(e2 > 0.0)) throw ConfigError("sweep.eps2_list", "entries must be positive");
    }
}

PiecewiseLinear ExperimentConfig::u_ini() const {
    std::vector<LinearPiece> pcs;
    for (const auto& s : segments) pcs.push_back({s.from, s.to, s.slope, s.intercept});
    return PiecewiseLinear(std::move(pcs));
}

PiecewiseLinear ExperimentConfig::p_ini() const { return u_ini().shifted(xi0, 1.0, -1.0); }

double ExperimentConfig::alpha() const {
    double best = 0.0;
    for (const auto& s : u_ini().pieces()) {
        if (s.to <= xi0) continue;
        const double lo = std::max(s.from, xi0);
        if (lo == xi0) {
            const double at = s(xi0);
            if (at > kJump) return INFINITY;
            if (at == kJump) best = std::max(best, s.slope);
        } else {
            best = std::max(best, (s(lo) - kJump) / (lo - xi0));
        }
        if (std::isfinite(s.to)) {
            best = std::max(best, (s(s.to) - kJump) / (s.to - xi0));
        } else {
            best = std::max(best, s.slope);
        }
    }
    return best;
}

double ExperimentConfig::admissibility_tol() const {
    if (tol.admissibility > 0.0) return tol.admissibility;
    return backend == DomainKind::WholeLine ? 1e-8 : 10.0 * h * h;
}

double ExperimentConfig::root_tol() const {
    return tol.root > 0.0 ? tol.root : 1e-12 * (right - left);
}

SimState ExperimentConfig::initial_state() const {
    const PiecewiseLinear u = u_ini();
    double right_limit = u(xi0);
    for (const auto& p : u.pieces()) {
        if (p.from <= xi0 && xi0 < p.to) {
            right_limit = p(xi0);
            break;
        }
    }
    ProfileFn prof = ProfileFn::sample(domain(), [&u](double x) { return u(x); },
                                       Interface{xi0, u(xi0), right_limit});
    const double xi = prof.tracked()->pos;  // snapped onto a node when close
    return SimState{std::move(prof), xi, 0, alpha(), Mode::None};
}

ExperimentConfig ExperimentConfig::with_eps2(double e2) const {
    ExperimentConfig c = *this;
    c.eps2 = e2;
    return c;
}

ExperimentConfig preset_reference() {
    ExperimentConfig c;
    c.eps2 = 0.01;
    c.backend = DomainKind::BoundedNeumann;
    c.t_final = 0.25;
    c.snapshot_times = {0.01, 0.03, 0.05, 0.08, 0.15, 0.25};
    c.left = -2.0;
    c.right = 2.0;
    c.h = 1.0 / 400.0;
    c.xi0 = 0.0;
    c.segments = {{-2.0, 0.0, 2.0, -0.6}, {0.0, 2.0, 7.0, 1.4}};
    c.decompose_times = {0.05, 0.1, 0.15, 0.2, 0.25};
    c.sweep_eps2 = {0.01, 0.005, 0.0025};
    c.kc_eps = 0.1;
    c.kc_n_list = {4, 16, 64, 256, 1024};
    c.a1_n_list = {1, 10, 100, 1000};
    return c;
}

namespace {

using Tree = boost::property_tree::ptree;

const std::map<std::string, std::set<std::string>>& known_keys() {
    static const std::map<std::string, std::set<std::string>> keys{
        {"experiment", {"eps2", "backend", "T_final", "snapshot_times", "strict", "seed"}},
        {"domain", {"left", "right", "h"}},
        {"init", {"xi0"}},
        {"tolerances", {"root", "admissibility", "quadrature"}},
        {"decompose", {"times"}},
        {"sweep", {"eps2_list", "gamma", "holder_pairs", "compare_time", "split_time", "stefan_time"}},
        {"kernelcheck", {"eps", "n_list", "a1_n_list"}},
    };
    return keys;
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
    Tree tree;
    try {
        std::istringstream in(text);
        boost::property_tree::ini_parser::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw ConfigError("", std::string("malformed config: ") + e.message() + " (line " +
                                  std::to_string(e.line()) + ")");
    }
    ExperimentConfig c;
    std::map<int, Segment> segs;
    for (const auto& [section, body] : tree) {
        const auto sec = known_keys().find(section);
        if (sec == known_keys().end()) {
            throw ConfigError(section, "unknown section");
        }
        if (body.empty() && !body.data().empty()) {
            throw ConfigError(section, "key outside any section");
        }
        for (const auto& [name, node] : body) {
            const std::string key = section + "." + name;
            const std::string v = node.data();
            if (section == "init" && name.rfind("segment", 0) == 0) {
                const long long idx = to_integer(key, name.substr(7));
                const auto parts = split(v, ' ');
                if (parts.size() != 4) {
                    throw ConfigError(key, "expected 'from to slope intercept'");
                }
                segs[static_cast<int>(idx)] = Segment{to_double(key, parts[0]), to_double(key, parts[1]),
                                                      to_double(key, parts[2]), to_double(key, parts[3])};
                continue;
            }
            if (!sec->second.count(name)) throw ConfigError(key, "unknown key");
            if (key == "experiment.eps2") c.eps2 = to_double(key, v);
            else if (key == "experiment.backend") {
                try {
                    c.backend = domain_kind_from_string(trim(v));
                } catch (const std::invalid_argument& e) {
                    throw ConfigError(key, e.what());
                }
            } else if (key == "experiment.T_final") c.t_final = to_double(key, v);
            else if (key == "experiment.snapshot_times") c.snapshot_times = to_doubles(key, v);
            else if (key == "experiment.strict") c.strict = to_bool(key, v);
            else if (key == "experiment.seed") c.seed = static_cast<std::uint64_t>(to_integer(key, v));
            else if (key == "domain.left") c.left = to_double(key, v);
            else if (key == "domain.right") c.right = to_double(key, v);
            else if (key == "domain.h") c.h = to_double(key, v);
            else if (key == "init.xi0") c.xi0 = to_double(key, v);
            else if (key == "tolerances.root") c.tol.root = to_double(key, v);
            else if (key == "tolerances.admissibility") c.tol.admissibility = to_double(key, v);
            else if (key == "tolerances.quadrature") c.tol.quadrature = to_double(key, v);
            else if (key == "decompose.times") c.decompose_times = to_doubles(key, v);
            else if (key == "sweep.eps2_list") c.sweep_eps2 = to_doubles(key, v);
            else if (key == "sweep.gamma") c.gamma = to_double(key, v);
            else if (key == "sweep.holder_pairs") c.holder_pairs = static_cast<int>(to_integer(key, v));
            else if (key == "sweep.compare_time") c.compare_time = to_double(key, v);
            else if (key == "sweep.split_time") c.split_time = to_double(key, v);
            else if (key == "sweep.stefan_time") c.stefan_time = to_double(key, v);
            else if (key == "kernelcheck.eps") c.kc_eps = to_double(key, v);
            else if (key == "kernelcheck.n_list") c.kc_n_list = to_ints(key, v);
            else if (key == "kernelcheck.a1_n_list") c.a1_n_list = to_ints(key, v);
        }
    }
    int expect = 1;
    for (const auto& [idx, seg] : segs) {
        if (idx != expect) {
            throw ConfigError("init.segment" + std::to_string(expect), "segments must be numbered 1, 2, ...");
        }
        c.segments.push_back(seg);
        ++expect;
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("", "cannot read config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "[experiment]\n"
        << "eps2 = " << fmt(c.eps2) << "\n"
        << "backend = " << to_string(c.backend) << "\n"
        << "T_final = " << fmt(c.t_final) << "\n"
        << "snapshot_times = " << join(c.snapshot_times) << "\n"
        << "strict = " << (c.strict ? "true" : "false") << "\n"
        << "seed = " << c.seed << "\n\n"
        << "[domain]\n"
        << "left = " << fmt(c.left) << "\n"
        << "right = " << fmt(c.right) << "\n"
        << "h = " << fmt(c.h) << "\n\n"
        << "[init]\n"
        << "xi0 = " << fmt(c.xi0) << "\n";
    for (std::size_t i = 0; i < c.segments.size(); ++i) {
        const auto& s = c.segments[i];
        out << "segment" << i + 1 << " = " << fmt(s.from) << " " << fmt(s.to) << " " << fmt(s.slope)
            << " " << fmt(s.intercept) << "\n";
    }
    out << "\n[tolerances]\n"
        << "root = " << fmt(c.tol.root) << "\n"
        << "admissibility = " << fmt(c.tol.admissibility) << "\n"
        << "quadrature = " << fmt(c.tol.quadrature) << "\n\n"
        << "[decompose]\n"
        << "times = " << join(c.decompose_times) << "\n\n"
        << "[sweep]\n"
        << "eps2_list = " << join(c.sweep_eps2) << "\n"
        << "gamma = " << fmt(c.gamma) << "\n"
        << "holder_pairs = " << c.holder_pairs << "\n"
        << "compare_time = " << fmt(c.compare_time) << "\n"
        << "split_time = " << fmt(c.split_time) << "\n"
        << "stefan_time = " << fmt(c.stefan_time) << "\n\n"
        << "[kernelcheck]\n"
        << "eps = " << fmt(c.kc_eps) << "\n"
        << "n_list = " << join(c.kc_n_list) << "\n"
        << "a1_n_list = " << join(c.a1_n_list) << "\n";
    return out.str();
}

}  // namespace fbd

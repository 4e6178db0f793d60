#include <doctest.h>

#include <fstream>
#include <sstream>

#include "fbd/config.hpp"

using namespace fbd;

namespace {

std::string read(const std::string& path) {
    std::ifstream in(path);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string key_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.key();
    }
    return "(accepted)";
}

const char* kMinimal = R"(
[experiment]
eps2 = 0.01
T_final = 0.1
[domain]
left = -1
right = 1
h = 0.01
[init]
xi0 = 0
segment1 = -1 0 0 -1
segment2 = 0 1 0 1
)";

}  // namespace

TEST_CASE("preset data") {
    const ExperimentConfig p = preset_reference();
    CHECK(p.backend == DomainKind::BoundedNeumann);
    CHECK(p.eps2 == 0.01);
    CHECK(p.h == 0.0025);
    CHECK(p.snapshot_times.size() == 6);
    const auto u = p.u_ini();
    CHECK(u(0.0) == doctest::Approx(-0.6));
    CHECK(u(1e-12) == doctest::Approx(1.4));
    CHECK(u(1.0) - u(0.5) == doctest::Approx(3.5));  // slope 7 right of the interface
    CHECK(p.p_ini()(0.0) == doctest::Approx(0.4));
    CHECK(p.p_ini().max_value_jump() == doctest::Approx(0.0));
    CHECK(p.p_ini().second_derivative_mass() == doctest::Approx(5.0));
    CHECK_NOTHROW(p.validate());
}

TEST_CASE("shipped reference file equals the preset") {
    CHECK(load_config(FBD_CONFIG_DIR "/reference.ini") == preset_reference());
    const ExperimentConfig wl = load_config(FBD_CONFIG_DIR "/whole_line.ini");
    CHECK(wl.backend == DomainKind::WholeLine);
    CHECK(wl.with_eps2(0.01) == wl);
}

TEST_CASE("parse -> serialize -> parse is the identity") {
    for (const ExperimentConfig& cfg : {preset_reference(), parse_config(kMinimal),
                                        load_config(FBD_CONFIG_DIR "/standing.ini")}) {
        const std::string text = serialize_config(cfg);
        const ExperimentConfig back = parse_config(text);
        CHECK(back == cfg);
        CHECK(serialize_config(back) == text);
    }
}

TEST_CASE("defaults fill optional sections") {
    const ExperimentConfig c = parse_config(kMinimal);
    CHECK(c.backend == DomainKind::BoundedNeumann);
    CHECK(c.gamma == 0.25);
    CHECK(c.segments.size() == 2);
    CHECK(c.root_tol() == doctest::Approx(2e-12));
    CHECK(c.admissibility_tol() == doctest::Approx(10.0 * 0.01 * 0.01));
}

TEST_CASE("errors name the offending key") {
    const std::string base = kMinimal;
    CHECK(key_of(base) == "(accepted)");
    std::string unknown = base;
    unknown.replace(unknown.find("h = 0.01"), 8, "h = 0.01\nfoo = 1");
    CHECK(key_of(unknown) == "domain.foo");
    CHECK(key_of("[experiment]\neps2 = -1\nT_final = 1\n" + base.substr(base.find("[domain]"))) == "experiment.eps2");
    CHECK(key_of("[experiment]\neps2 = 0.5\nT_final = 0.1\n" + base.substr(base.find("[domain]"))) == "experiment.eps2");
    CHECK(key_of(base + "[sweep]\ngamma = 0.5\n") == "sweep.gamma");
    CHECK(key_of(base + "[nonsense]\nx = 1\n") == "nonsense");
    std::string gap = base;
    gap.replace(gap.find("segment2 = 0 1"), 14, "segment2 = 0.5 1");
    CHECK(key_of(gap) == "init.segment2");
    std::string skip = base;
    skip.replace(skip.find("segment2"), 8, "segment3");
    CHECK(key_of(skip) == "init.segment2");
    std::string outside = base;
    outside.replace(outside.find("xi0 = 0"), 7, "xi0 = 3");
    CHECK(key_of(outside) == "init.xi0");
    std::string coarse = base;
    coarse.replace(coarse.find("h = 0.01"), 8, "h = 0.05");
    CHECK(key_of(coarse) == "domain.h");
    std::string backend = base;
    backend.replace(backend.find("eps2 = 0.01"), 11, "eps2 = 0.01\nbackend = spectral");
    CHECK(key_of(backend) == "experiment.backend");
    CHECK_THROWS_AS(load_config("/nonexistent/file.ini"), ConfigError);
}

TEST_CASE("changing the time step keeps everything else") {
    const ExperimentConfig p = preset_reference();
    const ExperimentConfig q = p.with_eps2(0.0025);
    CHECK(q.eps2 == 0.0025);
    CHECK(q.h == p.h);
    CHECK(q.segments == p.segments);
    CHECK(read(FBD_CONFIG_DIR "/reference.ini").find("fd-neumann") != std::string::npos);
}

#include "fbd/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "fbd/analysis.hpp"
#include "fbd/io.hpp"
#include "fbd/sweep.hpp"

namespace fbd {

namespace {

std::string path_in(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

std::string indexed(const std::string& stem, int n, const std::string& ext) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%05d.%s", stem.c_str(), n, ext.c_str());
    return buf;
}

Json admissibility_json(const AdmissibilityReport& rep) {
    static const char* names[] = {"regularity", "jump", "sign_bounds", "majorant"};
    Json j;
    j["pass"] = rep.pass();
    j["tol"] = rep.tol;
    for (int i = 0; i < 4; ++i) {
        const auto& c = rep.conditions[i];
        j[names[i]] = {{"pass", c.pass}, {"violation", number(c.violation)}, {"where", number(c.where)}};
    }
    return j;
}

Json config_summary(const ExperimentConfig& cfg) {
    return {{"eps2", cfg.eps2},
            {"backend", std::string(to_string(cfg.backend))},
            {"t_final", cfg.t_final},
            {"left", cfg.left},
            {"right", cfg.right},
            {"h", cfg.h},
            {"xi0", cfg.xi0},
            {"seed", cfg.seed}};
}

void prepare(const std::string& out_dir) { std::filesystem::create_directories(out_dir); }

}  // namespace

int cmd_simulate(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log) {
    try {
        prepare(out_dir);
        const SimState init = cfg.initial_state();
        const AdmissibilityReport adm = check_admissible(init, cfg.admissibility_tol());
        Json diag;
        diag["config"] = config_summary(cfg);
        diag["alpha"] = cfg.alpha();
        diag["admissibility"] = admissibility_json(adm);
        if (!adm.pass()) {
            log << "initial state is not admissible: " << adm.summary() << "\n";
            if (cfg.strict) {
                diag["status"] = "rejected";
                write_json(path_in(out_dir, "diagnostics.json"), diag);
                return kExitStrict;
            }
        }

        RunOptions ro;
        ro.step.root_tol = cfg.root_tol();
        const Epsilon eps = cfg.eps();
        const Trajectory traj = run(init, eps, cfg.t_final, cfg.snapshot_times, ro);
        write_csv(path_in(out_dir, "interface.csv"), interface_table(traj));

        Json snaps = Json::array();
        for (const auto& [n, u] : traj.snapshots) {
            const double t = n * traj.dt;
            const SimState s{u, u.tracked()->pos, n, init.alpha, traj.steps[n].mode};
            const ProfileFn p = to_p(s, 1e-6);
            CsvTable table;
            table.comments = {"t=" + format_double(t)};
            table.columns = {"x", "u", "p"};
            for (std::size_t j = 0; j < u.domain().size(); ++j) {
                table.rows.push_back({u.domain().x(j), u.samples()[j], p.samples()[j]});
            }
            write_csv(path_in(out_dir, indexed("snapshot", n, "csv")), table);
            Json side = profile_sidecar(u, init.alpha);
            side["t"] = t;
            write_json(path_in(out_dir, indexed("snapshot", n, "json")), side);
            snaps.push_back({{"n", n}, {"t", t}});
        }

        double jump_error = 0.0;
        double speed = 0.0;
        for (std::size_t i = 0; i < traj.steps.size(); ++i) {
            jump_error = std::max(jump_error, std::abs(traj.steps[i].jump - 2.0));
            if (i > 0) speed = std::max(speed, traj.steps[i - 1].xi - traj.steps[i].xi);
        }
        const auto viol = flow_rule_check(traj, flow_tolerance(cfg));
        diag["status"] = traj.error ? "solver-error" : "ok";
        diag["error"] = traj.error ? Json(*traj.error) : Json(nullptr);
        diag["steps"] = static_cast<int>(traj.steps.size()) - 1;
        diag["depinning_time"] = number(depinning_time(traj));
        diag["final_xi"] = traj.steps.back().xi;
        diag["max_jump_error"] = jump_error;
        diag["max_shift"] = speed;
        diag["shift_bound"] = 0.5 * init.alpha * traj.dt;
        diag["flow_rule_violations"] = viol.size();
        diag["snapshots"] = snaps;
        write_json(path_in(out_dir, "diagnostics.json"), diag);
        if (traj.error) {
            log << "solver error: " << *traj.error << "\n";
            return kExitSolver;
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        log << "solver error: " << e.what() << "\n";
        return kExitSolver;
    }
}

int cmd_decompose(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log) {
    try {
        prepare(out_dir);
        const double dt = cfg.eps2;
        ExperimentOptions opts;
        opts.keep_all_states = false;
        for (double t : cfg.decompose_times) {
            if (t < 0.0 || t > cfg.t_final * (1.0 + 1e-12)) {
                throw ConfigError("decompose.times", "time outside [0, t_final]");
            }
            opts.ledger_frames.insert(snap_index(t, dt));
        }
        const Experiment ex = run_experiment(cfg, opts);
        const auto& xis = ex.ledger.xi_history();
        for (double t : cfg.decompose_times) {
            const int n = snap_index(t, dt);
            const auto it = ex.ledger.frames().find(n);
            if (it == ex.ledger.frames().end()) {
                log << "no frame for t = " << t << " (run stopped early)\n";
                continue;
            }
            const LedgerFrame& fr = it->second;
            // stages 3 and 4 vanish exactly at t^n, so split inside the step
            // when the next interface position is known
            const bool inside = static_cast<std::size_t>(n + 1) < xis.size();
            const double ts = inside ? mid_step_time(n * dt, dt) : n * dt;
            const FluctuationSplit split = split_fluctuations(ex.ledger, ts);
            const std::string head = "t=" + format_double(n * dt) + " split_t=" + format_double(ts);

            CsvTable dec;
            dec.comments = {head};
            dec.columns = {"x", "p", "q", "f", "f_ess4", "f_neg_total"};
            CsvTable sp;
            sp.comments = {head};
            sp.columns = {"x", "f", "f_ess1", "f_ess2", "f_ess3", "f_ess4",
                          "f_neg1", "f_neg2", "f_neg3", "f_neg4"};
            const Domain& grid = fr.p.domain();
            for (std::size_t j = 0; j < grid.size(); ++j) {
                double neg = 0.0;
                for (const auto& g : split.neg) neg += g.samples()[j];
                dec.rows.push_back({grid.x(j), fr.p.samples()[j], fr.q.samples()[j], fr.f.samples()[j],
                                    split.ess[3].samples()[j], neg});
                std::vector<double> row{grid.x(j), split.f.samples()[j]};
                for (const auto& g : split.ess) row.push_back(g.samples()[j]);
                for (const auto& g : split.neg) row.push_back(g.samples()[j]);
                sp.rows.push_back(std::move(row));
            }
            write_csv(path_in(out_dir, indexed("decomposition", n, "csv")), dec);
            write_csv(path_in(out_dir, indexed("split", n, "csv")), sp);
        }
        if (ex.traj.error) {
            log << "solver error: " << *ex.traj.error << "\n";
            return kExitSolver;
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        log << "solver error: " << e.what() << "\n";
        return kExitSolver;
    }
}

int cmd_sweep(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log) {
    if (cfg.sweep_eps2.size() < 3) {
        log << "config error: sweep.eps2: at least three values are needed to estimate rates\n";
        return kExitConfig;
    }
    if (!(cfg.gamma > 0.0 && cfg.gamma < 0.5)) {
        log << "config error: sweep.gamma: must lie in (0, 1/2)\n";
        return kExitConfig;
    }
    try {
        prepare(out_dir);
        const DiagnosticsReport rep = converge_sweep(cfg);
        write_json(path_in(out_dir, "sweep.json"), to_json(rep));
        write_text(path_in(out_dir, "sweep.txt"), to_text(rep));

        CsvTable members;
        members.columns = {"eps2", "eps", "depinning_time", "q_error", "stefan_moving", "neg1", "neg2",
                           "neg3", "neg4", "ess4_sup", "holder_time", "holder_space", "failed"};
        for (const auto& m : rep.members) {
            members.rows.push_back({m.eps2, m.eps, m.depinning_time, m.q_error, m.stefan_moving,
                                    m.neg_sup[0], m.neg_sup[1], m.neg_sup[2], m.neg_sup[3], m.ess4_sup,
                                    m.holder.time, m.holder.space, m.error ? 1.0 : 0.0});
        }
        write_csv(path_in(out_dir, "sweep_members.csv"), members);

        if (!rep.failed()) {
            CsvTable rates;
            rates.comments = {"orders: log(e_i/e_{i+1})/log(eps_i/eps_{i+1}); factors: e_i/e_{i+1}"};
            rates.columns = {"eps_coarse", "eps_fine", "xi_distance", "p_distance", "q_order",
                             "stefan_order", "neg1_factor", "neg2_factor", "neg3_factor", "neg4_factor"};
            for (std::size_t i = 0; i + 1 < rep.members.size(); ++i) {
                rates.rows.push_back({rep.members[i].eps, rep.members[i + 1].eps, rep.xi_distance[i],
                                      rep.p_distance[i], rep.q_orders[i], rep.stefan_orders[i],
                                      rep.neg_factors[0][i], rep.neg_factors[1][i], rep.neg_factors[2][i],
                                      rep.neg_factors[3][i]});
            }
            write_csv(path_in(out_dir, "sweep_rates.csv"), rates);
        }
        if (rep.failed()) {
            for (const auto& m : rep.members) {
                if (m.error) log << "member eps2 = " << m.eps2 << " failed: " << *m.error << "\n";
            }
            return kExitSweepMember;
        }
        return kExitOk;
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        log << "solver error: " << e.what() << "\n";
        return kExitSolver;
    }
}

int cmd_kernelcheck(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log) {
    try {
        prepare(out_dir);
        const auto gaps = kernel_gap_study(Epsilon(cfg.kc_eps), cfg.kc_n_list, cfg.p_ini());
        CsvTable g;
        g.comments = {"eps=" + format_double(cfg.kc_eps),
                      "normalized = eps n^(3/2) sup_gap; data_normalized = sqrt(n)/eps data_gap"};
        g.columns = {"n", "sup_gap", "normalized", "data_gap", "data_normalized"};
        for (const auto& r : gaps) {
            g.rows.push_back({static_cast<double>(r.n), r.sup_gap, r.normalized, r.data_gap, r.data_normalized});
        }
        write_csv(path_in(out_dir, "kernel_gap.csv"), g);

        const auto a1 = lemma_a1_integrals(cfg.a1_n_list);
        CsvTable a;
        a.comments = {"B_n(s) = n |(1 + s^2/n)^(-n) - exp(-s^2)|"};
        a.columns = {"n", "int_B", "int_B_over_s2"};
        for (const auto& r : a1) a.rows.push_back({static_cast<double>(r.n), r.int_b, r.int_b_s2});
        write_csv(path_in(out_dir, "bn_integrals.csv"), a);
        return kExitOk;
    } catch (const ConfigError& e) {
        log << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        log << "error: " << e.what() << "\n";
        return kExitSolver;
    }
}

}  // namespace fbd

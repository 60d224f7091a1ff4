#pragma once

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "zrsim/zrsim.hpp"

namespace zrsim::cli {

using nlohmann::json;

// Numbers rounded to 9 significant digits before JSON emission so every
// output format agrees byte-for-byte across runs.
inline json jnum(double v) { return json(std::strtod(fmt_g9(v).c_str(), nullptr)); }

struct CommonOpts {
  double p = 0.35, c = 4.0, t1 = 3.0, t2 = 3.0, a1 = 1.0, a2 = 1.0;
  std::string utility = "log";
  std::string format = "human";
  std::string out_path;

  ModelParams params() const {
    ModelParams pr;
    pr.p = p;
    pr.c = c;
    pr.t1 = t1;
    pr.t2 = t2;
    pr.a1 = a1;
    pr.a2 = a2;
    if (utility == "custom") {
      // Routes the log utility through the numeric custom-psi path; useful
      // for cross-checking the solver against the closed forms.
      pr.utility = Utility::custom(
          [](double z) { return std::log1p(z); },
          [](double z) { return 1.0 / (1.0 + z); }, c);
    }
    pr.validate();
    return pr;
  }
};

namespace detail {

struct OutputSink {
  std::ostream* os;
  std::unique_ptr<std::ofstream> file;
};

inline OutputSink open_sink(const CommonOpts& g, std::ostream& fallback) {
  OutputSink sink{&fallback, nullptr};
  if (!g.out_path.empty()) {
    sink.file = std::make_unique<std::ofstream>(g.out_path);
    if (!*sink.file) throw IoError("cannot open output file: " + g.out_path);
    sink.os = sink.file.get();
  }
  return sink;
}

inline void kv(std::ostream& os, const std::string& key, const std::string& v) {
  os << key;
  for (size_t i = key.size(); i < 18; ++i) os << ' ';
  os << v << '\n';
}

inline void kv(std::ostream& os, const std::string& key, double v) {
  kv(os, key, fmt_g9(v));
}

inline Config parse_config_flag(const std::string& s) {
  if (auto m = config_from_string(s)) return *m;
  throw InvalidParameter("configuration must be one of NN, SN, NS, SS");
}

inline void emit_state(std::ostream& os, const SystemState& st) {
  kv(os, "q1", st.q1);
  kv(os, "m1", to_string(st.m1));
  kv(os, "q2", st.q2);
  kv(os, "m2", to_string(st.m2));
  kv(os, "x", st.x);
  kv(os, "isp1", st.isp1);
  kv(os, "isp2", st.isp2);
  kv(os, "cp1", st.cp1);
  kv(os, "cp2", st.cp2);
  kv(os, "users", st.users);
}

inline json state_json(const SystemState& st) {
  return json{{"q1", jnum(st.q1)},     {"m1", to_string(st.m1)},
              {"q2", jnum(st.q2)},     {"m2", to_string(st.m2)},
              {"x", jnum(st.x)},       {"isp1", jnum(st.isp1)},
              {"isp2", jnum(st.isp2)}, {"cp1", jnum(st.cp1)},
              {"cp2", jnum(st.cp2)},   {"users", jnum(st.users)}};
}

}  // namespace detail

// Command-line front end; returns the process exit code. Exit 0 on success,
// 2 on flag/model validation failure, 1 on I/O failure.
inline int run(std::vector<std::string> args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"zero-rating duopoly equilibrium engine"};
  app.fallthrough();
  app.require_subcommand(0, 1);
  app.set_config("--config-file", "",
                 "key-value config file; flags override file values");

  CommonOpts g;
  app.add_option("--p", g.p, "user price per unit data")->capture_default_str();
  app.add_option("--c", g.c, "capacity to consume per billing cycle")
      ->capture_default_str();
  app.add_option("--t1", g.t1, "transport cost of ISP1")->capture_default_str();
  app.add_option("--t2", g.t2, "transport cost of ISP2")->capture_default_str();
  app.add_option("--a1", g.a1, "CP1 revenue rate")->capture_default_str();
  app.add_option("--a2", g.a2, "CP2 revenue rate")->capture_default_str();
  app.add_option("--utility", g.utility, "utility function")
      ->check(CLI::IsMember({"log", "custom"}))
      ->capture_default_str();
  app.add_option("--format", g.format, "output format")
      ->check(CLI::IsMember({"human", "csv", "json-lines"}))
      ->capture_default_str();
  app.add_option("--out", g.out_path, "write output to this path");

  // solve-user
  auto* solve_cmd = app.add_subcommand(
      "solve-user", "solve the subscriber consumption problem");
  std::string solve_config = "NN";
  solve_cmd->add_option("--config", solve_config, "sponsorship configuration")
      ->required()
      ->check(CLI::IsMember({"NN", "SN", "NS", "SS"}));

  // best-response
  auto* br_cmd = app.add_subcommand(
      "best-response", "one ISP's best response to the rival's state");
  double br_q_other = 0.0;
  std::string br_m_other = "NN";
  int br_isp = 1;
  br_cmd->add_option("--q-other", br_q_other, "rival's sponsorship charge")
      ->capture_default_str();
  br_cmd->add_option("--m-other", br_m_other, "rival's configuration")
      ->check(CLI::IsMember({"NN", "SN", "NS", "SS"}))
      ->capture_default_str();
  br_cmd->add_option("--isp", br_isp, "responding ISP")
      ->check(CLI::IsMember({1, 2}))
      ->capture_default_str();

  // dynamics
  auto* dyn_cmd = app.add_subcommand(
      "dynamics", "alternating best-response dynamics, ISP1 first");
  std::string dyn_m2 = "NN";
  double dyn_q2 = 0.0;
  int dyn_max_rounds = 100;
  dyn_cmd->add_option("--initial-m2", dyn_m2, "ISP2's starting configuration")
      ->check(CLI::IsMember({"NN", "SN", "NS", "SS"}))
      ->capture_default_str();
  auto* dyn_q2_opt =
      dyn_cmd->add_option("--initial-q2", dyn_q2, "ISP2's starting charge");
  dyn_cmd->add_option("--max-rounds", dyn_max_rounds, "round limit")
      ->capture_default_str();

  // verify
  auto* verify_cmd = app.add_subcommand(
      "verify", "check a state against the system-equilibrium conditions");
  double v_q1 = 0.0, v_q2 = 0.0;
  std::string v_m1 = "NN", v_m2 = "NN";
  verify_cmd->add_option("--q1", v_q1)->required();
  verify_cmd->add_option("--m1", v_m1)
      ->required()
      ->check(CLI::IsMember({"NN", "SN", "NS", "SS"}));
  verify_cmd->add_option("--q2", v_q2)->required();
  verify_cmd->add_option("--m2", v_m2)
      ->required()
      ->check(CLI::IsMember({"NN", "SN", "NS", "SS"}));

  // thresholds
  auto* thr_cmd = app.add_subcommand(
      "thresholds", "sponsorship threshold along the (a, rho a) ray");
  double thr_rho = 0.1, thr_q_other = 0.0, thr_a_max = 1000.0;
  std::string thr_m_other = "NN";
  thr_cmd->add_option("--rho", thr_rho, "CP2/CP1 revenue-rate ratio")
      ->required();
  thr_cmd->add_option("--m-other", thr_m_other, "rival's configuration")
      ->check(CLI::IsMember({"NN", "SN", "NS", "SS"}))
      ->capture_default_str();
  thr_cmd->add_option("--q-other", thr_q_other, "rival's charge")
      ->capture_default_str();
  thr_cmd->add_option("--a-max", thr_a_max, "search limit in a")
      ->capture_default_str();

  // sweeps
  auto* map_cmd = app.add_subcommand(
      "sweep-map", "limiting-configuration map over the a1 x a2 grid");
  GridSpec map_a1, map_a2;
  int map_max_rounds = 100;
  int map_grid = 60;
  bool map_monopoly = false;
  map_cmd->add_option("--a1-min", map_a1.lo, "a1 lower edge (exclusive)")
      ->capture_default_str();
  map_cmd->add_option("--a1-max", map_a1.hi, "a1 upper edge")
      ->capture_default_str();
  auto* map_a1_steps_opt =
      map_cmd->add_option("--a1-steps", map_a1.steps)->capture_default_str();
  map_cmd->add_option("--a2-min", map_a2.lo, "a2 lower edge (exclusive)")
      ->capture_default_str();
  map_cmd->add_option("--a2-max", map_a2.hi, "a2 upper edge")
      ->capture_default_str();
  auto* map_a2_steps_opt =
      map_cmd->add_option("--a2-steps", map_a2.steps)->capture_default_str();
  auto* map_grid_opt =
      map_cmd->add_option("--grid", map_grid, "steps for both axes");
  map_cmd->add_option("--max-rounds", map_max_rounds)->capture_default_str();
  map_cmd->add_flag("--monopoly", map_monopoly,
                    "fixed-share monopoly benchmark instead of the duopoly");

  auto* ray_cmd = app.add_subcommand(
      "sweep-ray", "surpluses along (a, rho a) with benchmarks");
  GridSpec ray_a{0.0, 10.0, 200};
  double ray_rho = 0.1;
  int ray_max_rounds = 100;
  ray_cmd->add_option("--rho", ray_rho)->required();
  ray_cmd->add_option("--a-min", ray_a.lo, "a lower edge (exclusive)")
      ->capture_default_str();
  ray_cmd->add_option("--a-max", ray_a.hi, "a upper edge")
      ->capture_default_str();
  auto* ray_steps_opt =
      ray_cmd->add_option("--a-steps", ray_a.steps)->capture_default_str();
  ray_cmd->add_option("--grid", ray_a.steps, "alias for --a-steps")
      ->excludes(ray_steps_opt);
  ray_cmd->add_option("--max-rounds", ray_max_rounds)->capture_default_str();

  auto* single_cmd = app.add_subcommand(
      "sweep-single-isp", "ISP1's best response with ISP2 pinned at NN");
  GridSpec single_a{0.0, 10.0, 200};
  double single_rho = 0.7;
  single_cmd->add_option("--rho", single_rho)->required();
  single_cmd->add_option("--a-min", single_a.lo)->capture_default_str();
  single_cmd->add_option("--a-max", single_a.hi)->capture_default_str();
  auto* single_steps_opt =
      single_cmd->add_option("--a-steps", single_a.steps)->capture_default_str();
  single_cmd->add_option("--grid", single_a.steps, "alias for --a-steps")
      ->excludes(single_steps_opt);

  try {
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  try {
    const auto sink = detail::open_sink(g, out);
    std::ostream& os = *sink.os;
    const bool as_csv = g.format == "csv";
    const bool as_json = g.format == "json-lines";

    if (*solve_cmd) {
      const auto pr = g.params();
      const Config m = detail::parse_config_flag(solve_config);
      const auto prof = solve_consumption(pr, m);
      if (as_csv) {
        os << "config,theta1,theta2,u\n"
           << to_string(m) << ',' << fmt_g9(prof.theta1) << ','
           << fmt_g9(prof.theta2) << ',' << fmt_g9(prof.surplus) << '\n';
      } else if (as_json) {
        os << json{{"config", to_string(m)},
                   {"theta1", jnum(prof.theta1)},
                   {"theta2", jnum(prof.theta2)},
                   {"u", jnum(prof.surplus)}}
                  .dump()
           << '\n';
      } else {
        detail::kv(os, "config", to_string(m));
        detail::kv(os, "theta1", prof.theta1);
        detail::kv(os, "theta2", prof.theta2);
        detail::kv(os, "u", prof.surplus);
      }
      return 0;
    }

    if (*br_cmd) {
      const auto sc = Scenario::make(g.params());
      const Config m_other = detail::parse_config_flag(br_m_other);
      if (br_q_other < 0.0) throw InvalidParameter("--q-other must be >= 0");
      const auto br = best_response(sc, br_q_other, m_other, br_isp);
      if (as_csv) {
        os << "target,feasible,q,profit,chosen\n";
        for (Config m : kConfigs) {
          const auto& o = br.options[index(m)];
          os << to_string(m) << ',' << (o.feasible ? "yes" : "no") << ','
             << fmt_g9(o.q) << ',' << fmt_g9(o.profit) << ','
             << (m == br.config ? "yes" : "no") << '\n';
        }
      } else if (as_json) {
        json opts = json::object();
        for (Config m : kConfigs) {
          const auto& o = br.options[index(m)];
          opts[to_string(m)] = json{{"feasible", o.feasible},
                                    {"q", jnum(o.q)},
                                    {"profit", jnum(o.profit)}};
        }
        os << json{{"isp", br_isp},
                   {"m_other", to_string(m_other)},
                   {"q_other", jnum(br_q_other)},
                   {"config", to_string(br.config)},
                   {"q", jnum(br.q)},
                   {"profit", jnum(br.profit)},
                   {"options", opts}}
                  .dump()
           << '\n';
      } else {
        detail::kv(os, "isp", std::to_string(br_isp));
        detail::kv(os, "m_other", to_string(m_other));
        detail::kv(os, "q_other", br_q_other);
        detail::kv(os, "config", to_string(br.config));
        detail::kv(os, "q", br.q);
        detail::kv(os, "profit", br.profit);
        for (Config m : kConfigs) {
          const auto& o = br.options[index(m)];
          detail::kv(os, std::string("option ") + to_string(m),
                     std::string(o.feasible ? "q=" : "infeasible q=") +
                         fmt_g9(o.q) + " profit=" + fmt_g9(o.profit));
        }
      }
      return 0;
    }

    if (*dyn_cmd) {
      const auto sc = Scenario::make(g.params());
      std::optional<double> q2;
      if (dyn_q2_opt->count() > 0) q2 = dyn_q2;
      const auto outp = run_dynamics(sc, detail::parse_config_flag(dyn_m2), q2,
                                     dyn_max_rounds);
      if (as_csv) {
        os << "round,q1,m1,q2,m2,x,isp1,isp2,cp1,cp2,users\n";
        for (size_t i = 0; i < outp.history.size(); ++i) {
          const auto& st = outp.history[i];
          os << (i + 1) << ',' << fmt_g9(st.q1) << ',' << to_string(st.m1)
             << ',' << fmt_g9(st.q2) << ',' << to_string(st.m2) << ','
             << fmt_g9(st.x) << ',' << fmt_g9(st.isp1) << ','
             << fmt_g9(st.isp2) << ',' << fmt_g9(st.cp1) << ','
             << fmt_g9(st.cp2) << ',' << fmt_g9(st.users) << '\n';
        }
      } else if (as_json) {
        for (size_t i = 0; i < outp.history.size(); ++i) {
          json j = detail::state_json(outp.history[i]);
          j["round"] = int(i + 1);
          os << j.dump() << '\n';
        }
        os << json{{"outcome", to_string(outp.kind)},
                   {"rounds", outp.rounds},
                   {"period", outp.period}}
                  .dump()
           << '\n';
      } else {
        detail::kv(os, "outcome", to_string(outp.kind));
        detail::kv(os, "rounds", std::to_string(outp.rounds));
        if (outp.kind == DynamicsKind::Oscillating)
          detail::kv(os, "period", std::to_string(outp.period));
        detail::emit_state(os, outp.final_state);
      }
      return 0;
    }

    if (*verify_cmd) {
      const auto sc = Scenario::make(g.params());
      if (v_q1 < 0.0 || v_q2 < 0.0)
        throw InvalidParameter("charges must be >= 0");
      const auto st =
          make_system_state(sc, v_q1, detail::parse_config_flag(v_m1), v_q2,
                            detail::parse_config_flag(v_m2));
      const auto rep = verify_system_equilibrium(sc, st);
      auto pass = [](bool b) { return b ? "pass" : "FAIL"; };
      if (as_csv) {
        os << "check,entity,result\n";
        for (int j = 0; j < 2; ++j)
          os << "isp-best-response,ISP" << (j + 1) << ','
             << pass(rep.isp_best[j]) << '\n';
        for (int j = 0; j < 2; ++j)
          os << "cp-nash-equilibrium,ISP" << (j + 1) << ','
             << pass(rep.cp_equilibrium[j]) << '\n';
        for (int i = 0; i < 2; ++i)
          os << "cp-no-double-flip,CP" << (i + 1) << ','
             << pass(rep.cp_no_double_flip[i]) << '\n';
      } else if (as_json) {
        os << json{{"isp_best", {rep.isp_best[0], rep.isp_best[1]}},
                   {"cp_equilibrium",
                    {rep.cp_equilibrium[0], rep.cp_equilibrium[1]}},
                   {"cp_no_double_flip",
                    {rep.cp_no_double_flip[0], rep.cp_no_double_flip[1]}},
                   {"all", rep.all()}}
                  .dump()
           << '\n';
      } else {
        for (int j = 0; j < 2; ++j) {
          detail::kv(os, "isp" + std::to_string(j + 1) + " best-response",
                     std::string(pass(rep.isp_best[j])) +
                         (rep.isp_best[j]
                              ? ""
                              : "  (best: " +
                                    std::string(to_string(
                                        rep.responses[j].config)) +
                                    " at q=" + fmt_g9(rep.responses[j].q) +
                                    ")"));
        }
        for (int j = 0; j < 2; ++j)
          detail::kv(os, "m" + std::to_string(j + 1) + " CP-equilibrium",
                     pass(rep.cp_equilibrium[j]));
        for (int i = 0; i < 2; ++i)
          detail::kv(os, "cp" + std::to_string(i + 1) + " no-double-flip",
                     std::string(pass(rep.cp_no_double_flip[i])) +
                         (rep.cp_no_double_flip[i]
                              ? ""
                              : "  (gain " +
                                    fmt_g9(rep.double_flip_gain[i]) + ")"));
        detail::kv(os, "all", rep.all() ? "pass" : "FAIL");
      }
      return 0;
    }

    if (*thr_cmd) {
      const auto sc = Scenario::make(g.params());
      const auto rep =
          sponsorship_threshold(sc, thr_rho, detail::parse_config_flag(thr_m_other),
                                thr_q_other, thr_a_max);
      if (as_csv) {
        os << "a_s,branch,found,a_prime,a_double_prime,a_sn_sym,rho_sn_sym,"
              "rho_ss_sym\n"
           << fmt_g9(rep.a_s) << ',' << to_string(rep.branch) << ','
           << (rep.found ? "yes" : "no") << ',' << fmt_g9(rep.a_prime) << ','
           << fmt_g9(rep.a_double_prime) << ',' << fmt_g9(rep.a_sn_sym) << ','
           << fmt_g9(rep.rho_sn_sym) << ',' << fmt_g9(rep.rho_ss_sym) << '\n';
      } else if (as_json) {
        os << json{{"a_s", jnum(rep.a_s)},
                   {"branch", to_string(rep.branch)},
                   {"found", rep.found},
                   {"a_prime", jnum(rep.a_prime)},
                   {"a_double_prime", jnum(rep.a_double_prime)},
                   {"a_sn_sym", jnum(rep.a_sn_sym)},
                   {"rho_sn_sym", jnum(rep.rho_sn_sym)},
                   {"rho_ss_sym", jnum(rep.rho_ss_sym)}}
                  .dump()
           << '\n';
      } else {
        if (!rep.found)
          detail::kv(os, "a_s",
                     "no sponsorship below a_max=" + fmt_g9(rep.a_max));
        else
          detail::kv(os, "a_s", rep.a_s);
        detail::kv(os, "branch", to_string(rep.branch));
        detail::kv(os, "a_prime", rep.a_prime);
        detail::kv(os, "a_double_prime", rep.a_double_prime);
        detail::kv(os, "a_sn_sym", rep.a_sn_sym);
        detail::kv(os, "rho_sn_sym", rep.rho_sn_sym);
        detail::kv(os, "rho_ss_sym", rep.rho_ss_sym);
      }
      return 0;
    }

    if (*map_cmd) {
      SweepSpec spec;
      spec.base = g.params();
      if (map_grid_opt->count()) {
        if (!map_a1_steps_opt->count()) map_a1.steps = map_grid;
        if (!map_a2_steps_opt->count()) map_a2.steps = map_grid;
      }
      spec.a1 = map_a1;
      spec.a2 = map_a2;
      spec.max_rounds = map_max_rounds;
      const auto mode =
          map_monopoly
              ? MarketMode::monopoly(monopoly_benchmark_share(spec.base))
              : MarketMode::duopoly();
      const auto cells = sweep_region_map(spec, mode);
      if (as_json) {
        for (const auto& c : cells)
          os << json{{"a1", jnum(c.a1)},   {"a2", jnum(c.a2)},
                     {"label", c.label()}, {"rounds", c.rounds},
                     {"q1", jnum(c.q1)},   {"q2", jnum(c.q2)}}
                    .dump()
             << '\n';
      } else {
        write_region_csv(os, cells);
      }
      return 0;
    }

    auto emit_rows = [&](const std::vector<SurplusRow>& rows) {
      if (as_json) {
        for (const auto& r : rows)
          os << json{{"a", jnum(r.a)},
                     {"mode", r.mode},
                     {"config1", r.config1},
                     {"config2", r.config2},
                     {"q1", jnum(r.q1)},
                     {"q2", jnum(r.q2)},
                     {"x", jnum(r.x)},
                     {"isp1", jnum(r.isp1)},
                     {"isp2", jnum(r.isp2)},
                     {"cp1", jnum(r.cp1)},
                     {"cp2", jnum(r.cp2)},
                     {"users_with_transport", jnum(r.users_with_transport)},
                     {"users_without_transport",
                      jnum(r.users_without_transport)}}
                    .dump()
             << '\n';
      } else {
        write_ray_csv(os, rows);
      }
    };

    if (*ray_cmd) {
      SweepSpec spec;
      spec.base = g.params();
      spec.a = ray_a;
      spec.max_rounds = ray_max_rounds;
      emit_rows(sweep_surplus_ray(spec, ray_rho));
      return 0;
    }

    if (*single_cmd) {
      SweepSpec spec;
      spec.base = g.params();
      spec.a = single_a;
      emit_rows(sweep_single_isp(spec, single_rho));
      return 0;
    }

    err << "no command given; see --help\n";
    return 2;
  } catch (const InvalidParameter& e) {
    err << "invalid parameter: " << e.what() << '\n';
    return 2;
  } catch (const ModelDomainError& e) {
    err << "model domain error: " << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace zrsim::cli

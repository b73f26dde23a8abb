// Command-line front end: analyze | simulate | invade | sweep | verify.
//
// Exit codes: 0 success, 1 bad input or I/O failure, 2 domain verdict
// (assumptions violated / unclassified cycle / verification failure).

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "jungle/invasion.hpp"
#include "jungle/json_io.hpp"
#include "jungle/model.hpp"
#include "jungle/params.hpp"
#include "jungle/sampling.hpp"
#include "jungle/simulate.hpp"
#include "jungle/stability.hpp"

namespace {

using nlohmann::json;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open file: " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError("malformed JSON in " + path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open output file: " + path);
    out << content;
    if (!out) throw InputError("write failed: " + path);
}

void emit_json(const json& j, const std::string& out_path) {
    const std::string text = j.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
}

jungle::StateVec parse_ic(const std::string& spec) {
    jungle::StateVec s;
    std::stringstream ss(spec);
    std::string tok;
    int i = 0;
    while (std::getline(ss, tok, ',')) {
        if (i >= 4) throw InputError("--ic: expected four comma-separated values");
        try {
            size_t pos = 0;
            s[i] = std::stod(tok, &pos);
            if (pos != tok.size()) throw std::invalid_argument(tok);
        } catch (const std::exception&) {
            throw InputError("--ic: bad number \"" + tok + "\"");
        }
        ++i;
    }
    if (i != 4) throw InputError("--ic: expected four comma-separated values");
    if (!s.finite() || !s.nonnegative())
        throw InputError("--ic: coordinates must be finite and nonnegative");
    return s;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

int cmd_analyze(const std::string& params_path, const std::string& out_path) {
    const auto p = jungle::params_from_json(load_json_file(params_path));
    const auto analysis = jungle::analyze_stability(p);

    json config = {{"subcommand", "analyze"}, {"params", jungle::params_to_json(p)}};
    json report = jungle::analysis_to_json(analysis);
    report["config_hash"] = jungle::config_hash(config);
    emit_json(report, out_path);

    if (!analysis.standing_assumptions || !analysis.fully_classified()) {
        std::cerr << "analyze: classification incomplete";
        for (const auto& v : analysis.violations) std::cerr << "; " << v;
        std::cerr << "\n";
        return 2;
    }
    return 0;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateConfig {
    std::string params_path;
    std::string ic_spec = "0.1,0.1,1,0.1";
    double t_max = 3000.0;
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    double max_gap = 0.1;
    double eps_enter = jungle::kDefaultEnterEps;
    double eps_exit = jungle::kDefaultExitEps;
    double ext_threshold = 1e-8;
    double tail_fraction = 1.0 / 3.0;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
};

std::string cycle_arrow_string(const jungle::Itinerary& itin) {
    if (itin.visits.empty()) return "(no visits)";
    const size_t lookback = std::min<size_t>(6, itin.visits.size());
    for (const auto& [id, word] : jungle::jungle_cycles()) {
        if (!jungle::tail_is_cyclic_word(itin, word, lookback)) continue;
        // Start the printed word at its smallest node.
        size_t start = 0;
        for (size_t i = 0; i < word.size(); ++i)
            if (word[i] < word[start]) start = i;
        std::string s;
        for (size_t i = 0; i < word.size(); ++i) {
            if (i) s += "->";
            s += std::to_string(word[(start + i) % word.size()]);
        }
        return s;
    }
    std::string s;
    for (int n : jungle::tail_word(itin, lookback)) {
        if (!s.empty()) s += "->";
        s += std::to_string(n);
    }
    return s;
}

int cmd_simulate(const SimulateConfig& cfg) {
    const auto p = jungle::params_from_json(load_json_file(cfg.params_path));
    const auto ic = parse_ic(cfg.ic_spec);

    jungle::IntegrateOptions opt;
    opt.rel_tol = cfg.rel_tol;
    opt.abs_tol = cfg.abs_tol;
    opt.max_gap = cfg.max_gap;

    json config = {{"subcommand", "simulate"},
                   {"params", jungle::params_to_json(p)},
                   {"ic", {ic[0], ic[1], ic[2], ic[3]}},
                   {"t_max", cfg.t_max},
                   {"rel_tol", cfg.rel_tol},
                   {"abs_tol", cfg.abs_tol},
                   {"max_gap", cfg.max_gap},
                   {"eps_enter", cfg.eps_enter},
                   {"eps_exit", cfg.eps_exit},
                   {"extinction_threshold", cfg.ext_threshold},
                   {"tail_fraction", cfg.tail_fraction},
                   {"seed", cfg.seed}};
    const std::string hash = jungle::config_hash(config);

    const auto traj = jungle::integrate(p, ic, cfg.t_max, opt);
    const auto itin = jungle::extract_itinerary(traj, cfg.eps_enter, cfg.eps_exit);
    const auto detected = jungle::detect_extinction(traj, cfg.ext_threshold, cfg.tail_fraction);

    const auto tail_nodes = jungle::tail_node_set(itin, 6);
    std::vector<int> extinct_tail;
    for (int n = 1; n <= 4; ++n)
        if (!tail_nodes.count(n)) extinct_tail.push_back(n);

    json itin_json = jungle::itinerary_to_json(itin);
    itin_json["config_hash"] = hash;
    itin_json["seed"] = cfg.seed;
    itin_json["tail_word"] = jungle::tail_word(itin, 6);
    itin_json["survivor_nodes"] = tail_nodes;
    itin_json["extinct_nodes"] = extinct_tail;
    json det = {{"threshold", cfg.ext_threshold},
                {"tail_fraction", cfg.tail_fraction},
                {"extinct_nodes", detected}};
    itin_json["extinction_detector"] = det;
    json ratios = json::object();
    for (const auto& [node, rs] : jungle::dwell_growth(itin)) ratios[std::to_string(node)] = rs;
    itin_json["dwell_ratios"] = ratios;

    namespace fs = std::filesystem;
    fs::create_directories(cfg.out_dir);
    const std::string csv_path = (fs::path(cfg.out_dir) / "trajectory.csv").string();
    const std::string itin_path = (fs::path(cfg.out_dir) / "itinerary.json").string();
    const std::string sidecar_path = (fs::path(cfg.out_dir) / "run_config.json").string();

    write_text_file(csv_path, jungle::to_csv(traj));
    write_text_file(itin_path, itin_json.dump(2) + "\n");
    json sidecar = {{"schema", jungle::kSchemaVersion},
                    {"config", config},
                    {"config_hash", hash},
                    {"outputs", {"trajectory.csv", "itinerary.json"}}};
    write_text_file(sidecar_path, sidecar.dump(2) + "\n");

    // Summary line. An initial condition sitting exactly on an equilibrium
    // stays there; report that instead of a survivor set.
    bool fixed = false;
    for (int j = 1; j <= 4 && !fixed; ++j) {
        if (ic == jungle::axis_equilibrium(j)) {
            double dev = 0.0;
            for (const auto& s : traj.states)
                dev = std::max(dev, jungle::inf_dist(s, ic));
            if (dev == 0.0) {
                std::cout << "fixed at xi" << j << "\n";
                fixed = true;
            }
        }
    }
    if (!fixed) {
        std::string ext;
        for (int n : extinct_tail) {
            if (!ext.empty()) ext += ",";
            ext += "S" + std::to_string(n);
        }
        if (ext.empty()) ext = "none";
        std::cout << "extinct: " << ext << "; tail cycle: " << cycle_arrow_string(itin) << "\n";
    }
    std::cout << "wrote " << csv_path << " " << itin_path << " " << sidecar_path << "\n";
    return 0;
}

// ---------------------------------------------------------------------------
// invade
// ---------------------------------------------------------------------------

int cmd_invade(const std::string& scenario_path, const std::string& out_path) {
    const json j = load_json_file(scenario_path);
    jungle::InteractionParams p{};
    const auto scn = jungle::scenario_from_json(j, &p);
    const auto outcome = jungle::predict_outcome(scn, p);

    json config = {{"subcommand", "invade"}, {"scenario", j}};
    json report = jungle::prediction_to_json(scn, outcome);
    report["config_hash"] = jungle::config_hash(config);
    emit_json(report, out_path);
    return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct GridAxis {
    std::string name;
    double lo = 0.0, hi = 0.0;
    long count = 0;
};

std::vector<GridAxis> parse_grid(const std::string& spec) {
    static const std::set<std::string> known = {"e_A", "e_B", "e_D", "c_A", "c_B", "c_D"};
    std::vector<GridAxis> axes;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        GridAxis ax;
        const auto eq = tok.find('=');
        if (eq == std::string::npos) throw InputError("--grid: expected name=lo:hi:n in \"" + tok + "\"");
        ax.name = tok.substr(0, eq);
        if (!known.count(ax.name)) throw InputError("--grid: unknown parameter \"" + ax.name + "\"");
        const std::string rest = tok.substr(eq + 1);
        const auto c1 = rest.find(':');
        const auto c2 = rest.find(':', c1 == std::string::npos ? std::string::npos : c1 + 1);
        if (c1 == std::string::npos || c2 == std::string::npos)
            throw InputError("--grid: expected lo:hi:n in \"" + tok + "\"");
        try {
            ax.lo = std::stod(rest.substr(0, c1));
            ax.hi = std::stod(rest.substr(c1 + 1, c2 - c1 - 1));
            ax.count = std::stol(rest.substr(c2 + 1));
        } catch (const std::exception&) {
            throw InputError("--grid: bad numbers in \"" + tok + "\"");
        }
        if (ax.count < 0 || ax.hi < ax.lo) throw InputError("--grid: bounds must be ordered, n >= 0");
        axes.push_back(ax);
    }
    if (axes.empty()) throw InputError("--grid: empty specification");
    return axes;
}

void set_param(jungle::InteractionParams& p, const std::string& name, double v) {
    if (name == "e_A") p.e_A = v;
    else if (name == "e_B") p.e_B = v;
    else if (name == "e_D") p.e_D = v;
    else if (name == "c_A") p.c_A = v;
    else if (name == "c_B") p.c_B = v;
    else if (name == "c_D") p.c_D = v;
}

struct SweepConfig {
    std::string params_path;
    std::string grid_spec;
    std::string out_path;
    long cap = 1'000'000;
    bool with_sim = false;
    double sim_tmax = 400.0;
    std::uint64_t seed = 0;
};

int cmd_sweep(const SweepConfig& cfg) {
    const auto base = jungle::params_from_json(load_json_file(cfg.params_path));
    const auto axes = parse_grid(cfg.grid_spec);

    long total = 1;
    for (const auto& ax : axes) {
        total *= ax.count;
        if (total > cfg.cap) throw InputError("--grid: grid exceeds cap of " +
                                              std::to_string(cfg.cap) + " points");
    }
    if (total < 0) total = 0;

    std::string header = "e_A,e_B,e_D,c_A,c_B,c_D,standing_assumptions,sufficient_condition,"
                         "class_S142,class_S143,class_S1432";
    if (cfg.with_sim) header += ",sim_tail_nodes";

    auto point_params = [&](long index) {
        jungle::InteractionParams p = base;
        long rem = index;
        for (auto it = axes.rbegin(); it != axes.rend(); ++it) {
            const long i = rem % it->count;
            rem /= it->count;
            const double v = it->count == 1
                                 ? it->lo
                                 : it->lo + static_cast<double>(i) * (it->hi - it->lo) /
                                                static_cast<double>(it->count - 1);
            set_param(p, it->name, v);
        }
        return p;
    };

    auto row_for = [&](long index) {
        const jungle::InteractionParams p = point_params(index);
        std::string row;
        for (double v : {p.e_A, p.e_B, p.e_D, p.c_A, p.c_B, p.c_D})
            row += jungle::format_double(v) + ",";
        const bool standing = p.standing_assumptions();
        const bool sufficient =
            p.all_positive() && p.c_B * p.c_B * p.c_D > (p.c_B + p.e_A) * p.e_B * p.e_D;
        row += standing ? "true," : "false,";
        row += sufficient ? "true," : "false,";
        for (const auto& [id, seq] : jungle::jungle_cycles()) {
            row += jungle::to_string(jungle::classify_cycle(id, p).classification);
            if (id != "S1432") row += ",";
        }
        if (cfg.with_sim) {
            std::string tail = "-";
            try {
                const auto traj = jungle::integrate(p, {0.1, 0.1, 1.0, 0.1}, cfg.sim_tmax);
                const auto itin = jungle::extract_itinerary(traj);
                const auto nodes = jungle::tail_node_set(itin, 6);
                if (!nodes.empty()) {
                    tail.clear();
                    for (int n : nodes) tail += std::to_string(n);
                }
            } catch (const jungle::IntegrationError&) {
                tail = "error";
            }
            row += "," + tail;
        }
        return row;
    };

    std::vector<std::string> rows(static_cast<size_t>(total));
    const unsigned workers =
        std::max(1u, std::min(std::thread::hardware_concurrency(), 8u));
    if (total > 0) {
        std::vector<std::thread> pool;
        std::atomic<long> next{0};
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (;;) {
                    const long i = next.fetch_add(1);
                    if (i >= total) return;
                    rows[static_cast<size_t>(i)] = row_for(i);
                }
            });
        for (auto& th : pool) th.join();
    }

    std::string csv = header + "\n";
    for (const auto& r : rows) csv += r + "\n";

    json config = {{"subcommand", "sweep"},
                   {"params", jungle::params_to_json(base)},
                   {"grid", cfg.grid_spec},
                   {"with_sim", cfg.with_sim},
                   {"sim_tmax", cfg.sim_tmax},
                   {"seed", cfg.seed}};
    if (cfg.out_path.empty()) {
        std::cout << csv;
    } else {
        write_text_file(cfg.out_path, csv);
        json sidecar = {{"schema", jungle::kSchemaVersion},
                        {"config", config},
                        {"config_hash", jungle::config_hash(config)},
                        {"outputs", {cfg.out_path}}};
        write_text_file(cfg.out_path + ".config.json", sidecar.dump(2) + "\n");
    }
    return 0;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

struct VerifyConfig {
    std::string params_path;
    std::string suites = "jacobian,rho,findex";
    int draws = 100;
    std::uint64_t seed = 1234;
    double perturb_spectrum = 0.0;  // test fixture: offsets the FD Jacobian
};

bool verify_jacobian(const jungle::InteractionParams& p, const VerifyConfig& cfg) {
    std::mt19937_64 rng(cfg.seed);
    double max_dev = 0.0;
    auto check = [&](const jungle::InteractionParams& q) {
        for (int j = 1; j <= 4; ++j) {
            Eigen::Matrix4d J = jungle::numerical_jacobian(jungle::axis_equilibrium(j), q);
            J(0, 0) += cfg.perturb_spectrum;
            const auto numeric = jungle::sorted_real_eigenvalues(J);
            const auto analytic = jungle::sorted_spectrum(jungle::analytic_spectrum(j, q));
            for (int i = 0; i < 4; ++i)
                max_dev = std::max(max_dev, std::abs(numeric[static_cast<size_t>(i)] -
                                                     analytic[static_cast<size_t>(i)]));
        }
    };
    check(p);
    for (int d = 0; d < cfg.draws; ++d) check(jungle::sample_standing_params(rng));
    const bool pass = max_dev <= 1e-8;
    std::cout << "verify jacobian: " << (pass ? "PASS" : "FAIL")
              << " max_eigenvalue_dev=" << jungle::format_double(max_dev) << "\n";
    return pass;
}

bool verify_rho(const jungle::InteractionParams& p, const VerifyConfig& cfg) {
    std::mt19937_64 rng(cfg.seed + 1);
    double max_rel = 0.0;
    bool ok = true;
    auto check = [&](const jungle::InteractionParams& q) {
        const auto net = jungle::network_stability(q);
        if (!net.standing_assumptions) {
            ok = false;
            return;
        }
        for (const auto& c : net.cycles) {
            max_rel = std::max(max_rel,
                               std::abs(c.product - c.closed_form) / std::abs(c.closed_form));
            ok = ok && c.consistent;
        }
    };
    check(p);
    for (int d = 0; d < cfg.draws; ++d) check(jungle::sample_standing_params(rng));
    std::cout << "verify rho: " << (ok ? "PASS" : "FAIL")
              << " max_rel_dev=" << jungle::format_double(max_rel) << "\n";
    return ok;
}

bool verify_findex(const VerifyConfig& cfg) {
    std::mt19937_64 rng(cfg.seed + 2);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    bool ok = jungle::f_index(0.0, 0.0) == jungle::ExtendedReal(0.0);
    for (int i = 0; i < 100000 && ok; ++i) {
        const double a = dist(rng), b = dist(rng);
        const auto fp = jungle::f_plus(a, b);
        if (fp.is_finite() && fp.value() < 0.0) ok = false;
        if (fp.is_neg_inf()) ok = false;
        if (!(jungle::f_index(a, b) == -jungle::f_index(-a, -b))) ok = false;
    }
    std::cout << "verify findex: " << (ok ? "PASS" : "FAIL") << " sweeps=100000\n";
    return ok;
}

int cmd_verify(const VerifyConfig& cfg) {
    const jungle::InteractionParams p =
        cfg.params_path.empty() ? jungle::reference_params()
                                : jungle::params_from_json(load_json_file(cfg.params_path));

    std::vector<std::string> names;
    std::stringstream ss(cfg.suites);
    std::string tok;
    while (std::getline(ss, tok, ','))
        if (!tok.empty()) names.push_back(tok);
    if (names.empty()) throw InputError("--suites: empty suite selection");
    for (const auto& n : names)
        if (n != "jacobian" && n != "rho" && n != "findex")
            throw InputError("--suites: unknown suite \"" + n + "\"");

    bool all = true;
    for (const auto& n : names) {
        if (n == "jacobian") all = verify_jacobian(p, cfg) && all;
        if (n == "rho") all = verify_rho(p, cfg) && all;
        if (n == "findex") all = verify_findex(cfg) && all;
    }
    std::cout << (all ? "verify: all suites passed" : "verify: FAILURES present") << "\n";
    return all ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Four-species cyclic-dominance model: stability analysis, simulation, "
                 "and invasion prediction"};
    app.require_subcommand(1);

    std::string params_path, out_path;

    auto* analyze = app.add_subcommand("analyze", "Classify the three cycles and the network");
    analyze->add_option("--params", params_path, "Parameter JSON file")
        ->required()
        ->envname("JUNGLE_PARAMS");
    analyze->add_option("--out", out_path, "Write report here instead of stdout")
        ->envname("JUNGLE_OUT");

    SimulateConfig sim;
    auto* simulate = app.add_subcommand("simulate", "Integrate and extract itinerary");
    simulate->add_option("--params", sim.params_path, "Parameter JSON file")
        ->required()
        ->envname("JUNGLE_PARAMS");
    simulate->add_option("--ic", sim.ic_spec, "Initial condition \"x1,x2,x3,x4\"");
    simulate->add_option("--tmax", sim.t_max, "Integration horizon");
    simulate->add_option("--rtol", sim.rel_tol, "Relative tolerance");
    simulate->add_option("--atol", sim.abs_tol, "Absolute tolerance");
    simulate->add_option("--max-gap", sim.max_gap, "Max inter-sample gap");
    simulate->add_option("--enter", sim.eps_enter, "Visit entry threshold (sup norm)");
    simulate->add_option("--exit", sim.eps_exit, "Visit exit threshold (sup norm)");
    simulate->add_option("--threshold", sim.ext_threshold, "Extinction threshold");
    simulate->add_option("--tail-fraction", sim.tail_fraction, "Extinction window fraction");
    simulate->add_option("--seed", sim.seed, "Seed recorded in outputs")->envname("JUNGLE_SEED");
    simulate->add_option("--out", sim.out_dir, "Output directory")->envname("JUNGLE_OUT");

    std::string scenario_path;
    auto* invade = app.add_subcommand("invade", "Predict the outcome of an alien invasion");
    invade->add_option("--scenario", scenario_path, "Scenario JSON file")
        ->required()
        ->envname("JUNGLE_SCENARIO");
    invade->add_option("--out", out_path, "Write prediction here instead of stdout")
        ->envname("JUNGLE_OUT");

    SweepConfig sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Classify over a parameter grid");
    sweep_cmd->add_option("--params", sweep.params_path, "Base parameter JSON file")
        ->required()
        ->envname("JUNGLE_PARAMS");
    sweep_cmd->add_option("--grid", sweep.grid_spec, "Grid spec name=lo:hi:n[,...]")->required();
    sweep_cmd->add_option("--out", sweep.out_path, "CSV output file (default stdout)")
        ->envname("JUNGLE_OUT");
    sweep_cmd->add_option("--cap", sweep.cap, "Max grid points");
    sweep_cmd->add_flag("--with-sim", sweep.with_sim, "Add a simulated tail-node column");
    sweep_cmd->add_option("--sim-tmax", sweep.sim_tmax, "Horizon for --with-sim");
    sweep_cmd->add_option("--seed", sweep.seed, "Seed recorded in outputs")->envname("JUNGLE_SEED");

    VerifyConfig ver;
    auto* verify = app.add_subcommand("verify", "Run the oracle suites");
    verify->add_option("--params", ver.params_path, "Parameter JSON file (default built-in)")
        ->envname("JUNGLE_PARAMS");
    verify->add_option("--suites", ver.suites, "Comma list: jacobian,rho,findex");
    verify->add_option("--draws", ver.draws, "Random parameter draws per suite");
    verify->add_option("--seed", ver.seed, "RNG seed")->envname("JUNGLE_SEED");
    verify->add_option("--perturb-spectrum", ver.perturb_spectrum,
                       "Inject an eigenvalue perturbation (test fixture)")
        ->group("");  // hidden

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(analyze)) return cmd_analyze(params_path, out_path);
        if (app.got_subcommand(simulate)) return cmd_simulate(sim);
        if (app.got_subcommand(invade)) return cmd_invade(scenario_path, out_path);
        if (app.got_subcommand(sweep_cmd)) return cmd_sweep(sweep);
        if (app.got_subcommand(verify)) return cmd_verify(ver);
    } catch (const jungle::UnclassifiedError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const jungle::PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}

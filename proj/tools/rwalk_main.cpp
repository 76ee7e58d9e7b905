// Configuration-driven entry point: simulate / verify / rates / graph /
// urn / oracle subcommands, all artifacts written to --out.
//
// Exit codes: 0 pass, 2 statistical test failed, 3 invalid configuration
// or usage, 4 resource budget exceeded, 1 environment failure (I/O).

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "rwalk/analytics.hpp"
#include "rwalk/config.hpp"
#include "rwalk/ensemble.hpp"
#include "rwalk/errors.hpp"
#include "rwalk/io.hpp"
#include "rwalk/oracle.hpp"
#include "rwalk/pa_graph.hpp"
#include "rwalk/rng.hpp"
#include "rwalk/schedule.hpp"
#include "rwalk/urn.hpp"
#include "rwalk/verify.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitPass = 0;
constexpr int kExitEnvironment = 1;
constexpr int kExitTestFail = 2;
constexpr int kExitInvalidConfig = 3;
constexpr int kExitBudget = 4;

// Flags shared by the config-driven subcommands; the optionals override
// the corresponding config fields when set.
struct CommonFlags {
    std::string config_path;
    std::string out_dir = "out";
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
    std::optional<std::uint32_t> reps;
    std::optional<int> threads;
};

void add_common_flags(CLI::App* cmd, CommonFlags* flags,
                      bool config_required) {
    auto* opt = cmd->add_option("--config", flags->config_path,
                                "JSON run configuration");
    if (config_required) opt->required();
    cmd->add_option("--out", flags->out_dir, "output directory");
    cmd->add_option("--seed", flags->seed, "override master seed");
    cmd->add_option("--reps", flags->reps, "override replication count");
    cmd->add_option("--threads", flags->threads,
                    "override worker count (0 = hardware)");
}

rwalk::RunConfig load_with_overrides(const CommonFlags& flags) {
    rwalk::RunConfig config = rwalk::load_config(flags.config_path);
    if (flags.seed) config.options.master_seed = *flags.seed;
    if (flags.reps) config.options.replications = *flags.reps;
    if (flags.threads) config.options.threads = *flags.threads;
    return config;
}

rwalk::VerifyOptions verify_options_from(const rwalk::RunConfig& config) {
    rwalk::VerifyOptions opts;
    opts.master_seed = config.options.master_seed;
    opts.replications = config.options.replications;
    opts.threads = config.options.threads;
    if (const auto* window = std::get_if<rwalk::TimeWindow>(&config.grid)) {
        opts.n_anchor = window->n;
        if (!window->t_grid.empty()) opts.t_grid = window->t_grid;
    }
    return opts;
}

void write_text(const std::string& path, const std::string& text) {
    rwalk::write_file(path, text);
    std::cout << "wrote " << path << "\n";
}

void write_manifest(const std::string& out_dir,
                    const rwalk::RunConfig& config,
                    const std::string& command,
                    const std::vector<std::string>& outputs) {
    json canonical = rwalk::config_to_json(config);
    write_text(out_dir + "/config.json", canonical.dump(2) + "\n");
    json manifest;
    manifest["command"] = command;
    manifest["config"] = canonical;
    manifest["config_digest"] = rwalk::config_digest(config);
    manifest["outputs"] = outputs;
    write_text(out_dir + "/manifest.json", manifest.dump(2) + "\n");
}

json reduced_rows_json(const rwalk::EnsembleResult& result) {
    json rows = json::array();
    for (std::uint32_t rep = 0; rep < result.replications; ++rep) {
        for (std::size_t gi = 0; gi < result.grid.size(); ++gi) {
            rows.push_back({{"rep", rep},
                            {"n", result.grid[gi]},
                            {"zbar", result.zbar_at(rep, gi)},
                            {"sync_msq", result.sync_at(rep, gi)}});
        }
    }
    return rows;
}

json moment_rows_json(const std::vector<rwalk::MomentRow>& rows) {
    json out = json::array();
    for (const rwalk::MomentRow& row : rows) {
        out.push_back({{"n", row.n},
                       {"mean_zbar", row.mean_zbar},
                       {"var_zbar", row.var_zbar},
                       {"mean_sq_sync", row.mean_sq_sync},
                       {"mean_sq_conv_proxy", row.mean_sq_conv_proxy}});
    }
    return out;
}

int report_outcome(const std::string& out_dir, const std::string& name,
                   const std::vector<rwalk::TestReport>& reports) {
    fs::create_directories(out_dir);
    write_text(out_dir + "/report_" + name + ".json",
               [&] {
                   std::string bytes;
                   for (const auto& r : reports) {
                       std::cout << (r.passed ? "pass " : "FAIL ") << r.name
                                 << "  statistic=" << r.statistic
                                 << " threshold=" << r.threshold << "\n";
                   }
                   json arr = json::array();
                   for (const auto& r : reports) {
                       arr.push_back(json::parse(rwalk::report_to_json(r)));
                   }
                   return arr.dump(2) + "\n";
               }());
    for (const auto& r : reports) {
        if (!r.passed) return kExitTestFail;
    }
    return kExitPass;
}

int cmd_simulate(const CommonFlags& flags, bool print_config) {
    if (print_config) {
        rwalk::RunConfig config;
        if (!flags.config_path.empty()) config = load_with_overrides(flags);
        std::cout << rwalk::config_to_json(config).dump(2) << "\n";
        return kExitPass;
    }
    if (flags.config_path.empty()) {
        throw std::invalid_argument("simulate needs --config");
    }
    rwalk::RunConfig config = load_with_overrides(flags);
    rwalk::EnsembleResult result =
        rwalk::run_ensemble(config.params, config.grid, config.options);

    fs::create_directories(flags.out_dir);
    std::vector<std::string> outputs;
    if (flags.format == "json") {
        json snapshots = reduced_rows_json(result);
        write_text(flags.out_dir + "/snapshots.json",
                   snapshots.dump(2) + "\n");
        json moments = moment_rows_json(rwalk::moment_stream(result));
        write_text(flags.out_dir + "/moments.json", moments.dump(2) + "\n");
        outputs = {"snapshots.json", "moments.json"};
    } else {
        rwalk::write_reduced_snapshots_csv(flags.out_dir + "/snapshots.csv",
                                           result);
        std::cout << "wrote " << flags.out_dir << "/snapshots.csv\n";
        rwalk::write_moments_csv(flags.out_dir + "/moments.csv",
                                 rwalk::moment_stream(result));
        std::cout << "wrote " << flags.out_dir << "/moments.csv\n";
        outputs = {"snapshots.csv", "moments.csv"};
        if (result.has_full) {
            rwalk::write_full_snapshots_csv(
                flags.out_dir + "/snapshots_full.csv", result);
            std::cout << "wrote " << flags.out_dir << "/snapshots_full.csv\n";
            outputs.push_back("snapshots_full.csv");
        }
    }
    write_manifest(flags.out_dir, config, "simulate", outputs);
    return kExitPass;
}

int cmd_verify(const CommonFlags& flags, const std::string& theorem) {
    rwalk::RunConfig config = load_with_overrides(flags);
    rwalk::VerifyOptions opts = verify_options_from(config);
    const rwalk::ModelParams& params = config.params;

    std::vector<rwalk::TestReport> reports;
    if (theorem == "recursion") {
        reports = {rwalk::verify_recursion(params, opts)};
    } else if (theorem == "polarization") {
        reports = {rwalk::verify_polarization(params, opts)};
    } else if (theorem == "fixation") {
        reports = {rwalk::verify_fixation(params, true, opts)};
    } else if (theorem == "fixation-control") {
        reports = {rwalk::verify_fixation(params, false, opts)};
    } else if (theorem == "sync-rate" || theorem == "conv-rate" ||
               theorem == "rate-separation") {
        rwalk::RateVerification rates = rwalk::verify_rates(params, opts);
        fs::create_directories(flags.out_dir);
        rwalk::write_rate_table_csv(flags.out_dir + "/rate_table.csv",
                                    rates.table);
        if (theorem == "sync-rate") {
            reports = {rates.sync_slope, rates.sync_prefactor};
        } else if (theorem == "conv-rate") {
            reports = {rates.conv_slope, rates.conv_prefactor};
        } else {
            reports = {rates.separation};
        }
    } else if (theorem == "fluct-z" || theorem == "sync-rho1" ||
               theorem == "fluct-q" || theorem == "sync-q") {
        rwalk::VtKind kind = rwalk::VtKind::FluctZ;
        if (theorem == "sync-rho1") kind = rwalk::VtKind::SyncRho1;
        if (theorem == "fluct-q") kind = rwalk::VtKind::FluctQ;
        if (theorem == "sync-q") kind = rwalk::VtKind::SyncQ;
        rwalk::FcltEnsemble ens = rwalk::run_fclt_ensemble(params, opts);
        reports = rwalk::fclt_marginal_reports(ens, kind, opts);
    } else if (theorem == "covariance") {
        rwalk::FcltEnsemble ens = rwalk::run_fclt_ensemble(params, opts);
        rwalk::VtSpec spec;
        spec.theorem = rwalk::VtKind::FluctZ;
        spec.regime = ens.gamma_exp == 1.0 ? rwalk::VtRegime::gamma_eq_1
                                           : rwalk::VtRegime::gamma_lt_1;
        spec.c = ens.c;
        spec.gamma_exp = ens.gamma_exp;
        spec.alpha = params.alpha;
        spec.rho = params.rho;
        spec.q = params.q;
        spec.n_walkers = params.n_walkers;
        reports = {rwalk::synthetic_covariance_calibration(spec, opts),
                   rwalk::fclt_covariance_report(ens, opts)};
    } else if (theorem == "enumeration") {
        const auto steps = rwalk::grid_steps(config.grid);
        reports = {rwalk::verify_enumeration(
            params, static_cast<int>(steps.back()),
            config.options.replications, config.options.master_seed,
            opts.chi_square_level, config.options.threads)};
    } else if (theorem == "determinism") {
        reports = {rwalk::verify_determinism(
            config, flags.out_dir + "/determinism_scratch")};
    } else {
        throw std::invalid_argument(
            "unknown theorem name \"" + theorem +
            "\"; valid names: recursion, polarization, fixation, "
            "fixation-control, sync-rate, conv-rate, rate-separation, "
            "fluct-z, sync-rho1, fluct-q, sync-q, covariance, enumeration, "
            "determinism");
    }
    return report_outcome(flags.out_dir, theorem, reports);
}

int cmd_rates(const CommonFlags& flags) {
    rwalk::RunConfig config = load_with_overrides(flags);
    rwalk::RateVerification rates =
        rwalk::verify_rates(config.params, verify_options_from(config));
    fs::create_directories(flags.out_dir);
    rwalk::write_rate_table_csv(flags.out_dir + "/rate_table.csv",
                                rates.table);
    std::cout << "wrote " << flags.out_dir << "/rate_table.csv\n";
    return report_outcome(flags.out_dir, "rates", rates.reports());
}

int cmd_graph(double delta, std::uint64_t n_max, std::uint64_t seed,
              double lambda, const std::string& out_dir) {
    if (n_max < 2) {
        throw std::invalid_argument("graph growth needs --n-max >= 2");
    }
    rwalk::RandomStream stream(seed, 0);
    rwalk::PAGraph graph = rwalk::pa_seed(delta);
    std::vector<std::uint32_t> max_degree(n_max + 1, 1);
    max_degree[2] = graph.max_degree();
    for (std::uint64_t k = 3; k <= n_max; ++k) {
        rwalk::pa_grow_in_place(graph, stream);
        max_degree[k] = graph.max_degree();
    }
    rwalk::GraphDerivedSchedule schedule{lambda, max_degree};

    fs::create_directories(out_dir);
    rwalk::write_degrees_csv(out_dir + "/degrees.csv", graph);
    std::cout << "wrote " << out_dir << "/degrees.csv\n";
    std::vector<double> step_sizes(n_max + 1);
    for (std::uint64_t n = 0; n <= n_max; ++n) {
        step_sizes[n] = rwalk::step_size(schedule, n);
    }
    rwalk::write_schedule_csv(out_dir + "/schedule.csv", step_sizes);
    std::cout << "wrote " << out_dir << "/schedule.csv\n";
    return kExitPass;
}

int cmd_urn(const std::string& spec_path, std::uint64_t horizon,
            const std::string& out_dir) {
    rwalk::UrnSpec spec = rwalk::load_urn_spec(spec_path);
    rwalk::UrnSchedule schedule = rwalk::urn_to_schedule(spec, horizon);
    fs::create_directories(out_dir);
    rwalk::write_urn_schedule_csv(out_dir + "/urn_schedule.csv", schedule,
                                  horizon);
    std::cout << "wrote " << out_dir << "/urn_schedule.csv\n";
    return kExitPass;
}

int cmd_oracle(const CommonFlags& flags, int horizon) {
    rwalk::RunConfig config = load_with_overrides(flags);
    const auto* init =
        std::get_if<rwalk::DeterministicInitial>(&config.params.initial);
    if (init == nullptr) {
        throw std::invalid_argument(
            "oracle enumeration needs a deterministic initial law");
    }
    std::vector<double> z0 = init->values;
    if (z0.size() == 1 && config.params.n_walkers > 1) {
        z0.assign(static_cast<std::size_t>(config.params.n_walkers), z0[0]);
    }
    rwalk::ExactDistribution dist =
        rwalk::enumerate_distribution(config.params, z0, horizon);

    fs::create_directories(flags.out_dir);
    std::string csv;
    for (int w = 0; w < config.params.n_walkers; ++w) {
        csv += "z_" + std::to_string(w) + ",";
    }
    csv += "prob\n";
    for (const rwalk::Atom& atom : dist.atoms) {
        for (double z : atom.z) csv += rwalk::format_double(z) + ",";
        csv += rwalk::format_double(atom.prob) + "\n";
    }
    write_text(flags.out_dir + "/oracle_atoms.csv", csv);

    if (config.params.n_walkers == 1 && config.params.rho == 1.0) {
        const double x0 =
            rwalk::initial_product_moment(config.params.initial);
        std::vector<double> xs = rwalk::variance_recursion_alpha0(
            x0, config.params.schedule,
            static_cast<std::uint64_t>(horizon));
        std::string rec = "n,product_moment\n";
        for (std::size_t n = 0; n < xs.size(); ++n) {
            rec += std::to_string(n) + "," + rwalk::format_double(xs[n]) +
                   "\n";
        }
        write_text(flags.out_dir + "/oracle_recursion.csv", rec);
    }
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"mean-field reinforced walk simulator and verifier"};
    app.require_subcommand(1);

    CommonFlags sim_flags;
    bool print_config = false;
    auto* sim = app.add_subcommand(
        "simulate", "run an ensemble and export snapshots + manifest");
    add_common_flags(sim, &sim_flags, /*config_required=*/false);
    sim->add_option("--format", sim_flags.format, "export format")
        ->check(CLI::IsMember({"csv", "json"}));
    sim->add_flag("--print-config", print_config,
                  "print the canonical configuration and exit");

    CommonFlags verify_flags;
    std::string theorem;
    auto* verify = app.add_subcommand(
        "verify", "run a statistical check against a limit statement");
    add_common_flags(verify, &verify_flags, /*config_required=*/true);
    verify->add_option("--theorem", theorem, "which statement to check")
        ->required();

    CommonFlags rates_flags;
    auto* rates = app.add_subcommand(
        "rates", "fit synchronization/convergence decay rates");
    add_common_flags(rates, &rates_flags, /*config_required=*/true);

    double delta = 0.0;
    std::uint64_t graph_n_max = 100'000;
    std::uint64_t graph_seed = 1;
    double lambda = 0.5;
    std::string graph_out = "out";
    auto* graph = app.add_subcommand(
        "graph", "grow a preferential-attachment graph and its schedule");
    graph->add_option("--delta", delta, "attachment shift (> -1)")
        ->required();
    graph->add_option("--n-max", graph_n_max, "number of vertices");
    graph->add_option("--seed", graph_seed, "master seed");
    graph->add_option("--lambda", lambda, "schedule scale in (0,1)");
    graph->add_option("--out", graph_out, "output directory");

    std::string urn_spec_path;
    std::uint64_t urn_horizon = 100;
    std::string urn_out = "out";
    auto* urn = app.add_subcommand(
        "urn", "translate an urn specification into a step schedule");
    urn->add_option("--spec", urn_spec_path, "JSON urn specification")
        ->required();
    urn->add_option("--horizon", urn_horizon, "schedule length");
    urn->add_option("--out", urn_out, "output directory");

    CommonFlags oracle_flags;
    int oracle_horizon = 3;
    auto* oracle = app.add_subcommand(
        "oracle", "enumerate the exact law of a small configuration");
    add_common_flags(oracle, &oracle_flags, /*config_required=*/true);
    oracle->add_option("--horizon", oracle_horizon, "steps to enumerate");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitPass : kExitInvalidConfig;
    }

    try {
        if (sim->parsed()) return cmd_simulate(sim_flags, print_config);
        if (verify->parsed()) return cmd_verify(verify_flags, theorem);
        if (rates->parsed()) return cmd_rates(rates_flags);
        if (graph->parsed()) {
            return cmd_graph(delta, graph_n_max, graph_seed, lambda,
                             graph_out);
        }
        if (urn->parsed()) return cmd_urn(urn_spec_path, urn_horizon, urn_out);
        if (oracle->parsed()) return cmd_oracle(oracle_flags, oracle_horizon);
    } catch (const rwalk::BudgetExceeded& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const std::out_of_range& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitEnvironment;
    }
    return kExitInvalidConfig;
}

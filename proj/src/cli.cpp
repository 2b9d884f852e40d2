#include "hkc/cli.hpp"

#include "hkc/cluster.hpp"
#include "hkc/error.hpp"
#include "hkc/graph.hpp"
#include "hkc/hkpr.hpp"
#include "hkc/kmachine.hpp"
#include "hkc/phkpr_dist.hpp"
#include "hkc/report.hpp"
#include "hkc/sweep.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>
#include <stdexcept>

namespace hkc {

CliEnvironment CliEnvironment::from_process() {
    CliEnvironment env;
    if (const char* cap = std::getenv("HKC_ROUND_CAP")) {
        env.round_cap = cap;
    }
    return env;
}

namespace {

struct Values {
    std::string graph;
    NodeId seed_node = 0;
    double t = 0.0;
    double eps = 0.1;
    double c = 1.0;
    double c2 = 2.0;
    double phi = 0.5;
    double tol = 1e-12;
    std::uint64_t sigma = 0;
    std::uint64_t varsigma = 0;
    std::uint64_t samples = 0;
    std::uint64_t seed = 0;
    std::uint32_t radius = 0;
    std::string mode = "paper";
    double beta = 2.0;
    std::uint64_t bandwidth = 0;
    std::uint64_t round_cap = 1'000'000;
    std::string trace;
    bool serial = false;
    std::vector<std::uint64_t> ks;
};

// One subcommand and the options it registered, for provenance lookups.
struct Command {
    CLI::App* app = nullptr;
    std::map<std::string, CLI::Option*, std::less<>> options;

    bool given(std::string_view key) const {
        const auto it = options.find(key);
        return it != options.end() && it->second->count() > 0;
    }
    std::string source(std::string_view key) const { return given(key) ? "flag" : "default"; }
};

template <typename T>
CLI::Option* add(Command& cmd, const std::string& key, T& var, const std::string& help) {
    auto* opt = cmd.app->add_option("--" + key, var, help)->capture_default_str();
    cmd.options[key] = opt;
    return opt;
}

void add_simulation_options(Command& cmd, Values& v, bool stochastic) {
    cmd.options["graph"] = cmd.app->add_option("graph", v.graph, "edge-list file")->required();
    add(cmd, "mode", v.mode, "congestion accounting")->check(CLI::IsMember({"paper", "strict"}));
    add(cmd, "beta", v.beta, "bandwidth = ceil(beta log2 n) bits")->check(CLI::PositiveNumber);
    add(cmd, "bandwidth", v.bandwidth, "bandwidth in bits per edge and round (overrides beta)");
    add(cmd, "round-cap", v.round_cap, "abort after this many charged rounds (env HKC_ROUND_CAP)");
    add(cmd, "trace", v.trace, "write per-round edge loads to this file");
    cmd.options["serial"] = cmd.app->add_flag("--serial", v.serial, "run node handlers on one thread");
    if (stochastic) {
        add(cmd, "seed", v.seed, "random seed")->required();
        add(cmd, "kmachine-k", v.ks, "append a k-machine bound table for these machine counts")->delimiter(',');
    }
}

std::string join_ids(std::span<const NodeId> ids) { return ids.empty() ? "-" : fmt::format("{}", fmt::join(ids, ",")); }

std::string join_args(const std::vector<std::string>& args) {
    std::string out = "hkc";
    for (const auto& a : args) {
        out += ' ';
        out += a;
    }
    return out;
}

std::string str(std::uint64_t x) { return std::to_string(x); }

void add_graph(Report& r, const Values& v, const Graph& g) {
    r.section("graph")
        .field("path", v.graph, "flag")
        .field("n", str(g.node_count()))
        .field("m", str(g.edge_count()))
        .field("max_degree", str(g.max_degree()));
}

void add_config(ReportSection& p, const Command& cmd, const Values& v, const SimConfig& config, NodeId n,
                bool cap_from_env) {
    p.field("mode", v.mode, cmd.source("mode"));
    if (cmd.given("bandwidth")) {
        p.field("bandwidth", str(config.bandwidth(n)), "flag");
    } else {
        p.field("beta", v.beta, cmd.source("beta"));
        p.field("bandwidth", str(config.bandwidth(n)), "derived");
    }
    p.field("round_cap", str(config.round_cap), cmd.given("round-cap") ? "flag" : cap_from_env ? "env" : "default");
    p.field("exec", v.serial ? "serial" : "parallel", cmd.source("serial"));
}

void add_stats(Report& r, const std::string& name, const RoundStats& s) {
    r.section(name)
        .field("rounds", str(s.rounds))
        .field("logical_rounds", str(s.logical_rounds))
        .field("messages", str(s.messages))
        .field("max_node_messages", str(s.max_node_messages))
        .field("max_edge_bits", str(s.max_edge_bits))
        .field("congestion_events", str(s.congestion_events))
        .field("total_bits", str(s.total_bits));
}

void add_walk(ReportSection& p, const WalkParameters& params) {
    p.field("tokens", str(params.tokens), "derived");
    p.field("step_cap", str(params.step_cap), "derived");
}

void add_vector(Report& r, const PhkprVector& vec) {
    auto& s = r.section("vector");
    s.field("kind", to_string(vec.kind)).field("support", str(vec.support_size())).field("sum", vec.sum());
    if (vec.kind == VectorKind::estimated) {
        s.field("tokens", str(vec.tokens));
        s.table({"node", "value", "count"});
        for (const auto& e : vec.entries) {
            s.row({str(e.node), format_number(e.value), str(e.count)});
        }
    } else {
        s.table({"node", "value"});
        for (const auto& e : vec.entries) {
            s.row({str(e.node), format_number(e.value)});
        }
    }
}

void add_sweep(Report& r, const Graph& g, const SweepResult& res) {
    r.section("result")
        .field("set", join_ids(res.best_set.members()))
        .field("size", str(res.best_set.size()))
        .field("volume", str(volume(g, res.best_set)))
        .field("boundary", str(edge_boundary(g, res.best_set)))
        .field("ratio", res.best_ratio.str())
        .field("ratio_value", res.best_ratio.value())
        .field("best_prefix", str(res.best_prefix))
        .field("considered", str(res.ordering.size()));
    auto& prof = r.section("profile");
    prof.table({"j", "node", "volume", "boundary", "ratio"});
    for (std::size_t j = 0; j < res.profile.size(); ++j) {
        const auto& step = res.profile[j];
        prof.row({str(j + 1), str(res.ordering[j]), str(step.volume), str(step.boundary), step.ratio.str()});
    }
}

void add_cost(Report& r, const SweepCost& cost) {
    r.section("sweep")
        .field("radius", str(cost.radius))
        .field("tree_depth", str(cost.tree_depth))
        .field("max_tree_degree", str(cost.max_tree_degree))
        .field("support", str(cost.support))
        .field("considered", str(cost.considered))
        .field("root", str(cost.root));
}

void add_kmachine_rows(ReportSection& s, const CostMeasurement& meas, std::span<const std::uint64_t> ks) {
    s.field("M", str(meas.messages)).field("C", str(meas.communication)).field("T", str(meas.rounds));
    s.field("note", "polylog factors omitted");
    s.table({"k", "message_term", "round_term", "bound", "dominant"});
    for (const auto& row : kmachine_table(meas, ks)) {
        s.row({str(row.k), format_number(row.message_term), format_number(row.round_term), format_number(row.bound),
               to_string(row.dominant)});
    }
}

void maybe_kmachine(Report& r, const Values& v, const Graph& g, const RoundStats& stats) {
    if (!v.ks.empty()) {
        add_kmachine_rows(r.section("kmachine"), CostMeasurement::from_stats(stats, g), v.ks);
    }
}

ClusterRequest cluster_request(const Values& v, NodeId seed) {
    ClusterRequest req;
    req.seed = seed;
    req.sigma = v.sigma;
    req.varsigma = v.varsigma;
    req.phi = v.phi;
    req.eps = v.eps;
    req.c = v.c;
    req.c2 = v.c2;
    return req;
}

void add_cluster_params(ReportSection& p, const Command& cmd, const Values& v, bool with_seed_node) {
    if (with_seed_node) {
        p.field("seed_node", str(v.seed_node), "flag");
    }
    p.field("sigma", str(v.sigma), "flag");
    p.field("varsigma", str(v.varsigma), "flag");
    p.field("eps", v.eps, cmd.source("eps"));
    p.field("c", v.c, cmd.source("c"));
}

// `total` differs from run.stats when several runs were made (phi halving).
void add_cluster_run(Report& r, const Graph& g, const ClusterResult& run, const RoundStats& total) {
    r.section("walk")
        .field("t", run.t)
        .field("phi", run.phi)
        .field("tokens", str(run.params.tokens))
        .field("step_cap", str(run.params.step_cap))
        .field("strategy", to_string(run.strategy));
    add_sweep(r, g, run.sweep);
    add_cost(r, run.cost);
    add_stats(r, "stats", total);
    add_stats(r, "stats.phkpr", run.phkpr);
    add_stats(r, "stats.sweep", run.sweep_stats);
}

void check_seed_node(NodeId s, const Graph& g) {
    if (s >= g.node_count()) {
        throw std::invalid_argument(fmt::format("--seed-node {} is not a node (n = {})", s, g.node_count()));
    }
}

class Cli {
public:
    Cli(std::ostream& out, std::ostream& err, const CliEnvironment& env) : out_(out), err_(err), env_(env) {
        app_.require_subcommand(1);

        auto& hkpr = command("hkpr", "distributed PHKPR estimate", true);
        add(hkpr, "seed-node", v_.seed_node, "seed node")->required();
        add(hkpr, "t", v_.t, "diffusion time")->required()->check(CLI::NonNegativeNumber);
        add(hkpr, "eps", v_.eps, "error bound in (0, 1/2)");
        add(hkpr, "c", v_.c, "walk-length constant, at least 1");

        auto& exact = command("hkpr-exact", "exact PHKPR by truncated power series", false);
        add(exact, "seed-node", v_.seed_node, "seed node")->required();
        add(exact, "t", v_.t, "diffusion time")->required()->check(CLI::NonNegativeNumber);
        add(exact, "tol", v_.tol, "truncation tolerance")->check(CLI::PositiveNumber);

        auto& cluster = command("cluster", "local cluster for a known optimal ratio", true);
        add(cluster, "seed-node", v_.seed_node, "seed node")->required();
        add(cluster, "phi", v_.phi, "optimal Cheeger ratio in (0, 1]")->required();
        add_cluster_options(cluster);
        add(cluster, "t", v_.t, "diffusion time override")->check(CLI::NonNegativeNumber);

        auto& autophi = command("cluster-auto", "local cluster with phi halving", true);
        add(autophi, "seed-node", v_.seed_node, "seed node")->required();
        add_cluster_options(autophi);
        add(autophi, "c2", v_.c2, "acceptance constant")->check(CLI::PositiveNumber);

        auto& sparse = command("sparsecut", "sparse cut from sampled seeds", true);
        add(sparse, "samples", v_.samples, "number of seeds to sample")->required()->check(CLI::PositiveNumber);
        add_cluster_options(sparse);
        add(sparse, "c2", v_.c2, "acceptance constant")->check(CLI::PositiveNumber);

        auto& sweep = command("sweep", "distributed sweep over the exact PHKPR vector", false);
        add(sweep, "seed-node", v_.seed_node, "seed node")->required();
        add(sweep, "t", v_.t, "diffusion time")->required()->check(CLI::NonNegativeNumber);
        add(sweep, "tol", v_.tol, "truncation tolerance")->check(CLI::PositiveNumber);
        add(sweep, "eps", v_.eps, "sweep window is ceil(1/eps)");
        add(sweep, "radius", v_.radius, "hop radius of the sweep tree (default: seed eccentricity)");
        add(sweep, "sigma", v_.sigma, "size cap; selects the chain sweep");
        add(sweep, "varsigma", v_.varsigma, "volume cap; selects the chain sweep");

        auto& km = command("kmachine", "k-machine round bounds from a measured local cluster run", true);
        add(km, "seed-node", v_.seed_node, "seed node")->required();
        add(km, "phi", v_.phi, "optimal Cheeger ratio in (0, 1]");
        add_cluster_options(km);
        add(km, "k", ks_, "machine counts")->delimiter(',');
    }

    int run(const std::vector<std::string>& args) {
        try {
            std::vector<std::string> reversed(args.rbegin(), args.rend());
            app_.parse(reversed);
        } catch (const CLI::CallForHelp& e) {
            return app_.exit(e, out_, err_);
        } catch (const CLI::CallForAllHelp& e) {
            return app_.exit(e, out_, err_);
        } catch (const CLI::ParseError& e) {
            app_.exit(e, out_, err_);
            err_ << usage();
            return exit_usage;
        }

        try {
            const Command& cmd = parsed();
            SimConfig config = simulation_config(cmd);
            std::ofstream trace;
            if (!v_.trace.empty()) {
                trace.open(v_.trace);
                if (!trace) {
                    throw std::invalid_argument("cannot open trace file '" + v_.trace + "'");
                }
                config.trace = &trace;
            }
            const Graph g = load_edge_list_file(v_.graph);
            Report report;
            report.section("run").field("command", join_args(args), "argv").field("subcommand", cmd.app->get_name());
            add_graph(report, v_, g);
            dispatch(cmd, g, config, report);
            out_ << report.render();
            return exit_ok;
        } catch (const GraphError& e) {
            err_ << "graph error: " << e.what() << '\n';
            return exit_graph_error;
        } catch (const std::invalid_argument& e) {
            err_ << "error: " << e.what() << '\n' << usage();
            return exit_usage;
        } catch (const SimulationError& e) {
            err_ << "simulation error: " << e.what() << '\n';
            return exit_simulation_error;
        }
    }

private:
    Command& command(const std::string& name, const std::string& help, bool stochastic) {
        auto& cmd = commands_[name];
        cmd.app = app_.add_subcommand(name, help);
        add_simulation_options(cmd, v_, stochastic);
        return cmd;
    }

    void add_cluster_options(Command& cmd) {
        add(cmd, "sigma", v_.sigma, "target size")->required()->check(CLI::PositiveNumber);
        add(cmd, "varsigma", v_.varsigma, "target volume")->required()->check(CLI::PositiveNumber);
        add(cmd, "eps", v_.eps, "error bound in (0, 1/2)");
        add(cmd, "c", v_.c, "walk-length constant, at least 1");
    }

    const Command& parsed() const {
        for (const auto& [name, cmd] : commands_) {
            if (cmd.app->parsed()) {
                return cmd;
            }
        }
        throw std::invalid_argument("no subcommand given");
    }

    std::string usage() const {
        for (const auto& [name, cmd] : commands_) {
            if (cmd.app->parsed()) {
                return cmd.app->help();
            }
        }
        return app_.help();
    }

    SimConfig simulation_config(const Command& cmd) {
        SimConfig config;
        config.mode = v_.mode == "strict" ? CongestionMode::strict : CongestionMode::paper;
        config.beta = v_.beta;
        config.bandwidth_bits = v_.bandwidth;
        config.seed = v_.seed;
        config.exec = v_.serial ? Exec::serial : Exec::parallel;
        if (!cmd.given("round-cap") && env_.round_cap) {
            const auto& text = *env_.round_cap;
            std::uint64_t cap = 0;
            const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), cap);
            if (ec != std::errc{} || end != text.data() + text.size() || cap == 0) {
                throw std::invalid_argument("HKC_ROUND_CAP must be a positive integer, got '" + text + "'");
            }
            v_.round_cap = cap;
            cap_from_env_ = true;
        }
        config.round_cap = v_.round_cap;
        return config;
    }

    ReportSection& parameters(Report& r, const Command& cmd, const SimConfig& config, NodeId n, bool stochastic) {
        auto& p = r.section("parameters");
        if (stochastic) {
            p.field("seed", str(v_.seed), "flag");
        }
        add_config(p, cmd, v_, config, n, cap_from_env_);
        return p;
    }

    void dispatch(const Command& cmd, const Graph& g, const SimConfig& config, Report& r) {
        const auto& name = cmd.app->get_name();
        if (name == "hkpr") {
            check_seed_node(v_.seed_node, g);
            auto& p = parameters(r, cmd, config, g.node_count(), true);
            p.field("seed_node", str(v_.seed_node), "flag").field("t", v_.t, "flag");
            p.field("eps", v_.eps, cmd.source("eps")).field("c", v_.c, cmd.source("c"));
            const auto run = estimate_phkpr_distributed(g, v_.seed_node, v_.t, v_.eps, v_.c, config);
            add_walk(p, run.params);
            add_stats(r, "stats", run.stats);
            add_vector(r, run.vector);
            maybe_kmachine(r, v_, g, run.stats);
        } else if (name == "hkpr-exact") {
            check_seed_node(v_.seed_node, g);
            auto& p = parameters(r, cmd, config, g.node_count(), false);
            p.field("seed_node", str(v_.seed_node), "flag").field("t", v_.t, "flag").field("tol", v_.tol,
                                                                                       cmd.source("tol"));
            add_vector(r, exact_phkpr(g, v_.seed_node, v_.t, v_.tol, config.exec));
        } else if (name == "cluster") {
            auto& p = parameters(r, cmd, config, g.node_count(), true);
            add_cluster_params(p, cmd, v_, true);
            p.field("phi", v_.phi, "flag");
            auto req = cluster_request(v_, v_.seed_node);
            if (cmd.given("t")) {
                req.t = v_.t;
                p.field("t", v_.t, "flag");
            } else {
                validate(req, g.node_count());
                p.field("t", diffusion_time(req.phi, req.varsigma, req.eps), "derived");
            }
            const auto run = local_cluster(g, req, config);
            add_cluster_run(r, g, run, run.stats);
            maybe_kmachine(r, v_, g, run.stats);
        } else if (name == "cluster-auto") {
            auto& p = parameters(r, cmd, config, g.node_count(), true);
            add_cluster_params(p, cmd, v_, true);
            p.field("c2", v_.c2, cmd.source("c2"));
            const auto run = local_cluster_autophi(g, cluster_request(v_, v_.seed_node), config);
            add_autophi(r, g, run);
            maybe_kmachine(r, v_, g, run.stats);
        } else if (name == "sparsecut") {
            auto& p = parameters(r, cmd, config, g.node_count(), true);
            p.field("samples", str(v_.samples), "flag");
            add_cluster_params(p, cmd, v_, false);
            p.field("c2", v_.c2, cmd.source("c2"));
            const auto run = sparse_cut(g, v_.samples, cluster_request(v_, 0), config, v_.seed);
            auto& s = r.section("samples");
            s.field("best_seed", str(run.best_seed));
            s.table({"seed", "ratio"});
            for (std::size_t i = 0; i < run.seeds.size(); ++i) {
                s.row({str(run.seeds[i]), run.seed_ratios[i].str()});
            }
            add_autophi(r, g, run.best);
            maybe_kmachine(r, v_, g, run.best.stats);
        } else if (name == "sweep") {
            run_sweep(cmd, g, config, r);
        } else if (name == "kmachine") {
            run_kmachine(cmd, g, config, r);
        }
    }

    static void add_autophi(Report& r, const Graph& g, const AutoPhiResult& run) {
        std::vector<std::string> tried;
        for (double phi : run.tried) {
            tried.push_back(format_number(phi));
        }
        r.section("autophi")
            .field("accepted", run.accepted ? "yes" : "no")
            .field("guesses", str(run.guesses))
            .field("max_guesses", str(max_phi_guesses(g)))
            .field("phi_used", run.best.phi)
            .field("tried", fmt::format("{}", fmt::join(tried, ",")));
        add_cluster_run(r, g, run.best, run.stats);
    }

    void run_sweep(const Command& cmd, const Graph& g, const SimConfig& config, Report& r) {
        check_seed_node(v_.seed_node, g);
        auto& p = parameters(r, cmd, config, g.node_count(), false);
        p.field("seed_node", str(v_.seed_node), "flag").field("t", v_.t, "flag");
        p.field("tol", v_.tol, cmd.source("tol")).field("eps", v_.eps, cmd.source("eps"));
        const auto dist = g.bfs_distances(v_.seed_node);
        const auto ecc = *std::max_element(dist.begin(), dist.end());
        SweepOptions options{.eps = v_.eps, .radius = cmd.given("radius") ? v_.radius : ecc};
        p.field("radius", str(*options.radius), cmd.given("radius") ? "flag" : "derived");
        const bool chain = cmd.given("sigma") || cmd.given("varsigma");
        if (chain) {
            p.field("sigma", str(v_.sigma), cmd.source("sigma")).field("varsigma", str(v_.varsigma), cmd.source("varsigma"));
        }
        p.field("strategy", chain ? "chain" : "two-phase", "derived");
        if (!(v_.eps > 0.0 && v_.eps < 1.0)) {
            throw std::invalid_argument("eps must lie in (0, 1)");
        }
        const auto vec = exact_phkpr(g, v_.seed_node, v_.t, v_.tol, config.exec);
        const auto run = chain ? chain_sweep(g, vec, SweepCaps{v_.sigma, v_.varsigma}, options, config)
                               : distributed_sweep(g, vec, options, config);
        add_sweep(r, g, run.result);
        add_cost(r, run.cost);
        add_stats(r, "stats", run.stats);
    }

    void run_kmachine(const Command& cmd, const Graph& g, const SimConfig& config, Report& r) {
        auto& p = parameters(r, cmd, config, g.node_count(), true);
        add_cluster_params(p, cmd, v_, true);
        p.field("phi", v_.phi, cmd.source("phi"));
        if (ks_.empty()) {
            ks_ = {2, 4, 8, 16, 32};
        }
        p.field("k", fmt::format("{}", fmt::join(ks_, ",")), cmd.source("k"));
        const auto run = local_cluster(g, cluster_request(v_, v_.seed_node), config);
        add_cluster_run(r, g, run, run.stats);

        const auto table = [&](const std::string& name, const CostMeasurement& measured,
                               const CostMeasurement& symbolic, auto closed_form) {
            auto& s = r.section(name);
            s.field("measured_M", str(measured.messages))
                .field("measured_C", str(measured.communication))
                .field("measured_T", str(measured.rounds))
                .field("symbolic_M", str(symbolic.messages))
                .field("symbolic_C", str(symbolic.communication))
                .field("symbolic_T", str(symbolic.rounds))
                .field("polylog_factor", dropped_polylog_factor(g.node_count(), v_.eps, v_.c))
                .field("note", "polylog factors omitted");
            s.table({"k", "measured", "symbolic", "closed_form", "measured_dominant"});
            for (auto k : ks_) {
                const auto row = kmachine_breakdown(measured, k);
                s.row({str(k), format_number(row.bound), format_number(kmachine_round_bound(symbolic, k)),
                       format_number(closed_form(k)), to_string(row.dominant)});
            }
        };
        table("kmachine.phkpr", CostMeasurement::from_stats(run.phkpr, g),
              phkpr_symbolic(g.node_count(), v_.eps, v_.c), [&](std::uint64_t k) { return phkpr_closed_form(v_.eps, k); });
        table("kmachine.cluster", CostMeasurement::from_stats(run.stats, g),
              local_cluster_symbolic(g.node_count(), g.max_degree(), v_.eps, v_.c),
              [&](std::uint64_t k) { return local_cluster_closed_form(v_.eps, g.max_degree(), k); });
    }

    std::ostream& out_;
    std::ostream& err_;
    CliEnvironment env_;
    CLI::App app_{"Distributed heat kernel pagerank and local clustering on a CONGEST simulator", "hkc"};
    Values v_;
    std::vector<std::uint64_t> ks_;
    std::map<std::string, Command> commands_;
    bool cap_from_env_ = false;
};

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const CliEnvironment& env) {
    Cli cli(out, err, env);
    return cli.run(args);
}

} // namespace hkc

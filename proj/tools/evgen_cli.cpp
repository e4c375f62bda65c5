// evgen: generate, screen, verify, solve and benchmark EVRPTW instances.

#include <CLI11.hpp>

#include <atomic>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "evgen/bench.hpp"
#include "evgen/http_service.hpp"
#include "evgen/instance_io.hpp"
#include "evgen/json_codec.hpp"
#include "evgen/pipeline.hpp"
#include "evgen/screening.hpp"
#include "evgen/solver.hpp"
#include "evgen/verifier.hpp"

using namespace evgen;

namespace {

std::atomic<bool> g_interrupted{false};
Service* g_service = nullptr;

extern "C" void on_sigint(int) {
    g_interrupted = true;
    if (g_service) g_service->stop();
}

constexpr int kExitInfeasible = 1;
constexpr int kExitError = 2;
constexpr int kExitUnknown = 3;
constexpr int kExitInterrupted = 130;

std::string route_text(const std::vector<NodeId>& route, const Instance& instance) {
    std::string out;
    for (NodeId id : route) {
        if (!out.empty()) out += " -> ";
        switch (instance.kind(id)) {
            case NodeKind::depot: out += "D0"; break;
            case NodeKind::customer: out += "C" + std::to_string(id); break;
            case NodeKind::station: out += "S" + std::to_string(id); break;
        }
    }
    return out;
}

void print_screening(const ScreeningReport& report) {
    if (report.passed()) {
        std::printf("stage 1: passed\n");
        return;
    }
    std::printf("stage 1: failed (%zu violations)\n", report.violations.size());
    for (const auto& v : report.violations)
        std::printf("  %s: customer %d measured %.6f > %.6f\n", std::string(to_string(v.condition)).c_str(),
                    v.customer, v.measured, v.threshold);
}

void print_stats(const BatchStats& s) {
    std::printf("attempted %d, accepted %d, rejected stage 1 %d, rejected stage 2 %d, unknown %d, gamma %.4f\n",
                s.attempted, s.accepted, s.rejected_stage1, s.rejected_stage2, s.unknown_stage2,
                s.attempted ? static_cast<double>(s.accepted) / s.attempted : 0.0);
    for (const auto& [c, n] : s.violations)
        std::printf("  %s violated in %d attempts\n", std::string(to_string(c)).c_str(), n);
}

GeneratorConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read config " + path);
    return config_from_json(json::parse(in));
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EVRPTW benchmark instance generator"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "generate a batch of screened instances");
    std::string config_path;
    int customers = 10, stations = -1, count = 1, threads = 1, clusters = 3;
    std::string family = "R", regime = "medium";
    std::uint64_t seed = 1;
    std::string out_dir = default_data_root().string();
    std::optional<double> sigma, rho, capacity, rate, charge_rate, horizon;
    bool persist_rejects = true, timing = false, no_verify = false;
    gen->add_option("--config", config_path, "JSON config used as the base")->check(CLI::ExistingFile);
    gen->add_option("--customers", customers, "number of customers N")->check(CLI::Range(0, 500));
    gen->add_option("--stations", stations, "external stations (default: standard count for N)")
        ->check(CLI::Range(0, 1000));
    gen->add_option("--family", family, "R, C or RC")->check(CLI::IsMember({"R", "C", "RC"}));
    gen->add_option("--regime", regime, "wide, medium or tight")->check(CLI::IsMember({"wide", "medium", "tight"}));
    gen->add_option("--count", count, "accepted instances wanted")->check(CLI::PositiveNumber);
    gen->add_option("--seed", seed, "base seed; attempt k uses seed + k");
    gen->add_option("--out", out_dir, "data root for feasible/ and infeasible/");
    gen->add_option("--clusters", clusters, "cluster count k")->check(CLI::PositiveNumber);
    gen->add_option("--sigma", sigma, "cluster spread");
    gen->add_option("--rho", rho, "clustered share for RC");
    gen->add_option("--capacity", capacity, "load capacity Q");
    gen->add_option("--rate", rate, "energy per unit distance r");
    gen->add_option("--charge-rate", charge_rate, "energy per unit time g");
    gen->add_option("--horizon", horizon, "planning horizon H");
    gen->add_flag("--persist-rejects,!--no-persist-rejects", persist_rejects, "write rejected attempts (default on)");
    gen->add_flag("--timing", timing, "record wall-clock timing in metadata");
    gen->add_flag("--no-verify", no_verify, "skip Stage 2");
    gen->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 256));

    // bench
    auto* bench = app.add_subcommand("bench", "sweep the family x regime x size grid");
    std::vector<int> sizes;
    std::vector<std::string> families, regimes;
    int target = 25, attempts = 0, solver_instances = 0;
    bool with_solver = false;
    double solver_budget = 5.0;
    std::string report_dir;
    bench->add_option("--config", config_path, "JSON config used as the base")->check(CLI::ExistingFile);
    bench->add_option("--sizes", sizes, "customer counts (default 5 10 20 ... 100)")->check(CLI::Range(1, 500));
    bench->add_option("--families", families, "subset of R C RC")->check(CLI::IsMember({"R", "C", "RC"}));
    bench->add_option("--regimes", regimes, "subset of wide medium tight")
        ->check(CLI::IsMember({"wide", "medium", "tight"}));
    bench->add_option("--target", target, "accepted instances per cell")->check(CLI::PositiveNumber);
    bench->add_option("--attempts", attempts, "fixed attempts per cell (overrides --target)")
        ->check(CLI::PositiveNumber);
    bench->add_option("--seed", seed, "base seed shared by all cells");
    bench->add_option("--threads", threads, "worker threads")->check(CLI::Range(1, 256));
    bench->add_flag("--with-solver", with_solver, "solve accepted instances and report distance and EV count");
    bench->add_option("--solver-instances", solver_instances, "instances solved per cell (0 = all)")
        ->check(CLI::NonNegativeNumber);
    bench->add_option("--solver-budget", solver_budget, "seconds per solve")->check(CLI::PositiveNumber);
    bench->add_option("--out", report_dir, "directory for acceptance.txt, gamma.csv, timing.csv, solver.csv, bench.json");

    // verify
    auto* ver = app.add_subcommand("verify", "screen an instance file and run the exact check");
    std::string path;
    bool force = false, single_vehicle = false;
    double budget = 10.0;
    ver->add_option("path", path, "instance .txt file")->required()->check(CLI::ExistingFile);
    ver->add_flag("--force", force, "run Stage 2 even when N > 10");
    ver->add_flag("--single-vehicle", single_vehicle, "one route must serve every customer");
    ver->add_option("--budget", budget, "Stage-2 time budget in seconds")->check(CLI::PositiveNumber);

    // solve
    auto* sol = app.add_subcommand("solve", "run the baseline metaheuristic on an instance file");
    std::uint64_t solver_seed = 1;
    sol->add_option("path", path, "instance .txt file")->required()->check(CLI::ExistingFile);
    sol->add_option("--budget", solver_budget, "time budget in seconds")->check(CLI::PositiveNumber);
    sol->add_option("--seed", solver_seed, "solver seed");

    // serve
    auto* srv = app.add_subcommand("serve", "run the HTTP API and serve the studio bundle");
    std::string host = "127.0.0.1", ui_dir;
    int port = 8080, workers = 2;
    srv->add_option("--host", host, "bind address");
    srv->add_option("--port", port, "port (0 picks a free one)")->check(CLI::Range(0, 65535));
    srv->add_option("--data-root", out_dir, "data root (default $EVGEN_DATA_ROOT or ./data)");
    srv->add_option("--ui", ui_dir, "built studio bundle directory");
    srv->add_option("--workers", workers, "background job workers")->check(CLI::Range(1, 64));

    CLI11_PARSE(app, argc, argv);
    std::signal(SIGINT, on_sigint);

    try {
        if (*gen) {
            GeneratorConfig config = config_path.empty() ? GeneratorConfig{} : load_config(config_path);
            config.spatial.customers = customers;
            config.spatial.family = parse_family(family);
            config.spatial.clusters = clusters;
            config.stations.target_count = stations >= 0 ? stations : default_station_count(customers);
            set_regime(config, parse_regime(regime));
            if (sigma) config.spatial.sigma = *sigma;
            if (rho) config.spatial.mix_ratio = *rho;
            if (capacity) config.vehicle.capacity = *capacity;
            if (rate) config.vehicle.consumption = *rate;
            if (charge_rate) config.vehicle.charge_rate = *charge_rate;
            if (horizon) config.windows.horizon = *horizon;
            if (no_verify) config.verification.enabled = false;
            validate(config);

            PersistOptions persist;
            persist.persist_rejects = persist_rejects;
            persist.metadata.include_timing = timing;
            BatchOptions options;
            options.threads = threads;
            options.cancel = &g_interrupted;
            options.keep_accepted = false;
            options.on_outcome = [&](const GenerationOutcome& o) { persist_outcome(o, out_dir, persist); };
            const auto result = generate_batch(config, count, seed, options);
            print_stats(result.stats);
            std::printf("written to %s\n", out_dir.c_str());
            if (result.stats.cancelled) {
                std::fprintf(stderr, "interrupted: partial batch\n");
                return kExitInterrupted;
            }
            if (result.stats.underflow) {
                std::fprintf(stderr, "attempt cap reached before %d acceptances\n", count);
                return kExitUnknown;
            }
            return 0;
        }

        if (*bench) {
            BenchOptions options;
            if (!config_path.empty()) options.base = load_config(config_path);
            if (!sizes.empty()) options.sizes = sizes;
            if (!families.empty()) {
                options.families.clear();
                for (const auto& f : families) options.families.push_back(parse_family(f));
            }
            if (!regimes.empty()) {
                options.regimes.clear();
                for (const auto& r : regimes) options.regimes.push_back(parse_regime(r));
            }
            options.target_accepted = target;
            options.attempts = attempts;
            options.base_seed = seed;
            options.threads = threads;
            options.with_solver = with_solver;
            options.solver_instances = solver_instances;
            options.solver.time_budget_seconds = solver_budget;
            options.cancel = &g_interrupted;
            options.on_cell = [](const BenchCell& c) {
                std::fprintf(stderr, "%s/%s N=%d: %d/%d accepted\n", std::string(to_string(c.family)).c_str(),
                             std::string(to_string(c.regime)).c_str(), c.customers, c.stats.accepted,
                             c.stats.attempted);
            };
            const auto matrix = run_bench(options);
            const std::string table = acceptance_table(matrix);
            std::printf("%s", table.c_str());
            if (!report_dir.empty()) {
                std::filesystem::create_directories(report_dir);
                const std::filesystem::path dir(report_dir);
                write_file(dir / "acceptance.txt", table);
                write_file(dir / "gamma.csv", gamma_csv(matrix));
                write_file(dir / "timing.csv", timing_csv(matrix));
                if (with_solver) write_file(dir / "solver.csv", solver_csv(matrix));
                write_file(dir / "bench.json", bench_to_json(matrix).dump(2) + "\n");
            } else {
                std::printf("\n%s\n%s", gamma_csv(matrix).c_str(), timing_csv(matrix).c_str());
                if (with_solver) std::printf("\n%s", solver_csv(matrix).c_str());
            }
            return matrix.complete ? 0 : kExitInterrupted;
        }

        if (*ver) {
            const Instance instance = read_instance_file(path);
            std::printf("%d customers, %d stations, R = %.6f\n", instance.customer_count(), instance.station_count(),
                        instance.vehicle.range());
            const auto report = screen(instance);
            print_screening(report);
            if (!report.passed()) return kExitInfeasible;
            if (instance.customer_count() > 10 && !force) {
                std::printf("stage 2: skipped (N > 10; use --force)\n");
                return 0;
            }
            SearchLimits limits;
            limits.time_budget_seconds = budget;
            if (single_vehicle) limits.fleet = FleetMode::single_vehicle;
            const auto result = verify(instance, limits);
            std::printf("stage 2: %s (%lld nodes, %.3f s, at most %d vehicles)\n",
                        std::string(to_string(result.status)).c_str(),
                        static_cast<long long>(result.nodes_explored), result.elapsed_seconds, result.vehicle_limit);
            for (const auto& route : result.witness) std::printf("  %s\n", route_text(route, instance).c_str());
            if (result.status == VerificationStatus::infeasible) return kExitInfeasible;
            if (result.status == VerificationStatus::unknown) return kExitUnknown;
            return 0;
        }

        if (*sol) {
            const Instance instance = read_instance_file(path);
            SolverParams params;
            params.time_budget_seconds = solver_budget;
            params.seed = solver_seed;
            const auto result = solve(instance, params);
            if (!result.solved()) {
                std::printf("no feasible solution: %s\n", result.failure.c_str());
                return kExitInfeasible;
            }
            const auto metrics = evaluate_solution(instance, *result.solution);
            std::printf("distance %.6f, %d vehicles, %d iterations, %.3f s (initial %.6f, %d vehicles)\n",
                        metrics.total_distance, metrics.ev_count, result.iterations, result.elapsed_seconds,
                        result.initial_distance, result.initial_ev_count);
            for (const auto& route : result.solution->routes)
                std::printf("  %s\n", route_text(route, instance).c_str());
            return 0;
        }

        if (*srv) {
            ServiceOptions options;
            options.data_root = out_dir;
            if (!ui_dir.empty()) options.ui_dir = ui_dir;
            options.workers = workers;
            Service service(options);
            const int bound = service.bind(host, port);
            if (bound < 0) {
                std::fprintf(stderr, "cannot bind %s:%d\n", host.c_str(), port);
                return kExitError;
            }
            g_service = &service;
            std::printf("listening on http://%s:%d (data root %s)\n", host.c_str(), bound, out_dir.c_str());
            std::fflush(stdout);
            service.listen();
            g_service = nullptr;
            return 0;
        }
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "invalid configuration:\n");
        for (const auto& f : e.errors()) std::fprintf(stderr, "  %s: %s\n", f.field.c_str(), f.message.c_str());
        return kExitError;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "%s: %s\n", path.c_str(), e.what());
        return kExitError;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitError;
    }
    return 0;
}

#include "evgen/bench.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

namespace evgen {

namespace {

std::string fixed(double value, int digits = 6) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    return buf;
}

bool cancelled(const BenchOptions& o) { return o.cancel && o.cancel->load(); }

}  // namespace

std::vector<RegimeSummary> BenchMatrix::summaries() const {
    std::vector<RegimeSummary> out;
    for (const auto& cell : cells) {
        auto it = std::find_if(out.begin(), out.end(), [&](const RegimeSummary& s) {
            return s.family == cell.family && s.regime == cell.regime;
        });
        if (it == out.end()) {
            out.push_back({cell.family, cell.regime});
            it = out.end() - 1;
        }
        ++it->cells;
        it->gamma_mean += cell.gamma();
    }
    for (auto& s : out) {
        s.gamma_mean /= s.cells;
        double sq = 0.0;
        for (const auto& cell : cells)
            if (cell.family == s.family && cell.regime == s.regime) sq += std::pow(cell.gamma() - s.gamma_mean, 2);
        s.gamma_std = s.cells > 1 ? std::sqrt(sq / (s.cells - 1)) : 0.0;
    }
    return out;
}

std::map<int, double> BenchMatrix::timing() const {
    std::vector<BatchStats> stats;
    for (const auto& c : cells) stats.push_back(c.stats);
    if (stats.empty()) return {};
    return timing_profile(stats);
}

BenchMatrix run_bench(const BenchOptions& options) {
    BenchMatrix matrix;
    matrix.with_solver = options.with_solver;
    for (Family family : options.families) {
        for (Regime regime : options.regimes) {
            for (int n : options.sizes) {
                if (cancelled(options)) {
                    matrix.complete = false;
                    return matrix;
                }
                GeneratorConfig config = options.base;
                config.spatial.family = family;
                config.spatial.customers = n;
                config.stations.target_count = default_station_count(n);
                set_regime(config, regime);

                BatchOptions batch;
                batch.threads = options.threads;
                batch.cancel = options.cancel;
                batch.keep_accepted = options.with_solver;
                BatchResult result = options.attempts > 0
                                         ? run_attempts(config, options.attempts, options.base_seed, batch)
                                         : generate_batch(config, options.target_accepted, options.base_seed, batch);

                BenchCell cell{family, regime, n, config.stations.target_count, std::move(result.stats), std::nullopt};
                if (options.with_solver) {
                    SolverCellMetrics metrics;
                    double distance = 0.0, evs = 0.0, seconds = 0.0;
                    for (const auto& outcome : result.accepted) {
                        if (options.solver_instances > 0 && metrics.attempted >= options.solver_instances) break;
                        if (cancelled(options)) break;
                        ++metrics.attempted;
                        const auto solved = solve(outcome.instance, options.solver);
                        seconds += solved.elapsed_seconds;
                        if (!solved.solved()) continue;
                        ++metrics.solved;
                        distance += solved.solution->total_distance;
                        evs += solved.solution->ev_count;
                    }
                    if (metrics.solved > 0) {
                        metrics.mean_distance = distance / metrics.solved;
                        metrics.mean_ev_count = evs / metrics.solved;
                    }
                    if (metrics.attempted > 0) metrics.mean_seconds = seconds / metrics.attempted;
                    cell.solver = metrics;
                }
                if (cell.stats.cancelled) matrix.complete = false;
                if (options.on_cell) options.on_cell(cell);
                matrix.cells.push_back(std::move(cell));
                if (!matrix.complete) return matrix;
            }
        }
    }
    return matrix;
}

std::string acceptance_table(const BenchMatrix& matrix) {
    const auto summaries = matrix.summaries();
    std::ostringstream out;
    out << "Acceptance rate gamma (%), mean +- std over sizes\n";
    out << "Family   Wide            Medium          Tight\n";
    for (Family f : {Family::random, Family::clustered, Family::mixed}) {
        bool any = false;
        std::string row = std::string(to_string(f));
        row.resize(9, ' ');
        for (Regime r : {Regime::wide, Regime::medium, Regime::tight}) {
            std::string entry = "-";
            for (const auto& s : summaries)
                if (s.family == f && s.regime == r) {
                    entry = fixed(100.0 * s.gamma_mean, 1) + " +- " + fixed(100.0 * s.gamma_std, 1);
                    any = true;
                }
            entry.resize(16, ' ');
            row += entry;
        }
        while (!row.empty() && row.back() == ' ') row.pop_back();
        if (any) out << row << "\n";
    }
    if (!matrix.complete) out << "(incomplete: interrupted)\n";
    return out.str();
}

std::string gamma_csv(const BenchMatrix& matrix) {
    std::ostringstream out;
    out << "family,regime,customers,stations,attempted,accepted,rejected_stage1,rejected_stage2,unknown_stage2,gamma\n";
    for (const auto& c : matrix.cells)
        out << to_string(c.family) << ',' << to_string(c.regime) << ',' << c.customers << ',' << c.stations << ','
            << c.stats.attempted << ',' << c.stats.accepted << ',' << c.stats.rejected_stage1 << ','
            << c.stats.rejected_stage2 << ',' << c.stats.unknown_stage2 << ',' << fixed(c.gamma()) << "\n";
    return out.str();
}

std::string timing_csv(const BenchMatrix& matrix) {
    std::ostringstream out;
    out << "customers,seconds_per_accepted\n";
    for (const auto& [n, seconds] : matrix.timing()) out << n << ',' << fixed(seconds) << "\n";
    return out.str();
}

std::string solver_csv(const BenchMatrix& matrix) {
    std::ostringstream out;
    out << "customers,family,regime,attempted,solved,mean_distance,mean_ev_count,mean_seconds\n";
    for (const auto& c : matrix.cells) {
        if (!c.solver) continue;
        out << c.customers << ',' << to_string(c.family) << ',' << to_string(c.regime) << ',' << c.solver->attempted
            << ',' << c.solver->solved << ',' << fixed(c.solver->mean_distance) << ','
            << fixed(c.solver->mean_ev_count) << ',' << fixed(c.solver->mean_seconds) << "\n";
    }
    return out.str();
}

json bench_to_json(const BenchMatrix& matrix) {
    json doc;
    doc["complete"] = matrix.complete;
    doc["with_solver"] = matrix.with_solver;
    json cells = json::array();
    for (const auto& c : matrix.cells) {
        json cell{{"family", to_string(c.family)},
                  {"regime", to_string(c.regime)},
                  {"customers", c.customers},
                  {"stations", c.stations},
                  {"attempted", c.stats.attempted},
                  {"accepted", c.stats.accepted},
                  {"rejected_stage1", c.stats.rejected_stage1},
                  {"rejected_stage2", c.stats.rejected_stage2},
                  {"unknown_stage2", c.stats.unknown_stage2},
                  {"gamma", c.gamma()},
                  {"underflow", c.stats.underflow}};
        json violations = json::object();
        for (const auto& [cond, count] : c.stats.violations) violations[std::string(to_string(cond))] = count;
        cell["violations"] = violations;
        if (c.solver)
            cell["solver"] = {{"attempted", c.solver->attempted},
                              {"solved", c.solver->solved},
                              {"mean_distance", c.solver->mean_distance},
                              {"mean_ev_count", c.solver->mean_ev_count},
                              {"mean_seconds", c.solver->mean_seconds}};
        cells.push_back(cell);
    }
    doc["cells"] = cells;
    json summary = json::array();
    for (const auto& s : matrix.summaries())
        summary.push_back({{"family", to_string(s.family)},
                           {"regime", to_string(s.regime)},
                           {"cells", s.cells},
                           {"gamma_mean", s.gamma_mean},
                           {"gamma_std", s.gamma_std}});
    doc["summary"] = summary;
    json timing = json::object();
    for (const auto& [n, seconds] : matrix.timing()) timing[std::to_string(n)] = seconds;
    doc["seconds_per_accepted"] = timing;
    return doc;
}

}  // namespace evgen

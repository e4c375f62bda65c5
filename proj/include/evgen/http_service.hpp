#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "evgen/solver.hpp"

namespace evgen {

/// $EVGEN_DATA_ROOT when set and non-empty, otherwise ./data.
std::filesystem::path default_data_root();

struct ServiceOptions {
    std::filesystem::path data_root = default_data_root();
    std::optional<std::filesystem::path> ui_dir;  // built studio bundle served at /
    int workers = 2;                              // background generation and bench jobs
    int max_batch_count = 10'000;
    int preview_cache = 64;  // previews kept for GET /api/instance
    SolverParams solver;
};

/// JSON API over the generator:
///
///   GET  /api/health
///   POST /api/preview          {"config": {...}, "seed": 7}
///   POST /api/generate         {"config": {...}, "seed": 7, "count": 25, "persist_rejects": true}
///   GET  /api/batch/{id}
///   GET  /api/instance/{name}  (?format=txt or ?format=meta for the raw files)
///   POST /api/solve/{name}     {"time_budget_seconds": 5, "seed": 1}
///   POST /api/bench            {"sizes": [...], "families": [...], "regimes": [...], "attempts": 100}
///   GET  /api/bench/{id}
///
/// Invalid configs answer 422 with {"error", "fields": [{"field", "message"}]};
/// unknown batches and instances answer 404.
class Service {
public:
    explicit Service(ServiceOptions options = {});
    ~Service();
    Service(const Service&) = delete;
    Service& operator=(const Service&) = delete;

    /// Binds to host:port; port 0 picks a free port. Returns the bound port or -1.
    int bind(const std::string& host, int port);
    /// Serves until stop(); call after bind().
    bool listen();
    void stop();
    bool running() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace evgen

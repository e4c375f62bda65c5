#include "evgen/http_service.hpp"

#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <cctype>
#include <condition_variable>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "evgen/bench.hpp"
#include "evgen/instance_io.hpp"
#include "evgen/json_codec.hpp"
#include "evgen/pipeline.hpp"

namespace evgen {

std::filesystem::path default_data_root() {
    if (const char* env = std::getenv("EVGEN_DATA_ROOT"); env && *env) return env;
    return "data";
}

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message) {
    send_json(res, status, json{{"error", message}});
}

void send_config_error(httplib::Response& res, const ConfigError& e) {
    json fields = json::array();
    for (const auto& f : e.errors()) fields.push_back({{"field", f.field}, {"message", f.message}});
    send_json(res, 422, json{{"error", "invalid config"}, {"fields", fields}});
}

// Names come from URLs and are joined to the data root.
bool safe_name(const std::string& name) {
    if (name.empty() || name.size() > 200 || name.front() == '.') return false;
    return std::all_of(name.begin(), name.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    });
}

std::string slurp(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

std::uint64_t read_seed(const json& body, const char* key, std::uint64_t fallback) {
    if (!body.contains(key)) return fallback;
    const auto& v = body.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
        throw ConfigError(key, "must be a non-negative integer");
    return v.get<std::uint64_t>();
}

json stats_json(const BatchStats& s) {
    json violations = json::object();
    for (const auto& [c, n] : s.violations) violations[std::string(to_string(c))] = n;
    return {{"attempted", s.attempted},
            {"accepted", s.accepted},
            {"rejected_stage1", s.rejected_stage1},
            {"rejected_stage2", s.rejected_stage2},
            {"unknown_stage2", s.unknown_stage2},
            {"gamma", s.attempted ? static_cast<double>(s.accepted) / s.attempted : 0.0},
            {"violations", violations},
            {"underflow", s.underflow},
            {"cancelled", s.cancelled}};
}

struct StoredInstance {
    std::string text;
    std::string metadata;
};

enum class JobState { queued, running, done, failed };

std::string_view to_string(JobState s) {
    switch (s) {
        case JobState::queued: return "queued";
        case JobState::running: return "running";
        case JobState::done: return "done";
        case JobState::failed: return "failed";
    }
    return "?";
}

struct Job {
    std::string id;
    JobState state = JobState::queued;
    std::string error;
    json request;
    BatchStats stats;       // generation jobs
    json files = json::array();
    json result;            // bench jobs
};

// Fixed-size worker pool for long-running jobs.
class WorkerPool {
public:
    explicit WorkerPool(int workers) {
        for (int i = 0; i < std::max(workers, 1); ++i)
            threads_.emplace_back([this](std::stop_token stop) { run(stop); });
    }
    ~WorkerPool() { shutdown(); }

    void submit(std::function<void()> task) {
        {
            std::lock_guard lock(mutex_);
            tasks_.push_back(std::move(task));
        }
        cv_.notify_one();
    }

    void shutdown() {
        for (auto& t : threads_) t.request_stop();
        cv_.notify_all();
        threads_.clear();
    }

private:
    void run(std::stop_token stop) {
        while (true) {
            std::function<void()> task;
            {
                std::unique_lock lock(mutex_);
                cv_.wait(lock, stop, [&] { return !tasks_.empty(); });
                if (stop.stop_requested()) return;
                task = std::move(tasks_.front());
                tasks_.pop_front();
            }
            task();
        }
    }

    std::mutex mutex_;
    std::condition_variable_any cv_;
    std::deque<std::function<void()>> tasks_;
    std::vector<std::jthread> threads_;
};

}  // namespace

struct Service::Impl {
    ServiceOptions options;
    httplib::Server server;
    std::atomic<bool> stopping{false};

    std::mutex mutex;  // guards jobs, previews and next_id
    std::map<std::string, std::shared_ptr<Job>> jobs;
    std::map<std::string, StoredInstance> previews;
    std::deque<std::string> preview_order;
    int next_id = 1;

    WorkerPool pool;

    explicit Impl(ServiceOptions o) : options(std::move(o)), pool(options.workers) { routes(); }

    ~Impl() {
        stopping = true;
        pool.shutdown();
    }

    std::shared_ptr<Job> new_job(const char* prefix, json request) {
        std::lock_guard lock(mutex);
        auto job = std::make_shared<Job>();
        job->id = std::string(prefix) + "-" + std::to_string(next_id++);
        job->request = std::move(request);
        jobs[job->id] = job;
        return job;
    }

    void remember_preview(const std::string& name, StoredInstance stored) {
        std::lock_guard lock(mutex);
        if (!previews.count(name)) preview_order.push_back(name);
        previews[name] = std::move(stored);
        while (static_cast<int>(preview_order.size()) > std::max(options.preview_cache, 1)) {
            previews.erase(preview_order.front());
            preview_order.pop_front();
        }
    }

    std::optional<StoredInstance> find_instance(const std::string& name) {
        for (const char* dir : {"feasible", "infeasible"}) {
            const auto base = options.data_root / dir;
            const auto txt = base / (name + ".txt");
            if (std::filesystem::exists(txt)) {
                StoredInstance s{slurp(txt), ""};
                const auto meta = base / (name + ".meta.json");
                if (std::filesystem::exists(meta)) s.metadata = slurp(meta);
                return s;
            }
        }
        std::lock_guard lock(mutex);
        if (auto it = previews.find(name); it != previews.end()) return it->second;
        return std::nullopt;
    }

    static json parse_body(const httplib::Request& req) {
        if (req.body.empty()) return json::object();
        json body = json::parse(req.body);
        if (!body.is_object()) throw std::invalid_argument("request body must be a JSON object");
        return body;
    }

    // Wraps a handler with the shared error mapping.
    template <typename F>
    auto guarded(F handler) {
        return [handler](const httplib::Request& req, httplib::Response& res) {
            try {
                handler(req, res);
            } catch (const ConfigError& e) {
                send_config_error(res, e);
            } catch (const json::exception& e) {
                send_error(res, 400, std::string("malformed JSON: ") + e.what());
            } catch (const ParseError& e) {
                send_error(res, 422, e.what());
            } catch (const std::invalid_argument& e) {
                send_error(res, 400, e.what());
            } catch (const std::exception& e) {
                send_error(res, 500, e.what());
            }
        };
    }

    void routes() {
        server.Get("/api/health", guarded([this](const httplib::Request&, httplib::Response& res) {
                       send_json(res, 200,
                                 json{{"status", "ok"},
                                      {"generator_version", kGeneratorVersion},
                                      {"data_root", options.data_root.string()}});
                   }));

        server.Post("/api/preview", guarded([this](const httplib::Request& req, httplib::Response& res) {
                        const json body = parse_body(req);
                        const GeneratorConfig config = config_from_json(body.value("config", json::object()));
                        const auto seed = read_seed(body, "seed", 1);
                        const auto outcome = generate_one(config, seed);
                        const std::string name = instance_name(outcome);
                        const json metadata = metadata_json(outcome);
                        const std::string text = write_instance_text(outcome.instance);
                        remember_preview(name, {text, metadata.dump(2) + "\n"});
                        send_json(res, 200,
                                  json{{"name", name},
                                       {"status", feasibility_status(outcome)},
                                       {"outcome", to_string(outcome.kind)},
                                       {"instance", instance_to_json(outcome.instance)},
                                       {"screening", screening_to_json(outcome.screening)},
                                       {"metadata", metadata},
                                       {"text", text}});
                    }));

        server.Post("/api/generate", guarded([this](const httplib::Request& req, httplib::Response& res) {
                        const json body = parse_body(req);
                        const GeneratorConfig config = config_from_json(body.value("config", json::object()));
                        const auto seed = read_seed(body, "seed", 1);
                        const json count_field = body.value("count", json(1));
                        if (!count_field.is_number_integer() || count_field.get<long long>() < 1 ||
                            count_field.get<long long>() > options.max_batch_count)
                            throw ConfigError("count", "must be an integer in [1, " +
                                                           std::to_string(options.max_batch_count) + "]");
                        const int count = count_field.get<int>();
                        const bool persist_rejects = body.value("persist_rejects", true);
                        auto job = new_job("batch", body);
                        pool.submit([this, job, config, seed, count, persist_rejects] {
                            run_generate(job, config, seed, count, persist_rejects);
                        });
                        send_json(res, 202, json{{"batch_id", job->id}});
                    }));

        server.Get(R"(/api/batch/([A-Za-z0-9_-]+))",
                   guarded([this](const httplib::Request& req, httplib::Response& res) {
                       std::lock_guard lock(mutex);
                       auto it = jobs.find(req.matches[1]);
                       if (it == jobs.end() || it->first.rfind("batch-", 0) != 0)
                           return send_error(res, 404, "unknown batch");
                       const Job& job = *it->second;
                       json body{{"batch_id", job.id},
                                 {"state", to_string(job.state)},
                                 {"target", job.request.value("count", 1)},
                                 {"stats", stats_json(job.stats)},
                                 {"files", job.files}};
                       if (!job.error.empty()) body["error"] = job.error;
                       send_json(res, 200, body);
                   }));

        server.Get(R"(/api/instance/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                       const std::string name = req.matches[1];
                       if (!safe_name(name)) return send_error(res, 404, "unknown instance");
                       const auto stored = find_instance(name);
                       if (!stored) return send_error(res, 404, "unknown instance");
                       const std::string format = req.has_param("format") ? req.get_param_value("format") : "";
                       if (format == "txt") {
                           res.set_content(stored->text, "text/plain");
                           return;
                       }
                       if (format == "meta") {
                           res.set_content(stored->metadata, "application/json");
                           return;
                       }
                       if (!format.empty()) return send_error(res, 400, "format must be txt or meta");
                       json body{{"name", name}, {"text", stored->text}};
                       body["instance"] = instance_to_json(parse_instance_text(stored->text));
                       body["metadata"] = stored->metadata.empty() ? json(nullptr) : json::parse(stored->metadata);
                       send_json(res, 200, body);
                   }));

        server.Post(R"(/api/solve/([^/]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
                        const std::string name = req.matches[1];
                        if (!safe_name(name)) return send_error(res, 404, "unknown instance");
                        const auto stored = find_instance(name);
                        if (!stored) return send_error(res, 404, "unknown instance");
                        const json body = parse_body(req);
                        SolverParams params = options.solver;
                        params.time_budget_seconds = body.value("time_budget_seconds", params.time_budget_seconds);
                        params.seed = read_seed(body, "seed", params.seed);
                        if (!(params.time_budget_seconds > 0.0) || params.time_budget_seconds > 600.0)
                            throw ConfigError("time_budget_seconds", "must lie in (0, 600]");
                        const Instance instance = parse_instance_text(stored->text);
                        const auto result = solve(instance, params);
                        json out{{"name", name},
                                 {"solved", result.solved()},
                                 {"initial_distance", result.initial_distance},
                                 {"initial_ev_count", result.initial_ev_count},
                                 {"iterations", result.iterations},
                                 {"elapsed_seconds", result.elapsed_seconds}};
                        if (result.solved()) {
                            out["total_distance"] = result.solution->total_distance;
                            out["ev_count"] = result.solution->ev_count;
                            out["routes"] = result.solution->routes;
                        } else {
                            out["failure"] = result.failure;
                        }
                        send_json(res, 200, out);
                    }));

        server.Post("/api/bench", guarded([this](const httplib::Request& req, httplib::Response& res) {
                        const json body = parse_body(req);
                        BenchOptions bench = bench_options(body);
                        auto job = new_job("bench", body);
                        pool.submit([this, job, bench]() mutable { run_bench_job(job, std::move(bench)); });
                        send_json(res, 202, json{{"bench_id", job->id}});
                    }));

        server.Get(R"(/api/bench/([A-Za-z0-9_-]+))",
                   guarded([this](const httplib::Request& req, httplib::Response& res) {
                       std::lock_guard lock(mutex);
                       auto it = jobs.find(req.matches[1]);
                       if (it == jobs.end() || it->first.rfind("bench-", 0) != 0)
                           return send_error(res, 404, "unknown bench");
                       const Job& job = *it->second;
                       json body{{"bench_id", job.id}, {"state", to_string(job.state)}, {"result", job.result}};
                       if (!job.error.empty()) body["error"] = job.error;
                       send_json(res, 200, body);
                   }));

        if (options.ui_dir && std::filesystem::is_directory(*options.ui_dir))
            server.set_mount_point("/", options.ui_dir->string());
    }

    BenchOptions bench_options(const json& body) {
        BenchOptions bench;
        bench.base = config_from_json(body.value("config", json::object()));
        std::vector<FieldError> errors;
        if (body.contains("sizes")) {
            bench.sizes.clear();
            for (const auto& v : body.at("sizes")) {
                if (!v.is_number_integer() || v.get<int>() < 1 || v.get<int>() > 500)
                    errors.push_back({"sizes", "sizes must be integers in [1, 500]"});
                else
                    bench.sizes.push_back(v.get<int>());
            }
        }
        if (body.contains("families")) {
            bench.families.clear();
            for (const auto& v : body.at("families")) bench.families.push_back(parse_family(v.get<std::string>()));
        }
        if (body.contains("regimes")) {
            bench.regimes.clear();
            for (const auto& v : body.at("regimes")) bench.regimes.push_back(parse_regime(v.get<std::string>()));
        }
        bench.attempts = body.value("attempts", 0);
        bench.target_accepted = body.value("target", 25);
        if (bench.attempts < 0 || bench.attempts > 100'000) errors.push_back({"attempts", "must lie in [0, 100000]"});
        if (bench.attempts == 0 && (bench.target_accepted < 1 || bench.target_accepted > 10'000))
            errors.push_back({"target", "must lie in [1, 10000]"});
        if (bench.sizes.empty() || bench.families.empty() || bench.regimes.empty())
            errors.push_back({"grid", "sizes, families and regimes must be non-empty"});
        if (!errors.empty()) throw ConfigError(errors);
        bench.base_seed = read_seed(body, "seed", 1);
        bench.with_solver = body.value("with_solver", false);
        bench.solver_instances = body.value("solver_instances", 5);
        bench.solver = options.solver;
        bench.cancel = &stopping;
        return bench;
    }

    void set_state(const std::shared_ptr<Job>& job, JobState state, std::string error = {}) {
        std::lock_guard lock(mutex);
        job->state = state;
        job->error = std::move(error);
    }

    void run_generate(const std::shared_ptr<Job>& job, const GeneratorConfig& config, std::uint64_t seed, int count,
                      bool persist_rejects) {
        set_state(job, JobState::running);
        try {
            BatchOptions batch;
            batch.cancel = &stopping;
            batch.keep_accepted = false;
            PersistOptions persist;
            persist.persist_rejects = persist_rejects;
            batch.on_outcome = [&](const GenerationOutcome& outcome) {
                const auto files = persist_outcome(outcome, options.data_root, persist);
                std::lock_guard lock(mutex);
                job->stats.record(outcome);
                if (files)
                    job->files.push_back({{"name", files->instance.stem().string()},
                                          {"status", feasibility_status(outcome)},
                                          {"instance", files->instance.string()},
                                          {"metadata", files->metadata.string()}});
            };
            const auto result = generate_batch(config, count, seed, batch);
            {
                std::lock_guard lock(mutex);
                job->stats.underflow = result.stats.underflow;
                job->stats.cancelled = result.stats.cancelled;
            }
            set_state(job, JobState::done);
        } catch (const std::exception& e) {
            set_state(job, JobState::failed, e.what());
        }
    }

    void run_bench_job(const std::shared_ptr<Job>& job, BenchOptions bench) {
        set_state(job, JobState::running);
        try {
            const auto matrix = run_bench(bench);
            {
                std::lock_guard lock(mutex);
                job->result = bench_to_json(matrix);
            }
            set_state(job, JobState::done);
        } catch (const std::exception& e) {
            set_state(job, JobState::failed, e.what());
        }
    }
};

Service::Service(ServiceOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {}

Service::~Service() { stop(); }

int Service::bind(const std::string& host, int port) {
    if (port == 0) return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool Service::listen() { return impl_->server.listen_after_bind(); }

void Service::stop() {
    impl_->stopping = true;
    impl_->server.stop();
}

bool Service::running() const { return impl_->server.is_running(); }

}  // namespace evgen

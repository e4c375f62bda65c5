#include "evgen/solver.hpp"

#include <algorithm>
#include <chrono>
#include <map>
#include <numeric>
#include <random>
#include <unordered_map>

namespace evgen {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kImprovement = 1e-9;
constexpr std::size_t kLabelsPerStop = 8;

struct Label {
    double time;  // departure from the stop
    double battery;
    double distance;
    int parent;
    NodeId via1;  // stations visited before the stop, -1 when unused
    NodeId via2;
};

}  // namespace

std::optional<std::vector<NodeId>> plan_route(const RoutingModel& m, std::span<const NodeId> customers) {
    if (customers.empty()) return std::vector<NodeId>{0, 0};
    const auto& v = m.vehicle();
    const double horizon = m.horizon();

    double load = 0.0;
    for (NodeId c : customers) load += m.demand(c);
    if (load > v.capacity + kTolerance) return std::nullopt;

    // Stations only delay the vehicle, so a window missed without them stays missed.
    {
        double t = 0.0;
        NodeId prev = 0;
        for (NodeId c : customers) {
            t = std::max(t + m.distance(prev, c), m.earliest(c));
            if (t > m.latest(c) + kTolerance) return std::nullopt;
            t += m.service(c);
            prev = c;
        }
        if (t + m.distance(prev, 0) > horizon + kTolerance) return std::nullopt;
    }
    {
        double y = v.battery;
        NodeId prev = 0;
        bool enough = true;
        for (std::size_t i = 0; i <= customers.size() && enough; ++i) {
            const NodeId next = i < customers.size() ? customers[i] : 0;
            y -= v.consumption * m.distance(prev, next);
            enough = y >= -kTolerance;
            prev = next;
        }
        if (enough) {
            std::vector<NodeId> route{0};
            route.insert(route.end(), customers.begin(), customers.end());
            route.push_back(0);
            return route;
        }
    }

    std::vector<Label> pool{{0.0, v.battery, 0.0, -1, -1, -1}};
    std::vector<int> layer{0};
    std::vector<int> candidates;
    for (std::size_t p = 0; p <= customers.size(); ++p) {
        const NodeId from = p == 0 ? 0 : customers[p - 1];
        const NodeId to = p < customers.size() ? customers[p] : 0;
        candidates.clear();

        for (int li : layer) {
            auto hop = [&](NodeId s1, NodeId s2) {
                const Label& l = pool[static_cast<std::size_t>(li)];
                double t = l.time, y = l.battery, dist = l.distance;
                NodeId at = from;
                for (NodeId s : {s1, s2}) {
                    if (s < 0) continue;
                    const double d = m.distance(at, s);
                    y -= v.consumption * d;
                    if (y < -kTolerance) return false;
                    t += d + (v.battery - y) / v.charge_rate;
                    dist += d;
                    y = v.battery;
                    at = s;
                    if (t + m.distance(s, 0) > horizon + kTolerance) return false;
                }
                const double d = m.distance(at, to);
                y -= v.consumption * d;
                if (y < -kTolerance) return false;
                t += d;
                dist += d;
                if (to != 0) {
                    if (t > m.latest(to) + kTolerance) return false;
                    t = std::max(t, m.earliest(to)) + m.service(to);
                    if (t + m.distance(to, 0) > horizon + kTolerance) return false;
                    if (y + kTolerance < v.consumption * m.nearest_charger_distance(to)) return false;
                } else if (t > horizon + kTolerance) {
                    return false;
                }
                candidates.push_back(static_cast<int>(pool.size()));
                pool.push_back({t, y, dist, li, s1, s2});
                return true;
            };
            bool reached = hop(-1, -1);
            for (NodeId s : m.stations())
                if (s != from) reached = hop(s, -1) || reached;
            if (!reached)
                for (NodeId s1 : m.stations())
                    for (NodeId s2 : m.stations())
                        if (s1 != s2 && s1 != from) hop(s1, s2);
        }

        std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
            return pool[static_cast<std::size_t>(a)].distance < pool[static_cast<std::size_t>(b)].distance;
        });
        layer.clear();
        for (int c : candidates) {
            const Label& l = pool[static_cast<std::size_t>(c)];
            const bool dominated = std::any_of(layer.begin(), layer.end(), [&](int k) {
                const Label& kept = pool[static_cast<std::size_t>(k)];
                return kept.time <= l.time && kept.battery >= l.battery;
            });
            if (!dominated) layer.push_back(c);
            if (layer.size() == kLabelsPerStop) break;
        }
        if (layer.empty()) return std::nullopt;
    }

    std::vector<NodeId> reversed;
    for (int li = layer.front(); li > 0;) {
        const Label& l = pool[static_cast<std::size_t>(li)];
        reversed.push_back(-2);  // placeholder for the stop, filled below
        if (l.via2 >= 0) reversed.push_back(l.via2);
        if (l.via1 >= 0) reversed.push_back(l.via1);
        li = l.parent;
    }
    // Stops are the customers followed by the closing depot.
    std::vector<NodeId> stops(customers.begin(), customers.end());
    stops.push_back(0);
    std::size_t stop = stops.size();
    for (auto& id : reversed)
        if (id == -2) id = stops[--stop];
    std::vector<NodeId> route{0};
    route.insert(route.end(), reversed.rbegin(), reversed.rend());
    return route;
}

Solution make_solution(const Instance& instance, std::vector<std::vector<NodeId>> routes) {
    Solution s;
    s.routes = std::move(routes);
    const auto metrics = evaluate_solution(instance, s);
    s.total_distance = metrics.total_distance;
    s.ev_count = metrics.ev_count;
    const RoutingModel model(instance);
    for (const auto& r : s.routes) s.traces.push_back(simulate_route(model, r).trace);
    return s;
}

SolutionMetrics evaluate_solution(const Instance& instance, const Solution& solution) {
    const RoutingModel model(instance);
    SolutionMetrics metrics;
    std::vector<int> served(static_cast<std::size_t>(instance.customer_count() + 1), 0);
    for (std::size_t i = 0; i < solution.routes.size(); ++i) {
        const auto& route = solution.routes[i];
        const auto sim = simulate_route(model, route);
        if (!sim.feasible())
            throw InvalidSolution(static_cast<int>(i), sim.violation,
                                  "route " + std::to_string(i) + " violates " +
                                      std::string(to_string(sim.violation->kind)) + " at node " +
                                      std::to_string(sim.violation->node) + ": " + sim.violation->detail);
        bool has_customer = false;
        for (NodeId id : route)
            if (model.is_customer(id)) {
                ++served[static_cast<std::size_t>(id)];
                has_customer = true;
            }
        metrics.total_distance += sim.trace.distance;
        if (has_customer) ++metrics.ev_count;
        metrics.route_slack.push_back(model.horizon() - sim.trace.completion);
    }
    for (NodeId c = 1; c <= instance.customer_count(); ++c)
        if (served[static_cast<std::size_t>(c)] != 1)
            throw InvalidSolution(-1, std::nullopt,
                                  "customer " + std::to_string(c) + " served " +
                                      std::to_string(served[static_cast<std::size_t>(c)]) + " times");
    return metrics;
}

namespace {

struct SequenceHash {
    std::size_t operator()(const std::vector<NodeId>& seq) const {
        std::size_t h = 1469598103934665603ull;
        for (NodeId id : seq) h = (h ^ static_cast<std::size_t>(id)) * 1099511628211ull;
        return h;
    }
};

struct Planned {
    std::vector<NodeId> route;
    double distance = 0.0;
};

class Planner {
public:
    explicit Planner(const RoutingModel& model) : model_(model) {}

    const std::optional<Planned>& plan(const std::vector<NodeId>& customers) {
        if (auto it = cache_.find(customers); it != cache_.end()) return it->second;
        if (cache_.size() > 400'000) cache_.clear();
        std::optional<Planned> result;
        if (auto route = plan_route(model_, customers))
            result = Planned{*route, route_distance(model_, *route)};
        return cache_.emplace(customers, std::move(result)).first->second;
    }

    const RoutingModel& model() const { return model_; }

private:
    const RoutingModel& model_;
    std::unordered_map<std::vector<NodeId>, std::optional<Planned>, SequenceHash> cache_;
};

struct Tour {
    std::vector<NodeId> customers;
    Planned planned;
    int uid = 0;
};

struct State {
    std::vector<Tour> tours;
    double distance = 0.0;

    void refresh() {
        std::erase_if(tours, [](const Tour& t) { return t.customers.empty(); });
        distance = 0.0;
        for (const auto& t : tours) distance += t.planned.distance;
    }
};

struct Position {
    int tour = -1;
    int index = -1;
};

class Search {
public:
    Search(const Instance& instance, const SolverParams& params)
        : instance_(instance), model_(instance), planner_(model_), params_(params), rng_(params.seed),
          start_(Clock::now()) {
        const int n = model_.customer_count();
        neighbors_.resize(static_cast<std::size_t>(n + 1));
        for (NodeId u = 1; u <= n; ++u) {
            std::vector<NodeId> others;
            for (NodeId w = 1; w <= n; ++w)
                if (w != u) others.push_back(w);
            std::stable_sort(others.begin(), others.end(),
                             [&](NodeId a, NodeId b) { return model_.distance(u, a) < model_.distance(u, b); });
            if (static_cast<int>(others.size()) > params_.neighbor_count)
                others.resize(static_cast<std::size_t>(std::max(params_.neighbor_count, 0)));
            neighbors_[static_cast<std::size_t>(u)] = std::move(others);
        }
    }

    std::optional<State> construct(std::string& failure) {
        std::vector<NodeId> order(static_cast<std::size_t>(model_.customer_count()));
        std::iota(order.begin(), order.end(), 1);
        std::stable_sort(order.begin(), order.end(),
                         [&](NodeId a, NodeId b) { return model_.earliest(a) < model_.earliest(b); });
        State state;
        for (NodeId c : order) {
            if (!insert_cheapest(state, c, -1)) {
                const auto& alone = planner_.plan({c});
                if (!alone) {
                    failure = "customer " + std::to_string(c) + " cannot be served even by a dedicated route";
                    return std::nullopt;
                }
                state.tours.push_back({{c}, *alone, next_uid_++});
            }
            state.refresh();
        }
        return state;
    }

    State improve(State initial, int& rounds) {
        State current = std::move(initial);
        descend(current);
        State best = current;
        int stagnation = 0;
        for (rounds = 0; rounds < params_.max_iterations && !out_of_time(); ++rounds) {
            round_ = rounds + 1;
            State candidate = current;
            const int moves = 1 + stagnation % std::max(1, params_.max_shake_moves);
            shake(candidate, moves);
            descend(candidate);
            if (candidate.distance < current.distance - kImprovement) {
                current = std::move(candidate);
                if (current.distance < best.distance - kImprovement) {
                    best = current;
                    stagnation = 0;
                } else {
                    ++stagnation;
                }
            } else {
                ++stagnation;
                // Return to the best solution occasionally so shaking does not drift.
                if (stagnation % 10 == 0) current = best;
            }
            if (stagnation >= params_.stagnation_limit) break;
        }
        return best;
    }

    Solution to_solution(const State& state) const {
        std::vector<std::vector<NodeId>> routes;
        for (const auto& t : state.tours) routes.push_back(t.planned.route);
        return make_solution(instance_, std::move(routes));
    }

    bool out_of_time() const {
        return std::chrono::duration<double>(Clock::now() - start_).count() > params_.time_budget_seconds;
    }

    double elapsed() const { return std::chrono::duration<double>(Clock::now() - start_).count(); }

private:
    // Cheapest feasible insertion of c into any tour except `skip`.
    bool insert_cheapest(State& state, NodeId c, int skip) {
        if (!model_.is_customer(c)) return false;
        int best_tour = -1;
        std::optional<Planned> best;
        std::vector<NodeId> best_seq;
        double best_delta = 0.0;
        for (std::size_t t = 0; t < state.tours.size(); ++t) {
            if (static_cast<int>(t) == skip) continue;
            const auto& tour = state.tours[t];
            double load = model_.demand(c);
            for (NodeId u : tour.customers) load += model_.demand(u);
            if (load > model_.vehicle().capacity + kTolerance) continue;
            for (std::size_t pos = 0; pos <= tour.customers.size(); ++pos) {
                auto seq = tour.customers;
                seq.insert(seq.begin() + static_cast<std::ptrdiff_t>(pos), c);
                const auto& planned = planner_.plan(seq);
                if (!planned) continue;
                const double delta = planned->distance - tour.planned.distance;
                if (!best || delta < best_delta) {
                    best = planned;
                    best_delta = delta;
                    best_tour = static_cast<int>(t);
                    best_seq = std::move(seq);
                }
            }
        }
        if (!best) return false;
        auto& tour = state.tours[static_cast<std::size_t>(best_tour)];
        tour.customers = std::move(best_seq);
        tour.planned = *best;
        return true;
    }

    std::vector<Position> locate(const State& state) const {
        std::vector<Position> where(static_cast<std::size_t>(model_.customer_count() + 1));
        for (std::size_t t = 0; t < state.tours.size(); ++t)
            for (std::size_t i = 0; i < state.tours[t].customers.size(); ++i)
                where[static_cast<std::size_t>(state.tours[t].customers[i])] = {static_cast<int>(t),
                                                                                 static_cast<int>(i)};
        return where;
    }

    bool tabu(NodeId customer, int uid) const {
        auto it = tabu_until_.find({customer, uid});
        return it != tabu_until_.end() && it->second >= round_;
    }

    void remember(NodeId customer, int left_uid) { tabu_until_[{customer, left_uid}] = round_ + params_.tabu_tenure; }

    // Evaluates replacing tours a (and b, when different) by new customer
    // sequences; applies the change when it shortens the solution.
    bool try_replace(State& state, int a, std::vector<NodeId> seq_a, int b, std::vector<NodeId> seq_b) {
        auto& ta = state.tours[static_cast<std::size_t>(a)];
        const bool two = b != a;
        double old_cost = ta.planned.distance;
        double new_cost = 0.0;
        std::optional<Planned> pa;
        std::optional<Planned> pb;
        if (seq_a.empty()) {
            pa = Planned{{0, 0}, 0.0};
        } else {
            pa = planner_.plan(seq_a);
            if (!pa) return false;
        }
        new_cost += pa->distance;
        if (two) {
            auto& tb = state.tours[static_cast<std::size_t>(b)];
            old_cost += tb.planned.distance;
            if (seq_b.empty()) {
                pb = Planned{{0, 0}, 0.0};
            } else {
                pb = planner_.plan(seq_b);
                if (!pb) return false;
            }
            new_cost += pb->distance;
        }
        if (new_cost >= old_cost - kImprovement) return false;
        ta.customers = std::move(seq_a);
        ta.planned = *pa;
        if (two) {
            auto& tb = state.tours[static_cast<std::size_t>(b)];
            tb.customers = std::move(seq_b);
            tb.planned = *pb;
        }
        return true;
    }

    bool relocate(State& state) {
        bool improved = false;
        for (NodeId u : customer_order()) {
            if (out_of_time()) break;
            auto where = locate(state);
            const auto [ta, ia] = where[static_cast<std::size_t>(u)];
            for (NodeId v : neighbors_[static_cast<std::size_t>(u)]) {
                const auto [tb, ib] = where[static_cast<std::size_t>(v)];
                for (int offset : {0, 1}) {
                    auto seq_a = state.tours[static_cast<std::size_t>(ta)].customers;
                    seq_a.erase(seq_a.begin() + ia);
                    if (ta == tb) {
                        int pos = ib + offset - (ib > ia ? 1 : 0);
                        if (pos == ia) continue;
                        seq_a.insert(seq_a.begin() + pos, u);
                        if (try_replace(state, ta, std::move(seq_a), ta, {})) {
                            improved = true;
                            goto next_customer;
                        }
                    } else {
                        if (tabu(u, state.tours[static_cast<std::size_t>(tb)].uid)) continue;
                        auto seq_b = state.tours[static_cast<std::size_t>(tb)].customers;
                        seq_b.insert(seq_b.begin() + ib + offset, u);
                        if (try_replace(state, ta, std::move(seq_a), tb, std::move(seq_b))) {
                            remember(u, state.tours[static_cast<std::size_t>(ta)].uid);
                            state.refresh();
                            improved = true;
                            goto next_customer;
                        }
                    }
                }
            }
        next_customer:
            state.refresh();
        }
        return improved;
    }

    bool exchange(State& state) {
        bool improved = false;
        for (NodeId u : customer_order()) {
            if (out_of_time()) break;
            auto where = locate(state);
            const auto [ta, ia] = where[static_cast<std::size_t>(u)];
            for (NodeId v : neighbors_[static_cast<std::size_t>(u)]) {
                const auto [tb, ib] = where[static_cast<std::size_t>(v)];
                if (ta == tb) continue;
                const int uid_a = state.tours[static_cast<std::size_t>(ta)].uid;
                const int uid_b = state.tours[static_cast<std::size_t>(tb)].uid;
                if (tabu(u, uid_b) || tabu(v, uid_a)) continue;
                auto seq_a = state.tours[static_cast<std::size_t>(ta)].customers;
                auto seq_b = state.tours[static_cast<std::size_t>(tb)].customers;
                seq_a[static_cast<std::size_t>(ia)] = v;
                seq_b[static_cast<std::size_t>(ib)] = u;
                if (try_replace(state, ta, std::move(seq_a), tb, std::move(seq_b))) {
                    remember(u, uid_a);
                    remember(v, uid_b);
                    improved = true;
                    break;
                }
            }
            state.refresh();
        }
        return improved;
    }

    bool two_opt_star(State& state) {
        bool improved = false;
        for (NodeId u : customer_order()) {
            if (out_of_time()) break;
            auto where = locate(state);
            const auto [ta, ia] = where[static_cast<std::size_t>(u)];
            bool moved = false;
            for (NodeId v : neighbors_[static_cast<std::size_t>(u)]) {
                const auto [tb, ib] = where[static_cast<std::size_t>(v)];
                if (ta == tb) continue;
                const auto& a = state.tours[static_cast<std::size_t>(ta)].customers;
                const auto& b = state.tours[static_cast<std::size_t>(tb)].customers;
                // Variant 0 links u -> v, variant 1 swaps the tails after u and v.
                for (int variant : {0, 1}) {
                    const int cut_b = ib + variant;
                    std::vector<NodeId> seq_a(a.begin(), a.begin() + ia + 1);
                    seq_a.insert(seq_a.end(), b.begin() + cut_b, b.end());
                    std::vector<NodeId> seq_b(b.begin(), b.begin() + cut_b);
                    seq_b.insert(seq_b.end(), a.begin() + ia + 1, a.end());
                    if (try_replace(state, ta, std::move(seq_a), tb, std::move(seq_b))) {
                        improved = moved = true;
                        break;
                    }
                }
                if (moved) break;
            }
            state.refresh();
        }
        return improved;
    }

    bool route_merge(State& state) {
        std::vector<int> order(state.tours.size());
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
            return state.tours[static_cast<std::size_t>(x)].customers.size() <
                   state.tours[static_cast<std::size_t>(y)].customers.size();
        });
        for (int t : order) {
            if (out_of_time()) break;
            State trial = state;
            const auto removed = trial.tours[static_cast<std::size_t>(t)].customers;
            const int uid = trial.tours[static_cast<std::size_t>(t)].uid;
            bool placed_all = true;
            for (NodeId c : removed)
                if (!insert_cheapest(trial, c, t)) {
                    placed_all = false;
                    break;
                }
            if (!placed_all) continue;
            trial.tours[static_cast<std::size_t>(t)].customers.clear();
            trial.refresh();
            if (trial.distance < state.distance - kImprovement) {
                for (NodeId c : removed) remember(c, uid);
                state = std::move(trial);
                return true;
            }
        }
        return false;
    }

    void descend(State& state) {
        state.refresh();
        bool improved = true;
        while (improved && !out_of_time()) {
            improved = (params_.relocate && relocate(state)) || (params_.exchange && exchange(state)) ||
                       (params_.two_opt_star && two_opt_star(state)) || (params_.route_merge && route_merge(state));
            state.refresh();
        }
        best_seen_ = std::min(best_seen_, state.distance);
    }

    void shake(State& state, int moves) {
        const int n = model_.customer_count();
        if (n < 2) return;
        std::uniform_int_distribution<int> pick_customer(1, n);
        for (int m = 0; m < moves; ++m) {
            for (int attempt = 0; attempt < 20; ++attempt) {
                const NodeId u = pick_customer(rng_);
                auto where = locate(state);
                const auto [ta, ia] = where[static_cast<std::size_t>(u)];
                std::uniform_int_distribution<int> pick_tour(0, static_cast<int>(state.tours.size()));
                const int tb = pick_tour(rng_);  // == size opens a new route
                auto seq_a = state.tours[static_cast<std::size_t>(ta)].customers;
                seq_a.erase(seq_a.begin() + ia);
                std::optional<Planned> pa = seq_a.empty() ? Planned{{0, 0}, 0.0} : planner_.plan(seq_a);
                if (!pa) continue;
                if (tb == static_cast<int>(state.tours.size())) {
                    if (seq_a.empty()) continue;
                    const auto& alone = planner_.plan({u});
                    if (!alone) continue;
                    const int uid = state.tours[static_cast<std::size_t>(ta)].uid;
                    state.tours[static_cast<std::size_t>(ta)].customers = std::move(seq_a);
                    state.tours[static_cast<std::size_t>(ta)].planned = *pa;
                    state.tours.push_back({{u}, *alone, next_uid_++});
                    remember(u, uid);
                } else {
                    if (tb == ta) continue;
                    auto seq_b = state.tours[static_cast<std::size_t>(tb)].customers;
                    std::uniform_int_distribution<int> pick_pos(0, static_cast<int>(seq_b.size()));
                    seq_b.insert(seq_b.begin() + pick_pos(rng_), u);
                    const auto& pb = planner_.plan(seq_b);
                    if (!pb) continue;
                    const int uid = state.tours[static_cast<std::size_t>(ta)].uid;
                    state.tours[static_cast<std::size_t>(ta)].customers = std::move(seq_a);
                    state.tours[static_cast<std::size_t>(ta)].planned = *pa;
                    state.tours[static_cast<std::size_t>(tb)].customers = std::move(seq_b);
                    state.tours[static_cast<std::size_t>(tb)].planned = *pb;
                    remember(u, uid);
                }
                state.refresh();
                break;
            }
        }
    }

    std::vector<NodeId> customer_order() {
        std::vector<NodeId> order(static_cast<std::size_t>(model_.customer_count()));
        std::iota(order.begin(), order.end(), 1);
        std::shuffle(order.begin(), order.end(), rng_);
        return order;
    }

    const Instance& instance_;
    RoutingModel model_;
    Planner planner_;
    SolverParams params_;
    std::mt19937_64 rng_;
    Clock::time_point start_;
    std::vector<std::vector<NodeId>> neighbors_;
    std::map<std::pair<NodeId, int>, int> tabu_until_;
    int round_ = 0;
    int next_uid_ = 0;
    double best_seen_ = std::numeric_limits<double>::infinity();
};

}  // namespace

SolveResult construct_initial(const Instance& instance) {
    SolveResult result;
    const auto start = Clock::now();
    Search search(instance, SolverParams{});
    auto state = search.construct(result.failure);
    if (state) {
        result.solution = search.to_solution(*state);
        result.initial_distance = result.solution->total_distance;
        result.initial_ev_count = result.solution->ev_count;
    }
    result.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return result;
}

SolveResult solve(const Instance& instance, const SolverParams& params) {
    SolveResult result;
    Search search(instance, params);
    auto state = search.construct(result.failure);
    if (!state) {
        result.elapsed_seconds = search.elapsed();
        return result;
    }
    const Solution initial = search.to_solution(*state);
    result.initial_distance = initial.total_distance;
    result.initial_ev_count = initial.ev_count;

    State best = search.improve(std::move(*state), result.iterations);
    Solution improved = search.to_solution(best);
    // Plan distances and simulated distances agree up to rounding; keep the
    // construction when the search did not beat it.
    result.solution = improved.total_distance <= initial.total_distance ? std::move(improved) : initial;
    result.elapsed_seconds = search.elapsed();
    return result;
}

}  // namespace evgen

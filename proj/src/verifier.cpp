#include "evgen/verifier.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <unordered_map>

namespace evgen {

std::string_view to_string(VerificationStatus status) {
    switch (status) {
        case VerificationStatus::feasible: return "feasible";
        case VerificationStatus::infeasible: return "infeasible";
        case VerificationStatus::unknown: return "unknown";
    }
    return "?";
}

int default_vehicle_limit(const Instance& instance) {
    const int n = instance.customer_count();
    if (n == 0) return 0;
    const int needed = static_cast<int>(std::ceil(instance.total_demand() / instance.vehicle.capacity - kTolerance));
    return std::clamp(needed + 1, 1, n);
}

namespace {

using Clock = std::chrono::steady_clock;
using Mask = std::uint32_t;

struct BudgetExhausted {};

class Search {
public:
    Search(const Instance& instance, const SearchLimits& limits)
        : model_(instance), limits_(limits), n_(instance.customer_count()), start_(Clock::now()) {
        if (n_ > 24) throw std::invalid_argument("exact verification supports at most 24 customers");
        counts_.assign(static_cast<std::size_t>(model_.node_count()), 0);
    }

    VerificationResult run(int vehicle_limit) {
        VerificationResult result;
        result.vehicle_limit = vehicle_limit;
        try {
            if (n_ == 0) {
                result.status = VerificationStatus::feasible;
            } else {
                path_.push_back(0);
                extend(0, 0, 0.0, 0.0, model_.vehicle().battery);
                result.feasible_customer_sets = static_cast<int>(routes_.size());
                result.status = partition(vehicle_limit, result.witness) ? VerificationStatus::feasible
                                                                         : VerificationStatus::infeasible;
            }
        } catch (const BudgetExhausted&) {
            result.status = VerificationStatus::unknown;
            result.witness.clear();
        }
        result.nodes_explored = nodes_;
        result.elapsed_seconds = std::chrono::duration<double>(Clock::now() - start_).count();
        return result;
    }

private:
    struct Label {
        double time;
        double battery;
        std::vector<std::uint8_t> counts;  // station visits, indexed by station order
    };

    void tick() {
        ++nodes_;
        if (nodes_ > limits_.node_budget) throw BudgetExhausted{};
        if ((nodes_ & 1023) == 0 &&
            std::chrono::duration<double>(Clock::now() - start_).count() > limits_.time_budget_seconds)
            throw BudgetExhausted{};
    }

    std::vector<std::uint8_t> station_counts() const {
        std::vector<std::uint8_t> c;
        c.reserve(model_.stations().size());
        for (NodeId s : model_.stations()) c.push_back(counts_[s]);
        return c;
    }

    static bool no_more(const std::vector<std::uint8_t>& a, const std::vector<std::uint8_t>& b) {
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a[i] > b[i]) return false;
        return true;
    }

    // True when the state is dominated by a stored label; otherwise stores it.
    bool dominated(NodeId node, Mask mask, double time, double battery) {
        auto& bucket = labels_[(static_cast<std::uint64_t>(node) << 32) | mask];
        auto counts = station_counts();
        for (const auto& l : bucket)
            if (l.time <= time && l.battery >= battery && no_more(l.counts, counts)) return true;
        std::erase_if(bucket, [&](const Label& l) {
            return time <= l.time && battery >= l.battery && no_more(counts, l.counts);
        });
        bucket.push_back({time, battery, std::move(counts)});
        return false;
    }

    void extend(NodeId node, Mask mask, double load, double time, double battery) {
        tick();
        const auto& v = model_.vehicle();
        const double horizon = model_.horizon();

        if (node != 0 && mask != 0 && !routes_.contains(mask)) {
            const double d = model_.distance(node, 0);
            if (battery - v.consumption * d >= -kTolerance && time + d <= horizon + kTolerance) {
                auto route = path_;
                route.push_back(0);
                routes_.emplace(mask, std::move(route));
            }
        }

        for (NodeId j = 1; j <= n_; ++j) {
            const Mask bit = Mask{1} << (j - 1);
            if (mask & bit) continue;
            const double d = model_.distance(node, j);
            const double y = battery - v.consumption * d;
            if (y < -kTolerance) continue;
            const double arrival = time + d;
            if (arrival > model_.latest(j) + kTolerance) continue;
            const double new_load = load + model_.demand(j);
            if (new_load > v.capacity + kTolerance) continue;
            const double departure = std::max(arrival, model_.earliest(j)) + model_.service(j);
            if (departure + model_.distance(j, 0) > horizon + kTolerance) continue;
            if (y + kTolerance < v.consumption * model_.nearest_charger_distance(j)) continue;
            if (dominated(j, mask | bit, departure, y)) continue;
            path_.push_back(j);
            extend(j, mask | bit, new_load, departure, y);
            path_.pop_back();
        }

        for (NodeId s : model_.stations()) {
            if (s == node || counts_[s] >= limits_.max_station_visits) continue;
            const double d = model_.distance(node, s);
            const double y = battery - v.consumption * d;
            if (y < -kTolerance) continue;
            const double departure = time + d + (v.battery - y) / v.charge_rate;
            if (departure + model_.distance(s, 0) > horizon + kTolerance) continue;
            ++counts_[s];
            if (!dominated(s, mask, departure, v.battery)) {
                path_.push_back(s);
                extend(s, mask, load, departure, v.battery);
                path_.pop_back();
            }
            --counts_[s];
        }
    }

    bool partition(int vehicle_limit, std::vector<std::vector<NodeId>>& witness) {
        const Mask all = (Mask{1} << n_) - 1;
        if (vehicle_limit <= 0) return false;

        by_customer_.assign(static_cast<std::size_t>(n_), {});
        for (const auto& [mask, route] : routes_)
            by_customer_[static_cast<std::size_t>(std::countr_zero(mask))].push_back(mask);
        for (auto& list : by_customer_)
            std::sort(list.begin(), list.end(), [](Mask a, Mask b) {
                const int pa = std::popcount(a), pb = std::popcount(b);
                return pa != pb ? pa > pb : a < b;
            });

        // The lowest uncovered customer must be in the next chosen set, and any
        // such set inside the uncovered customers has it as lowest member.
        failed_.assign(std::size_t{1} << n_, -1);
        std::vector<Mask> chosen;
        if (!cover(all, vehicle_limit, chosen)) return false;
        for (Mask m : chosen) witness.push_back(routes_.at(m));
        return true;
    }

    bool cover(Mask uncovered, int routes_left, std::vector<Mask>& chosen) {
        tick();
        if (uncovered == 0) return true;
        if (routes_left == 0) return false;
        if (failed_[uncovered] >= routes_left) return false;

        double demand = 0.0;
        for (Mask rest = uncovered; rest; rest &= rest - 1) demand += model_.demand(std::countr_zero(rest) + 1);
        const int needed = static_cast<int>(std::ceil(demand / model_.vehicle().capacity - kTolerance));
        if (needed > routes_left) {
            failed_[uncovered] = static_cast<std::int8_t>(routes_left);
            return false;
        }

        const int c = std::countr_zero(uncovered);
        for (Mask m : by_customer_[static_cast<std::size_t>(c)]) {
            if ((m & uncovered) != m) continue;
            chosen.push_back(m);
            if (cover(uncovered & ~m, routes_left - 1, chosen)) return true;
            chosen.pop_back();
        }
        failed_[uncovered] = static_cast<std::int8_t>(std::min(routes_left, 127));
        return false;
    }

    RoutingModel model_;
    SearchLimits limits_;
    int n_;
    Clock::time_point start_;
    std::int64_t nodes_ = 0;
    std::vector<int> counts_;
    std::vector<NodeId> path_;
    std::unordered_map<std::uint64_t, std::vector<Label>> labels_;
    std::unordered_map<Mask, std::vector<NodeId>> routes_;
    std::vector<std::vector<Mask>> by_customer_;
    std::vector<std::int8_t> failed_;
};

}  // namespace

VerificationResult verify(const Instance& instance, const SearchLimits& limits) {
    int m = limits.max_vehicles > 0 ? limits.max_vehicles : default_vehicle_limit(instance);
    if (limits.fleet == FleetMode::single_vehicle) m = std::min(m, 1);
    Search search(instance, limits);
    return search.run(m);
}

}  // namespace evgen

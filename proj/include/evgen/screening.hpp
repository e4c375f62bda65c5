#pragma once

#include <string_view>
#include <vector>

#include "evgen/model.hpp"

namespace evgen {

enum class Condition { energy_reachability, depot_return, station_accessibility };

std::string_view to_string(Condition condition);
Condition parse_condition(std::string_view text);

struct ScreeningViolation {
    Condition condition;
    NodeId customer = 0;
    double measured = 0.0;
    double threshold = 0.0;
};

struct ScreeningReport {
    std::vector<ScreeningViolation> violations;

    bool passed() const { return violations.empty(); }
    bool violates(Condition condition) const;
};

/// min over depot and stations of d(i, p) <= R for every customer.
ScreeningReport check_energy_reachability(const Instance& instance);

/// e_i + s_i + t_i0 <= H for every customer.
ScreeningReport check_depot_return(const Instance& instance);

/// Some external station within R of every customer. The depot does not
/// count here, so an instance without stations fails for every customer.
ScreeningReport check_station_accessibility(const Instance& instance);

/// All three checks, every violation reported. O(N (|S| + 1)).
ScreeningReport screen(const Instance& instance);

}  // namespace evgen

#pragma once

#include <span>
#include <vector>

#include "problock/netlist.hpp"

namespace problock {

/// Largest gate fan-in whose truth table is enumerated.
inline constexpr std::size_t kMaxControlFanIn = 16;

/// Control values of a gate's inputs over its output wire.
struct ControlProfile {
    std::string wire;
    std::vector<double> per_input_cv;
    double mean_cv = 0;
};

/// cv(i) = fraction of the 2^(n-1) assignments of the other inputs for which
/// toggling input i toggles the output.
ControlProfile control_profile(GateType type, std::size_t fan_in);
ControlProfile control_profile(const Gate& gate);

inline constexpr double kDefaultLowDependencyThreshold = 0.5;

/// Keeps the gates whose output-wire mean control value is strictly below threshold.
std::vector<GateId> low_dependent_filter(std::span<const GateId> subset, const Netlist& netlist,
                                         double threshold = kDefaultLowDependencyThreshold);

}  // namespace problock

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "problock/graph.hpp"

namespace problock {

/// Per-gate-type delays. The DFF entry is the clock-to-Q offset of a DFF
/// output acting as a timing start point.
struct DelayModel {
    std::array<double, kGateTypeCount> delay{1, 1, 1, 1, 1, 1, 1, 1, 0};

    static DelayModel unit() { return {}; }
    double of(GateType t) const { return delay[static_cast<std::size_t>(t)]; }
    double key_gate_delay() const { return std::max(of(GateType::Xor), of(GateType::Xnor)); }
};

/// Parses `GATETYPE <delay>` lines (`#` comments); unspecified types keep unit delay.
DelayModel parse_delay_table(std::string_view text);

struct TimingReport {
    std::vector<double> arrival;  // per graph node
    std::vector<double> slack;    // per graph node; +inf where no sink is reachable
    double critical_delay = 0;
    std::vector<GateId> critical_nodes;  // gates with zero slack, ascending
    std::uint64_t critical_path_count = 0;
    bool path_count_saturated = false;

    bool is_critical(GateId g) const { return std::binary_search(critical_nodes.begin(), critical_nodes.end(), g); }
};

inline constexpr std::uint64_t kDefaultCriticalPathCap = 100;

/// Static timing: arrival (forward), required/slack (backward), and the number
/// of distinct zero-slack source->sink paths, saturating at cp_cap.
/// `extra_gate_delay`, when non-empty, adds a per-gate delay on top of the model
/// (used to price in key gates before they exist).
TimingReport analyze_timing(const CircuitGraph& graph, const DelayModel& model,
                            std::uint64_t cp_cap = kDefaultCriticalPathCap,
                            std::span<const double> extra_gate_delay = {});

enum class CpMode : std::uint8_t {
    /// Drop every gate on a critical path.
    StrictPaper,
    /// Drop gates whose slack cannot absorb one key gate.
    SlackAware,
};

std::string_view to_string(CpMode mode);

std::vector<GateId> remove_critical(std::span<const GateId> subset, const TimingReport& report, CpMode mode,
                                    double key_gate_delay);

}  // namespace problock

#include "problock/dependency.hpp"

#include <array>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace problock {

ControlProfile control_profile(GateType type, std::size_t fan_in) {
    if (fan_in == 0) throw std::invalid_argument("control_profile: gate has no inputs");
    if (fan_in > kMaxControlFanIn) {
        throw std::invalid_argument("control_profile: fan-in " + std::to_string(fan_in) + " exceeds the cap of " +
                                    std::to_string(kMaxControlFanIn));
    }
    ControlProfile p;
    p.per_input_cv.reserve(fan_in);
    const std::uint64_t rows = std::uint64_t{1} << (fan_in - 1);
    for (std::size_t i = 0; i < fan_in; ++i) {
        const std::uint64_t low_mask = (std::uint64_t{1} << i) - 1;
        std::uint64_t toggles = 0;
        for (std::uint64_t others = 0; others < rows; ++others) {
            // Spread the n-1 "other" bits around position i.
            const std::uint64_t base = (others & low_mask) | ((others & ~low_mask) << 1);
            const bool x0 = evaluate_gate(type, base, fan_in);
            const bool x1 = evaluate_gate(type, base | (std::uint64_t{1} << i), fan_in);
            if (x0 != x1) ++toggles;
        }
        p.per_input_cv.push_back(static_cast<double>(toggles) / static_cast<double>(rows));
    }
    p.mean_cv = std::accumulate(p.per_input_cv.begin(), p.per_input_cv.end(), 0.0) /
                static_cast<double>(p.per_input_cv.size());
    return p;
}

ControlProfile control_profile(const Gate& gate) {
    try {
        auto p = control_profile(gate.type, gate.inputs.size());
        p.wire = gate.output;
        return p;
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument("gate '" + gate.output + "': " + e.what());
    }
}

std::vector<GateId> low_dependent_filter(std::span<const GateId> subset, const Netlist& netlist, double threshold) {
    if (!(threshold > 0.0 && threshold <= 1.0)) throw std::invalid_argument("low_dependent_filter: threshold must be in (0, 1]");
    // Mean cv depends only on (type, fan-in); memoize per pair.
    std::array<std::array<std::optional<double>, kMaxControlFanIn + 1>, kGateTypeCount> memo{};
    std::vector<GateId> kept;
    for (GateId g : subset) {
        const Gate& gate = netlist.gate(g);
        const std::size_t n = gate.inputs.size();
        double mean;
        if (n <= kMaxControlFanIn) {
            auto& slot = memo[static_cast<std::size_t>(gate.type)][n];
            if (!slot) slot = control_profile(gate).mean_cv;
            mean = *slot;
        } else {
            mean = control_profile(gate).mean_cv;  // throws with the gate name
        }
        if (mean < threshold) kept.push_back(g);
    }
    return kept;
}

}  // namespace problock

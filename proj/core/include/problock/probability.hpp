#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "problock/netlist.hpp"

namespace problock {

/// Probability of logic 1 for named primary inputs; unlisted inputs default to 0.5.
using InputProbabilities = std::map<std::string, double, std::less<>>;

/// Parses `<pi-name> <prob>` lines with `#` comments.
InputProbabilities parse_input_probabilities(std::string_view text);

/// Signal probabilities, indexed by SignalId.
struct ProbabilityMap {
    std::vector<double> prob;

    double of(const Netlist& netlist, std::string_view wire) const;
};

inline constexpr int kDefaultDffIterations = 3;

/// Propagates signal probabilities under the input-independence assumption.
/// Key inputs are 0.5. DFF outputs start at 0.5; the whole circuit is evaluated
/// dff_iters times, each pass feeding DFF outputs the D probabilities of the
/// previous pass.
ProbabilityMap propagate(const Netlist& netlist, const InputProbabilities& inputs = {},
                         int dff_iters = kDefaultDffIterations);

/// Output probability of a single gate given its input probabilities.
double gate_probability(GateType type, std::span<const double> inputs);

struct BiasSelection {
    std::vector<GateId> nodes;
    std::vector<double> bias_at_selection;
    std::vector<GateId> rejected;  // turned down by the admission check, in visit order
};

/// Greedy pick of the n candidates with the largest |p - 0.5|. After each pick
/// the chosen gate's output is spliced through a virtual XOR with a 0.5 key, so
/// later picks see the reset probability. Ties go to the lower gate id.
/// When `admit` is set, each pick is offered to it first; a refused gate is
/// dropped from the pool, and fewer than n nodes come back if the pool runs dry.
BiasSelection select_biased(const Netlist& netlist, std::span<const GateId> candidates, std::size_t n,
                            const InputProbabilities& inputs = {}, int dff_iters = kDefaultDffIterations,
                            const std::function<bool(GateId)>& admit = {});

}  // namespace problock

#include "problock/probability.hpp"

#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace problock {

namespace {

double xor2(double a, double b) { return a * (1.0 - b) + b * (1.0 - a); }

ProbabilityMap run(const Netlist& netlist, const InputProbabilities& inputs, int dff_iters,
                   const std::vector<char>& keyed) {
    if (dff_iters < 1) throw std::invalid_argument("propagate: dff_iters must be >= 1");
    ProbabilityMap out;
    auto& p = out.prob;
    p.assign(netlist.num_signals(), 0.5);
    for (std::size_t i = 0; i < netlist.primary_inputs().size(); ++i) {
        auto it = inputs.find(netlist.primary_inputs()[i]);
        if (it == inputs.end()) continue;
        if (!(it->second >= 0.0 && it->second <= 1.0)) {
            throw std::invalid_argument("propagate: probability of '" + it->first + "' is outside [0, 1]");
        }
        p[i] = it->second;
    }

    std::vector<double> scratch;
    auto output_of = [&](GateId g, double raw) { return keyed.empty() || !keyed[g] ? raw : xor2(raw, 0.5); };
    const int passes = netlist.is_sequential() ? dff_iters : 1;
    std::vector<double> next_state(netlist.dffs().size());
    for (int pass = 0; pass < passes; ++pass) {
        for (GateId g : netlist.topo_order()) {
            const auto fi = netlist.fanin(g);
            scratch.resize(fi.size());
            for (std::size_t k = 0; k < fi.size(); ++k) scratch[k] = p[fi[k]];
            p[netlist.signal_of_gate(g)] = output_of(g, gate_probability(netlist.gate(g).type, scratch));
        }
        if (pass + 1 == passes) break;
        const auto dffs = netlist.dffs();
        for (std::size_t i = 0; i < dffs.size(); ++i) next_state[i] = p[netlist.fanin(dffs[i])[0]];
        for (std::size_t i = 0; i < dffs.size(); ++i) {
            p[netlist.signal_of_gate(dffs[i])] = output_of(dffs[i], next_state[i]);
        }
    }
    return out;
}

}  // namespace

InputProbabilities parse_input_probabilities(std::string_view text) {
    InputProbabilities out;
    std::istringstream in{std::string(text)};
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string name;
        if (!(ls >> name)) continue;
        double value = 0;
        if (!(ls >> value) || !(value >= 0.0 && value <= 1.0)) {
            throw std::invalid_argument("input probability line " + std::to_string(line_no) +
                                        ": expected '<name> <prob>' with prob in [0, 1]");
        }
        out[name] = value;
    }
    return out;
}

double ProbabilityMap::of(const Netlist& netlist, std::string_view wire) const {
    auto s = netlist.find_signal(wire);
    if (!s) throw std::out_of_range("no wire named '" + std::string(wire) + "'");
    return prob.at(*s);
}

double gate_probability(GateType type, std::span<const double> in) {
    switch (type) {
        case GateType::And:
        case GateType::Nand: {
            double v = 1.0;
            for (double x : in) v *= x;
            return type == GateType::And ? v : 1.0 - v;
        }
        case GateType::Or:
        case GateType::Nor: {
            double v = 1.0;
            for (double x : in) v *= 1.0 - x;
            return type == GateType::Nor ? v : 1.0 - v;
        }
        case GateType::Xor:
        case GateType::Xnor: {
            double v = in[0];
            for (std::size_t i = 1; i < in.size(); ++i) v = xor2(v, in[i]);
            return type == GateType::Xor ? v : 1.0 - v;
        }
        case GateType::Not: return 1.0 - in[0];
        case GateType::Buf:
        case GateType::Dff: return in[0];
    }
    return 0.5;
}

ProbabilityMap propagate(const Netlist& netlist, const InputProbabilities& inputs, int dff_iters) {
    return run(netlist, inputs, dff_iters, {});
}

BiasSelection select_biased(const Netlist& netlist, std::span<const GateId> candidates, std::size_t n,
                            const InputProbabilities& inputs, int dff_iters, const std::function<bool(GateId)>& admit) {
    if (n > candidates.size()) {
        throw std::invalid_argument("select_biased: asked for " + std::to_string(n) + " nodes from " +
                                    std::to_string(candidates.size()) + " candidates");
    }
    std::vector<char> keyed(netlist.num_gates(), 0);
    std::vector<char> taken(netlist.num_gates(), 0);
    BiasSelection sel;
    sel.nodes.reserve(n);
    auto probs = run(netlist, inputs, dff_iters, keyed);
    while (sel.nodes.size() < n) {
        std::optional<GateId> best;
        double best_bias = -1.0;
        for (GateId g : candidates) {
            if (taken[g]) continue;
            // Untaken candidates are not keyed, so this is the gate's own output.
            const double raw = probs.prob[netlist.signal_of_gate(g)];
            const double bias = std::abs(raw - 0.5);
            if (bias > best_bias || (bias == best_bias && g < *best)) {
                best = g;
                best_bias = bias;
            }
        }
        if (!best) break;
        taken[*best] = 1;
        if (admit && !admit(*best)) {
            sel.rejected.push_back(*best);
            continue;
        }
        keyed[*best] = 1;
        sel.nodes.push_back(*best);
        sel.bias_at_selection.push_back(best_bias);
        if (sel.nodes.size() < n) probs = run(netlist, inputs, dff_iters, keyed);
    }
    return sel;
}

}  // namespace problock

#include "problock/simulation.hpp"

#include <algorithm>
#include <stdexcept>

namespace problock {

Word evaluate_gate_word(GateType type, std::span<const Word> in) {
    Word acc = in[0];
    switch (type) {
        case GateType::And:
        case GateType::Nand:
            for (std::size_t i = 1; i < in.size(); ++i) acc &= in[i];
            return type == GateType::And ? acc : ~acc;
        case GateType::Or:
        case GateType::Nor:
            for (std::size_t i = 1; i < in.size(); ++i) acc |= in[i];
            return type == GateType::Or ? acc : ~acc;
        case GateType::Xor:
        case GateType::Xnor:
            for (std::size_t i = 1; i < in.size(); ++i) acc ^= in[i];
            return type == GateType::Xor ? acc : ~acc;
        case GateType::Not: return ~acc;
        case GateType::Buf:
        case GateType::Dff: return acc;
    }
    return acc;
}

Simulator::Simulator(const Netlist& netlist) : netlist_(&netlist) {}

std::vector<Word> Simulator::evaluate(std::span<const Word> pi, std::span<const Word> key,
                                      std::span<const Word> state) const {
    const Netlist& n = *netlist_;
    if (pi.size() != n.primary_inputs().size() || key.size() != n.key_inputs().size() || state.size() != n.dffs().size()) {
        throw std::invalid_argument("Simulator: input word counts do not match netlist '" + n.name() + "'");
    }
    std::vector<Word> value(n.num_signals(), 0);
    std::copy(pi.begin(), pi.end(), value.begin());
    std::copy(key.begin(), key.end(), value.begin() + n.first_key_signal());
    for (std::size_t i = 0; i < state.size(); ++i) value[n.signal_of_gate(n.dffs()[i])] = state[i];

    std::vector<Word> scratch;
    for (GateId g : n.topo_order()) {
        scratch.clear();
        for (SignalId s : n.fanin(g)) scratch.push_back(value[s]);
        value[n.signal_of_gate(g)] = evaluate_gate_word(n.gates()[g].type, scratch);
    }
    return value;
}

Simulator::Frame Simulator::step(std::span<const Word> pi, std::span<const Word> key, std::span<const Word> state) const {
    const Netlist& n = *netlist_;
    const auto value = evaluate(pi, key, state);
    Frame f;
    f.outputs.reserve(n.output_signals().size());
    for (SignalId s : n.output_signals()) f.outputs.push_back(value[s]);
    f.next_state.reserve(n.dffs().size());
    for (GateId d : n.dffs()) f.next_state.push_back(value[n.fanin(d)[0]]);
    return f;
}

namespace {

std::vector<Word> lanes_from(const BitMap& map, const std::vector<std::string>& names, std::string_view what) {
    std::vector<Word> out;
    out.reserve(names.size());
    for (const auto& name : names) {
        auto it = map.find(name);
        if (it == map.end()) throw std::invalid_argument("simulate: missing " + std::string(what) + " '" + name + "'");
        out.push_back(it->second ? ~Word{0} : Word{0});
    }
    if (map.size() != names.size()) {
        throw std::invalid_argument("simulate: vector assigns a wire that is not a " + std::string(what));
    }
    return out;
}

}  // namespace

StepResult simulate_step(const Netlist& netlist, const SimVector& vector) {
    std::vector<std::string> dff_names;
    for (GateId d : netlist.dffs()) dff_names.push_back(netlist.gates()[d].output);
    const auto pi = lanes_from(vector.assignment, netlist.primary_inputs(), "primary input");
    const auto key = lanes_from(vector.key_assignment, netlist.key_inputs(), "key input");
    const auto state = lanes_from(vector.state, dff_names, "DFF");

    const auto frame = Simulator(netlist).step(pi, key, state);
    StepResult r;
    for (std::size_t i = 0; i < frame.outputs.size(); ++i) {
        r.outputs[netlist.primary_outputs()[i]] = (frame.outputs[i] & 1) != 0;
    }
    for (std::size_t i = 0; i < frame.next_state.size(); ++i) r.next_state[dff_names[i]] = (frame.next_state[i] & 1) != 0;
    return r;
}

BitMap simulate(const Netlist& netlist, const SimVector& vector) {
    return simulate_step(netlist, vector).outputs;
}

}  // namespace problock

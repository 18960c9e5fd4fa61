#include "problock/netlist.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <deque>
#include <string>

namespace problock {

namespace {

constexpr std::array<std::string_view, kGateTypeCount> kKeywords = {
    "AND", "NAND", "OR", "NOR", "XOR", "XNOR", "NOT", "BUFF", "DFF"};

bool starts_with_reserved(std::string_view s) {
    return s.substr(0, kReservedPrefix.size()) == kReservedPrefix;
}

}  // namespace

std::string_view to_string(GateType type) {
    return kKeywords[static_cast<std::size_t>(type)];
}

std::optional<GateType> gate_type_from_keyword(std::string_view keyword) {
    std::string upper(keyword);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (upper == "BUF") return GateType::Buf;
    for (std::size_t i = 0; i < kKeywords.size(); ++i) {
        if (kKeywords[i] == upper) return static_cast<GateType>(i);
    }
    return std::nullopt;
}

bool evaluate_gate(GateType type, std::uint64_t bits, std::size_t fan_in) {
    const std::uint64_t mask = fan_in >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << fan_in) - 1;
    bits &= mask;
    switch (type) {
        case GateType::And: return bits == mask;
        case GateType::Nand: return bits != mask;
        case GateType::Or: return bits != 0;
        case GateType::Nor: return bits == 0;
        case GateType::Xor: return (std::popcount(bits) & 1) != 0;
        case GateType::Xnor: return (std::popcount(bits) & 1) == 0;
        case GateType::Not: return (bits & 1) == 0;
        case GateType::Buf:
        case GateType::Dff: return (bits & 1) != 0;
    }
    return false;
}

std::string_view to_string(Polarity p) {
    return p == Polarity::Xor ? "XOR" : "XNOR";
}

std::string_view to_string(NetlistError::Kind kind) {
    switch (kind) {
        case NetlistError::Kind::Syntax: return "syntax error";
        case NetlistError::Kind::DuplicateDriver: return "duplicate driver";
        case NetlistError::Kind::UndrivenWire: return "undriven wire";
        case NetlistError::Kind::CombinationalCycle: return "combinational cycle";
        case NetlistError::Kind::UnknownGate: return "unknown gate";
        case NetlistError::Kind::Arity: return "arity violation";
        case NetlistError::Kind::ReservedName: return "reserved name";
        case NetlistError::Kind::KeyMetadata: return "key metadata";
        case NetlistError::Kind::Io: return "i/o error";
    }
    return "error";
}

NetlistError::NetlistError(Kind kind, std::string message, std::optional<std::size_t> gate)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), gate_(gate) {}

NetlistError NetlistError::with_location(std::size_t line, std::size_t column) const {
    std::string msg = "line " + std::to_string(line);
    if (column != 0) msg += ", column " + std::to_string(column);
    msg += ": ";
    msg += what();
    NetlistError copy(*this);
    static_cast<std::runtime_error&>(copy) = std::runtime_error(msg);
    copy.line_ = line;
    copy.column_ = column;
    return copy;
}

Netlist Netlist::build(NetlistParts parts, BuildOptions options) {
    using Kind = NetlistError::Kind;
    Netlist n;
    n.parts_ = std::move(parts);
    const auto& p = n.parts_;

    const std::size_t num_pi = p.primary_inputs.size();
    const std::size_t num_key = p.key_inputs.size();
    const std::size_t num_signals = num_pi + num_key + p.gates.size();
    n.signal_index_.reserve(num_signals);

    auto declare = [&](const std::string& wire, SignalId id, std::optional<std::size_t> gate) {
        if (wire.empty()) throw NetlistError(Kind::Syntax, "empty wire name", gate);
        if (!options.allow_reserved_names && starts_with_reserved(wire)) {
            throw NetlistError(Kind::ReservedName,
                               "wire '" + wire + "' uses the reserved prefix " + std::string(kReservedPrefix), gate);
        }
        if (!n.signal_index_.emplace(wire, id).second) {
            throw NetlistError(Kind::DuplicateDriver, "wire '" + wire + "' has more than one driver", gate);
        }
    };

    SignalId next = 0;
    for (const auto& pi : p.primary_inputs) declare(pi, next++, std::nullopt);
    for (const auto& k : p.key_inputs) declare(k, next++, std::nullopt);
    for (std::size_t g = 0; g < p.gates.size(); ++g) declare(p.gates[g].output, next++, g);

    n.fanin_.resize(p.gates.size());
    n.fanout_.resize(num_signals);
    for (std::size_t g = 0; g < p.gates.size(); ++g) {
        const Gate& gate = p.gates[g];
        if (!arity_ok(gate.type, gate.inputs.size())) {
            throw NetlistError(Kind::Arity,
                               std::string(to_string(gate.type)) + " gate '" + gate.output + "' has " +
                                   std::to_string(gate.inputs.size()) + " input(s)",
                               g);
        }
        auto& fi = n.fanin_[g];
        fi.reserve(gate.inputs.size());
        for (const auto& in : gate.inputs) {
            auto it = n.signal_index_.find(in);
            if (it == n.signal_index_.end()) {
                throw NetlistError(Kind::UndrivenWire, "wire '" + in + "' read by '" + gate.output + "' has no driver",
                                   g);
            }
            fi.push_back(it->second);
            auto& fo = n.fanout_[it->second];
            if (fo.empty() || fo.back() != g) fo.push_back(static_cast<GateId>(g));
        }
        if (gate.type == GateType::Dff) n.dffs_.push_back(static_cast<GateId>(g));
    }

    for (const auto& po : p.primary_outputs) {
        auto it = n.signal_index_.find(po);
        if (it == n.signal_index_.end()) {
            throw NetlistError(Kind::UndrivenWire, "primary output '" + po + "' has no driver");
        }
        n.po_signals_.push_back(it->second);
    }

    // Kahn's algorithm over combinational gates; DFF outputs are sources.
    const SignalId first_gate = n.first_gate_signal();
    std::vector<std::uint32_t> pending(p.gates.size(), 0);
    std::deque<GateId> ready;
    for (std::size_t g = 0; g < p.gates.size(); ++g) {
        if (p.gates[g].type == GateType::Dff) continue;
        for (SignalId s : n.fanin_[g]) {
            if (s >= first_gate && p.gates[s - first_gate].type != GateType::Dff) ++pending[g];
        }
        if (pending[g] == 0) ready.push_back(static_cast<GateId>(g));
    }
    n.topo_.reserve(p.gates.size() - n.dffs_.size());
    while (!ready.empty()) {
        GateId g = ready.front();
        ready.pop_front();
        n.topo_.push_back(g);
        for (GateId succ : n.fanout_[first_gate + g]) {
            if (p.gates[succ].type == GateType::Dff) continue;
            // A gate may read the same wire more than once.
            for (SignalId s : n.fanin_[succ]) {
                if (s == first_gate + g && --pending[succ] == 0) ready.push_back(succ);
            }
        }
    }
    if (n.topo_.size() != p.gates.size() - n.dffs_.size()) {
        std::size_t witness = 0;
        for (std::size_t g = 0; g < p.gates.size(); ++g) {
            if (p.gates[g].type != GateType::Dff && pending[g] != 0) {
                witness = g;
                break;
            }
        }
        throw NetlistError(Kind::CombinationalCycle,
                           "gate '" + p.gates[witness].output + "' lies on a cycle that does not pass through a DFF",
                           witness);
    }

    if (p.key) {
        const auto& key = *p.key;
        if (key.key.size() != num_key || key.gates.size() != num_key) {
            throw NetlistError(Kind::KeyMetadata, "key header describes " + std::to_string(key.key.size()) +
                                                      " bit(s) and " + std::to_string(key.gates.size()) +
                                                      " key gate(s) but the netlist has " + std::to_string(num_key) +
                                                      " key input(s)");
        }
    }
    return n;
}

std::optional<SignalId> Netlist::find_signal(std::string_view wire) const {
    auto it = signal_index_.find(std::string(wire));
    if (it == signal_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<GateId> Netlist::find_gate(std::string_view output_wire) const {
    auto s = find_signal(output_wire);
    if (!s) return std::nullopt;
    return driver(*s);
}

const std::string& Netlist::signal_name(SignalId s) const {
    if (s < first_key_signal()) return parts_.primary_inputs.at(s);
    if (s < first_gate_signal()) return parts_.key_inputs.at(s - first_key_signal());
    return parts_.gates.at(s - first_gate_signal()).output;
}

std::size_t count_nodes(const Netlist& netlist, NodeCounting convention) {
    if (convention == NodeCounting::Auto) {
        convention = netlist.is_sequential() ? NodeCounting::LogicGates : NodeCounting::AllGates;
    }
    if (convention == NodeCounting::AllGates) return netlist.num_gates();
    return static_cast<std::size_t>(std::count_if(netlist.gates().begin(), netlist.gates().end(), [](const Gate& g) {
        return g.type != GateType::Not && g.type != GateType::Buf && g.type != GateType::Dff;
    }));
}

}  // namespace problock

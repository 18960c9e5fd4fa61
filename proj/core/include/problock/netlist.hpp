#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace problock {

enum class GateType : std::uint8_t { And, Nand, Or, Nor, Xor, Xnor, Not, Buf, Dff };

inline constexpr std::size_t kGateTypeCount = 9;

/// Canonical bench keyword ("AND", "BUFF", "DFF", ...).
std::string_view to_string(GateType type);

/// Case-insensitive keyword lookup; accepts both BUF and BUFF.
std::optional<GateType> gate_type_from_keyword(std::string_view keyword);

constexpr bool is_unary(GateType t) {
    return t == GateType::Not || t == GateType::Buf || t == GateType::Dff;
}

constexpr bool arity_ok(GateType t, std::size_t fan_in) {
    return is_unary(t) ? fan_in == 1 : fan_in >= 2;
}

/// Boolean function of a gate type over `fan_in` inputs packed LSB-first in `bits`.
/// DFF evaluates as a buffer (its combinational view).
bool evaluate_gate(GateType type, std::uint64_t bits, std::size_t fan_in);

struct Gate {
    GateType type{GateType::Buf};
    std::string output;
    std::vector<std::string> inputs;

    friend bool operator==(const Gate&, const Gate&) = default;
};

enum class Polarity : std::uint8_t { Xor, Xnor };

std::string_view to_string(Polarity p);

/// One key gate as recorded in a locked netlist header.
struct KeyGateRecord {
    std::string tapped_wire;
    Polarity polarity{Polarity::Xor};

    friend bool operator==(const KeyGateRecord&, const KeyGateRecord&) = default;
};

struct KeyMetadata {
    std::vector<bool> key;
    std::vector<KeyGateRecord> gates;

    friend bool operator==(const KeyMetadata&, const KeyMetadata&) = default;
};

/// Plain-data description of a netlist. Copy it out of a Netlist, edit, and
/// rebuild to derive a modified circuit.
struct NetlistParts {
    std::string name;
    std::vector<std::string> primary_inputs;
    std::vector<std::string> primary_outputs;
    std::vector<std::string> key_inputs;
    std::vector<Gate> gates;
    std::optional<KeyMetadata> key;

    friend bool operator==(const NetlistParts&, const NetlistParts&) = default;
};

/// Wires reserved for generated names. User netlists may not use them.
inline constexpr std::string_view kReservedPrefix = "__pl_";

class NetlistError : public std::runtime_error {
public:
    enum class Kind {
        Syntax,
        DuplicateDriver,
        UndrivenWire,
        CombinationalCycle,
        UnknownGate,
        Arity,
        ReservedName,
        KeyMetadata,
        Io,
    };

    NetlistError(Kind kind, std::string message, std::optional<std::size_t> gate = std::nullopt);

    Kind kind() const noexcept { return kind_; }
    /// 1-based source position, when the error came from the parser.
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    std::optional<std::size_t> gate_index() const noexcept { return gate_; }

    NetlistError with_location(std::size_t line, std::size_t column) const;

private:
    Kind kind_;
    std::size_t line_ = 0;
    std::size_t column_ = 0;
    std::optional<std::size_t> gate_;
};

std::string_view to_string(NetlistError::Kind kind);

using GateId = std::uint32_t;
/// Signals are numbered primary inputs first, then key inputs, then one per gate output.
using SignalId = std::uint32_t;

struct BuildOptions {
    bool allow_reserved_names = false;
};

/// Validated, immutable gate-level netlist with an indexed view used by the
/// analysis passes.
class Netlist {
public:
    static Netlist build(NetlistParts parts, BuildOptions options = {});

    const NetlistParts& parts() const noexcept { return parts_; }
    const std::string& name() const noexcept { return parts_.name; }
    const std::vector<std::string>& primary_inputs() const noexcept { return parts_.primary_inputs; }
    const std::vector<std::string>& primary_outputs() const noexcept { return parts_.primary_outputs; }
    const std::vector<std::string>& key_inputs() const noexcept { return parts_.key_inputs; }
    const std::vector<Gate>& gates() const noexcept { return parts_.gates; }
    const Gate& gate(GateId g) const { return parts_.gates.at(g); }
    const std::optional<KeyMetadata>& key_metadata() const noexcept { return parts_.key; }

    std::size_t num_gates() const noexcept { return parts_.gates.size(); }
    std::size_t num_signals() const noexcept { return first_gate_signal() + parts_.gates.size(); }
    bool is_sequential() const noexcept { return !dffs_.empty(); }
    bool is_locked() const noexcept { return !parts_.key_inputs.empty(); }

    SignalId first_key_signal() const noexcept { return static_cast<SignalId>(parts_.primary_inputs.size()); }
    SignalId first_gate_signal() const noexcept {
        return static_cast<SignalId>(parts_.primary_inputs.size() + parts_.key_inputs.size());
    }
    SignalId signal_of_gate(GateId g) const noexcept { return first_gate_signal() + g; }
    bool is_primary_input(SignalId s) const noexcept { return s < first_key_signal(); }
    bool is_key_input(SignalId s) const noexcept { return s >= first_key_signal() && s < first_gate_signal(); }
    std::optional<GateId> driver(SignalId s) const noexcept {
        if (s < first_gate_signal()) return std::nullopt;
        return static_cast<GateId>(s - first_gate_signal());
    }

    std::optional<SignalId> find_signal(std::string_view wire) const;
    std::optional<GateId> find_gate(std::string_view output_wire) const;
    const std::string& signal_name(SignalId s) const;

    std::span<const SignalId> fanin(GateId g) const { return fanin_[g]; }
    std::span<const GateId> fanout(SignalId s) const { return fanout_[s]; }
    std::span<const SignalId> output_signals() const noexcept { return po_signals_; }

    /// Combinational evaluation order of non-DFF gates; DFF outputs act as sources.
    std::span<const GateId> topo_order() const noexcept { return topo_; }
    std::span<const GateId> dffs() const noexcept { return dffs_; }

private:
    Netlist() = default;

    NetlistParts parts_;
    std::unordered_map<std::string, SignalId> signal_index_;
    std::vector<std::vector<SignalId>> fanin_;
    std::vector<std::vector<GateId>> fanout_;
    std::vector<SignalId> po_signals_;
    std::vector<GateId> topo_;
    std::vector<GateId> dffs_;
};

enum class NodeCounting {
    /// Every gate including NOT, BUF and DFF.
    AllGates,
    /// Logic gates only: NOT, BUF and DFF are excluded.
    LogicGates,
    /// AllGates for combinational netlists, LogicGates for sequential ones.
    Auto,
};

/// "Total Nodes" as reported in the constraint-correlation table.
std::size_t count_nodes(const Netlist& netlist, NodeCounting convention = NodeCounting::Auto);

}  // namespace problock

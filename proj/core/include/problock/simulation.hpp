#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "problock/netlist.hpp"

namespace problock {

/// 64 input vectors evaluated side by side, one per bit lane.
using Word = std::uint64_t;

/// Bit-parallel evaluator for a fixed netlist.
class Simulator {
public:
    explicit Simulator(const Netlist& netlist);

    struct Frame {
        std::vector<Word> outputs;     // one word per primary output, in declaration order
        std::vector<Word> next_state;  // one word per DFF (D input), in netlist.dffs() order
    };

    /// Evaluates one clock frame. `pi`, `key` and `state` hold one word per
    /// primary input, key input and DFF respectively.
    Frame step(std::span<const Word> pi, std::span<const Word> key, std::span<const Word> state) const;

    /// Same as step() but returns the value of every signal, indexed by SignalId.
    std::vector<Word> evaluate(std::span<const Word> pi, std::span<const Word> key, std::span<const Word> state) const;

    const Netlist& netlist() const noexcept { return *netlist_; }

private:
    const Netlist* netlist_;
};

Word evaluate_gate_word(GateType type, std::span<const Word> inputs);

using BitMap = std::map<std::string, bool, std::less<>>;

struct SimVector {
    BitMap assignment;      // primary input -> bit
    BitMap key_assignment;  // key input -> bit
    BitMap state;           // DFF output wire -> bit
};

struct StepResult {
    BitMap outputs;     // primary output -> bit
    BitMap next_state;  // DFF output wire -> value of its D input
};

/// Throws std::invalid_argument when an input, key input or DFF is missing from
/// the vector or the vector names a wire that is not one.
StepResult simulate_step(const Netlist& netlist, const SimVector& vector);

BitMap simulate(const Netlist& netlist, const SimVector& vector);

}  // namespace problock

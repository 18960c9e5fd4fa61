#pragma once

#include <cstdint>
#include <string_view>
#include <vector>

#include "problock/locking.hpp"
#include "problock/netlist.hpp"
#include "problock/timing.hpp"

namespace problock {

enum class Regime : std::uint8_t { Exhaustive, Random };

std::string_view to_string(Regime regime);

struct VerifyOptions {
    std::uint64_t budget = 10000;
    std::uint64_t seed = 0;
    int sequence_depth = 20;
    /// Frames with at most this many free inputs (PIs plus DFF states) are checked exhaustively.
    std::size_t exhaustive_limit = 16;
    DelayModel delays = DelayModel::unit();
};

struct VerificationReport {
    bool equivalent = false;
    std::uint64_t vectors_tested = 0;
    std::uint64_t mismatching_vectors = 0;
    Regime regime = Regime::Exhaustive;
    std::uint64_t sequence_cycles = 0;  // lockstep cycles simulated (sequential only)

    std::size_t wrong_keys_tested = 0;
    double wrong_key_mismatch_rate = 0;
    double single_flip_mismatch_rate = 0;
    std::vector<std::size_t> silent_flips;  // key bits whose flip went unobserved

    std::size_t key_length = 0;
    std::size_t original_nodes = 0;
    std::int64_t added_gates = 0;
    double overhead_pct = 0;
    double original_critical_delay = 0;
    double locked_critical_delay = 0;
    double critical_delay_delta = 0;
};

/// Compares `locked` under `key` against `original`: exhaustively when the frame
/// has few enough free inputs, else on `budget` seeded random vectors. Sequential
/// pairs are also stepped in lockstep from random states for sequence_depth cycles.
/// Throws std::invalid_argument when the interfaces do not line up.
VerificationReport check_equivalence(const Netlist& original, const Netlist& locked, const std::vector<bool>& key,
                                     const VerifyOptions& options = {});

VerificationReport check_equivalence(const Netlist& original, const LockingResult& result,
                                     const VerifyOptions& options = {});

inline constexpr std::size_t kMaxBruteForceKeyBits = 20;

struct BruteForceResult {
    std::vector<std::vector<bool>> keys;  // every key matching the oracle, ascending as integers
    Regime regime = Regime::Exhaustive;
    std::uint64_t vectors_tested = 0;
    /// Bits on which the recovered keys disagree. Non-empty means some key gate
    /// is functionally redundant.
    std::vector<std::size_t> ambiguous_bits;
};

/// Enumerates every key of `locked` and keeps those under which it matches `original`.
/// Throws std::invalid_argument when the key is longer than max_key_bits.
BruteForceResult brute_force_key(const Netlist& original, const Netlist& locked,
                                 std::size_t max_key_bits = kMaxBruteForceKeyBits, const VerifyOptions& options = {});

}  // namespace problock

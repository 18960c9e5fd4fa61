#include "problock/verify.hpp"

#include <algorithm>
#include <bit>
#include <random>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "problock/graph.hpp"
#include "problock/simulation.hpp"

namespace problock {

namespace {

constexpr Word kAll = ~Word{0};

constexpr Word kLanePattern[6] = {
    0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
    0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull,
};

struct Batch {
    std::vector<Word> pi;
    std::vector<Word> state;  // original DFF order
    Word mask = kAll;
};

struct Sequence {
    std::vector<Word> state;
    std::vector<std::vector<Word>> pi;  // per cycle
};

std::vector<Word> key_words(const std::vector<bool>& key) {
    std::vector<Word> w;
    w.reserve(key.size());
    for (bool b : key) w.push_back(b ? kAll : 0);
    return w;
}

// Original (oracle) vs locked circuit over a fixed, seeded stimulus set.
class Harness {
public:
    Harness(const Netlist& original, const Netlist& locked, const VerifyOptions& options)
        : original_(original), locked_(locked), sim_orig_(original), sim_lock_(locked) {
        check_interfaces();
        build_stimulus(options);
        for (const auto& b : batches_) expected_.push_back(sim_orig_.step(b.pi, {}, b.state));
        for (const auto& seq : sequences_) {
            std::vector<std::vector<Word>> outs;
            std::vector<Word> state = seq.state;
            for (const auto& pi : seq.pi) {
                auto f = sim_orig_.step(pi, {}, state);
                outs.push_back(std::move(f.outputs));
                state = std::move(f.next_state);
            }
            expected_seq_.push_back(std::move(outs));
        }
    }

    Regime regime() const { return regime_; }
    std::uint64_t frame_vectors() const { return frame_vectors_; }
    std::uint64_t sequence_cycles() const { return sequence_cycles_; }

    // Mismatching frame vectors plus mismatching (lane, cycle) pairs of the lockstep run.
    std::uint64_t mismatches(const std::vector<bool>& key, bool stop_at_first) const {
        const auto kw = key_words(key);
        std::uint64_t count = 0;
        for (std::size_t i = 0; i < batches_.size(); ++i) {
            const auto& b = batches_[i];
            const auto f = sim_lock_.step(b.pi, kw, to_locked_state(b.state));
            Word diff = 0;
            for (std::size_t o = 0; o < f.outputs.size(); ++o) diff |= f.outputs[o] ^ expected_[i].outputs[o];
            for (std::size_t d = 0; d < f.next_state.size(); ++d) {
                diff |= f.next_state[d] ^ expected_[i].next_state[lock_to_orig_[d]];
            }
            count += static_cast<std::uint64_t>(std::popcount(diff & b.mask));
            if (stop_at_first && count) return count;
        }
        for (std::size_t s = 0; s < sequences_.size(); ++s) {
            std::vector<Word> state = to_locked_state(sequences_[s].state);
            for (std::size_t c = 0; c < sequences_[s].pi.size(); ++c) {
                auto f = sim_lock_.step(sequences_[s].pi[c], kw, state);
                Word diff = 0;
                for (std::size_t o = 0; o < f.outputs.size(); ++o) diff |= f.outputs[o] ^ expected_seq_[s][c][o];
                count += static_cast<std::uint64_t>(std::popcount(diff));
                if (stop_at_first && count) return count;
                state = std::move(f.next_state);
            }
        }
        return count;
    }

private:
    void check_interfaces() {
        auto fail = [](const std::string& why) { throw std::invalid_argument("interface mismatch: " + why); };
        if (original_.is_locked()) fail("original netlist '" + original_.name() + "' has key inputs");
        if (original_.primary_inputs() != locked_.primary_inputs()) fail("primary inputs differ");
        if (original_.primary_outputs().size() != locked_.primary_outputs().size()) fail("primary output counts differ");
        if (original_.dffs().size() != locked_.dffs().size()) fail("DFF counts differ");
        std::unordered_map<std::string_view, std::size_t> orig_index;
        for (std::size_t i = 0; i < original_.dffs().size(); ++i) {
            orig_index.emplace(original_.gates()[original_.dffs()[i]].output, i);
        }
        for (GateId d : locked_.dffs()) {
            auto it = orig_index.find(locked_.gates()[d].output);
            if (it == orig_index.end()) fail("DFF '" + locked_.gates()[d].output + "' has no counterpart");
            lock_to_orig_.push_back(it->second);
        }
    }

    std::vector<Word> to_locked_state(const std::vector<Word>& orig_state) const {
        std::vector<Word> s(orig_state.size());
        for (std::size_t d = 0; d < s.size(); ++d) s[d] = orig_state[lock_to_orig_[d]];
        return s;
    }

    void build_stimulus(const VerifyOptions& options) {
        const std::size_t num_pi = original_.primary_inputs().size();
        const std::size_t num_dff = original_.dffs().size();
        const std::size_t free = num_pi + num_dff;
        std::mt19937_64 rng(options.seed);

        if (free <= options.exhaustive_limit) {
            regime_ = Regime::Exhaustive;
            frame_vectors_ = std::uint64_t{1} << free;
            const std::uint64_t words = free < 6 ? 1 : frame_vectors_ >> 6;
            for (std::uint64_t w = 0; w < words; ++w) {
                Batch b;
                for (std::size_t j = 0; j < free; ++j) {
                    const Word v = j < 6 ? kLanePattern[j] : (((w >> (j - 6)) & 1) ? kAll : 0);
                    (j < num_pi ? b.pi : b.state).push_back(v);
                }
                b.mask = free < 6 ? (Word{1} << frame_vectors_) - 1 : kAll;
                batches_.push_back(std::move(b));
            }
        } else {
            regime_ = Regime::Random;
            frame_vectors_ = std::max<std::uint64_t>(options.budget, 1);
            for (std::uint64_t done = 0; done < frame_vectors_; done += 64) {
                Batch b;
                for (std::size_t j = 0; j < num_pi; ++j) b.pi.push_back(rng());
                for (std::size_t j = 0; j < num_dff; ++j) b.state.push_back(rng());
                const std::uint64_t lanes = std::min<std::uint64_t>(64, frame_vectors_ - done);
                b.mask = lanes == 64 ? kAll : (Word{1} << lanes) - 1;
                batches_.push_back(std::move(b));
            }
        }

        if (num_dff == 0 || options.sequence_depth < 1) return;
        const auto depth = static_cast<std::uint64_t>(options.sequence_depth);
        const std::uint64_t lanes = std::max<std::uint64_t>(64, options.budget / depth);
        for (std::uint64_t done = 0; done < lanes; done += 64) {
            Sequence seq;
            for (std::size_t j = 0; j < num_dff; ++j) seq.state.push_back(rng());
            for (std::uint64_t c = 0; c < depth; ++c) {
                std::vector<Word> pi;
                for (std::size_t j = 0; j < num_pi; ++j) pi.push_back(rng());
                seq.pi.push_back(std::move(pi));
            }
            sequences_.push_back(std::move(seq));
            sequence_cycles_ += 64 * depth;
        }
    }

    const Netlist& original_;
    const Netlist& locked_;
    Simulator sim_orig_;
    Simulator sim_lock_;
    std::vector<std::size_t> lock_to_orig_;
    Regime regime_ = Regime::Exhaustive;
    std::uint64_t frame_vectors_ = 0;
    std::uint64_t sequence_cycles_ = 0;
    std::vector<Batch> batches_;
    std::vector<Simulator::Frame> expected_;
    std::vector<Sequence> sequences_;
    std::vector<std::vector<std::vector<Word>>> expected_seq_;
};

double critical_delay(const Netlist& n, const DelayModel& delays) {
    return analyze_timing(build_graph(n), delays, 1).critical_delay;
}

}  // namespace

std::string_view to_string(Regime regime) {
    return regime == Regime::Exhaustive ? "exhaustive" : "random";
}

VerificationReport check_equivalence(const Netlist& original, const Netlist& locked, const std::vector<bool>& key,
                                     const VerifyOptions& options) {
    if (key.size() != locked.key_inputs().size()) {
        throw std::invalid_argument("check_equivalence: key has " + std::to_string(key.size()) + " bits but '" +
                                    locked.name() + "' has " + std::to_string(locked.key_inputs().size()) +
                                    " key inputs");
    }
    const Harness h(original, locked, options);
    VerificationReport r;
    r.regime = h.regime();
    r.vectors_tested = h.frame_vectors();
    r.sequence_cycles = h.sequence_cycles();
    r.mismatching_vectors = h.mismatches(key, false);
    r.equivalent = r.mismatching_vectors == 0;

    std::size_t live = 0, live_flips = 0;
    for (std::size_t i = 0; i < key.size(); ++i) {
        auto wrong = key;
        wrong[i] = !wrong[i];
        if (h.mismatches(wrong, true)) {
            ++live_flips;
        } else {
            r.silent_flips.push_back(i);
        }
    }
    live = live_flips;
    r.wrong_keys_tested = key.size();
    if (!key.empty()) {
        std::mt19937_64 rng(options.seed ^ 0x9e3779b97f4a7c15ull);
        for (std::uint64_t n = 0; n < options.budget / 10; ++n) {
            std::vector<bool> wrong(key.size());
            do {
                for (std::size_t i = 0; i < key.size(); ++i) wrong[i] = (rng() & 1) != 0;
            } while (wrong == key);
            ++r.wrong_keys_tested;
            if (h.mismatches(wrong, true)) ++live;
        }
        r.single_flip_mismatch_rate = static_cast<double>(live_flips) / static_cast<double>(key.size());
        r.wrong_key_mismatch_rate = static_cast<double>(live) / static_cast<double>(r.wrong_keys_tested);
    }

    r.key_length = key.size();
    r.original_nodes = count_nodes(original);
    r.added_gates = static_cast<std::int64_t>(locked.num_gates()) - static_cast<std::int64_t>(original.num_gates());
    r.overhead_pct = r.original_nodes ? 100.0 * static_cast<double>(key.size()) / static_cast<double>(r.original_nodes) : 0;
    r.original_critical_delay = critical_delay(original, options.delays);
    r.locked_critical_delay = critical_delay(locked, options.delays);
    r.critical_delay_delta = r.locked_critical_delay - r.original_critical_delay;
    return r;
}

VerificationReport check_equivalence(const Netlist& original, const LockingResult& result,
                                     const VerifyOptions& options) {
    return check_equivalence(original, result.locked, result.key, options);
}

BruteForceResult brute_force_key(const Netlist& original, const Netlist& locked, std::size_t max_key_bits,
                                 const VerifyOptions& options) {
    const std::size_t bits = locked.key_inputs().size();
    if (bits > max_key_bits || max_key_bits > 63) {
        throw std::invalid_argument("brute_force_key: " + std::to_string(bits) + "-bit key exceeds the " +
                                    std::to_string(max_key_bits) + "-bit enumeration limit");
    }
    const Harness h(original, locked, options);
    BruteForceResult r;
    r.regime = h.regime();
    r.vectors_tested = h.frame_vectors();
    std::vector<bool> key(bits);
    for (std::uint64_t v = 0; v < (std::uint64_t{1} << bits); ++v) {
        for (std::size_t i = 0; i < bits; ++i) key[i] = ((v >> i) & 1) != 0;
        if (h.mismatches(key, true) == 0) r.keys.push_back(key);
    }
    if (r.keys.size() > 1) {
        for (std::size_t i = 0; i < bits; ++i) {
            for (const auto& k : r.keys) {
                if (k[i] != r.keys.front()[i]) {
                    r.ambiguous_bits.push_back(i);
                    break;
                }
            }
        }
    }
    return r;
}

}  // namespace problock

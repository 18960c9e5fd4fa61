#include <gtest/gtest.h>

#include <filesystem>

#include "problock/bench_io.hpp"
#include "problock/netlist.hpp"
#include "support.hpp"

namespace problock {
namespace {

using testing::parse;

NetlistError::Kind error_kind(const std::string& text) {
    try {
        parse(text);
    } catch (const NetlistError& e) {
        return e.kind();
    }
    ADD_FAILURE() << "parse accepted:\n" << text;
    return NetlistError::Kind::Io;
}

TEST(ParseBench, MinimalNand) {
    const auto n = parse("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = NAND(a, b)");
    EXPECT_EQ(n.primary_inputs().size(), 2u);
    EXPECT_EQ(n.primary_outputs().size(), 1u);
    ASSERT_EQ(n.num_gates(), 1u);
    EXPECT_EQ(n.gate(0).type, GateType::Nand);
    EXPECT_EQ(n.gate(0).inputs, (std::vector<std::string>{"a", "b"}));
    EXPECT_FALSE(n.is_sequential());
    EXPECT_FALSE(n.is_locked());
}

TEST(ParseBench, KeywordsAreCaseInsensitive) {
    const auto n = parse("input(a)\nInput(b)\noutput(y)\nz = buf(a)\ny = Xnor(z, b)\n");
    EXPECT_EQ(n.gate(0).type, GateType::Buf);
    EXPECT_EQ(n.gate(1).type, GateType::Xnor);
}

TEST(ParseBench, AcceptsCrLfAndComments) {
    const auto n = parse("# header\r\nINPUT(a)\r\nOUTPUT(y)  # trailing\r\ny = NOT(a)\r\n");
    EXPECT_EQ(n.num_gates(), 1u);
    EXPECT_EQ(n.primary_outputs()[0], "y");
}

TEST(ParseBench, WireNamesAreVerbatim) {
    const auto n = parse("INPUT(1)\nINPUT(G3.x)\nOUTPUT(out[0])\nout[0] = AND(1, G3.x)\n");
    EXPECT_EQ(n.primary_inputs()[1], "G3.x");
    EXPECT_EQ(n.gate(0).output, "out[0]");
}

TEST(ParseBench, NegativeCorpus) {
    using K = NetlistError::Kind;
    EXPECT_EQ(error_kind("INPUT(a)\nOUTPUT(y)\ny = NAND(a)"), K::Arity);
    EXPECT_EQ(error_kind("INPUT(a)\nOUTPUT(y)\ny = NOT(a, a)"), K::Arity);
    EXPECT_EQ(error_kind("INPUT(a)\nOUTPUT(y)\ny = FOO(a, a)"), K::UnknownGate);
    EXPECT_EQ(error_kind("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\ny = BUF(a)"), K::DuplicateDriver);
    EXPECT_EQ(error_kind("INPUT(a)\nOUTPUT(a)\na = NOT(a)"), K::DuplicateDriver);
    EXPECT_EQ(error_kind("INPUT(a)\nINPUT(a)\nOUTPUT(a)"), K::DuplicateDriver);
    EXPECT_EQ(error_kind("INPUT(a)\nOUTPUT(y)\ny = AND(a, b)"), K::UndrivenWire);
    EXPECT_EQ(error_kind("INPUT(a)\nOUTPUT(z)\ny = NOT(a)"), K::UndrivenWire);
    EXPECT_EQ(error_kind("INPUT(a)\nOUTPUT(y)\ny = AND(a, z)\nz = NOT(y)"), K::CombinationalCycle);
    EXPECT_EQ(error_kind("INPUT(a)\nOUTPUT(y)\ny = AND(a, y)"), K::CombinationalCycle);
    EXPECT_EQ(error_kind("INPUT(a)\nOUTPUT(y)\ny = AND(a, b"), K::Syntax);
    EXPECT_EQ(error_kind("INPUT(a)\nOUTPUT(y)\ny NOT(a)"), K::Syntax);
    EXPECT_EQ(error_kind("INPUT(a)\nOUTPUT(y)\nNOT(a)"), K::Syntax);
    EXPECT_EQ(error_kind("INPUT(__pl_a)\nOUTPUT(y)\ny = NOT(__pl_a)"), K::ReservedName);
}

TEST(ParseBench, CycleThroughDffIsAllowed) {
    const auto n = parse("INPUT(a)\nOUTPUT(q)\nq = DFF(d)\nd = XOR(a, q)\n");
    EXPECT_TRUE(n.is_sequential());
    EXPECT_EQ(n.dffs().size(), 1u);
}

TEST(ParseBench, SyntaxErrorReportsLineAndColumn) {
    try {
        parse("INPUT(a)\nOUTPUT(y)\ny = AND(a,, a)\n");
        FAIL() << "expected a syntax error";
    } catch (const NetlistError& e) {
        EXPECT_EQ(e.kind(), NetlistError::Kind::Syntax);
        EXPECT_EQ(e.line(), 3u);
        EXPECT_EQ(e.column(), 11u);
    }
}

TEST(ParseBench, ArityErrorPointsAtGateLine) {
    try {
        parse("INPUT(a)\n\nOUTPUT(y)\ny = NAND(a)\n");
        FAIL();
    } catch (const NetlistError& e) {
        EXPECT_EQ(e.line(), 4u);
    }
}

TEST(ParseBench, MissingFileIsIoError) {
    try {
        read_bench_file(testing::data_path("does_not_exist.bench"));
        FAIL();
    } catch (const NetlistError& e) {
        EXPECT_EQ(e.kind(), NetlistError::Kind::Io);
    }
}

TEST(WriteBench, UnlockedHasNoKeyHeader) {
    const auto text = write_bench(parse("INPUT(a)\nOUTPUT(y)\ny = NOT(a)\n"));
    EXPECT_EQ(text.find("KEY"), std::string::npos);
    EXPECT_NE(text.find("y = NOT(a)"), std::string::npos);
}

TEST(WriteBench, KeyHeaderRoundTrips) {
    const std::string text =
        "# KEYINPUTS: keyinput0 keyinput1\n# KEY: 01\n# KEYGATES: n1:XOR y:XNOR\n"
        "INPUT(a)\nINPUT(b)\nINPUT(keyinput0)\nINPUT(keyinput1)\nOUTPUT(__pl_w1)\n"
        "n1 = AND(a, b)\n__pl_w0 = XOR(n1, keyinput0)\ny = NOT(__pl_w0)\n__pl_w1 = XNOR(y, keyinput1)\n";
    const auto n = parse(text);
    ASSERT_TRUE(n.is_locked());
    EXPECT_EQ(n.primary_inputs(), (std::vector<std::string>{"a", "b"}));
    ASSERT_TRUE(n.key_metadata());
    EXPECT_EQ(n.key_metadata()->key, (std::vector<bool>{false, true}));
    EXPECT_EQ(n.key_metadata()->gates[1].polarity, Polarity::Xnor);

    const auto out = write_bench(n);
    EXPECT_NE(out.find("# KEY: 01\n"), std::string::npos);
    EXPECT_NE(out.find("# KEYINPUTS: keyinput0 keyinput1\n"), std::string::npos);
    EXPECT_EQ(parse(out).parts(), n.parts());
}

TEST(WriteBench, KeyLengthMismatchIsRejected) {
    EXPECT_THROW(parse("# KEYINPUTS: keyinput0\n# KEY: 01\nINPUT(a)\nINPUT(keyinput0)\nOUTPUT(y)\n"
                       "y = XOR(a, keyinput0)\n"),
                 NetlistError);
}

TEST(WriteBench, CorpusRoundTripIsGateForGate) {
    for (const auto* dir : {"iscas85", "iscas89", "small"}) {
        for (const auto& e : std::filesystem::directory_iterator(testing::data_path(dir))) {
            const auto n = read_bench_file(e.path());
            const auto again = parse_bench(write_bench(n), n.name());
            EXPECT_EQ(again.parts(), n.parts()) << e.path();
            EXPECT_EQ(write_bench(again), write_bench(n)) << e.path();
        }
    }
}

TEST(CountNodes, EmptyNetlistIsZero) {
    EXPECT_EQ(count_nodes(parse("INPUT(a)\nOUTPUT(a)\n")), 0u);
}

TEST(CountNodes, CombinationalCountsEveryGate) {
    const auto c17 = testing::load("iscas85/c17.bench");
    EXPECT_EQ(count_nodes(c17), 6u);
    const auto mux = testing::load("small/mux_tree.bench");
    EXPECT_EQ(count_nodes(mux), mux.num_gates());
}

TEST(CountNodes, SequentialCountsLogicGates) {
    // s27: 3 DFFs, 2 inverters, 8 logic gates.
    const auto s27 = testing::load("iscas89/s27.bench");
    EXPECT_EQ(count_nodes(s27), 8u);
    EXPECT_EQ(count_nodes(s27, NodeCounting::AllGates), 13u);
}

TEST(Netlist, FanoutIsDeduplicated) {
    const auto n = parse("INPUT(a)\nOUTPUT(y)\ny = AND(a, a)\n");
    EXPECT_EQ(n.fanout(*n.find_signal("a")).size(), 1u);
    EXPECT_EQ(n.fanin(0).size(), 2u);
}

TEST(Netlist, SignalNumbering) {
    const auto n = parse("# KEYINPUTS: keyinput0\n# KEY: 0\n# KEYGATES: y:XOR\n"
                         "INPUT(a)\nINPUT(keyinput0)\nOUTPUT(__pl_w0)\ny = NOT(a)\n__pl_w0 = XOR(y, keyinput0)\n");
    EXPECT_EQ(*n.find_signal("a"), 0u);
    EXPECT_EQ(*n.find_signal("keyinput0"), 1u);
    EXPECT_TRUE(n.is_key_input(1));
    EXPECT_EQ(*n.find_signal("y"), n.signal_of_gate(0));
    EXPECT_EQ(*n.driver(*n.find_signal("__pl_w0")), 1u);
}

}  // namespace
}  // namespace problock

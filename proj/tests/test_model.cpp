// Copyright 2026 the stabcon developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <stabcon/model.hpp>

#include "brute_force.hpp"

using namespace stabcon;



TEST_CASE("pattern literals round-trip")
{
    for (const char* lit : {":>", ":<", "<--:>", ">=<-:=-", "---:-"})
    {
        LassoPattern p = parse_pattern(lit);
        REQUIRE(format_pattern(p) == lit);
    }
    REQUIRE_THROWS_AS(parse_pattern("no-colon"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_pattern("<:"), std::invalid_argument);
    REQUIRE_THROWS_AS(parse_pattern("x:>"), std::invalid_argument);
}

TEST_CASE("pattern_at follows the lasso invariant")
{
    LassoPattern p1 = parse_pattern(">:<");
    REQUIRE(char_of_graph(pattern_at(p1, 1)) == '>');
    REQUIRE(char_of_graph(pattern_at(p1, 7)) == '<');

    LassoPattern p2 = parse_pattern("<--:>");
    REQUIRE(char_of_graph(pattern_at(p2, 1)) == '<');
    REQUIRE(char_of_graph(pattern_at(p2, 2)) == '-');
    REQUIRE(char_of_graph(pattern_at(p2, 4)) == '>');
    REQUIRE(char_of_graph(pattern_at(p2, 5)) == '>');
    REQUIRE_THROWS_AS(pattern_at(p2, 0), std::invalid_argument);
}

TEST_CASE("self-loops are mandatory")
{
    CommGraph g = CommGraph::silent(3);
    REQUIRE(g.has_edge(1, 1));
    CommGraph bad = g;
    bad.in_edges[2] = proc_bit(0); // drop the self-loop by hand
    REQUIRE_THROWS_AS(check_self_loops(bad), std::invalid_argument);
    REQUIRE_THROWS_AS(LassoPattern({}, {bad}), std::invalid_argument);
    REQUIRE_THROWS_AS(CommGraph(2, {{0, 2}}), std::invalid_argument);
}

TEST_CASE("kernel on the named examples")
{
    REQUIRE(kernel(parse_pattern(":=")) == full_set(2)); // complete each round
    REQUIRE(kernel(parse_pattern(":>")) == proc_bit(0)); // only l reaches r
    REQUIRE(kernel(parse_pattern(":<")) == proc_bit(1));
    REQUIRE(kernel(patterns::two_cliques()) == 0);       // no cross edge ever
    REQUIRE(kernel(patterns::eta(2)) == 0);
    REQUIRE(kernel(patterns::eta(1)) == proc_bit(0));    // lone process
}

TEST_CASE("kernel ignores the prefix when the loop decides")
{
    // prefix gives r a one-shot path; only the loop repeats forever
    REQUIRE(kernel(parse_pattern("<<<:>")) == proc_bit(0));
    // silence-heavy loop still carries both directions
    REQUIRE(kernel(parse_pattern(":-->--<")) == full_set(2));
}

TEST_CASE("kernel equals the brute-force oracle exhaustively for n=2")
{
    const char syms[4] = {'>', '<', '=', '-'};
    std::vector<std::string> prefixes{""};
    for (int len = 1; len <= 3; ++len)
    {
        size_t start = prefixes.size();
        (void)start;
        std::vector<std::string> next;
        for (const auto& p : prefixes)
            if (int(p.size()) == len - 1)
                for (char c : syms)
                    next.push_back(p + c);
        prefixes.insert(prefixes.end(), next.begin(), next.end());
    }
    int checked = 0;
    for (const auto& pre : prefixes)
        for (int ll = 1; ll <= 2; ++ll)
            for (int code = 0; code < (ll == 1 ? 4 : 16); ++code)
            {
                std::string loop;
                int c = code;
                for (int i = 0; i < ll; ++i)
                {
                    loop += syms[c & 3];
                    c >>= 2;
                }
                LassoPattern pat = parse_pattern(pre + ":" + loop);
                REQUIRE(kernel(pat) == brute::kernel_oracle(pat));
                ++checked;
            }
    REQUIRE(checked == (1 + 4 + 16 + 64) * (4 + 16));
}

TEST_CASE("kernel matches the oracle on random n=3 and n=4 patterns")
{
    std::mt19937_64 rng(20260810);
    for (int n : {3, 4})
        for (int i = 0; i < 400; ++i)
        {
            LassoPattern pat = brute::random_pattern(rng, n, 4, 3);
            REQUIRE(kernel(pat) == brute::kernel_oracle(pat));
        }
}

TEST_CASE("value sets and inputs validate")
{
    REQUIRE_THROWS_AS(ValueSet(std::vector<Value>{}), std::invalid_argument);
    REQUIRE_THROWS_AS(ValueSet({1, 1}), std::invalid_argument);
    ValueSet vs({2, 0, 1});
    REQUIRE(vs.rank(2) == 0);
    REQUIRE(vs.rank(1) == 2);
    REQUIRE_THROWS_AS(vs.rank(7), std::invalid_argument);
    check_inputs(InputAssignment{{0, 1}}, ValueSet::binary(), 2);
    REQUIRE_THROWS_AS(check_inputs(InputAssignment({0, 3}), ValueSet::binary(), 2),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(check_inputs(InputAssignment({0}), ValueSet::binary(), 2),
                      std::invalid_argument);
    REQUIRE(InputAssignment({1, 1, 1}).valent());
    REQUIRE_FALSE(InputAssignment({1, 0}).valent());
    REQUIRE(InputAssignment({3, 1, 2}).min_over(proc_bit(0) | proc_bit(2)) == 2);
}

TEST_CASE("one-message and bounded-silence pattern classifiers")
{
    REQUIRE(patterns::is_one_message(patterns::alpha(3)));
    REQUIRE(patterns::is_one_message(patterns::beta(1)));
    REQUIRE(patterns::is_one_message(patterns::eta(2)));
    REQUIRE_FALSE(patterns::is_one_message(parse_pattern("-><:-")));
    REQUIRE_FALSE(patterns::is_one_message(parse_pattern(":>")));
    REQUIRE(patterns::is_ll(parse_pattern("><=:<>")));
    REQUIRE_FALSE(patterns::is_ll(parse_pattern(">-:<")));
    REQUIRE(patterns::is_bdll_loop(parse_pattern(":-->--<"), 3));
    REQUIRE_FALSE(patterns::is_bdll_loop(parse_pattern(":--->"), 2));
    REQUIRE_FALSE(patterns::is_bdll_loop(parse_pattern(":----"), 3));
    // the silence run wraps around the loop boundary
    REQUIRE_FALSE(patterns::is_bdll_loop(parse_pattern(":-->--"), 3));
}

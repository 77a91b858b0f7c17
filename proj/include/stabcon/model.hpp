// Copyright 2026 the stabcon developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace stabcon
{

using Value = int;
using ProcSet = std::uint64_t; // bit i set <=> process i in the set

constexpr int kMaxProcs = 64;

inline ProcSet
proc_bit(int p)
{
    return ProcSet{1} << p;
}

inline ProcSet
full_set(int n)
{
    return n == kMaxProcs ? ~ProcSet{0} : (ProcSet{1} << n) - 1;
}

inline bool
in_set(ProcSet s, int p)
{
    return (s >> p) & 1;
}

inline std::vector<int>
set_to_list(ProcSet s, int n)
{
    std::vector<int> out;
    for (int p = 0; p < n; ++p)
        if (in_set(s, p))
            out.push_back(p);
    return out;
}

// Finite ordered value alphabet; order is list position.
struct ValueSet
{
    std::vector<Value> values;

    ValueSet() = default;
    explicit ValueSet(std::vector<Value> vs) : values(std::move(vs))
    {
        if (values.empty())
            throw std::invalid_argument("ValueSet: empty");
        for (size_t i = 0; i < values.size(); ++i)
            for (size_t j = i + 1; j < values.size(); ++j)
                if (values[i] == values[j])
                    throw std::invalid_argument("ValueSet: duplicate value");
    }

    static ValueSet binary() { return ValueSet{{0, 1}}; }

    bool contains(Value v) const
    {
        return std::find(values.begin(), values.end(), v) != values.end();
    }

    // position in the declared order; used for deterministic tie-breaks
    int rank(Value v) const
    {
        auto it = std::find(values.begin(), values.end(), v);
        if (it == values.end())
            throw std::invalid_argument("ValueSet: unknown value");
        return int(it - values.begin());
    }
};

// One round's communication graph. All self-loops are mandatory.
struct CommGraph
{
    int n = 0;
    std::vector<ProcSet> in_edges; // in_edges[to] = senders delivering to `to`

    CommGraph() = default;

    CommGraph(int n_, const std::vector<std::pair<int, int>>& edges) : n(n_)
    {
        if (n < 1 || n > kMaxProcs)
            throw std::invalid_argument("CommGraph: bad process count");
        in_edges.assign(n, 0);
        for (int p = 0; p < n; ++p)
            in_edges[p] |= proc_bit(p);
        for (auto [from, to] : edges)
            add_edge(from, to);
    }

    static CommGraph silent(int n) { return CommGraph(n, {}); }

    static CommGraph complete(int n)
    {
        CommGraph g = silent(n);
        for (int p = 0; p < n; ++p)
            g.in_edges[p] = full_set(n);
        return g;
    }

    // n=2 alphabet. Process 0 is l, process 1 is r.
    // right: l -> r delivers, left: l <- r delivers, both: <->.
    static CommGraph ll_right() { return CommGraph(2, {{0, 1}}); }
    static CommGraph ll_left() { return CommGraph(2, {{1, 0}}); }
    static CommGraph ll_both() { return CommGraph(2, {{0, 1}, {1, 0}}); }
    static CommGraph silent2() { return silent(2); }

    void add_edge(int from, int to)
    {
        if (from < 0 || from >= n || to < 0 || to >= n)
            throw std::invalid_argument("CommGraph: edge out of range");
        in_edges[to] |= proc_bit(from);
    }

    bool has_edge(int from, int to) const { return in_set(in_edges[to], from); }

    // incoming-edge column of process p (includes the self-loop)
    ProcSet column(int p) const { return in_edges[p]; }

    bool operator==(const CommGraph& o) const = default;
};

// Validates the self-loop invariant for graphs built by hand.
inline void
check_self_loops(const CommGraph& g)
{
    for (int p = 0; p < g.n; ++p)
        if (!g.has_edge(p, p))
            throw std::invalid_argument("CommGraph: missing self-loop");
}

// Eventually periodic communication pattern: finite prefix + repeating loop.
// Rounds are 1-indexed; round t produces configuration C^t from C^{t-1}.
struct LassoPattern
{
    int n = 0;
    std::vector<CommGraph> prefix;
    std::vector<CommGraph> loop;

    LassoPattern() = default;

    LassoPattern(std::vector<CommGraph> prefix_, std::vector<CommGraph> loop_)
        : prefix(std::move(prefix_)), loop(std::move(loop_))
    {
        if (loop.empty())
            throw std::invalid_argument("LassoPattern: empty loop");
        n = loop.front().n;
        for (const auto& g : prefix)
            if (g.n != n)
                throw std::invalid_argument("LassoPattern: mixed process counts");
        for (const auto& g : loop)
            if (g.n != n)
                throw std::invalid_argument("LassoPattern: mixed process counts");
        for (const auto& g : prefix)
            check_self_loops(g);
        for (const auto& g : loop)
            check_self_loops(g);
    }

    int prefix_len() const { return int(prefix.size()); }
    int loop_len() const { return int(loop.size()); }

    const CommGraph& at(int round) const
    {
        if (round < 1)
            throw std::invalid_argument("LassoPattern: rounds start at 1");
        int t = round - 1;
        if (t < prefix_len())
            return prefix[t];
        return loop[(t - prefix_len()) % loop_len()];
    }

    bool operator==(const LassoPattern& o) const = default;
};

// [OP] pattern_at
inline const CommGraph&
pattern_at(const LassoPattern& pat, int round)
{
    return pat.at(round);
}

// --- n=2 pattern literals ------------------------------------------------
// Strings over {'>','<','=','-'} in "prefix:loop" form, e.g. "<--:>" is
// prefix (<, -, -) with loop (>).

inline CommGraph
graph_of_char(char c)
{
    switch (c)
    {
    case '>':
        return CommGraph::ll_right();
    case '<':
        return CommGraph::ll_left();
    case '=':
        return CommGraph::ll_both();
    case '-':
        return CommGraph::silent2();
    default:
        throw std::invalid_argument(std::string("pattern literal: bad symbol '") + c + "'");
    }
}

inline char
char_of_graph(const CommGraph& g)
{
    if (g.n != 2)
        throw std::invalid_argument("pattern literal: n must be 2");
    bool lr = g.has_edge(0, 1), rl = g.has_edge(1, 0);
    if (lr && rl)
        return '=';
    if (lr)
        return '>';
    if (rl)
        return '<';
    return '-';
}

inline LassoPattern
parse_pattern(const std::string& lit)
{
    auto colon = lit.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("pattern literal: missing ':'");
    std::vector<CommGraph> prefix, loop;
    for (size_t i = 0; i < colon; ++i)
        prefix.push_back(graph_of_char(lit[i]));
    for (size_t i = colon + 1; i < lit.size(); ++i)
        loop.push_back(graph_of_char(lit[i]));
    if (loop.empty())
        throw std::invalid_argument("pattern literal: empty loop");
    return LassoPattern(std::move(prefix), std::move(loop));
}

inline std::string
format_pattern(const LassoPattern& pat)
{
    std::string out;
    for (const auto& g : pat.prefix)
        out += char_of_graph(g);
    out += ':';
    for (const auto& g : pat.loop)
        out += char_of_graph(g);
    return out;
}

// --- named pattern factories ---------------------------------------------

namespace patterns
{

// silence-only pattern on n processes
inline LassoPattern
eta(int n = 2)
{
    return LassoPattern({}, {CommGraph::silent(n)});
}

// one-message model: i silent rounds, one delivered message, silence forever
inline LassoPattern
alpha(int i) // message l -> r at round i+1
{
    std::vector<CommGraph> pre(i, CommGraph::silent2());
    pre.push_back(CommGraph::ll_right());
    return LassoPattern(std::move(pre), {CommGraph::silent2()});
}

inline LassoPattern
beta(int i) // message r -> l at round i+1
{
    std::vector<CommGraph> pre(i, CommGraph::silent2());
    pre.push_back(CommGraph::ll_left());
    return LassoPattern(std::move(pre), {CommGraph::silent2()});
}

// n=4 pattern whose kernel is empty: two components that never connect
inline LassoPattern
two_cliques()
{
    CommGraph g(4, {{0, 1}, {1, 0}, {2, 3}, {3, 2}});
    return LassoPattern({}, {g});
}

inline bool
is_ll(const LassoPattern& p)
{
    if (p.n != 2)
        return false;
    auto ok = [](const CommGraph& g) { return char_of_graph(g) != '-'; };
    return std::all_of(p.prefix.begin(), p.prefix.end(), ok) &&
           std::all_of(p.loop.begin(), p.loop.end(), ok);
}

// at most one delivered message in the whole pattern, loop fully silent
inline bool
is_one_message(const LassoPattern& p)
{
    if (p.n != 2)
        return false;
    for (const auto& g : p.loop)
        if (char_of_graph(g) != '-')
            return false;
    int messages = 0;
    for (const auto& g : p.prefix)
    {
        char c = char_of_graph(g);
        if (c == '=')
            return false;
        if (c != '-')
            ++messages;
    }
    return messages <= 1;
}

// every cyclic run of silent graphs in the loop is at most max_silence long,
// and the loop is not fully silent
inline bool
is_bdll_loop(const LassoPattern& p, int max_silence)
{
    if (p.n != 2 || !p.prefix.empty())
        return false;
    int len = p.loop_len();
    bool any_msg = false;
    for (const auto& g : p.loop)
        if (char_of_graph(g) != '-')
            any_msg = true;
    if (!any_msg)
        return false;
    for (int s = 0; s < len; ++s)
    {
        if (char_of_graph(p.loop[s]) != '-')
            continue;
        int run = 0;
        for (int k = s; char_of_graph(p.loop[k % len]) == '-'; ++k)
        {
            ++run;
            if (run > max_silence)
                return false;
        }
    }
    return true;
}

} // namespace patterns

// Input assignment: one value per process.
struct InputAssignment
{
    std::vector<Value> inputs;

    InputAssignment() = default;
    InputAssignment(std::initializer_list<Value> vs) : inputs(vs) {}
    explicit InputAssignment(std::vector<Value> vs) : inputs(std::move(vs)) {}

    int n() const { return int(inputs.size()); }
    Value operator[](int p) const { return inputs.at(p); }

    bool valent() const
    {
        return std::all_of(inputs.begin(), inputs.end(),
                           [&](Value v) { return v == inputs.front(); });
    }

    Value min_over(ProcSet s) const
    {
        Value best = 0;
        bool any = false;
        for (int p = 0; p < n(); ++p)
            if (in_set(s, p) && (!any || inputs[p] < best))
            {
                best = inputs[p];
                any = true;
            }
        if (!any)
            throw std::invalid_argument("min_over: empty process set");
        return best;
    }

    bool operator==(const InputAssignment& o) const = default;
};

inline void
check_inputs(const InputAssignment& in, const ValueSet& vs, int n)
{
    if (in.n() != n)
        throw std::invalid_argument("InputAssignment: wrong length");
    for (Value v : in.inputs)
        if (!vs.contains(v))
            throw std::invalid_argument("InputAssignment: value outside ValueSet");
}

// --- temporal reachability and the kernel ---------------------------------

// Processes reachable from `from` via multi-hop paths through
// G^start, G^{start+1}, ..., using at most `rounds` rounds.
inline ProcSet
reach_from(const LassoPattern& pat, int from, int start_round, int rounds)
{
    ProcSet r = proc_bit(from);
    int quiet = 0; // consecutive rounds without growth
    for (int t = start_round; t < start_round + rounds; ++t)
    {
        const CommGraph& g = pat.at(t);
        ProcSet next = r;
        for (int p = 0; p < pat.n; ++p)
            if (!in_set(next, p) && (g.column(p) & r))
                next |= proc_bit(p);
        quiet = (next == r) ? quiet + 1 : 0;
        r = next;
        // A full loop period without growth, entirely past the prefix,
        // repeats forever.
        if (quiet >= pat.loop_len() && t - quiet + 1 > pat.prefix_len())
            break;
        if (r == full_set(pat.n))
            break;
    }
    return r;
}

// [OP] kernel: processes that reach all others from every start round.
// Start rounds inside the prefix are dominated by the loop residues, so it
// suffices to test every residue class of the loop with a conservative
// unrolling of (n-1)*|loop| loop iterations.
inline ProcSet
kernel(const LassoPattern& pat)
{
    int n = pat.n;
    int L = pat.loop_len();
    int unroll = std::max(1, (n - 1) * L) * L + L;
    ProcSet all = full_set(n);
    ProcSet k = 0;
    for (int p = 0; p < n; ++p)
    {
        bool ok = true;
        for (int residue = 0; residue < L && ok; ++residue)
        {
            int start = pat.prefix_len() + 1 + residue;
            if (reach_from(pat, p, start, unroll) != all)
                ok = false;
        }
        if (ok)
            k |= proc_bit(p);
    }
    return k;
}

} // namespace stabcon

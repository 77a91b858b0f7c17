// Copyright 2026 the stabcon developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <functional>

#include "distance.hpp"

namespace stabcon
{

// Indexed family of executions with a declared limit.
struct SequenceFamily
{
    std::function<ExecSpec(int)> generator; // index 1..i_max
    ExecSpec limit;
    int i_max = 0;
};

struct LimitVerdict
{
    bool passes = false;
    int failing_index = -1;
    std::vector<DistanceValue> distances; // index i-1 holds d(seq(i), limit)
};

// [OP] verify_limit: desk-scale convergence evidence. The certified bound
// exponents f(i) must be non-decreasing with f(i_max) >= f(1) + i_max - 1,
// i.e. a strictly improving dyadic bound; all-zero distances pass trivially.
inline LimitVerdict
verify_limit(ViewArena& arena, const SequenceFamily& seq, const Metric& m,
             std::optional<int> horizon = std::nullopt)
{
    if (seq.i_max < 3)
        throw std::invalid_argument("verify_limit: need i_max >= 3");
    LimitVerdict out;
    constexpr int inf = std::numeric_limits<int>::max();
    int prev = -1;
    for (int i = 1; i <= seq.i_max; ++i)
    {
        DistanceValue d = distance(arena, seq.generator(i), seq.limit, m, horizon);
        out.distances.push_back(d);
        int e = d.exponent_or_inf();
        if (e < prev)
        {
            out.failing_index = i;
            return out;
        }
        prev = e;
    }
    int first = out.distances.front().exponent_or_inf();
    int last = out.distances.back().exponent_or_inf();
    bool improving = first == inf || last == inf || last >= first + seq.i_max - 1;
    if (!improving)
    {
        out.failing_index = seq.i_max;
        return out;
    }
    out.passes = true;
    return out;
}

// --- fair / unfair detection -----------------------------------------------

struct FairUnfairResult
{
    enum Kind
    {
        Fair,   // both sequences accumulate at the same execution
        Unfair, // distinct limits at certified distance zero
        None,
    };
    Kind kind = None;
    ExecSpec rho, rho_prime;
};

// [OP] detect_fair_unfair over two labeled convergent sequences.
inline FairUnfairResult
detect_fair_unfair(ViewArena& arena, const SequenceFamily& seq_a, Value label_a,
                   const SequenceFamily& seq_b, Value label_b, const Metric& m,
                   std::optional<int> horizon = std::nullopt)
{
    if (label_a == label_b)
        throw std::invalid_argument("detect_fair_unfair: labels must differ");
    if (!verify_limit(arena, seq_a, m, horizon).passes ||
        !verify_limit(arena, seq_b, m, horizon).passes)
        throw std::invalid_argument("detect_fair_unfair: sequences must verify as convergent");

    FairUnfairResult out;
    if (seq_a.limit == seq_b.limit)
    {
        out.kind = FairUnfairResult::Fair;
        out.rho = seq_a.limit;
        return out;
    }
    DistanceValue d = distance(arena, seq_a.limit, seq_b.limit, m, horizon);
    if (d.kind == DistanceValue::Zero)
    {
        out.kind = FairUnfairResult::Unfair;
        out.rho = seq_a.limit;
        out.rho_prime = seq_b.limit;
    }
    return out;
}

// --- the lossy-link prefix order ---------------------------------------------

enum class LL : char
{
    Right = '>',
    Both = '=',
    Left = '<',
};

using LLPrefix = std::vector<LL>;

inline std::string
ll_prefix_str(const LLPrefix& p)
{
    std::string s;
    for (LL g : p)
        s += char(g);
    return s;
}

inline LassoPattern
ll_border(const LLPrefix& sigma, LL tail,
          const std::vector<CommGraph>& history = {})
{
    std::vector<CommGraph> pre = history;
    for (LL g : sigma)
        pre.push_back(graph_of_char(char(g)));
    return LassoPattern(std::move(pre), {graph_of_char(char(tail))});
}

// [OP] prefix_order_ll: total order of all 3^k prefixes in which every
// consecutive pair is indistinguishable to one of the processes at round k
// under equal inputs. Blocks expand recursively with alternating direction,
// which makes neighbouring blocks meet on a matching last symbol.
inline std::vector<LLPrefix>
prefix_order_ll(int k)
{
    if (k < 1 || k > 8)
        throw std::invalid_argument("prefix_order_ll: need 1 <= k <= 8");
    static const LL fwd[3] = {LL::Right, LL::Both, LL::Left};
    static const LL rev[3] = {LL::Left, LL::Both, LL::Right};
    std::vector<LLPrefix> order{{}};
    for (int level = 0; level < k; ++level)
    {
        std::vector<LLPrefix> next;
        next.reserve(order.size() * 3);
        bool forward = true;
        for (const LLPrefix& sigma : order)
        {
            const LL* dir = forward ? fwd : rev;
            for (int i = 0; i < 3; ++i)
            {
                LLPrefix ext = sigma;
                ext.push_back(dir[i]);
                next.push_back(std::move(ext));
            }
            forward = !forward;
        }
        order = std::move(next);
    }
    return order;
}

// Witness process for which two consecutive prefixes are indistinguishable at
// round k (0 = l, 1 = r), or -1 if none; used to validate the order.
inline int
indistinguishable_at(ViewArena& arena, const LLPrefix& a, const LLPrefix& b,
                     const InputAssignment& inputs)
{
    int k = int(a.size());
    Algorithm probe = make_minmax();
    Trace ta = run_sync(arena, ll_border(a, LL::Right), inputs, probe, k);
    Trace tb = run_sync(arena, ll_border(b, LL::Right), inputs, probe, k);
    for (int p = 0; p < 2; ++p)
        if (ta.at(k).digests[size_t(p)] == tb.at(k).digests[size_t(p)])
            return p;
    return -1;
}

} // namespace stabcon

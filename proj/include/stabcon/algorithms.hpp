// Copyright 2026 the stabcon developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <functional>
#include <memory>
#include <span>
#include <string>

#include "model.hpp"
#include "view.hpp"

namespace stabcon
{

// Cut-off function for the generalized min-max rule. Must satisfy
// 0 <= theta(t) < t, be non-decreasing, and diverge together with t-theta(t).
struct CutoffFunction
{
    std::string name;
    std::function<int(int)> theta;
};

inline CutoffFunction
cutoff_half()
{
    return {"half", [](int t) { return t / 2; }};
}

// Samples t up to `bound` and rejects functions that violate the cut-off
// contract. Divergence of theta and t-theta is checked on the sample.
inline void
validate_cutoff(const CutoffFunction& c, int bound = 4096)
{
    int prev = 0, prev_gap = 1;
    for (int t = 1; t <= bound; ++t)
    {
        int th = c.theta(t);
        if (th < 0 || th >= t)
            throw std::invalid_argument("cutoff: need 0 <= theta(t) < t");
        if (th < prev)
            throw std::invalid_argument("cutoff: theta must be non-decreasing");
        int gap = t - th;
        if (gap < prev_gap)
            throw std::invalid_argument("cutoff: t - theta(t) must be non-decreasing");
        prev = th;
        prev_gap = gap;
    }
    if (c.theta(bound) <= c.theta(16) || (bound - c.theta(bound)) <= (16 - c.theta(16)))
        throw std::invalid_argument("cutoff: theta and t - theta must diverge");
}

// A pluggable decision rule: a pure function of the local view. The arena is
// read-only here; decisions may not look at anything but the view structure.
struct Algorithm
{
    std::string id;
    std::function<Value(const ViewArena&, ViewId)> decide;
    // which lasso patterns the algorithm is meant for (used by the CLI and
    // the attack driver to reject domain mismatches)
    std::function<bool(const LassoPattern&)> admits_pattern;
    bool supports_async = false;
};

// --- min-max --------------------------------------------------------------
// At round t: max over the round-(t-1) states q merged into the view of the
// min input over q's heard-of set. At round 0 the output is the own input.
inline Value
minmax_decide(const ViewArena& a, ViewId view)
{
    if (a.round(view) == 0)
        return a[view].input;
    auto [b, e] = a.children(view);
    Value best = a.min_input(*b);
    for (auto it = b + 1; it != e; ++it)
        best = std::max(best, a.min_input(*it));
    return best;
}

// --- safe min-max ---------------------------------------------------------
// Restricts attention to processes heard through messages sent after the
// cut-off round, and evaluates their heard-of sets at the cut-off.
inline Value
safe_minmax_decide(const ViewArena& a, ViewId view, const CutoffFunction& cutoff)
{
    int t = a.round(view);
    if (t == 0)
        return a[view].input;
    int th = cutoff.theta(t);

    // Sync view DAGs are leveled: a node (q, s) with s >= theta is reachable
    // through deliveries in rounds s+1..t only, so its presence witnesses
    // membership of q in the post-cutoff heard-through set.
    int n_owner_max = 0;
    a.visit(view, [&](ViewId id) { n_owner_max = std::max(n_owner_max, a.owner(id)); });
    std::vector<ViewId> at_cutoff(size_t(n_owner_max) + 1, kNoView);
    std::vector<bool> in_set_post(size_t(n_owner_max) + 1, false);
    a.visit(view, [&](ViewId id) {
        int q = a.owner(id);
        if (a.round(id) >= th)
            in_set_post[q] = true;
        if (a.round(id) == th)
            at_cutoff[q] = id;
    });

    bool any = false;
    Value best = 0;
    for (int q = 0; q <= n_owner_max; ++q)
    {
        if (!in_set_post[q] || at_cutoff[q] == kNoView)
            continue;
        Value m = a.min_input(at_cutoff[q]);
        if (!any || m > best)
            best = m;
        any = true;
    }
    if (!any)
        throw std::logic_error("safe_minmax: own state missing at cutoff");
    return best;
}

// --- min flooding ---------------------------------------------------------
// Flooding the running minimum under full information is the min input over
// everything transitively heard of.
inline Value
min_flood_decide(const ViewArena& a, ViewId view)
{
    return a.min_input(view);
}

// One step of the flooding rule on plain values.
inline Value
min_flood_step(Value current, std::span<const Value> received)
{
    Value out = current;
    for (Value v : received)
        out = std::min(out, v);
    return out;
}

// --- one-message keeper ---------------------------------------------------
// Keep the own input until a message arrives; then adopt the sender's output
// value at sending time and keep that. Meaningful on one-message patterns,
// where at most one foreign view ever enters the history.
inline Value
one_message_keeper_decide(const ViewArena& a, ViewId view)
{
    int me = a.owner(view);
    // walk the own chain from the oldest state upward
    std::vector<ViewId> chain;
    for (ViewId cur = view;;)
    {
        chain.push_back(cur);
        auto [b, e] = a.children(cur);
        ViewId prev = kNoView;
        for (auto it = b; it != e; ++it)
            if (a.owner(*it) == me)
                prev = *it;
        if (prev == kNoView)
            break;
        cur = prev;
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
    {
        auto [b, e] = a.children(*it);
        for (auto c = b; c != e; ++c)
            if (a.owner(*c) != me)
                return one_message_keeper_decide(a, *c);
    }
    return a[chain.back()].input;
}

// --- registry ---------------------------------------------------------------

inline Algorithm
make_minmax()
{
    return Algorithm{
        "minmax",
        [](const ViewArena& a, ViewId v) { return minmax_decide(a, v); },
        [](const LassoPattern&) { return true; },
        false,
    };
}

inline Algorithm
make_safe_minmax(CutoffFunction cutoff = cutoff_half())
{
    validate_cutoff(cutoff);
    auto c = std::make_shared<CutoffFunction>(std::move(cutoff));
    return Algorithm{
        "safe-minmax(theta=" + c->name + ")",
        [c](const ViewArena& a, ViewId v) { return safe_minmax_decide(a, v, *c); },
        [](const LassoPattern&) { return true; },
        false,
    };
}

inline Algorithm
make_min_flood()
{
    return Algorithm{
        "min-flood",
        [](const ViewArena& a, ViewId v) { return min_flood_decide(a, v); },
        [](const LassoPattern&) { return true; },
        true,
    };
}

inline Algorithm
make_one_message_keeper()
{
    return Algorithm{
        "one-message-keeper",
        [](const ViewArena& a, ViewId v) { return one_message_keeper_decide(a, v); },
        [](const LassoPattern& p) { return patterns::is_one_message(p); },
        false,
    };
}

inline Algorithm
algorithm_by_id(const std::string& id)
{
    if (id == "minmax")
        return make_minmax();
    if (id == "safe-minmax" || id == "safe-minmax(theta=half)")
        return make_safe_minmax();
    if (id == "min-flood")
        return make_min_flood();
    if (id == "one-message-keeper")
        return make_one_message_keeper();
    throw std::invalid_argument("unknown algorithm id: " + id);
}

} // namespace stabcon

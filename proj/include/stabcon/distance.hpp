// Copyright 2026 the stabcon developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdlib>
#include <limits>
#include <numeric>
#include <optional>

#include "sim.hpp"

namespace stabcon
{

// Exact dyadic distance between executions.
//   zero        : exactly 0, certified structurally
//   dyadic(t)   : exactly 2^-t (first divergence at configuration t)
//   upper(t)    : <= 2^-t, divergence not found within the horizon
struct DistanceValue
{
    enum Kind
    {
        Zero,
        Dyadic,
        UpperBound,
    };
    Kind kind = Zero;
    int exponent = 0; // meaningful for Dyadic and UpperBound
    bool certified = true;

    static DistanceValue zero() { return {Zero, 0, true}; }
    static DistanceValue dyadic(int t) { return {Dyadic, t, true}; }
    static DistanceValue upper(int t) { return {UpperBound, t, false}; }

    bool is_exact() const { return kind != UpperBound; }

    // exponent with Zero mapped to +infinity
    int exponent_or_inf() const
    {
        return kind == Zero ? std::numeric_limits<int>::max() : exponent;
    }

    std::string str() const
    {
        switch (kind)
        {
        case Zero:
            return "0";
        case Dyadic:
            return "2^-" + std::to_string(exponent);
        default:
            return "<=2^-" + std::to_string(exponent);
        }
    }

    bool operator==(const DistanceValue& o) const = default;
};

// exact comparison 2^-a <= 2^-b + 2^-c, exponents with INT_MAX as zero
inline bool
dyadic_le_sum(int a, int b, int c)
{
    constexpr int inf = std::numeric_limits<int>::max();
    if (a == inf)
        return true;
    if (b == inf && c == inf)
        return false;
    if (b == inf)
        return a >= c;
    if (c == inf)
        return a >= b;
    int m = std::min(b, c);
    return a >= (b == c ? m - 1 : m);
}

// exact value order for exact distances (Zero < smaller-dyadic)
inline bool
dist_value_less(const DistanceValue& x, const DistanceValue& y)
{
    return x.exponent_or_inf() > y.exponent_or_inf();
}

// --- horizons ----------------------------------------------------------------

inline int
horizon_cap_from_env()
{
    if (const char* s = std::getenv("STABCON_HORIZON_CAP"))
    {
        int v = std::atoi(s);
        if (v > 0)
            return v;
    }
    return 512;
}

inline int
default_distance_horizon(const ExecSpec& a, const ExecSpec& b)
{
    if (a.is_async || b.is_async)
        return int(std::min(a.schedule.events.size(), b.schedule.events.size()));
    int la = a.pattern.loop_len(), lb = b.pattern.loop_len();
    int h = a.pattern.prefix_len() + b.pattern.prefix_len() +
            4 * a.n() * std::lcm(la, lb);
    return std::min(h, horizon_cap_from_env());
}

// --- structural zero certification ---------------------------------------------
// p's view is a function of its timed causal cone: the states (q, s) that can
// flow into p, together with the inputs of cone processes and the incoming
// edges of cone states. If both lassos agree on all of that, the views agree
// forever. The cone and the columns are eventually periodic, so a finite
// window decides the whole infinite pattern.

namespace detail
{

// does q reach p via a temporal path through rounds start, start+1, ...?
inline bool
reaches(const LassoPattern& pat, int q, int p, int start)
{
    int L = pat.loop_len();
    int bound = std::max(0, pat.prefix_len() - start + 1) + (pat.n + 1) * L + L;
    return in_set(reach_from(pat, q, start, bound), p);
}

// cone membership: (q, s) flows into p iff q reaches p via rounds >= s+1
inline ProcSet
cone_at(const LassoPattern& pat, int p, int s)
{
    ProcSet c = proc_bit(p);
    for (int q = 0; q < pat.n; ++q)
        if (q != p && reaches(pat, q, p, s + 1))
            c |= proc_bit(q);
    return c;
}

inline bool
certify_zero(const ExecSpec& a, const ExecSpec& b, int p)
{
    const LassoPattern& A = a.pattern;
    const LassoPattern& B = b.pattern;
    if (A.n != B.n)
        return false;
    int period = std::lcm(A.loop_len(), B.loop_len());
    int window = std::max(A.prefix_len(), B.prefix_len()) + 2 * period + 1;

    if (a.inputs[p] != b.inputs[p])
        return false;

    ProcSet cone_procs = 0;
    std::vector<ProcSet> cone(size_t(window) + 1, 0);
    for (int s = 0; s <= window; ++s)
    {
        cone[size_t(s)] = cone_at(A, p, s) | cone_at(B, p, s);
        cone_procs |= cone[size_t(s)];
    }
    // periodic tail sanity: the last two period-aligned cone rows must agree
    for (int s = window - period + 1; s <= window; ++s)
        if (cone[size_t(s)] != cone[size_t(s - period)])
            return false;

    for (int q = 0; q < A.n; ++q)
        if (in_set(cone_procs, q) && a.inputs[q] != b.inputs[q])
            return false;

    for (int s = 1; s <= window; ++s)
    {
        ProcSet c = cone[size_t(s)];
        for (int q = 0; q < A.n; ++q)
            if (in_set(c, q) && A.at(s).column(q) != B.at(s).column(q))
                return false;
    }
    return true;
}

} // namespace detail

// --- the p-view distance -------------------------------------------------------

// Divergence kernel over two traces from the same arena: the first
// configuration index where p's views differ or p is non-obedient in either,
// or -1 when none exists within the common horizon.
inline int
divergence_index(const Trace& ta, const Trace& tb, int p)
{
    int h = std::min(ta.horizon, tb.horizon);
    for (int t = 0; t <= h; ++t)
    {
        bool ob_a = in_set(ta.at(t).obedient, p);
        bool ob_b = in_set(tb.at(t).obedient, p);
        if (!ob_a || !ob_b || ta.at(t).digests[size_t(p)] != tb.at(t).digests[size_t(p)])
            return t;
    }
    return -1;
}

// Exact when a divergence is found, structurally certified zero when the
// cone test passes, a bound otherwise.
inline DistanceValue
view_distance(ViewArena& arena, const ExecSpec& a, const ExecSpec& b, int p,
              std::optional<int> horizon_opt = std::nullopt)
{
    if (a.n() != b.n())
        throw std::invalid_argument("view_distance: different process counts");
    if (p < 0 || p >= a.n())
        throw std::invalid_argument("view_distance: process out of range");
    if (a.is_async != b.is_async)
        throw std::invalid_argument("view_distance: mixed sync/async comparison");

    int horizon = horizon_opt.value_or(default_distance_horizon(a, b));
    Algorithm probe = a.is_async ? make_min_flood() : make_minmax();
    Trace ta = run(arena, a, probe, horizon);
    Trace tb = run(arena, b, probe, horizon);
    int t = divergence_index(ta, tb, p);
    if (t >= 0)
        return DistanceValue::dyadic(t);
    if (!a.is_async && detail::certify_zero(a, b, p))
        return DistanceValue::zero();
    return DistanceValue::upper(std::min(ta.horizon, tb.horizon));
}

// --- metric selection ------------------------------------------------------------

struct Metric
{
    enum Kind
    {
        PView,
        Uniform,
        NonUniform,
    };
    Kind kind = NonUniform;
    int p = 0; // for PView

    static Metric p_view(int p) { return {PView, p}; }
    static Metric uniform() { return {Uniform, 0}; }
    static Metric nonuniform() { return {NonUniform, 0}; }

    std::string str() const
    {
        switch (kind)
        {
        case PView:
            return "p:" + std::to_string(p);
        case Uniform:
            return "uniform";
        default:
            return "nonuniform";
        }
    }
};

inline Metric
parse_metric(const std::string& s)
{
    if (s == "uniform")
        return Metric::uniform();
    if (s == "nonuniform")
        return Metric::nonuniform();
    if (s.rfind("p:", 0) == 0)
    {
        std::string rest = s.substr(2);
        if (rest == "l")
            return Metric::p_view(0);
        if (rest == "r")
            return Metric::p_view(1);
        return Metric::p_view(std::stoi(rest));
    }
    throw std::invalid_argument("metric: expected p:<id>, uniform or nonuniform");
}

// exact minimum of a set of distance values, conservative under bounds:
// the result is exact unless a bound could undercut every exact entry
inline DistanceValue
min_distance(const std::vector<DistanceValue>& ds)
{
    if (ds.empty())
        throw std::invalid_argument("min_distance: empty");
    int best_exact = -1; // largest exponent among exact entries
    bool any_zero = false, any_upper = false;
    int max_upper = -1;
    for (const auto& d : ds)
    {
        if (d.kind == DistanceValue::Zero)
            any_zero = true;
        else if (d.kind == DistanceValue::Dyadic)
            best_exact = std::max(best_exact, d.exponent);
        else
        {
            any_upper = true;
            max_upper = std::max(max_upper, d.exponent);
        }
    }
    if (any_zero)
        return DistanceValue::zero();
    if (!any_upper)
        return DistanceValue::dyadic(best_exact);
    // a bound entry might hide a smaller true value
    return DistanceValue::upper(std::max(best_exact, max_upper));
}

inline ProcSet
obedient_of(ViewArena& arena, const ExecSpec& e)
{
    if (!e.is_async)
        return full_set(e.n());
    Trace t = run(arena, e, make_min_flood(), int(e.schedule.events.size()));
    return t.obedient_throughout();
}

// [OP] d_uniform: min over all processes
inline DistanceValue
d_uniform(ViewArena& arena, const ExecSpec& a, const ExecSpec& b,
          std::optional<int> horizon = std::nullopt)
{
    std::vector<DistanceValue> ds;
    for (int p = 0; p < a.n(); ++p)
        ds.push_back(view_distance(arena, a, b, p, horizon));
    return min_distance(ds);
}

// [OP] d_nonuniform: min over commonly obedient processes; 1 when none exist
inline DistanceValue
d_nonuniform(ViewArena& arena, const ExecSpec& a, const ExecSpec& b,
             std::optional<int> horizon = std::nullopt)
{
    ProcSet common = obedient_of(arena, a) & obedient_of(arena, b);
    if (common == 0)
        return DistanceValue::dyadic(0);
    std::vector<DistanceValue> ds;
    for (int p = 0; p < a.n(); ++p)
        if (in_set(common, p))
            ds.push_back(view_distance(arena, a, b, p, horizon));
    return min_distance(ds);
}

inline DistanceValue
distance(ViewArena& arena, const ExecSpec& a, const ExecSpec& b, const Metric& m,
         std::optional<int> horizon = std::nullopt)
{
    switch (m.kind)
    {
    case Metric::PView:
        return view_distance(arena, a, b, m.p, horizon);
    case Metric::Uniform:
        return d_uniform(arena, a, b, horizon);
    default:
        return d_nonuniform(arena, a, b, horizon);
    }
}

// [OP] diameter: sup of pairwise distances over a finite family
inline DistanceValue
diameter(ViewArena& arena, const std::vector<ExecSpec>& family, const Metric& m,
         std::optional<int> horizon = std::nullopt)
{
    DistanceValue sup = DistanceValue::zero();
    bool bounded_only = false;
    int max_upper = std::numeric_limits<int>::max();
    for (size_t i = 0; i < family.size(); ++i)
        for (size_t j = i + 1; j < family.size(); ++j)
        {
            DistanceValue d = distance(arena, family[i], family[j], m, horizon);
            if (d.kind == DistanceValue::UpperBound)
            {
                bounded_only = true;
                max_upper = std::min(max_upper, d.exponent);
            }
            else if (dist_value_less(sup, d))
                sup = d;
        }
    if (bounded_only && sup.exponent_or_inf() > max_upper)
        return DistanceValue::upper(max_upper);
    return sup;
}

} // namespace stabcon

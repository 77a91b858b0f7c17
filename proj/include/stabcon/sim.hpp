// Copyright 2026 the stabcon developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <optional>
#include <random>
#include <variant>

#include "algorithms.hpp"
#include "model.hpp"
#include "view.hpp"

namespace stabcon
{

struct schedule_error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

// --- asynchronous schedules -------------------------------------------------

struct AsyncEvent
{
    enum Kind
    {
        Step,    // proc broadcasts its current state and counts a step
        Deliver, // proc receives `from`'s msg_index-th broadcast
        Crash,   // proc halts permanently
    };
    Kind kind;
    int proc;
    int from = -1;
    int msg_index = -1;

    bool operator==(const AsyncEvent& o) const = default;
};

struct AsyncSchedule
{
    int n = 0;
    int window = 4; // fair-lossy fairness window W
    std::vector<AsyncEvent> events;

    bool operator==(const AsyncSchedule& o) const = default;
};

// Rejects schedules that step or deliver on crashed processes, reference
// unsent messages, or violate the fairness window: between any W consecutive
// steps of an obedient p, every obedient q that stepped in that span must get
// at least one delivery through to p.
inline void
check_schedule(const AsyncSchedule& s)
{
    int n = s.n;
    if (n < 1 || n > kMaxProcs)
        throw schedule_error("schedule: bad process count");
    if (s.window < 1)
        throw schedule_error("schedule: bad fairness window");
    std::vector<int> sent(n, 0);
    std::vector<bool> crashed(n, false);
    for (const auto& e : s.events)
    {
        if (e.proc < 0 || e.proc >= n)
            throw schedule_error("schedule: process out of range");
        if (crashed[e.proc])
            throw schedule_error("schedule: event by crashed process");
        switch (e.kind)
        {
        case AsyncEvent::Step:
            ++sent[e.proc];
            break;
        case AsyncEvent::Deliver:
            if (e.from < 0 || e.from >= n || e.from == e.proc)
                throw schedule_error("schedule: bad delivery source");
            if (e.msg_index < 0 || e.msg_index >= sent[e.from])
                throw schedule_error("schedule: delivery of unsent message");
            break;
        case AsyncEvent::Crash:
            crashed[e.proc] = true;
            break;
        }
    }

    ProcSet obedient = 0;
    for (int p = 0; p < n; ++p)
        if (!crashed[p])
            obedient |= proc_bit(p);
    if (obedient == 0)
        throw schedule_error("schedule: no obedient process");

    // fairness windows
    std::vector<std::vector<int>> steps(n); // event indices of each p's steps
    for (size_t i = 0; i < s.events.size(); ++i)
        if (s.events[i].kind == AsyncEvent::Step)
            steps[s.events[i].proc].push_back(int(i));
    for (int p = 0; p < n; ++p)
    {
        if (!in_set(obedient, p))
            continue;
        const auto& sp = steps[p];
        for (size_t i = 0; i + s.window <= sp.size(); ++i)
        {
            int lo = sp[i], hi = sp[i + s.window - 1];
            for (int q = 0; q < n; ++q)
            {
                if (q == p || !in_set(obedient, q))
                    continue;
                bool q_stepped = false, q_heard = false;
                for (int ev = lo; ev <= hi; ++ev)
                {
                    const auto& e = s.events[ev];
                    if (e.kind == AsyncEvent::Step && e.proc == q)
                        q_stepped = true;
                    if (e.kind == AsyncEvent::Deliver && e.proc == p && e.from == q)
                        q_heard = true;
                }
                if (q_stepped && !q_heard)
                    throw schedule_error("schedule: fairness window violated");
            }
        }
    }
}

// Deterministic generator of fairness-respecting schedules. Every block has
// each live process step once (shuffled) followed by latest-message
// deliveries between all live pairs, so any window >= 2 is satisfied.
inline AsyncSchedule
generate_fair_schedule(std::uint64_t seed, int n, int blocks, int window = 4,
                       const std::vector<std::pair<int, int>>& crash_at_block = {})
{
    std::mt19937_64 rng(seed);
    AsyncSchedule s;
    s.n = n;
    s.window = window;
    std::vector<bool> crashed(n, false);
    std::vector<int> sent(n, 0);
    for (int b = 0; b < blocks; ++b)
    {
        for (auto [p, blk] : crash_at_block)
            if (blk == b && !crashed[p])
            {
                crashed[p] = true;
                s.events.push_back({AsyncEvent::Crash, p});
            }
        std::vector<int> order;
        for (int p = 0; p < n; ++p)
            if (!crashed[p])
                order.push_back(p);
        if (order.empty())
            break;
        std::shuffle(order.begin(), order.end(), rng);
        for (int p : order)
        {
            s.events.push_back({AsyncEvent::Step, p});
            ++sent[p];
        }
        for (int q : order)
            for (int p : order)
                if (p != q)
                    s.events.push_back({AsyncEvent::Deliver, p, q, sent[q] - 1});
    }
    return s;
}

// --- execution specs ----------------------------------------------------------

// Identity of a deterministic run; all distance computations key on this.
struct ExecSpec
{
    bool is_async = false;
    LassoPattern pattern;   // sync only
    AsyncSchedule schedule; // async only
    InputAssignment inputs;

    int n() const { return is_async ? schedule.n : pattern.n; }

    static ExecSpec sync(LassoPattern p, InputAssignment i)
    {
        ExecSpec s;
        s.pattern = std::move(p);
        s.inputs = std::move(i);
        if (s.inputs.n() != s.pattern.n)
            throw std::invalid_argument("ExecSpec: inputs/pattern length mismatch");
        return s;
    }

    static ExecSpec async(AsyncSchedule sch, InputAssignment i)
    {
        ExecSpec s;
        s.is_async = true;
        s.schedule = std::move(sch);
        s.inputs = std::move(i);
        if (s.inputs.n() != s.schedule.n)
            throw std::invalid_argument("ExecSpec: inputs/schedule length mismatch");
        return s;
    }

    bool operator==(const ExecSpec& o) const = default;
};

// [OP] remap_inputs: same pattern or schedule, different inputs.
inline ExecSpec
remap_inputs(const ExecSpec& spec, InputAssignment new_inputs)
{
    if (new_inputs.n() != spec.inputs.n())
        throw std::invalid_argument("remap_inputs: length mismatch");
    ExecSpec out = spec;
    out.inputs = std::move(new_inputs);
    return out;
}

// --- traces ---------------------------------------------------------------

struct TraceRound
{
    std::vector<Value> outputs;
    std::vector<ProcSet> ho;
    std::vector<ViewId> digests;
    ProcSet obedient = 0;
    std::vector<int> clock;
};

struct Trace
{
    ExecSpec spec;
    std::string algorithm;
    int n = 0;
    int horizon = 0;               // configurations 0..horizon
    std::vector<TraceRound> rounds;

    const TraceRound& at(int t) const { return rounds.at(size_t(t)); }
    ProcSet obedient_throughout() const { return rounds.back().obedient; }
};

// [OP] ho_set
inline ProcSet
ho_set(const Trace& tr, int p, int t)
{
    return tr.at(t).ho.at(size_t(p));
}

// --- synchronous engine -----------------------------------------------------

inline Trace
run_sync(ViewArena& arena, const LassoPattern& pattern, const InputAssignment& inputs,
         const Algorithm& algo, int horizon)
{
    if (horizon < 1)
        throw std::invalid_argument("run_sync: horizon must be >= 1");
    if (inputs.n() != pattern.n)
        throw std::invalid_argument("run_sync: inputs/pattern length mismatch");
    int n = pattern.n;

    Trace tr;
    tr.spec = ExecSpec::sync(pattern, inputs);
    tr.algorithm = algo.id;
    tr.n = n;
    tr.horizon = horizon;
    tr.rounds.reserve(size_t(horizon) + 1);

    std::vector<ViewId> views(n);
    for (int p = 0; p < n; ++p)
        views[p] = arena.leaf(p, inputs[p]);

    auto record = [&](int t) {
        TraceRound row;
        row.outputs.resize(n);
        row.ho.resize(n);
        row.digests = views;
        row.obedient = full_set(n);
        row.clock.assign(n, t);
        for (int p = 0; p < n; ++p)
        {
            row.outputs[p] = algo.decide(arena, views[p]);
            row.ho[p] = arena.ho(views[p]);
        }
        tr.rounds.push_back(std::move(row));
    };

    record(0);
    std::vector<ViewId> next(n);
    std::vector<ViewId> merged;
    for (int t = 1; t <= horizon; ++t)
    {
        const CommGraph& g = pattern.at(t);
        for (int p = 0; p < n; ++p)
        {
            merged.clear();
            ProcSet col = g.column(p);
            for (int q = 0; q < n; ++q)
                if (in_set(col, q))
                    merged.push_back(views[q]);
            next[p] = arena.node(p, t, merged);
        }
        views = next;
        record(t);
    }
    return tr;
}

// --- asynchronous engine ------------------------------------------------------

inline Trace
run_async(ViewArena& arena, const AsyncSchedule& schedule, const InputAssignment& inputs,
          const Algorithm& algo, std::optional<int> horizon = std::nullopt)
{
    check_schedule(schedule);
    if (!algo.supports_async)
        throw std::invalid_argument("run_async: algorithm does not support the asynchronous model");
    int n = schedule.n;
    if (inputs.n() != n)
        throw std::invalid_argument("run_async: inputs/schedule length mismatch");
    int steps_limit = horizon.value_or(int(schedule.events.size()));
    if (steps_limit > int(schedule.events.size()))
        throw std::invalid_argument("run_async: horizon exceeds schedule length");

    Trace tr;
    tr.spec = ExecSpec::async(schedule, inputs);
    tr.algorithm = algo.id;
    tr.n = n;
    tr.horizon = steps_limit;

    std::vector<ViewId> views(n);
    std::vector<int> seq(n, 0), clock(n, 0);
    std::vector<std::vector<ViewId>> outbox(n);
    ProcSet obedient = full_set(n);
    for (int p = 0; p < n; ++p)
        views[p] = arena.leaf(p, inputs[p]);

    auto record = [&]() {
        TraceRound row;
        row.outputs.resize(n);
        row.ho.resize(n);
        row.digests = views;
        row.obedient = obedient;
        row.clock = clock;
        for (int p = 0; p < n; ++p)
        {
            row.outputs[p] = algo.decide(arena, views[p]);
            row.ho[p] = arena.ho(views[p]);
        }
        tr.rounds.push_back(std::move(row));
    };

    record();
    for (int i = 0; i < steps_limit; ++i)
    {
        const AsyncEvent& e = schedule.events[size_t(i)];
        switch (e.kind)
        {
        case AsyncEvent::Step:
            outbox[e.proc].push_back(views[e.proc]);
            views[e.proc] = arena.node(e.proc, ++seq[e.proc], {views[e.proc]});
            ++clock[e.proc];
            break;
        case AsyncEvent::Deliver:
            views[e.proc] = arena.node(e.proc, ++seq[e.proc],
                                       {views[e.proc], outbox[e.from][size_t(e.msg_index)]});
            break;
        case AsyncEvent::Crash:
            obedient &= ~proc_bit(e.proc);
            break;
        }
        record();
    }
    return tr;
}

inline Trace
run(ViewArena& arena, const ExecSpec& spec, const Algorithm& algo, int horizon)
{
    if (spec.is_async)
        return run_async(arena, spec.schedule, spec.inputs, algo, horizon);
    return run_sync(arena, spec.pattern, spec.inputs, algo, horizon);
}

// --- broadcasters -----------------------------------------------------------

struct BroadcasterSet
{
    ProcSet set = 0;
    bool certified = false; // final: equals bc of the infinite execution
};

// [OP] broadcasters: intersection over obedient q of HO_q(C^t). For lasso
// patterns the result is final once t >= |prefix| + (n-1)*|loop|*n.
inline BroadcasterSet
broadcasters(const Trace& tr, int t)
{
    const TraceRound& row = tr.at(t);
    ProcSet ob = tr.obedient_throughout();
    ProcSet bc = full_set(tr.n);
    for (int q = 0; q < tr.n; ++q)
        if (in_set(ob, q))
            bc &= row.ho[size_t(q)];
    BroadcasterSet out;
    out.set = bc;
    if (!tr.spec.is_async)
    {
        const LassoPattern& pat = tr.spec.pattern;
        out.certified = t >= pat.prefix_len() + (tr.n - 1) * pat.loop_len() * tr.n;
    }
    return out;
}

// --- stabilization verdicts ----------------------------------------------------

struct Verdict
{
    bool stabilized = false;
    Value value = 0;
    int round = -1;        // minimal s with all obedient outputs equal on [s, horizon]
    bool certified = false;
};

// Default certification multiplier; the verdict is certified when the horizon
// exceeds |prefix| + C*|loop| and the outputs over the final loop period
// exactly repeat the previous period.
inline int
default_certification_multiplier(int n)
{
    return 4 * n;
}

inline Verdict
stabilization_verdict(const Trace& tr, std::optional<int> mult = std::nullopt)
{
    Verdict v;
    ProcSet ob = tr.obedient_throughout();
    auto all_equal = [&](int t, Value& out) {
        bool any = false;
        for (int p = 0; p < tr.n; ++p)
        {
            if (!in_set(ob, p))
                continue;
            Value o = tr.at(t).outputs[size_t(p)];
            if (!any)
            {
                out = o;
                any = true;
            }
            else if (o != out)
                return false;
        }
        return any;
    };

    Value last;
    if (!all_equal(tr.horizon, last))
        return v;
    int s = tr.horizon;
    while (s > 0)
    {
        Value prev;
        if (!all_equal(s - 1, prev) || prev != last)
            break;
        --s;
    }
    v.stabilized = true;
    v.value = last;
    v.round = s;

    if (!tr.spec.is_async)
    {
        const LassoPattern& pat = tr.spec.pattern;
        int L = pat.loop_len();
        int C = mult.value_or(default_certification_multiplier(tr.n));
        if (tr.horizon >= pat.prefix_len() + C * L && tr.horizon >= 2 * L)
        {
            bool periodic = true;
            for (int t = tr.horizon - L + 1; t <= tr.horizon && periodic; ++t)
                for (int p = 0; p < tr.n; ++p)
                    if (tr.at(t).outputs[size_t(p)] != tr.at(t - L).outputs[size_t(p)])
                    {
                        periodic = false;
                        break;
                    }
            v.certified = periodic;
        }
    }
    return v;
}

// Simulation horizon that makes built-in verdicts certifiable.
inline int
certification_horizon(const LassoPattern& pat, std::optional<int> mult = std::nullopt)
{
    int C = mult.value_or(default_certification_multiplier(pat.n));
    return pat.prefix_len() + C * pat.loop_len();
}

} // namespace stabcon

// Copyright 2026 the stabcon developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include "topology.hpp"

namespace stabcon
{

// --- flip prefix search -----------------------------------------------------

struct FlipSearch
{
    bool found = false;
    LLPrefix sigma;           // first prefix in order whose borders flip
    Verdict right_endpoint;   // verdict of sigma followed by l->r forever
    Verdict left_endpoint;    // verdict of sigma followed by l<-r forever
    std::string failure;      // set when not found
};

// [OP] find_flip_prefix: first k-prefix sigma (in the prefix order) whose
// border executions stabilize to 0 with the right-going tail and to 1 with
// the left-going tail. `history` conditions the search on an already fixed
// finite pattern, for chained constructions.
inline FlipSearch
find_flip_prefix(ViewArena& arena, const Algorithm& algo, int k,
                 const InputAssignment& inputs = InputAssignment{{0, 1}},
                 const std::vector<CommGraph>& history = {})
{
    FlipSearch out;
    LassoPattern probe = ll_border(LLPrefix(size_t(k), LL::Right), LL::Right, history);
    if (!algo.admits_pattern(probe))
    {
        out.failure = "algorithm does not admit lossy-link suffix patterns";
        return out;
    }
    bool all_certified = true;
    for (const LLPrefix& sigma : prefix_order_ll(k))
    {
        LassoPattern lam = ll_border(sigma, LL::Right, history);
        LassoPattern rho = ll_border(sigma, LL::Left, history);
        int h = certification_horizon(lam);
        Verdict vl = stabilization_verdict(run_sync(arena, lam, inputs, algo, h));
        Verdict vr = stabilization_verdict(run_sync(arena, rho, inputs, algo, h));
        if (!vl.certified || !vr.certified)
            all_certified = false;
        if (vl.certified && vl.stabilized && vl.value == 0 && vr.certified &&
            vr.stabilized && vr.value == 1)
        {
            out.found = true;
            out.sigma = sigma;
            out.right_endpoint = vl;
            out.left_endpoint = vr;
            return out;
        }
    }
    out.failure = all_certified
                      ? "no flip prefix: the algorithm violates validity on a border execution"
                      : "no flip prefix: some border execution failed certification";
    return out;
}

// --- the conflicting-prefix attack ---------------------------------------------

struct ConflictWitness
{
    std::string algorithm;
    int k = 0;
    LLPrefix sigma;
    int m = 0;
    std::vector<CommGraph> history; // committed graphs before sigma
    InputAssignment inputs;
    int conflict_round = 0;                 // |history| + k + m
    std::pair<int, int> conflict_interval;  // maximal run of joint disagreement
    Trace lambda_trace;                     // sigma silence^m (l->r)^omega
    Trace rho_trace;                        // sigma silence^m (l<-r)^omega
};

struct AttackResult
{
    bool found = false;
    ConflictWitness witness;
    std::string failure;
    int observed_left_round = -1;  // stabilization rounds seen when no m works
    int observed_right_round = -1;
};

inline LassoPattern
delayed_border(const std::vector<CommGraph>& history, const LLPrefix& sigma, int m, LL tail)
{
    std::vector<CommGraph> pre = history;
    for (LL g : sigma)
        pre.push_back(graph_of_char(char(g)));
    for (int i = 0; i < m; ++i)
        pre.push_back(CommGraph::silent2());
    return LassoPattern(std::move(pre), {graph_of_char(char(tail))});
}

// [OP] dll_attack: smallest silence length m <= m_max for which both delayed
// border executions show O_l = 0 and O_r = 1 at round |history| + k + m.
inline AttackResult
dll_attack(ViewArena& arena, const Algorithm& algo, int k, int m_max,
           const InputAssignment& inputs = InputAssignment{{0, 1}},
           const std::vector<CommGraph>& history = {})
{
    AttackResult out;
    FlipSearch flip = find_flip_prefix(arena, algo, k, inputs, history);
    if (!flip.found)
    {
        out.failure = flip.failure;
        return out;
    }
    int base = int(history.size()) + k;
    for (int m = 0; m <= m_max; ++m)
    {
        LassoPattern lam = delayed_border(history, flip.sigma, m, LL::Right);
        LassoPattern rho = delayed_border(history, flip.sigma, m, LL::Left);
        int h = std::max(certification_horizon(lam), base + m + 2);
        Trace tl = run_sync(arena, lam, inputs, algo, h);
        Trace tr = run_sync(arena, rho, inputs, algo, h);
        int round = base + m;
        auto conflicted = [&](const Trace& t, int at) {
            return t.at(at).outputs[0] == 0 && t.at(at).outputs[1] == 1;
        };
        if (conflicted(tl, round) && conflicted(tr, round))
        {
            ConflictWitness w;
            w.algorithm = algo.id;
            w.k = k;
            w.sigma = flip.sigma;
            w.m = m;
            w.history = history;
            w.inputs = inputs;
            w.conflict_round = round;
            int lo = round, hi = round;
            while (lo > 0 && conflicted(tl, lo - 1) && conflicted(tr, lo - 1))
                --lo;
            while (hi < std::min(tl.horizon, tr.horizon) && conflicted(tl, hi + 1) &&
                   conflicted(tr, hi + 1))
                ++hi;
            w.conflict_interval = {lo, hi};
            w.lambda_trace = std::move(tl);
            w.rho_trace = std::move(tr);
            out.found = true;
            out.witness = std::move(w);
            return out;
        }
        if (m == m_max)
        {
            out.observed_left_round =
                stabilization_verdict(run_sync(arena, ll_border(flip.sigma, LL::Right, history),
                                               inputs, algo, h))
                    .round;
            out.observed_right_round =
                stabilization_verdict(run_sync(arena, ll_border(flip.sigma, LL::Left, history),
                                               inputs, algo, h))
                    .round;
        }
    }
    out.failure = "no conflict within m_max; raise m_max";
    return out;
}

// Re-simulates a witness and checks every claimed fact: the two traces, the
// prefix indistinguishability of both processes through the conflict round,
// the output conflict over the claimed interval, and the two certified-zero
// distance facts of the construction.
inline std::optional<std::string>
verify_witness(ViewArena& arena, const ConflictWitness& w, const Algorithm& algo)
{
    LassoPattern lam = delayed_border(w.history, w.sigma, w.m, LL::Right);
    LassoPattern rho = delayed_border(w.history, w.sigma, w.m, LL::Left);
    int h = w.lambda_trace.horizon;
    if (h != w.rho_trace.horizon)
        return "trace horizons differ";
    Trace tl = run_sync(arena, lam, w.inputs, algo, h);
    Trace tr = run_sync(arena, rho, w.inputs, algo, h);
    for (int t = 0; t <= h; ++t)
        for (int p = 0; p < 2; ++p)
        {
            if (tl.at(t).outputs[size_t(p)] != w.lambda_trace.at(t).outputs[size_t(p)])
                return "lambda trace does not replay";
            if (tr.at(t).outputs[size_t(p)] != w.rho_trace.at(t).outputs[size_t(p)])
                return "rho trace does not replay";
        }
    int base = int(w.history.size()) + w.k + w.m;
    if (w.conflict_round != base)
        return "conflict round is not |history|+k+m";
    for (int t = 0; t <= base; ++t)
        for (int p = 0; p < 2; ++p)
            if (tl.at(t).digests[size_t(p)] != tr.at(t).digests[size_t(p)])
                return "prefix indistinguishability fails before the conflict round";
    auto [lo, hi] = w.conflict_interval;
    if (lo > w.conflict_round || hi < w.conflict_round)
        return "conflict interval does not contain the conflict round";
    for (int t = lo; t <= hi; ++t)
    {
        if (!(tl.at(t).outputs[0] == 0 && tl.at(t).outputs[1] == 1))
            return "no output conflict in lambda at round " + std::to_string(t);
        if (!(tr.at(t).outputs[0] == 0 && tr.at(t).outputs[1] == 1))
            return "no output conflict in rho at round " + std::to_string(t);
    }
    ExecSpec lam_m = ExecSpec::sync(lam, w.inputs);
    ExecSpec lam_0 = ExecSpec::sync(ll_border(w.sigma, LL::Right, w.history), w.inputs);
    ExecSpec rho_m = ExecSpec::sync(rho, w.inputs);
    ExecSpec rho_0 = ExecSpec::sync(ll_border(w.sigma, LL::Left, w.history), w.inputs);
    if (view_distance(arena, lam_m, lam_0, 0).kind != DistanceValue::Zero)
        return "left view distance between delayed and undelayed lambda is not certified zero";
    if (view_distance(arena, rho_m, rho_0, 1).kind != DistanceValue::Zero)
        return "right view distance between delayed and undelayed rho is not certified zero";
    return std::nullopt;
}

// --- chained non-stabilization construction ---------------------------------------

struct chain_error : std::runtime_error
{
    int stage;
    chain_error(int stage_, const std::string& why)
        : std::runtime_error("stage " + std::to_string(stage_) + ": " + why), stage(stage_)
    {
    }
};

struct NonStabilizationRun
{
    std::vector<ConflictWitness> stages;
    LassoPattern composite; // committed history with a left-going tail
    Trace trace;
    int max_flips = 0;  // output changes at the most-flipping process
    int flip_proc = 0;
    bool meets_target = false;
};

// [OP] nonstabilization_run: chains conflicting prefixes for the given k
// schedule. After each stage the left-going branch is committed until the
// algorithm has stabilized again, which leaves the next stage searchable.
inline NonStabilizationRun
nonstabilization_run(ViewArena& arena, const Algorithm& algo, const std::vector<int>& k_schedule,
                     int m_max, int flips_required,
                     const InputAssignment& inputs = InputAssignment{{0, 1}})
{
    NonStabilizationRun out;
    std::vector<CommGraph> history;
    int stage_no = 0;
    for (int k : k_schedule)
    {
        ++stage_no;
        AttackResult att = dll_attack(arena, algo, k, m_max, inputs, history);
        if (!att.found)
            throw chain_error(stage_no, att.failure);
        const ConflictWitness& w = att.witness;
        // commit the left-going branch through its stabilization round
        LassoPattern rho = delayed_border(history, w.sigma, w.m, LL::Left);
        int h = std::max(certification_horizon(rho), w.conflict_round + 2);
        Verdict v = stabilization_verdict(run_sync(arena, rho, inputs, algo, h));
        if (!v.stabilized)
            throw chain_error(stage_no, "left-going branch does not stabilize");
        int commit_to = std::max(v.round + 2, w.conflict_round + 1);
        std::vector<CommGraph> committed = history;
        for (int t = int(history.size()) + 1; t <= commit_to; ++t)
            committed.push_back(rho.at(t));
        history = std::move(committed);
        out.stages.push_back(w);
    }
    out.composite = LassoPattern(history, {CommGraph::ll_left()});
    int h = certification_horizon(out.composite);
    out.trace = run_sync(arena, out.composite, inputs, algo, h);
    for (int p = 0; p < 2; ++p)
    {
        int flips = 0;
        for (int t = 1; t <= out.trace.horizon; ++t)
            if (out.trace.at(t).outputs[size_t(p)] != out.trace.at(t - 1).outputs[size_t(p)])
                ++flips;
        if (flips > out.max_flips)
        {
            out.max_flips = flips;
            out.flip_proc = p;
        }
    }
    out.meets_target = out.max_flips >= flips_required;
    return out;
}

// --- empty kernel demonstration ------------------------------------------------

struct EmptyKernelReport
{
    bool kernel_empty = false;
    ProcSet broadcasters_at_horizon = 0;
    bool broadcasters_certified = false;
    bool valent = false;
    bool persistent_disagreement = false; // obedient outputs disagree at every round
    int first_agreeing_round = -1;        // -1 when disagreement persists
    Trace trace;
};

// [OP] empty_kernel_demo: on a pattern whose kernel is empty, a non-valent
// input assignment keeps obedient outputs in disagreement forever.
inline EmptyKernelReport
empty_kernel_demo(ViewArena& arena, const Algorithm& algo, const LassoPattern& pattern,
                  const InputAssignment& inputs, int horizon)
{
    if (kernel(pattern) != 0)
        throw std::invalid_argument("empty_kernel_demo: pattern kernel is non-empty");
    EmptyKernelReport rep;
    rep.kernel_empty = true;
    rep.valent = inputs.valent();
    rep.trace = run_sync(arena, pattern, inputs, algo, horizon);
    BroadcasterSet bc = broadcasters(rep.trace, horizon);
    rep.broadcasters_at_horizon = bc.set;
    rep.broadcasters_certified = bc.certified;
    rep.persistent_disagreement = true;
    for (int t = 0; t <= horizon; ++t)
    {
        bool agree = true;
        for (int p = 1; p < pattern.n; ++p)
            if (rep.trace.at(t).outputs[size_t(p)] != rep.trace.at(t).outputs[0])
                agree = false;
        if (agree)
        {
            rep.persistent_disagreement = false;
            if (rep.first_agreeing_round < 0)
                rep.first_agreeing_round = t;
        }
    }
    return rep;
}

} // namespace stabcon

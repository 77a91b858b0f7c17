// Copyright 2026 the stabcon developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Acceptance suite: one pass/fail line per criterion. Every expected value is
// pinned here; a criterion fails loudly rather than loosening a tolerance.

#include <chrono>
#include <cstdio>
#include <random>

#include <stabcon/stabcon.hpp>

#include "../brute_force.hpp"
#include "../families.hpp"
#include "../naive_views.hpp"

using namespace stabcon;

namespace
{

struct Harness
{
    bool all_pass = true;

    template <typename Fn>
    void criterion(int num, const char* name, double budget_s, Fn&& body)
    {
        auto start = std::chrono::steady_clock::now();
        bool ok = false;
        std::string why;
        try
        {
            why = body();
            ok = why.empty();
        }
        catch (const std::exception& e)
        {
            why = std::string("exception: ") + e.what();
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                          .count();
        if (ok && secs > budget_s)
        {
            ok = false;
            why = "over time budget";
        }
        std::printf("[%s] criterion %2d: %-46s (%6.2fs / %gs)%s%s\n", ok ? "PASS" : "FAIL",
                    num, name, secs, budget_s, why.empty() ? "" : " -- ", why.c_str());
        std::fflush(stdout);
        all_pass = all_pass && ok;
    }
};

std::string
check(bool cond, const std::string& what)
{
    return cond ? "" : what;
}

ExecSpec
om(const LassoPattern& p)
{
    return ExecSpec::sync(p, InputAssignment({0, 1}));
}

// --- criterion 1: one-message exact distances ------------------------------

std::string
c1_one_message_distances()
{
    ViewArena a;
    ExecSpec eta = om(patterns::eta(2));
    for (int i = 1; i <= 8; ++i)
    {
        DistanceValue dr = view_distance(a, om(patterns::alpha(i)), eta, 1);
        if (!(dr.kind == DistanceValue::Dyadic && dr.exponent == i + 1))
            return "alpha right-distance wrong at i=" + std::to_string(i);
        DistanceValue dl = view_distance(a, om(patterns::alpha(i)), eta, 0);
        if (!(dl.kind == DistanceValue::Zero && dl.certified))
            return "alpha left-distance not certified zero at i=" + std::to_string(i);
        DistanceValue bl = view_distance(a, om(patterns::beta(i)), eta, 0);
        if (!(bl.kind == DistanceValue::Dyadic && bl.exponent == i + 1))
            return "beta left-distance wrong at k=" + std::to_string(i);
        DistanceValue br = view_distance(a, om(patterns::beta(i)), eta, 1);
        if (!(br.kind == DistanceValue::Zero && br.certified))
            return "beta right-distance not certified zero at k=" + std::to_string(i);
    }
    for (int i = 1; i <= 8; ++i)
        for (int k = 1; k <= 8; ++k)
        {
            DistanceValue d = d_nonuniform(a, om(patterns::alpha(i)), om(patterns::beta(k)));
            if (!(d.kind == DistanceValue::Dyadic && d.exponent == std::max(i, k) + 1))
                return "cross distance wrong at i=" + std::to_string(i) +
                       " k=" + std::to_string(k);
        }
    return "";
}

// --- criterion 2: pseudometric laws -----------------------------------------

std::string
c2_pseudometric()
{
    ViewArena a;
    std::mt19937_64 rng(20260810);
    const char syms[4] = {'>', '<', '=', '-'};
    std::vector<ExecSpec> pool;
    while (pool.size() < 50)
    {
        std::string pre, loop;
        for (size_t j = rng() % 5; j-- > 0;)
            pre += syms[rng() % 4];
        for (size_t j = 1 + rng() % 2; j-- > 0;)
            loop += syms[rng() % 4];
        pool.push_back(ExecSpec::sync(parse_pattern(pre + ":" + loop),
                                      InputAssignment({Value(rng() % 2), Value(rng() % 2)})));
    }
    constexpr int H = 64;
    for (int p = 0; p < 2; ++p)
    {
        std::vector<std::vector<int>> e(pool.size(), std::vector<int>(pool.size()));
        for (size_t x = 0; x < pool.size(); ++x)
            for (size_t y = 0; y < pool.size(); ++y)
            {
                DistanceValue d = view_distance(a, pool[x], pool[y], p, H);
                if (!d.is_exact())
                    return "pool pair did not resolve exactly";
                e[x][y] = d.exponent_or_inf();
            }
        for (size_t x = 0; x < pool.size(); ++x)
        {
            if (e[x][x] != std::numeric_limits<int>::max())
                return "self distance not zero";
            for (size_t y = 0; y < pool.size(); ++y)
            {
                if (e[x][y] != e[y][x])
                    return "symmetry violated";
                for (size_t z = 0; z < pool.size(); ++z)
                    if (!dyadic_le_sum(e[x][z], e[x][y], e[y][z]))
                        return "triangle inequality violated";
            }
        }
    }
    for (size_t x = 0; x < pool.size(); ++x)
        for (size_t y = x + 1; y < pool.size(); ++y)
        {
            DistanceValue du = d_uniform(a, pool[x], pool[y], H);
            DistanceValue dn = d_nonuniform(a, pool[x], pool[y], H);
            if (du.is_exact() && dn.is_exact() &&
                du.exponent_or_inf() < dn.exponent_or_inf())
                return "uniform distance exceeds non-uniform distance";
        }
    return "";
}

// --- criterion 3: min-max solvability on the lossy-link model -----------------

std::string
c3_minmax_lossy_link()
{
    ViewArena a;
    Algorithm mm = make_minmax();
    const char syms[3] = {'>', '<', '='};
    std::vector<std::string> prefixes{""};
    for (size_t i = 0; i < prefixes.size(); ++i)
        if (prefixes[i].size() < 5)
            for (char c : syms)
                prefixes.push_back(prefixes[i] + c);
    std::vector<std::string> loops;
    for (char c : syms)
        loops.push_back(std::string(1, c));
    for (char c : syms)
        for (char d : syms)
            loops.push_back(std::string{c, d});
    const std::vector<InputAssignment> assigns = {
        InputAssignment({0, 0}), InputAssignment({0, 1}), InputAssignment({1, 0}),
        InputAssignment({1, 1})};
    long runs = 0;
    for (const auto& pre : prefixes)
        for (const auto& loop : loops)
        {
            LassoPattern pat = parse_pattern(pre + ":" + loop);
            for (const auto& in : assigns)
            {
                Trace tr = run_sync(a, pat, in, mm, certification_horizon(pat));
                Verdict v = stabilization_verdict(tr);
                if (!(v.stabilized && v.certified))
                    return "not certified-stabilized on " + pre + ":" + loop;
                if (v.value != in[0] && v.value != in[1])
                    return "validity violated on " + pre + ":" + loop;
                BroadcasterSet bc = broadcasters(tr, tr.horizon);
                if (!bc.certified || bc.set == 0)
                    return "broadcasters not certified on " + pre + ":" + loop;
                if (v.value != in.min_over(bc.set))
                    return "value is not the broadcaster minimum on " + pre + ":" + loop;
                ++runs;
            }
        }
    return check(runs == 364L * 12 * 4, "unexpected run count");
}

// --- criterion 4: safe min-max under bounded silence ---------------------------

std::string
c4_safe_minmax_bounded_silence()
{
    ViewArena a;
    Algorithm sm = make_safe_minmax();
    const char syms[4] = {'>', '<', '=', '-'};
    std::vector<std::string> loops{""};
    for (size_t i = 0; i < loops.size(); ++i)
        if (loops[i].size() < 6)
            for (char c : syms)
                loops.push_back(loops[i] + c);
    const std::vector<InputAssignment> assigns = {
        InputAssignment({0, 0}), InputAssignment({0, 1}), InputAssignment({1, 0}),
        InputAssignment({1, 1})};
    long runs = 0;
    for (const auto& loop : loops)
    {
        if (loop.empty())
            continue;
        LassoPattern pat = parse_pattern(":" + loop);
        if (!patterns::is_bdll_loop(pat, 3))
            continue;
        for (const auto& in : assigns)
        {
            Trace tr = run_sync(a, pat, in, sm, certification_horizon(pat));
            Verdict v = stabilization_verdict(tr);
            if (!(v.stabilized && v.certified))
                return "not certified-stabilized on :" + loop;
            BroadcasterSet bc = broadcasters(tr, tr.horizon);
            if (!bc.certified || bc.set == 0)
                return "broadcasters not certified on :" + loop;
            if (v.value != in.min_over(bc.set))
                return "value is not the broadcaster minimum on :" + loop;
            ++runs;
        }
    }
    return check(runs > 3000, "suspiciously few bounded-silence loops");
}

// --- criterion 5: min flooding over fair-lossy schedules ------------------------

std::string
c5_min_flooding()
{
    ViewArena a;
    Algorithm flood = make_min_flood();
    for (std::uint64_t seed = 0; seed < 1000; ++seed)
    {
        std::mt19937_64 rng(seed * 7919 + 1);
        int n = 2 + int(seed % 4);
        int f = int(seed % std::uint64_t(n));
        int blocks = 6 + int(seed % 4);
        std::vector<std::pair<int, int>> crash_plan;
        std::vector<int> procs(static_cast<size_t>(n));
        std::iota(procs.begin(), procs.end(), 0);
        std::shuffle(procs.begin(), procs.end(), rng);
        for (int c = 0; c < f; ++c)
            crash_plan.emplace_back(procs[size_t(c)], 1 + int(rng() % 2));
        std::vector<Value> vals(static_cast<size_t>(n));
        for (auto& v : vals)
            v = Value(rng() % 6);
        InputAssignment in(vals);
        AsyncSchedule sched = generate_fair_schedule(seed, n, blocks, 4, crash_plan);
        Trace tr = run_async(a, sched, in, flood);
        BroadcasterSet bc = broadcasters(tr, tr.horizon);
        if (bc.set == 0)
            return "empty broadcaster set at seed " + std::to_string(seed);
        Value expected = in.min_over(bc.set);
        Verdict v = stabilization_verdict(tr);
        if (!v.stabilized || v.value != expected)
            return "flooding missed the broadcaster minimum at seed " + std::to_string(seed);
        for (int p = 0; p < n; ++p)
            if (in_set(tr.obedient_throughout(), p) &&
                tr.at(tr.horizon).outputs[size_t(p)] != expected)
                return "an obedient process holds the wrong value at seed " +
                       std::to_string(seed);
        if (seed % 97 == 0)
            a.clear();
    }
    return "";
}

// --- criterion 6: the lossy-link prefix order -----------------------------------

std::string
c6_prefix_order()
{
    ViewArena a;
    InputAssignment in({0, 1});
    long pow3 = 1;
    for (int k = 1; k <= 6; ++k)
    {
        pow3 *= 3;
        auto ord = prefix_order_ll(k);
        if (long(ord.size()) != pow3)
            return "wrong order size at k=" + std::to_string(k);
        if (ord.front() != LLPrefix(size_t(k), LL::Right) ||
            ord.back() != LLPrefix(size_t(k), LL::Left))
            return "wrong endpoints at k=" + std::to_string(k);
        for (size_t i = 0; i + 1 < ord.size(); ++i)
            if (indistinguishable_at(a, ord[i], ord[i + 1], in) < 0)
                return "consecutive prefixes distinguishable at k=" + std::to_string(k);
    }
    return "";
}

// --- criterion 7: the conflicting-prefix attack ----------------------------------

std::string
c7_attack()
{
    ViewArena a;
    Algorithm mm = make_minmax();
    for (int k = 1; k <= 6; ++k)
    {
        AttackResult att = dll_attack(a, mm, k, 32);
        if (!att.found)
            return "no witness at k=" + std::to_string(k);
        if (auto err = verify_witness(a, att.witness, mm))
            return "witness replay failed at k=" + std::to_string(k) + ": " + *err;
    }
    NonStabilizationRun run = nonstabilization_run(a, mm, {1, 2, 3}, 32, 3);
    if (!run.meets_target || run.max_flips < 3)
        return "chained run produced fewer than 3 output flips";
    return "";
}

// --- criterion 8: empty-kernel disagreement ---------------------------------------

std::string
c8_empty_kernel()
{
    ViewArena a;
    Algorithm mm = make_minmax();

    EmptyKernelReport two = empty_kernel_demo(a, mm, patterns::two_cliques(),
                                              InputAssignment({0, 0, 1, 1}), 64);
    if (!(two.kernel_empty && two.broadcasters_at_horizon == 0 && two.broadcasters_certified))
        return "two-clique broadcasters not certified empty";
    if (!two.persistent_disagreement)
        return "two-clique disagreement is not persistent";

    EmptyKernelReport silent =
        empty_kernel_demo(a, mm, patterns::eta(2), InputAssignment({0, 1}), 64);
    if (!(silent.persistent_disagreement && silent.broadcasters_at_horizon == 0 &&
          silent.broadcasters_certified))
        return "silent-pattern disagreement is not persistent";

    EmptyKernelReport valent = empty_kernel_demo(a, mm, patterns::two_cliques(),
                                                 InputAssignment({1, 1, 1, 1}), 64);
    if (valent.persistent_disagreement || !valent.valent)
        return "valent inputs produced a witness";
    return "";
}

// --- criterion 9: the universal decider --------------------------------------------

std::string
c9_universal()
{
    ViewArena a;
    {
        DecisionLabeling L = families::one_message(8);
        FamilyContext ctx(L, a);
        if (!validate_labeling(ctx).empty())
            return "one-message labeling failed validation";
        StabilizationReport rep = check_stabilizing(ctx);
        if (!rep.all_pass)
            return "one-message family member failed to stabilize to its label";
        if (rep.case_uses[DecisionCase::C] != 0)
            return "the third decision case fired on the one-message family";
    }
    {
        DecisionLabeling L = families::braid();
        FamilyContext ctx(L, a);
        if (!validate_labeling(ctx).empty())
            return "three-label labeling failed validation";
        StabilizationReport rep = check_stabilizing(ctx);
        if (!rep.all_pass)
            return "three-label family member failed to stabilize to its label";
        for (DecisionCase c :
             {DecisionCase::A, DecisionCase::B, DecisionCase::C, DecisionCase::D})
            if (rep.case_uses[c] == 0)
                return "a decision case was never exercised on the three-label family";
    }
    {
        DecisionLabeling L = families::one_message(6);
        FamilyContext ctx(L, a);
        DecisionLabeling once = properify(ctx);
        if (labeling_to_json(once) != labeling_to_json(L))
            return "a proper labeling moved under the reduction";
        DecisionLabeling nonproper = families::ll_nonproper();
        FamilyContext nctx(nonproper, a);
        DecisionLabeling fixed = properify(nctx);
        if (fixed.members[size_t(fixed.index_of("border"))].label != 1)
            return "the non-proper border was not relabeled";
        FamilyContext fctx(fixed, a);
        if (labeling_to_json(properify(fctx)) != labeling_to_json(fixed))
            return "the reduction is not idempotent";
    }
    {
        DecisionLabeling L = families::one_message(6);
        for (auto& m : L.members)
            if (m.component == 1)
                m.label = 0; // deliberately wrong
        FamilyContext ctx(L, a);
        DecisionLabeling strong = strong_reshuffle(ctx);
        for (const auto& m : strong.members)
        {
            int b = m.component == 0 ? 0 : 1;
            if (m.label != m.spec.inputs[b])
                return "reshuffled label differs from the broadcaster input";
        }
    }
    return "";
}

// --- criterion 10: oracle equivalence ------------------------------------------------

std::string
c10_oracles()
{
    // distances: every pair of two-process lassos with prefixes up to 4,
    // loops up to 2 and binary inputs, against the independent comparator
    std::vector<std::pair<LassoPattern, InputAssignment>> execs;
    {
        const char syms[4] = {'>', '<', '=', '-'};
        std::vector<std::string> prefixes{""};
        for (size_t i = 0; i < prefixes.size(); ++i)
            if (prefixes[i].size() < 4)
                for (char c : syms)
                    prefixes.push_back(prefixes[i] + c);
        std::vector<std::string> loops;
        for (char c : syms)
            loops.push_back(std::string(1, c));
        for (char c : syms)
            for (char d : syms)
                loops.push_back(std::string{c, d});
        for (const auto& pre : prefixes)
            for (const auto& loop : loops)
                for (Value vl = 0; vl < 2; ++vl)
                    for (Value vr = 0; vr < 2; ++vr)
                        execs.emplace_back(parse_pattern(pre + ":" + loop),
                                           InputAssignment({vl, vr}));
    }
    constexpr int H = 64;
    size_t m = execs.size();
    if (m != 341u * 20 * 4)
        return "unexpected execution count";

    std::vector<std::uint32_t> digests(m * 2 * (H + 1));
    {
        ViewArena arena;
        Algorithm probe = make_minmax();
        for (size_t e = 0; e < m; ++e)
        {
            Trace tr = run_sync(arena, execs[e].first, execs[e].second, probe, H);
            for (int p = 0; p < 2; ++p)
                for (int t = 0; t <= H; ++t)
                    digests[(e * 2 + size_t(p)) * (H + 1) + size_t(t)] =
                        tr.at(t).digests[size_t(p)];
        }
    }
    naive::Classes classes = naive::view_classes_n2(execs, H);
    std::vector<std::array<int, 2>> flat(m * (H + 1));
    for (size_t e = 0; e < m; ++e)
        for (int t = 0; t <= H; ++t)
            flat[e * (H + 1) + size_t(t)] = classes.color[e][size_t(t)];

    // all pairs through the distance kernel's digest comparison
    for (size_t x = 0; x < m; ++x)
        for (size_t y = x + 1; y < m; ++y)
            for (int p = 0; p < 2; ++p)
            {
                const std::uint32_t* da = &digests[(x * 2 + size_t(p)) * (H + 1)];
                const std::uint32_t* db = &digests[(y * 2 + size_t(p)) * (H + 1)];
                int subject = -1;
                for (int t = 0; t <= H; ++t)
                    if (da[t] != db[t])
                    {
                        subject = t;
                        break;
                    }
                const std::array<int, 2>* ca = &flat[x * (H + 1)];
                const std::array<int, 2>* cb = &flat[y * (H + 1)];
                int oracle = -1;
                for (int t = 0; t <= H; ++t)
                    if (ca[t][size_t(p)] != cb[t][size_t(p)])
                    {
                        oracle = t;
                        break;
                    }
                if (subject != oracle)
                    return "divergence mismatch between the distance kernel and the comparator";
            }

    // the full operation on a deterministic sample, including no-divergence
    // pairs, to pin the public surface to the same answers
    {
        ViewArena arena;
        size_t checked = 0, zeros = 0;
        for (size_t x = 0; x < m; x += 131)
            for (size_t y = x + 1; y < m; y += 977)
            {
                for (int p = 0; p < 2; ++p)
                {
                    ExecSpec ex = ExecSpec::sync(execs[x].first, execs[x].second);
                    ExecSpec ey = ExecSpec::sync(execs[y].first, execs[y].second);
                    DistanceValue d = view_distance(arena, ex, ey, p, H);
                    int oracle = naive::first_divergence(classes, x, y, p, H);
                    if (oracle < 0 && d.kind == DistanceValue::Dyadic)
                        return "operation claims a divergence the comparator rejects";
                    if (oracle >= 0 &&
                        !(d.kind == DistanceValue::Dyadic && d.exponent == oracle))
                        return "operation disagrees with the comparator";
                    if (d.kind == DistanceValue::Zero)
                        ++zeros;
                }
                ++checked;
            }
        if (checked < 1000 || zeros == 0)
            return "sample of full-operation checks too small";
    }

    // kernels: exhaustive for two processes, randomized for three and four
    {
        const char syms[4] = {'>', '<', '=', '-'};
        std::vector<std::string> prefixes{""};
        for (size_t i = 0; i < prefixes.size(); ++i)
            if (prefixes[i].size() < 4)
                for (char c : syms)
                    prefixes.push_back(prefixes[i] + c);
        std::vector<std::string> loops;
        for (char c : syms)
            loops.push_back(std::string(1, c));
        for (char c : syms)
            for (char d : syms)
                loops.push_back(std::string{c, d});
        for (char c : syms)
            for (char d : syms)
                for (char e2 : syms)
                    loops.push_back(std::string{c, d, e2});
        for (const auto& pre : prefixes)
            for (const auto& loop : loops)
            {
                LassoPattern pat = parse_pattern(pre + ":" + loop);
                if (kernel(pat) != brute::kernel_oracle(pat))
                    return "kernel mismatch on " + pre + ":" + loop;
            }
        std::mt19937_64 rng(424242);
        for (int n : {3, 4})
            for (int i = 0; i < 3000; ++i)
            {
                LassoPattern pat = brute::random_pattern(rng, n, 4, 3);
                if (kernel(pat) != brute::kernel_oracle(pat))
                    return "kernel mismatch on a random pattern";
            }
    }
    return "";
}

} // namespace

int
main()
{
    Harness h;
    h.criterion(1, "one-message exact distances", 1, c1_one_message_distances);
    h.criterion(2, "p-view pseudometric laws", 10, c2_pseudometric);
    h.criterion(3, "min-max solvability on lossy links", 60, c3_minmax_lossy_link);
    h.criterion(4, "safe min-max under bounded silence", 120, c4_safe_minmax_bounded_silence);
    h.criterion(5, "min flooding over fair-lossy schedules", 60, c5_min_flooding);
    h.criterion(6, "lossy-link prefix order", 10, c6_prefix_order);
    h.criterion(7, "conflicting-prefix attack", 120, c7_attack);
    h.criterion(8, "empty-kernel disagreement", 5, c8_empty_kernel);
    h.criterion(9, "universal decider on labeled families", 30, c9_universal);
    h.criterion(10, "distance and kernel oracle equivalence", 120, c10_oracles);
    return h.all_pass ? 0 : 1;
}

// Copyright 2026 the stabcon developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
//
// stabcon: simulate stabilizing-consensus algorithms under lasso-shaped
// communication patterns, compute execution distances, validate labeled
// families, run the universal decider, and drive impossibility witnesses.
//
// Exit codes: 0 success, 1 a property-violation report was produced,
// 2 usage or parse error. STABCON_HORIZON_CAP bounds default distance
// horizons (default 512).

#include <iostream>

#include <CLI11.hpp>

#include <stabcon/stabcon.hpp>

namespace
{

using namespace stabcon;

InputAssignment
parse_inputs(const std::string& csv)
{
    std::vector<Value> vals;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        vals.push_back(std::stoi(item));
    if (vals.empty())
        throw std::invalid_argument("inputs: expected a comma-separated list");
    return InputAssignment(std::move(vals));
}

std::vector<int>
parse_int_list(const std::string& csv)
{
    std::vector<int> vals;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ','))
        vals.push_back(std::stoi(item));
    return vals;
}

LassoPattern
named_pattern(const std::string& name)
{
    if (name == "two-cliques-4")
        return patterns::two_cliques();
    if (name.rfind("eta-", 0) == 0)
        return patterns::eta(std::stoi(name.substr(4)));
    if (name.rfind("alpha-", 0) == 0)
        return patterns::alpha(std::stoi(name.substr(6)));
    if (name.rfind("beta-", 0) == 0)
        return patterns::beta(std::stoi(name.substr(5)));
    throw std::invalid_argument("unknown pattern name: " + name);
}

void
emit(const std::string& text, const std::string& out_path)
{
    if (out_path.empty())
        std::cout << text;
    else
        write_atomic(out_path, text);
}

struct report_produced
{
    int code;
};

int
cmd_run(const std::string& alg, const std::string& pattern_lit, const std::string& inputs_csv,
        int rounds, bool async_mode, int n, std::uint64_t seed, int blocks, int window,
        int crashes, const std::string& out)
{
    Algorithm algo = algorithm_by_id(alg);
    InputAssignment inputs = parse_inputs(inputs_csv);
    ViewArena arena;
    Doc d;
    Trace tr;
    if (async_mode)
    {
        if (inputs.n() != n)
            throw std::invalid_argument("inputs length must match --n");
        std::vector<std::pair<int, int>> crash_plan;
        std::mt19937_64 crng(seed ^ 0x5eedULL);
        for (int c = 0; c < crashes; ++c)
            crash_plan.emplace_back(int(crng() % std::uint64_t(n)), 1 + int(crng() % 3));
        AsyncSchedule sched = generate_fair_schedule(seed, n, blocks, window, crash_plan);
        tr = run_async(arena, sched, inputs, algo);
        d["seed"] = seed;
    }
    else
    {
        LassoPattern pat = parse_pattern(pattern_lit);
        if (!algo.admits_pattern(pat))
            throw std::invalid_argument("algorithm " + alg + " does not admit this pattern");
        int horizon = rounds > 0 ? rounds : certification_horizon(pat);
        tr = run_sync(arena, pat, inputs, algo, horizon);
    }
    Doc td = trace_to_json(tr);
    for (auto& [k, v] : td.items())
        d[k] = v;
    d["verdict"] = verdict_to_json(stabilization_verdict(tr));
    BroadcasterSet bc = broadcasters(tr, tr.horizon);
    d["broadcasters"] = set_to_list(bc.set, tr.n);
    d["broadcasters_certified"] = bc.certified;
    emit(doc_text(d), out);
    return 0;
}

int
cmd_distances(const std::vector<std::string>& exec_args, const std::string& metric_str,
              int horizon, const std::string& out)
{
    if (exec_args.size() < 2)
        throw std::invalid_argument("distances: need at least two --exec entries");
    Metric metric = parse_metric(metric_str);
    std::vector<std::pair<std::string, ExecSpec>> execs;
    int idx = 0;
    for (const auto& arg : exec_args)
    {
        auto bar = arg.find('|');
        if (bar == std::string::npos)
            throw std::invalid_argument("exec literal: expected <pattern>|<inputs>");
        LassoPattern pat = parse_pattern(arg.substr(0, bar));
        InputAssignment in = parse_inputs(arg.substr(bar + 1));
        execs.emplace_back("e" + std::to_string(++idx), ExecSpec::sync(pat, in));
    }
    ViewArena arena;
    std::optional<int> h;
    if (horizon > 0)
        h = horizon;
    emit(distance_matrix_csv(arena, execs, metric, h), out);
    return 0;
}

int
cmd_prefix_order(int k, bool complete, const std::string& out)
{
    ViewArena arena;
    Doc d = complete ? complete_cycle_doc(arena) : prefix_order_doc(arena, k);
    emit(doc_text(d), out);
    return 0;
}

int
cmd_label_check(const std::string& family_path)
{
    DecisionLabeling L = labeling_from_json(load_doc(family_path));
    ViewArena arena;
    FamilyContext ctx(L, arena);
    auto violations = validate_labeling(ctx);
    Doc d;
    d["format"] = "stabcon-label-check-v1";
    d["valid"] = violations.empty();
    Doc vs = Doc::array();
    for (const auto& v : violations)
    {
        Doc e;
        e["member"] = v.member_id;
        e["what"] = v.what;
        vs.push_back(std::move(e));
    }
    d["violations"] = vs;
    std::cout << doc_text(d);
    return violations.empty() ? 0 : 1;
}

int
cmd_universal(const std::string& family_path, const std::string& out)
{
    DecisionLabeling L = labeling_from_json(load_doc(family_path));
    ViewArena arena;
    FamilyContext ctx(L, arena);
    auto violations = validate_labeling(ctx);
    if (!violations.empty())
    {
        std::cerr << "labeling invalid: " << violations.front().member_id << ": "
                  << violations.front().what << "\n";
        return 2;
    }
    StabilizationReport rep = check_stabilizing(ctx);
    emit(doc_text(stabilization_report_to_json(rep)), out);
    return rep.all_pass ? 0 : 1;
}

int
cmd_attack(const std::string& alg, int k, int m_max, const std::string& chain_csv, int flips,
           const std::string& out)
{
    Algorithm algo = algorithm_by_id(alg);
    ViewArena arena;
    if (!algo.admits_pattern(delayed_border({}, {LL::Left}, 0, LL::Right)))
        throw std::invalid_argument("algorithm " + alg +
                                    " does not admit lossy-link suffix patterns");
    if (!chain_csv.empty())
    {
        std::vector<int> schedule = parse_int_list(chain_csv);
        NonStabilizationRun run = nonstabilization_run(arena, algo, schedule, m_max, flips);
        Doc d;
        d["format"] = "stabcon-chain-v1";
        d["algorithm"] = alg;
        d["k_schedule"] = schedule;
        d["flips_required"] = flips;
        d["max_flips"] = run.max_flips;
        d["flip_process"] = run.flip_proc == 0 ? "l" : "r";
        d["meets_target"] = run.meets_target;
        d["composite_pattern"] = pattern_to_json(run.composite);
        Doc stages = Doc::array();
        for (const auto& w : run.stages)
            stages.push_back(witness_to_json(w));
        d["stages"] = stages;
        emit(doc_text(d), out);
        return run.meets_target ? 0 : 1;
    }
    AttackResult att = dll_attack(arena, algo, k, m_max);
    if (!att.found)
    {
        Doc d;
        d["format"] = "stabcon-attack-failure-v1";
        d["algorithm"] = alg;
        d["k"] = k;
        d["m_max"] = m_max;
        d["failure"] = att.failure;
        if (att.observed_left_round >= 0)
        {
            d["observed_left_round"] = att.observed_left_round;
            d["observed_right_round"] = att.observed_right_round;
        }
        emit(doc_text(d), out);
        return 1;
    }
    emit(doc_text(witness_to_json(att.witness)), out);
    return 0;
}

int
cmd_kernel(const std::string& pattern_lit, const std::string& pattern_name,
           const std::string& out)
{
    LassoPattern pat =
        pattern_name.empty() ? parse_pattern(pattern_lit) : named_pattern(pattern_name);
    ProcSet k = kernel(pat);
    Doc d;
    d["format"] = "stabcon-kernel-v1";
    d["pattern"] = pattern_to_json(pat);
    d["kernel"] = set_to_list(k, pat.n);
    d["empty"] = k == 0;
    emit(doc_text(d), out);
    return 0;
}

int
cmd_verify_witness(const std::string& file)
{
    Doc d = load_doc(file);
    ConflictWitness w = witness_from_json(d);
    Algorithm algo = algorithm_by_id(w.algorithm);
    ViewArena arena;
    auto err = verify_witness(arena, w, algo);
    Doc rep;
    rep["format"] = "stabcon-witness-check-v1";
    rep["pass"] = !err.has_value();
    if (err)
        rep["violated"] = *err;
    std::cout << doc_text(rep);
    return err ? 1 : 0;
}

} // namespace

int
main(int argc, char** argv)
{
    CLI::App app{"stabilizing-consensus simulator and analysis toolkit"};
    app.require_subcommand(1);

    std::string alg = "minmax", pattern_lit, inputs_csv, out, metric_str = "nonuniform";
    std::string family_path, witness_file, chain_csv, pattern_name;
    std::vector<std::string> exec_args;
    int rounds = 0, n = 2, k = 1, m_max = 8, horizon = 0, blocks = 8, window = 4, flips = 0;
    int crashes = 0;
    bool async_mode = false, complete = false;
    std::uint64_t seed = 0;

    auto* run = app.add_subcommand("run", "simulate one execution");
    run->add_option("--alg", alg, "algorithm id");
    run->add_option("--pattern", pattern_lit, "n=2 pattern literal, prefix:loop");
    run->add_option("--inputs", inputs_csv, "comma-separated input values")->required();
    run->add_option("--rounds", rounds, "horizon (default: certification horizon)");
    run->add_flag("--async", async_mode, "asynchronous fair-lossy run");
    run->add_option("--n", n, "process count (async)");
    run->add_option("--seed", seed, "schedule seed (async)");
    run->add_option("--blocks", blocks, "schedule blocks (async)");
    run->add_option("--window", window, "fairness window (async)");
    run->add_option("--crashes", crashes, "crash count (async)");
    run->add_option("--out", out, "output file");

    auto* dist = app.add_subcommand("distances", "pairwise distance matrix as CSV");
    dist->add_option("--exec", exec_args, "execution literal <pattern>|<inputs>")->required();
    dist->add_option("--metric", metric_str, "p:<id>|uniform|nonuniform");
    dist->add_option("--horizon", horizon, "distance horizon");
    dist->add_option("--out", out, "output file");

    auto* pord = app.add_subcommand("prefix-order", "lossy-link prefix order listing");
    pord->add_option("--k", k, "prefix length")->required();
    pord->add_flag("--complete", complete, "1-prefix cycle across all input assignments");
    pord->add_option("--out", out, "output file");

    auto* lcheck = app.add_subcommand("label-check", "validate a labeling document");
    lcheck->add_option("--family", family_path, "labeling json")->required();

    auto* uni = app.add_subcommand("universal", "run the universal decider on a family");
    uni->add_option("--family", family_path, "labeling json")->required();
    uni->add_option("--out", out, "output file");

    auto* att = app.add_subcommand("attack", "conflicting-prefix attack");
    att->add_option("--alg", alg, "algorithm id");
    att->add_option("--k", k, "prefix length");
    att->add_option("--m-max", m_max, "largest silence length to try");
    att->add_option("--chain", chain_csv, "chained k schedule, e.g. 1,2,3");
    att->add_option("--flips", flips, "required output flips for --chain");
    att->add_option("--out", out, "output file");

    auto* ker = app.add_subcommand("kernel", "kernel of a communication pattern");
    ker->add_option("--pattern", pattern_lit, "n=2 pattern literal");
    ker->add_option("--pattern-name", pattern_name, "two-cliques-4 | eta-<n> | alpha-<i> | beta-<i>");
    ker->add_option("--out", out, "output file");

    auto* vw = app.add_subcommand("verify-witness", "replay and re-check a witness document");
    vw->add_option("--file", witness_file, "witness json")->required();

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (run->parsed())
            return cmd_run(alg, pattern_lit, inputs_csv, rounds, async_mode, n, seed, blocks,
                           window, crashes, out);
        if (dist->parsed())
            return cmd_distances(exec_args, metric_str, horizon, out);
        if (pord->parsed())
            return cmd_prefix_order(k, complete, out);
        if (lcheck->parsed())
            return cmd_label_check(family_path);
        if (uni->parsed())
            return cmd_universal(family_path, out);
        if (att->parsed())
            return cmd_attack(alg, k, m_max, chain_csv, flips, out);
        if (ker->parsed())
            return cmd_kernel(pattern_lit, pattern_name, out);
        if (vw->parsed())
            return cmd_verify_witness(witness_file);
    }
    catch (const std::invalid_argument& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    catch (const schedule_error& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    catch (const nlohmann::json::exception& e)
    {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

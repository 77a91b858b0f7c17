// Copyright 2026 the stabcon developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "impossibility.hpp"
#include "universal.hpp"

namespace stabcon
{

// All exported documents use one canonical structured text form: JSON with
// insertion-ordered keys, two-space indentation, and a trailing newline, so
// identical commands produce byte-identical files.
using Doc = nlohmann::ordered_json;

inline std::string
doc_text(const Doc& d)
{
    return d.dump(2) + "\n";
}

// Writes via a temporary file and renames, so readers never see partial docs.
inline void
write_atomic(const std::string& path, const std::string& text)
{
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write " + tmp);
        out << text;
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("cannot rename " + tmp + " to " + path);
}

inline Doc
load_doc(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot read " + path);
    return Doc::parse(in);
}

// --- model pieces -----------------------------------------------------------

inline Doc
graph_to_json(const CommGraph& g)
{
    Doc edges = Doc::array();
    for (int to = 0; to < g.n; ++to)
        for (int from = 0; from < g.n; ++from)
            if (from != to && g.has_edge(from, to))
                edges.push_back(Doc::array({from, to}));
    Doc d;
    d["n"] = g.n;
    d["edges"] = edges;
    return d;
}

inline CommGraph
graph_from_json(const Doc& d)
{
    std::vector<std::pair<int, int>> edges;
    for (const auto& e : d.at("edges"))
        edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    return CommGraph(d.at("n").get<int>(), edges);
}

inline Doc
pattern_to_json(const LassoPattern& p)
{
    Doc d;
    d["n"] = p.n;
    if (p.n == 2)
        d["literal"] = format_pattern(p);
    else
    {
        Doc pre = Doc::array(), loop = Doc::array();
        for (const auto& g : p.prefix)
            pre.push_back(graph_to_json(g));
        for (const auto& g : p.loop)
            loop.push_back(graph_to_json(g));
        d["prefix"] = pre;
        d["loop"] = loop;
    }
    return d;
}

inline LassoPattern
pattern_from_json(const Doc& d)
{
    if (d.contains("literal"))
        return parse_pattern(d.at("literal").get<std::string>());
    std::vector<CommGraph> pre, loop;
    for (const auto& g : d.at("prefix"))
        pre.push_back(graph_from_json(g));
    for (const auto& g : d.at("loop"))
        loop.push_back(graph_from_json(g));
    return LassoPattern(std::move(pre), std::move(loop));
}

inline Doc
schedule_to_json(const AsyncSchedule& s)
{
    Doc ev = Doc::array();
    for (const auto& e : s.events)
    {
        switch (e.kind)
        {
        case AsyncEvent::Step:
            ev.push_back(Doc::array({"step", e.proc}));
            break;
        case AsyncEvent::Deliver:
            ev.push_back(Doc::array({"deliver", e.proc, e.from, e.msg_index}));
            break;
        case AsyncEvent::Crash:
            ev.push_back(Doc::array({"crash", e.proc}));
            break;
        }
    }
    Doc d;
    d["n"] = s.n;
    d["window"] = s.window;
    d["events"] = ev;
    return d;
}

inline AsyncSchedule
schedule_from_json(const Doc& d)
{
    AsyncSchedule s;
    s.n = d.at("n").get<int>();
    s.window = d.at("window").get<int>();
    for (const auto& e : d.at("events"))
    {
        std::string kind = e.at(0).get<std::string>();
        if (kind == "step")
            s.events.push_back({AsyncEvent::Step, e.at(1).get<int>()});
        else if (kind == "deliver")
            s.events.push_back(
                {AsyncEvent::Deliver, e.at(1).get<int>(), e.at(2).get<int>(), e.at(3).get<int>()});
        else if (kind == "crash")
            s.events.push_back({AsyncEvent::Crash, e.at(1).get<int>()});
        else
            throw std::invalid_argument("schedule json: bad event kind " + kind);
    }
    return s;
}

inline Doc
spec_to_json(const ExecSpec& spec)
{
    Doc d;
    d["mode"] = spec.is_async ? "async" : "sync";
    if (spec.is_async)
        d["schedule"] = schedule_to_json(spec.schedule);
    else
        d["pattern"] = pattern_to_json(spec.pattern);
    d["inputs"] = spec.inputs.inputs;
    return d;
}

inline ExecSpec
spec_from_json(const Doc& d)
{
    InputAssignment inputs(d.at("inputs").get<std::vector<Value>>());
    if (d.at("mode").get<std::string>() == "async")
        return ExecSpec::async(schedule_from_json(d.at("schedule")), std::move(inputs));
    return ExecSpec::sync(pattern_from_json(d.at("pattern")), std::move(inputs));
}

// --- traces ---------------------------------------------------------------

inline Doc
trace_to_json(const Trace& tr)
{
    Doc d;
    d["spec"] = spec_to_json(tr.spec);
    d["algorithm"] = tr.algorithm;
    d["horizon"] = tr.horizon;
    Doc rounds = Doc::array();
    for (int t = 0; t <= tr.horizon; ++t)
    {
        const TraceRound& row = tr.at(t);
        Doc r;
        r["t"] = t;
        r["outputs"] = row.outputs;
        Doc ho = Doc::array();
        for (int p = 0; p < tr.n; ++p)
            ho.push_back(set_to_list(row.ho[size_t(p)], tr.n));
        r["ho"] = ho;
        r["digests"] = row.digests;
        r["obedient"] = set_to_list(row.obedient, tr.n);
        r["clock"] = row.clock;
        rounds.push_back(std::move(r));
    }
    d["rounds"] = rounds;
    return d;
}

inline Trace
trace_from_json(const Doc& d)
{
    Trace tr;
    tr.spec = spec_from_json(d.at("spec"));
    tr.algorithm = d.at("algorithm").get<std::string>();
    tr.n = tr.spec.n();
    tr.horizon = d.at("horizon").get<int>();
    for (const auto& r : d.at("rounds"))
    {
        TraceRound row;
        row.outputs = r.at("outputs").get<std::vector<Value>>();
        for (const auto& lst : r.at("ho"))
        {
            ProcSet s = 0;
            for (int p : lst.get<std::vector<int>>())
                s |= proc_bit(p);
            row.ho.push_back(s);
        }
        row.digests = r.at("digests").get<std::vector<ViewId>>();
        ProcSet ob = 0;
        for (int p : r.at("obedient").get<std::vector<int>>())
            ob |= proc_bit(p);
        row.obedient = ob;
        row.clock = r.at("clock").get<std::vector<int>>();
        tr.rounds.push_back(std::move(row));
    }
    if (int(tr.rounds.size()) != tr.horizon + 1)
        throw std::invalid_argument("trace json: round count does not match horizon");
    return tr;
}

inline Doc
verdict_to_json(const Verdict& v)
{
    Doc d;
    d["stabilized"] = v.stabilized;
    if (v.stabilized)
    {
        d["value"] = v.value;
        d["round"] = v.round;
    }
    d["certified"] = v.certified;
    return d;
}

// --- witnesses -----------------------------------------------------------------

inline Doc
witness_to_json(const ConflictWitness& w)
{
    Doc d;
    d["format"] = "stabcon-witness-v1";
    d["algorithm"] = w.algorithm;
    d["k"] = w.k;
    d["sigma"] = ll_prefix_str(w.sigma);
    d["m"] = w.m;
    std::string hist;
    for (const auto& g : w.history)
        hist += char_of_graph(g);
    d["history"] = hist;
    d["inputs"] = w.inputs.inputs;
    d["conflict_round"] = w.conflict_round;
    d["conflict_interval"] = Doc::array({w.conflict_interval.first, w.conflict_interval.second});
    d["lambda"] = trace_to_json(w.lambda_trace);
    d["rho"] = trace_to_json(w.rho_trace);
    return d;
}

inline ConflictWitness
witness_from_json(const Doc& d)
{
    if (d.at("format").get<std::string>() != "stabcon-witness-v1")
        throw std::invalid_argument("witness json: unknown format");
    ConflictWitness w;
    w.algorithm = d.at("algorithm").get<std::string>();
    w.k = d.at("k").get<int>();
    for (char c : d.at("sigma").get<std::string>())
        w.sigma.push_back(LL(c));
    w.m = d.at("m").get<int>();
    for (char c : d.at("history").get<std::string>())
        w.history.push_back(graph_of_char(c));
    w.inputs = InputAssignment(d.at("inputs").get<std::vector<Value>>());
    w.conflict_round = d.at("conflict_round").get<int>();
    w.conflict_interval = {d.at("conflict_interval").at(0).get<int>(),
                           d.at("conflict_interval").at(1).get<int>()};
    w.lambda_trace = trace_from_json(d.at("lambda"));
    w.rho_trace = trace_from_json(d.at("rho"));
    return w;
}

// --- labelings -------------------------------------------------------------------

inline Doc
labeling_to_json(const DecisionLabeling& L)
{
    Doc d;
    d["format"] = "stabcon-labeling-v1";
    d["values"] = L.values.values;
    d["n"] = L.n;
    d["metric"] = L.metric.str();
    d["horizon"] = L.horizon;
    Doc members = Doc::array();
    for (const auto& m : L.members)
    {
        Doc md;
        md["id"] = m.id;
        md["spec"] = spec_to_json(m.spec);
        md["label"] = m.label;
        md["structure"] = structure_str(m.structure);
        md["bd2_of"] = std::vector<Value>(m.bd2_of.begin(), m.bd2_of.end());
        md["component"] = m.component;
        Doc evs = Doc::array();
        for (const auto& ev : m.evidence)
        {
            Doc e;
            e["label"] = ev.label;
            e["members"] = ev.member_ids;
            evs.push_back(std::move(e));
        }
        md["evidence"] = evs;
        members.push_back(std::move(md));
    }
    d["members"] = members;
    Doc comps = Doc::array();
    for (const auto& [comp, bs] : L.component_broadcasters)
    {
        Doc c;
        c["id"] = comp;
        c["broadcasters"] = bs;
        comps.push_back(std::move(c));
    }
    d["components"] = comps;
    return d;
}

inline DecisionLabeling
labeling_from_json(const Doc& d)
{
    if (d.at("format").get<std::string>() != "stabcon-labeling-v1")
        throw std::invalid_argument("labeling json: unknown format");
    DecisionLabeling L;
    L.values = ValueSet(d.at("values").get<std::vector<Value>>());
    L.n = d.at("n").get<int>();
    L.metric = parse_metric(d.at("metric").get<std::string>());
    L.horizon = d.at("horizon").get<int>();
    for (const auto& md : d.at("members"))
    {
        LabelMember m;
        m.id = md.at("id").get<std::string>();
        m.spec = spec_from_json(md.at("spec"));
        m.label = md.at("label").get<Value>();
        std::string st = md.at("structure").get<std::string>();
        if (st == "interior")
            m.structure = StructureKind::Interior;
        else if (st == "included-boundary")
            m.structure = StructureKind::IncludedBoundary;
        else if (st == "isolated")
            m.structure = StructureKind::Isolated;
        else
            throw std::invalid_argument("labeling json: bad structure " + st);
        for (Value w : md.at("bd2_of").get<std::vector<Value>>())
            m.bd2_of.insert(w);
        m.component = md.at("component").get<int>();
        for (const auto& e : md.at("evidence"))
        {
            Evidence ev;
            ev.label = e.at("label").get<Value>();
            ev.member_ids = e.at("members").get<std::vector<std::string>>();
            m.evidence.push_back(std::move(ev));
        }
        L.members.push_back(std::move(m));
    }
    for (const auto& c : d.at("components"))
        L.component_broadcasters[c.at("id").get<int>()] =
            c.at("broadcasters").get<std::vector<int>>();
    return L;
}

// --- distance matrices -------------------------------------------------------------

inline std::string
distance_matrix_csv(ViewArena& arena, const std::vector<std::pair<std::string, ExecSpec>>& execs,
                    const Metric& metric, std::optional<int> horizon = std::nullopt)
{
    std::ostringstream out;
    out << "id";
    for (const auto& [id, _] : execs)
        out << ',' << id;
    out << '\n';
    for (const auto& [rid, rspec] : execs)
    {
        out << rid;
        for (const auto& [cid, cspec] : execs)
            out << ',' << distance(arena, rspec, cspec, metric, horizon).str();
        out << '\n';
    }
    return out.str();
}

// --- prefix order listings ------------------------------------------------------------

inline Doc
prefix_order_doc(ViewArena& arena, int k)
{
    auto order = prefix_order_ll(k);
    Doc d;
    d["format"] = "stabcon-prefix-order-v1";
    d["k"] = k;
    Doc lst = Doc::array();
    for (const auto& p : order)
        lst.push_back(ll_prefix_str(p));
    d["order"] = lst;
    Doc adj = Doc::array();
    InputAssignment inputs{{0, 1}};
    for (size_t i = 0; i + 1 < order.size(); ++i)
    {
        int p = indistinguishable_at(arena, order[i], order[i + 1], inputs);
        Doc a;
        a["pair"] = Doc::array({ll_prefix_str(order[i]), ll_prefix_str(order[i + 1])});
        a["process"] = p == 0 ? "l" : p == 1 ? "r" : "none";
        adj.push_back(std::move(a));
    }
    d["adjacent"] = adj;
    return d;
}

// The 1-prefix cycle across all four binary input assignments: within one
// assignment the path > < = < <, and corner links between assignments that
// differ only in the input invisible to the corner process.
inline Doc
complete_cycle_doc(ViewArena& arena)
{
    Doc d;
    d["format"] = "stabcon-complete-1prefix-v1";
    const std::vector<std::pair<std::string, InputAssignment>> assigns = {
        {"00", InputAssignment{{0, 0}}},
        {"01", InputAssignment{{0, 1}}},
        {"11", InputAssignment{{1, 1}}},
        {"10", InputAssignment{{1, 0}}},
    };
    Doc nodes = Doc::array();
    for (const auto& [name, _] : assigns)
        for (char c : {'>', '=', '<'})
            nodes.push_back(name + ":" + c);
    d["nodes"] = nodes;
    Doc edges = Doc::array();
    auto edge = [&](const std::string& a, const std::string& b, const std::string& p,
                    const DistanceValue& dist) {
        Doc e;
        e["pair"] = Doc::array({a, b});
        e["process"] = p;
        e["witness_distance"] = dist.str();
        edges.push_back(std::move(e));
    };
    // in-assignment path edges, witnessed by round-1 indistinguishability
    for (const auto& [name, in] : assigns)
    {
        ExecSpec right = ExecSpec::sync(parse_pattern(">:>"), in);
        ExecSpec both = ExecSpec::sync(parse_pattern("=:>"), in);
        ExecSpec left = ExecSpec::sync(parse_pattern("<:>"), in);
        edge(name + ":>", name + ":=", "r", view_distance(arena, right, both, 1, 8));
        edge(name + ":=", name + ":<", "l", view_distance(arena, both, left, 0, 8));
    }
    // corner edges: at the >-corner l never hears r, so r's input may flip;
    // at the <-corner the roles swap
    auto corner = [&](const std::string& na, const InputAssignment& ia, const std::string& nb,
                      const InputAssignment& ib, char g, int p) {
        std::string lit(1, g);
        ExecSpec a = ExecSpec::sync(parse_pattern(":" + lit), ia);
        ExecSpec b = ExecSpec::sync(parse_pattern(":" + lit), ib);
        edge(na + ":" + g, nb + ":" + g, p == 0 ? "l" : "r", view_distance(arena, a, b, p));
    };
    corner("00", assigns[0].second, "01", assigns[1].second, '>', 0);
    corner("01", assigns[1].second, "11", assigns[2].second, '<', 1);
    corner("11", assigns[2].second, "10", assigns[3].second, '>', 0);
    corner("10", assigns[3].second, "00", assigns[0].second, '<', 1);
    d["edges"] = edges;
    return d;
}

// --- reports ----------------------------------------------------------------------

inline Doc
stabilization_report_to_json(const StabilizationReport& rep)
{
    Doc d;
    d["format"] = "stabcon-universal-report-v1";
    d["all_pass"] = rep.all_pass;
    Doc members = Doc::array();
    for (const auto& m : rep.members)
    {
        Doc md;
        md["id"] = m.id;
        md["stabilized"] = m.stabilized;
        md["certified"] = m.certified;
        md["matches_label"] = m.matches_label;
        md["value"] = m.value;
        md["round"] = m.round;
        members.push_back(std::move(md));
    }
    d["members"] = members;
    Doc cases;
    auto count = [&](DecisionCase c) {
        auto it = rep.case_uses.find(c);
        return it == rep.case_uses.end() ? 0 : it->second;
    };
    cases["a"] = count(DecisionCase::A);
    cases["b"] = count(DecisionCase::B);
    cases["c"] = count(DecisionCase::C);
    cases["d"] = count(DecisionCase::D);
    d["case_uses"] = cases;
    return d;
}

inline Doc
empty_kernel_report_to_json(const EmptyKernelReport& rep)
{
    Doc d;
    d["format"] = "stabcon-empty-kernel-v1";
    d["kernel_empty"] = rep.kernel_empty;
    d["broadcasters"] = set_to_list(rep.broadcasters_at_horizon, rep.trace.n);
    d["broadcasters_certified"] = rep.broadcasters_certified;
    d["valent"] = rep.valent;
    if (rep.valent)
        d["note"] = "no witness for valent inputs";
    d["persistent_disagreement"] = rep.persistent_disagreement;
    d["trace"] = trace_to_json(rep.trace);
    return d;
}

} // namespace stabcon

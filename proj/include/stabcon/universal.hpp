// Copyright 2026 the stabcon developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <map>
#include <set>

#include "topology.hpp"

namespace stabcon
{

struct labeling_error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

struct unsolvability_witness : std::runtime_error
{
    int component;
    explicit unsolvability_witness(int comp)
        : std::runtime_error("component " + std::to_string(comp) +
                             " has no broadcaster; stabilizing consensus is unsolvable on it"),
          component(comp)
    {
    }
};

enum class StructureKind
{
    Interior,
    IncludedBoundary,
    Isolated,
};

inline std::string
structure_str(StructureKind k)
{
    switch (k)
    {
    case StructureKind::Interior:
        return "interior";
    case StructureKind::IncludedBoundary:
        return "included-boundary";
    default:
        return "isolated";
    }
}

// Convergence evidence attached to a member: a same-family sequence whose
// members carry `label` and verifiably converge onto this member.
struct Evidence
{
    Value label;
    std::vector<std::string> member_ids;
};

struct LabelMember
{
    std::string id;
    ExecSpec spec;
    Value label = 0;
    StructureKind structure = StructureKind::Interior;
    std::set<Value> bd2_of; // declared membership in bd2(bdin Sigma_w), per w
    int component = 0;
    std::vector<Evidence> evidence;
};

// Finite labeled execution family with declared topological structure.
struct DecisionLabeling
{
    ValueSet values;
    int n = 0;
    Metric metric = Metric::nonuniform();
    int horizon = 32;
    std::vector<LabelMember> members;
    std::map<int, std::vector<int>> component_broadcasters; // component -> declared procs

    int index_of(const std::string& id) const
    {
        for (size_t i = 0; i < members.size(); ++i)
            if (members[i].id == id)
                return int(i);
        throw labeling_error("unknown member id: " + id);
    }
};

// Simulated family context: one shared arena so view digests are comparable
// across members.
class FamilyContext
{
  public:
    FamilyContext(const DecisionLabeling& labeling, ViewArena& arena)
        : labeling_(labeling), arena_(arena)
    {
        Algorithm probe = make_minmax();
        for (const auto& m : labeling.members)
        {
            if (m.spec.is_async)
                throw labeling_error("labeling families must be synchronous");
            traces_.push_back(run_sync(arena_, m.spec.pattern, m.spec.inputs, probe,
                                       labeling.horizon));
        }
    }

    const DecisionLabeling& labeling() const { return labeling_; }
    ViewArena& arena() const { return arena_; }
    const Trace& trace(int member) const { return traces_.at(size_t(member)); }
    int size() const { return int(traces_.size()); }

    // [OP] candidate_set: members delta admitting some round s whose p-view
    // digest equals the queried member's p-view digest at round t.
    std::vector<int> candidate_set(int member, int p, int t) const
    {
        ViewId target = traces_.at(size_t(member)).at(t).digests.at(size_t(p));
        std::vector<int> out;
        for (int d = 0; d < size(); ++d)
        {
            const Trace& tr = traces_[size_t(d)];
            if (!in_set(tr.obedient_throughout(), p))
                continue;
            for (int s = 0; s <= tr.horizon; ++s)
                if (tr.at(s).digests[size_t(p)] == target)
                {
                    out.push_back(d);
                    break;
                }
        }
        return out;
    }

  private:
    const DecisionLabeling& labeling_;
    ViewArena& arena_;
    std::vector<Trace> traces_;
};

// --- validation -----------------------------------------------------------------

// Builds the convergence sequence for a piece of evidence and verifies it.
inline bool
evidence_passes(const FamilyContext& ctx, const LabelMember& target, const Evidence& ev)
{
    const DecisionLabeling& L = ctx.labeling();
    std::vector<ExecSpec> specs;
    for (const auto& id : ev.member_ids)
    {
        const LabelMember& m = L.members[size_t(L.index_of(id))];
        if (m.label != ev.label || m.id == target.id)
            return false;
        specs.push_back(m.spec);
    }
    if (specs.size() < 3)
        return false;
    SequenceFamily seq;
    seq.generator = [specs](int i) { return specs[size_t(i - 1)]; };
    seq.limit = target.spec;
    seq.i_max = int(specs.size());
    return verify_limit(ctx.arena(), seq, L.metric, L.horizon).passes;
}

inline bool
has_own_label_evidence(const FamilyContext& ctx, const LabelMember& m)
{
    for (const auto& ev : m.evidence)
        if (ev.label == m.label && evidence_passes(ctx, m, ev))
            return true;
    return false;
}

struct LabelingViolation
{
    std::string member_id;
    std::string what;
};

// Checks the declared invariants: labels within the alphabet, included
// boundary members carry passing own-label convergence evidence, declared
// broadcasters are broadcasters of every component member with one input,
// and intra-component certified distances stay below 1.
inline std::vector<LabelingViolation>
validate_labeling(const FamilyContext& ctx)
{
    const DecisionLabeling& L = ctx.labeling();
    std::vector<LabelingViolation> out;
    std::set<std::string> seen;
    for (const auto& m : L.members)
    {
        if (!seen.insert(m.id).second)
            out.push_back({m.id, "duplicate member id"});
        if (!L.values.contains(m.label))
            out.push_back({m.id, "label outside the value set"});
        for (Value w : m.bd2_of)
            if (!L.values.contains(w))
                out.push_back({m.id, "bd2 flag outside the value set"});
        if (m.spec.n() != L.n)
            out.push_back({m.id, "wrong process count"});
        check_inputs(m.spec.inputs, L.values, m.spec.n());
        if (m.structure == StructureKind::IncludedBoundary &&
            !has_own_label_evidence(ctx, m))
            out.push_back({m.id, "included-boundary member lacks passing own-label "
                                 "convergence evidence"});
    }

    std::map<int, std::vector<int>> comp_members;
    for (int i = 0; i < ctx.size(); ++i)
        comp_members[L.members[size_t(i)].component].push_back(i);

    for (const auto& [comp, idxs] : comp_members)
    {
        auto itb = L.component_broadcasters.find(comp);
        const std::vector<int> decl =
            itb == L.component_broadcasters.end() ? std::vector<int>{} : itb->second;
        for (int b : decl)
        {
            Value input = 0;
            bool first = true;
            for (int i : idxs)
            {
                const LabelMember& m = L.members[size_t(i)];
                BroadcasterSet bc = broadcasters(ctx.trace(i), ctx.trace(i).horizon);
                if (!in_set(bc.set, b))
                    out.push_back({m.id, "declared broadcaster is not a broadcaster here"});
                if (first)
                {
                    input = m.spec.inputs[b];
                    first = false;
                }
                else if (m.spec.inputs[b] != input)
                    out.push_back({m.id, "declared broadcaster input differs inside component"});
            }
        }
        for (size_t x = 0; x < idxs.size(); ++x)
            for (size_t y = x + 1; y < idxs.size(); ++y)
            {
                DistanceValue d =
                    distance(ctx.arena(), L.members[size_t(idxs[x])].spec,
                             L.members[size_t(idxs[y])].spec, L.metric, L.horizon);
                if (d.exponent_or_inf() < 1)
                    out.push_back({L.members[size_t(idxs[x])].id,
                                   "intra-component pair at distance 1"});
            }
    }
    return out;
}

// --- the universal decision function -----------------------------------------

enum class DecisionCase
{
    A,
    B,
    C,
    D,
};

struct Decision
{
    Value value;
    DecisionCase rule;
};

// [OP] universal_decide, the four-case rule over the candidate set:
//  (a) candidates inside one decision set decide it;
//  (b) candidates meeting exactly one included boundary decide its set;
//  (c) candidates cut down by every flagged second-order boundary land in one
//      included boundary and decide its set;
//  (d) otherwise the smallest value with a candidate decides.
inline Decision
universal_decide(const FamilyContext& ctx, int member, int p, int t)
{
    const DecisionLabeling& L = ctx.labeling();
    std::vector<int> cand = ctx.candidate_set(member, p, t);

    auto label_of = [&](int i) { return L.members[size_t(i)].label; };
    auto is_bdin = [&](int i) {
        return L.members[size_t(i)].structure == StructureKind::IncludedBoundary;
    };

    // (a)
    bool uniform = true;
    for (int i : cand)
        if (label_of(i) != label_of(cand.front()))
        {
            uniform = false;
            break;
        }
    if (uniform)
        return {label_of(cand.front()), DecisionCase::A};

    // (b)
    std::set<Value> bdin_hit;
    for (int i : cand)
        if (is_bdin(i))
            bdin_hit.insert(label_of(i));
    if (bdin_hit.size() == 1)
        return {*bdin_hit.begin(), DecisionCase::B};

    // (c)
    if (bdin_hit.size() >= 2)
    {
        std::vector<int> kernel;
        for (int i : cand)
        {
            const auto& flags = L.members[size_t(i)].bd2_of;
            bool in_all = true;
            for (Value w : bdin_hit)
                if (!flags.count(w))
                {
                    in_all = false;
                    break;
                }
            if (in_all)
                kernel.push_back(i);
        }
        if (!kernel.empty())
        {
            bool all_bdin_same = true;
            Value v = label_of(kernel.front());
            for (int i : kernel)
                if (!is_bdin(i) || label_of(i) != v)
                {
                    all_bdin_same = false;
                    break;
                }
            if (all_bdin_same)
                return {v, DecisionCase::C};
        }
    }

    // (d): smallest value (alphabet order) with a candidate
    Value best = label_of(cand.front());
    for (int i : cand)
        if (L.values.rank(label_of(i)) < L.values.rank(best))
            best = label_of(i);
    return {best, DecisionCase::D};
}

// --- stabilization check over a family ----------------------------------------

struct MemberReport
{
    std::string id;
    bool stabilized = false;
    bool certified = false;
    Value value = 0;
    int round = -1;
    bool matches_label = false;
};

struct StabilizationReport
{
    std::vector<MemberReport> members;
    std::map<DecisionCase, int> case_uses;
    bool all_pass = true;

    std::vector<std::string> violations() const
    {
        std::vector<std::string> out;
        for (const auto& m : members)
            if (!(m.stabilized && m.matches_label && m.certified))
                out.push_back(m.id);
        return out;
    }
};

// [OP] check_stabilizing: runs the universal rule round by round on every
// member and certifies stabilization by candidate containment: once every
// process's candidate set sits inside the labeled set (or pins its included
// boundary alone), monotone shrinking keeps the decision there forever.
inline StabilizationReport
check_stabilizing(const FamilyContext& ctx)
{
    const DecisionLabeling& L = ctx.labeling();
    StabilizationReport rep;
    for (int mi = 0; mi < ctx.size(); ++mi)
    {
        const LabelMember& m = L.members[size_t(mi)];
        MemberReport mr;
        mr.id = m.id;
        int H = ctx.trace(mi).horizon;
        ProcSet ob = ctx.trace(mi).obedient_throughout();

        int stab_round = 0;
        bool ok = true;
        bool certified = true;
        for (int p = 0; p < L.n && ok; ++p)
        {
            if (!in_set(ob, p))
                continue;
            int last_bad = -1;
            for (int t = 0; t <= H; ++t)
            {
                Decision d = universal_decide(ctx, mi, p, t);
                ++rep.case_uses[d.rule];
                if (d.value != m.label)
                    last_bad = t;
            }
            if (last_bad == H)
                ok = false;
            stab_round = std::max(stab_round, last_bad + 1);

            std::vector<int> cand = ctx.candidate_set(mi, p, H);
            bool contained = true;
            for (int i : cand)
                if (L.members[size_t(i)].label != m.label)
                {
                    contained = false;
                    break;
                }
            if (!contained)
            {
                // included-boundary pinning: the member's own boundary is the
                // only one the candidates still meet
                std::set<Value> hit;
                for (int i : cand)
                    if (L.members[size_t(i)].structure == StructureKind::IncludedBoundary)
                        hit.insert(L.members[size_t(i)].label);
                bool pinned = m.structure == StructureKind::IncludedBoundary &&
                              hit.size() == 1 && *hit.begin() == m.label;
                if (!pinned)
                    certified = false;
            }
        }
        mr.stabilized = ok;
        mr.value = m.label;
        mr.round = ok ? stab_round : -1;
        mr.matches_label = ok;
        mr.certified = ok && certified;
        if (!(mr.stabilized && mr.matches_label && mr.certified))
            rep.all_pass = false;
        rep.members.push_back(std::move(mr));
    }
    return rep;
}

// --- the non-proper -> proper reduction ------------------------------------------

// [OP] properify: members declared on an included boundary whose own-label
// convergence evidence fails are relabeled to the smallest other value with
// passing declared evidence; valent members keep their label.
inline DecisionLabeling
properify(const FamilyContext& ctx)
{
    const DecisionLabeling& L = ctx.labeling();
    DecisionLabeling out = L;
    for (size_t i = 0; i < out.members.size(); ++i)
    {
        LabelMember& m = out.members[i];
        if (m.structure != StructureKind::IncludedBoundary)
            continue;
        if (has_own_label_evidence(ctx, L.members[i]))
            continue;
        if (m.spec.inputs.valent() && m.spec.inputs[0] == m.label)
            continue; // validity guard
        std::optional<Value> target;
        for (Value w : L.values.values)
        {
            if (w == m.label)
                continue;
            for (const auto& ev : L.members[i].evidence)
                if (ev.label == w && evidence_passes(ctx, L.members[i], ev))
                {
                    target = w;
                    break;
                }
            if (target)
                break;
        }
        if (!target)
            throw labeling_error("properify: member " + m.id +
                                 " has no evidenced boundary to move to");
        m.label = *target;
    }
    return out;
}

// --- strong decision sets -----------------------------------------------------

// [OP] strong_reshuffle: relabel every component to the input value of its
// lexically smallest declared broadcaster; a component with no broadcaster
// witnesses unsolvability.
inline DecisionLabeling
strong_reshuffle(const FamilyContext& ctx)
{
    const DecisionLabeling& L = ctx.labeling();
    DecisionLabeling out = L;
    std::map<int, std::vector<int>> comp_members;
    for (int i = 0; i < ctx.size(); ++i)
        comp_members[L.members[size_t(i)].component].push_back(i);
    for (const auto& [comp, idxs] : comp_members)
    {
        auto itb = L.component_broadcasters.find(comp);
        if (itb == L.component_broadcasters.end() || itb->second.empty())
            throw unsolvability_witness(comp);
        int b = *std::min_element(itb->second.begin(), itb->second.end());
        for (int i : idxs)
            out.members[size_t(i)].label = L.members[size_t(i)].spec.inputs[b];
    }
    return out;
}

} // namespace stabcon

// Copyright 2026 the stabcon developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "model.hpp"

namespace stabcon
{

// Full-information views are recursive trees, but structurally shared as a
// DAG. The arena interns every node, so a ViewId is a canonical digest:
// id equality is structural equality, with no hash-collision caveat.
using ViewId = std::uint32_t;

constexpr ViewId kNoView = 0xffffffffu;

struct ViewNode
{
    std::int32_t owner;
    std::int32_t round;   // sync: global round; async: owner's local sequence
    Value input;          // meaningful at round 0 (leaf)
    std::uint32_t child_off;
    std::uint32_t child_cnt;
    ProcSet ho;           // heard-of set of this state
    Value min_input;      // min input over the heard-of set
};

class ViewArena
{
  public:
    ViewId leaf(int owner, Value input)
    {
        scratch_.clear();
        return intern(owner, 0, input, scratch_);
    }

    // children must be previously interned ids; own previous state included
    ViewId node(int owner, int round, const std::vector<ViewId>& children)
    {
        scratch_ = children;
        std::sort(scratch_.begin(), scratch_.end());
        scratch_.erase(std::unique(scratch_.begin(), scratch_.end()), scratch_.end());
        return intern(owner, round, 0, scratch_);
    }

    const ViewNode& operator[](ViewId id) const { return nodes_[id]; }

    ProcSet ho(ViewId id) const { return nodes_[id].ho; }
    Value min_input(ViewId id) const { return nodes_[id].min_input; }
    int owner(ViewId id) const { return nodes_[id].owner; }
    int round(ViewId id) const { return nodes_[id].round; }

    std::pair<const ViewId*, const ViewId*> children(ViewId id) const
    {
        const ViewNode& n = nodes_[id];
        const ViewId* base = child_pool_.data() + n.child_off;
        return {base, base + n.child_cnt};
    }

    size_t size() const { return nodes_.size(); }

    // Walks the DAG below `root` once; calls fn(id) for every distinct node.
    template <typename Fn>
    void visit(ViewId root, Fn&& fn) const
    {
        std::vector<ViewId> stack{root};
        std::vector<ViewId> seen;
        while (!stack.empty())
        {
            ViewId id = stack.back();
            stack.pop_back();
            if (stamp_.size() <= id)
                stamp_.resize(nodes_.size(), 0);
            if (stamp_[id] == stamp_gen_)
                continue;
            stamp_[id] = stamp_gen_;
            seen.push_back(id);
            fn(id);
            auto [b, e] = children(id);
            for (auto it = b; it != e; ++it)
                stack.push_back(*it);
        }
        ++stamp_gen_;
        if (stamp_gen_ == 0)
        {
            std::fill(stamp_.begin(), stamp_.end(), 0);
            stamp_gen_ = 1;
        }
    }

    void clear()
    {
        nodes_.clear();
        child_pool_.clear();
        buckets_.clear();
        stamp_.clear();
        stamp_gen_ = 1;
    }

  private:
    ViewId intern(int owner, int round, Value input, const std::vector<ViewId>& children)
    {
        std::uint64_t h = hash_key(owner, round, input, children);
        auto [it, inserted] = buckets_.try_emplace(h);
        if (!inserted)
        {
            for (ViewId cand : it->second)
                if (equals(cand, owner, round, input, children))
                    return cand;
        }
        ViewNode n;
        n.owner = owner;
        n.round = round;
        n.input = input;
        n.child_off = std::uint32_t(child_pool_.size());
        n.child_cnt = std::uint32_t(children.size());
        child_pool_.insert(child_pool_.end(), children.begin(), children.end());
        n.ho = proc_bit(owner);
        // Every heard-of process contributes its input leaf through some
        // child, so the min over children equals the min over the HO set.
        n.min_input = input;
        bool first = true;
        for (ViewId c : children)
        {
            n.ho |= nodes_[c].ho;
            if (first || nodes_[c].min_input < n.min_input)
                n.min_input = nodes_[c].min_input;
            first = false;
        }
        ViewId id = ViewId(nodes_.size());
        nodes_.push_back(n);
        it->second.push_back(id);
        return id;
    }

    bool equals(ViewId id, int owner, int round, Value input,
                const std::vector<ViewId>& children) const
    {
        const ViewNode& n = nodes_[id];
        if (n.owner != owner || n.round != round || n.child_cnt != children.size())
            return false;
        if (n.child_cnt == 0 && n.input != input)
            return false;
        const ViewId* base = child_pool_.data() + n.child_off;
        for (size_t i = 0; i < children.size(); ++i)
            if (base[i] != children[i])
                return false;
        return true;
    }

    static std::uint64_t hash_key(int owner, int round, Value input,
                                  const std::vector<ViewId>& children)
    {
        std::uint64_t h = 0x9e3779b97f4a7c15ull;
        auto mix = [&h](std::uint64_t x) {
            h ^= x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        };
        mix(std::uint64_t(std::uint32_t(owner)));
        mix(std::uint64_t(std::uint32_t(round)));
        mix(std::uint64_t(std::uint32_t(input)));
        for (ViewId c : children)
            mix(c);
        return h;
    }

    std::vector<ViewNode> nodes_;
    std::vector<ViewId> child_pool_;
    std::vector<ViewId> scratch_;
    std::unordered_map<std::uint64_t, std::vector<ViewId>> buckets_;
    mutable std::vector<std::uint32_t> stamp_;
    mutable std::uint32_t stamp_gen_ = 1;
};

// The round-(t-1) states merged into a round-t view: the owners and ids of
// the direct children. Used by the MinMax decision rule.
inline std::vector<ViewId>
merged_states(const ViewArena& a, ViewId root)
{
    auto [b, e] = a.children(root);
    return std::vector<ViewId>(b, e);
}

// Finds the state of `who` at round `round` embedded in the view, if any.
// Sync view DAGs are leveled, so the own-chain of any node of `who` with a
// round >= `round` passes through it.
inline ViewId
embedded_state(const ViewArena& a, ViewId root, int who, int round)
{
    ViewId found = kNoView;
    a.visit(root, [&](ViewId id) {
        if (found == kNoView && a.owner(id) == who && a.round(id) == round)
            found = id;
    });
    return found;
}

} // namespace stabcon

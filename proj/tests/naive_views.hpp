// Copyright 2026 the stabcon developers. Licensed under the Apache License,
// Version 2.0. See the COPYING file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0
#pragma once

#include <array>
#include <map>
#include <tuple>
#include <vector>

#include <stabcon/model.hpp>

// Test-side oracle: exact view-equality classes for two-process executions by
// level-wise color refinement with an explicit dictionary. Two states get the
// same color at round t iff their full-information views are structurally
// equal. Independent of the arena implementation in the library.
namespace naive
{

struct Classes
{
    // color[e][t][p]: equality class of p's view at configuration t of exec e
    std::vector<std::vector<std::array<int, 2>>> color;
};

inline Classes
view_classes_n2(const std::vector<std::pair<stabcon::LassoPattern, stabcon::InputAssignment>>& execs,
                int horizon)
{
    using stabcon::Value;
    Classes out;
    size_t m = execs.size();
    out.color.assign(m, std::vector<std::array<int, 2>>(size_t(horizon) + 1));

    std::map<Value, int> leaf_dict;
    for (size_t e = 0; e < m; ++e)
        for (int p = 0; p < 2; ++p)
        {
            Value in = execs[e].second[p];
            auto [it, fresh] = leaf_dict.emplace(in, int(leaf_dict.size()));
            out.color[e][0][size_t(p)] = it->second;
        }

    for (int t = 1; t <= horizon; ++t)
    {
        // key: (owner, previous color, received color or -1)
        std::map<std::tuple<int, int, int>, int> dict;
        for (size_t e = 0; e < m; ++e)
            for (int p = 0; p < 2; ++p)
            {
                int prev = out.color[e][size_t(t) - 1][size_t(p)];
                int other = execs[e].first.at(t).has_edge(1 - p, p)
                                ? out.color[e][size_t(t) - 1][size_t(1 - p)]
                                : -1;
                auto [it, fresh] =
                    dict.emplace(std::make_tuple(p, prev, other), int(dict.size()));
                out.color[e][size_t(t)][size_t(p)] = it->second;
            }
    }
    return out;
}

// first configuration index where p's views differ, or -1 if none within the
// common horizon
inline int
first_divergence(const Classes& c, size_t a, size_t b, int p, int horizon)
{
    for (int t = 0; t <= horizon; ++t)
        if (c.color[a][size_t(t)][size_t(p)] != c.color[b][size_t(t)][size_t(p)])
            return t;
    return -1;
}

} // namespace naive

#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "confound/graph.hpp"

namespace fixtures {

using Structure = std::vector<std::pair<std::string, confound::NodeSet>>;

// fig1_left: X causes Z and Y, Z causes Y.
inline const Structure kFig1Left = {{"X", {}}, {"Z", {"X"}}, {"Y", {"Z", "X"}}};
// fig1_right: X and Z both cause Y, nothing else.
inline const Structure kFig1Right = {{"X", {}}, {"Z", {}}, {"Y", {"Z", "X"}}};
inline const Structure kFig2Model1 = {
    {"U", {}}, {"W", {}}, {"X", {"U", "W"}}, {"Z", {"U", "X"}}, {"Y", {"Z", "X", "W"}}};
inline const Structure kModelB = {{"U", {}}, {"W", {}}, {"X", {"U", "W"}}, {"Z", {"U"}}, {"Y", {"Z", "W"}}};
inline const Structure kModelC = {{"V", {}}, {"X", {"V"}}, {"Z", {"V"}}, {"Y", {"Z", "V"}}};
inline const Structure kModelD = {{"U", {}}, {"W", {"U"}}, {"X", {"U", "W"}}, {"Z", {"U"}}, {"Y", {"Z", "W"}}};
inline const Structure kChain = {{"A", {}}, {"B", {"A"}}, {"C", {"B"}}};

inline confound::Dag dag_of(const Structure& s) {
    std::vector<std::string> nodes;
    std::map<std::string, confound::NodeSet> parents;
    for (const auto& [n, ps] : s) {
        nodes.push_back(n);
        parents[n] = ps;
    }
    return confound::Dag(nodes, parents);
}

}  // namespace fixtures

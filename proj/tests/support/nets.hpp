#pragma once

#include "confound/bayesnet.hpp"

namespace nets {

using confound::Cpt;
using confound::DiscreteBayesNet;
using confound::Variable;

inline Variable binary(const std::string& name) { return {name, {"0", "1"}}; }

// p(x=1)=0.5; p(z=1|x)=0.2/0.8; p(y=1|z,x)=0.1/0.5/0.6/0.9 (z slowest).
inline DiscreteBayesNet fig1_left() {
    return DiscreteBayesNet::from_cpts(
        {binary("X"), binary("Z"), binary("Y")},
        {{"X", {}, {{0.5, 0.5}}},
         {"Z", {"X"}, {{0.8, 0.2}, {0.2, 0.8}}},
         {"Y", {"Z", "X"}, {{0.9, 0.1}, {0.5, 0.5}, {0.4, 0.6}, {0.1, 0.9}}}});
}

// p(u=1)=0.4, p(w=1)=0.6, p(z=1|u)=0.3/0.8, p(x=1|u,w)=0.1/0.7/0.6/0.95,
// p(y=1|z,w)=0.2/0.5/0.4/0.9.
inline DiscreteBayesNet model_b() {
    return DiscreteBayesNet::from_cpts(
        {binary("U"), binary("W"), binary("X"), binary("Z"), binary("Y")},
        {{"U", {}, {{0.6, 0.4}}},
         {"W", {}, {{0.4, 0.6}}},
         {"X", {"U", "W"}, {{0.9, 0.1}, {0.3, 0.7}, {0.4, 0.6}, {0.05, 0.95}}},
         {"Z", {"U"}, {{0.7, 0.3}, {0.2, 0.8}}},
         {"Y", {"Z", "W"}, {{0.8, 0.2}, {0.5, 0.5}, {0.6, 0.4}, {0.1, 0.9}}}});
}

}  // namespace nets

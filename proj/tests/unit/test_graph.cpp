#include <random>

#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"
#include "confound/errors.hpp"
#include "confound/graph.hpp"
#include "doctest.h"

using namespace confound;
using fixtures::dag_of;

namespace {

bool respects_edges(const Dag& dag, const std::vector<std::string>& order) {
    auto pos = [&](const std::string& n) { return std::find(order.begin(), order.end(), n) - order.begin(); };
    for (const auto& [p, c] : dag.edges())
        if (pos(p) >= pos(c)) return false;
    return order.size() == dag.size();
}

// Independent cycle check: DFS with colors.
bool has_cycle(std::size_t n, const std::vector<std::vector<std::size_t>>& parents) {
    std::vector<int> color(n, 0);
    std::function<bool(std::size_t)> visit = [&](std::size_t v) {
        color[v] = 1;
        for (auto p : parents[v]) {
            if (color[p] == 1) return true;
            if (color[p] == 0 && visit(p)) return true;
        }
        color[v] = 2;
        return false;
    };
    for (std::size_t v = 0; v < n; ++v)
        if (color[v] == 0 && visit(v)) return true;
    return false;
}

}  // namespace

TEST_CASE("topological order of a chain is the chain") {
    Dag chain({"X", "Z", "Y"}, {{"Z", {"X"}}, {"Y", {"Z"}}});
    CHECK(chain.topological_order() == std::vector<std::string>{"X", "Z", "Y"});
}

TEST_CASE("topological order of the M-structure respects every edge") {
    Dag m = dag_of(fixtures::kModelB);
    const auto& order = m.topological_order();
    CHECK(respects_edges(m, order));
    auto pos = [&](const char* n) { return std::find(order.begin(), order.end(), n) - order.begin(); };
    CHECK(pos("U") < pos("X"));
    CHECK(pos("W") < pos("X"));
    CHECK(pos("U") < pos("Z"));
    CHECK(pos("Z") < pos("Y"));
}

TEST_CASE("ties are broken by declaration order") {
    Dag d({"B", "A", "C"}, {});
    CHECK(d.topological_order() == std::vector<std::string>{"B", "A", "C"});
    Dag e({"C", "A", "B"}, {{"C", {"B"}}});
    CHECK(e.topological_order() == std::vector<std::string>{"A", "B", "C"});
}

TEST_CASE("two-cycle raises CycleError") {
    CHECK_THROWS_AS(Dag({"Y", "Z"}, {{"Z", {"Y"}}, {"Y", {"Z"}}}), CycleError);
    CHECK_THROWS_AS(Dag({"A"}, {{"A", {"A"}}}), CycleError);
}

TEST_CASE("construction rejects bad identifiers") {
    CHECK_THROWS_AS(Dag({"A", "A"}, {}), ValidationError);
    CHECK_THROWS_AS(Dag({"A"}, {{"A", {"B"}}}), UnknownNode);
    CHECK_THROWS_AS(Dag({"A"}, {{"B", {"A"}}}), UnknownNode);
}

TEST_CASE("identifiers are case-sensitive") {
    Dag d({"x", "X"}, {{"X", {"x"}}});
    CHECK(d.parents("X") == NodeSet{"x"});
    CHECK(d.parents("x").empty());
}

TEST_CASE("random graphs: order exists exactly when DFS finds no cycle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 400; ++trial) {
        const std::size_t n = 2 + rng() % 6;
        std::vector<std::string> nodes;
        for (std::size_t i = 0; i < n; ++i) nodes.push_back("n" + std::to_string(i));
        std::map<std::string, NodeSet> parents;
        std::vector<std::vector<std::size_t>> idx(n);
        for (std::size_t c = 0; c < n; ++c)
            for (std::size_t p = 0; p < n; ++p)
                if (p != c && rng() % 4 == 0) {
                    parents[nodes[c]].push_back(nodes[p]);
                    idx[c].push_back(p);
                }
        if (has_cycle(n, idx)) {
            CHECK_THROWS_AS(Dag(nodes, parents), CycleError);
        } else {
            Dag d(nodes, parents);
            CHECK(respects_edges(d, d.topological_order()));
        }
    }
}

TEST_CASE("d-separation examples") {
    Dag m = dag_of(fixtures::kModelB);
    CHECK(d_separated(m, {"Z"}, {"W"}, {}));
    CHECK_FALSE(d_separated(m, {"Z"}, {"W"}, {"X"}));
    Dag chain = dag_of(fixtures::kChain);
    CHECK(d_separated(chain, {"A"}, {"C"}, {"B"}));
    CHECK_FALSE(d_separated(chain, {"A"}, {"C"}, {}));
}

TEST_CASE("conditioning on a collider's descendant opens it") {
    Dag d({"A", "B", "C", "D"}, {{"C", {"A", "B"}}, {"D", {"C"}}});
    CHECK(d_separated(d, {"A"}, {"B"}, {}));
    CHECK_FALSE(d_separated(d, {"A"}, {"B"}, {"D"}));
}

TEST_CASE("d-separation rejects unknown or overlapping sets") {
    Dag chain = dag_of(fixtures::kChain);
    CHECK_THROWS_AS(d_separated(chain, {"A"}, {"Q"}, {}), UnknownNode);
    CHECK_THROWS_AS(d_separated(chain, {"A"}, {"A"}, {}), PreconditionError);
    CHECK_THROWS_AS(d_separated(chain, {"A"}, {"C"}, {"A"}), PreconditionError);
}

TEST_CASE("reachability agrees with path enumeration on random graphs up to 8 nodes") {
    std::mt19937_64 rng(2024);
    int checked = 0;
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 3 + rng() % 6;
        std::vector<std::string> nodes;
        for (std::size_t i = 0; i < n; ++i) nodes.push_back(std::string(1, char('A' + i)));
        std::map<std::string, NodeSet> parents;
        for (std::size_t c = 1; c < n; ++c)
            for (std::size_t p = 0; p < c; ++p)
                if (rng() % 3 == 0) parents[nodes[c]].push_back(nodes[p]);
        Dag d(nodes, parents);
        for (int q = 0; q < 6; ++q) {
            NodeSet a, b, s;
            for (const auto& v : nodes) {
                switch (rng() % 5) {
                    case 0: a.push_back(v); break;
                    case 1: b.push_back(v); break;
                    case 2: s.push_back(v); break;
                    default: break;
                }
            }
            if (a.empty() || b.empty()) continue;
            const bool fast = d_separated(d, a, b, s);
            CHECK(fast == oracle::d_separated_by_paths(d, a, b, s));
            CHECK(fast == d_separated(d, b, a, s));  // symmetric
            ++checked;
        }
    }
    CHECK(checked > 500);
}

TEST_CASE("back-door examples") {
    Dag left = dag_of(fixtures::kFig1Left);
    CHECK(backdoor_admissible(left, "Z", "Y", {"X"}));
    CHECK_FALSE(backdoor_admissible(left, "Z", "Y", {}));

    Dag m = dag_of(fixtures::kModelB);
    CHECK(backdoor_admissible(m, "Z", "Y", {}));
    CHECK_FALSE(backdoor_admissible(m, "Z", "Y", {"X"}));
    CHECK(backdoor_admissible(m, "Z", "Y", {"X", "W"}));
    CHECK(backdoor_admissible(m, "Z", "Y", {"U"}));

    Dag f2 = dag_of(fixtures::kFig2Model1);
    CHECK(backdoor_admissible(f2, "Z", "Y", {"X", "W"}));
    CHECK_FALSE(backdoor_admissible(f2, "Z", "Y", {"X"}));
    CHECK(backdoor_admissible(f2, "Z", "Y", {"X", "U"}));
}

TEST_CASE("back-door rejects descendants of the treatment") {
    Dag d({"Z", "M", "Y"}, {{"M", {"Z"}}, {"Y", {"M"}}});
    CHECK(backdoor_admissible(d, "Z", "Y", {}));
    CHECK_FALSE(backdoor_admissible(d, "Z", "Y", {"M"}));
    CHECK_THROWS_AS(backdoor_admissible(d, "Z", "Z", {}), PreconditionError);
    CHECK_THROWS_AS(backdoor_admissible(d, "Z", "Y", {"Y"}), PreconditionError);
    CHECK_THROWS_AS(backdoor_admissible(d, "Z", "Q", {}), UnknownNode);
}

TEST_CASE("mutilate removes only the incoming edges of intervened nodes") {
    Dag left = dag_of(fixtures::kFig1Left);
    Dag cut = mutilate(left, {"Z"});
    CHECK(cut.parents("Z").empty());
    CHECK(cut.parents("Y") == left.parents("Y"));
    CHECK(cut.parents("X") == left.parents("X"));
    CHECK(mutilate(left, {}) == left);

    Dag d = dag_of(fixtures::kModelD);
    Dag dz = mutilate(d, {"Z"});
    auto before = d.edges();
    auto after = dz.edges();
    std::vector<std::pair<std::string, std::string>> removed;
    for (const auto& e : before)
        if (std::find(after.begin(), after.end(), e) == after.end()) removed.push_back(e);
    CHECK(removed == std::vector<std::pair<std::string, std::string>>{{"U", "Z"}});
    CHECK(after.size() + 1 == before.size());
    CHECK_THROWS_AS(mutilate(d, {"Q"}), UnknownNode);
}

TEST_CASE("descendants and ancestors") {
    Dag m = dag_of(fixtures::kModelB);
    CHECK(m.descendants("U") == NodeSet{"X", "Z", "Y"});
    CHECK(m.descendants("Y").empty());
    CHECK(m.ancestors_of({"Z"}) == NodeSet{"U", "Z"});
}

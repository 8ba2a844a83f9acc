#include "confound/graph.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <queue>
#include <set>

#include "confound/errors.hpp"

namespace confound {

std::vector<std::size_t> topological_order(std::size_t n,
                                           const std::vector<std::vector<std::size_t>>& parents) {
    std::vector<std::size_t> indegree(n, 0);
    std::vector<std::vector<std::size_t>> children(n);
    for (std::size_t c = 0; c < n; ++c) {
        indegree[c] = parents[c].size();
        for (auto p : parents[c]) children[p].push_back(c);
    }
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t i = 0; i < n; ++i)
        if (indegree[i] == 0) ready.push(i);

    std::vector<std::size_t> order;
    order.reserve(n);
    while (!ready.empty()) {
        auto i = ready.top();
        ready.pop();
        order.push_back(i);
        for (auto c : children[i])
            if (--indegree[c] == 0) ready.push(c);
    }
    if (order.size() != n) throw CycleError("directed cycle detected");
    return order;
}

Dag::Dag(std::vector<std::string> nodes, const std::map<std::string, NodeSet>& parents)
    : nodes_(std::move(nodes)) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].empty()) throw ValidationError("empty node identifier");
        if (!index_.emplace(nodes_[i], i).second)
            throw ValidationError("duplicate node '" + nodes_[i] + "'");
    }
    for (const auto& [child, _] : parents)
        if (!index_.count(child)) throw UnknownNode(child);

    parents_.resize(nodes_.size());
    parent_idx_.resize(nodes_.size());
    child_idx_.resize(nodes_.size());
    for (std::size_t c = 0; c < nodes_.size(); ++c) {
        auto it = parents.find(nodes_[c]);
        if (it == parents.end()) continue;
        std::set<std::size_t> seen;
        for (const auto& p : it->second) {
            auto pi = index_of(p);
            if (pi == c) throw CycleError("self-loop on '" + p + "'");
            if (!seen.insert(pi).second)
                throw ValidationError("duplicate parent '" + p + "' of '" + nodes_[c] + "'");
            parents_[c].push_back(p);
            parent_idx_[c].push_back(pi);
            child_idx_[pi].push_back(c);
        }
    }
    try {
        topo_idx_ = confound::topological_order(nodes_.size(), parent_idx_);
    } catch (const CycleError&) {
        // Name the nodes that never became ready.
        std::vector<bool> done(nodes_.size(), false);
        bool progress = true;
        while (progress) {
            progress = false;
            for (std::size_t i = 0; i < nodes_.size(); ++i) {
                if (done[i]) continue;
                bool ready = std::all_of(parent_idx_[i].begin(), parent_idx_[i].end(),
                                         [&](std::size_t p) { return done[p]; });
                if (ready) done[i] = progress = true;
            }
        }
        std::string names;
        for (std::size_t i = 0; i < nodes_.size(); ++i)
            if (!done[i]) names += (names.empty() ? "" : ", ") + nodes_[i];
        throw CycleError("directed cycle among {" + names + "}");
    }
    for (auto i : topo_idx_) topo_.push_back(nodes_[i]);
}

bool Dag::contains(const std::string& node) const { return index_.count(node) != 0; }

std::size_t Dag::index_of(const std::string& node) const {
    auto it = index_.find(node);
    if (it == index_.end()) throw UnknownNode(node);
    return it->second;
}

const NodeSet& Dag::parents(const std::string& node) const { return parents_[index_of(node)]; }

NodeSet Dag::children(const std::string& node) const {
    NodeSet out;
    auto ci = child_idx_[index_of(node)];
    std::sort(ci.begin(), ci.end());
    for (auto c : ci) out.push_back(nodes_[c]);
    return out;
}

std::vector<std::pair<std::string, std::string>> Dag::edges() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t c = 0; c < nodes_.size(); ++c)
        for (const auto& p : parents_[c]) out.emplace_back(p, nodes_[c]);
    return out;
}

NodeSet Dag::descendants(const std::string& node) const {
    std::vector<bool> seen(nodes_.size(), false);
    std::deque<std::size_t> todo{index_of(node)};
    while (!todo.empty()) {
        auto i = todo.front();
        todo.pop_front();
        for (auto c : child_idx_[i])
            if (!seen[c]) {
                seen[c] = true;
                todo.push_back(c);
            }
    }
    NodeSet out;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (seen[i]) out.push_back(nodes_[i]);
    return out;
}

NodeSet Dag::ancestors_of(const NodeSet& set) const {
    std::vector<bool> seen(nodes_.size(), false);
    std::deque<std::size_t> todo;
    for (const auto& s : set) {
        auto i = index_of(s);
        if (!seen[i]) {
            seen[i] = true;
            todo.push_back(i);
        }
    }
    while (!todo.empty()) {
        auto i = todo.front();
        todo.pop_front();
        for (auto p : parent_idx_[i])
            if (!seen[p]) {
                seen[p] = true;
                todo.push_back(p);
            }
    }
    NodeSet out;
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (seen[i]) out.push_back(nodes_[i]);
    return out;
}

namespace {

std::vector<bool> membership(const Dag& dag, const NodeSet& set) {
    std::vector<bool> in(dag.size(), false);
    for (const auto& n : set) in[dag.index_of(n)] = true;
    return in;
}

void require_disjoint(const std::vector<bool>& x, const std::vector<bool>& y, const char* what) {
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] && y[i]) throw PreconditionError(std::string("node sets overlap: ") + what);
}

// Nodes reachable from `sources` along active trails given `observed`.
// Directions: 0 = arrived from a child (moving up), 1 = arrived from a parent.
std::vector<bool> reachable(const Dag& dag, const std::vector<bool>& sources,
                            const std::vector<bool>& observed) {
    const std::size_t n = dag.size();
    // Nodes that are observed or have an observed descendant.
    std::vector<bool> opens_collider(n, false);
    std::deque<std::size_t> todo;
    for (std::size_t i = 0; i < n; ++i)
        if (observed[i]) {
            opens_collider[i] = true;
            todo.push_back(i);
        }
    while (!todo.empty()) {
        auto i = todo.front();
        todo.pop_front();
        for (auto p : dag.parent_indices(i))
            if (!opens_collider[p]) {
                opens_collider[p] = true;
                todo.push_back(p);
            }
    }

    std::vector<std::array<bool, 2>> visited(n, {false, false});
    std::vector<bool> reach(n, false);
    std::deque<std::pair<std::size_t, int>> frontier;
    for (std::size_t i = 0; i < n; ++i)
        if (sources[i]) frontier.emplace_back(i, 0);

    while (!frontier.empty()) {
        auto [y, dir] = frontier.front();
        frontier.pop_front();
        if (visited[y][dir]) continue;
        visited[y][dir] = true;
        if (!observed[y]) reach[y] = true;

        if (dir == 0 && !observed[y]) {
            for (auto p : dag.parent_indices(y)) frontier.emplace_back(p, 0);
            for (auto c : dag.child_indices(y)) frontier.emplace_back(c, 1);
        } else if (dir == 1) {
            if (!observed[y])
                for (auto c : dag.child_indices(y)) frontier.emplace_back(c, 1);
            if (opens_collider[y])
                for (auto p : dag.parent_indices(y)) frontier.emplace_back(p, 0);
        }
    }
    return reach;
}

}  // namespace

bool d_separated(const Dag& dag, const NodeSet& a, const NodeSet& b, const NodeSet& s) {
    auto in_a = membership(dag, a);
    auto in_b = membership(dag, b);
    auto in_s = membership(dag, s);
    require_disjoint(in_a, in_b, "a and b");
    require_disjoint(in_a, in_s, "a and s");
    require_disjoint(in_b, in_s, "b and s");
    auto reach = reachable(dag, in_a, in_s);
    for (std::size_t i = 0; i < dag.size(); ++i)
        if (in_b[i] && reach[i]) return false;
    return true;
}

bool backdoor_admissible(const Dag& dag, const std::string& treatment, const std::string& outcome,
                         const NodeSet& s) {
    auto t = dag.index_of(treatment);
    auto o = dag.index_of(outcome);
    if (t == o) throw PreconditionError("treatment and outcome must differ");
    auto in_s = membership(dag, s);
    if (in_s[t] || in_s[o])
        throw PreconditionError("adjustment set must exclude treatment and outcome");

    for (const auto& d : dag.descendants(treatment))
        if (in_s[dag.index_of(d)]) return false;

    // Back-door paths are exactly the paths that survive deleting the
    // treatment's outgoing edges.
    std::map<std::string, NodeSet> parents;
    for (const auto& n : dag.nodes()) {
        NodeSet ps;
        for (const auto& p : dag.parents(n))
            if (p != treatment) ps.push_back(p);
        parents[n] = ps;
    }
    Dag pruned(dag.nodes(), parents);
    return d_separated(pruned, {treatment}, {outcome}, s);
}

Dag mutilate(const Dag& dag, const NodeSet& intervened) {
    auto cut = membership(dag, intervened);
    std::map<std::string, NodeSet> parents;
    for (std::size_t i = 0; i < dag.size(); ++i)
        if (!cut[i]) parents[dag.nodes()[i]] = dag.parents(dag.nodes()[i]);
    return Dag(dag.nodes(), parents);
}

}  // namespace confound

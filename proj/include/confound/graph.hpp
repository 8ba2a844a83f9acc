#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace confound {

using NodeSet = std::vector<std::string>;

/// Directed acyclic graph over named nodes.
///
/// Declaration order of `nodes` is the tie-breaker for every ordering the
/// library produces. Parent lists keep the order they were given in. The
/// constructor rejects duplicate names, dangling parent references and
/// directed cycles, so a constructed Dag always has a topological order.
class Dag {
public:
    Dag() = default;
    Dag(std::vector<std::string> nodes, const std::map<std::string, NodeSet>& parents);

    const std::vector<std::string>& nodes() const noexcept { return nodes_; }
    std::size_t size() const noexcept { return nodes_.size(); }

    bool contains(const std::string& node) const;
    std::size_t index_of(const std::string& node) const;  // throws UnknownNode

    const NodeSet& parents(const std::string& node) const;
    NodeSet children(const std::string& node) const;
    std::vector<std::pair<std::string, std::string>> edges() const;

    /// Topological order, stable by declaration order among ready nodes.
    const std::vector<std::string>& topological_order() const noexcept { return topo_; }

    /// Strict descendants (node itself excluded), in declaration order.
    NodeSet descendants(const std::string& node) const;
    /// Ancestors of the set including the set itself, in declaration order.
    NodeSet ancestors_of(const NodeSet& set) const;

    // Index-level access for hot loops.
    const std::vector<std::size_t>& parent_indices(std::size_t i) const { return parent_idx_[i]; }
    const std::vector<std::size_t>& child_indices(std::size_t i) const { return child_idx_[i]; }
    const std::vector<std::size_t>& topological_indices() const noexcept { return topo_idx_; }

    friend bool operator==(const Dag& a, const Dag& b) {
        return a.nodes_ == b.nodes_ && a.parent_idx_ == b.parent_idx_;
    }

private:
    std::vector<std::string> nodes_;
    std::map<std::string, std::size_t> index_;
    std::vector<NodeSet> parents_;
    std::vector<std::vector<std::size_t>> parent_idx_;
    std::vector<std::vector<std::size_t>> child_idx_;
    std::vector<std::string> topo_;
    std::vector<std::size_t> topo_idx_;
};

/// Kahn's algorithm on raw adjacency. Ready nodes are released in declaration
/// order. Throws CycleError naming the nodes left on a cycle.
std::vector<std::size_t> topological_order(std::size_t n,
                                           const std::vector<std::vector<std::size_t>>& parents);

/// d-separation of `a` and `b` given `s` by reachability (active-trail search).
/// The three sets must be pairwise disjoint.
bool d_separated(const Dag& dag, const NodeSet& a, const NodeSet& b, const NodeSet& s);

/// Back-door criterion: no member of `s` descends from `treatment`, and `s`
/// blocks every path from treatment to outcome that starts with an arrow into
/// the treatment.
bool backdoor_admissible(const Dag& dag, const std::string& treatment, const std::string& outcome,
                         const NodeSet& s);

/// Copy of `dag` with every intervened node cut off from its parents.
Dag mutilate(const Dag& dag, const NodeSet& intervened);

}  // namespace confound

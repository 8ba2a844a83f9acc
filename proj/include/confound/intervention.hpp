#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "confound/bayesnet.hpp"

namespace confound {

/// do(do_assignments), reading off the marginal of `target`.
struct InterventionQuery {
    std::string target;
    Assignment do_assignments;
};

/// Truncated factorization: every intervened variable is clamped and its CPT
/// factor dropped; everything except the target is summed out.
Factor interventional_distribution(const DiscreteBayesNet& net, const InterventionQuery& q,
                                   std::size_t cap = tol::kDefaultJointCap);

/// Real value attached to each outcome state. Labels that all parse as numbers
/// map to those numbers ("0"/"1" -> 0/1); otherwise states map to their index.
std::vector<double> default_outcome_values(const Variable& outcome);

/// Two-way tables over {treatment, outcome}. Each treatment row is a
/// distribution over the outcome.
Factor interventional_table(const DiscreteBayesNet& net, const std::string& treatment,
                            const std::string& outcome);

/// sum_s p(outcome | z, s) p(s) for every treatment level z.
/// Throws PositivityViolation naming the first (z, s) cell with p(s) > 0 = p(z, s).
Factor adjusted_estimate(const DiscreteBayesNet& net, const std::string& treatment,
                         const std::string& outcome, const NodeSet& adjustment);

/// p(outcome | z) for every treatment level z.
Factor unadjusted_estimate(const DiscreteBayesNet& net, const std::string& treatment,
                           const std::string& outcome);

/// sum_y value(y) * table(level, y) for a {treatment, outcome} table.
double expected_outcome(const Factor& table, std::size_t level, const std::vector<double>& values);

/// E[Y | do(level1)] - E[Y | do(level0)].
double ace(const DiscreteBayesNet& net, const std::string& treatment, const std::string& outcome,
           const std::string& level1, const std::string& level0,
           const std::optional<std::vector<double>>& outcome_values = std::nullopt);

/// Error introduced by conditioning on a single covariate x:
///
///   sum_{y,x} y p(y|z1,x) [p(x) - p(x|z1)]  -  sum_{y,x} y p(y|z0,x) [p(x) - p(x|z0)]
///
/// Evaluated directly from p(z, x, y), not through adjusted_estimate.
double conditioning_bias(const DiscreteBayesNet& net, const std::string& treatment,
                         const std::string& outcome, const std::string& covariate,
                         const std::string& level1, const std::string& level0,
                         const std::optional<std::vector<double>>& outcome_values = std::nullopt);

enum class SelectionMode { graphical, distributional };
enum class SizeMetric { sum, product };

struct SelectionOptions {
    SelectionMode mode = SelectionMode::graphical;
    double tolerance = tol::kDistributional;
    SizeMetric metric = SizeMetric::sum;
};

struct AuditEntry {
    int stage = 0;  // 1: outcome reduction, 2: treatment reduction
    NodeSet subset;
    double cost = 0.0;
    bool accepted = false;
    // Max-norm gap in distributional mode; NaN in graphical mode.
    double discrepancy = std::numeric_limits<double>::quiet_NaN();
};

struct Selection {
    NodeSet pool;    // candidates: not treatment, outcome or a treatment descendant
    NodeSet stage1;  // smallest X' with P(Y|Z,pool) = P(Y|Z,X')
    NodeSet chosen;  // smallest X in X' with P(Z|X') = P(Z|X)
    std::vector<AuditEntry> audit;
};

/// Two-stage confounder reduction: first keep what predicts the outcome, then
/// drop what the treatment does not depend on. Subsets are tried cheapest
/// first (sum or product of state counts), ties broken by the sorted member
/// names; the audit lists every subset tried, in that order.
Selection select_sufficient_confounders(const DiscreteBayesNet& net, const std::string& treatment,
                                        const std::string& outcome,
                                        const SelectionOptions& options = {});

struct AdjustedEntry {
    NodeSet set;
    Factor dist;
    double ace = 0.0;
    std::vector<double> level_errors;  // E_adjusted[Y|z] - E[Y|do(z)] per level
    double ace_error = 0.0;
};

struct EffectReport {
    std::string treatment;
    std::string outcome;
    std::string level1;
    std::string level0;
    std::vector<double> outcome_values;

    Factor true_dist;
    Factor unadjusted_dist;
    std::vector<AdjustedEntry> adjusted;

    double ace_true = 0.0;
    double ace_unadjusted = 0.0;
    std::vector<double> unadjusted_level_errors;
    double unadjusted_ace_error = 0.0;
};

/// Truth, unadjusted and per-set adjusted estimates in one pass. Levels
/// default to the last (level1) and first (level0) treatment states.
EffectReport effect_report(const DiscreteBayesNet& net, const std::string& treatment,
                           const std::string& outcome, const std::vector<NodeSet>& covariate_sets,
                           std::optional<std::string> level1 = std::nullopt,
                           std::optional<std::string> level0 = std::nullopt);

}  // namespace confound

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "confound/bayesnet.hpp"

namespace confound {

// ---------------------------------------------------------------------------
// Scenario templates
// ---------------------------------------------------------------------------

/// Fixed binary-variable causal graphs.
///
///   model1_fig1  X->Z, X->Y, Z->Y                 (covariate causes both)
///   model2_fig1  X->Y, Z->Y                       (covariate independent of Z)
///   model1_fig2  U->Z, U->X, W->X, W->Y, X->Z, X->Y, Z->Y
///   model2_fig2  model1_fig2 plus U->W
///   modelA       observed Z, X, Y only: Z->X, Z->Y, X->Y; the Z-X and X-Y
///                links are associations, the DAG just carries the joint
///   modelB       M-structure U->Z, U->X, W->X, W->Y, Z->Y with U, W independent
///   modelC       single hidden cause V->Z, V->X, V->Y, Z->Y
///   modelD       modelB plus U->W (dependent hidden causes)
enum class Template { model1_fig1, model2_fig1, model1_fig2, model2_fig2, modelA, modelB, modelC, modelD };

std::string_view to_string(Template t);
/// Accepts the names above; throws PreconditionError otherwise.
Template parse_template(std::string_view name);
std::vector<Template> all_templates();

/// Template parameters are P(node = 1 | parent configuration). A root node `V`
/// has parameter `v`; a child gets one per parent configuration, named
/// `<child>_<parent><state>...` in CPT parent order, e.g. `y_z1w0`.
struct ScenarioParams {
    Template tmpl = Template::modelB;
    std::map<std::string, double> parameters;
};

/// Parameter names of a template in CPT order.
std::vector<std::string> template_parameters(Template t);
/// Reference parameterization used for the bundled model files.
ScenarioParams default_scenario(Template t);
/// Throws ValidationError when the parameter set does not match the schema
/// exactly or a value lies outside [0, 1].
DiscreteBayesNet build_scenario(const ScenarioParams& sp);

// ---------------------------------------------------------------------------
// Common-cause decomposition
// ---------------------------------------------------------------------------

/// Which endpoint belongs to T: `t_high` puts p(x|t') below p(x|t).
enum class Orientation { t_high, t_low };

/// A binary T explaining the X-Y association. T screens Y off from X, so
/// p(x|y,t) = p(x|y',t) = p(x|t) and likewise for t'; each p(x|y) is then the
/// p(t|y)-weighted point between the two endpoints.
struct CommonCauseDecomposition {
    double p_x_given_y = 0.0;
    double p_x_given_yprime = 0.0;
    double p_x_given_t = 0.0;
    double p_x_given_tprime = 0.0;
    double p_t_given_y = 0.0;
    double p_t_given_yprime = 0.0;
};

/// Weights p(t|y) = (p(x|y) - lo) / (hi - lo) (for t_high). Throws
/// InfeasibleEndpoints unless lo <= min(inputs) and max(inputs) <= hi, and
/// DegenerateEndpoints when lo == hi while the inputs differ. When lo == hi
/// and both inputs equal it, T carries no information and both weights are 1/2.
CommonCauseDecomposition decompose_common_cause(double p_x_given_y, double p_x_given_yprime,
                                                double endpoint_lo, double endpoint_hi,
                                                Orientation orientation = Orientation::t_high);

/// Endpoints chosen as (min - margin, max + margin), clipped to [0, 1].
CommonCauseDecomposition decompose_common_cause_auto(double p_x_given_y, double p_x_given_yprime,
                                                     double margin = 0.05,
                                                     Orientation orientation = Orientation::t_high);

/// Signed residuals of the reconstruction and dissection-ratio identities.
/// The ratio identity is checked in cross-multiplied form,
/// p(t|y) (p(x|t) - p(x|y)) = p(t'|y) (p(x|y) - p(x|t')).
struct IdentityResiduals {
    double reconstruction_y = 0.0;
    double reconstruction_yprime = 0.0;
    double ratio_y = 0.0;
    double ratio_yprime = 0.0;

    double max_abs() const;
};

IdentityResiduals identity_residuals(const CommonCauseDecomposition& d);

// ---------------------------------------------------------------------------
// Correlation feasibility
// ---------------------------------------------------------------------------

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double v) const { return lo <= v && v <= hi; }
};

/// Feasible range of r_ab given r_ac and r_bc: the 3x3 correlation matrix is
/// PSD iff r_ac^2 + r_bc^2 + r_ab^2 <= 1 + 2 r_ab r_ac r_bc, whose roots in r_ab
/// are r_ac r_bc -/+ sqrt((1 - r_ac^2)(1 - r_bc^2)). Throws DomainError for
/// inputs outside [-1, 1].
Interval third_correlation_interval(double r_ac, double r_bc);

bool correlation_feasible(double r_ab, double r_ac, double r_bc);

// ---------------------------------------------------------------------------
// Interaction of two causes at a common effect
// ---------------------------------------------------------------------------

enum class Interaction { monotonic, explaining_away, none, mixed };

std::string_view to_string(Interaction i);

/// p(w=1 | x=1, u=1) - p(w=1 | x=1, u=0); state index 1 is "1".
double interaction_delta(const DiscreteBayesNet& net, const std::string& u, const std::string& w,
                         const std::string& x);

/// Sign of interaction_delta with a 1e-12 dead band. Throws StructureError
/// unless u and w are distinct parents of x; all three must be binary.
Interaction classify_interaction(const DiscreteBayesNet& net, const std::string& u,
                                 const std::string& w, const std::string& x);

// ---------------------------------------------------------------------------
// Bias scans
// ---------------------------------------------------------------------------

struct GridAxis {
    std::string name;
    std::vector<double> values;
};

/// "NAME=a:b:step" (inclusive range), "NAME=v1,v2,..." or "NAME=v".
GridAxis parse_axis(std::string_view spec);

enum class Winner { condition, ignore, tie, failed };

std::string_view to_string(Winner w);

struct ScanResult {
    std::map<std::string, double> grid_point;
    double dep_zx = 0.0;  // max_{z,x} |p(x|z) - p(x)|
    double dep_xy = 0.0;  // max_{y,x} |p(x|y) - p(x)|
    double mi_zx = 0.0;   // mutual information in nats
    double mi_xy = 0.0;
    // Errors of the expected outcome against the interventional truth.
    double err_adj_z0 = 0.0;
    double err_adj_z1 = 0.0;
    double err_unadj_z0 = 0.0;
    double err_unadj_z1 = 0.0;
    double err_adj_ace = 0.0;
    double err_unadj_ace = 0.0;
    Winner winner = Winner::tie;
    Interaction interaction_class = Interaction::none;
    std::string failure;  // set when winner == failed
};

struct ScanOptions {
    std::string treatment = "Z";
    std::string outcome = "Y";
    std::string covariate = "X";
    unsigned threads = 1;  // 0: hardware concurrency
};

/// Exact evaluation of every grid cell. Axes are ordered by name and the
/// first varies slowest; parameters not on a grid keep their `base` value.
/// A cell that fails validation or positivity is reported as failed and the
/// scan continues. Output does not depend on the thread count.
std::vector<ScanResult> bias_scan(const ScenarioParams& base, std::vector<GridAxis> grid,
                                  const ScanOptions& options = {});

/// Evaluates one parameterization (the per-cell kernel of bias_scan).
ScanResult evaluate_cell(const ScenarioParams& sp, const ScanOptions& options = {});

/// Grid columns (sorted by name), dep_zx, dep_xy, interaction_class, the six
/// error columns, winner; optional mi_zx, mi_xy appended. %.12g numbers.
void write_scan_csv(std::ostream& out, const std::vector<ScanResult>& rows, bool with_mi = false);

struct ScanStratum {
    std::string interaction;  // class name or "all"
    std::string strength;     // "weak", "strong" or "all"
    std::size_t cells = 0;
    std::size_t condition = 0;
    std::size_t ignore = 0;
    std::size_t tie = 0;

    double condition_fraction() const { return cells ? double(condition) / double(cells) : 0.0; }
};

/// Winner counts per (interaction class, dependence strength). Strength is
/// min(dep_zx, dep_xy) split at its median over the evaluated cells.
struct ScanSummary {
    std::size_t total = 0;
    std::size_t failed = 0;
    double strength_threshold = 0.0;
    std::vector<ScanStratum> strata;
};

ScanSummary summarize_scan(const std::vector<ScanResult>& rows);
void write_scan_summary(std::ostream& out, const ScanSummary& s);

}  // namespace confound

#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wtrace/core.hpp"
#include "wtrace/grid_function.hpp"

namespace wtrace {

struct NormComponent {
    std::string name;
    double value = 0.0;
    /// Change of the component between the grid and its every-other-node
    /// coarsening; 0 when the grid cannot be coarsened.
    double error_estimate = 0.0;
};

struct NormReport {
    std::vector<NormComponent> components;
    double total = 0.0;
    /// Set when a component only bounds the quantity it names from above
    /// (the H^{-1} term of first-order norms).
    bool upper_bound = false;
    bool degenerate = false;
    std::string grid_hash;
    std::vector<std::pair<std::string, std::string>> notes;

    void add(std::string name, double value, double error_estimate = 0.0);
    /// Value of a named component; throws std::out_of_range when absent.
    double get(std::string_view name) const;
    bool has(std::string_view name) const;
};

struct RatioEntry {
    std::string label;
    double numerator = 0.0;
    double denominator = 0.0;
    double ratio = 0.0;
    bool degenerate = false;
    std::vector<std::pair<std::string, double>> extras;
};

/// Per-entry ratios plus distribution statistics over the non-degenerate ones.
struct RatioReport {
    std::vector<RatioEntry> entries;
    double max = 0.0;
    double min = 0.0;
    double mean = 0.0;
    double median = 0.0;
    std::size_t degenerate_count = 0;
    std::string grid_hash;

    void finalize();
};

/// Ratio entry with the degenerate convention: a denominator at or below
/// `floor` gives ratio 0 and the degenerate flag.
RatioEntry make_ratio(std::string label, double numerator, double denominator, double floor = 1e-300);

/// (int int |u|^p rho^{theta-n} dx dt)^{1/p}; the time integral is dropped
/// for static grids.
double lp_theta_norm(const GridFunction& u, const WeightParams& w);

/// (sum_{|a|<=k} ||rho^{|a|} D^a u||^p_{L_{p,theta}})^{1/p}, 0 <= k <= 3.
double weighted_sobolev_norm(const GridFunction& u, const WeightParams& w, int k);

/// First- or higher-order parabolic norm.
///
/// gamma = 1: ||u|| + ||Du|| + H, all in L_{p,theta}, where H is the
/// smaller of sum_i ||g_i||_{L_{p,theta}} and ||u_t||_{L_{p,theta+p}} over
/// whichever of the two the representation provides. Both bound the
/// H^{-1}_{p,theta+p} norm of u_t from above, and the report says so.
///
/// gamma >= 2: ||u||_{H^{gamma-1}_{p,theta}} + ||Du||_{H^{gamma-1}_{p,theta}}
/// + ||u_t||_{H^{gamma-2}_{p,theta+p}}, with u_t taken from rep.ut when set
/// and from the time derivative of u otherwise.
///
/// Vector quantities use the l^p combination sum_i ||v_i||^p.
NormReport tilde_norm(const GridFunction& u, const TimeDerivativeRep& rep, const WeightParams& w, int gamma);

struct HardyResult {
    double ratio = 0.0;
    double numerator = 0.0;
    double denominator = 0.0;
    bool degenerate = false;
    /// Largest |u| found on the boundary.
    double boundary_value = 0.0;
};

/// int |u|^p rho^{theta-n} / int |Du|^p rho^{theta-n+p}, for u vanishing on
/// the boundary (checked against `boundary_tol`).
HardyResult hardy_ratio(const GridFunction& u, const WeightParams& w, double boundary_tol = 1e-10);

/// The constant (p / (theta - n + 1))^p bounding hardy_ratio on the half
/// space for every u decaying at infinity.
double hardy_constant(const WeightParams& w);

}  // namespace wtrace

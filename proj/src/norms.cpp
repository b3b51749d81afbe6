#include "wtrace/norms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "wtrace/stencil.hpp"

namespace wtrace {

void NormReport::add(std::string name, double value, double error_estimate) {
    components.push_back({std::move(name), value, error_estimate});
}

double NormReport::get(std::string_view name) const {
    for (const auto& c : components) {
        if (c.name == name) return c.value;
    }
    throw std::out_of_range("no norm component named " + std::string(name));
}

bool NormReport::has(std::string_view name) const {
    return std::any_of(components.begin(), components.end(), [&](const auto& c) { return c.name == name; });
}

void RatioReport::finalize() {
    std::vector<double> r;
    degenerate_count = 0;
    for (const auto& e : entries) {
        if (e.degenerate) {
            ++degenerate_count;
        } else {
            r.push_back(e.ratio);
        }
    }
    if (r.empty()) {
        max = min = mean = median = 0.0;
        return;
    }
    max = *std::max_element(r.begin(), r.end());
    min = *std::min_element(r.begin(), r.end());
    mean = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(r.size());
    std::sort(r.begin(), r.end());
    const std::size_t m = r.size() / 2;
    median = r.size() % 2 == 1 ? r[m] : 0.5 * (r[m - 1] + r[m]);
}

RatioEntry make_ratio(std::string label, double numerator, double denominator, double floor) {
    RatioEntry e;
    e.label = std::move(label);
    e.numerator = numerator;
    e.denominator = denominator;
    if (!(std::abs(denominator) > floor)) {
        e.degenerate = true;
        e.ratio = 0.0;
    } else {
        e.ratio = numerator / denominator;
    }
    return e;
}

namespace {

void check_dimensions(const GridFunction& u, const WeightParams& w) {
    if (u.grid().n() != w.n()) {
        throw DimensionMismatch("function lives in n = " + std::to_string(u.grid().n()) +
                                " but the weight is for n = " + std::to_string(w.n()));
    }
}

// Weighted p-th power integrals of a list of arrays (summed), on the grid
// and on its coarsening.
class PowerIntegrator {
public:
    explicit PowerIntegrator(const SpaceTimeGrid& grid) : grid_(grid), coarse_(grid.coarsened()) {}

    struct Value {
        double fine = 0.0;
        double coarse = 0.0;
        bool has_coarse = false;
    };

    Value integrate(const std::vector<const std::vector<double>*>& arrays, double power, double p) {
        Value v;
        const auto& w = weights(power);
        for (const auto* a : arrays) {
            for (std::size_t i = 0; i < w.size(); ++i) v.fine += w[i] * std::pow(std::abs((*a)[i]), p);
        }
        if (coarse_) {
            v.has_coarse = true;
            const auto& wc = coarse_weights(power);
            const auto& map = coarse_->second;
            for (const auto* a : arrays) {
                for (std::size_t i = 0; i < wc.size(); ++i) v.coarse += wc[i] * std::pow(std::abs((*a)[map[i]]), p);
            }
        }
        return v;
    }

private:
    const std::vector<double>& weights(double power) {
        auto it = fine_.find(power);
        if (it == fine_.end()) it = fine_.emplace(power, grid_.weights(power)).first;
        return it->second;
    }
    const std::vector<double>& coarse_weights(double power) {
        auto it = coarse_w_.find(power);
        if (it == coarse_w_.end()) it = coarse_w_.emplace(power, coarse_->first.weights(power)).first;
        return it->second;
    }

    const SpaceTimeGrid& grid_;
    std::optional<std::pair<SpaceTimeGrid, std::vector<std::size_t>>> coarse_;
    std::map<double, std::vector<double>> fine_;
    std::map<double, std::vector<double>> coarse_w_;
};

struct Accum {
    double fine = 0.0;
    double coarse = 0.0;
    bool has_coarse = true;

    void add(const PowerIntegrator::Value& v) {
        fine += v.fine;
        coarse += v.coarse;
        has_coarse = has_coarse && v.has_coarse;
    }
    double norm(double p) const { return std::pow(fine, 1.0 / p); }
    double error(double p) const { return has_coarse ? std::abs(norm(p) - std::pow(coarse, 1.0 / p)) : 0.0; }
};

std::vector<Deriv> multi_indices(int n, int order) {
    std::vector<Deriv> out;
    if (n == 1) {
        out.push_back({0, order, 0});
    } else {
        for (int a2 = 0; a2 <= order; ++a2) out.push_back({0, order - a2, a2});
    }
    return out;
}

Deriv add(const Deriv& a, const Deriv& b) { return {a.t + b.t, a.x1 + b.x1, a.xp + b.xp}; }

// Sum over |beta| <= k of int |D^beta D^base f|^p rho^{shift + p |beta|}
// for every base in `bases`.
Accum sobolev_power(const GridFunction& f, const std::vector<Deriv>& bases, const WeightParams& w, int k,
                    double shift, PowerIntegrator& integ) {
    const int n = w.n();
    std::vector<Deriv> need;
    for (int order = 0; order <= k; ++order) {
        for (const auto& beta : multi_indices(n, order)) {
            for (const auto& base : bases) need.push_back(add(beta, base));
        }
    }
    f.prefetch(need);
    Accum acc;
    for (int order = 0; order <= k; ++order) {
        std::vector<const std::vector<double>*> arrays;
        for (const auto& beta : multi_indices(n, order)) {
            for (const auto& base : bases) arrays.push_back(&f.derivative(add(beta, base)));
        }
        acc.add(integ.integrate(arrays, w.measure_power() + shift + w.p() * order, w.p()));
    }
    return acc;
}

std::vector<Deriv> gradient(int n) {
    if (n == 1) return {{0, 1, 0}};
    return {{0, 1, 0}, {0, 0, 1}};
}

}  // namespace

double lp_theta_norm(const GridFunction& u, const WeightParams& w) {
    check_dimensions(u, w);
    PowerIntegrator integ(u.grid());
    return std::pow(integ.integrate({&u.values()}, w.measure_power(), w.p()).fine, 1.0 / w.p());
}

double weighted_sobolev_norm(const GridFunction& u, const WeightParams& w, int k) {
    check_dimensions(u, w);
    if (k < 0 || k > 3) throw UnsupportedOrder("Sobolev order must lie in 0..3");
    PowerIntegrator integ(u.grid());
    return sobolev_power(u, {Deriv{}}, w, k, 0.0, integ).norm(w.p());
}

NormReport tilde_norm(const GridFunction& u, const TimeDerivativeRep& rep, const WeightParams& w, int gamma) {
    check_dimensions(u, w);
    if (gamma < 1 || gamma > 3) throw UnsupportedOrder("parabolic norm order must lie in 1..3");
    const double p = w.p();
    const int n = w.n();
    PowerIntegrator integ(u.grid());
    NormReport r;
    r.grid_hash = descriptor_hash(u.grid().describe());

    if (gamma == 1) {
        if (!rep.has_components() && !rep.ut) {
            throw MissingRepresentation("first-order norm needs u_t = D_i g_i or a sample of u_t");
        }
        const auto a = sobolev_power(u, {Deriv{}}, w, 0, 0.0, integ);
        const auto b = sobolev_power(u, gradient(n), w, 0, 0.0, integ);
        r.add("u", a.norm(p), a.error(p));
        r.add("Du", b.norm(p), b.error(p));
        double h = std::numeric_limits<double>::infinity();
        double h_err = 0.0;
        std::string source;
        if (rep.has_components()) {
            double sum = 0.0;
            double err = 0.0;
            for (const auto& g : rep.g) {
                const auto c = sobolev_power(g, {Deriv{}}, w, 0, 0.0, integ);
                sum += c.norm(p);
                err += c.error(p);
            }
            r.add("g_sum", sum, err);
            h = sum;
            h_err = err;
            source = "representation";
        }
        if (rep.ut) {
            const auto c = sobolev_power(*rep.ut, {Deriv{}}, w, 0, p, integ);
            r.add("ut_weighted", c.norm(p), c.error(p));
            if (c.norm(p) < h) {
                h = c.norm(p);
                h_err = c.error(p);
                source = "ut";
            }
        }
        r.add("ut_hminus1", h, h_err);
        r.upper_bound = true;
        r.notes.emplace_back("ut_hminus1", "upper bound via " + source);
        r.total = r.get("u") + r.get("Du") + h;
        return r;
    }

    const auto a = sobolev_power(u, {Deriv{}}, w, gamma - 1, 0.0, integ);
    const auto b = sobolev_power(u, gradient(n), w, gamma - 1, 0.0, integ);
    r.add("u", a.norm(p), a.error(p));
    r.add("Du", b.norm(p), b.error(p));
    Accum c;
    if (rep.ut) {
        c = sobolev_power(*rep.ut, {Deriv{}}, w, gamma - 2, p, integ);
    } else if (u.can_differentiate(Deriv{1, 0, 0})) {
        c = sobolev_power(u, {Deriv{1, 0, 0}}, w, gamma - 2, p, integ);
    } else {
        throw MissingRepresentation("second-order norm needs u_t");
    }
    r.add("ut", c.norm(p), c.error(p));
    r.total = r.get("u") + r.get("Du") + r.get("ut");
    r.degenerate = r.total == 0.0;
    return r;
}

namespace {

double boundary_max(const GridFunction& u) {
    const auto& g = u.grid();
    const auto& normal = g.normal();
    std::vector<double> ends = {0.0};
    if (normal.kind() == AxisKind::Interval) ends.push_back(1.0);
    double worst = 0.0;
    for (std::size_t it = 0; it < g.nt(); ++it) {
        for (std::size_t ip = 0; ip < g.np(); ++ip) {
            const Point base = g.point(it, 0, ip);
            for (double e : ends) {
                double v = 0.0;
                if (normal.include_boundary_node()) {
                    v = u.value(it, e == 0.0 ? 0 : g.nx() - 1, ip);
                } else if (u.has_model()) {
                    v = u.model()->eval(Point{base.t, e, base.xp}, Deriv{});
                } else {
                    // Quadratic extrapolation from the three nearest nodes.
                    const std::size_t nx = g.nx();
                    std::size_t idx[3];
                    for (std::size_t k = 0; k < 3; ++k) idx[k] = e == 0.0 ? k : nx - 1 - k;
                    const double x[3] = {normal.node(idx[0]), normal.node(idx[1]), normal.node(idx[2])};
                    const auto wts = fd_weights(e, x, 0);
                    for (std::size_t k = 0; k < 3; ++k) v += wts[k] * u.value(it, idx[k], ip);
                }
                worst = std::max(worst, std::abs(v));
            }
        }
    }
    return worst;
}

}  // namespace

HardyResult hardy_ratio(const GridFunction& u, const WeightParams& w, double boundary_tol) {
    check_dimensions(u, w);
    HardyResult h;
    h.boundary_value = boundary_max(u);
    if (h.boundary_value > boundary_tol) {
        throw NonzeroBoundaryValue("function does not vanish on the boundary (max |u| = " +
                                   std::to_string(h.boundary_value) + ")");
    }
    PowerIntegrator integ(u.grid());
    h.numerator = sobolev_power(u, {Deriv{}}, w, 0, 0.0, integ).fine;
    h.denominator = sobolev_power(u, gradient(w.n()), w, 0, w.p(), integ).fine;
    const auto e = make_ratio("hardy", h.numerator, h.denominator);
    h.degenerate = e.degenerate;
    h.ratio = e.ratio;
    if (h.degenerate && h.numerator > 0.0) h.ratio = std::numeric_limits<double>::infinity();
    return h;
}

double hardy_constant(const WeightParams& w) {
    return std::pow(w.p() / (w.theta() - w.n() + 1.0), w.p());
}

}  // namespace wtrace

#include "wtrace/trace_repr.hpp"

#include <cmath>

#include "wtrace/heat_ext.hpp"
#include "wtrace/quad.hpp"

namespace wtrace {

namespace {

void fill_rule(const Profile1D& f, int cells, int points, std::vector<double>& x, std::vector<double>& w) {
    const auto [a, b] = f.support();
    const auto rule = uniform_rule(a, b, cells, points);
    x = rule.nodes;
    w = rule.weights;
}

}  // namespace

Mollifier Mollifier::make(MollifierMode mode, int n, int cells, int points) {
    if (n != 1 && n != 2) throw DimensionMismatch("mollifier is defined for n = 1 or 2");
    if (cells < 1 || points < 1) throw ValidationError("mollifier quadrature needs positive sizes");
    Mollifier m;
    m.mode = mode;
    m.n = n;
    m.cells = cells;
    m.points = points;
    if (mode == MollifierMode::Representation) {
        m.eta = Profile1D::bump(-0.75, 0.25);
        m.zeta_t = Profile1D::bump(0.5, 0.5);
        m.zeta_x = Profile1D::bump(0.0, 1.0);
    } else {
        m.eta = Profile1D::bump(-0.4, 0.3);
        m.zeta_t = Profile1D::bump(0.0, 1.0);
        m.zeta_x = Profile1D::bump(0.0, 0.6);
    }
    auto nodes = std::make_shared<Nodes>();
    fill_rule(m.eta, cells, points, nodes->z1, nodes->z1_w);
    fill_rule(m.zeta_t, cells, points, nodes->tau, nodes->tau_w);
    if (n == 2) {
        fill_rule(m.zeta_x, cells, points, nodes->zp, nodes->zp_w);
    } else {
        nodes->zp = {0.0};
        nodes->zp_w = {1.0};
    }
    // Normalize with the rule itself so the discrete mass is 1.
    auto rule_mass = [](const Profile1D& f, const std::vector<double>& x, const std::vector<double>& w) {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * f.eval(x[i]);
        return s;
    };
    double mass = rule_mass(m.eta, nodes->z1, nodes->z1_w) * rule_mass(m.zeta_t, nodes->tau, nodes->tau_w);
    if (n == 2) mass *= rule_mass(m.zeta_x, nodes->zp, nodes->zp_w);
    m.normalization = 1.0 / mass;
    m.nodes_ = std::move(nodes);
    return m;
}

Mollifier Mollifier::refined(int factor) const { return make(mode, n, cells * factor, points); }

double Mollifier::phi(double t, double x1, double xp) const {
    double v = normalization * eta.eval(x1) * zeta_t.eval(t);
    if (n == 2) v *= zeta_x.eval(xp);
    return v;
}

const Mollifier::Nodes& Mollifier::nodes() const {
    if (!nodes_) throw ValidationError("mollifier was not built with Mollifier::make");
    return *nodes_;
}

double Mollifier::mass() const {
    const auto& q = nodes();
    double s = 0.0;
    for (std::size_t a = 0; a < q.tau.size(); ++a) {
        for (std::size_t b = 0; b < q.z1.size(); ++b) {
            for (std::size_t c = 0; c < q.zp.size(); ++c) {
                s += q.tau_w[a] * q.z1_w[b] * q.zp_w[c] * phi(q.tau[a], q.z1[b], q.zp[c]);
            }
        }
    }
    return s;
}

double Mollifier::normal_moment() const {
    const auto& q = nodes();
    double s = 0.0;
    double mass = 0.0;
    for (std::size_t b = 0; b < q.z1.size(); ++b) {
        s += q.z1_w[b] * (-q.z1[b]) * eta.eval(q.z1[b]);
        mass += q.z1_w[b] * eta.eval(q.z1[b]);
    }
    return s / mass;
}

double mollify_value(const GridFunction& u, const Point& x, double eps, const Mollifier& m, const Deriv& d,
                     EvalCounter* counter) {
    if (!(eps > 0.0)) throw ValidationError("mollification scale must be positive");
    const auto& q = m.nodes();
    double s = 0.0;
    for (std::size_t a = 0; a < q.tau.size(); ++a) {
        const double ft = q.tau_w[a] * m.zeta_t.eval(q.tau[a]);
        if (ft == 0.0) continue;
        for (std::size_t b = 0; b < q.z1.size(); ++b) {
            const double f1 = ft * q.z1_w[b] * m.eta.eval(q.z1[b]);
            if (f1 == 0.0) continue;
            for (std::size_t c = 0; c < q.zp.size(); ++c) {
                const double f = m.n == 2 ? f1 * q.zp_w[c] * m.zeta_x.eval(q.zp[c]) : f1;
                if (f == 0.0) continue;
                const Point y{x.t - eps * eps * q.tau[a], x.x1 - eps * q.z1[b], x.xp - eps * q.zp[c]};
                if (counter) {
                    ++counter->evaluations;
                    if (y.x1 < 0.0) ++counter->below_boundary;
                }
                s += f * u.evaluate(y, d);
            }
        }
    }
    return m.normalization * s;
}

namespace {

class MollifiedField : public FieldModel {
public:
    MollifiedField(GridFunction u, double eps, Mollifier m, std::shared_ptr<EvalCounter> counter)
        : u_(std::move(u)), eps_(eps), m_(std::move(m)), counter_(std::move(counter)) {}

    int n() const override { return u_.model()->n(); }
    int max_space_order() const override { return u_.model()->max_space_order(); }
    int max_time_order() const override { return u_.model()->max_time_order(); }
    bool supports(const Deriv& d) const override { return u_.model()->supports(d); }
    double eval(const Point& x, const Deriv& d) const override {
        return mollify_value(u_, x, eps_, m_, d, counter_.get());
    }

private:
    GridFunction u_;
    double eps_;
    Mollifier m_;
    std::shared_ptr<EvalCounter> counter_;
};

}  // namespace

GridFunction mollify(const GridFunction& u, double eps, const Mollifier& m, std::shared_ptr<EvalCounter> counter) {
    if (!(eps > 0.0)) throw ValidationError("mollification scale must be positive");
    if (u.grid().n() != m.n) throw DimensionMismatch("mollifier and function dimensions differ");
    if (u.has_model()) {
        return GridFunction::sample(u.grid_ptr(), std::make_shared<MollifiedField>(u, eps, m, counter));
    }
    const auto& g = u.grid();
    std::vector<double> values(g.size());
    for (std::size_t it = 0; it < g.nt(); ++it) {
        for (std::size_t ix = 0; ix < g.nx(); ++ix) {
            for (std::size_t ip = 0; ip < g.np(); ++ip) {
                values[g.index(it, ix, ip)] = mollify_value(u, g.point(it, ix, ip), eps, m, {}, counter.get());
            }
        }
    }
    return GridFunction(u.grid_ptr(), std::move(values));
}

VTerms vj_terms(const GridFunction& u, const TimeDerivativeRep& rep, double t, double xp, double lambda,
                const Mollifier& m) {
    if (!(lambda > 0.0)) throw ValidationError("lambda must be positive");
    if (m.mode != MollifierMode::Representation) throw ValidationError("V terms need the representation mollifier");
    const int n = m.n;
    if (u.grid().n() != n) throw DimensionMismatch("mollifier and function dimensions differ");
    if (rep.g.size() != static_cast<std::size_t>(n)) {
        // Missing tangential components count as zero; the normal one is required.
        if (rep.g.empty()) throw MissingRepresentation("V3 needs the components g_i of u_t = D_i g_i");
    }
    const auto& q = m.nodes();
    const double root = std::sqrt(lambda);
    VTerms v;
    for (std::size_t a = 0; a < q.tau.size(); ++a) {
        const double tau = q.tau[a];
        const double zt = m.zeta_t.eval(tau);
        if (zt == 0.0) continue;
        for (std::size_t b = 0; b < q.z1.size(); ++b) {
            const double z1 = q.z1[b];
            const double w1 = -z1;
            const auto ej = m.eta.jet(z1);
            const double e0 = ej.derivative(0);
            const double e1 = ej.derivative(1);
            if (e0 == 0.0 && e1 == 0.0) continue;
            for (std::size_t c = 0; c < q.zp.size(); ++c) {
                const double wp = q.zp[c];
                double zx = 1.0;
                double zx1 = 0.0;
                if (n == 2) {
                    const auto j = m.zeta_x.jet(wp);
                    zx = j.derivative(0);
                    zx1 = j.derivative(1);
                }
                const double wt = q.tau_w[a] * q.z1_w[b] * q.zp_w[c] * m.normalization;
                const Point y{t - lambda * tau, root * w1, xp - root * wp};
                const double phi = e0 * zt * zx;
                if (phi != 0.0) {
                    v.v1 += wt * u.evaluate(y, Deriv{0, 1, 0}) * w1 * phi;
                    if (n == 2) v.v2 += wt * u.evaluate(y, Deriv{0, 0, 1}) * (-wp) * phi;
                }
                double gdot = rep.g[0].evaluate(y) * e1 * zt * zx;
                if (n == 2 && rep.g.size() > 1) gdot += rep.g[1].evaluate(y) * e0 * zt * zx1;
                v.v3 += wt * (-tau) * gdot;
            }
        }
    }
    v.v1 *= 0.5 / root;
    v.v2 *= 0.5 / root;
    v.v3 /= root;
    return v;
}

RepresentationOptions RepresentationOptions::refined(int factor) const {
    RepresentationOptions r = *this;
    r.lambda_cells *= factor;
    return r;
}

RepresentationResult representation_residual(const GridFunction& u, const TimeDerivativeRep& rep, double eps,
                                             const std::vector<std::pair<double, double>>& samples,
                                             const Mollifier& m, const RepresentationOptions& opt) {
    if (!(eps > 0.0)) throw ValidationError("mollification scale must be positive");
    if (opt.lambda_min < 0.0 || opt.lambda_min >= eps * eps) throw BadInterval("need 0 <= lambda_min < eps^2");
    const double mu0 = std::sqrt(opt.lambda_min);
    const auto rule = uniform_rule(mu0, eps, opt.lambda_cells, opt.lambda_points);
    RepresentationResult r;
    for (const auto& [t, xp] : samples) {
        SampleResidual s;
        s.t = t;
        s.xp = xp;
        s.boundary_value = u.evaluate(Point{t, 0.0, xp});
        s.mollified = mollify_value(u, Point{t, 0.0, xp}, eps, m);
        // lambda = mu^2, dlambda = 2 mu dmu; mu V(mu^2) stays bounded as mu -> 0.
        double integral = 0.0;
        for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
            const double mu = rule.nodes[k];
            integral += rule.weights[k] * 2.0 * mu * vj_terms(u, rep, t, xp, mu * mu, m).sum();
        }
        if (mu0 > 0.0) integral += 2.0 * mu0 * vj_terms(u, rep, t, xp, opt.lambda_min, m).sum() * mu0;
        s.integral = integral;
        s.residual = std::abs(s.boundary_value - s.mollified + integral);
        r.max_residual = std::max(r.max_residual, s.residual);
        r.samples.push_back(s);
    }
    return r;
}

RatioReport trace_inequality_ratio(const std::vector<TraceCase>& battery, const WeightParams& w,
                                   const SeminormOptions& sopt) {
    RatioReport r;
    for (const auto& c : battery) {
        if (r.grid_hash.empty()) r.grid_hash = descriptor_hash(c.u.grid().describe());
        const auto trace = trace_restrict(c.u);
        const auto num = slobodeckij_norm(trace, w, sopt);
        const auto den = tilde_norm(c.u, c.rep, w, 1);
        auto e = make_ratio(c.label, num.total, den.total);
        for (const auto& comp : num.components) e.extras.emplace_back("num_" + comp.name, comp.value);
        for (const auto& comp : den.components) e.extras.emplace_back("den_" + comp.name, comp.value);
        r.entries.push_back(std::move(e));
    }
    r.finalize();
    return r;
}

}  // namespace wtrace

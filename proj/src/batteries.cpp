#include "wtrace/batteries.hpp"

#include <cmath>
#include <numbers>

namespace wtrace {

double Rng::log_uniform(double a, double b) {
    if (!(a > 0.0) || !(b >= a)) throw BadInterval("log-uniform range needs 0 < a <= b");
    return a * std::exp(uniform() * std::log(b / a));
}

std::vector<LabelledData> bump_battery(Rng& rng, std::size_t size, int n, const UniformAxis& time,
                                       const std::optional<UniformAxis>& tangential) {
    if (n != 1 && n != 2) throw DimensionMismatch("bump battery supports n = 1 or 2");
    if (n == 2 && !tangential) throw ValidationError("plane battery needs a tangential axis");
    std::vector<LabelledData> out;
    for (std::size_t i = 0; i < size; ++i) {
        BoundaryTerm term;
        term.amplitude = rng.sign() * rng.uniform(0.5, 1.5);
        term.time = Profile1D::bump(rng.uniform(0.6, 1.4), rng.uniform(0.5, 1.0));
        const double c = rng.uniform(-0.5, 0.5);
        const double w = rng.uniform(0.6, 1.0);
        if (n == 2) {
            term.tangential = i % 2 == 0 ? Profile1D::gaussian(c, w) : Profile1D::odd_gaussian(c, w);
            out.push_back({"bump_" + std::to_string(i),
                           BoundaryData::from_terms(BoundaryKind::Plane, time, tangential, {term})});
        } else {
            out.push_back({"bump_" + std::to_string(i),
                           BoundaryData::from_terms(BoundaryKind::Line, time, std::nullopt, {term})});
        }
    }
    return out;
}

std::vector<FieldMember> trace_members(Rng& rng, std::size_t size, int n, double scale_min, double scale_max) {
    if (n != 1 && n != 2) throw DimensionMismatch("trace battery supports n = 1 or 2");
    std::vector<FieldMember> out;
    for (std::size_t i = 0; i < size; ++i) {
        const double A = rng.uniform(0.5, 1.5);
        const auto T = Profile1D::bump(rng.uniform(0.7, 1.3), rng.uniform(0.5, 1.0));
        const double b = rng.log_uniform(scale_min, scale_max);
        const double k = rng.uniform(-1.0, 1.0);
        const auto Y = n == 2 ? Profile1D::gaussian(rng.uniform(-0.5, 0.5), rng.uniform(0.6, 1.0))
                              : Profile1D::constant(1.0);
        std::vector<SeparableTerm> terms{{A, T, Profile1D::gaussian(0.0, b), Y},
                                         {A * k, T, Profile1D::odd_gaussian(0.0, b), Y}};
        out.push_back({"hug_" + std::to_string(i), std::make_shared<SeparableField>(n, std::move(terms))});
    }
    return out;
}

std::vector<TraceCase> sample_members(const std::vector<FieldMember>& members,
                                      std::shared_ptr<const SpaceTimeGrid> grid) {
    std::vector<TraceCase> out;
    for (const auto& m : members) {
        auto u = GridFunction::sample(grid, m.model);
        auto rep = TimeDerivativeRep::from_models(grid, {m.model->flux_representation()}, m.model->time_derivative());
        out.push_back({m.label, std::move(u), std::move(rep)});
    }
    return out;
}

namespace {

std::shared_ptr<const FieldModel> jet_model(std::function<ProfileJet(const ProfileJet&)> fn) {
    return std::make_shared<JetField>(std::move(fn));
}

}  // namespace

std::vector<StaticMember> hardy_members(Rng& rng, std::size_t size) {
    std::vector<StaticMember> out;
    for (std::size_t i = 0; i < size; ++i) {
        const double b = rng.log_uniform(0.2, 2.0);
        const double r = -1.0 / b;
        const auto one = ProfileJet::constant(1.0);
        std::shared_ptr<const FieldModel> m;
        std::string name;
        switch (i % 5) {
            case 0:
                name = "x_exp";
                m = jet_model([r](const ProfileJet& x) { return x * exp(r * x); });
                break;
            case 1:
                name = "x2_exp";
                m = jet_model([r](const ProfileJet& x) { return x * x * exp(r * x); });
                break;
            case 2:
                name = "one_minus_exp";
                m = jet_model([r, one](const ProfileJet& x) { return (one - exp(r * x)) * exp(-x); });
                break;
            case 3:
                name = "x_gauss";
                m = jet_model([b](const ProfileJet& x) { return x * exp((-1.0 / (b * b)) * (x * x)); });
                break;
            default:
                name = "x_rational";
                m = jet_model([b, one](const ProfileJet& x) {
                    const auto d = one + (1.0 / b) * x;
                    return x / (d * d * d * d);
                });
                break;
        }
        out.push_back({name + "_" + std::to_string(i), std::move(m)});
    }
    return out;
}

StaticMember hardy_reference_member() {
    return {"x_exp_reference", jet_model([](const ProfileJet& x) { return x * exp(-x); })};
}

std::vector<BvpMember> bvp_members(Rng& rng, std::size_t size, BvpForm form, double T, const WeightParams& w) {
    std::vector<BvpMember> out;
    for (std::size_t i = 0; i < size; ++i) {
        BvpProblem p;
        p.form = form;
        p.T = T;
        p.w = w;
        const double A = rng.uniform(-2.0, 2.0);
        const double k = std::floor(rng.uniform(1.0, 4.0));
        const double phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
        const double omega = rng.uniform(0.5, 2.0);
        auto smooth = [=](double t, double x) {
            return A * std::cos(k * std::numbers::pi * x + phase) * std::sin(omega * std::numbers::pi * t / T);
        };
        const double bc = rng.uniform(-1.0, 1.0);
        const double cc = rng.uniform(-1.0, 0.0);
        p.b = [bc](double, double) { return bc; };
        p.c = [cc](double, double) { return cc; };
        if (form == BvpForm::NonDivergence) {
            p.f = smooth;
        } else {
            const double bt = rng.uniform(-1.0, 1.0);
            p.b_tilde = [bt](double, double) { return bt; };
            p.f1 = smooth;
        }
        auto bump = [&](double amp) -> BoundaryFunction {
            const auto prof = Profile1D::bump(T * rng.uniform(0.35, 0.65), T * rng.uniform(0.2, 0.3), amp);
            return [prof](double t, int order) { return prof.eval(t, order); };
        };
        p.g_left = bump(rng.uniform(-1.0, 1.0));
        p.g_right = bump(rng.uniform(-1.0, 1.0));
        out.push_back({"bvp_" + std::to_string(i), std::move(p)});
    }
    return out;
}

}  // namespace wtrace

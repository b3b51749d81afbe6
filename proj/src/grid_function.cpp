#include "wtrace/grid_function.hpp"

#include <algorithm>
#include <cmath>

#include "wtrace/stencil.hpp"

namespace wtrace {

void FieldModel::eval_many(const Point& x, std::span<const Deriv> ds, std::span<double> out) const {
    for (std::size_t k = 0; k < ds.size(); ++k) out[k] = eval(x, ds[k]);
}

double JetField::eval(const Point& x, const Deriv& d) const {
    if (d.t > 0 || d.xp > 0) return 0.0;
    if (d.x1 > kMaxProfileOrder) throw UnsupportedOrder("jet field derivative order too high");
    return fn_(ProfileJet::variable(x.x1)).derivative(d.x1);
}

// ---------------------------------------------------------------------------

SeparableField::SeparableField(int n, std::vector<SeparableTerm> terms) : n_(n), terms_(std::move(terms)) {
    if (n != 1 && n != 2) throw DimensionMismatch("separable field dimension must be 1 or 2");
}

double SeparableField::eval(const Point& x, const Deriv& d) const {
    if (n_ == 1 && d.xp > 0) return 0.0;
    double sum = 0.0;
    for (const auto& term : terms_) {
        double v = term.amplitude * term.time.eval(x.t, d.t);
        if (v == 0.0) continue;
        v *= term.normal.eval(x.x1, d.x1);
        if (v == 0.0) continue;
        if (n_ == 2) v *= term.tangential.eval(x.xp, d.xp);
        sum += v;
    }
    return sum;
}

std::shared_ptr<const FieldModel> SeparableField::flux_representation() const {
    for (const auto& term : terms_) {
        if (term.normal.kind == Profile1D::Kind::Constant || term.normal.kind == Profile1D::Kind::Affine) {
            throw MissingRepresentation("flux representation needs normal profiles decaying in x1");
        }
    }
    auto terms = terms_;
    const int n = n_;
    return std::make_shared<LambdaField>(
        n,
        [terms, n](const Point& x, const Deriv& d) {
            if (d.t > 0 || d.space() > 0) throw MissingDerivatives("flux representation carries values only");
            double sum = 0.0;
            for (const auto& term : terms) {
                double v = term.amplitude * term.time.eval(x.t, 1);
                if (v == 0.0) continue;
                v *= term.normal.tail_integral(x.x1);
                if (n == 2) v *= term.tangential.eval(x.xp);
                sum -= v;
            }
            return sum;
        },
        0, 0);
}

std::shared_ptr<const FieldModel> SeparableField::time_derivative() const {
    auto self = std::make_shared<SeparableField>(*this);
    return std::make_shared<LambdaField>(
        n_, [self](const Point& x, const Deriv& d) { return self->eval(x, Deriv{d.t + 1, d.x1, d.xp}); },
        kMaxProfileOrder, kMaxProfileOrder - 1);
}

std::shared_ptr<const SeparableField> SeparableField::rescaled(double lambda) const {
    auto terms = terms_;
    for (auto& term : terms) {
        term.time = term.time.dilated(1.0 / (lambda * lambda));
        term.normal = term.normal.dilated(1.0 / lambda);
        term.tangential = term.tangential.dilated(1.0 / lambda);
    }
    return std::make_shared<SeparableField>(n_, std::move(terms));
}

// ---------------------------------------------------------------------------

GridFunction::GridFunction(std::shared_ptr<const SpaceTimeGrid> grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)), cache_(std::make_shared<Cache>()) {
    if (!grid_) throw ValidationError("grid function needs a grid");
    if (values_.size() != grid_->size()) {
        throw DimensionMismatch("grid function has " + std::to_string(values_.size()) + " values for " +
                                std::to_string(grid_->size()) + " grid points");
    }
    for (double v : values_) {
        if (!std::isfinite(v)) throw ValidationError("grid function values must be finite");
    }
}

GridFunction GridFunction::sample(std::shared_ptr<const SpaceTimeGrid> grid,
                                  std::shared_ptr<const FieldModel> model) {
    if (!model) throw ValidationError("sample needs a model");
    if (model->n() != grid->n()) throw DimensionMismatch("model and grid dimensions differ");
    std::vector<double> values(grid->size());
    for (std::size_t it = 0; it < grid->nt(); ++it) {
        for (std::size_t ix = 0; ix < grid->nx(); ++ix) {
            for (std::size_t ip = 0; ip < grid->np(); ++ip) {
                values[grid->index(it, ix, ip)] = model->eval(grid->point(it, ix, ip), Deriv{});
            }
        }
    }
    GridFunction f(std::move(grid), std::move(values));
    f.model_ = std::move(model);
    f.cache_->arrays.emplace(Deriv{}, f.values_);
    return f;
}

GridFunction GridFunction::zeros(std::shared_ptr<const SpaceTimeGrid> grid) {
    const std::size_t size = grid->size();
    return GridFunction(std::move(grid), std::vector<double>(size, 0.0));
}

GridFunction GridFunction::sampled_only() const {
    GridFunction f(grid_, values_);
    f.allow_fd_ = allow_fd_;
    return f;
}

GridFunction GridFunction::with_finite_differences(bool allowed) const {
    GridFunction f = *this;
    f.allow_fd_ = allowed;
    f.cache_ = std::make_shared<Cache>();
    return f;
}

namespace {

std::vector<double> axis_nodes(const SpaceTimeGrid& g, int axis) {
    if (axis == 0) return g.time() ? g.time()->nodes() : std::vector<double>{0.0};
    if (axis == 1) return g.normal().nodes();
    return g.tangential() ? g.tangential()->nodes() : std::vector<double>{0.0};
}

constexpr int kMaxFdOrder = 3;

bool fd_possible(std::size_t count, int order) {
    if (order == 0) return true;
    if (order > kMaxFdOrder) return false;
    return count >= static_cast<std::size_t>(order + 2);
}

// Applies the order-m derivative along one axis of the (t, x1, x') array.
std::vector<double> apply_axis(const SpaceTimeGrid& g, const std::vector<double>& in, int axis, int m) {
    if (m == 0) return in;
    const auto nodes = axis_nodes(g, axis);
    const std::size_t count = nodes.size();
    std::vector<std::size_t> starts(count);
    std::vector<std::vector<double>> weights(count);
    for (std::size_t i = 0; i < count; ++i) {
        const bool interior = i >= 2 && i + 2 < count;
        const std::size_t width = interior ? std::max<std::size_t>(5, m + 2) : static_cast<std::size_t>(m + 2);
        const std::size_t start = stencil_start(i, count, std::min(width, count));
        const std::size_t w = std::min(width, count);
        starts[i] = start;
        weights[i] = fd_weights(nodes[i], std::span<const double>(nodes.data() + start, w), m);
    }
    std::vector<double> out(in.size(), 0.0);
    const std::size_t nt = g.nt();
    const std::size_t nx = g.nx();
    const std::size_t np = g.np();
    for (std::size_t it = 0; it < nt; ++it) {
        for (std::size_t ix = 0; ix < nx; ++ix) {
            for (std::size_t ip = 0; ip < np; ++ip) {
                const std::size_t i = axis == 0 ? it : (axis == 1 ? ix : ip);
                double s = 0.0;
                for (std::size_t k = 0; k < weights[i].size(); ++k) {
                    const std::size_t j = starts[i] + k;
                    const std::size_t idx = axis == 0 ? g.index(j, ix, ip) : (axis == 1 ? g.index(it, j, ip) : g.index(it, ix, j));
                    s += weights[i][k] * in[idx];
                }
                out[g.index(it, ix, ip)] = s;
            }
        }
    }
    return out;
}

}  // namespace

bool GridFunction::can_differentiate(const Deriv& d) const {
    if (grid_->n() == 1 && d.xp > 0) return false;
    if (model_ && model_->supports(d)) return true;
    if (!allow_fd_) return false;
    if (grid_->is_static() && d.t > 0) return true;
    return fd_possible(grid_->nt(), d.t) && fd_possible(grid_->nx(), d.x1) && fd_possible(grid_->np(), d.xp);
}

std::vector<double> GridFunction::finite_difference(const Deriv& d) const {
    if (grid_->is_static() && d.t > 0) return std::vector<double>(values_.size(), 0.0);
    auto a = apply_axis(*grid_, values_, 1, d.x1);
    a = apply_axis(*grid_, a, 2, d.xp);
    return apply_axis(*grid_, a, 0, d.t);
}

void GridFunction::prefetch(std::span<const Deriv> ds) const {
    std::vector<Deriv> todo;
    {
        std::lock_guard<std::mutex> lock(cache_->mu);
        for (const auto& d : ds) {
            if (d == Deriv{} || cache_->arrays.count(d) != 0) continue;
            if (std::find(todo.begin(), todo.end(), d) != todo.end()) continue;
            todo.push_back(d);
        }
    }
    for (const auto& d : todo) {
        if (!can_differentiate(d)) {
            throw MissingDerivatives("derivative (t=" + std::to_string(d.t) + ", x1=" + std::to_string(d.x1) +
                                     ", x'=" + std::to_string(d.xp) + ") is not available");
        }
    }
    std::vector<Deriv> analytic;
    std::vector<Deriv> numeric;
    for (const auto& d : todo) (model_ && model_->supports(d) ? analytic : numeric).push_back(d);

    std::map<Deriv, std::vector<double>> fresh;
    if (!analytic.empty()) {
        for (const auto& d : analytic) fresh[d].resize(values_.size());
        std::vector<double> out(analytic.size());
        for (std::size_t it = 0; it < grid_->nt(); ++it) {
            for (std::size_t ix = 0; ix < grid_->nx(); ++ix) {
                for (std::size_t ip = 0; ip < grid_->np(); ++ip) {
                    const std::size_t idx = grid_->index(it, ix, ip);
                    model_->eval_many(grid_->point(it, ix, ip), analytic, out);
                    for (std::size_t k = 0; k < analytic.size(); ++k) fresh[analytic[k]][idx] = out[k];
                }
            }
        }
    }
    for (const auto& d : numeric) fresh[d] = finite_difference(d);
    std::lock_guard<std::mutex> lock(cache_->mu);
    for (auto& [d, arr] : fresh) cache_->arrays.emplace(d, std::move(arr));
}

const std::vector<double>& GridFunction::derivative(const Deriv& d) const {
    if (d == Deriv{}) return values_;
    {
        std::lock_guard<std::mutex> lock(cache_->mu);
        auto it = cache_->arrays.find(d);
        if (it != cache_->arrays.end()) return it->second;
    }
    const Deriv one[] = {d};
    prefetch(one);
    std::lock_guard<std::mutex> lock(cache_->mu);
    return cache_->arrays.at(d);
}

namespace {

struct AxisWeights {
    std::size_t start = 0;
    std::vector<double> w;
};

AxisWeights interpolation_weights(const std::vector<double>& nodes, double y, int order) {
    AxisWeights a;
    if (nodes.size() == 1) {
        a.w = {order == 0 ? 1.0 : 0.0};
        return a;
    }
    const std::size_t width = std::min<std::size_t>(4, nodes.size());
    const std::size_t k = locate(nodes, y);
    std::size_t start = k >= 1 ? k - 1 : 0;
    if (start + width > nodes.size()) start = nodes.size() - width;
    a.start = start;
    a.w = fd_weights(y, std::span<const double>(nodes.data() + start, width), order);
    return a;
}

}  // namespace

double GridFunction::evaluate(const Point& x, const Deriv& d) const {
    if (model_ && model_->supports(d)) return model_->eval(x, d);
    if (grid_->n() == 1 && d.xp > 0) return 0.0;
    if (grid_->is_static() && d.t > 0) return 0.0;
    if (!allow_fd_ && d != Deriv{}) throw MissingDerivatives("off-grid derivative needs a model");
    const auto wt = interpolation_weights(axis_nodes(*grid_, 0), x.t, d.t);
    const auto wx = interpolation_weights(axis_nodes(*grid_, 1), x.x1, d.x1);
    const auto wp = interpolation_weights(axis_nodes(*grid_, 2), x.xp, d.xp);
    double s = 0.0;
    for (std::size_t a = 0; a < wt.w.size(); ++a) {
        for (std::size_t b = 0; b < wx.w.size(); ++b) {
            const double wab = wt.w[a] * wx.w[b];
            for (std::size_t c = 0; c < wp.w.size(); ++c) {
                s += wab * wp.w[c] * values_[grid_->index(wt.start + a, wx.start + b, wp.start + c)];
            }
        }
    }
    return s;
}

GridFunction GridFunction::scaled(double a) const {
    std::vector<double> v = values_;
    for (double& x : v) x *= a;
    GridFunction f(grid_, std::move(v));
    f.allow_fd_ = allow_fd_;
    if (model_) {
        auto base = model_;
        f.model_ = std::make_shared<LambdaField>(
            base->n(), [base, a](const Point& p, const Deriv& d) { return a * base->eval(p, d); },
            base->max_space_order(), base->max_time_order());
    }
    return f;
}

GridFunction GridFunction::plus(const GridFunction& other) const {
    if (other.grid_ != grid_ && other.grid_->describe() != grid_->describe()) {
        throw DimensionMismatch("grid functions live on different grids");
    }
    std::vector<double> v = values_;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] += other.values_[i];
    GridFunction f(grid_, std::move(v));
    f.allow_fd_ = allow_fd_ && other.allow_fd_;
    if (model_ && other.model_) {
        auto a = model_;
        auto b = other.model_;
        f.model_ = std::make_shared<LambdaField>(
            a->n(), [a, b](const Point& p, const Deriv& d) { return a->eval(p, d) + b->eval(p, d); },
            std::min(a->max_space_order(), b->max_space_order()),
            std::min(a->max_time_order(), b->max_time_order()));
    }
    return f;
}

// ---------------------------------------------------------------------------

TimeDerivativeRep TimeDerivativeRep::from_models(std::shared_ptr<const SpaceTimeGrid> grid,
                                                 std::vector<std::shared_ptr<const FieldModel>> g,
                                                 std::shared_ptr<const FieldModel> ut) {
    TimeDerivativeRep rep;
    for (auto& m : g) rep.g.push_back(GridFunction::sample(grid, std::move(m)));
    if (ut) rep.ut = GridFunction::sample(grid, std::move(ut));
    return rep;
}

TimeDerivativeRep TimeDerivativeRep::from_antiderivative(const GridFunction& ut, double x_ref) {
    const auto& g = ut.grid();
    if (g.n() != 1) throw DimensionMismatch("antiderivative representation is one-dimensional");
    const auto& x = g.normal().nodes();
    std::vector<double> values(g.size(), 0.0);
    for (std::size_t it = 0; it < g.nt(); ++it) {
        std::vector<double> cum(g.nx(), 0.0);
        for (std::size_t ix = 1; ix < g.nx(); ++ix) {
            cum[ix] = cum[ix - 1] + 0.5 * (x[ix] - x[ix - 1]) * (ut.value(it, ix, 0) + ut.value(it, ix - 1, 0));
        }
        const std::size_t k = locate(x, x_ref);
        const double lam = std::clamp((x_ref - x[k]) / (x[k + 1] - x[k]), 0.0, 1.0);
        const double ref = (1.0 - lam) * cum[k] + lam * cum[k + 1];
        for (std::size_t ix = 0; ix < g.nx(); ++ix) values[g.index(it, ix, 0)] = cum[ix] - ref;
    }
    TimeDerivativeRep rep;
    rep.g.emplace_back(ut.grid_ptr(), std::move(values));
    rep.ut = ut;
    return rep;
}

double pairing_defect(const GridFunction& u, const TimeDerivativeRep& rep, std::span<const TestFunction> tests) {
    if (!rep.has_components()) throw MissingRepresentation("pairing check needs representation components");
    const auto& grid = u.grid();
    const auto w = grid.weights(0.0);
    double worst = 0.0;
    for (const auto& phi : tests) {
        double lhs = 0.0;
        double rhs = 0.0;
        double scale = 0.0;
        for (std::size_t it = 0; it < grid.nt(); ++it) {
            for (std::size_t ix = 0; ix < grid.nx(); ++ix) {
                for (std::size_t ip = 0; ip < grid.np(); ++ip) {
                    const std::size_t idx = grid.index(it, ix, ip);
                    const Point x = grid.point(it, ix, ip);
                    const double a = w[idx] * u.values()[idx] * phi->eval(x, Deriv{1, 0, 0});
                    lhs += a;
                    scale += std::abs(a);
                    for (std::size_t i = 0; i < rep.g.size(); ++i) {
                        const Deriv d = i == 0 ? Deriv{0, 1, 0} : Deriv{0, 0, 1};
                        const double b = w[idx] * rep.g[i].values()[idx] * phi->eval(x, d);
                        rhs += b;
                        scale += std::abs(b);
                    }
                }
            }
        }
        if (scale > 0.0) worst = std::max(worst, std::abs(lhs - rhs) / scale);
    }
    return worst;
}

}  // namespace wtrace

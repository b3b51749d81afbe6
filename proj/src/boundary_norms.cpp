#include "wtrace/boundary_norms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "json.hpp"
#include "wtrace/stencil.hpp"

namespace wtrace {

namespace {

void check_finite(const std::vector<double>& v) {
    for (double x : v) {
        if (!std::isfinite(x)) throw ValidationError("boundary data must be finite");
    }
}

}  // namespace

BoundaryData BoundaryData::line(UniformAxis time, std::vector<double> values, Fn fn) {
    if (values.size() != time.size()) throw DimensionMismatch("line data needs one value per time node");
    check_finite(values);
    BoundaryData g;
    g.kind_ = BoundaryKind::Line;
    g.time_ = std::move(time);
    g.values_.push_back(std::move(values));
    g.fns_.push_back(std::move(fn));
    return g;
}

BoundaryData BoundaryData::plane(UniformAxis time, UniformAxis tangential, std::vector<double> values, Fn fn) {
    if (values.size() != time.size() * tangential.size()) {
        throw DimensionMismatch("plane data needs one value per (t, x') node");
    }
    check_finite(values);
    BoundaryData g;
    g.kind_ = BoundaryKind::Plane;
    g.time_ = std::move(time);
    g.tangential_ = std::move(tangential);
    g.values_.push_back(std::move(values));
    g.fns_.push_back(std::move(fn));
    return g;
}

BoundaryData BoundaryData::pair(UniformAxis time, std::vector<double> left, std::vector<double> right, Fn left_fn,
                                Fn right_fn) {
    if (left.size() != time.size() || right.size() != time.size()) {
        throw DimensionMismatch("interval data needs one value per time node and endpoint");
    }
    check_finite(left);
    check_finite(right);
    BoundaryData g;
    g.kind_ = BoundaryKind::IntervalPair;
    g.time_ = std::move(time);
    g.values_.push_back(std::move(left));
    g.values_.push_back(std::move(right));
    g.fns_.push_back(std::move(left_fn));
    g.fns_.push_back(std::move(right_fn));
    return g;
}

BoundaryData BoundaryData::from_functions(BoundaryKind kind, UniformAxis time, std::optional<UniformAxis> tangential,
                                          std::vector<Fn> fns) {
    const std::size_t want = kind == BoundaryKind::IntervalPair ? 2 : 1;
    if (fns.size() != want) throw DimensionMismatch("wrong number of boundary closures");
    if ((kind == BoundaryKind::Plane) != tangential.has_value()) {
        throw DimensionMismatch("plane data needs a tangential axis, other kinds must not have one");
    }
    std::vector<std::vector<double>> values;
    const std::size_t np = tangential ? tangential->size() : 1;
    for (const auto& fn : fns) {
        std::vector<double> v(time.size() * np);
        for (std::size_t it = 0; it < time.size(); ++it) {
            for (std::size_t ip = 0; ip < np; ++ip) {
                v[it * np + ip] = fn(time.node(it), tangential ? tangential->node(ip) : 0.0, 0, 0);
            }
        }
        values.push_back(std::move(v));
    }
    switch (kind) {
        case BoundaryKind::Line:
            return line(std::move(time), std::move(values[0]), fns[0]);
        case BoundaryKind::Plane:
            return plane(std::move(time), std::move(*tangential), std::move(values[0]), fns[0]);
        case BoundaryKind::IntervalPair:
            return pair(std::move(time), std::move(values[0]), std::move(values[1]), fns[0], fns[1]);
    }
    throw ValidationError("unknown boundary kind");
}

BoundaryData BoundaryData::from_terms(BoundaryKind kind, UniformAxis time, std::optional<UniformAxis> tangential,
                                      std::vector<BoundaryTerm> terms) {
    if (kind == BoundaryKind::IntervalPair) throw ValidationError("separable terms describe line or plane data");
    auto shared = std::make_shared<const std::vector<BoundaryTerm>>(std::move(terms));
    const bool plane = kind == BoundaryKind::Plane;
    Fn fn = [shared, plane](double t, double xp, int dt, int dxp) {
        if (!plane && dxp > 0) return 0.0;
        double s = 0.0;
        for (const auto& term : *shared) {
            double v = term.amplitude * term.time.eval(t, dt);
            if (v == 0.0) continue;
            if (plane) v *= term.tangential.eval(xp, dxp);
            s += v;
        }
        return s;
    };
    auto g = from_functions(kind, std::move(time), std::move(tangential), {fn});
    g.terms_ = std::move(shared);
    return g;
}

double BoundaryData::eval(std::size_t component, double t, double xp, int dt, int dxp) const {
    const auto& fn = fns_.at(component);
    if (fn) return fn(t, xp, dt, dxp);
    if (kind_ != BoundaryKind::Plane && dxp > 0) return 0.0;
    if (t < time_.a() || t > time_.b()) return 0.0;
    if (tangential_ && (xp < tangential_->a() || xp > tangential_->b())) return 0.0;
    auto weights = [](const std::vector<double>& nodes, double y, int order, std::size_t& start) {
        const std::size_t width = std::min<std::size_t>(4, nodes.size());
        const std::size_t k = locate(nodes, y);
        start = k >= 1 ? k - 1 : 0;
        if (start + width > nodes.size()) start = nodes.size() - width;
        return fd_weights(y, std::span<const double>(nodes.data() + start, width), order);
    };
    std::size_t st = 0;
    const auto wt = weights(time_.nodes(), t, dt, st);
    const auto& v = values_[component];
    if (!tangential_) {
        double s = 0.0;
        for (std::size_t a = 0; a < wt.size(); ++a) s += wt[a] * v[st + a];
        return s;
    }
    std::size_t sp = 0;
    const auto wp = weights(tangential_->nodes(), xp, dxp, sp);
    const std::size_t np = tangential_->size();
    double s = 0.0;
    for (std::size_t a = 0; a < wt.size(); ++a) {
        for (std::size_t b = 0; b < wp.size(); ++b) s += wt[a] * wp[b] * v[(st + a) * np + sp + b];
    }
    return s;
}

std::pair<double, double> BoundaryData::time_support() const {
    if (terms_) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const auto& term : *terms_) {
            const auto [a, b] = term.time.support();
            lo = std::min(lo, a);
            hi = std::max(hi, b);
        }
        return {std::max(lo, time_.a()), std::min(hi, time_.b())};
    }
    const std::size_t np = this->np();
    std::size_t first = time_.size();
    std::size_t last = 0;
    for (const auto& v : values_) {
        for (std::size_t it = 0; it < time_.size(); ++it) {
            for (std::size_t ip = 0; ip < np; ++ip) {
                if (v[it * np + ip] != 0.0) {
                    first = std::min(first, it);
                    last = std::max(last, it);
                }
            }
        }
    }
    if (first > last) return {time_.a(), time_.a()};
    // The four-point interpolant reaches two steps past a nonzero sample.
    const double h = 2.0 * time_.step();
    return {std::max(time_.a(), time_.node(first) - h), std::min(time_.b(), time_.node(last) + h)};
}

BoundaryData BoundaryData::sampled_only() const {
    BoundaryData g = *this;
    for (auto& f : g.fns_) f = nullptr;
    g.terms_.reset();
    return g;
}

BoundaryData BoundaryData::combine(double alpha, const BoundaryData& other, double beta) const {
    if (other.kind_ != kind_ || other.describe() != describe()) {
        throw DimensionMismatch("boundary data live on different grids");
    }
    BoundaryData g = *this;
    g.terms_.reset();
    for (std::size_t c = 0; c < values_.size(); ++c) {
        for (std::size_t i = 0; i < values_[c].size(); ++i) {
            g.values_[c][i] = alpha * values_[c][i] + beta * other.values_[c][i];
        }
        if (fns_[c] && other.fns_[c]) {
            auto f1 = fns_[c];
            auto f2 = other.fns_[c];
            g.fns_[c] = [f1, f2, alpha, beta](double t, double xp, int dt, int dxp) {
                return alpha * f1(t, xp, dt, dxp) + beta * f2(t, xp, dt, dxp);
            };
        } else {
            g.fns_[c] = nullptr;
        }
    }
    return g;
}

std::string BoundaryData::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << (kind_ == BoundaryKind::Line ? "line" : kind_ == BoundaryKind::Plane ? "plane" : "pair") << ";t=["
       << time_.a() << "," << time_.b() << "]x" << time_.cells();
    if (tangential_) os << ";xp=[" << tangential_->a() << "," << tangential_->b() << "]x" << tangential_->cells();
    return os.str();
}

// ---------------------------------------------------------------------------

namespace {

TimeMode resolve(TimeMode mode, const BoundaryData& g) {
    if (mode != TimeMode::Auto) return mode;
    return g.kind() == BoundaryKind::IntervalPair ? TimeMode::Window : TimeMode::WholeLine;
}

double abs_pow(double x, double p) { return p == 2.0 ? x * x : std::pow(std::abs(x), p); }

// Composite Gauss rule on [a, b] with cells no wider than h.
NodeRule inner_rule(double a, double b, double h, int points) {
    if (!(b > a)) return {};
    const int cells = std::max(1, static_cast<int>(std::ceil((b - a) / h - 1e-9)));
    return uniform_rule(a, b, cells, points);
}

struct Layout {
    double t_step;
    double x_step;
    NodeRule xp_window;  // rule over the tangential window (plane) or {0 : 1}
    NodeRule t_window;
};

Layout make_layout(const BoundaryData& g, const SeminormOptions& opt) {
    if (opt.cell_points < 1 || opt.inner_refine < 1) throw ValidationError("inner rule needs positive sizes");
    Layout l;
    l.t_step = g.time().step() / opt.inner_refine;
    l.t_window = inner_rule(g.time().a(), g.time().b(), l.t_step, opt.cell_points);
    if (g.tangential()) {
        l.x_step = g.tangential()->step() / opt.inner_refine;
        l.xp_window = inner_rule(g.tangential()->a(), g.tangential()->b(), l.x_step, opt.cell_points);
    } else {
        l.x_step = 1.0;
        l.xp_window.nodes = {0.0};
        l.xp_window.weights = {1.0};
    }
    return l;
}

double component_power(const BoundaryData& g, std::size_t c, const Layout& l, double p, int dt, int dxp) {
    double s = 0.0;
    for (std::size_t i = 0; i < l.t_window.nodes.size(); ++i) {
        for (std::size_t j = 0; j < l.xp_window.nodes.size(); ++j) {
            s += l.t_window.weights[i] * l.xp_window.weights[j] *
                 abs_pow(g.eval(c, l.t_window.nodes[i], l.xp_window.nodes[j], dt, dxp), p);
        }
    }
    return s;
}

// Seminorm along one axis (0 = time, 1 = tangential) with kernel exponent
// 1 + sigma, for one component; returns p-th powers.
SeminormValue axis_seminorm_power(const BoundaryData& g, std::size_t c, int axis, double sigma, bool whole_line,
                                  const Layout& l, const SeminormOptions& opt, double p) {
    double lo = 0.0;
    double hi = 0.0;
    if (axis == 0) {
        if (whole_line) {
            std::tie(lo, hi) = g.time_support();
        } else {
            lo = g.time().a();
            hi = g.time().b();
        }
    } else {
        lo = g.tangential()->a();
        hi = g.tangential()->b();
    }
    const double length = hi - lo;
    SeminormValue out;
    if (!(length > opt.quad.tau_min)) return out;
    const double h = axis == 0 ? l.t_step : l.x_step;
    const NodeRule& other = axis == 0 ? l.xp_window : l.t_window;

    // Separable plane data: tabulate the factor along the other axis once.
    const auto* terms = g.kind() == BoundaryKind::Plane ? g.terms() : nullptr;
    if (const auto* all = g.terms()) {
        // Profiles constant along the axis have no differences at any shift.
        const bool flat = std::all_of(all->begin(), all->end(), [&](const BoundaryTerm& term) {
            return (axis == 0 ? term.time : term.tangential).kind == Profile1D::Kind::Constant;
        });
        if (flat) return out;
    }
    std::vector<std::vector<double>> table;
    if (terms) {
        for (const auto& term : *terms) {
            std::vector<double> row(other.nodes.size());
            for (std::size_t j = 0; j < row.size(); ++j) {
                row[j] = term.amplitude *
                         (axis == 0 ? term.tangential.eval(other.nodes[j]) : term.time.eval(other.nodes[j]));
            }
            table.push_back(std::move(row));
        }
    }
    std::vector<double> diff(terms ? terms->size() : 0);

    auto shifted_power = [&](double s) {
        const double a = whole_line ? lo - s : lo;
        const double b = whole_line ? hi : hi - s;
        const NodeRule along = inner_rule(a, b, h, opt.cell_points);
        double sum = 0.0;
        for (std::size_t i = 0; i < along.nodes.size(); ++i) {
            const double z = along.nodes[i];
            double inner = 0.0;
            if (terms) {
                bool any = false;
                for (std::size_t k = 0; k < diff.size(); ++k) {
                    const auto& f = axis == 0 ? (*terms)[k].time : (*terms)[k].tangential;
                    diff[k] = f.eval(z + s) - f.eval(z);
                    any = any || diff[k] != 0.0;
                }
                if (!any) continue;
                for (std::size_t j = 0; j < other.nodes.size(); ++j) {
                    double d = 0.0;
                    for (std::size_t k = 0; k < diff.size(); ++k) d += diff[k] * table[k][j];
                    inner += other.weights[j] * abs_pow(d, p);
                }
            } else {
                for (std::size_t j = 0; j < other.nodes.size(); ++j) {
                    const double y = other.nodes[j];
                    const double d =
                        axis == 0 ? g.eval(c, z + s, y) - g.eval(c, z, y) : g.eval(c, y, z + s) - g.eval(c, y, z);
                    inner += other.weights[j] * abs_pow(d, p);
                }
            }
            sum += along.weights[i] * inner;
        }
        return sum;
    };
    auto integrand = [&](double s) { return 2.0 * std::pow(s, -1.0 - sigma) * shifted_power(s); };
    const auto q = integrate_loggraded(integrand, opt.quad.tau_min, length, opt.quad);
    out.value = q.value;
    out.error_estimate = q.error_estimate;
    if (whole_line) {
        // Shifts beyond the support length separate the two copies exactly.
        const double mass = component_power(g, c, l, p, 0, 0);
        out.value += 4.0 * mass * std::pow(length, -sigma) / sigma;
    }
    const double lip = axis == 0 ? component_power(g, c, l, p, 1, 0) : component_power(g, c, l, p, 0, 1);
    out.truncation_bound = 2.0 * lip * std::pow(opt.quad.tau_min, p - sigma) / (p - sigma);
    return out;
}

SeminormValue finish(const std::vector<SeminormValue>& powers, double p) {
    SeminormValue r;
    for (const auto& v : powers) {
        const double norm = std::pow(v.value, 1.0 / p);
        r.value += norm;
        if (v.value > 0.0) {
            r.error_estimate += norm / (p * v.value) * v.error_estimate;
            r.truncation_bound += norm / (p * v.value) * v.truncation_bound;
        }
    }
    return r;
}

}  // namespace

SeminormValue time_seminorm(const BoundaryData& g, const WeightParams& w, const SeminormOptions& opt) {
    if (g.n() != w.n()) throw DimensionMismatch("boundary data and weight dimensions differ");
    opt.quad.validate();
    const bool whole = resolve(opt.time_mode, g) == TimeMode::WholeLine;
    const auto l = make_layout(g, opt);
    std::vector<SeminormValue> parts;
    for (std::size_t c = 0; c < g.components(); ++c) {
        parts.push_back(axis_seminorm_power(g, c, 0, 0.5 * w.sp(), whole, l, opt, w.p()));
    }
    return finish(parts, w.p());
}

SeminormValue space_seminorm(const BoundaryData& g, const WeightParams& w, const SeminormOptions& opt) {
    if (g.kind() != BoundaryKind::Plane || w.n() != 2) {
        throw DimensionMismatch("the spatial seminorm exists only for n = 2 plane data");
    }
    opt.quad.validate();
    const auto l = make_layout(g, opt);
    return finish({axis_seminorm_power(g, 0, 1, w.sp(), true, l, opt, w.p())}, w.p());
}

double boundary_lp_norm(const BoundaryData& g, const WeightParams& w, const SeminormOptions& opt) {
    const auto l = make_layout(g, opt);
    double s = 0.0;
    for (std::size_t c = 0; c < g.components(); ++c) s += std::pow(component_power(g, c, l, w.p(), 0, 0), 1.0 / w.p());
    return s;
}

bool zero_compatible(const BoundaryData& g, TimeMode mode, double tol) {
    const bool whole = resolve(mode, g) == TimeMode::WholeLine;
    const std::size_t np = g.np();
    const std::size_t nt = g.time().size();
    for (std::size_t c = 0; c < g.components(); ++c) {
        const auto& v = g.values(c);
        double peak = 0.0;
        for (double x : v) peak = std::max(peak, std::abs(x));
        const double limit = tol * std::max(peak, 1e-300);
        for (std::size_t ip = 0; ip < np; ++ip) {
            if (std::abs(v[ip]) > limit) return false;
            if (whole && std::abs(v[(nt - 1) * np + ip]) > limit) return false;
        }
    }
    return true;
}

NormReport slobodeckij_norm(const BoundaryData& g, const WeightParams& w, const SeminormOptions& opt) {
    NormReport r;
    r.grid_hash = descriptor_hash(g.describe());
    const double lp = boundary_lp_norm(g, w, opt);
    const auto ts = time_seminorm(g, w, opt);
    r.add("lp", lp);
    r.add("time_seminorm", ts.value, ts.error_estimate + ts.truncation_bound);
    r.total = lp + ts.value;
    if (g.kind() == BoundaryKind::Plane) {
        const auto ss = space_seminorm(g, w, opt);
        r.add("space_seminorm", ss.value, ss.error_estimate + ss.truncation_bound);
        r.total += ss.value;
    }
    r.degenerate = r.total == 0.0;
    const TimeMode mode = resolve(opt.time_mode, g);
    r.notes.emplace_back("time_mode", mode == TimeMode::WholeLine ? "whole_line" : "window");
    r.notes.emplace_back("zero_compatible", zero_compatible(g, mode) ? "true" : "false");
    std::ostringstream sp;
    sp.precision(17);
    sp << w.sp();
    r.notes.emplace_back("sp", sp.str());
    if (w.sp() >= 2.0) r.notes.emplace_back("sp_ge_2", "zero-compatible subspace is proper");
    return r;
}

// ---------------------------------------------------------------------------

void write_boundary_csv(const std::string& path, const BoundaryData& g) {
    std::ofstream out(path);
    if (!out) throw ValidationError("cannot write " + path);
    out << std::setprecision(17);
    out << "t,xp,value\n";
    const std::size_t np = g.np();
    for (std::size_t c = 0; c < g.components(); ++c) {
        const auto& v = g.values(c);
        for (std::size_t it = 0; it < g.time().size(); ++it) {
            for (std::size_t ip = 0; ip < np; ++ip) {
                double xp = 0.0;
                if (g.kind() == BoundaryKind::Plane) xp = g.tangential()->node(ip);
                if (g.kind() == BoundaryKind::IntervalPair) xp = static_cast<double>(c);
                out << g.time().node(it) << "," << xp << "," << v[it * np + ip] << "\n";
            }
        }
    }
    nlohmann::ordered_json meta;
    meta["kind"] = g.kind() == BoundaryKind::Line ? "line" : g.kind() == BoundaryKind::Plane ? "plane" : "pair";
    meta["t_min"] = g.time().a();
    meta["t_max"] = g.time().b();
    meta["t_cells"] = g.time().cells();
    meta["t_step"] = g.time().step();
    if (g.tangential()) {
        meta["xp_min"] = g.tangential()->a();
        meta["xp_max"] = g.tangential()->b();
        meta["xp_cells"] = g.tangential()->cells();
        meta["xp_step"] = g.tangential()->step();
    }
    std::ofstream m(path + ".meta.json");
    if (!m) throw ValidationError("cannot write " + path + ".meta.json");
    m << meta.dump(2) << "\n";
}

BoundaryData read_boundary_csv(const std::string& path) {
    std::ifstream mf(path + ".meta.json");
    if (!mf) throw ValidationError("missing metadata sidecar " + path + ".meta.json");
    nlohmann::json meta;
    try {
        mf >> meta;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("malformed metadata: ") + e.what());
    }
    const std::string kind = meta.at("kind").get<std::string>();
    UniformAxis time(meta.at("t_min").get<double>(), meta.at("t_max").get<double>(), meta.at("t_cells").get<int>());
    std::optional<UniformAxis> tang;
    if (kind == "plane") {
        tang = UniformAxis(meta.at("xp_min").get<double>(), meta.at("xp_max").get<double>(),
                           meta.at("xp_cells").get<int>());
    }
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read " + path);
    std::string line;
    std::getline(in, line);
    if (line != "t,xp,value") throw ValidationError("boundary CSV must start with the header t,xp,value");
    std::vector<double> vals;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::string a, b, c;
        if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',') || !std::getline(ls, c)) {
            throw ValidationError("malformed CSV row: " + line);
        }
        try {
            vals.push_back(std::stod(c));
        } catch (const std::exception&) {
            throw ValidationError("non-numeric CSV value: " + c);
        }
    }
    const std::size_t nt = time.size();
    const std::size_t np = tang ? tang->size() : 1;
    if (kind == "line") {
        if (vals.size() != nt) throw DimensionMismatch("CSV row count does not match the metadata");
        return BoundaryData::line(time, std::move(vals));
    }
    if (kind == "plane") {
        if (vals.size() != nt * np) throw DimensionMismatch("CSV row count does not match the metadata");
        return BoundaryData::plane(time, *tang, std::move(vals));
    }
    if (kind == "pair") {
        if (vals.size() != 2 * nt) throw DimensionMismatch("CSV row count does not match the metadata");
        std::vector<double> left(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(nt));
        std::vector<double> right(vals.begin() + static_cast<std::ptrdiff_t>(nt), vals.end());
        return BoundaryData::pair(time, std::move(left), std::move(right));
    }
    throw ValidationError("unknown boundary kind '" + kind + "'");
}

}  // namespace wtrace

#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "wtrace/boundary_norms.hpp"
#include "wtrace/bvp1d.hpp"
#include "wtrace/grid_function.hpp"
#include "wtrace/trace_repr.hpp"

namespace wtrace {

/// mt19937_64 with a fixed mapping to doubles, so a seed gives the same
/// battery on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) from the top 53 bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double a, double b) { return a + (b - a) * uniform(); }
    double log_uniform(double a, double b);
    double sign() { return uniform() < 0.5 ? -1.0 : 1.0; }

private:
    std::mt19937_64 engine_;
};

/// out[i] = fn(i) for i < count on up to `threads` workers (0 = hardware
/// count). The first exception by index is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t count, unsigned threads, const std::function<T(std::size_t)>& fn) {
    std::vector<std::optional<T>> slots(count);
    std::vector<std::exception_ptr> errors(count);
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (threads <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (unsigned k = 0; k < threads; ++k) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    std::vector<T> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

struct LabelledData {
    std::string label;
    BoundaryData g;
};

/// Boundary data made of one time bump (center in [0.6, 1.4], half-width in
/// [0.5, 1]); plane data multiply by a Gaussian or odd Gaussian in x'.
std::vector<LabelledData> bump_battery(Rng& rng, std::size_t size, int n, const UniformAxis& time,
                                       const std::optional<UniformAxis>& tangential = std::nullopt);

/// A field given by separable terms, to be sampled on any grid.
struct FieldMember {
    std::string label;
    std::shared_ptr<const SeparableField> model;
};

/// Boundary-hugging functions A T(t) [G(x1 / b) + k O(x1 / b)] Y(x'), where G
/// is the Gaussian and O the odd Gaussian profile, b log-uniform in
/// [scale_min, scale_max], k uniform in [-1, 1].
std::vector<FieldMember> trace_members(Rng& rng, std::size_t size, int n, double scale_min, double scale_max);

/// Samples members on a grid with the flux representation g1 = -int u_t and
/// the direct u_t.
std::vector<TraceCase> sample_members(const std::vector<FieldMember>& members,
                                      std::shared_ptr<const SpaceTimeGrid> grid);

/// Static boundary-vanishing functions of x1 (x e^{-x/b}, x^2 e^{-x/b},
/// (1 - e^{-x/b}) e^{-x}, x e^{-(x/b)^2}, x / (1 + x/b)^4), cycled.
struct StaticMember {
    std::string label;
    std::shared_ptr<const FieldModel> model;
};
std::vector<StaticMember> hardy_members(Rng& rng, std::size_t size);

/// The fixed Hardy case u = x e^{-x}.
StaticMember hardy_reference_member();

struct BvpMember {
    std::string label;
    BvpProblem problem;
};

/// Problems with smooth f (or f1), bump boundary data supported in (0, T),
/// and bounded b, c (b-tilde for the divergence form).
std::vector<BvpMember> bvp_members(Rng& rng, std::size_t size, BvpForm form, double T, const WeightParams& w);

}  // namespace wtrace

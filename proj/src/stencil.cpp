#include "wtrace/stencil.hpp"

#include <algorithm>

namespace wtrace {

std::vector<double> fd_weights(double z, std::span<const double> x, int order) {
    const int n = static_cast<int>(x.size());
    const int m = order;
    // c[j][k]: weight of node j for derivative k.
    std::vector<std::vector<double>> c(n, std::vector<double>(m + 1, 0.0));
    double c1 = 1.0;
    double c4 = x[0] - z;
    c[0][0] = 1.0;
    for (int i = 1; i < n; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        const double c5 = c4;
        c4 = x[i] - z;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k) {
                    c[i][k] = c1 * (k * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for (int k = mn; k >= 1; --k) {
                c[j][k] = (c4 * c[j][k] - k * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    std::vector<double> w(n);
    for (int j = 0; j < n; ++j) w[j] = c[j][m];
    return w;
}

std::size_t stencil_start(std::size_t i, std::size_t count, std::size_t width) {
    if (width >= count) return 0;
    const std::size_t half = width / 2;
    std::size_t start = i >= half ? i - half : 0;
    if (start + width > count) start = count - width;
    return start;
}

std::size_t locate(std::span<const double> nodes, double y) {
    if (nodes.size() < 2) return 0;
    auto it = std::upper_bound(nodes.begin(), nodes.end(), y);
    std::size_t k = it == nodes.begin() ? 0 : static_cast<std::size_t>(it - nodes.begin()) - 1;
    return std::min(k, nodes.size() - 2);
}

}  // namespace wtrace

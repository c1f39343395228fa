#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <Eigen/Core>

#include "smem/error.hpp"

namespace smem {

// Kendall rank correlation between two score vectors. With tied scores the
// tau-b correction applies; for strict rankings this reduces to
// (concordant - discordant) / (n(n-1)/2).
template <typename DerivedA, typename DerivedB>
double kendall_tau(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    const Eigen::Index n = a.size();
    if (n != b.size()) throw data_error("kendall_tau: length mismatch");
    if (n < 2) throw data_error("kendall_tau: need at least 2 items");
    long long concordant = 0, discordant = 0, ties_a = 0, ties_b = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double da = static_cast<double>(a[i]) - static_cast<double>(a[j]);
            const double db = static_cast<double>(b[i]) - static_cast<double>(b[j]);
            if (da == 0.0 && db == 0.0) continue;
            if (da == 0.0) ++ties_a;
            else if (db == 0.0) ++ties_b;
            else if (da * db > 0.0) ++concordant;
            else ++discordant;
        }
    }
    const double n0 = static_cast<double>(n) * (n - 1) / 2.0;
    const double denom = std::sqrt((n0 - static_cast<double>(ties_a)) * (n0 - static_cast<double>(ties_b)));
    if (denom == 0.0) return 0.0;
    return static_cast<double>(concordant - discordant) / denom;
}

namespace detail {

// Average ranks (1-based) with ties sharing their mean rank.
template <typename Derived>
Eigen::VectorXd average_ranks(const Eigen::MatrixBase<Derived>& v) {
    const Eigen::Index n = v.size();
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return v[x] < v[y]; });
    Eigen::VectorXd ranks(n);
    Eigen::Index i = 0;
    while (i < n) {
        Eigen::Index j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (Eigen::Index k = i; k <= j; ++k) ranks[order[k]] = r;
        i = j + 1;
    }
    return ranks;
}

} // namespace detail

// Spearman rank correlation: Pearson correlation of average ranks.
template <typename DerivedA, typename DerivedB>
double spearman_rho(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
    if (a.size() != b.size()) throw data_error("spearman_rho: length mismatch");
    if (a.size() < 2) throw data_error("spearman_rho: need at least 2 items");
    const Eigen::VectorXd ra = detail::average_ranks(a);
    const Eigen::VectorXd rb = detail::average_ranks(b);
    const Eigen::VectorXd ca = ra.array() - ra.mean();
    const Eigen::VectorXd cb = rb.array() - rb.mean();
    const double va = ca.squaredNorm(), vb = cb.squaredNorm();
    if (va == 0.0 || vb == 0.0) return 0.0;
    return ca.dot(cb) / std::sqrt(va * vb);
}

inline double kendall_tau(const std::vector<double>& a, const std::vector<double>& b) {
    return kendall_tau(Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size())),
                       Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size())));
}

inline double spearman_rho(const std::vector<double>& a, const std::vector<double>& b) {
    return spearman_rho(Eigen::Map<const Eigen::VectorXd>(a.data(), static_cast<Eigen::Index>(a.size())),
                        Eigen::Map<const Eigen::VectorXd>(b.data(), static_cast<Eigen::Index>(b.size())));
}

// Area dominated by a 2-D point set (both objectives minimized) and bounded
// by `ref`. Points with any coordinate >= the reference are discarded;
// rectangles are summed over the non-dominated subset sorted on the first
// objective.
inline double hypervolume_2d(std::vector<Eigen::Vector2d> points, const Eigen::Vector2d& ref) {
    std::erase_if(points, [&](const Eigen::Vector2d& p) { return p.x() >= ref.x() || p.y() >= ref.y(); });
    if (points.empty()) return 0.0;
    std::sort(points.begin(), points.end(), [](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
        return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
    });
    double hv = 0.0;
    double prev_x = points.front().x();
    double best_y = points.front().y();
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].y() >= best_y) continue; // dominated
        hv += (points[i].x() - prev_x) * (ref.y() - best_y);
        prev_x = points[i].x();
        best_y = points[i].y();
    }
    hv += (ref.x() - prev_x) * (ref.y() - best_y);
    return hv;
}

} // namespace smem

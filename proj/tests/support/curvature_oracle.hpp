#pragma once

// Brute-force scalar curvature of a coordinate metric: Christoffel symbols by
// centered differences of g, Ricci by centered differences of the
// Christoffels. Knows nothing about warped products.

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Metric = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

namespace detail {

// five-point first derivative of g along coordinate c
inline Eigen::MatrixXd dmetric(const Metric& g, const Eigen::VectorXd& x, int c, double h) {
    auto at = [&](double k) {
        Eigen::VectorXd y = x;
        y[c] += k * h;
        return g(y);
    };
    return (at(-2) - 8.0 * at(-1) + 8.0 * at(1) - at(2)) / (12.0 * h);
}

// Γ[a](b, c) = Γ^a_{bc}
inline std::vector<Eigen::MatrixXd> christoffel(const Metric& g, const Eigen::VectorXd& x, double h) {
    const int d = static_cast<int>(x.size());
    const Eigen::MatrixXd inv = g(x).inverse();
    std::vector<Eigen::MatrixXd> dg;
    for (int c = 0; c < d; ++c) dg.push_back(dmetric(g, x, c, h));
    std::vector<Eigen::MatrixXd> gam(d, Eigen::MatrixXd::Zero(d, d));
    for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
            for (int c = 0; c < d; ++c) {
                double sum = 0.0;
                for (int e = 0; e < d; ++e) sum += inv(a, e) * (dg[b](e, c) + dg[c](e, b) - dg[e](b, c));
                gam[a](b, c) = 0.5 * sum;
            }
    return gam;
}

}  // namespace detail

inline double scalar_curvature(const Metric& g, const Eigen::VectorXd& x, double h = 1e-3) {
    const int d = static_cast<int>(x.size());
    const auto gam = detail::christoffel(g, x, h);
    // ∂_c Γ^a_{bd}
    std::vector<std::vector<Eigen::MatrixXd>> dgam(d);
    for (int c = 0; c < d; ++c) {
        auto at = [&](double k) {
            Eigen::VectorXd y = x;
            y[c] += k * h;
            return detail::christoffel(g, y, h);
        };
        const auto m2 = at(-2), m1 = at(-1), p1 = at(1), p2 = at(2);
        for (int a = 0; a < d; ++a) dgam[c].push_back((m2[a] - 8.0 * m1[a] + 8.0 * p1[a] - p2[a]) / (12.0 * h));
    }
    Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(d, d);
    for (int b = 0; b < d; ++b)
        for (int e = 0; e < d; ++e) {
            double sum = 0.0;
            for (int a = 0; a < d; ++a) {
                sum += dgam[a][a](b, e) - dgam[e][a](b, a);
                for (int c = 0; c < d; ++c) sum += gam[a](a, c) * gam[c](b, e) - gam[a](e, c) * gam[c](b, a);
            }
            ric(b, e) = sum;
        }
    return (g(x).inverse() * ric).trace();
}

/// -ds² + r(s)² times the round metric on S^{k}, in hyperspherical angles.
inline Metric warped_metric(std::function<double(double)> r, int k) {
    return [r, k](const Eigen::VectorXd& x) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(k + 1, k + 1);
        g(0, 0) = -1.0;
        double w = r(x[0]) * r(x[0]);
        for (int i = 0; i < k; ++i) {
            g(i + 1, i + 1) = w;
            w *= std::sin(x[i + 1]) * std::sin(x[i + 1]);
        }
        return g;
    };
}

}  // namespace oracle

// Gauss-Legendre quadrature via the Golub-Welsch eigenvalue method.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <vector>

namespace seadvr {

/// Gauss-Legendre rule on [-1, 1]. Nodes/weights are eigenvalues and scaled
/// first eigenvector components of the Jacobi matrix of Legendre polynomials.
class GaussLegendre {
public:
    explicit GaussLegendre(int n) {
        if (n < 1) throw std::invalid_argument("GaussLegendre: n >= 1 required");
        Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
        for (int k = 1; k < n; ++k)
            sub[k - 1] = k / std::sqrt(4.0 * k * k - 1.0);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
        es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
        nodes_.resize(n);
        weights_.resize(n);
        for (int i = 0; i < n; ++i) {
            nodes_[i] = es.eigenvalues()[i];
            double v0 = es.eigenvectors()(0, i);
            weights_[i] = 2.0 * v0 * v0;
        }
    }

    int size() const { return static_cast<int>(nodes_.size()); }
    const std::vector<double>& nodes() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    /// Integrate f over [a, b] with this rule.
    template <class F>
    auto integrate(F&& f, double a, double b) const {
        using R = decltype(f(a));
        double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        R acc{};
        for (int i = 0; i < size(); ++i)
            acc += R(weights_[i] * half) * f(mid + half * nodes_[i]);
        return acc;
    }

    /// Composite rule: [a, b] split into `panels` equal panels.
    template <class F>
    auto integrate_composite(F&& f, double a, double b, int panels) const {
        using R = decltype(f(a));
        R acc{};
        double w = (b - a) / panels;
        for (int p = 0; p < panels; ++p)
            acc += integrate(f, a + p * w, a + (p + 1) * w);
        return acc;
    }

private:
    std::vector<double> nodes_, weights_;
};

}  // namespace seadvr

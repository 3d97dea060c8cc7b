// Discrete variable representation basis on [0, L_eff].
//
// The auxiliary basis phi_i(z) = sqrt(2/L) sin((2i-1) pi z / (2L)) satisfies
// the surface Dirichlet and bottom Neumann conditions. Diagonalizing the
// position-like matrix Z_mn = <phi_m | cos(pi z / L) | phi_n> (tridiagonal)
// yields cardinal functions chi_j pinned to an equispaced grid z_j = j*dz,
// dz = L/(j_max + 1/2), so expansion coefficients equal sqrt(dz) times the
// field values at the grid depths.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "seadvr/env.hpp"
#include "seadvr/quadrature.hpp"

namespace seadvr {

struct DvrBasis {
    int j_max = 0;
    double L_eff = 0.0;              // effective bottom depth (m)
    double dz = 0.0;                 // grid spacing (m)
    std::vector<double> grid_depths; // z_j, ascending, j = 1..j_max
    std::vector<double> eigenvalues; // f_j, descending (f_j = cos(pi z_j / L_eff))
    Eigen::MatrixXd eigvecs;         // V; column j-1 holds eigenvector V_j

    double depth(int j) const { return grid_depths.at(j - 1); }
};

/// Auxiliary harmonic phi_i(z), i >= 1, on [0, L_eff].
inline double eval_phi(int i, double z, double L_eff) {
    if (i < 1) throw std::invalid_argument("eval_phi: index must be >= 1");
    return std::sqrt(2.0 / L_eff) * std::sin((2 * i - 1) * kPi * z / (2.0 * L_eff));
}

/// Analytic construction: f_j = cos(j pi / (j_max + 1/2)), z_j = j*dz with
/// dz = L_eff/(j_max + 1/2), V_ij = sqrt(2/(j_max+1/2)) sin((i-1/2) j pi / (j_max+1/2)).
/// Verified against build_dvr_numeric, which diagonalizes the Z matrix directly.
inline DvrBasis build_dvr(int j_max, double L_eff) {
    if (j_max < 1) throw std::invalid_argument("build_dvr: j_max >= 1 required");
    if (!(L_eff > 0.0)) throw std::invalid_argument("build_dvr: L_eff > 0 required");
    DvrBasis b;
    b.j_max = j_max;
    b.L_eff = L_eff;
    double denom = j_max + 0.5;
    b.dz = L_eff / denom;
    b.grid_depths.resize(j_max);
    b.eigenvalues.resize(j_max);
    b.eigvecs.resize(j_max, j_max);
    double norm = std::sqrt(2.0 / denom);
    for (int j = 1; j <= j_max; ++j) {
        b.eigenvalues[j - 1] = std::cos(j * kPi / denom);
        b.grid_depths[j - 1] = j * b.dz;
        for (int i = 1; i <= j_max; ++i)
            b.eigvecs(i - 1, j - 1) = norm * std::sin((i - 0.5) * j * kPi / denom);
    }
    return b;
}

/// Numeric construction: assemble Z_mn by quadrature, verify tridiagonality,
/// diagonalize, sort eigenvalues descending (depths ascending), fix the sign of
/// each eigenvector so its first nonzero component is positive, and map depths
/// z_j = (L_eff/pi) acos(f_j). Ground-truth oracle for build_dvr.
inline DvrBasis build_dvr_numeric(int j_max, double L_eff) {
    if (j_max < 1) throw std::invalid_argument("build_dvr_numeric: j_max >= 1 required");
    if (!(L_eff > 0.0)) throw std::invalid_argument("build_dvr_numeric: L_eff > 0 required");

    // One global rule suffices: the integrands are trig polynomials whose total
    // phase over [0, L] stays below (2*j_max + 1) pi.
    GaussLegendre gl(2 * j_max + 32);
    int nq = gl.size();
    Eigen::MatrixXd phi_at(j_max, nq);   // phi_i at quadrature nodes
    Eigen::VectorXd wf(nq);              // weight * cos(pi z / L)
    for (int q = 0; q < nq; ++q) {
        double z = 0.5 * L_eff * (1.0 + gl.nodes()[q]);
        wf[q] = 0.5 * L_eff * gl.weights()[q] * std::cos(kPi * z / L_eff);
        for (int i = 1; i <= j_max; ++i)
            phi_at(i - 1, q) = eval_phi(i, z, L_eff);
    }
    Eigen::MatrixXd Z = phi_at * wf.asDiagonal() * phi_at.transpose();

    for (int m = 0; m < j_max; ++m)
        for (int n = 0; n < j_max; ++n)
            if (std::abs(m - n) > 1 && std::abs(Z(m, n)) > 1e-10)
                throw std::runtime_error("build_dvr_numeric: Z is not tridiagonal");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Z);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("build_dvr_numeric: eigensolver failed");

    DvrBasis b;
    b.j_max = j_max;
    b.L_eff = L_eff;
    b.grid_depths.resize(j_max);
    b.eigenvalues.resize(j_max);
    b.eigvecs.resize(j_max, j_max);
    // Eigen returns eigenvalues ascending; reverse for descending f_j.
    for (int j = 0; j < j_max; ++j) {
        int src = j_max - 1 - j;
        double fj = std::clamp(es.eigenvalues()[src], -1.0, 1.0);
        b.eigenvalues[j] = fj;
        b.grid_depths[j] = L_eff / kPi * std::acos(fj);
        Eigen::VectorXd v = es.eigenvectors().col(src);
        for (int i = 0; i < j_max; ++i) {
            if (std::abs(v[i]) > 1e-12) {
                if (v[i] < 0.0) v = -v;
                break;
            }
        }
        b.eigvecs.col(j) = v;
    }
    double span = b.grid_depths.back() - b.grid_depths.front();
    b.dz = j_max > 1 ? span / (j_max - 1) : b.grid_depths.front();
    return b;
}

/// Cardinal function chi_j(z) = sum_i V_ij phi_i(z); localized near z_j and
/// satisfying chi_j(z_i) * sqrt(dz) = delta_ij.
inline double eval_chi(const DvrBasis& b, int j, double z) {
    if (j < 1 || j > b.j_max) throw std::invalid_argument("eval_chi: index out of range");
    double acc = 0.0;
    for (int i = 1; i <= b.j_max; ++i)
        acc += b.eigvecs(i - 1, j - 1) * eval_phi(i, z, b.L_eff);
    return acc;
}

/// Continuous profile reconstructed from pointwise samples:
/// Psi(z) = sqrt(dz) * sum_{j<=J} samples_j chi_j(z), evaluated through the
/// phi expansion (coefficients c_i = sqrt(dz) sum_j V_ij samples_j).
class ReconstructedProfile {
public:
    ReconstructedProfile(double L_eff, Eigen::VectorXcd phi_coeffs)
        : L_eff_(L_eff), coeffs_(std::move(phi_coeffs)) {}

    std::complex<double> operator()(double z) const {
        std::complex<double> acc{0.0, 0.0};
        for (int i = 0; i < coeffs_.size(); ++i)
            acc += coeffs_[i] * eval_phi(i + 1, z, L_eff_);
        return acc;
    }

    /// Batch evaluation (one sin per (i, z), vectorized over z).
    std::vector<std::complex<double>> evaluate(std::span<const double> zs) const {
        std::vector<std::complex<double>> out(zs.size(), {0.0, 0.0});
        for (int i = 0; i < coeffs_.size(); ++i) {
            double k = (2 * (i + 1) - 1) * kPi / (2.0 * L_eff_);
            double amp = std::sqrt(2.0 / L_eff_);
            for (std::size_t q = 0; q < zs.size(); ++q)
                out[q] += coeffs_[i] * (amp * std::sin(k * zs[q]));
        }
        return out;
    }

    double effective_depth() const { return L_eff_; }
    const Eigen::VectorXcd& phi_coefficients() const { return coeffs_; }

private:
    double L_eff_;
    Eigen::VectorXcd coeffs_;
};

/// Reconstruct from samples taken at consecutive grid depths z_1..z_J.
/// Grid depths j > J (below the array) contribute zero.
inline ReconstructedProfile reconstruct(const DvrBasis& b,
                                        std::span<const std::complex<double>> samples) {
    int J = static_cast<int>(samples.size());
    if (J > b.j_max)
        throw std::invalid_argument("reconstruct: more samples than basis functions");
    Eigen::VectorXcd s(J);
    for (int j = 0; j < J; ++j) s[j] = samples[j];
    Eigen::VectorXcd coeffs = std::sqrt(b.dz) * (b.eigvecs.leftCols(J) * s);
    return {b.L_eff, std::move(coeffs)};
}

/// Bandwidth defect eps = | sum_{j<=j_max} |a_j|^2 - int |Psi|^2 dz | with
/// a_j = int phi_j Psi dz. Zero iff Psi lies in span{phi_1..phi_j_max}.
inline double bandwidth_defect(const std::function<std::complex<double>(double)>& field,
                               int j_max, double L_eff) {
    if (j_max < 1) throw std::invalid_argument("bandwidth_defect: j_max >= 1 required");
    GaussLegendre gl(16);
    int panels = std::max(32, 4 * j_max);
    double sum_aj = 0.0;
    for (int j = 1; j <= j_max; ++j) {
        auto a = gl.integrate_composite(
            [&](double z) { return field(z) * eval_phi(j, z, L_eff); }, 0.0, L_eff, panels);
        sum_aj += std::norm(a);
    }
    double norm2 = gl.integrate_composite(
        [&](double z) { return std::norm(field(z)); }, 0.0, L_eff, panels);
    return std::abs(sum_aj - norm2);
}

/// Fictitious depth L' = (j_max + 1/2) * dz for an arbitrary desired spacing.
inline double effective_depth(double dz_desired, int j_max) {
    if (!(dz_desired > 0.0)) throw std::invalid_argument("effective_depth: dz > 0 required");
    if (j_max < 1) throw std::invalid_argument("effective_depth: j_max >= 1 required");
    return (j_max + 0.5) * dz_desired;
}

}  // namespace seadvr

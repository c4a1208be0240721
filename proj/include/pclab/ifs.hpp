#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "pclab/errors.hpp"
#include "pclab/geometry.hpp"
#include "pclab/norms.hpp"

namespace pclab {

using Label = int;
using Word = std::vector<Label>; // itinerary word, first symbol applied first

inline std::string word_to_string(const Word& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(w[i]);
    }
    return s;
}

// One affine branch x -> Lambda x + b together with its contraction factor in
// the configured norm. lip is an upper bound: compositions carry the product
// of factors, which dominates the operator norm of the product.
struct AffineContraction {
    Eigen::MatrixXd Lambda;
    Eigen::VectorXd b;
    double lip = 0.0;

    int dim() const { return static_cast<int>(b.size()); }

    Eigen::VectorXd operator()(const Eigen::VectorXd& x) const { return Lambda * x + b; }

    // scalar fast path for 1-D maps
    double apply1(double x) const { return Lambda(0, 0) * x + b(0); }
};

inline AffineContraction make_contraction(Eigen::MatrixXd Lambda, Eigen::VectorXd b,
                                          const Norm& norm = Norm()) {
    if (Lambda.rows() != Lambda.cols() || Lambda.rows() != b.size())
        throw ConfigError("affine contraction: Lambda must be d x d matching b");
    AffineContraction phi;
    phi.lip = norm.op(Lambda);
    phi.Lambda = std::move(Lambda);
    phi.b = std::move(b);
    if (!(phi.lip < 1.0))
        throw NotAContraction("branch map has contraction factor " + std::to_string(phi.lip));
    return phi;
}

inline AffineContraction make_contraction_1d(double slope, double intercept,
                                             const Norm& norm = Norm()) {
    Eigen::MatrixXd L(1, 1);
    Eigen::VectorXd v(1);
    L << slope;
    v << intercept;
    return make_contraction(std::move(L), std::move(v), norm);
}

// phi^alpha = phi_{i_{n-1}} o ... o phi_{i_0}: the last symbol is applied last.
inline AffineContraction compose(const std::vector<AffineContraction>& family,
                                 const Word& alpha) {
    if (alpha.empty()) throw UnknownLabel("compose: empty word");
    const int n_labels = static_cast<int>(family.size());
    for (Label s : alpha)
        if (s < 0 || s >= n_labels)
            throw UnknownLabel("compose: label " + std::to_string(s) + " outside family");
    const int d = family[static_cast<std::size_t>(alpha[0])].dim();
    AffineContraction acc;
    acc.Lambda = Eigen::MatrixXd::Identity(d, d);
    acc.b = Eigen::VectorXd::Zero(d);
    acc.lip = 1.0;
    for (Label s : alpha) {
        const AffineContraction& phi = family[static_cast<std::size_t>(s)];
        acc.Lambda = phi.Lambda * acc.Lambda;
        acc.b = phi.Lambda * acc.b + phi.b;
        acc.lip *= phi.lip;
    }
    return acc;
}

// Banach fixed point: solve (I - Lambda) x = b.
inline Eigen::VectorXd fixed_point(const AffineContraction& phi) {
    if (!(phi.lip < 1.0))
        throw NotAContraction("fixed_point: map has lip >= 1");
    const int d = phi.dim();
    Eigen::MatrixXd M = Eigen::MatrixXd::Identity(d, d) - phi.Lambda;
    Eigen::VectorXd x = M.fullPivLu().solve(phi.b);
    const double residual = (phi(x) - x).norm();
    if (residual > 1e-12 * (1.0 + x.norm()))
        throw CertificateInconsistent("fixed_point: residual " + std::to_string(residual));
    return x;
}

// phi(X) inside the relative interior of X: by convexity it is enough that the
// support of a_i over phi(X) stays strictly below b_i for every row i.
inline bool invariance_check(const AffineContraction& phi, const Polytope& X,
                             double min_slack = 1e-12) {
    geo_detail::ensure_bounded(X);
    const double box = geo_detail::lp_box_for(X, phi.b);
    for (int i = 0; i < X.rows(); ++i) {
        Eigen::VectorXd c = phi.Lambda.transpose() * X.A.row(i).transpose();
        LpResult lp = lp_maximize(X.A, X.b, c, box);
        if (lp.status != LpStatus::Optimal) throw DistanceToEmpty("invariance_check: X empty");
        const double image_support = lp.value + X.A.row(i).dot(phi.b);
        if (!(image_support < X.b(i) - min_slack)) return false;
    }
    return true;
}

} // namespace pclab

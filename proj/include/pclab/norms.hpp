#pragma once

#include <Eigen/Dense>

#include "pclab/errors.hpp"

namespace pclab {

// The metric used by contraction factors and certificate radii. Default is the
// Euclidean norm; a symmetric positive-definite weight W defines the
// alternative norm |x| = sqrt(x'Wx). Operator and dual norms are derived from
// the same W so that every certificate inequality lives in one metric.
class Norm {
  public:
    Norm() = default;

    static Norm euclidean() { return Norm(); }

    static Norm weighted(const Eigen::MatrixXd& W) {
        if (W.rows() != W.cols()) throw ConfigError("norm weight matrix must be square");
        if (!W.isApprox(W.transpose(), 1e-12)) throw ConfigError("norm weight matrix must be symmetric");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(W);
        if (es.eigenvalues().minCoeff() <= 0.0)
            throw ConfigError("norm weight matrix must be positive definite");
        Norm n;
        n.weighted_ = true;
        Eigen::VectorXd sqrt_ev = es.eigenvalues().cwiseSqrt();
        n.sqrt_w_ = es.eigenvectors() * sqrt_ev.asDiagonal() * es.eigenvectors().transpose();
        n.inv_sqrt_w_ = es.eigenvectors() * sqrt_ev.cwiseInverse().asDiagonal() *
                        es.eigenvectors().transpose();
        return n;
    }

    bool is_euclidean() const { return !weighted_; }

    double vec(const Eigen::VectorXd& x) const {
        return weighted_ ? (sqrt_w_ * x).norm() : x.norm();
    }

    // Induced operator norm: largest singular value of W^{1/2} L W^{-1/2}.
    double op(const Eigen::MatrixXd& L) const {
        Eigen::MatrixXd M = weighted_ ? Eigen::MatrixXd(sqrt_w_ * L * inv_sqrt_w_) : L;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
        return svd.singularValues().size() ? svd.singularValues()(0) : 0.0;
    }

    // Dual norm, so that dist(x, {<v,y>=c}) = |<v,x>-c| / dual(v).
    double dual(const Eigen::VectorXd& v) const {
        return weighted_ ? (inv_sqrt_w_ * v).norm() : v.norm();
    }

  private:
    bool weighted_ = false;
    Eigen::MatrixXd sqrt_w_, inv_sqrt_w_;
};

} // namespace pclab

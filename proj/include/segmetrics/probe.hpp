#pragma once

#include <Eigen/Core>

#include <cmath>

namespace segmetrics {

/// L2-regularised logistic loss in the inverse-regularisation convention:
///
///   J(w, b) = mean_i log(1 + exp(-s_i (x_i·w + b))) + ||w||² / (2·C·n),
///
/// with s_i = ±1 from labels in {0, 1}. The bias is not penalised.
template <typename Scalar>
struct LogisticObjective {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  const Matrix& features;  // n × d
  const Vector& labels;    // n, values in {0, 1}
  Scalar inverse_regularization;

  Scalar penalty() const {
    return Scalar(1) / (inverse_regularization * static_cast<Scalar>(features.rows()));
  }

  /// log(1 + exp(z)) without overflow.
  static Scalar softplus(Scalar z) {
    return z > Scalar(0) ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
  }

  static Scalar sigmoid(Scalar z) {
    if (z >= Scalar(0)) return Scalar(1) / (Scalar(1) + std::exp(-z));
    const Scalar e = std::exp(z);
    return e / (Scalar(1) + e);
  }

  Scalar value(const Vector& w, Scalar b) const {
    const Vector z = (features * w).array() + b;
    Scalar loss = 0;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      const Scalar sign = labels(i) > Scalar(0.5) ? Scalar(1) : Scalar(-1);
      loss += softplus(-sign * z(i));
    }
    return loss / static_cast<Scalar>(features.rows()) + Scalar(0.5) * penalty() * w.squaredNorm();
  }

  /// Gradient with respect to (w, b), packed as a (d+1)-vector.
  Vector gradient(const Vector& w, Scalar b) const {
    const Vector z = (features * w).array() + b;
    const Vector residual = z.unaryExpr([](Scalar v) { return sigmoid(v); }) - labels;
    const auto n = static_cast<Scalar>(features.rows());
    Vector g(w.size() + 1);
    g.head(w.size()) = features.transpose() * residual / n + penalty() * w;
    g(w.size()) = residual.sum() / n;
    return g;
  }

  /// Hessian with respect to (w, b).
  Matrix hessian(const Vector& w, Scalar b) const {
    const Vector z = (features * w).array() + b;
    const Vector s = z.unaryExpr([](Scalar v) {
      const Scalar p = sigmoid(v);
      return p * (Scalar(1) - p);
    });
    const auto n = static_cast<Scalar>(features.rows());
    const Eigen::Index d = w.size();
    Matrix h(d + 1, d + 1);
    const Matrix weighted = features.array().colwise() * s.array();
    h.topLeftCorner(d, d) = features.transpose() * weighted / n;
    h.topLeftCorner(d, d).diagonal().array() += penalty();
    const Vector cross = weighted.colwise().sum().transpose() / n;
    h.topRightCorner(d, 1) = cross;
    h.bottomLeftCorner(1, d) = cross.transpose();
    h(d, d) = s.sum() / n;
    return h;
  }
};

}  // namespace segmetrics

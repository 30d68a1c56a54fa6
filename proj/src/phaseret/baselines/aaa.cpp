#include "phaseret/baselines/aaa.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <string>

namespace phaseret::baselines {

Complex BarycentricModel::operator()(Complex z) const {
  Complex num{0.0, 0.0};
  Complex den{0.0, 0.0};
  for (std::size_t j = 0; j < support.size(); ++j) {
    if (z == support[j]) return values[j];
    const Complex c = weights[j] / (z - support[j]);
    num += c * values[j];
    den += c;
  }
  return num / den;
}

AaaResult aaa_fit(std::span<const Complex> points, std::span<const Complex> values, std::size_t max_support,
                  double tol) {
  const std::size_t n = points.size();
  require(values.size() == n, Errc::dimension_mismatch, "AAA: points and values differ in length");
  require(max_support >= 1, Errc::invalid_argument, "AAA: max_support must be at least 1");
  require(n >= max_support + 1, Errc::invalid_argument,
          "AAA needs at least max_support + 1 = " + std::to_string(max_support + 1) + " samples");
  require(tol >= 0.0, Errc::invalid_argument, "AAA: tolerance must be non-negative");
  require_finite(points, "AAA points");
  require_finite(values, "AAA values");
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      require(points[i] != points[k], Errc::invalid_argument, "AAA sample points must be distinct");
    }
  }
  double scale = 0.0;
  for (const Complex& v : values) scale = std::max(scale, std::abs(v));
  require(scale > 0.0, Errc::domain, "AAA: degenerate least-squares system (all values are zero)");

  Complex mean{0.0, 0.0};
  for (const Complex& v : values) mean += v;
  mean /= static_cast<double>(n);
  std::vector<Complex> approx(n, mean);
  std::vector<bool> is_support(n, false);

  AaaResult result;
  BarycentricModel& model = result.model;
  while (true) {
    std::size_t worst = n;
    double worst_err = -1.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (is_support[i]) continue;
      const double e = std::abs(values[i] - approx[i]);
      if (e > worst_err) {
        worst_err = e;
        worst = i;
      }
    }
    is_support[worst] = true;
    result.support_indices.push_back(worst);
    model.support.push_back(points[worst]);
    model.values.push_back(values[worst]);

    const std::size_t m = model.support.size();
    std::vector<std::size_t> rest;
    rest.reserve(n - m);
    for (std::size_t i = 0; i < n; ++i) {
      if (!is_support[i]) rest.push_back(i);
    }
    Eigen::MatrixXcd cauchy(static_cast<Eigen::Index>(rest.size()), static_cast<Eigen::Index>(m));
    Eigen::MatrixXcd loewner(cauchy.rows(), cauchy.cols());
    for (std::size_t r = 0; r < rest.size(); ++r) {
      for (std::size_t j = 0; j < m; ++j) {
        const Complex c = 1.0 / (points[rest[r]] - model.support[j]);
        cauchy(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = c;
        loewner(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = (values[rest[r]] - model.values[j]) * c;
      }
    }
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(loewner, Eigen::ComputeFullV);
    const Eigen::VectorXcd w = svd.matrixV().col(static_cast<Eigen::Index>(m) - 1);
    model.weights.assign(w.data(), w.data() + w.size());

    result.max_error = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      approx[i] = is_support[i] ? values[i] : model(points[i]);
      result.max_error = std::max(result.max_error, std::abs(values[i] - approx[i]));
    }
    if (result.max_error <= tol * scale || m >= max_support) break;
  }
  return result;
}

}  // namespace phaseret::baselines

#pragma once

// Shared fixtures and independent oracles for the test suites.  Nothing in
// here calls the engine's numerical routines.

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "riskweave/judgments.hpp"
#include "riskweave/model.hpp"
#include "riskweave/supermatrix.hpp"

namespace rwtest {

inline std::filesystem::path fixture_path() { return RISKWEAVE_FIXTURE_PATH; }

/// Fresh scratch directory under the build tree, emptied on construction.
inline std::filesystem::path scratch_dir(const std::string& name) {
  const std::filesystem::path p = std::filesystem::path(RISKWEAVE_SCRATCH_DIR) / name;
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

/// goal -> {c1: a, b; c2: c} -> alternatives {x, y}; optional c1 <-> c2
/// dependence with a -> c and c -> a.
inline riskweave::NetworkDefinition toy_definition(bool dependent) {
  using namespace riskweave;
  NetworkDefinition def;
  def.name = "toy";
  def.clusters = {
      {"g", "Goal", ClusterKind::goal, {{"goal", "Pick"}}},
      {"c1", "First", ClusterKind::criteria, {{"a", "A"}, {"b", "B"}}},
      {"c2", "Second", ClusterKind::criteria, {{"c", "C"}}},
      {"alt", "Options", ClusterKind::alternatives, {{"x", "X"}, {"y", "Y"}}},
  };
  if (dependent) {
    def.edges = {{"c1", "c2", EdgeLevel::cluster},
                 {"c2", "c1", EdgeLevel::cluster},
                 {"a", "c", EdgeLevel::element},
                 {"c", "a", EdgeLevel::element},
                 {"c", "b", EdgeLevel::element}};
  }
  return def;
}

// ---- eigenvector oracle: Eigen's QR-based general eigensolver ----

struct EigenOracle {
  std::vector<double> weights;
  double lambda = 0.0;
};

inline EigenOracle principal_eigen(const Eigen::MatrixXd& a) {
  Eigen::EigenSolver<Eigen::MatrixXd> solver(a);
  const auto values = solver.eigenvalues();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < values.size(); ++i)
    if (values[i].real() > values[best].real()) best = i;
  Eigen::VectorXd v = solver.eigenvectors().col(best).real().cwiseAbs();
  v /= v.sum();
  return {{v.data(), v.data() + v.size()}, values[best].real()};
}

inline double saaty_ri(std::size_t n) {
  static const double t[] = {0, 0, 0.58, 0.90, 1.12, 1.24, 1.32, 1.41, 1.45, 1.49};
  return t[n - 1];
}

inline double super_decisions_ri(std::size_t n) {
  static const double t[] = {0, 0, 0.52, 0.89, 1.11, 1.25, 1.35, 1.40, 1.45, 1.49};
  return t[n - 1];
}

inline double oracle_cr(const Eigen::MatrixXd& a, double ri) {
  const auto n = static_cast<double>(a.rows());
  if (a.rows() <= 2) return 0.0;
  return (principal_eigen(a).lambda - n) / (n - 1) / ri;
}

// ---- stationary oracle: direct linear solve ----

/// Stationary vector of an irreducible column-stochastic matrix: (P - I)x = 0
/// with the last equation replaced by sum(x) = 1, solved by LU.
inline Eigen::VectorXd stationary(const Eigen::MatrixXd& p) {
  const Eigen::Index n = p.rows();
  Eigen::MatrixXd a = p - Eigen::MatrixXd::Identity(n, n);
  a.row(n - 1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n);
  b(n - 1) = 1.0;
  return a.fullPivLu().solve(b);
}

/// Random column-stochastic matrix that is irreducible (contains a full
/// cycle) and aperiodic (one positive diagonal entry).
inline Eigen::MatrixXd random_irreducible(std::mt19937_64& rng, Eigen::Index n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  for (Eigen::Index k = 0; k < n; ++k)
    m(perm[static_cast<std::size_t>((k + 1) % n)], perm[static_cast<std::size_t>(k)]) = 0.1 + u(rng);
  m(perm[0], perm[0]) += 0.1 + u(rng);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      if (u(rng) < 0.3) m(i, j) += u(rng);
  for (Eigen::Index j = 0; j < n; ++j) m.col(j) /= m.col(j).sum();
  return m;
}

inline riskweave::Supermatrix as_supermatrix(const Eigen::MatrixXd& m) {
  riskweave::Supermatrix s;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    s.index.push_back("n" + std::to_string(i));
    s.cluster_of.push_back("k");
  }
  s.entries = m;
  s.stage = riskweave::Stage::weighted;
  return s;
}

// ---- random reciprocal matrices ----

inline riskweave::Rational random_scale_value(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> pick(0, 16);
  const int k = pick(rng) - 8;  // -8..8
  if (k >= 0) return riskweave::Rational(k + 1);
  return riskweave::Rational(1, 1 - k);
}

inline std::vector<riskweave::NodeId> ids(std::size_t n) {
  std::vector<riskweave::NodeId> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("e" + std::to_string(i));
  return out;
}

inline riskweave::ComparisonMatrix random_reciprocal(std::mt19937_64& rng, std::size_t n) {
  std::vector<riskweave::Rational> upper;
  for (std::size_t i = 0; i < n * (n - 1) / 2; ++i) upper.push_back(random_scale_value(rng));
  return riskweave::ComparisonMatrix("r", ids(n), std::move(upper));
}

/// a_ij = w_i / w_j for integer weights: perfectly consistent.
inline riskweave::ComparisonMatrix consistent_matrix(const std::vector<int>& w) {
  std::vector<riskweave::Rational> upper;
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t j = i + 1; j < w.size(); ++j) upper.emplace_back(w[i], w[j]);
  return riskweave::ComparisonMatrix("c", ids(w.size()), std::move(upper));
}

// ---- ranking oracles ----

/// Competition rank: one plus the number of strictly larger values.
inline std::vector<int> competition_ranks(const std::vector<double>& v) {
  std::vector<int> r;
  for (double x : v) r.push_back(1 + static_cast<int>(std::count_if(v.begin(), v.end(), [x](double y) { return y > x; })));
  return r;
}

/// Spearman's rho for tie-free data: 1 - 6 sum d^2 / (n (n^2 - 1)).
inline double spearman_no_ties(const std::vector<double>& a, const std::vector<double>& b) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<double> r;
    for (double x : v) r.push_back(1.0 + static_cast<double>(std::count_if(v.begin(), v.end(), [x](double y) { return y < x; })));
    return r;
  };
  const auto ra = ranks(a), rb = ranks(b);
  double d2 = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) d2 += (ra[i] - rb[i]) * (ra[i] - rb[i]);
  const double n = static_cast<double>(a.size());
  return 1.0 - 6.0 * d2 / (n * (n * n - 1.0));
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace rwtest

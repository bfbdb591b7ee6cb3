#include "riskweave/priority.hpp"

#include <array>
#include <cmath>

#include "riskweave/errors.hpp"

namespace riskweave {

namespace {

constexpr std::array<double, 10> kSaatyRi = {0.0, 0.0, 0.58, 0.90, 1.12,
                                             1.24, 1.32, 1.41, 1.45, 1.49};
constexpr std::array<double, 10> kSuperDecisionsRi = {0.0, 0.0, 0.52, 0.89, 1.11,
                                                      1.25, 1.35, 1.40, 1.45, 1.49};

}  // namespace

double PriorityVector::weight_of(const NodeId& id) const {
  for (std::size_t i = 0; i < ids.size(); ++i)
    if (ids[i] == id) return weights[i];
  throw NotFoundError("'" + id + "' is not in priority vector '" + context + "'");
}

const char* to_string(RandomIndexTable table) {
  return table == RandomIndexTable::saaty ? "saaty" : "super_decisions";
}

RandomIndexTable parse_random_index_table(const std::string& text) {
  if (text == "saaty") return RandomIndexTable::saaty;
  if (text == "super_decisions") return RandomIndexTable::super_decisions;
  throw ValidationError("unknown random index table '" + text + "'");
}

double random_index(std::size_t n, RandomIndexTable table) {
  if (n < 1 || n > 10)
    throw ValidationError("random index undefined for n = " + std::to_string(n) +
                          " (supported 1..10)");
  return table == RandomIndexTable::saaty ? kSaatyRi[n - 1] : kSuperDecisionsRi[n - 1];
}

EigenResult principal_eigenvector(const ComparisonMatrix& matrix, double tol, int max_iter) {
  const Eigen::MatrixXd a = matrix.to_dense();
  const Eigen::Index n = a.rows();
  EigenResult result;
  result.priorities.context = matrix.context();
  result.priorities.ids = matrix.order();
  if (n == 0) return result;

  Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  bool converged = false;
  for (int it = 1; it <= max_iter; ++it) {
    Eigen::VectorXd next = a * v;
    next /= next.sum();
    const double delta = (next - v).cwiseAbs().maxCoeff();
    v = std::move(next);
    result.iterations = it;
    if (delta < tol) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw ComputationError("power iteration on '" + matrix.context() +
                           "' did not converge in " + std::to_string(max_iter) + " iterations");

  const Eigen::VectorXd av = a * v;
  result.lambda_max = av.cwiseQuotient(v).mean();
  result.priorities.weights.assign(v.data(), v.data() + n);
  return result;
}

ConsistencyReport consistency(std::size_t n, double lambda_max, RandomIndexTable table) {
  ConsistencyReport report;
  report.n = n;
  report.lambda_max = lambda_max;
  report.ri = random_index(n, table);
  if (n > 2) {
    report.ci = (lambda_max - static_cast<double>(n)) / static_cast<double>(n - 1);
    report.cr = report.ci / report.ri;
  }
  return report;
}

ConsistencyReport consistency(const ComparisonMatrix& matrix, RandomIndexTable table) {
  if (matrix.size() > 10)
    throw ValidationError("consistency of '" + matrix.context() + "': n = " +
                          std::to_string(matrix.size()) + " exceeds the random index table");
  if (matrix.size() <= 2) return consistency(matrix.size(), static_cast<double>(matrix.size()), table);
  return consistency(matrix.size(), principal_eigenvector(matrix).lambda_max, table);
}

RevisionHint most_inconsistent_judgment(const ComparisonMatrix& matrix,
                                        const PriorityVector& priorities) {
  const std::size_t n = matrix.size();
  if (n < 3) throw ValidationError("nothing to revise: '" + matrix.context() + "' has n < 3");
  if (priorities.weights.size() != n)
    throw ValidationError("priority vector does not match matrix '" + matrix.context() + "'");

  RevisionHint best;
  best.deviation = -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dev = std::abs(std::log(to_double(matrix.at(i, j))) -
                                  std::log(priorities.weights[i] / priorities.weights[j]));
      if (dev > best.deviation) {
        best.row = i;
        best.col = j;
        best.deviation = dev;
      }
    }
  }
  best.row_id = matrix.order()[best.row];
  best.col_id = matrix.order()[best.col];
  return best;
}

}  // namespace riskweave

#pragma once

// Average-variance metrics A_abd, A_cc, A_ct and A_tt, computed two ways:
// directly from the Moore-Penrose inverse of the treatment information
// matrix, and in closed form from the auxiliary design's A_abd.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "sqarray/core.hpp"

namespace sqarray {

/// Eigenvalues below this fraction of the largest are treated as zero.
inline constexpr double kRankTolerance = 1e-9;

enum class Method { Direct, ClosedForm, Youden };

inline const char* to_string(Method m) {
  switch (m) {
    case Method::Direct: return "direct";
    case Method::ClosedForm: return "closed_form";
    case Method::Youden: return "youden";
  }
  return "?";
}

/// Metric values are NaN when the design is disconnected.
struct MetricsReport {
  double a_abd = std::numeric_limits<double>::quiet_NaN();
  double a_cc = std::numeric_limits<double>::quiet_NaN();
  double a_ct = std::numeric_limits<double>::quiet_NaN();
  double a_tt = std::numeric_limits<double>::quiet_NaN();
  int error_df = 0;
  bool connected = false;
  Method method = Method::Direct;
};

/// Symmetric treatment information matrix (sigma^2 = 1).
class InformationMatrix {
 public:
  explicit InformationMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {}

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }

  double max_abs_row_sum() const { return entries_.rowwise().sum().cwiseAbs().maxCoeff(); }
  double asymmetry() const { return (entries_ - entries_.transpose()).cwiseAbs().maxCoeff(); }

  /// Ascending eigenvalues.
  Eigen::VectorXd eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(entries_, Eigen::EigenvaluesOnly);
    return solver.eigenvalues();
  }

  int rank() const { return numerical_rank(eigenvalues()); }

  static int numerical_rank(const Eigen::VectorXd& eigenvalues) {
    double cutoff = kRankTolerance * std::max(eigenvalues.cwiseAbs().maxCoeff(), 1.0);
    return static_cast<int>((eigenvalues.array() > cutoff).count());
  }

 private:
  Eigen::MatrixXd entries_;
};

/// C_b = kI - (1/k) N N^T for the auxiliary design in its usual block setting.
inline InformationMatrix aux_information(const AuxiliaryBlockDesign& aux) {
  require_valid(aux);
  const int t = aux.t();
  const int k = aux.k();
  Eigen::MatrixXd incidence = Eigen::MatrixXd::Zero(t, t);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < t; ++j) incidence(aux.at(i, j) - 1, j) += 1.0;
  Eigen::MatrixXd c = static_cast<double>(k) * Eigen::MatrixXd::Identity(t, t) -
                      (incidence * incidence.transpose()) / static_cast<double>(k);
  return InformationMatrix(std::move(c));
}

/// Average pairwise variance 2/(t-1) * sum 1/theta over the t-1 nonzero
/// eigenvalues. `eigenvalues` must contain exactly one (near) zero.
inline double average_variance_from_spectrum(std::vector<double> eigenvalues) {
  std::sort(eigenvalues.begin(), eigenvalues.end());
  const double top = std::max(std::abs(eigenvalues.back()), 1.0);
  const auto n = eigenvalues.size();
  if (n < 2 || eigenvalues[1] <= kRankTolerance * top)
    throw DisconnectedError("disconnected auxiliary design");
  double sum = 0.0;
  for (std::size_t i = 1; i < n; ++i) sum += 1.0 / eigenvalues[i];
  return 2.0 * sum / static_cast<double>(n - 1);
}

inline double abd_variance(const AuxiliaryBlockDesign& aux) {
  Eigen::VectorXd ev = aux_information(aux).eigenvalues();
  return average_variance_from_spectrum(std::vector<double>(ev.data(), ev.data() + ev.size()));
}

/// Eigenvalues of a symmetric circulant matrix: the real DFT of its first row.
inline std::vector<double> circulant_spectrum(const std::vector<double>& first_row) {
  const auto n = first_row.size();
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (std::size_t d = 0; d < n; ++d)
      acc += first_row[d] * std::cos(2.0 * std::numbers::pi * static_cast<double>(j * d % n) /
                                     static_cast<double>(n));
    out[j] = acc;
  }
  return out;
}

/// First row of C_b for the cyclic design developed from `seq`.
inline std::vector<double> cyclic_information_row(const SpacingSequence& seq) {
  const int t = seq.t();
  const int k = seq.k();
  const auto block = seq.initial_block();
  std::vector<double> row(t, 0.0);
  for (int a : block)
    for (int b : block) row[((b - a) % t + t) % t] -= 1.0 / k;
  row[0] += k;
  return row;
}

/// A_abd of a cyclic design through its circulant spectrum.
inline double abd_variance(const SpacingSequence& seq) {
  return average_variance_from_spectrum(circulant_spectrum(cyclic_information_row(seq)));
}

/// C = X'X - (1/t) Lambda_r - (1/t) Lambda_c + (1/t^2) X'J X over all
/// v = k + t(t-k) treatments, controls first.
inline InformationMatrix square_information(const SquareArrayDesign& sq) {
  require_valid(sq);
  const int t = sq.t();
  const int v = sq.treatment_count();
  Eigen::VectorXd replication = Eigen::VectorXd::Zero(v);
  // Row/column incidence: treatments x rows, treatments x columns.
  Eigen::MatrixXd in_row = Eigen::MatrixXd::Zero(v, t);
  Eigen::MatrixXd in_col = Eigen::MatrixXd::Zero(v, t);
  for (int r = 0; r < t; ++r)
    for (int c = 0; c < t; ++c) {
      int i = sq.treatment_index(r, c);
      replication(i) += 1.0;
      in_row(i, r) += 1.0;
      in_col(i, c) += 1.0;
    }
  const double inv_t = 1.0 / t;
  Eigen::MatrixXd c = Eigen::MatrixXd(replication.asDiagonal());
  c.noalias() -= inv_t * (in_row * in_row.transpose());
  c.noalias() -= inv_t * (in_col * in_col.transpose());
  c.noalias() += (inv_t * inv_t) * (replication * replication.transpose());
  return InformationMatrix(std::move(c));
}

struct PseudoInverse {
  Eigen::MatrixXd inverse;
  int rank = 0;
};

/// Moore-Penrose inverse by symmetric eigendecomposition.
inline PseudoInverse pseudo_inverse(const InformationMatrix& info) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(info.entries());
  const Eigen::VectorXd& ev = solver.eigenvalues();
  double cutoff = kRankTolerance * std::max(ev.cwiseAbs().maxCoeff(), 1.0);
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
  int rank = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (ev(i) > cutoff) {
      inv(i) = 1.0 / ev(i);
      ++rank;
    }
  const Eigen::MatrixXd& vec = solver.eigenvectors();
  return {vec * inv.asDiagonal() * vec.transpose(), rank};
}

inline MetricsReport direct_metrics(const SquareArrayDesign& sq) {
  const int t = sq.t();
  const int k = sq.k();
  const int t1 = sq.test_line_count();
  const int v = sq.treatment_count();
  MetricsReport report;
  report.method = Method::Direct;
  report.error_df = error_df(t, k);

  PseudoInverse pinv = pseudo_inverse(square_information(sq));
  report.connected = pinv.rank == v - 1;
  if (!report.connected) return report;

  const Eigen::MatrixXd& g = pinv.inverse;
  const Eigen::VectorXd d = g.diagonal();

  double cc = 0.0;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) cc += d(i) + d(j) - 2.0 * g(i, j);
  report.a_cc = cc / (k * (k - 1) / 2.0);

  const double diag_c = d.head(k).sum();
  const double diag_t = d.tail(t1).sum();
  const double cross = g.block(0, k, k, t1).sum();
  report.a_ct = (t1 * diag_c + k * diag_t - 2.0 * cross) / (static_cast<double>(k) * t1);

  const double within = g.block(k, k, t1, t1).sum();
  const double pairs = static_cast<double>(t1) * (t1 - 1) / 2.0;
  report.a_tt = ((t1 - 1) * diag_t - (within - diag_t)) / pairs;

  try {
    report.a_abd = abd_variance(from_square_array(sq));
  } catch (const DisconnectedError&) {
  }
  return report;
}

/// Square-array metrics from A_abd via the two linear relations.
inline MetricsReport closed_form_metrics(int t, int k, double a_abd) {
  const double t1 = static_cast<double>(t) * (t - k);
  const double excess = a_abd - 2.0 / t;
  MetricsReport report;
  report.method = Method::ClosedForm;
  report.error_df = error_df(t, k);
  report.connected = true;
  report.a_abd = a_abd;
  report.a_cc = 2.0 / t;
  report.a_tt = 2.0 + 2.0 * t * (t - 1) / (t1 - 1) * excess;
  report.a_ct = 1.0 + 1.0 / t + static_cast<double>(t - 1) / (t - k) * excess;
  return report;
}

/// Throws DisconnectedError for a disconnected auxiliary design.
inline MetricsReport closed_form_metrics(const AuxiliaryBlockDesign& aux) {
  return closed_form_metrics(aux.t(), aux.k(), abd_variance(aux));
}

inline MetricsReport closed_form_metrics(const SpacingSequence& seq) {
  return closed_form_metrics(seq.t(), seq.k(), abd_variance(seq));
}

/// Metrics of a square array whose auxiliary design is a Youden square
/// (symmetric BIBD with lambda = k(k-1)/(t-1)).
inline MetricsReport youden_metrics(int t, int k, int lambda) {
  AuxiliaryBlockDesign::check_parameters(t, k);
  if (lambda < 1 || lambda * (t - 1) != k * (k - 1))
    throw StructuralError("not Youden parameters: lambda(t-1) must equal k(k-1)");
  const double t1 = static_cast<double>(t) * (t - k);
  MetricsReport report;
  report.method = Method::Youden;
  report.error_df = error_df(t, k);
  report.connected = true;
  report.a_abd = 2.0 * k / (static_cast<double>(lambda) * t);
  report.a_cc = 2.0 / t;
  report.a_ct = 1.0 + 1.0 / t + 2.0 * k / (static_cast<double>(lambda) * t);
  report.a_tt = 2.0 + 4.0 * k * (t - k) / ((t1 - 1) * lambda);
  return report;
}

/// A_ct implied by A_tt for any square array design with k controls.
inline double a_ct_from_a_tt(int t, int k, double a_tt) {
  const double t1 = static_cast<double>(t) * (t - k);
  return (k - 1.0) / (static_cast<double>(k) * t) + 1.0 / (static_cast<double>(k) * (t - k)) +
         (t1 - 1) / (2 * t1) * a_tt;
}

/// True when the report's A_ct and A_tt satisfy the exact linear relation.
inline bool ct_tt_relation_holds(const MetricsReport& report, int t, int k,
                                 double tolerance = 1e-8) {
  if (!report.connected) return false;
  return std::abs(report.a_ct - a_ct_from_a_tt(t, k, report.a_tt)) < tolerance;
}

}  // namespace sqarray

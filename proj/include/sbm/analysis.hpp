#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sbm/graph.hpp"
#include "sbm/path.hpp"
#include "sbm/solver.hpp"

namespace sbm {

struct LogitFit {
  Eigen::VectorXd coefficients;
  Eigen::VectorXd standard_errors;  // from the observed information
  Eigen::VectorXd z_values;
  Eigen::VectorXd p_values;
  double loglik = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
  /// Complete separation or a degenerate response: the MLE does not exist.
  bool separation_flag = false;
};

/// Logistic regression by Newton-Raphson. `design` must include the
/// intercept column. Throws DataError for a rank-deficient design.
LogitFit logistic_fit(const Eigen::MatrixXd& design, const Eigen::VectorXd& y, int max_iter = 100,
                      double tol = 1e-8);

/// One disconnected block of the network (a village).
struct GroupNetwork {
  std::string id;
  Graph graph;
  std::vector<std::string> labels;  // external id of node k; empty means "k"

  std::string label(NodeId k) const;
};

/// Reads every "<group>.tsv" edge list in `dir`, with optional "<group>.labels" sidecars.
std::vector<GroupNetwork> load_groups(const std::filesystem::path& dir);

/// Square 0/1 matrix, one comma-separated row per line. The relation is
/// symmetrized by union and the diagonal is ignored.
Graph parse_adjacency_csv(const std::string& text);
Graph read_adjacency_csv(const std::filesystem::path& path);

/// One 0/1 value per line (or the first comma-separated field), aligned with
/// the rows of an adjacency matrix; "NA" or an empty field is missing.
std::vector<std::optional<int>> read_takeup_column(const std::filesystem::path& path);

struct GroupFit {
  std::string id;
  PathEntry selected;
};

struct GroupFitReport {
  std::map<std::string, GroupFit> fits;
  std::vector<std::string> warnings;
};

/// Solution path plus criterion selection per group with
/// max_size = floor(cap_fraction * n_m). Groups without edges are skipped.
GroupFitReport fit_by_group(const std::vector<GroupNetwork>& groups, const FitConfig& cfg,
                            double cap_fraction = 0.5, Criterion criterion = Criterion::bic,
                            unsigned threads = 1);

struct Outcome {
  std::string node_id;
  std::string group_id;
  std::optional<int> takeup;  // missing in the survey
};

/// CSV with header "node_id,group_id,takeup"; empty or "NA" take-up is missing.
std::vector<Outcome> parse_outcomes_csv(const std::string& text);
std::vector<Outcome> read_outcomes_csv(const std::filesystem::path& path);

struct NodeRow {
  std::string node_id;
  std::string group_id;
  std::optional<int> outcome;
  std::int64_t degree = 0;
  double eigenvector = 0.0;
  double beta_hat = 0.0;
  double mu_hat_group = 0.0;
  double beta_star = 0.0;  // beta_hat + mu_hat_group / 2
  int leader = 0;          // 1 iff beta_hat > 0

  /// leader + mu_hat_group / 2, the covariate of the "Leader" models.
  double leader_shifted() const { return leader + mu_hat_group / 2.0; }
};

struct NodeTable {
  std::vector<NodeRow> rows;
  std::vector<std::string> warnings;
};

/// One row per node of every fitted group. Throws DataError when an outcome
/// names a node or group that is not in the networks.
NodeTable build_node_table(const GroupFitReport& fits, const std::vector<GroupNetwork>& groups,
                           const std::vector<Outcome>& outcomes);

struct TakeupModel {
  int index = 0;                   // 1..8
  std::vector<std::string> terms;  // covariates after the intercept
  LogitFit fit;
  std::size_t observations = 0;
};

/// Models (1)-(8): degree; eigenvector; beta; leader; degree + beta;
/// degree + leader; eigenvector + beta; eigenvector + leader.
/// Rows without an outcome are left out.
std::vector<TakeupModel> run_takeup_models(const NodeTable& table);

}  // namespace sbm

#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sbm/analysis.hpp"
#include "sbm/harness.hpp"
#include "sbm/inference.hpp"
#include "sbm/path.hpp"

namespace sbm {

/// Fit report: n, s, support, mu_hat, beta_hat (node id -> value, nonzeros
/// only), nll, bic, bic_star (null when d_plus = 0), converged, at_boundary,
/// existence_ok.
nlohmann::json fit_to_json(const PathEntry& entry, std::size_t n);

/// {"n", "d_plus", "selected": {"bic", "bic_star"}, "entries": [fit reports], "warnings"}
nlohmann::json path_to_json(const SolutionPath& path);

nlohmann::json er_to_json(const ErFit& fit);

void write_degree_distribution_csv(const std::vector<std::pair<std::int64_t, double>>& dist, std::ostream& out);
void write_overlay_csv(const std::vector<OverlayRow>& rows, std::ostream& out);

/// Long format, one row per (model, term); the model-level columns n,
/// loglik, converged and separation repeat on every row of a model.
void write_takeup_tables_csv(const std::vector<TakeupModel>& models, std::ostream& out);
void write_node_table_csv(const NodeTable& table, std::ostream& out);

}  // namespace sbm

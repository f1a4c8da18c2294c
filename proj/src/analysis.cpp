#include "sbm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_map>

#include "sbm/errors.hpp"
#include "sbm/parallel.hpp"

namespace sbm {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\"");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\"");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::string GroupNetwork::label(NodeId k) const {
  return labels.empty() ? std::to_string(k) : labels.at(k);
}

std::vector<GroupNetwork> load_groups(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw DataError("edge directory '" + dir.string() + "' does not exist");
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".tsv") files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw DataError("no .tsv edge lists in '" + dir.string() + "'");

  std::vector<GroupNetwork> groups;
  for (const auto& file : files) {
    GroupNetwork group{file.stem().string(), load_edge_list(file), {}};
    auto sidecar = file;
    sidecar.replace_extension(".labels");
    if (std::filesystem::exists(sidecar)) {
      group.labels = load_labels(sidecar);
      if (group.labels.size() != group.graph.n()) {
        throw DataError(sidecar.string() + ": expected " + std::to_string(group.graph.n()) +
                        " labels, found " + std::to_string(group.labels.size()));
      }
    }
    groups.push_back(std::move(group));
  }
  return groups;
}

GroupFitReport fit_by_group(const std::vector<GroupNetwork>& groups, const FitConfig& cfg,
                            double cap_fraction, Criterion criterion, unsigned threads) {
  if (!(cap_fraction > 0.0 && cap_fraction <= 1.0)) {
    throw std::invalid_argument("cap_fraction must lie in (0, 1]");
  }
  std::vector<std::optional<GroupFit>> slots(groups.size());
  std::vector<std::vector<std::string>> notes(groups.size());
  parallel_for(groups.size(), threads, [&](std::size_t k) {
    const auto& group = groups[k];
    if (group.graph.d_plus() == 0) {
      notes[k].push_back("group " + group.id + " has no edges; skipped");
      return;
    }
    const auto cap = static_cast<std::size_t>(std::floor(cap_fraction * static_cast<double>(group.graph.n())));
    const auto path = solution_path(group.graph, std::max<std::size_t>(1, cap), cfg);
    for (const auto& w : path.warnings) notes[k].push_back("group " + group.id + ": " + w);
    slots[k] = GroupFit{group.id, select(path, criterion)};
  });

  GroupFitReport report;
  for (std::size_t k = 0; k < groups.size(); ++k) {
    report.warnings.insert(report.warnings.end(), notes[k].begin(), notes[k].end());
    if (slots[k]) {
      if (!report.fits.emplace(groups[k].id, std::move(*slots[k])).second) {
        throw DataError("duplicate group id " + groups[k].id);
      }
    }
  }
  return report;
}

std::vector<Outcome> parse_outcomes_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw DataError("outcome file is empty");
  const auto header = split_csv(line);
  if (header != std::vector<std::string>{"node_id", "group_id", "takeup"}) {
    throw DataError("outcome header must be 'node_id,group_id,takeup'");
  }
  std::vector<Outcome> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != 3) {
      throw DataError("outcomes line " + std::to_string(line_no) + ": expected 3 fields");
    }
    Outcome o{fields[0], fields[1], std::nullopt};
    if (fields[2] == "1") {
      o.takeup = 1;
    } else if (fields[2] == "0") {
      o.takeup = 0;
    } else if (!fields[2].empty() && fields[2] != "NA") {
      throw DataError("outcomes line " + std::to_string(line_no) + ": take-up must be 0, 1, NA or empty");
    }
    out.push_back(std::move(o));
  }
  return out;
}

std::vector<Outcome> read_outcomes_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open outcome file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_outcomes_csv(buf.str());
}

Graph parse_adjacency_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::vector<char>> rows;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<char> row;
    for (const auto& cell : split_csv(line)) {
      if (cell == "0") row.push_back(0);
      else if (cell == "1") row.push_back(1);
      else throw DataError("adjacency row " + std::to_string(rows.size() + 1) + ": entry '" + cell + "' is not 0 or 1");
    }
    rows.push_back(std::move(row));
  }
  const auto n = rows.size();
  if (n == 0) throw DataError("adjacency matrix is empty");
  std::vector<Edge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    if (rows[i].size() != n) {
      throw DataError("adjacency row " + std::to_string(i + 1) + " has " + std::to_string(rows[i].size()) +
                      " entries, expected " + std::to_string(n));
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      if (rows[i][j] || rows[j][i]) edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(j)});
    }
  }
  return Graph(n, std::move(edges));
}

Graph read_adjacency_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open adjacency file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_adjacency_csv(buf.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::vector<std::optional<int>> read_takeup_column(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open take-up file '" + path.string() + "'");
  std::vector<std::optional<int>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    const auto value = split_csv(line).front();
    if (value.empty() || value == "NA") out.emplace_back();
    else if (value == "0" || value == "1") out.emplace_back(value == "1");
    else throw DataError(path.string() + ": take-up '" + value + "' is not 0, 1 or NA");
  }
  return out;
}

NodeTable build_node_table(const GroupFitReport& fits, const std::vector<GroupNetwork>& groups,
                           const std::vector<Outcome>& outcomes) {
  std::map<std::string, std::unordered_map<std::string, std::optional<int>>> by_group;
  for (const auto& o : outcomes) by_group[o.group_id][o.node_id] = o.takeup;

  NodeTable table;
  std::set<std::string> known_groups;
  std::vector<std::string> unknown;
  std::size_t skipped = 0;
  for (const auto& group : groups) {
    known_groups.insert(group.id);
    auto outcome_it = by_group.find(group.id);
    std::set<std::string> labels;
    for (NodeId k = 0; k < group.graph.n(); ++k) labels.insert(group.label(k));
    if (outcome_it != by_group.end()) {
      for (const auto& [node, _] : outcome_it->second) {
        if (!labels.contains(node)) unknown.push_back(group.id + "/" + node);
      }
    }

    auto fit_it = fits.fits.find(group.id);
    if (fit_it == fits.fits.end()) {
      if (outcome_it != by_group.end()) skipped += outcome_it->second.size();
      continue;
    }
    const auto& params = fit_it->second.selected.fit.params;
    const auto centrality = eigenvector_centrality(group.graph);
    if (!centrality.unique) {
      table.warnings.push_back("group " + group.id + ": top eigenvalue shared by several components");
    }
    for (NodeId k = 0; k < group.graph.n(); ++k) {
      NodeRow row;
      row.node_id = group.label(k);
      row.group_id = group.id;
      if (outcome_it != by_group.end()) {
        if (auto o = outcome_it->second.find(row.node_id); o != outcome_it->second.end()) {
          row.outcome = o->second;
        }
      }
      row.degree = group.graph.degree(k);
      row.eigenvector = centrality.x[k];
      row.beta_hat = params.beta[k];
      row.mu_hat_group = params.mu;
      row.beta_star = row.beta_hat + row.mu_hat_group / 2.0;
      row.leader = row.beta_hat > 0.0 ? 1 : 0;
      table.rows.push_back(std::move(row));
    }
  }
  for (const auto& [group, nodes] : by_group) {
    if (!known_groups.contains(group)) {
      for (const auto& [node, _] : nodes) unknown.push_back(group + "/" + node);
    }
  }
  if (!unknown.empty()) {
    std::sort(unknown.begin(), unknown.end());
    std::string msg = "outcomes reference nodes absent from the networks:";
    for (std::size_t k = 0; k < unknown.size() && k < 20; ++k) msg += " " + unknown[k];
    if (unknown.size() > 20) msg += " ... (" + std::to_string(unknown.size()) + " total)";
    throw DataError(msg);
  }
  if (skipped > 0) {
    table.warnings.push_back(std::to_string(skipped) + " outcomes belong to groups without a fit");
  }
  return table;
}

std::vector<TakeupModel> run_takeup_models(const NodeTable& table) {
  enum Covariate { degree, eigenvector, beta, leader };
  static const char* const names[] = {"Degree", "Eigenvector", "Beta", "Leader"};
  const std::vector<std::vector<Covariate>> specs = {
      {degree},         {eigenvector},         {beta},
      {leader},         {degree, beta},        {degree, leader},
      {eigenvector, beta}, {eigenvector, leader},
  };

  std::vector<const NodeRow*> rows;
  for (const auto& r : table.rows) {
    if (r.outcome) rows.push_back(&r);
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) y[i] = *rows[static_cast<std::size_t>(i)]->outcome;

  auto value = [](const NodeRow& r, Covariate c) {
    switch (c) {
      case degree: return static_cast<double>(r.degree);
      case eigenvector: return r.eigenvector;
      case beta: return r.beta_star;
      case leader: return r.leader_shifted();
    }
    return 0.0;
  };

  std::vector<TakeupModel> models;
  for (std::size_t m = 0; m < specs.size(); ++m) {
    const auto& spec = specs[m];
    Eigen::MatrixXd design(n, static_cast<Eigen::Index>(1 + spec.size()));
    for (Eigen::Index i = 0; i < n; ++i) {
      design(i, 0) = 1.0;
      for (std::size_t c = 0; c < spec.size(); ++c) {
        design(i, static_cast<Eigen::Index>(1 + c)) = value(*rows[static_cast<std::size_t>(i)], spec[c]);
      }
    }
    TakeupModel model;
    model.index = static_cast<int>(m + 1);
    for (auto c : spec) model.terms.emplace_back(names[c]);
    model.fit = logistic_fit(design, y);
    model.observations = rows.size();
    models.push_back(std::move(model));
  }
  return models;
}

}  // namespace sbm

#include <charconv>
#include <limits>
#include <optional>
#include <fstream>
#include <sstream>
#include <string_view>
#include <unordered_set>

#include "sbm/errors.hpp"
#include "sbm/graph.hpp"

namespace sbm {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw DataError("line " + std::to_string(line) + ": " + what);
}

std::uint64_t parse_id(std::string_view token, std::size_t line) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    fail(line, "expected a nonnegative integer, got '" + std::string(token) + "'");
  }
  if (value > std::numeric_limits<NodeId>::max() - 1) fail(line, "node id too large");
  return value;
}

}  // namespace

Graph parse_edge_list(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  std::size_t line_no = 0;
  std::optional<std::uint64_t> declared_n;
  bool seen_content = false;
  std::uint64_t max_id = 0;
  std::vector<Edge> edges;
  std::unordered_set<std::uint64_t> seen;

  while (std::getline(in, raw)) {
    ++line_no;
    auto line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (!seen_content && line.starts_with("n=")) {
      seen_content = true;
      declared_n = parse_id(trim(line.substr(2)), line_no);
      if (*declared_n == 0) fail(line_no, "declared node count must be positive");
      continue;
    }
    seen_content = true;

    const auto split = line.find_first_of(" \t");
    if (split == std::string_view::npos) fail(line_no, "expected two node ids");
    const auto first = trim(line.substr(0, split));
    const auto second = trim(line.substr(split));
    if (second.find_first_of(" \t") != std::string_view::npos) {
      fail(line_no, "expected exactly two node ids");
    }
    auto u = parse_id(first, line_no);
    auto v = parse_id(second, line_no);
    if (u == v) fail(line_no, "self loop at line " + std::to_string(line_no));
    if (declared_n && (u >= *declared_n || v >= *declared_n)) {
      fail(line_no, "node id exceeds declared n=" + std::to_string(*declared_n));
    }
    if (u > v) std::swap(u, v);
    if (!seen.insert((u << 32) | v).second) {
      fail(line_no, "duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    }
    max_id = std::max(max_id, v);
    edges.push_back({static_cast<NodeId>(u), static_cast<NodeId>(v)});
  }

  const std::uint64_t n = declared_n ? *declared_n : (edges.empty() ? 1 : max_id + 1);
  return Graph(static_cast<std::size_t>(n), std::move(edges));
}

Graph load_edge_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open edge list '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_edge_list(buf.str());
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

void write_edge_list(const Graph& g, std::ostream& out) {
  out << "n=" << g.n() << '\n';
  for (const auto& e : g.edges()) out << e.u << ' ' << e.v << '\n';
}

std::vector<std::string> load_labels(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open label file '" + path.string() + "'");
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) labels.emplace_back(trim(line));
  while (!labels.empty() && labels.back().empty()) labels.pop_back();
  return labels;
}

}  // namespace sbm

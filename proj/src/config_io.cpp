#include "qgf/config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace qgf {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& what) { throw Error(ErrorCode::ParseError, what); }

cplx read_entry(const json& v, const std::string& where) {
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    return {v[0].get<double>(), v[1].get<double>()};
  }
  parse_fail(where + ": expected a number or a [re, im] pair");
}

CMatrix read_matrix(const json& root, const char* key, Eigen::Index empty_rows, Eigen::Index empty_cols) {
  if (!root.contains(key)) parse_fail(std::string("missing field \"") + key + "\"");
  const json& rows = root.at(key);
  if (!rows.is_array()) parse_fail(std::string("\"") + key + "\" must be an array of rows");
  if (rows.empty()) return CMatrix(empty_rows, empty_cols);
  const auto nrows = static_cast<Eigen::Index>(rows.size());
  Eigen::Index ncols = -1;
  CMatrix m;
  for (Eigen::Index i = 0; i < nrows; ++i) {
    const json& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array()) parse_fail(std::string(key) + "[" + std::to_string(i) + "] is not an array");
    if (ncols < 0) {
      ncols = static_cast<Eigen::Index>(row.size());
      m.resize(nrows, ncols);
    } else if (static_cast<Eigen::Index>(row.size()) != ncols) {
      parse_fail(std::string(key) + " is ragged at row " + std::to_string(i));
    }
    for (Eigen::Index j = 0; j < ncols; ++j) {
      m(i, j) = read_entry(row[static_cast<std::size_t>(j)],
                           std::string(key) + "[" + std::to_string(i) + "][" + std::to_string(j) + "]");
    }
  }
  return m;
}

Line read_line(const json& entry, std::size_t index) {
  const std::string where = "lines[" + std::to_string(index) + "]";
  if (!entry.is_object() || !entry.contains("role") || !entry["role"].is_string()) {
    parse_fail(where + ": expected an object with a string \"role\"");
  }
  const auto role = entry["role"].get<std::string>();
  double V = 0.0;
  if (entry.contains("V")) {
    if (!entry["V"].is_number()) parse_fail(where + ": \"V\" must be a number");
    V = entry["V"].get<double>();
  }
  if (role == "input") return {Role::Input, V};
  if (role == "output") return {Role::Output, V};
  if (role == "drain") return {Role::Drain, V};
  if (role == "controller") {
    if (!entry.contains("V")) parse_fail(where + ": controller without \"V\"");
    return {Role::Controller, V};
  }
  parse_fail(where + ": unknown role \"" + role + "\"");
}

json write_matrix(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

CouplingConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann's message already names line and column
    parse_fail(e.what());
  }
  if (!root.is_object()) parse_fail("top level must be an object");
  for (const char* key : {"n", "r"}) {
    if (!root.contains(key) || !root[key].is_number_integer()) {
      parse_fail(std::string("missing integer field \"") + key + "\"");
    }
  }

  CouplingConfig cfg;
  cfg.coupling.n = root["n"].get<int>();
  cfg.coupling.r = root["r"].get<int>();
  if (cfg.coupling.n < 0) parse_fail("\"n\" must be non-negative");
  const int r = std::max(0, cfg.coupling.r);
  const int m = std::max(0, cfg.coupling.n - cfg.coupling.r);
  cfg.coupling.S = read_matrix(root, "S", 0, 0);
  // "T": [] stands for an r x 0 block (r = n) or a 0 x n block (r = 0)
  cfg.coupling.T = read_matrix(root, "T", r == 0 ? 0 : r, r == 0 ? m : 0);

  if (!root.contains("lines") || !root["lines"].is_array()) parse_fail("missing array \"lines\"");
  const json& lines = root["lines"];
  std::vector<Line> file_order;
  for (std::size_t i = 0; i < lines.size(); ++i) file_order.push_back(read_line(lines[i], i));

  if (root.contains("permutation")) {
    const json& perm = root["permutation"];
    if (!perm.is_array() || perm.size() != file_order.size()) {
      parse_fail("\"permutation\" must list one ST index per line");
    }
    std::set<int> seen;
    cfg.lines.lines.resize(file_order.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
      if (!perm[i].is_number_integer()) parse_fail("\"permutation\" entries must be integers");
      const int target = perm[i].get<int>();
      if (target < 0 || target >= static_cast<int>(file_order.size()) || !seen.insert(target).second) {
        parse_fail("\"permutation\" is not a permutation of 0..n-1");
      }
      cfg.lines.lines[static_cast<std::size_t>(target)] = file_order[i];
    }
  } else {
    cfg.lines.lines = std::move(file_order);
  }

  if (root.contains("design")) cfg.design = root["design"];
  return cfg;
}

CouplingConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) parse_fail("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

nlohmann::json to_json(const CouplingConfig& config) {
  json root;
  root["n"] = config.coupling.n;
  root["r"] = config.coupling.r;
  root["S"] = write_matrix(config.coupling.S);
  root["T"] = write_matrix(config.coupling.T);
  json lines = json::array();
  for (const auto& l : config.lines.lines) {
    json entry;
    entry["role"] = std::string(to_string(l.role));
    if (l.role == Role::Controller) entry["V"] = l.V;
    lines.push_back(std::move(entry));
  }
  root["lines"] = std::move(lines);
  if (config.design) root["design"] = *config.design;
  return root;
}

// Two-space indent with one matrix row or line entry per output line.
std::string dump_config(const CouplingConfig& config) {
  const json root = to_json(config);
  std::ostringstream out;
  out << "{\n";
  bool first = true;
  for (const char* key : {"n", "r", "S", "T", "lines", "design"}) {
    if (!root.contains(key)) continue;
    out << (first ? "" : ",\n") << "  \"" << key << "\": ";
    first = false;
    const json& v = root[key];
    if (v.is_array() && !v.empty()) {
      out << "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) out << "    " << v[i].dump() << (i + 1 < v.size() ? ",\n" : "\n");
      out << "  ]";
    } else {
      out << v.dump();
    }
  }
  out << "\n}\n";
  return out.str();
}

void save_config(const std::filesystem::path& path, const CouplingConfig& config) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write " + path.string());
  out << dump_config(config);
}

}  // namespace qgf

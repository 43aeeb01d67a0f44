#include "ntunet/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

namespace ntunet {

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

int CsvTable::column(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c)
    if (header[c] == name) return static_cast<int>(c);
  throw DataError("missing column '" + name + "'");
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

  CsvTable table;
  CsvRow row;
  std::string field;
  bool quoted = false;
  bool any_field = false;
  auto end_field = [&]() {
    row.push_back(field);
    field.clear();
    any_field = true;
  };
  auto end_row = [&]() {
    if (!any_field && row.empty()) return;  // skip blank lines
    end_field();
    if (table.header.empty())
      table.header = row;
    else
      table.rows.push_back(row);
    row.clear();
    any_field = false;
    field.clear();
  };

  for (std::size_t p = 0; p < content.size(); ++p) {
    const char ch = content[p];
    if (quoted) {
      if (ch == '"') {
        if (p + 1 < content.size() && content[p + 1] == '"') {
          field += '"';
          ++p;
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      end_field();
    } else if (ch == '\r') {
      // swallow; \n ends the row
    } else if (ch == '\n') {
      end_row();
    } else {
      field += ch;
    }
  }
  if (!field.empty() || any_field || !row.empty()) end_row();
  if (quoted) throw DataError("unterminated quoted field in " + path);

  for (const auto& r : table.rows)
    if (r.size() != table.header.size())
      throw DataError("ragged row in " + path);
  return table;
}

namespace {

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

}  // namespace

void write_csv(const std::string& path, const CsvRow& header, const std::vector<CsvRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path);
  auto emit = [&](const CsvRow& r) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      if (c) out << ',';
      out << quote_csv(r[c]);
    }
    out << '\n';
  };
  emit(header);
  for (const auto& r : rows) emit(r);
}

std::string format_double(double v) {
  char buf[40];
  const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
  return std::string(buf, buf + len);
}

std::optional<double> try_parse_double(const std::string& s) {
  std::size_t begin = s.find_first_not_of(" \t");
  if (begin == std::string::npos) return std::nullopt;
  std::size_t end = s.find_last_not_of(" \t") + 1;
  double v = 0.0;
  const auto res = std::from_chars(s.data() + begin, s.data() + end, v);
  if (res.ec != std::errc{} || res.ptr != s.data() + end) return std::nullopt;
  return v;
}

// ---------------------------------------------------------------------------
// Config documents
// ---------------------------------------------------------------------------

json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  json cfg;
  try {
    in >> cfg;
  } catch (const json::exception& e) {
    throw ConfigError("config parse error in " + path + ": " + e.what());
  }
  if (!cfg.is_object()) throw ConfigError("config root must be an object");
  if (!cfg.contains("schema_version") || !cfg["schema_version"].is_number_integer() ||
      cfg["schema_version"].get<int>() != 1)
    throw ConfigError("config requires schema_version = 1");
  return cfg;
}

std::string config_hash(const json& cfg) {
  const std::string dump = cfg.dump();  // nlohmann objects iterate in sorted key order
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : dump) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
}

double require_number(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) throw ConfigError(where + " requires '" + key + "'");
  if (!obj[key].is_number()) throw ConfigError(where + "." + key + " must be a number");
  return obj[key].get<double>();
}

int optional_int(const json& obj, const std::string& key, int fallback) {
  if (!obj.contains(key)) return fallback;
  return obj[key].get<int>();
}

double optional_number(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  return obj[key].get<double>();
}

std::string optional_string(const json& obj, const std::string& key, const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  if (!obj[key].is_string()) throw ConfigError("'" + key + "' must be a string");
  return obj[key].get<std::string>();
}

}  // namespace

SmoothingKind parse_smoothing(const std::string& name) {
  if (name == "indicator") return SmoothingKind::Indicator;
  if (name == "positive_part") return SmoothingKind::PositivePart;
  if (name == "scaled_normal_cdf") return SmoothingKind::ScaledNormalCdf;
  throw ConfigError("unknown smoothing '" + name + "'");
}

SupportKind parse_support(const std::string& name) {
  if (name == "all_continuous") return SupportKind::AllContinuous;
  if (name == "binary1") return SupportKind::Binary1;
  if (name == "binary1_discrete2") return SupportKind::Binary1Discrete2;
  if (name == "all_discrete101") return SupportKind::AllDiscrete101;
  if (name == "all_discrete11") return SupportKind::AllDiscrete11;
  throw ConfigError("unknown support '" + name + "'");
}

const char* support_name(SupportKind kind) {
  switch (kind) {
    case SupportKind::AllContinuous: return "all_continuous";
    case SupportKind::Binary1: return "binary1";
    case SupportKind::Binary1Discrete2: return "binary1_discrete2";
    case SupportKind::AllDiscrete101: return "all_discrete101";
    case SupportKind::AllDiscrete11: return "all_discrete11";
  }
  return "?";
}

DgpConfig parse_dgp(const json& section) {
  check_keys(section,
             {"n", "d", "support", "beta0", "index_scale", "heterogeneity", "w"},
             "dgp");
  DgpConfig cfg;
  cfg.n = static_cast<int>(require_number(section, "n", "dgp"));
  cfg.d = optional_int(section, "d", 3);
  cfg.support = parse_support(optional_string(section, "support", "all_continuous"));
  cfg.index_scale = optional_number(section, "index_scale", 1.0);

  if (section.contains("beta0")) {
    if (!section["beta0"].is_array()) throw ConfigError("dgp.beta0 must be an array");
    Vector b(section["beta0"].size());
    for (std::size_t k = 0; k < section["beta0"].size(); ++k) b[k] = section["beta0"][k].get<double>();
    cfg.beta0 = Direction::normalized(b);
  } else {
    cfg.beta0 = Direction::normalized(Vector::Ones(cfg.d));
  }

  if (section.contains("heterogeneity")) {
    const json& het = section["heterogeneity"];
    check_keys(het, {"rule", "c1", "c2", "corr"}, "dgp.heterogeneity");
    const std::string rule = optional_string(het, "rule", "linear");
    if (rule != "linear")
      throw ConfigError("unsupported heterogeneity rule '" + rule + "'");
    if (het.contains("corr")) {
      if (het.contains("c1") || het.contains("c2"))
        throw ConfigError("dgp.heterogeneity: give either corr or (c1, c2)");
      cfg.het = Heterogeneity::from_corr_weight(het["corr"].get<double>());
    } else {
      cfg.het.c1 = require_number(het, "c1", "dgp.heterogeneity");
      cfg.het.c2 = require_number(het, "c2", "dgp.heterogeneity");
    }
  }

  const std::string w = optional_string(section, "w", "symmetric_abs_diff");
  if (w == "symmetric_abs_diff")
    cfg.w = PairwiseTransform::symmetric_abs_diff(cfg.d);
  else if (w == "asymmetric_last_coord")
    cfg.w = PairwiseTransform::asymmetric_last_coord(cfg.d);
  else {
    try {
      cfg.w = PairwiseTransform::custom(w);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }

  if (cfg.beta0.dim() != cfg.d) throw ConfigError("dgp.beta0 length must equal d");
  return cfg;
}

SearchConfig parse_search(const json& section) {
  check_keys(section, {"grid_points", "slack", "slack_floor", "margin", "max_rounds", "tol"},
             "search");
  SearchConfig cfg;
  cfg.grid_points = optional_int(section, "grid_points", cfg.grid_points);
  cfg.slack = optional_number(section, "slack", cfg.slack);
  cfg.slack_floor = optional_number(section, "slack_floor", cfg.slack_floor);
  cfg.margin = optional_int(section, "margin", cfg.margin);
  cfg.max_rounds = optional_int(section, "max_rounds", cfg.max_rounds);
  cfg.tol = optional_number(section, "tol", cfg.tol);
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

// ---------------------------------------------------------------------------
// Ingestion
// ---------------------------------------------------------------------------

namespace {

struct NodeTable {
  std::vector<std::string> ids;
  std::map<std::string, int> index;                 // id -> row in kept set
  std::map<std::string, std::vector<double>> cols;  // kept numeric columns
  int dropped = 0;
};

// Columns of the node table actually consumed by the recipe/first stage.
std::set<std::string> required_node_columns(const DataSpec& spec) {
  std::set<std::string> cols;
  for (const auto& step : spec.recipe)
    if (step.op == "abs_log_diff") cols.insert(step.column);
  for (const auto& fs : spec.first_stage) cols.insert(fs.column);
  return cols;
}

NodeTable read_nodes(const DataSpec& spec) {
  const CsvTable table = read_csv(spec.nodes_path);
  const int id_col = table.column(spec.node_id);
  const std::set<std::string> needed = required_node_columns(spec);
  std::map<std::string, int> col_idx;
  for (const auto& name : needed) col_idx[name] = table.column(name);

  // Log transforms require strictly positive values; anything else in a
  // required field drops the row.
  std::set<std::string> log_cols;
  for (const auto& step : spec.recipe)
    if (step.op == "abs_log_diff") log_cols.insert(step.column);
  for (const auto& fs : spec.first_stage)
    if (fs.transform == "log") log_cols.insert(fs.column);

  NodeTable nodes;
  for (const auto& name : needed) nodes.cols[name] = {};
  for (const auto& row : table.rows) {
    const std::string& id = row[id_col];
    bool ok = !id.empty();
    std::map<std::string, double> values;
    for (const auto& [name, c] : col_idx) {
      const auto v = try_parse_double(row[c]);
      if (!v || (log_cols.count(name) && *v <= 0.0)) {
        ok = false;
        break;
      }
      values[name] = *v;
    }
    if (!ok) {
      ++nodes.dropped;
      continue;
    }
    if (nodes.index.count(id)) throw DataError("duplicate node id '" + id + "'");
    nodes.index[id] = static_cast<int>(nodes.ids.size());
    nodes.ids.push_back(id);
    for (const auto& [name, v] : values) nodes.cols[name].push_back(v);
  }
  if (nodes.ids.size() < 4) throw DataError("fewer than 4 usable nodes after dropping rows");
  return nodes;
}

int parse_link(const std::string& raw, const LinkSpec& link) {
  const auto v = try_parse_double(raw);
  if (!v) return -1;  // missing
  if (link.rule == "binary") {
    if (*v == 0.0) return 0;
    if (*v == 1.0) return 1;
    throw DataError("link column contains a non-binary value '" + raw +
                    "' under rule 'binary'");
  }
  if (link.rule == "any_mention") return *v > 0.0 ? 1 : 0;
  throw ConfigError("unknown link rule '" + link.rule + "'");
}

}  // namespace

IngestResult ingest_dyadic(const DataSpec& spec) {
  if (spec.recipe.empty()) throw ConfigError("recipe must name at least one regressor");
  for (const auto& step : spec.recipe)
    if (step.op != "abs_log_diff" && step.op != "log_pair_value" && step.op != "pair_value")
      throw ConfigError("unknown recipe op '" + step.op + "'");
  if (spec.first_stage.empty() && !spec.pairwise_node_means)
    throw ConfigError("first_stage must name at least one node column");

  const NodeTable nodes = read_nodes(spec);
  const int n = static_cast<int>(nodes.ids.size());

  // dyad-level inputs
  const CsvTable dyads = read_csv(spec.dyads_path);
  const int ci = dyads.column(spec.dyad_i);
  const int cj = dyads.column(spec.dyad_j);
  const int clink = spec.edge_list ? -1 : dyads.column(spec.link.column);
  std::map<std::string, int> pair_cols;
  for (const auto& step : spec.recipe)
    if (step.op != "abs_log_diff" && !pair_cols.count(step.column))
      pair_cols[step.column] = dyads.column(step.column);

  Eigen::MatrixXi adjacency = Eigen::MatrixXi::Zero(n, n);
  Eigen::MatrixXi seen = Eigen::MatrixXi::Zero(n, n);  // ordered-pair row observed
  std::map<std::string, Matrix> pair_values;
  for (const auto& [name, c] : pair_cols)
    pair_values[name] = Matrix::Constant(n, n, std::numeric_limits<double>::quiet_NaN());

  long dropped_dyads = 0;
  for (const auto& row : dyads.rows) {
    auto it_i = nodes.index.find(row[ci]);
    auto it_j = nodes.index.find(row[cj]);
    int link = spec.edge_list ? 1 : parse_link(row[clink], spec.link);
    bool ok = it_i != nodes.index.end() && it_j != nodes.index.end() && link >= 0;
    std::map<std::string, double> pv;
    if (ok) {
      for (const auto& [name, c] : pair_cols) {
        const auto v = try_parse_double(row[c]);
        if (!v) {
          ok = false;
          break;
        }
        pv[name] = *v;
      }
    }
    if (!ok || it_i->second == it_j->second) {
      ++dropped_dyads;
      continue;
    }
    const int i = it_i->second, j = it_j->second;
    if (seen(i, j) && adjacency(i, j) != link)
      throw DataError("conflicting duplicate dyad rows for (" + row[ci] + "," + row[cj] + ")");
    if (seen(j, i) && adjacency(j, i) != link)
      throw DataError("asymmetric link entries for (" + row[ci] + "," + row[cj] + ")");
    seen(i, j) = 1;
    adjacency(i, j) = link;
    adjacency(j, i) = link;  // undirected network
    for (const auto& [name, v] : pv) pair_values[name](i, j) = v;
  }

  // pairwise recipe columns need every ordered pair
  for (const auto& [name, values] : pair_values) {
    long missing = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j && std::isnan(values(i, j))) ++missing;
    if (missing > 0)
      throw DataError("pairwise column '" + name + "' missing for " + std::to_string(missing) +
                      " ordered pairs");
  }

  IngestResult result;
  result.node_ids = nodes.ids;
  result.dropped_nodes = nodes.dropped;
  result.dropped_dyads = dropped_dyads;

  // first-stage covariates
  const int extra = spec.pairwise_node_means ? static_cast<int>(pair_cols.size()) : 0;
  result.net.covariates.resize(n, static_cast<int>(spec.first_stage.size()) + extra);
  for (std::size_t c = 0; c < spec.first_stage.size(); ++c) {
    const auto& fs = spec.first_stage[c];
    const auto& col = nodes.cols.at(fs.column);
    for (int i = 0; i < n; ++i) {
      const double v = col[i];
      result.net.covariates(i, static_cast<int>(c)) = fs.transform == "log" ? std::log(v) : v;
    }
  }
  if (spec.pairwise_node_means) {
    int c = static_cast<int>(spec.first_stage.size());
    for (const auto& [name, values] : pair_values) {
      for (int i = 0; i < n; ++i) {
        double sum = 0.0;
        for (int j = 0; j < n; ++j)
          if (j != i) sum += values(i, j);
        result.net.covariates(i, c) = sum / (n - 1);
      }
      ++c;
    }
  }
  result.net.adjacency = adjacency;
  result.net.validate();

  const double dens = result.net.density();
  if (dens == 0.0 || dens == 1.0)
    throw DataError("degenerate network: density is " + format_double(dens));

  // pairwise index tensor from the recipe
  const int d = static_cast<int>(spec.recipe.size());
  result.w_tensor.assign(n, Matrix::Zero(n, d));
  for (int c = 0; c < d; ++c) {
    const auto& step = spec.recipe[c];
    result.regressor_names.push_back(step.name.empty() ? step.op + "(" + step.column + ")"
                                                       : step.name);
    for (int i = 0; i < n; ++i) {
      for (int m = 0; m < n; ++m) {
        if (m == i) continue;
        double v = 0.0;
        if (step.op == "abs_log_diff") {
          const auto& col = nodes.cols.at(step.column);
          v = std::abs(std::log(col[i]) - std::log(col[m]));
        } else {
          const double raw = pair_values.at(step.column)(i, m);
          if (step.op == "log_pair_value") {
            if (raw <= 0.0)
              throw DataError("log_pair_value: non-positive value in column '" + step.column + "'");
            v = std::log(raw);
          } else {
            v = raw;
          }
        }
        result.w_tensor[static_cast<std::size_t>(i)](m, c) = v;
      }
    }
  }

  result.w_symmetric = true;
  for (int i = 0; i < n && result.w_symmetric; ++i)
    for (int m = 0; m < n; ++m)
      if (m != i &&
          (result.w_tensor[static_cast<std::size_t>(i)].row(m) -
           result.w_tensor[static_cast<std::size_t>(m)].row(i))
                  .cwiseAbs()
                  .maxCoeff() > 0.0) {
        result.w_symmetric = false;
        break;
      }

  return result;
}

}  // namespace ntunet

#include <ctime>
#include <filesystem>
#include <fstream>
#include <set>

#include "ntunet/common.hpp"
#include "ntunet/idset.hpp"
#include "ntunet/io.hpp"

namespace ntunet {

namespace {

constexpr std::uint64_t kEstimatePlanStream = 0xE57A;

std::string iso_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw DataError("cannot create output directory " + dir);
}

/// The manifest echoes the resolved config and isolates the only volatile
/// field (timestamp), so byte-identical inputs give byte-identical outputs
/// apart from that field.
void write_manifest(const std::string& dir, const std::string& command, const json& resolved,
                    const std::vector<std::string>& outputs, const json& notes) {
  json manifest;
  manifest["schema_version"] = 1;
  manifest["tool_version"] = version();
  manifest["command"] = command;
  manifest["config"] = resolved;
  manifest["config_hash"] = config_hash(resolved);
  manifest["outputs"] = outputs;
  manifest["notes"] = notes;
  manifest["timestamp"] = iso_timestamp();
  std::ofstream out(dir + "/manifest.json");
  if (!out) throw DataError("cannot write manifest in " + dir);
  out << manifest.dump(2) << '\n';
}

json resolve_common(const json& cfg, const CommandOverrides& ov, const std::string& command,
                    const std::set<std::string>& allowed) {
  for (auto it = cfg.begin(); it != cfg.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key '" + it.key() + "' in " + command + " config");
  json resolved = cfg;
  if (ov.seed) resolved["seed"] = *ov.seed;
  if (!resolved.contains("seed")) resolved["seed"] = 0;
  return resolved;
}

struct SweepCell {
  DgpConfig dgp;
  std::string label;
};

std::vector<SweepCell> expand_cells(const json& mc_section) {
  const json& base = mc_section.at("dgp");
  std::vector<SweepCell> cells;
  if (!mc_section.contains("sweep")) {
    cells.push_back({parse_dgp(base), "baseline"});
    return cells;
  }
  if (!mc_section["sweep"].is_array()) throw ConfigError("mc.sweep must be an array");
  for (const json& overrides : mc_section["sweep"]) {
    json merged = base;
    for (auto it = overrides.begin(); it != overrides.end(); ++it) merged[it.key()] = it.value();
    // beta0 defaults to the normalized ones vector of the cell's dimension
    if (!overrides.contains("beta0") && overrides.contains("d")) merged.erase("beta0");
    SweepCell cell;
    cell.dgp = parse_dgp(merged);
    cell.label = "n" + std::to_string(cell.dgp.n) + "_d" + std::to_string(cell.dgp.d);
    cells.push_back(std::move(cell));
  }
  return cells;
}

CsvRow report_row(const std::string& name, const Vector& values, int d, const std::string& hash) {
  CsvRow row{name};
  for (int h = 0; h < d; ++h)
    row.push_back(h < values.size() ? format_double(values[h]) : "");
  row.push_back(hash);
  return row;
}

}  // namespace

void cmd_simulate(const json& cfg, const std::string& out_dir, const CommandOverrides& ov) {
  const json resolved = resolve_common(cfg, ov, "simulate", {"schema_version", "seed", "threads", "mc"});
  if (!resolved.contains("mc")) throw ConfigError("simulate config requires an 'mc' section");
  const json& mc_section = resolved["mc"];
  for (auto it = mc_section.begin(); it != mc_section.end(); ++it)
    if (!std::set<std::string>{"replications", "m_pairs", "smoothing", "dgp", "search", "sweep"}
             .count(it.key()))
      throw ConfigError("unknown key '" + it.key() + "' in mc");
  if (!mc_section.contains("dgp")) throw ConfigError("mc requires a 'dgp' section");

  McConfig mc;
  mc.replications = mc_section.value("replications", 100);
  mc.m_pairs = mc_section.value("m_pairs", 1000);
  mc.smoothing = parse_smoothing(mc_section.value("smoothing", std::string("scaled_normal_cdf")));
  mc.search = mc_section.contains("search") ? parse_search(mc_section["search"]) : SearchConfig{};
  mc.base_seed = resolved["seed"].get<std::uint64_t>();
  if (mc.replications < 1) throw ConfigError("mc.replications must be >= 1");

  const unsigned threads = ov.threads ? ov.threads : resolved.value("threads", 0u);
  const std::vector<SweepCell> cells = expand_cells(mc_section);
  const std::string hash = config_hash(resolved);
  ensure_dir(out_dir);

  std::vector<CsvRow> raw_rows;
  std::vector<CsvRow> sweep_rows;
  std::vector<std::string> outputs;
  int max_d = 0;
  for (const auto& cell : cells) max_d = std::max(max_d, cell.dgp.d);

  for (const auto& cell : cells) {
    McConfig cell_mc = mc;
    cell_mc.dgp = cell.dgp;
    const std::vector<ReplicationResult> raw = run_monte_carlo(cell_mc, threads);
    const McReport report = compute_metrics(raw, cell.dgp.beta0);

    for (const auto& r : raw) {
      CsvRow row{cell.label, std::to_string(cell.dgp.n), std::to_string(cell.dgp.d),
                 std::to_string(r.b)};
      for (int h = 0; h < max_d; ++h)
        row.push_back(h < r.beta_lower.size() ? format_double(r.beta_lower[h]) : "");
      for (int h = 0; h < max_d; ++h)
        row.push_back(h < r.beta_upper.size() ? format_double(r.beta_upper[h]) : "");
      for (int h = 0; h < max_d; ++h)
        row.push_back(h < r.beta_mid.size() ? format_double(r.beta_mid[h]) : "");
      row.push_back(format_double(r.min_value));
      row.push_back(hash);
      raw_rows.push_back(std::move(row));
    }

    sweep_rows.push_back(CsvRow{
        cell.label, std::to_string(cell.dgp.n), std::to_string(cell.dgp.d),
        format_double(cell_mc.dgp.het.c1), support_name(cell.dgp.support),
        cell.dgp.w.symmetric() ? "symmetric" : "asymmetric", std::to_string(mc.replications),
        format_double(report.rmse), format_double(report.mnd), format_double(report.mmad), hash});

    if (cells.size() == 1) {
      const int d = cell.dgp.d;
      std::vector<CsvRow> rows;
      CsvRow header{"metric"};
      for (int h = 1; h <= d; ++h) header.push_back("beta_" + std::to_string(h));
      header.push_back("config_hash");
      rows.push_back(report_row("bias", report.bias, d, hash));
      rows.push_back(report_row("upper_bias", report.upper_bias, d, hash));
      rows.push_back(report_row("lower_bias", report.lower_bias, d, hash));
      rows.push_back(report_row("mean_width", report.mean_width, d, hash));
      rows.push_back(report_row("rmse", Vector::Constant(1, report.rmse), d, hash));
      rows.push_back(report_row("mnd", Vector::Constant(1, report.mnd), d, hash));
      rows.push_back(report_row("mmad", Vector::Constant(1, report.mmad), d, hash));
      write_csv(out_dir + "/report.csv", header, rows);
      outputs.push_back("report.csv");
    }
  }

  CsvRow raw_header{"cell", "n", "d", "b"};
  for (int h = 1; h <= max_d; ++h) raw_header.push_back("beta_lower_" + std::to_string(h));
  for (int h = 1; h <= max_d; ++h) raw_header.push_back("beta_upper_" + std::to_string(h));
  for (int h = 1; h <= max_d; ++h) raw_header.push_back("beta_mid_" + std::to_string(h));
  raw_header.push_back("min_value");
  raw_header.push_back("config_hash");
  write_csv(out_dir + "/raw_results.csv", raw_header, raw_rows);
  outputs.push_back("raw_results.csv");

  if (cells.size() > 1) {
    write_csv(out_dir + "/sweep_report.csv",
              {"cell", "n", "d", "c1", "support", "w", "replications", "rmse", "mnd", "mmad",
               "config_hash"},
              sweep_rows);
    outputs.push_back("sweep_report.csv");
  }

  json notes;
  notes["cells"] = cells.size();
  write_manifest(out_dir, "simulate", resolved, outputs, notes);
}

void cmd_estimate(const json& cfg, const std::string& out_dir, const CommandOverrides& ov) {
  const json resolved = resolve_common(
      cfg, ov, "estimate", {"schema_version", "seed", "threads", "data", "criterion", "search"});
  if (!resolved.contains("data")) throw ConfigError("estimate config requires a 'data' section");
  const json& data = resolved["data"];
  for (auto it = data.begin(); it != data.end(); ++it)
    if (!std::set<std::string>{"nodes", "dyads", "node_id", "dyad_i", "dyad_j", "edge_list",
                               "link", "recipe", "first_stage"}
             .count(it.key()))
      throw ConfigError("unknown key '" + it.key() + "' in data");

  DataSpec spec;
  spec.nodes_path = data.value("nodes", std::string());
  spec.dyads_path = data.value("dyads", std::string());
  if (spec.nodes_path.empty() || spec.dyads_path.empty())
    throw ConfigError("data requires 'nodes' and 'dyads' paths");
  spec.node_id = data.value("node_id", std::string("id"));
  spec.dyad_i = data.value("dyad_i", std::string("i"));
  spec.dyad_j = data.value("dyad_j", std::string("j"));
  spec.edge_list = data.value("edge_list", false);
  if (data.contains("link")) {
    spec.link.column = data["link"].value("column", std::string("link"));
    spec.link.rule = data["link"].value("rule", std::string("binary"));
  }
  if (!data.contains("recipe") || !data["recipe"].is_array())
    throw ConfigError("data requires a 'recipe' array");
  for (const json& step : data["recipe"]) {
    RecipeStep rs;
    rs.op = step.value("op", std::string());
    rs.column = step.value("column", std::string());
    rs.name = step.value("name", std::string());
    spec.recipe.push_back(std::move(rs));
  }
  if (data.contains("first_stage")) {
    const json& fs = data["first_stage"];
    for (const json& col : fs.value("node_columns", json::array())) {
      FirstStageColumn c;
      c.column = col.value("column", std::string());
      c.transform = col.value("transform", std::string());
      spec.first_stage.push_back(std::move(c));
    }
    spec.pairwise_node_means = fs.value("pairwise_node_means", false);
  }

  const IngestResult ingest = ingest_dyadic(spec);
  const int n = static_cast<int>(ingest.net.n());
  const std::uint64_t seed = resolved["seed"].get<std::uint64_t>();
  const unsigned threads = ov.threads ? ov.threads : resolved.value("threads", 0u);

  int m_pairs = 1000;
  SmoothingKind smoothing = SmoothingKind::ScaledNormalCdf;
  if (resolved.contains("criterion")) {
    const json& crit = resolved["criterion"];
    for (auto it = crit.begin(); it != crit.end(); ++it)
      if (!std::set<std::string>{"m_pairs", "smoothing"}.count(it.key()))
        throw ConfigError("unknown key '" + it.key() + "' in criterion");
    m_pairs = crit.value("m_pairs", m_pairs);
    smoothing = parse_smoothing(crit.value("smoothing", std::string("scaled_normal_cdf")));
  }
  const SearchConfig search =
      resolved.contains("search") ? parse_search(resolved["search"]) : SearchConfig{};

  SplineBasis basis;
  try {
    basis = build_basis(ingest.net.covariates);
  } catch (const std::invalid_argument& e) {
    throw DataError(e.what());
  }
  const std::vector<RhoEstimate> fits = fit_all_rho(ingest.net, basis, threads);
  const Matrix rho_at = rho_hat_matrix(fits, ingest.net.covariates, threads);

  const long long max_pairs = static_cast<long long>(n) * (n - 1);
  const int m_eff = static_cast<int>(std::min<long long>(m_pairs, max_pairs));
  const TetradPlan plan = make_tetrad_plan(n, m_eff, substream_key(seed, kEstimatePlanStream));

  const CriterionEvaluator eval(ingest.w_tensor, rho_at, plan, smoothing, ingest.w_symmetric);
  const int d = static_cast<int>(spec.recipe.size());
  EstimateResult est;
  try {
    est = minimize([&](const Vector& beta) { return eval.value(beta); }, d, search, threads);
  } catch (const std::runtime_error& e) {
    throw NumericError(e.what());
  }

  ensure_dir(out_dir);
  const std::string hash = config_hash(resolved);
  std::vector<CsvRow> rows;
  for (int h = 0; h < d; ++h)
    rows.push_back(CsvRow{ingest.regressor_names[h], format_double(est.beta_mid[h]),
                          format_double(est.beta_lower[h]), format_double(est.beta_upper[h]),
                          hash});
  write_csv(out_dir + "/estimate.csv",
            {"regressor", "beta_mid", "beta_lower", "beta_upper", "config_hash"}, rows);

  json notes;
  notes["nodes_used"] = n;
  notes["dropped_nodes"] = ingest.dropped_nodes;
  notes["dropped_dyads"] = ingest.dropped_dyads;
  notes["density"] = ingest.net.density();
  notes["m_pairs_effective"] = m_eff;
  notes["w_symmetric"] = ingest.w_symmetric;
  notes["criterion_min"] = est.min_value;
  notes["evaluations"] = est.evaluations;
  write_manifest(out_dir, "estimate", resolved, {"estimate.csv"}, notes);
}

void cmd_idset(const json& cfg, const std::string& out_dir, const CommandOverrides& ov) {
  const json resolved =
      resolve_common(cfg, ov, "idset", {"schema_version", "seed", "threads", "idset"});
  if (!resolved.contains("idset")) throw ConfigError("idset config requires an 'idset' section");
  const json& section = resolved["idset"];
  for (auto it = section.begin(); it != section.end(); ++it)
    if (!std::set<std::string>{"conditions", "n", "m_pairs", "resolution_deg", "dgp"}.count(
            it.key()))
      throw ConfigError("unknown key '" + it.key() + "' in idset");
  if (!section.contains("dgp")) throw ConfigError("idset requires a 'dgp' section");

  DgpConfig base = parse_dgp(section["dgp"]);
  base.seed = resolved["seed"].get<std::uint64_t>();
  if (base.d != 3) throw ConfigError("idset grids require d == 3");
  const int n = section.value("n", 1000);
  const int m = section.value("m_pairs", 10000);
  const double resolution = section.value("resolution_deg", 1.0);
  const unsigned threads = ov.threads ? ov.threads : resolved.value("threads", 0u);

  std::vector<SupportKind> conditions;
  if (section.contains("conditions")) {
    for (const json& name : section["conditions"])
      conditions.push_back(parse_support(name.get<std::string>()));
  } else {
    conditions = {SupportKind::AllContinuous, SupportKind::Binary1, SupportKind::Binary1Discrete2,
                  SupportKind::AllDiscrete101, SupportKind::AllDiscrete11};
  }

  ensure_dir(out_dir);
  const std::string hash = config_hash(resolved);
  std::vector<std::string> outputs;
  std::vector<CsvRow> summary;
  for (const SupportKind condition : conditions) {
    DgpConfig cfg_c = base;
    cfg_c.support = condition;
    IdSetGrid grid;
    try {
      grid = compute_idset(cfg_c, n, m, resolution, threads);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }

    std::vector<CsvRow> rows;
    rows.reserve(static_cast<std::size_t>(grid.value.size()));
    for (Index r = 0; r < grid.theta1.size(); ++r)
      for (Index c = 0; c < grid.theta2.size(); ++c)
        rows.push_back(CsvRow{format_double(grid.theta1[r]), format_double(grid.theta2[c]),
                              format_double(grid.value(r, c)),
                              grid.member(r, c) ? "1" : "0", hash});
    const std::string file = std::string("idset_") + support_name(condition) + ".csv";
    write_csv(out_dir + "/" + file, {"theta1", "theta2", "value", "member", "config_hash"}, rows);
    outputs.push_back(file);

    const AngleBox rect = grid.bounding_rect();
    summary.push_back(CsvRow{
        support_name(condition), std::to_string(n), std::to_string(m), format_double(resolution),
        format_double(grid.min_value), format_double(grid.tol),
        std::to_string(grid.member_count()), format_double(grid.area()),
        format_double(grid.angular_diameter_deg()), format_double(rect.lower[0]),
        format_double(rect.upper[0]), format_double(rect.lower[1]), format_double(rect.upper[1]),
        grid.contains(base.beta0) ? "1" : "0", hash});
  }
  write_csv(out_dir + "/idset_summary.csv",
            {"condition", "n", "m_pairs", "resolution_deg", "min_value", "tol", "member_count",
             "area", "angular_diameter_deg", "theta1_lo", "theta1_hi", "theta2_lo", "theta2_hi",
             "beta0_member", "config_hash"},
            summary);
  outputs.push_back("idset_summary.csv");

  json notes;
  notes["conditions"] = static_cast<int>(conditions.size());
  write_manifest(out_dir, "idset", resolved, outputs, notes);
}

}  // namespace ntunet

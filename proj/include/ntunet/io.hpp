#pragma once

#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ntunet/criterion.hpp"
#include "ntunet/dgp.hpp"
#include "ntunet/mc.hpp"
#include "ntunet/search.hpp"

namespace ntunet {

using json = nlohmann::json;

// Error taxonomy mirrored in CLI exit codes: config 2, data 3, numeric 4.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// CSV (RFC-4180-style quoting, UTF-8, '.' decimal separator).
// ---------------------------------------------------------------------------

using CsvRow = std::vector<std::string>;

struct CsvTable {
  CsvRow header;
  std::vector<CsvRow> rows;

  /// Column index by header name; throws DataError when absent.
  int column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);
void write_csv(const std::string& path, const CsvRow& header, const std::vector<CsvRow>& rows);

std::string format_double(double v);
/// Locale-independent strict parse; empty or malformed -> no value.
std::optional<double> try_parse_double(const std::string& s);

// ---------------------------------------------------------------------------
// Configuration documents (JSON, schema-versioned, unknown keys rejected).
// ---------------------------------------------------------------------------

json load_config_file(const std::string& path);
/// FNV-1a over the canonical (sorted-key) dump.
std::string config_hash(const json& cfg);

DgpConfig parse_dgp(const json& section);
SearchConfig parse_search(const json& section);
SmoothingKind parse_smoothing(const std::string& name);
SupportKind parse_support(const std::string& name);
const char* support_name(SupportKind kind);

// ---------------------------------------------------------------------------
// Dyadic dataset ingestion (node table + dyad table or edge list, plus a
// pairwise regressor recipe).
// ---------------------------------------------------------------------------

struct RecipeStep {
  std::string op;      // abs_log_diff | log_pair_value | pair_value
  std::string column;  // node column for abs_log_diff, dyad column otherwise
  std::string name;    // output regressor name (defaults to op(column))
};

struct LinkSpec {
  std::string column = "link";
  std::string rule = "binary";  // binary | any_mention (either mention level counts as a link)
};

struct FirstStageColumn {
  std::string column;
  std::string transform;  // "" | "log"
};

struct DataSpec {
  std::string nodes_path;
  std::string dyads_path;
  std::string node_id = "id";
  std::string dyad_i = "i";
  std::string dyad_j = "j";
  bool edge_list = false;  // dyads file lists linked pairs only
  LinkSpec link;
  std::vector<RecipeStep> recipe;
  std::vector<FirstStageColumn> first_stage;
  bool pairwise_node_means = false;  // experimental: per-node means of pairwise columns
};

struct IngestResult {
  std::vector<std::string> node_ids;
  NetworkData net;                 // adjacency + first-stage covariates
  std::vector<Matrix> w_tensor;    // recipe pairwise index, T[i].row(m) = W_im
  std::vector<std::string> regressor_names;
  int dropped_nodes = 0;
  long dropped_dyads = 0;
  bool w_symmetric = true;
};

/// Drops node/dyad rows with missing required fields (counted), enforces
/// D_ij == D_ji, and requires full ordered-pair coverage for pairwise recipe
/// columns.
IngestResult ingest_dyadic(const DataSpec& spec);

// ---------------------------------------------------------------------------
// Commands (the CLI maps exceptions to exit codes).
// ---------------------------------------------------------------------------

struct CommandOverrides {
  std::optional<std::uint64_t> seed;
  unsigned threads = 0;  // 0 = hardware default
};

void cmd_simulate(const json& cfg, const std::string& out_dir, const CommandOverrides& ov = {});
void cmd_estimate(const json& cfg, const std::string& out_dir, const CommandOverrides& ov = {});
void cmd_idset(const json& cfg, const std::string& out_dir, const CommandOverrides& ov = {});

}  // namespace ntunet

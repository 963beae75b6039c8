#include "kinex/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>
#include <system_error>

#include "kinex/error.hpp"

namespace kinex::io {

using nlohmann::ordered_json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (v == 0.0) return "0";  // folds -0 as well
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

std::string format_number(std::uint64_t v) {
  std::array<char, 24> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), ptr);
}

namespace {

std::string opt_number(const std::optional<double>& v) { return v ? format_number(*v) : ""; }

[[noreturn]] void parse_error(const std::string& path, const std::string& msg) {
  throw Error(ErrorKind::ParseError, path + ": " + msg);
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.emplace_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& fields) {
  std::string line;
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) line += ',';
    line += fields[k];
  }
  return line;
}

}  // namespace

std::optional<std::size_t> CsvTable::column(std::string_view name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return k;
  }
  return std::nullopt;
}

std::string CsvTable::to_string() const {
  std::string out = join(header) + '\n';
  for (const auto& row : rows) out += join(row) + '\n';
  return out;
}

CsvTable parse_csv(std::string_view text) {
  CsvTable table;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    auto fields = split(line);
    if (table.header.empty()) {
      table.header = std::move(fields);
      continue;
    }
    if (fields.size() != table.header.size()) {
      parse_error("line " + std::to_string(line_no),
                  "expected " + std::to_string(table.header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    table.rows.push_back(std::move(fields));
  }
  if (table.header.empty()) parse_error("csv", "missing header row");
  return table;
}

const std::vector<std::string> kSweepColumns = {"model", "lambda", "xi",        "tp",
                                                "gamma", "x_ex",   "x_nx",      "replicate",
                                                "seed",  "g",      "f",         "f_over_g"};

const std::vector<std::string> kTimeseriesColumns = {"t", "gini", "cum_volume", "f_running"};

std::string timeseries_csv(const SimRecord& record) {
  CsvTable t{kTimeseriesColumns, {}};
  for (const Checkpoint& c : record.checkpoints) {
    t.rows.push_back({format_number(c.t), format_number(c.gini), format_number(c.volume_sum),
                      format_number(c.f_running)});
  }
  return t.to_string();
}

std::string snapshot_csv(const Snapshot& snapshot) {
  CsvTable t{{"rank", "wealth"}, {}};
  for (std::size_t k = 0; k < snapshot.wealth.size(); ++k) {
    t.rows.push_back({format_number(static_cast<std::uint64_t>(k + 1)),
                      format_number(snapshot.wealth[k])});
  }
  return t.to_string();
}

ordered_json model_json(const ModelSpec& model) {
  ordered_json j;
  j["model"] = std::string(to_string(model.kind));
  j["lambda"] = model.lambda;
  if (model.xi) j["xi"] = *model.xi;
  if (model.tp) j["tp"] = *model.tp;
  if (model.gamma) j["gamma"] = *model.gamma;
  return j;
}

ordered_json config_json(const SimConfig& config) {
  ordered_json j = model_json(config.model);
  j["n"] = config.n_agents;
  j["t_max"] = config.t_max;
  j["seed"] = config.seed;
  j["initial_wealth"] = config.initial_wealth;
  j["checkpoints"] = config.checkpoint_times;
  j["snapshots"] = config.snapshot_times;
  j["rng"] = kRngName;
  return j;
}

std::string summary_json(const SimRecord& record) {
  ordered_json j;
  j["final_g"] = record.final_gini;
  j["final_f"] = record.final_f;
  if (record.final_gini > 0.0) {
    j["f_over_g"] = record.final_f / record.final_gini;
  } else {
    j["f_over_g"] = nullptr;
  }
  j["redistributions"] = record.redistributions;
  j["config"] = config_json(record.config);
  return j.dump(2) + '\n';
}

std::string sweep_csv(std::span<const SweepRow> rows) {
  CsvTable t{kSweepColumns, {}};
  for (const SweepRow& r : rows) {
    const ModelSpec& m = r.model;
    t.rows.push_back({std::string(to_string(m.kind)), format_number(m.lambda), opt_number(m.xi),
                      m.tp ? format_number(*m.tp) : "", opt_number(m.gamma),
                      opt_number(x_ex(m)), opt_number(x_nx(m)),
                      format_number(static_cast<std::uint64_t>(r.replicate)),
                      format_number(r.seed), format_number(r.g), format_number(r.f),
                      opt_number(r.f_over_g)});
  }
  return t.to_string();
}

double parse_number(std::string_view cell, const std::string& where) {
  double v = 0.0;
  const char* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, v);
  if (cell.empty() || ec != std::errc() || ptr != end) {
    parse_error(where, "not a number: '" + std::string(cell) + "'");
  }
  return v;
}

std::vector<SweepRow> parse_sweep_csv(const CsvTable& table) {
  std::vector<std::size_t> idx;
  for (const std::string& name : kSweepColumns) {
    auto c = table.column(name);
    if (!c) parse_error("header", "missing column '" + name + "'");
    idx.push_back(*c);
  }
  auto u64 = [](std::string_view cell, const std::string& where) {
    std::uint64_t v = 0;
    const char* end = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (cell.empty() || ec != std::errc() || ptr != end) {
      parse_error(where, "not an unsigned integer: '" + std::string(cell) + "'");
    }
    return v;
  };

  std::vector<SweepRow> rows;
  std::map<std::vector<std::string>, std::size_t> point_ids;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& cells = table.rows[r];
    auto cell = [&](std::size_t col) -> const std::string& { return cells[idx[col]]; };
    auto where = [&](std::size_t col) {
      return "row " + std::to_string(r + 1) + " column '" + kSweepColumns[col] + "'";
    };
    SweepRow row;
    try {
      row.model.kind = parse_model_kind(cell(0));
    } catch (const Error& e) {
      parse_error(where(0), e.what());
    }
    row.model.lambda = parse_number(cell(1), where(1));
    if (!cell(2).empty()) row.model.xi = parse_number(cell(2), where(2));
    if (!cell(3).empty()) row.model.tp = u64(cell(3), where(3));
    if (!cell(4).empty()) row.model.gamma = parse_number(cell(4), where(4));
    row.replicate = u64(cell(7), where(7));
    row.seed = u64(cell(8), where(8));
    row.g = parse_number(cell(9), where(9));
    row.f = parse_number(cell(10), where(10));
    if (!cell(11).empty()) row.f_over_g = parse_number(cell(11), where(11));
    const std::vector<std::string> key = {cell(0), cell(1), cell(2), cell(3), cell(4)};
    row.point = point_ids.emplace(key, point_ids.size()).first->second;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string aggregate_csv(std::span<const PointSummary> summaries) {
  CsvTable t{{"model", "lambda", "xi", "tp", "gamma", "x_ex", "x_nx", "n", "mean_g", "sd_g",
              "mean_f", "sd_f", "mean_f_over_g", "sd_f_over_g", "f_over_g_excluded",
              "mean_f_over_mean_g"},
             {}};
  for (const PointSummary& s : summaries) {
    const ModelSpec& m = s.model;
    t.rows.push_back(
        {std::string(to_string(m.kind)), format_number(m.lambda), opt_number(m.xi),
         m.tp ? format_number(*m.tp) : "", opt_number(m.gamma), opt_number(x_ex(m)),
         opt_number(x_nx(m)), format_number(static_cast<std::uint64_t>(s.g.n)),
         format_number(s.g.mean), format_number(s.g.sd), format_number(s.f.mean),
         format_number(s.f.sd), s.f_over_g ? format_number(s.f_over_g->mean) : "",
         s.f_over_g ? format_number(s.f_over_g->sd) : "",
         format_number(static_cast<std::uint64_t>(s.f_over_g_excluded)),
         opt_number(s.ratio_of_means)});
  }
  return t.to_string();
}

ordered_json fit_json(const FitResult& fit) {
  ordered_json j;
  j["family"] = std::string(to_string(fit.family));
  if (fit.family == FitFamily::Saturation) {
    j["coefficients"] = {{"a", fit.c0}, {"b", fit.c1}};
  } else {
    j["coefficients"] = {{"slope", fit.c0}, {"intercept", fit.c1}};
  }
  if (fit.degenerate) {
    j["r_squared"] = nullptr;
  } else {
    j["r_squared"] = fit.r_squared;
  }
  j["degenerate"] = fit.degenerate;
  j["n_points"] = fit.n_points;
  double max_abs = 0.0;
  for (double r : fit.residuals) max_abs = std::max(max_abs, std::abs(r));
  j["residuals"] = {{"rss", fit.rss},
                    {"rms", fit.n_points ? std::sqrt(fit.rss / static_cast<double>(fit.n_points))
                                         : 0.0},
                    {"max_abs", max_abs}};
  return j;
}

std::string histogram_csv(const Histogram& h) {
  CsvTable t{{"bin_lo", "bin_hi", "count", "density"}, {}};
  const double n = static_cast<double>(h.total());
  for (std::size_t k = 0; k < h.counts.size(); ++k) {
    const double width = h.edges[k + 1] - h.edges[k];
    t.rows.push_back({format_number(h.edges[k]), format_number(h.edges[k + 1]),
                      format_number(h.counts[k]),
                      format_number(static_cast<double>(h.counts[k]) / (n * width))});
  }
  return t.to_string();
}

namespace {

double unit_number(const ordered_json& v, const std::string& path) {
  if (!v.is_number()) parse_error(path, "expected a number");
  const double d = v.get<double>();
  if (!(d >= 0.0 && d <= 1.0)) parse_error(path, "must lie within [0,1]");
  return d;
}

std::uint64_t positive_int(const ordered_json& v, const std::string& path) {
  if (!v.is_number_unsigned() || v.get<std::uint64_t>() < 1) {
    parse_error(path, "expected a positive integer");
  }
  return v.get<std::uint64_t>();
}

template <class T, class Fn>
std::vector<T> list(const ordered_json& v, const std::string& key, Fn&& item) {
  if (!v.is_array() || v.empty()) parse_error(key, "expected a non-empty array");
  std::vector<T> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(item(v[k], key + "[" + std::to_string(k) + "]"));
  }
  return out;
}

}  // namespace

SweepGrid parse_grid_config(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    parse_error("$", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) parse_error("$", "expected a JSON object");

  static const std::vector<std::string> known = {"model",      "n",     "t_max", "master_seed",
                                                 "lambda",     "xi",    "tp",    "gamma",
                                                 "replicates", "initial_wealth"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      parse_error(key, "unknown key");
    }
  }
  for (const char* required : {"model", "n", "t_max", "master_seed", "lambda"}) {
    if (!doc.contains(required)) parse_error(required, "missing required key");
  }

  SweepGrid grid;
  if (!doc["model"].is_string()) parse_error("model", "expected a string");
  try {
    grid.model = parse_model_kind(doc["model"].get<std::string>());
  } catch (const Error& e) {
    parse_error("model", e.what());
  }
  grid.n_agents = positive_int(doc["n"], "n");
  if (grid.n_agents < 2) parse_error("n", "must be >= 2");
  grid.t_max = positive_int(doc["t_max"], "t_max");
  if (!doc["master_seed"].is_number_unsigned()) {
    parse_error("master_seed", "expected a non-negative integer");
  }
  grid.master_seed = doc["master_seed"].get<std::uint64_t>();
  grid.lambda = list<double>(doc["lambda"], "lambda", unit_number);

  const bool ex = grid.model == ModelKind::Ex;
  const bool nx = grid.model == ModelKind::Nx;
  for (const char* key : {"xi", "tp"}) {
    if (doc.contains(key) && !ex) {
      parse_error(key, std::string("not allowed for model '") + std::string(to_string(grid.model)) + "'");
    }
  }
  if (doc.contains("gamma") && !nx) {
    parse_error("gamma", std::string("not allowed for model '") + std::string(to_string(grid.model)) + "'");
  }
  if (ex) {
    if (!doc.contains("xi")) parse_error("xi", "missing required key for model 'ex'");
    if (!doc.contains("tp")) parse_error("tp", "missing required key for model 'ex'");
    grid.xi = list<double>(doc["xi"], "xi", unit_number);
    grid.tp = list<std::uint64_t>(doc["tp"], "tp", positive_int);
  }
  if (nx) {
    if (!doc.contains("gamma")) parse_error("gamma", "missing required key for model 'nx'");
    grid.gamma = list<double>(doc["gamma"], "gamma", unit_number);
  }
  if (doc.contains("replicates")) {
    grid.replicates = positive_int(doc["replicates"], "replicates");
  }
  if (doc.contains("initial_wealth")) {
    const auto& w = doc["initial_wealth"];
    if (!w.is_number() || !(w.get<double>() > 0.0)) {
      parse_error("initial_wealth", "expected a positive number");
    }
    grid.initial_wealth = w.get<double>();
  }
  try {
    grid.validate();
  } catch (const Error& e) {
    parse_error("$", e.what());
  }
  return grid;
}

std::string serialize_grid(const SweepGrid& grid) {
  ordered_json j;
  j["model"] = std::string(to_string(grid.model));
  j["n"] = grid.n_agents;
  j["t_max"] = grid.t_max;
  j["master_seed"] = grid.master_seed;
  j["lambda"] = grid.lambda;
  if (grid.model == ModelKind::Ex) {
    j["xi"] = grid.xi;
    j["tp"] = grid.tp;
  }
  if (grid.model == ModelKind::Nx) j["gamma"] = grid.gamma;
  j["replicates"] = grid.replicates;
  j["initial_wealth"] = grid.initial_wealth;
  return j.dump(2) + '\n';
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int k = 0; k < len; ++k) {
    out += hex[digest[k] >> 4];
    out += hex[digest[k] & 0xf];
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void OutputSet::add(std::string name, std::string content) {
  files_.emplace_back(std::move(name), std::move(content));
}

void OutputSet::commit(const ordered_json& echo, std::string_view started_at) const {
  std::filesystem::create_directories(dir_);
  ordered_json manifest;
  manifest["tool"] = kToolName;
  manifest["version"] = kToolVersion;
  manifest["rng"] = kRngName;
  manifest["config"] = echo;
  manifest["started_at"] = std::string(started_at);
  ordered_json files = ordered_json::array();
  for (const auto& [name, content] : files_) {
    write_file_atomic(dir_ / name, content);
    files.push_back({{"name", name}, {"bytes", content.size()}, {"sha256", sha256_hex(content)}});
  }
  manifest["files"] = files;
  manifest["finished_at"] = utc_timestamp();
  write_file_atomic(dir_ / "manifest.json", manifest.dump(2) + '\n');
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf.data();
}

}  // namespace kinex::io

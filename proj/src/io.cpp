#include "clickstat/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "clickstat/errors.hpp"

namespace clickstat::io {
namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

double parse_double(const std::string& text, const std::string& where) {
  double v = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(where + ": expected a number, got '" + text + "'");
  }
  return v;
}

long long parse_int(const std::string& text, const std::string& where) {
  long long v = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    throw ParseError(where + ": expected an integer, got '" + text + "'");
  }
  return v;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path.string() + "'");
  return in;
}

bool starts_with_brace(std::istream& in) {
  in >> std::ws;
  return in.peek() == '{';
}

json read_json(std::istream& in, const std::string& source) {
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(source + ": invalid JSON (" + e.what() + ")");
  }
}

template <typename T>
std::vector<T> json_vector(const json& doc, const char* key, const std::string& source) {
  if (!doc.contains(key) || !doc.at(key).is_array()) {
    throw ParseError(source + ": missing array '" + key + "'");
  }
  try {
    return doc.at(key).get<std::vector<T>>();
  } catch (const json::exception& e) {
    throw ParseError(source + ": bad '" + key + "' (" + e.what() + ")");
  }
}

// Second column of a two-column table whose first column is 0, 1, 2, ...
std::vector<double> indexed_column(const Table& t, const std::string& source) {
  std::vector<double> col;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    const auto& row = t.rows[i];
    if (row.size() != 2) throw ParseError(source + ": expected 2 columns per row");
    if (row[0] != static_cast<double>(i)) {
      throw ParseError(source + ": rows must be indexed 0, 1, 2, ... in order");
    }
    col.push_back(row[1]);
  }
  if (col.empty()) throw ParseError(source + ": table has no rows");
  return col;
}

std::vector<std::uint64_t> to_counts(const std::vector<double>& values, const std::string& source) {
  std::vector<std::uint64_t> out;
  for (double v : values) {
    if (!(v >= 0.0) || v != std::floor(v)) {
      throw ParseError(source + ": counts must be non-negative integers");
    }
    out.push_back(static_cast<std::uint64_t>(v));
  }
  return out;
}

json header(const char* kind) { return json{{"schema_version", kSchemaVersion}, {"kind", kind}}; }

void write_row(std::ostream& out, std::initializer_list<std::string> cells) {
  bool first = true;
  for (const auto& c : cells) {
    if (!first) out << ',';
    out << c;
    first = false;
  }
  out << '\n';
}

std::string condition_label(const std::optional<int>& k) {
  return k ? std::to_string(*k) : std::string("none");
}

std::string arm_label(Arm a) { return a == Arm::first ? "1" : "2"; }

}  // namespace

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

KeyValueDocument KeyValueDocument::parse(std::istream& in, const std::string& source) {
  KeyValueDocument doc;
  doc.source_ = source;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find_first_of("=:");
    if (eq == std::string::npos) {
      throw ParseError(source + ":" + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key = trim(std::string_view(body).substr(0, eq));
    std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key.empty()) throw ParseError(source + ":" + std::to_string(line_no) + ": empty key");
    if (!doc.values_.emplace(key, value).second) {
      throw ParseError(source + ":" + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
  }
  return doc;
}

KeyValueDocument KeyValueDocument::load(const std::filesystem::path& path) {
  auto in = open_input(path);
  return parse(in, path.string());
}

std::string KeyValueDocument::get_string(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ParseError(source_ + ": missing key '" + key + "'");
  return it->second;
}

double KeyValueDocument::get_double(const std::string& key) const {
  return parse_double(get_string(key), source_ + ": " + key);
}

double KeyValueDocument::get_double(const std::string& key, double fallback) const {
  return has(key) ? get_double(key) : fallback;
}

long long KeyValueDocument::get_int(const std::string& key) const {
  return parse_int(get_string(key), source_ + ": " + key);
}

long long KeyValueDocument::get_int(const std::string& key, long long fallback) const {
  return has(key) ? get_int(key) : fallback;
}

std::vector<double> KeyValueDocument::get_doubles(const std::string& key) const {
  std::string text = get_string(key);
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream ss(text);
  std::vector<double> out;
  std::string tok;
  while (ss >> tok) out.push_back(parse_double(tok, source_ + ": " + key));
  return out;
}

void KeyValueDocument::require_known(const std::vector<std::string>& known) const {
  for (const auto& [key, value] : values_) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw ParseError(source_ + ": unknown key '" + key + "'");
    }
  }
}

std::vector<std::string> detector_keys(const std::string& prefix) {
  return {prefix + "n_bins", prefix + "bin_weights", prefix + "efficiency",
          prefix + "dark_click_prob"};
}

DetectorModel detector_from(const KeyValueDocument& doc, const std::string& prefix) {
  const double eta = doc.get_double(prefix + "efficiency", 1.0);
  const double dark = doc.get_double(prefix + "dark_click_prob", 0.0);
  if (doc.has(prefix + "bin_weights")) {
    std::vector<double> w = doc.get_doubles(prefix + "bin_weights");
    if (doc.has(prefix + "n_bins") &&
        doc.get_int(prefix + "n_bins") != static_cast<long long>(w.size())) {
      throw ParseError(prefix + "n_bins does not match the number of bin_weights");
    }
    return DetectorModel(std::move(w), eta, dark);
  }
  return DetectorModel(static_cast<int>(doc.get_int(prefix + "n_bins")), eta, dark);
}

DetectorModel load_detector(const std::filesystem::path& path) {
  const KeyValueDocument doc = KeyValueDocument::load(path);
  doc.require_known(detector_keys());
  return detector_from(doc);
}

CatalysisSweepConfig catalysis_config_from(const KeyValueDocument& doc) {
  std::vector<std::string> known = {"alpha_mean", "reflectivities", "r_points", "k_herald",
                                    "herald.mode", "signal_eta", "inversion_n_max",
                                    "expected_total_events", "n_replicas", "seed"};
  for (auto& k : detector_keys("herald.")) known.push_back(k);
  for (auto& k : detector_keys("signal.")) known.push_back(k);
  doc.require_known(known);

  CatalysisSweepConfig cfg;
  cfg.alpha_mean = doc.get_double("alpha_mean", cfg.alpha_mean);
  if (doc.has("reflectivities")) {
    cfg.reflectivities = doc.get_doubles("reflectivities");
  } else if (doc.has("r_points")) {
    cfg.reflectivities = evenly_spaced_reflectivities(static_cast<int>(doc.get_int("r_points")));
  }
  cfg.k_herald = static_cast<int>(doc.get_int("k_herald", cfg.k_herald));

  const std::string mode = doc.has("herald.mode") ? doc.get_string("herald.mode") : "multiplexed";
  if (mode == "ideal") {
    cfg.herald = HeraldModel::ideal();
  } else if (mode == "on_off") {
    cfg.herald = HeraldModel::on_off(doc.get_double("herald.efficiency", 1.0),
                                     doc.get_double("herald.dark_click_prob", 0.0));
  } else if (mode == "multiplexed") {
    if (doc.has("herald.n_bins") || doc.has("herald.bin_weights")) {
      cfg.herald = HeraldModel::multiplexed(detector_from(doc, "herald."));
    } else if (doc.has("herald.efficiency") || doc.has("herald.dark_click_prob")) {
      cfg.herald = HeraldModel::multiplexed(
          DetectorModel(cfg.herald.detector().n_bins(), doc.get_double("herald.efficiency", 1.0),
                        doc.get_double("herald.dark_click_prob", 0.0)));
    }
  } else {
    throw ParseError("herald.mode must be multiplexed, ideal or on_off, got '" + mode + "'");
  }

  cfg.signal_eta = doc.get_double("signal_eta", cfg.signal_eta);
  if (doc.has("signal.n_bins") || doc.has("signal.bin_weights")) {
    cfg.signal_det = detector_from(doc, "signal.");
  } else if (doc.has("signal.efficiency") || doc.has("signal.dark_click_prob")) {
    cfg.signal_det = DetectorModel(cfg.signal_det.n_bins(), doc.get_double("signal.efficiency", 1.0),
                                   doc.get_double("signal.dark_click_prob", 0.0));
  }
  if (doc.has("inversion_n_max")) cfg.inversion_n_max = static_cast<int>(doc.get_int("inversion_n_max"));
  cfg.expected_total_events = doc.get_double("expected_total_events", cfg.expected_total_events);
  cfg.n_replicas = static_cast<int>(doc.get_int("n_replicas", cfg.n_replicas));
  cfg.seed = static_cast<std::uint64_t>(doc.get_int("seed", static_cast<long long>(cfg.seed)));
  return cfg;
}

TmsvConfig tmsv_config_from(const KeyValueDocument& doc) {
  std::vector<std::string> known = {"lambda_sq", "eta1", "eta2", "expected_total_events",
                                    "n_replicas", "seed", "conditions"};
  for (auto& k : detector_keys("det1.")) known.push_back(k);
  for (auto& k : detector_keys("det2.")) known.push_back(k);
  doc.require_known(known);

  TmsvConfig cfg;
  cfg.lambda_sq = doc.get_double("lambda_sq", cfg.lambda_sq);
  cfg.eta1 = doc.get_double("eta1", cfg.eta1);
  cfg.eta2 = doc.get_double("eta2", cfg.eta2);
  if (doc.has("det1.n_bins") || doc.has("det1.bin_weights")) cfg.det1 = detector_from(doc, "det1.");
  if (doc.has("det2.n_bins") || doc.has("det2.bin_weights")) cfg.det2 = detector_from(doc, "det2.");
  cfg.expected_total_events = doc.get_double("expected_total_events", cfg.expected_total_events);
  cfg.n_replicas = static_cast<int>(doc.get_int("n_replicas", cfg.n_replicas));
  cfg.seed = static_cast<std::uint64_t>(doc.get_int("seed", static_cast<long long>(cfg.seed)));
  if (doc.has("conditions")) {
    cfg.conditions.clear();
    for (double k : doc.get_doubles("conditions")) cfg.conditions.push_back(static_cast<int>(k));
  }
  return cfg;
}

void write_config(std::ostream& out, const DetectorModel& det, const std::string& prefix) {
  out << prefix << "n_bins = " << det.n_bins() << '\n';
  if (!det.uniform()) {
    out << prefix << "bin_weights =";
    for (double w : det.bin_weights()) out << ' ' << format_number(w);
    out << '\n';
  }
  out << prefix << "efficiency = " << format_number(det.efficiency()) << '\n';
  out << prefix << "dark_click_prob = " << format_number(det.dark_click_prob()) << '\n';
}

void write_config(std::ostream& out, const CatalysisSweepConfig& cfg) {
  out << "alpha_mean = " << format_number(cfg.alpha_mean) << '\n';
  out << "reflectivities =";
  for (double r : cfg.reflectivities) out << ' ' << format_number(r);
  out << '\n';
  out << "k_herald = " << cfg.k_herald << '\n';
  switch (cfg.herald.kind()) {
    case HeraldModel::Kind::ideal:
      out << "herald.mode = ideal\n";
      break;
    case HeraldModel::Kind::on_off:
      out << "herald.mode = on_off\n";
      out << "herald.efficiency = " << format_number(cfg.herald.detector().efficiency()) << '\n';
      out << "herald.dark_click_prob = " << format_number(cfg.herald.detector().dark_click_prob())
          << '\n';
      break;
    case HeraldModel::Kind::multiplexed:
      out << "herald.mode = multiplexed\n";
      write_config(out, cfg.herald.detector(), "herald.");
      break;
  }
  out << "signal_eta = " << format_number(cfg.signal_eta) << '\n';
  write_config(out, cfg.signal_det, "signal.");
  if (cfg.inversion_n_max) out << "inversion_n_max = " << *cfg.inversion_n_max << '\n';
  out << "expected_total_events = " << format_number(cfg.expected_total_events) << '\n';
  out << "n_replicas = " << cfg.n_replicas << '\n';
  out << "seed = " << cfg.seed << '\n';
}

void write_config(std::ostream& out, const TmsvConfig& cfg) {
  out << "lambda_sq = " << format_number(cfg.lambda_sq) << '\n';
  out << "eta1 = " << format_number(cfg.eta1) << '\n';
  out << "eta2 = " << format_number(cfg.eta2) << '\n';
  write_config(out, cfg.det1, "det1.");
  write_config(out, cfg.det2, "det2.");
  out << "expected_total_events = " << format_number(cfg.expected_total_events) << '\n';
  out << "n_replicas = " << cfg.n_replicas << '\n';
  out << "seed = " << cfg.seed << '\n';
  out << "conditions =";
  for (int k : cfg.conditions) out << ' ' << k;
  out << '\n';
}

Table read_csv(std::istream& in, const std::string& source) {
  Table t;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    std::vector<std::string> cells;
    std::stringstream ss(body);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw ParseError(source + ":" + std::to_string(line_no) + ": expected " +
                       std::to_string(t.header.size()) + " columns");
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_double(c, source + ":" + std::to_string(line_no)));
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw ParseError(source + ": empty CSV");
  return t;
}

PhotonDistribution read_photon_distribution(std::istream& in, const std::string& source) {
  if (starts_with_brace(in)) {
    return PhotonDistribution(json_vector<double>(read_json(in, source), "probs", source));
  }
  const Table t = read_csv(in, source);
  if (t.header != std::vector<std::string>{"n", "probability"}) {
    throw ParseError(source + ": expected header 'n,probability'");
  }
  return PhotonDistribution(indexed_column(t, source));
}

int ClickInput::n_bins() const {
  return distribution ? distribution->n_bins() : counts->n_bins();
}

ClickDistribution ClickInput::as_distribution() const {
  return distribution ? *distribution : counts->frequencies();
}

ClickInput read_click_input(std::istream& in, const std::string& source) {
  ClickInput input;
  if (starts_with_brace(in)) {
    const json doc = read_json(in, source);
    if (doc.contains("counts")) {
      input.counts = CountRecord{json_vector<std::uint64_t>(doc, "counts", source)};
    } else {
      input.distribution = ClickDistribution(json_vector<double>(doc, "probs", source));
    }
    return input;
  }
  const Table t = read_csv(in, source);
  if (t.header.size() != 2 || t.header[0] != "clicks") {
    throw ParseError(source + ": expected header 'clicks,probability' or 'clicks,count'");
  }
  const std::vector<double> col = indexed_column(t, source);
  if (t.header[1] == "probability") {
    input.distribution = ClickDistribution(col);
  } else if (t.header[1] == "count") {
    input.counts = CountRecord{to_counts(col, source)};
  } else {
    throw ParseError(source + ": unknown column '" + t.header[1] + "'");
  }
  return input;
}

ClickInput load_click_input(const std::filesystem::path& path) {
  auto in = open_input(path);
  return read_click_input(in, path.string());
}

PhotonDistribution photon_source(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string family = spec.substr(0, colon);
  if (colon != std::string::npos &&
      (family == "coherent" || family == "thermal" || family == "fock")) {
    std::string rest = spec.substr(colon + 1);
    std::optional<int> n_max;
    if (const auto second = rest.find(':'); second != std::string::npos) {
      n_max = static_cast<int>(parse_int(rest.substr(second + 1), spec));
      rest = rest.substr(0, second);
    }
    if (family == "fock") {
      const int n = static_cast<int>(parse_int(rest, spec));
      return fock_pn(n, n_max.value_or(std::max(n, 1)));
    }
    const double mu = parse_double(rest, spec);
    const int cutoff = n_max.value_or(default_cutoff(mu));
    return family == "coherent" ? coherent_pn(mu, cutoff) : thermal_pn(mu, cutoff);
  }
  auto in = open_input(spec);
  return read_photon_distribution(in, spec);
}

void write_csv(std::ostream& out, const PhotonDistribution& p) {
  out << "n,probability\n";
  for (int n = 0; n <= p.n_max(); ++n) write_row(out, {std::to_string(n), format_number(p[n])});
}

void write_csv(std::ostream& out, const ClickDistribution& c) {
  out << "clicks,probability\n";
  for (int i = 0; i <= c.n_bins(); ++i) write_row(out, {std::to_string(i), format_number(c[i])});
}

void write_csv(std::ostream& out, const CountRecord& r) {
  out << "clicks,count\n";
  for (std::size_t i = 0; i < r.counts.size(); ++i) {
    write_row(out, {std::to_string(i), std::to_string(r.counts[i])});
  }
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& l) {
  out << "clicks";
  for (Eigen::Index n = 0; n < l.cols(); ++n) out << ",n" << n;
  out << '\n';
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    out << i;
    for (Eigen::Index n = 0; n < l.cols(); ++n) out << ',' << format_number(l(i, n));
    out << '\n';
  }
}

void write_inversion_csv(std::ostream& out, const InversionResult& r) {
  out << "n,probability\n";
  for (std::size_t n = 0; n < r.probs.size(); ++n) {
    write_row(out, {std::to_string(n), format_number(r.probs[n])});
  }
}

void write_catalysis_csv(std::ostream& out, const std::vector<CatalysisPoint>& points) {
  out << "reflectivity,herald_prob,q_binomial,q_binomial_err,q_mandel,q_mandel_err,q_fake,"
         "q_fake_err,q_binomial_exact,q_mandel_exact,q_fake_exact,events,error\n";
  for (const auto& p : points) {
    if (!p.ok()) {
      out << format_number(p.reflectivity) << ",,,,,,,,,,,," << '"' << p.error << '"' << '\n';
      continue;
    }
    write_row(out, {format_number(p.reflectivity), format_number(p.herald_prob),
                    format_number(p.q_binomial.value), format_number(p.q_binomial.std_error),
                    format_number(p.q_mandel.value), format_number(p.q_mandel.std_error),
                    format_number(p.q_fake.value), format_number(p.q_fake.std_error),
                    format_number(p.q_binomial_exact), format_number(p.q_mandel_exact),
                    format_number(p.q_fake_exact), std::to_string(p.counts.total_events()), ""});
  }
}

void write_tmsv_csv(std::ostream& out, const TmsvReport& report) {
  out << "measured_arm,condition,event_fraction,observed_events,q_binomial_exact,q_binomial,"
         "q_binomial_err,dropped_fraction,error\n";
  for (const auto& r : report.rows) {
    if (!r.ok()) {
      out << arm_label(r.measured) << ',' << condition_label(r.condition) << ",,,,,,," << '"'
          << r.error << '"' << '\n';
      continue;
    }
    write_row(out, {arm_label(r.measured), condition_label(r.condition),
                    format_number(r.event_fraction), std::to_string(r.observed_events),
                    format_number(r.q_binomial_exact), format_number(r.q_binomial.value),
                    format_number(r.q_binomial.std_error),
                    format_number(r.q_binomial.dropped_fraction), ""});
  }
}

json to_json(const PhotonDistribution& p) {
  json j = header("photon_distribution");
  j["n_max"] = p.n_max();
  j["probs"] = std::vector<double>(p.probs().begin(), p.probs().end());
  return j;
}

json to_json(const ClickDistribution& c) {
  json j = header("click_distribution");
  j["n_bins"] = c.n_bins();
  j["probs"] = std::vector<double>(c.probs().begin(), c.probs().end());
  return j;
}

json to_json(const CountRecord& r) {
  json j = header("count_record");
  j["n_bins"] = r.n_bins();
  j["counts"] = r.counts;
  j["total_events"] = r.total_events();
  return j;
}

json to_json(const WitnessEstimate& w, bool with_samples) {
  json j{{"value", w.value},
         {"std_error", w.std_error},
         {"n_replicas", w.n_replicas},
         {"dropped_fraction", w.dropped_fraction}};
  if (with_samples) j["samples"] = w.samples;
  return j;
}

json to_json(const InversionResult& r) {
  json j = header("inversion_report");
  j["method"] = std::string(method_name(r.method));
  j["probs"] = r.probs;
  j["residual_norm"] = r.residual_norm;
  j["condition_number"] = r.condition_number;
  json warnings = json::array();
  if (r.has_negative) warnings.push_back("negative_probabilities");
  j["warnings"] = warnings;
  return j;
}

json matrix_json(const Eigen::MatrixXd& l) {
  json j = header("click_matrix");
  j["n_bins"] = l.rows() - 1;
  j["n_max"] = l.cols() - 1;
  json rows = json::array();
  for (Eigen::Index i = 0; i < l.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(l.cols()));
    for (Eigen::Index n = 0; n < l.cols(); ++n) row[static_cast<std::size_t>(n)] = l(i, n);
    rows.push_back(row);
  }
  j["matrix"] = rows;
  return j;
}

json to_json(const std::vector<CatalysisPoint>& points, bool with_samples) {
  json j = header("catalysis_sweep");
  json rows = json::array();
  for (const auto& p : points) {
    json row{{"reflectivity", p.reflectivity}};
    if (!p.ok()) {
      row["error"] = p.error;
    } else {
      row["herald_prob"] = p.herald_prob;
      row["events"] = p.counts.total_events();
      row["counts"] = p.counts.counts;
      row["q_binomial"] = to_json(p.q_binomial, with_samples);
      row["q_mandel"] = to_json(p.q_mandel, with_samples);
      row["q_fake"] = to_json(p.q_fake, with_samples);
      row["exact"] = {{"q_binomial", p.q_binomial_exact},
                      {"q_mandel", p.q_mandel_exact},
                      {"q_fake", p.q_fake_exact}};
    }
    rows.push_back(row);
  }
  j["points"] = rows;
  return j;
}

json to_json(const TmsvReport& report, bool with_samples) {
  json j = header("tmsv_report");
  const Eigen::MatrixXd& p = report.joint_clicks.probs();
  json probs = json::array();
  json counts = json::array();
  for (Eigen::Index i = 0; i < p.rows(); ++i) {
    std::vector<double> prow;
    std::vector<std::uint64_t> crow;
    for (Eigen::Index k = 0; k < p.cols(); ++k) {
      prow.push_back(p(i, k));
      crow.push_back(report.joint_counts.counts(i, k));
    }
    probs.push_back(prow);
    counts.push_back(crow);
  }
  j["joint_clicks"] = probs;
  j["joint_counts"] = counts;
  j["total_events"] = report.joint_counts.total_events();
  j["herald_fractions"] = {{"arm1", report.herald_fractions.at(0)},
                           {"arm2", report.herald_fractions.at(1)}};
  json rows = json::array();
  for (const auto& r : report.rows) {
    json row{{"measured_arm", r.measured == Arm::first ? 1 : 2},
             {"herald_arm", r.measured == Arm::first ? 2 : 1},
             {"condition", condition_label(r.condition)}};
    if (!r.ok()) {
      row["error"] = r.error;
    } else {
      row["event_fraction"] = r.event_fraction;
      row["observed_events"] = r.observed_events;
      row["q_binomial_exact"] = r.q_binomial_exact;
      row["q_binomial"] = to_json(r.q_binomial, with_samples);
    }
    rows.push_back(row);
  }
  j["rows"] = rows;
  return j;
}

}  // namespace clickstat::io

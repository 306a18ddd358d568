#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "clickstat/detector.hpp"
#include "clickstat/distributions.hpp"
#include "clickstat/experiments.hpp"
#include "clickstat/inversion.hpp"
#include "clickstat/witnesses.hpp"

namespace clickstat::io {

inline constexpr int kSchemaVersion = 1;

/// Human-readable config document: one `key = value` per line, `#` starts
/// a comment. Keys are case-sensitive; duplicates are rejected.
class KeyValueDocument {
 public:
  static KeyValueDocument parse(std::istream& in, const std::string& source = "<config>");
  static KeyValueDocument load(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string get_string(const std::string& key) const;
  double get_double(const std::string& key) const;
  double get_double(const std::string& key, double fallback) const;
  long long get_int(const std::string& key) const;
  long long get_int(const std::string& key, long long fallback) const;
  /// Comma- or whitespace-separated list of numbers.
  std::vector<double> get_doubles(const std::string& key) const;

  /// Throws ParseError naming the first key not in `known`.
  void require_known(const std::vector<std::string>& known) const;

  const std::map<std::string, std::string>& values() const noexcept { return values_; }

 private:
  std::string source_;
  std::map<std::string, std::string> values_;
};

/// Reads n_bins, bin_weights, efficiency and dark_click_prob, each
/// optionally under `prefix` (e.g. "herald.").
DetectorModel detector_from(const KeyValueDocument& doc, const std::string& prefix = "");
std::vector<std::string> detector_keys(const std::string& prefix = "");
DetectorModel load_detector(const std::filesystem::path& path);

CatalysisSweepConfig catalysis_config_from(const KeyValueDocument& doc);
TmsvConfig tmsv_config_from(const KeyValueDocument& doc);

/// Config documents accepted back by the readers above.
void write_config(std::ostream& out, const DetectorModel& det, const std::string& prefix = "");
void write_config(std::ostream& out, const CatalysisSweepConfig& cfg);
void write_config(std::ostream& out, const TmsvConfig& cfg);

/// A parsed CSV file with a header row and numeric cells.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};
Table read_csv(std::istream& in, const std::string& source = "<csv>");

/// Photon distribution from CSV ("n,probability") or JSON ({"probs": ...}).
PhotonDistribution read_photon_distribution(std::istream& in, const std::string& source);

/// Any click-indexed file: "clicks,probability" / "clicks,count" CSV, or
/// the JSON forms written by this library.
struct ClickInput {
  std::optional<ClickDistribution> distribution;
  std::optional<CountRecord> counts;
  int n_bins() const;
  /// Frequencies for counts, the distribution itself otherwise.
  ClickDistribution as_distribution() const;
};
ClickInput read_click_input(std::istream& in, const std::string& source);
ClickInput load_click_input(const std::filesystem::path& path);

/// `coherent:<mu>`, `thermal:<mu>` or `fock:<n>`, optionally followed by
/// `:<n_max>`, or else a path to a photon distribution file.
PhotonDistribution photon_source(const std::string& spec);

void write_csv(std::ostream& out, const PhotonDistribution& p);
void write_csv(std::ostream& out, const ClickDistribution& c);
void write_csv(std::ostream& out, const CountRecord& r);
void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& l);
void write_inversion_csv(std::ostream& out, const InversionResult& r);
void write_catalysis_csv(std::ostream& out, const std::vector<CatalysisPoint>& points);
void write_tmsv_csv(std::ostream& out, const TmsvReport& report);

nlohmann::json to_json(const PhotonDistribution& p);
nlohmann::json to_json(const ClickDistribution& c);
nlohmann::json to_json(const CountRecord& r);
nlohmann::json to_json(const WitnessEstimate& w, bool with_samples = false);
nlohmann::json to_json(const InversionResult& r);
nlohmann::json matrix_json(const Eigen::MatrixXd& l);
nlohmann::json to_json(const std::vector<CatalysisPoint>& points, bool with_samples = false);
nlohmann::json to_json(const TmsvReport& report, bool with_samples = false);

/// Number formatting shared by every CSV writer (round-trip precision).
std::string format_number(double v);

}  // namespace clickstat::io

#include "clickstat/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "clickstat/errors.hpp"
#include "clickstat/io.hpp"
#include "clickstat/random.hpp"

namespace clickstat::cli {
namespace {

using nlohmann::json;

constexpr std::uint64_t kDefaultSeed = 1;
constexpr int kDefaultReplicas = 10000;

struct Options {
  std::optional<std::uint64_t> seed;
  std::optional<int> replicas;
  std::string output;
  std::string format;

  std::string det;
  std::optional<int> n_max;
  std::string photons;
  std::string clicks;
  std::optional<int> bins;
  bool invert = false;
  bool samples = false;
  std::string method = "constrained";
  double events = 0.0;
  std::string config;
  std::string run_dir;
};

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  while (!s.empty() && s.back() == ' ') s.pop_back();
  return s;
}

// "ideal:<N>" or a detector config file.
DetectorModel detector_spec(const std::string& spec) {
  constexpr std::string_view prefix = "ideal:";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string n = spec.substr(prefix.size());
    std::istringstream ss(n);
    int bins = 0;
    if (!(ss >> bins) || !ss.eof()) throw ParseError("bad detector spec '" + spec + "'");
    return DetectorModel::ideal(bins);
  }
  return io::load_detector(spec);
}

bool wants_json(const Options& o, const char* fallback) {
  return (o.format.empty() ? std::string(fallback) : o.format) == "json";
}

void emit_json(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

InversionMethod parse_method(const std::string& name) {
  return name == "pseudo_inverse" ? InversionMethod::pseudo_inverse : InversionMethod::constrained;
}

void run_matrix(const Options& o, std::ostream& out) {
  const DetectorModel det = detector_spec(o.det);
  const Eigen::MatrixXd l = click_matrix(det, o.n_max.value_or(det.n_bins()));
  if (wants_json(o, "csv")) {
    emit_json(out, io::matrix_json(l));
  } else {
    io::write_matrix_csv(out, l);
  }
}

void run_forward(const Options& o, std::ostream& out) {
  const ClickDistribution c = forward_clicks(io::photon_source(o.photons), detector_spec(o.det));
  if (wants_json(o, "csv")) {
    emit_json(out, io::to_json(c));
  } else {
    io::write_csv(out, c);
  }
}

WitnessEstimate exact_estimate(double value) {
  WitnessEstimate w;
  w.value = value;
  return w;
}

void run_witness(const Options& o, std::ostream& out) {
  const io::ClickInput input = io::load_click_input(o.clicks);
  const int n_bins = o.bins.value_or(input.n_bins());
  const std::uint64_t seed = o.seed.value_or(kDefaultSeed);
  const int replicas = o.replicas.value_or(kDefaultReplicas);

  WitnessEstimate qb;
  WitnessEstimate qf;
  std::optional<WitnessEstimate> qm;
  std::optional<InversionResult> inversion;
  const DetectorModel det =
      o.det.empty() ? DetectorModel::ideal(input.n_bins()) : detector_spec(o.det);
  const int n_max = o.n_max.value_or(det.n_bins());

  if (input.counts) {
    qb = mc_witness(*input.counts, Witness::binomial, n_bins, replicas, stream_seed(seed, 1));
    qf = mc_witness(*input.counts, Witness::fake, n_bins, replicas, stream_seed(seed, 2));
    if (o.invert) qm = q_mandel_from_clicks(*input.counts, det, n_max, replicas, stream_seed(seed, 3));
  } else {
    qb = exact_estimate(q_binomial(*input.distribution, n_bins));
    qf = exact_estimate(q_fake(*input.distribution));
    if (o.invert) {
      inversion = invert_clicks(*input.distribution, det, n_max, InversionMethod::constrained);
      qm = exact_estimate(q_mandel(inversion->distribution()));
    }
  }

  if (wants_json(o, "json")) {
    json j{{"schema_version", io::kSchemaVersion},
           {"kind", "witness_report"},
           {"input", input.counts ? "counts" : "distribution"},
           {"n_bins", n_bins}};
    if (input.counts) {
      j["total_events"] = input.counts->total_events();
      j["seed"] = seed;
    }
    j["q_binomial"] = io::to_json(qb, o.samples);
    j["q_fake"] = io::to_json(qf, o.samples);
    if (qm) {
      j["q_mandel"] = io::to_json(*qm, o.samples);
      j["q_mandel"]["n_max"] = n_max;
      if (inversion) j["q_mandel"]["residual_norm"] = inversion->residual_norm;
    }
    emit_json(out, j);
    return;
  }
  out << "witness,value,std_error,n_replicas,dropped_fraction\n";
  auto row = [&out](const char* name, const WitnessEstimate& w) {
    out << name << ',' << io::format_number(w.value) << ',' << io::format_number(w.std_error)
        << ',' << w.n_replicas << ',' << io::format_number(w.dropped_fraction) << '\n';
  };
  row("q_binomial", qb);
  row("q_fake", qf);
  if (qm) row("q_mandel", *qm);
}

void run_invert(const Options& o, std::ostream& out) {
  const io::ClickInput input = io::load_click_input(o.clicks);
  const DetectorModel det =
      o.det.empty() ? DetectorModel::ideal(input.n_bins()) : detector_spec(o.det);
  const InversionResult r = invert_clicks(input.as_distribution(), det,
                                          o.n_max.value_or(det.n_bins()), parse_method(o.method));
  if (wants_json(o, "csv")) {
    emit_json(out, io::to_json(r));
  } else {
    io::write_inversion_csv(out, r);
  }
}

void run_sample(const Options& o, std::ostream& out) {
  const io::ClickInput input = io::load_click_input(o.clicks);
  const CountRecord r =
      sample_counts(input.as_distribution(), o.events, o.seed.value_or(kDefaultSeed));
  if (wants_json(o, "csv")) {
    emit_json(out, io::to_json(r));
  } else {
    io::write_csv(out, r);
  }
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot write '" + path.string() + "'");
  return f;
}

template <typename Config, typename Report>
void write_run_dir(const std::string& dir, const Config& cfg, const Report& report) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path root(dir);
  auto cfg_out = open_output(root / "config.cfg");
  io::write_config(cfg_out, cfg);
  auto table = open_output(root / "table.csv");
  if constexpr (std::is_same_v<Report, TmsvReport>) {
    io::write_tmsv_csv(table, report);
  } else {
    io::write_catalysis_csv(table, report);
  }
  auto json_out = open_output(root / "report.json");
  emit_json(json_out, io::to_json(report));
}

template <typename Config>
void apply_overrides(const Options& o, Config& cfg) {
  if (o.seed) cfg.seed = *o.seed;
  if (o.replicas) cfg.n_replicas = *o.replicas;
}

void run_catalysis(const Options& o, std::ostream& out) {
  CatalysisSweepConfig cfg;
  if (!o.config.empty()) cfg = io::catalysis_config_from(io::KeyValueDocument::load(o.config));
  apply_overrides(o, cfg);
  const auto points = run_catalysis_sweep(cfg);
  if (!o.run_dir.empty()) write_run_dir(o.run_dir, cfg, points);
  if (wants_json(o, "csv")) {
    emit_json(out, io::to_json(points));
  } else {
    io::write_catalysis_csv(out, points);
  }
}

void run_tmsv_command(const Options& o, std::ostream& out) {
  TmsvConfig cfg;
  if (!o.config.empty()) cfg = io::tmsv_config_from(io::KeyValueDocument::load(o.config));
  apply_overrides(o, cfg);
  const TmsvReport report = run_tmsv(cfg);
  if (!o.run_dir.empty()) write_run_dir(o.run_dir, cfg, report);
  if (wants_json(o, "json")) {
    emit_json(out, io::to_json(report));
  } else {
    io::write_tmsv_csv(out, report);
  }
}

}  // namespace

int dispatch(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Click statistics of multiplexed photon detectors", "clickstat"};
  app.fallthrough();
  app.require_subcommand(1, 1);
  app.add_option("--seed", o.seed, "Random seed");
  app.add_option("--replicas", o.replicas, "Monte Carlo replicas")->check(CLI::PositiveNumber);
  app.add_option("--output", o.output, "Write the result to this file");
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));

  const std::string det_help = "Detector config file or ideal:<N>";

  auto* matrix = app.add_subcommand("matrix", "Click matrix P(i clicks | n photons)");
  matrix->add_option("--det", o.det, det_help)->required();
  matrix->add_option("--nmax", o.n_max, "Largest photon number")->check(CLI::NonNegativeNumber);

  auto* forward = app.add_subcommand("forward", "Photon distribution to click distribution");
  forward->add_option("--photons", o.photons, "File, coherent:mu, thermal:mu or fock:n")
      ->required();
  forward->add_option("--det", o.det, det_help)->required();

  auto* witness = app.add_subcommand("witness", "Q_B and Q_F of a click file");
  auto* counts_opt = witness->add_option("--counts", o.clicks, "Count or click file");
  auto* clicks_opt = witness->add_option("--clicks", o.clicks, "Count or click file");
  counts_opt->excludes(clicks_opt);
  witness->add_option("--bins", o.bins, "Number of bins N")->check(CLI::PositiveNumber);
  witness->add_flag("--invert", o.invert, "Add Q_M through constrained inversion");
  witness->add_option("--det", o.det, det_help);
  witness->add_option("--nmax", o.n_max, "Inversion cutoff")->check(CLI::NonNegativeNumber);
  witness->add_flag("--samples", o.samples, "Include Monte Carlo samples");

  auto* invert = app.add_subcommand("invert", "Click file to photon distribution");
  invert->add_option("--clicks", o.clicks, "Count or click file")->required();
  invert->add_option("--det", o.det, det_help);
  invert->add_option("--nmax", o.n_max, "Inversion cutoff")->check(CLI::NonNegativeNumber);
  invert->add_option("--method", o.method, "constrained or pseudo_inverse")
      ->check(CLI::IsMember({"constrained", "pseudo_inverse"}));

  auto* sample = app.add_subcommand("sample", "Draw Poisson counts from a click distribution");
  sample->add_option("--clicks", o.clicks, "Click distribution file")->required();
  sample->add_option("--events", o.events, "Expected total events")->required();

  auto* catalysis = app.add_subcommand("catalysis", "Photon catalysis reflectivity sweep");
  catalysis->add_option("--config", o.config, "Sweep config file");
  catalysis->add_option("--run-dir", o.run_dir, "Directory for config copy and outputs");

  auto* tmsv = app.add_subcommand("tmsv", "Two-mode squeezed vacuum conditioning report");
  tmsv->add_option("--config", o.config, "TMSV config file");
  tmsv->add_option("--run-dir", o.run_dir, "Directory for config copy and outputs");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << one_line(e.what()) << '\n';
    return kExitUsage;
  }
  if (*witness && o.clicks.empty()) {
    err << "error: usage: witness needs --counts or --clicks\n";
    return kExitUsage;
  }

  std::ostringstream result;
  try {
    if (*matrix) run_matrix(o, result);
    if (*forward) run_forward(o, result);
    if (*witness) run_witness(o, result);
    if (*invert) run_invert(o, result);
    if (*sample) run_sample(o, result);
    if (*catalysis) run_catalysis(o, result);
    if (*tmsv) run_tmsv_command(o, result);
    if (o.output.empty()) {
      out << result.str();
    } else {
      auto f = open_output(o.output);
      f << result.str();
    }
  } catch (const Error& e) {
    err << "error: " << e.kind() << ": " << one_line(e.what()) << '\n';
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: internal: " << one_line(e.what()) << '\n';
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace clickstat::cli

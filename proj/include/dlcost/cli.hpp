#pragma once

// `dlcost` command-line front end. Kept in a header so tests can drive
// run() in-process with captured streams.
//
// Exit codes: 0 ok, 2 bad input data, 64 usage error, 66 unreadable input,
// 73 output not writable.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dlcost/aggregate.hpp"
#include "dlcost/corpus.hpp"
#include "dlcost/cost_engine.hpp"
#include "dlcost/projection.hpp"
#include "dlcost/report.hpp"
#include "dlcost/sweep.hpp"
#include "dlcost/synth.hpp"
#include "dlcost/trace.hpp"

namespace dlcost::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitNoInput = 66;
inline constexpr int kExitCantCreate = 73;

class UsageError : public Error {
 public:
  using Error::Error;
};

class DataError : public Error {
 public:
  using Error::Error;
};

class OutputError : public Error {
 public:
  using Error::Error;
};

struct CommonOptions {
  std::string trace;
  bool corpus = false;
  bool strict = false;
  std::string hw = "pai-baseline";
  std::string eff = "default";
  std::string overlap = "none";
  std::string out;
  std::string format = "csv";
};

namespace detail {

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.emplace_back(dlcost::detail::trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline double parse_double(std::string_view s, const std::string& what) {
  s = dlcost::detail::trim(s);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw UsageError("invalid number '" + std::string(s) + "' for " + what);
  }
  return v;
}

inline std::vector<double> parse_grid(const std::string& text, const std::string& what) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_double(part, what));
  return out;
}

// Re-throws flag-value parse failures as usage errors.
template <class F>
auto as_usage(F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const UsageError&) {
    throw;
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

struct Inputs {
  JobPopulation population;
  std::vector<std::size_t> source_lines;
  std::vector<LineError> errors;
  std::string source;
  std::string digest;
};

inline Inputs load_inputs(const CommonOptions& o) {
  if (o.corpus == !o.trace.empty()) throw UsageError("exactly one of --trace or --corpus is required");
  Inputs in;
  if (o.corpus) {
    in.population = builtin_corpus();
    for (std::size_t i = 0; i < in.population.size(); ++i) in.source_lines.push_back(i + 1);
    in.source = "builtin-corpus";
    in.digest = fnv1a_digest(trace_to_string(in.population));
    return in;
  }
  const std::string bytes = read_file(o.trace);
  std::istringstream ss(bytes);
  TraceLoad load;
  try {
    load = parse_trace(ss, o.strict);
  } catch (const TraceError& e) {
    throw DataError(o.trace + ": " + e.what());
  }
  in.population = std::move(load.population);
  in.source_lines = std::move(load.source_lines);
  in.errors = std::move(load.errors);
  in.source = o.trace;
  in.digest = fnv1a_digest(bytes);
  return in;
}

// Non-validate commands refuse to analyse a partially broken trace.
inline void require_clean(const Inputs& in, std::ostream& err) {
  if (in.errors.empty()) return;
  for (const auto& e : in.errors) err << in.source << ":" << e.line << ": " << e.message << "\n";
  throw DataError(std::to_string(in.errors.size()) + " invalid trace line(s)");
}

inline HardwareProfile load_hw(const CommonOptions& o) {
  try {
    return resolve_hardware(o.hw);
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    throw DataError(e.what());
  }
}

inline bool uses_measured_efficiency(const CommonOptions& o) { return o.eff == "table-vii"; }

inline EfficiencyModel load_eff(const CommonOptions& o) {
  if (o.eff == "default") return EfficiencyModel{};
  if (uses_measured_efficiency(o)) {
    throw UsageError("--eff table-vii applies per job and is only supported by breakdown and validate");
  }
  try {
    return load_efficiency_file(o.eff);
  } catch (const IoError&) {
    throw;
  } catch (const Error& e) {
    throw DataError(e.what());
  }
}

inline EfficiencyModel eff_for(const CommonOptions& o, const WorkloadRecord& rec, const EfficiencyModel& fallback) {
  if (uses_measured_efficiency(o)) {
    if (auto m = measured_efficiency(rec.job_id)) return *m;
  }
  return fallback;
}

inline OverlapMode load_overlap(const CommonOptions& o) {
  return as_usage([&] { return parse_overlap(o.overlap); });
}

inline nlohmann::ordered_json base_metadata(std::string_view command, const CommonOptions& o, const Inputs& in,
                                            const HardwareProfile& hw, const EfficiencyModel& eff) {
  nlohmann::ordered_json m;
  m["tool"] = "dlcost";
  m["version"] = std::string(kVersion);
  m["command"] = std::string(command);
  m["hardware_source"] = o.hw;
  m["hardware"] = to_json(hw);
  if (uses_measured_efficiency(o)) {
    m["efficiency_source"] = "table-vii";
    m["efficiency_fallback"] = to_json(eff);
  } else {
    m["efficiency_source"] = o.eff;
    m["efficiency"] = to_json(eff);
  }
  m["overlap"] = o.overlap;
  m["input"] = {{"source", in.source}, {"digest", in.digest}, {"records", in.population.size()}};
  return m;
}

inline void write_output(const std::string& path, const std::string& bytes, std::ostream& out) {
  if (path.empty()) {
    out << bytes;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw OutputError("cannot write '" + path + "'");
  f << bytes;
  if (!f) throw OutputError("cannot write '" + path + "'");
}

// CSV carries no metadata, so it goes to a sidecar next to --out.
inline void write_report(const Report& report, const CommonOptions& o, std::ostream& out) {
  const auto format = as_usage([&] { return parse_format(o.format); });
  write_output(o.out, emit(report, format), out);
  if (format == ReportFormat::Csv && !o.out.empty()) {
    write_output(o.out + ".meta.json", report.metadata.dump(2) + "\n", out);
  }
}

inline Cell opt_cell(const std::optional<double>& v) {
  if (v) return *v;
  return std::monostate{};
}

// ---------------------------------------------------------------------------
// breakdown
// ---------------------------------------------------------------------------
inline const std::vector<std::string>& breakdown_columns() {
  static const std::vector<std::string> cols = {
      "job_id",          "arch",          "num_cnodes",          "batch_size",         "t_data",
      "t_compute_bound", "t_memory_bound", "t_compute",          "t_weight_pcie",      "t_weight_ethernet",
      "t_weight_nvlink", "t_weight",      "t_total",             "share_data",         "share_compute_bound",
      "share_memory_bound", "share_weight", "shares_defined",    "throughput",         "measured_step_seconds",
      "validation_gap"};
  return cols;
}

inline std::vector<Cell> breakdown_row(const WorkloadRecord& r, const TimeBreakdown& b) {
  Cell thr = std::monostate{};
  if (b.t_total > 0.0) thr = throughput(r, b.t_total);
  Cell gap = std::monostate{};
  if (r.measured_step_seconds) gap = validation_gap(b.t_total, *r.measured_step_seconds);
  return {r.job_id,
          std::string(to_label(r.arch)),
          r.num_cnodes,
          r.batch_size,
          b.t_data,
          b.t_compute_bound,
          b.t_memory_bound,
          b.t_compute,
          b.weight_on(Medium::PCIe),
          b.weight_on(Medium::Ethernet),
          b.weight_on(Medium::NVLink),
          b.t_weight,
          b.t_total,
          b.shares.data,
          b.shares.compute_bound,
          b.shares.memory_bound,
          b.shares.weight,
          b.shares_defined,
          thr,
          opt_cell(r.measured_step_seconds),
          gap};
}

inline int cmd_breakdown(const CommonOptions& o, std::ostream& out, std::ostream& err) {
  const auto overlap = load_overlap(o);
  const auto hw = load_hw(o);
  const auto eff = uses_measured_efficiency(o) ? EfficiencyModel{} : load_eff(o);
  const auto in = load_inputs(o);
  require_clean(in, err);

  Report report;
  report.kind = ReportKind::Breakdown;
  report.columns = breakdown_columns();
  report.metadata = base_metadata("breakdown", o, in, hw, eff);
  for (const auto& r : in.population.records) {
    report.add_row(breakdown_row(r, breakdown(r, hw, eff_for(o, r, eff), overlap)));
  }
  write_report(report, o, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// project
// ---------------------------------------------------------------------------
inline nlohmann::ordered_json summary_json(const ProjectionSummary& s) {
  return {{"jobs", s.jobs},
          {"fraction_throughput_sped_up", s.fraction_throughput_sped_up},
          {"fraction_step_sped_up", s.fraction_step_sped_up},
          {"fraction_infeasible", s.fraction_infeasible}};
}

inline int cmd_project(const CommonOptions& o, const std::string& target_label, std::ostream& out,
                       std::ostream& err) {
  const auto target = as_usage([&] { return parse_architecture(target_label); });
  const auto overlap = load_overlap(o);
  const auto hw = load_hw(o);
  const auto eff = load_eff(o);
  const auto in = load_inputs(o);
  require_clean(in, err);
  if (in.population.empty()) throw DataError("empty population");

  const auto proj = population_speedup_profile(in.population, target, hw, eff, overlap);

  Report report;
  report.kind = ReportKind::Projection;
  report.columns = {"job_id",         "source_arch",    "target_arch",         "source_cnodes",
                    "target_cnodes",  "feasible",       "reason",              "source_t_total",
                    "target_t_total", "source_share_weight", "target_share_weight", "step_speedup",
                    "throughput_speedup"};
  report.metadata = base_metadata("project", o, in, hw, eff);
  report.metadata["target"] = std::string(to_label(target));
  report.metadata["summary"] = summary_json(proj.summary);

  for (const auto& r : proj.results) {
    const bool ok = r.feasible();
    report.add_row({r.job_id, std::string(to_label(r.source_arch)), std::string(to_label(r.target_arch)),
                    r.source_cnodes, r.target_cnodes, ok, r.feasibility.reason, r.source.t_total,
                    ok ? Cell(r.target.t_total) : Cell(std::monostate{}), r.source.shares.weight,
                    ok ? Cell(r.target.shares.weight) : Cell(std::monostate{}), opt_cell(r.step_speedup),
                    opt_cell(r.throughput_speedup)});
  }
  write_report(report, o, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------
struct SweepOptions {
  std::vector<std::string> axes;
  std::vector<std::string> candidates;  // "axis=v1,v2,..."
  bool cartesian = false;
};

inline std::vector<SweepAxis> build_axes(const SweepOptions& s) {
  return as_usage([&] {
    std::vector<SweepAxis> axes;
    if (s.axes.empty()) {
      axes = standard_axes();
    } else {
      for (const auto& label : s.axes) axes.push_back(standard_axis(parse_resource(label)));
    }
    for (const auto& spec : s.candidates) {
      const auto eq = spec.find('=');
      if (eq == std::string::npos) throw UsageError("--candidates expects axis=v1,v2,...");
      const auto resource = parse_resource(dlcost::detail::trim(std::string_view(spec).substr(0, eq)));
      std::vector<double> values;
      for (const auto& v : split(std::string_view(spec).substr(eq + 1), ',')) {
        values.push_back(parse_quantity(v, resource_quantity_kind(resource)));
      }
      auto it = std::find_if(axes.begin(), axes.end(), [&](const SweepAxis& a) { return a.resource == resource; });
      if (it == axes.end()) throw UsageError("--candidates given for axis not in --axes: " + std::string(to_label(resource)));
      it->candidates = std::move(values);
    }
    for (const auto& a : axes) a.validate();
    return axes;
  });
}

inline int cmd_sweep(const CommonOptions& o, const SweepOptions& s, std::ostream& out, std::ostream& err) {
  const auto overlap = load_overlap(o);
  const auto axes = build_axes(s);
  const auto hw = load_hw(o);
  const auto eff = load_eff(o);
  const auto in = load_inputs(o);
  require_clean(in, err);
  if (in.population.empty()) throw DataError("empty population");

  Report report;
  report.kind = ReportKind::Sweep;
  report.columns = {"job_id",    "arch",   "resource", "candidate", "normalized", "ethernet", "pcie",
                    "gpu_flops", "gpu_mem", "t_base",  "t_modified", "speedup"};
  report.metadata = base_metadata("sweep", o, in, hw, eff);
  report.metadata["mode"] = s.cartesian ? "cartesian" : "one_at_a_time";
  nlohmann::ordered_json axes_json = nlohmann::ordered_json::array();
  for (const auto& a : axes) {
    axes_json.push_back({{"resource", std::string(to_label(a.resource))},
                         {"candidates", a.candidates},
                         {"baseline", a.baseline_or(hw)}});
  }
  report.metadata["axes"] = std::move(axes_json);

  auto hw_cells = [](const HardwareProfile& h) {
    return std::vector<Cell>{h.ethernet_bandwidth, h.pcie_bandwidth, h.gpu_peak_flops, h.gpu_mem_bandwidth};
  };

  if (!s.cartesian) {
    for (const auto& c : hardware_sweep(in.population, axes, hw, eff, overlap)) {
      std::vector<Cell> row = {c.job_id, std::string(to_label(c.arch)), std::string(to_label(c.resource)),
                               c.candidate, c.normalized};
      for (auto& cell : hw_cells(with_resource(hw, c.resource, c.candidate))) row.push_back(std::move(cell));
      row.insert(row.end(), {c.t_base, c.t_modified, c.speedup});
      report.add_row(std::move(row));
    }
  } else {
    const auto n = cartesian_size(in.population, axes);
    if (n > 100000) err << "warning: cartesian sweep produces " << n << " rows\n";
    for (const auto& c : cartesian_sweep(in.population, axes, hw, eff, overlap)) {
      HardwareProfile h = hw;
      for (std::size_t a = 0; a < axes.size(); ++a) h = with_resource(h, axes[a].resource, c.candidates[a]);
      const auto& rec = in.population.records[c.job_index];
      std::vector<Cell> row = {c.job_id, std::string(to_label(rec.arch)), std::string("cartesian"),
                               std::monostate{}, std::monostate{}};
      for (auto& cell : hw_cells(h)) row.push_back(std::move(cell));
      row.insert(row.end(), {c.t_base, c.t_modified, c.speedup});
      report.add_row(std::move(row));
    }
  }
  write_report(report, o, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// aggregate
// ---------------------------------------------------------------------------
struct AggregateOptions {
  std::string stat = "all";  // all | composition | breakdown | cdf | scale
  std::string component;     // cdf only; empty = every component
  std::string level;         // cdf only; empty = both levels
};

inline int cmd_aggregate(const CommonOptions& o, const AggregateOptions& a, std::ostream& out, std::ostream& err) {
  const auto overlap = load_overlap(o);
  if (a.stat != "all" && a.stat != "composition" && a.stat != "breakdown" && a.stat != "cdf" && a.stat != "scale") {
    throw UsageError("unknown --stat '" + a.stat + "'");
  }
  std::vector<Component> components(kAllComponents.begin(), kAllComponents.end());
  if (!a.component.empty()) components = {as_usage([&] { return parse_component(a.component); })};
  std::vector<AggregationLevel> levels = {AggregationLevel::Job, AggregationLevel::CNode};
  if (!a.level.empty()) levels = {as_usage([&] { return parse_level(a.level); })};

  const auto hw = load_hw(o);
  const auto eff = load_eff(o);
  const auto in = load_inputs(o);
  require_clean(in, err);
  if (in.population.empty()) throw DataError("empty population");
  const auto& pop = in.population;

  Report report;
  report.kind = ReportKind::Aggregate;
  report.columns = {"statistic", "group", "level", "x", "value"};
  report.metadata = base_metadata("aggregate", o, in, hw, eff);
  report.metadata["stat"] = a.stat;
  report.metadata["total_cnodes"] = pop.total_cnodes();
  const bool all = a.stat == "all";

  if (all || a.stat == "composition") {
    for (const auto& row : composition(pop)) {
      const std::string arch(to_label(row.arch));
      report.add_row({std::string("composition"), arch, std::string("job"), row.jobs, row.job_fraction});
      report.add_row({std::string("composition"), arch, std::string("cnode"), row.cnodes, row.cnode_fraction});
    }
  }
  if (all || a.stat == "breakdown") {
    const auto avg = weighted_breakdown(pop, hw, eff, overlap);
    for (auto c : kAllComponents) {
      const std::string comp(to_label(c));
      report.add_row({std::string("mean_share"), comp, std::string("job"), std::monostate{}, share_of(avg.job_level, c)});
      report.add_row(
          {std::string("mean_share"), comp, std::string("cnode"), std::monostate{}, share_of(avg.cnode_level, c)});
    }
  }
  if (all || a.stat == "cdf") {
    for (auto c : components) {
      for (auto lvl : levels) {
        for (const auto& p : share_cdf(pop, c, hw, eff, overlap, lvl)) {
          report.add_row({std::string("share_cdf"), std::string(to_label(c)), std::string(to_label(lvl)), p.x,
                          p.cumulative});
        }
      }
    }
  }
  if (all || a.stat == "scale") {
    for (const auto& d : scale_distribution(pop)) {
      const std::string arch(to_label(d.arch));
      for (const auto& p : d.cnodes.points()) {
        report.add_row({std::string("cnodes_cdf"), arch, std::string("job"), p.x, p.cumulative});
      }
      for (const auto& p : d.model_bytes.points()) {
        report.add_row({std::string("model_bytes_cdf"), arch, std::string("job"), p.x, p.cumulative});
      }
    }
  }
  write_report(report, o, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sensitivity
// ---------------------------------------------------------------------------
struct SensitivityOptions {
  std::string analysis = "efficiency";  // efficiency | overlap
  std::string compute_grid = "0.25,0.5,0.7,0.9";
  std::string comm_grid = "0.25,0.5,0.7,0.9";
  std::string target = "allreduce_local";
};

inline int cmd_sensitivity(const CommonOptions& o, const SensitivityOptions& s, std::ostream& out,
                           std::ostream& err) {
  if (s.analysis != "efficiency" && s.analysis != "overlap") {
    throw UsageError("unknown --analysis '" + s.analysis + "'");
  }
  const auto overlap = load_overlap(o);
  const auto target = as_usage([&] { return parse_architecture(s.target); });
  const auto compute_grid = parse_grid(s.compute_grid, "--compute-grid");
  const auto comm_grid = parse_grid(s.comm_grid, "--comm-grid");
  for (double v : compute_grid) {
    if (!(v > 0.0 && v <= 1.0)) throw UsageError("--compute-grid values must lie in (0, 1]");
  }
  for (double v : comm_grid) {
    if (!(v > 0.0 && v <= 1.0)) throw UsageError("--comm-grid values must lie in (0, 1]");
  }
  const auto hw = load_hw(o);
  const auto eff = load_eff(o);
  const auto in = load_inputs(o);
  require_clean(in, err);
  if (in.population.empty()) throw DataError("empty population");

  Report report;
  report.kind = ReportKind::Sensitivity;
  report.columns = {"analysis", "compute_eff", "comm_eff", "overlap", "metric", "value"};
  report.metadata = base_metadata("sensitivity", o, in, hw, eff);
  report.metadata["analysis"] = s.analysis;

  if (s.analysis == "efficiency") {
    report.metadata["compute_grid"] = compute_grid;
    report.metadata["comm_grid"] = comm_grid;
    for (const auto& c : efficiency_sensitivity(in.population, hw, compute_grid, comm_grid, overlap)) {
      const std::string mode(to_label(overlap));
      report.add_row({std::string("efficiency"), c.compute_eff, c.comm_eff, mode, std::string("job_weight_share"),
                      c.job_weight_share});
      report.add_row({std::string("efficiency"), c.compute_eff, c.comm_eff, mode, std::string("cnode_weight_share"),
                      c.cnode_weight_share});
    }
  } else {
    report.metadata["target"] = std::string(to_label(target));
    const auto cmp = overlap_comparison(in.population, hw, eff, target);
    for (const auto* summary : {&cmp.none, &cmp.ideal}) {
      const std::string mode(to_label(summary->mode));
      auto add = [&](const char* metric, double value) {
        report.add_row({std::string("overlap"), eff.compute_eff, eff.pcie_eff, mode, std::string(metric), value});
      };
      add("job_weight_share", summary->averages.job_level.weight);
      add("cnode_weight_share", summary->averages.cnode_level.weight);
      add("fraction_step_sped_up", summary->projection.fraction_step_sped_up);
      add("fraction_throughput_sped_up", summary->projection.fraction_throughput_sped_up);
      add("fraction_infeasible", summary->projection.fraction_infeasible);
      add("fraction_at_weight_path_ratio", summary->fraction_at_path_ratio);
    }
  }
  write_report(report, o, out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------
inline int cmd_validate(const CommonOptions& o, std::ostream& out, std::ostream& err) {
  const auto overlap = load_overlap(o);
  const auto hw = load_hw(o);
  const auto eff = uses_measured_efficiency(o) ? EfficiencyModel{} : load_eff(o);
  const auto in = load_inputs(o);

  Report report;
  report.kind = ReportKind::Validate;
  report.columns = {"line", "job_id", "valid", "error", "predicted_seconds", "measured_seconds", "gap"};
  report.metadata = base_metadata("validate", o, in, hw, eff);
  report.metadata["invalid_lines"] = in.errors.size();

  // Merge valid records and errors back into file order.
  std::size_t ri = 0, ei = 0;
  while (ri < in.population.size() || ei < in.errors.size()) {
    const bool take_record =
        ei >= in.errors.size() || (ri < in.population.size() && in.source_lines[ri] < in.errors[ei].line);
    if (take_record) {
      const auto& r = in.population.records[ri];
      const auto b = breakdown(r, hw, eff_for(o, r, eff), overlap);
      Cell gap = std::monostate{};
      if (r.measured_step_seconds) gap = validation_gap(b.t_total, *r.measured_step_seconds);
      report.add_row({static_cast<std::int64_t>(in.source_lines[ri]), r.job_id, true, std::string(), b.t_total,
                      opt_cell(r.measured_step_seconds), gap});
      ++ri;
    } else {
      const auto& e = in.errors[ei];
      err << in.source << ":" << e.line << ": " << e.message << "\n";
      report.add_row({static_cast<std::int64_t>(e.line), e.job_id, false, e.message, std::monostate{},
                      std::monostate{}, std::monostate{}});
      ++ei;
    }
  }
  write_report(report, o, out);
  return in.errors.empty() ? kExitOk : kExitDataError;
}

// ---------------------------------------------------------------------------
// synth / corpus
// ---------------------------------------------------------------------------
struct SynthOptions {
  std::size_t size = 1000;
  std::optional<std::uint64_t> seed;
  std::string mix;
  std::optional<double> embedding_probability;
  std::string out;
};

inline int cmd_synth(const SynthOptions& s, std::ostream& out) {
  auto spec = as_usage([&] {
    if (!s.seed) throw UsageError("--seed is required");
    auto spec = SynthSpec::with_seed(*s.seed);
    spec.size = s.size;
    if (!s.mix.empty()) {
      spec.mix.clear();
      for (const auto& part : split(s.mix, ',')) {
        const auto eq = part.find('=');
        if (eq == std::string::npos) throw UsageError("--mix expects arch=fraction,...");
        spec.mix.emplace_back(parse_architecture(dlcost::detail::trim(std::string_view(part).substr(0, eq))),
                              parse_double(std::string_view(part).substr(eq + 1), "--mix"));
      }
    }
    if (s.embedding_probability) spec.embedding_probability = *s.embedding_probability;
    spec.validate();
    return spec;
  });
  write_output(s.out, trace_to_string(synth_population(spec)), out);
  return kExitOk;
}

inline int cmd_corpus(const std::string& path, std::ostream& out) {
  write_output(path, trace_to_string(builtin_corpus()), out);
  return kExitOk;
}

inline void add_common(CLI::App* cmd, CommonOptions& o, bool with_eff = true) {
  auto* trace = cmd->add_option("--trace", o.trace, "NDJSON workload trace");
  auto* corpus = cmd->add_flag("--corpus", o.corpus, "Use the built-in case-study corpus");
  trace->excludes(corpus);
  cmd->add_flag("--strict", o.strict, "Abort on the first invalid trace line");
  cmd->add_option("--hw", o.hw, "Hardware preset name or config file")->capture_default_str();
  if (with_eff) {
    cmd->add_option("--eff", o.eff, "Efficiency: default | table-vii | config file")->capture_default_str();
  }
  cmd->add_option("--overlap", o.overlap, "Overlap model: none | ideal")->capture_default_str();
  cmd->add_option("--out", o.out, "Output path (default stdout)");
  cmd->add_option("--format", o.format, "csv | json")->capture_default_str();
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using namespace detail;

  CLI::App app{"Analytical cost model for distributed deep-learning training workloads", "dlcost"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  CommonOptions common;
  std::string target;
  SweepOptions sweep_opts;
  AggregateOptions agg_opts;
  SensitivityOptions sens_opts;
  SynthOptions synth_opts;
  std::string corpus_out;

  auto* breakdown_cmd = app.add_subcommand("breakdown", "Per-step time breakdown per job");
  add_common(breakdown_cmd, common);

  auto* project_cmd = app.add_subcommand("project", "Project jobs onto another architecture");
  add_common(project_cmd, common);
  project_cmd->add_option("--target", target, "Target architecture label")->required();

  auto* sweep_cmd = app.add_subcommand("sweep", "Hardware what-if sweep");
  add_common(sweep_cmd, common);
  sweep_cmd->add_option("--axes", sweep_opts.axes, "ethernet,pcie,gpu_flops,gpu_mem")->delimiter(',');
  sweep_cmd->add_option("--candidates", sweep_opts.candidates, "axis=v1,v2,... (unit strings)");
  sweep_cmd->add_flag("--cartesian", sweep_opts.cartesian, "Sweep every combination of candidates");

  auto* agg_cmd = app.add_subcommand("aggregate", "Population statistics");
  add_common(agg_cmd, common);
  agg_cmd->add_option("--stat", agg_opts.stat, "all | composition | breakdown | cdf | scale")->capture_default_str();
  agg_cmd->add_option("--component", agg_opts.component, "data | compute_bound | memory_bound | weight");
  agg_cmd->add_option("--level", agg_opts.level, "job | cnode");

  auto* sens_cmd = app.add_subcommand("sensitivity", "Efficiency and overlap sensitivity");
  add_common(sens_cmd, common);
  sens_cmd->add_option("--analysis", sens_opts.analysis, "efficiency | overlap")->capture_default_str();
  sens_cmd->add_option("--compute-grid", sens_opts.compute_grid)->capture_default_str();
  sens_cmd->add_option("--comm-grid", sens_opts.comm_grid)->capture_default_str();
  sens_cmd->add_option("--target", sens_opts.target, "Projection target for --analysis overlap")
      ->capture_default_str();

  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic trace");
  synth_cmd->add_option("--size", synth_opts.size)->capture_default_str();
  synth_cmd->add_option("--seed", synth_opts.seed, "RNG seed (required)");
  synth_cmd->add_option("--mix", synth_opts.mix, "arch=fraction,... summing to 1");
  synth_cmd->add_option("--embedding-probability", synth_opts.embedding_probability);
  synth_cmd->add_option("--out", synth_opts.out, "Output trace path (default stdout)");

  auto* validate_cmd = app.add_subcommand("validate", "Check a trace and compare predictions to measurements");
  add_common(validate_cmd, common);

  auto* corpus_cmd = app.add_subcommand("corpus", "Write the built-in case-study corpus as a trace");
  corpus_cmd->add_option("--out", corpus_out, "Output trace path (default stdout)");

  std::vector<const char*> argv;
  argv.push_back("dlcost");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kExitOk;
    } catch (const CLI::CallForVersion&) {
      out << kVersion << "\n";
      return kExitOk;
    } catch (const CLI::ParseError& e) {
      err << "dlcost: " << e.what() << "\n";
      return kExitUsage;
    }

    if (*breakdown_cmd) return cmd_breakdown(common, out, err);
    if (*project_cmd) return cmd_project(common, target, out, err);
    if (*sweep_cmd) return cmd_sweep(common, sweep_opts, out, err);
    if (*agg_cmd) return cmd_aggregate(common, agg_opts, out, err);
    if (*sens_cmd) return cmd_sensitivity(common, sens_opts, out, err);
    if (*synth_cmd) return cmd_synth(synth_opts, out);
    if (*validate_cmd) return cmd_validate(common, out, err);
    if (*corpus_cmd) return cmd_corpus(corpus_out, out);
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "dlcost: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IoError& e) {
    err << "dlcost: " << e.what() << "\n";
    return kExitNoInput;
  } catch (const OutputError& e) {
    err << "dlcost: " << e.what() << "\n";
    return kExitCantCreate;
  } catch (const Error& e) {
    err << "dlcost: " << e.what() << "\n";
    return kExitDataError;
  }
}

}  // namespace dlcost::cli

#pragma once

// Built-in case-study workloads, hardware presets, and the flat key-value
// config files used for custom hardware and efficiency settings:
//
//   # 100G upgrade
//   ethernet = "100Gbps"
//   gpu_flops = "15TFLOPs"

#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "dlcost/core_model.hpp"
#include "dlcost/trace.hpp"

namespace dlcost {

// ---------------------------------------------------------------------------
// Hardware presets
// ---------------------------------------------------------------------------

/// Production cluster: 11 TFLOPs GPU, 1 TB/s memory, 25 Gbps Ethernet,
/// 10 GB/s PCIe, 50 GB/s NVLink.
inline HardwareProfile pai_baseline() {
  return {11e12, 1e12, 10e9, 25e9 / 8, 50e9, 16e9};
}

/// Case-study testbed: V100 at 15 TFLOPs, otherwise the production links.
inline HardwareProfile case_study_testbed() {
  auto hw = pai_baseline();
  hw.gpu_peak_flops = 15e12;
  return hw;
}

inline constexpr std::string_view kPresetNames[] = {"pai-baseline", "case-study-testbed"};

inline std::optional<HardwareProfile> builtin_preset(std::string_view name) {
  if (name == "pai-baseline") return pai_baseline();
  if (name == "case-study-testbed") return case_study_testbed();
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Key-value config files
// ---------------------------------------------------------------------------
using KeyValues = std::map<std::string, std::string, std::less<>>;

/// `key = value` per line; values may be double-quoted; `#` starts a comment.
inline KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = raw;
    bool in_quotes = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      if (line[i] == '"') in_quotes = !in_quotes;
      if (line[i] == '#' && !in_quotes) {
        line = line.substr(0, i);
        break;
      }
    }
    line = detail::trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("line " + std::to_string(lineno) + ": expected key = value");
    }
    auto key = detail::trim(line.substr(0, eq));
    auto value = detail::trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    } else if (value.find('"') != std::string_view::npos) {
      throw ParseError("line " + std::to_string(lineno) + ": unbalanced quotes");
    }
    if (key.empty()) throw ParseError("line " + std::to_string(lineno) + ": empty key");
    if (!kv.emplace(std::string(key), std::string(value)).second) {
      throw ParseError("line " + std::to_string(lineno) + ": duplicate key '" + std::string(key) + "'");
    }
  }
  return kv;
}

/// Keys: gpu_flops, gpu_mem_bandwidth, pcie, ethernet, nvlink,
/// gpu_mem_capacity, and optionally `base` naming a preset to start from
/// (default pai-baseline). Unset keys keep the base value.
inline HardwareProfile hardware_from_config(const KeyValues& kv) {
  HardwareProfile hw = pai_baseline();
  if (auto it = kv.find("base"); it != kv.end()) {
    auto preset = builtin_preset(it->second);
    if (!preset) throw ParseError("unknown base preset '" + it->second + "'");
    hw = *preset;
  }
  for (const auto& [key, value] : kv) {
    if (key == "base") continue;
    if (key == "gpu_flops") hw.gpu_peak_flops = parse_quantity(value, QuantityKind::FlopsRate);
    else if (key == "gpu_mem_bandwidth") hw.gpu_mem_bandwidth = parse_quantity(value, QuantityKind::Bandwidth);
    else if (key == "pcie") hw.pcie_bandwidth = parse_quantity(value, QuantityKind::Bandwidth);
    else if (key == "ethernet") hw.ethernet_bandwidth = parse_quantity(value, QuantityKind::Bandwidth);
    else if (key == "nvlink") hw.nvlink_bandwidth = parse_quantity(value, QuantityKind::Bandwidth);
    else if (key == "gpu_mem_capacity") hw.gpu_mem_capacity = parse_quantity(value, QuantityKind::Bytes);
    else throw ParseError("unknown hardware key '" + key + "'");
  }
  hw.validate();
  return hw;
}

inline HardwareProfile load_hardware_file(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  try {
    return hardware_from_config(parse_key_values(in));
  } catch (const Error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

/// Resolves `--hw`: files in $DLCOST_HW_DIR (`<name>` or `<name>.conf`) take
/// precedence over built-in preset names; anything else is a file path.
inline HardwareProfile resolve_hardware(std::string_view name_or_path) {
  const std::string name(name_or_path);
  if (const char* dir = std::getenv("DLCOST_HW_DIR"); dir != nullptr && *dir != '\0') {
    for (const auto& candidate : {std::filesystem::path(dir) / name, std::filesystem::path(dir) / (name + ".conf")}) {
      std::error_code ec;
      if (std::filesystem::is_regular_file(candidate, ec)) return load_hardware_file(candidate);
    }
  }
  if (auto preset = builtin_preset(name)) return *preset;
  return load_hardware_file(name);
}

/// Efficiency keys: compute, mem, pcie, ethernet, nvlink. Values are
/// fractions ("0.55") or percentages ("55%"); unset keys stay at 0.7.
inline EfficiencyModel efficiency_from_config(const KeyValues& kv) {
  EfficiencyModel eff;
  for (const auto& [key, value] : kv) {
    std::string_view v = value;
    const bool percent = detail::consume_suffix(v, "%");
    v = detail::trim(v);
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc() || ptr != v.data() + v.size()) {
      throw ParseError("invalid efficiency '" + value + "' for " + key);
    }
    if (percent) x /= 100.0;
    if (key == "compute") eff.compute_eff = x;
    else if (key == "mem") eff.mem_eff = x;
    else if (key == "pcie") eff.pcie_eff = x;
    else if (key == "ethernet") eff.ethernet_eff = x;
    else if (key == "nvlink") eff.nvlink_eff = x;
    else throw ParseError("unknown efficiency key '" + key + "'");
  }
  eff.validate();
  return eff;
}

inline EfficiencyModel load_efficiency_file(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  try {
    return efficiency_from_config(parse_key_values(in));
  } catch (const Error& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Case-study corpus
// ---------------------------------------------------------------------------

/// Six case-study models. Distributed jobs run on one eight-GPU server.
/// Speech is 1w1g, so its reported 728 MB network traffic is kept only as
/// raw_network_traffic_bytes.
inline JobPopulation builtin_corpus() {
  auto make = [](std::string id, ArchitectureKind arch, std::int64_t cnodes, std::int64_t batch, double flops,
                 double mem, double input, double weight, double dense, double emb) {
    WorkloadRecord r;
    r.job_id = std::move(id);
    r.arch = arch;
    r.num_cnodes = cnodes;
    r.batch_size = batch;
    r.flops = flops;
    r.mem_access_bytes = mem;
    r.input_bytes = input;
    r.weight_traffic_bytes = weight;
    r.dense_weight_bytes = dense;
    r.embedding_weight_bytes = emb;
    return r;
  };
  using A = ArchitectureKind;
  JobPopulation pop;
  pop.records = {
      make("multi_interests", A::PsWorker, 8, 2048, 105.8e9, 100.4e9, 261e6, 122e6, 1.19e6, 239.45e9),
      make("resnet50", A::AllReduceLocal, 8, 64, 1.56e12, 31.9e9, 38e6, 357e6, 204e6, 0),
      make("nmt", A::AllReduceLocal, 8, 6144, 2.5e12, 101.6e9, 22e3, 1.33e9, 706e6, 819e6),
      make("bert", A::AllReduceLocal, 8, 12, 2.1e12, 107.3e9, 46e3, 1.5e9, 1e9, 284e6),
      make("speech", A::OneWorkerOneGpu, 1, 32, 7.9e12, 20.4e9, 804e6, 0, 416e6, 0),
      make("gcn", A::Pearl, 8, 512, 330.7e9, 25.79e9, 1.2e6, 3e9, 207e6, 54e9),
  };
  pop.records[4].raw_network_traffic_bytes = 728e6;
  return pop;
}

/// Measured hardware efficiency of each case-study model (GPU TOPS, GDDR,
/// PCIe, network). The network figure applies to both Ethernet and NVLink.
inline std::optional<EfficiencyModel> measured_efficiency(std::string_view job_id) {
  struct Row {
    std::string_view id;
    double gpu, gddr, pcie, net;
  };
  static constexpr Row kRows[] = {
      {"multi_interests", 0.3271, 0.95, 0.8647, 0.6921},
      {"resnet50", 0.8255, 0.789, 0.351, 0.494},
      {"nmt", 0.828, 0.791, 0.001, 0.352},
      {"bert", 0.816, 0.95, 0.0042, 0.471},
      {"speech", 0.6086, 0.031, 0.7773, 0.405},
      {"gcn", 0.882, 0.699, 0.862, 0.2735},
  };
  for (const auto& r : kRows) {
    if (r.id == job_id) return EfficiencyModel{r.gpu, r.gddr, r.pcie, r.net, r.net};
  }
  return std::nullopt;
}

}  // namespace dlcost

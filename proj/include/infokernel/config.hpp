#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "infokernel/economy.hpp"

namespace infokernel {

struct NumericsConfig {
  std::size_t quadrature_order = kDefaultQuadratureOrder;
  double clamp = 1e-4;
  double horizon_delta = MarketModel::kDefaultHorizonDelta;
  std::size_t mc_paths = 10000;
  std::uint64_t seed = 42;
  double grid_step = 1.0 / 64.0;
  bool operator==(const NumericsConfig&) const = default;
};

struct EconomyConfig {
  double gamma_rate = 0.0;  ///< Gamma(t) = exp(-gamma_rate * t)
  double a = 1.0;
  double b = 1.0;
  double lagrange = 1.0;
  std::vector<ExponentialTerm> consumption;
  std::vector<ExponentialTerm> money_supply;
  std::vector<ExponentialTerm> liquidity_benefit;
  bool operator==(const EconomyConfig&) const = default;
};

/// Parsed model file. Times are in years.
///
/// The file is JSON with top-level sections `factors`, `nominal_kernel`,
/// `real_kernel`, `economy` and `numerics`; unknown keys anywhere are rejected.
/// At least one of `nominal_kernel` and `economy` is required.
struct ModelConfig {
  std::vector<FactorSpec> factors;
  std::optional<std::vector<ExponentialTerm>> nominal_terms;
  std::optional<std::vector<ExponentialTerm>> real_terms;
  std::optional<EconomyConfig> economy;
  NumericsConfig numerics;

  bool operator==(const ModelConfig&) const = default;

  /// Kernels from `nominal_kernel`/`real_kernel`; when no nominal kernel is
  /// given, the kernels induced by the economy block are used.
  MarketModel market_model() const;

  /// Throws ConfigError when the file has no economy block.
  EconomySpec economy_spec() const;
};

/// Throws ConfigError on malformed input or any violated model constraint.
ModelConfig parse_config(std::string_view text);
ModelConfig load_config(const std::filesystem::path& path);
std::string dump_config(const ModelConfig& config);

}  // namespace infokernel

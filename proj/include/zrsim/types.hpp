#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace zrsim {

// Sponsorship configuration on one ISP. First letter is CP1, second is CP2;
// S = sponsors (content free to users), N = does not.
enum class Config : int { NN = 0, SN = 1, NS = 2, SS = 3 };

inline constexpr std::array<Config, 4> kConfigs{Config::NN, Config::SN,
                                                Config::NS, Config::SS};

constexpr int index(Config m) { return static_cast<int>(m); }

constexpr bool sponsors(Config m, int cp) {
  return cp == 1 ? (m == Config::SN || m == Config::SS)
                 : (m == Config::NS || m == Config::SS);
}

constexpr Config make_config(bool cp1_sponsors, bool cp2_sponsors) {
  return cp1_sponsors ? (cp2_sponsors ? Config::SS : Config::SN)
                      : (cp2_sponsors ? Config::NS : Config::NN);
}

// Same configuration with one CP's decision reversed.
constexpr Config flip(Config m, int cp) {
  return make_config(cp == 1 ? !sponsors(m, 1) : sponsors(m, 1),
                     cp == 2 ? !sponsors(m, 2) : sponsors(m, 2));
}

constexpr int sponsor_count(Config m) {
  return int(sponsors(m, 1)) + int(sponsors(m, 2));
}

inline const char* to_string(Config m) {
  switch (m) {
    case Config::NN: return "NN";
    case Config::SN: return "SN";
    case Config::NS: return "NS";
    case Config::SS: return "SS";
  }
  return "??";
}

inline std::optional<Config> config_from_string(std::string_view s) {
  for (Config m : kConfigs)
    if (s == to_string(m)) return m;
  return std::nullopt;
}

// Small set of configurations; iteration order is NN, SN, NS, SS, which is
// also the deterministic tie-break order used throughout.
struct ConfigSet {
  std::uint8_t mask = 0;

  void add(Config m) { mask |= std::uint8_t(1u << index(m)); }
  bool contains(Config m) const { return mask & (1u << index(m)); }
  bool empty() const { return mask == 0; }
  int size() const {
    int n = 0;
    for (Config m : kConfigs) n += contains(m);
    return n;
  }
  std::vector<Config> values() const {
    std::vector<Config> v;
    for (Config m : kConfigs)
      if (contains(m)) v.push_back(m);
    return v;
  }
  bool operator==(const ConfigSet&) const = default;
};

struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ModelDomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tolerances shared across the engine.
inline constexpr double kArgTol = 1e-10;     // bisection tolerance on arguments
inline constexpr double kObjTol = 1e-9;      // objective / profit comparisons
inline constexpr double kFeasSlack = 1e-12;  // slack on Nash-interval boundaries
inline constexpr double kQTol = 1e-9;        // price comparisons in the dynamics

}  // namespace zrsim

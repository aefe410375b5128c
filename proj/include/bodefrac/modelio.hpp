#pragma once

#include <optional>
#include <string>

#include "bodefrac/model.hpp"
#include "bodefrac/tuner.hpp"

namespace bodefrac {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Model document:
//   {"plant": {"num": [[re,im],...], "den": [[re,im],...]},
//    "pid": {"k1":..., "k0":..., "km1":..., "alpha":..., "beta":...}}
// Coefficients are ascending-degree; plain numbers are accepted in place of
// [re, im] pairs.
LoopModel rational_model_from_json(const std::string& text);
std::string rational_model_to_json(const RationalPlant& plant, const FractionalPID& pid);

// Optional top-level "rel_tol" override in any config document; command-line
// flags still win over it.
std::optional<double> document_rel_tol(const std::string& text);

// Synthetic family document:
//   {"family": "A"|"B"|"C", "N": n, "outer": "matched" | {"a":..., "b":...}}
struct SynthConfig {
  char family = 'A';
  int n = 10;
  bool matched_outer = true;
  double outer_a = 1.0, outer_b = 1.0;
};
SynthConfig synth_config_from_json(const std::string& text);
std::string synth_config_to_json(const SynthConfig& cfg);

// Sweep document: {"plant": {...}, "grid": {"k1": [...], "k0": [...],
// "km1": [...], "alpha": [...], "beta": [...]}}; omitted grid dimensions
// take the documented defaults.
struct SweepConfig {
  RationalPlant plant;
  SweepGrid grid;
};
SweepConfig sweep_config_from_json(const std::string& text);
std::string sweep_config_to_json(const SweepConfig& cfg);

std::string read_text_file(const std::string& path);

}  // namespace bodefrac

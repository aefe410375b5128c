#include "bodefrac/modelio.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace bodefrac {
namespace {

using nlohmann::json;

[[noreturn]] void fail_at(const std::string& text, std::size_t byte, const std::string& what) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  std::ostringstream os;
  os << "line " << line << ", column " << col << ": " << what;
  throw ParseError(os.str());
}

json parse_checked(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    fail_at(text, e.byte, e.what());
  }
}

Complex complex_from(const json& j, const char* where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw ParseError(std::string(where) + ": coefficient must be a number or an [re, im] pair");
}

Polynomial poly_from(const json& j, const char* where) {
  if (!j.is_array() || j.empty())
    throw ParseError(std::string(where) + ": expected a nonempty coefficient array");
  std::vector<Complex> c;
  for (const json& e : j) c.push_back(complex_from(e, where));
  return Polynomial(std::move(c));
}

json poly_to(const Polynomial& p) {
  json arr = json::array();
  for (const Complex& c : p.coeffs()) arr.push_back(json::array({c.real(), c.imag()}));
  if (arr.empty()) arr.push_back(json::array({0.0, 0.0}));
  return arr;
}

double number_field(const json& j, const char* key, const char* where) {
  if (!j.contains(key) || !j[key].is_number())
    throw ParseError(std::string(where) + ": missing numeric field '" + key + "'");
  return j[key].get<double>();
}

RationalPlant plant_from(const json& j) {
  if (!j.is_object() || !j.contains("num") || !j.contains("den"))
    throw ParseError("plant: expected an object with 'num' and 'den'");
  return RationalPlant{poly_from(j["num"], "plant.num"), poly_from(j["den"], "plant.den")};
}

FractionalPID pid_from(const json& j) {
  FractionalPID pid;
  pid.k1 = number_field(j, "k1", "pid");
  pid.k0 = number_field(j, "k0", "pid");
  pid.km1 = number_field(j, "km1", "pid");
  pid.alpha = number_field(j, "alpha", "pid");
  pid.beta = number_field(j, "beta", "pid");
  return pid;
}

}  // namespace

std::optional<double> document_rel_tol(const std::string& text) {
  const json j = parse_checked(text);
  if (j.is_object() && j.contains("rel_tol") && j["rel_tol"].is_number()) {
    const double v = j["rel_tol"].get<double>();
    if (!(v > 0.0)) throw ParseError("rel_tol must be positive");
    return v;
  }
  return std::nullopt;
}

LoopModel rational_model_from_json(const std::string& text) {
  const json j = parse_checked(text);
  if (!j.contains("plant") || !j.contains("pid"))
    throw ParseError("model document needs 'plant' and 'pid' objects");
  RationalPlant plant = plant_from(j["plant"]);
  FractionalPID pid = pid_from(j["pid"]);
  try {
    return LoopModel::rational(std::move(plant), pid);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

std::string rational_model_to_json(const RationalPlant& plant, const FractionalPID& pid) {
  json j;
  j["plant"]["num"] = poly_to(plant.num);
  j["plant"]["den"] = poly_to(plant.den);
  j["pid"] = {{"k1", pid.k1},     {"k0", pid.k0},     {"km1", pid.km1},
              {"alpha", pid.alpha}, {"beta", pid.beta}};
  return j.dump(2) + "\n";
}

SynthConfig synth_config_from_json(const std::string& text) {
  const json j = parse_checked(text);
  SynthConfig cfg;
  if (!j.contains("family") || !j["family"].is_string() || j["family"].get<std::string>().empty())
    throw ParseError("synth document needs a 'family' string (A, B or C)");
  cfg.family = j["family"].get<std::string>()[0];
  if (cfg.family != 'A' && cfg.family != 'B' && cfg.family != 'C')
    throw ParseError("synth family must be one of A, B, C");
  if (!j.contains("N") || !j["N"].is_number_integer() || j["N"].get<int>() < 1)
    throw ParseError("synth document needs a positive integer 'N'");
  cfg.n = j["N"].get<int>();
  if (j.contains("outer")) {
    const json& o = j["outer"];
    if (o.is_string() && o.get<std::string>() == "matched") {
      cfg.matched_outer = true;
    } else if (o.is_object()) {
      cfg.matched_outer = false;
      cfg.outer_a = number_field(o, "a", "outer");
      cfg.outer_b = number_field(o, "b", "outer");
    } else {
      throw ParseError("outer must be \"matched\" or an object {\"a\":..., \"b\":...}");
    }
  }
  return cfg;
}

std::string synth_config_to_json(const SynthConfig& cfg) {
  json j;
  j["family"] = std::string(1, cfg.family);
  j["N"] = cfg.n;
  if (cfg.matched_outer)
    j["outer"] = "matched";
  else
    j["outer"] = {{"a", cfg.outer_a}, {"b", cfg.outer_b}};
  return j.dump(2) + "\n";
}

SweepConfig sweep_config_from_json(const std::string& text) {
  const json j = parse_checked(text);
  if (!j.contains("plant")) throw ParseError("sweep document needs a 'plant' object");
  SweepGrid grid;
  grid.k1 = {1e-2, 1e-1, 1.0, 1e1, 1e2};
  grid.k0 = {1e-2, 1e-1, 1.0, 1e1, 1e2};
  grid.km1 = {1e-2, 1e-1, 1.0, 1e1, 1e2};
  grid.alpha = {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75};
  grid.beta = {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75};
  if (j.contains("grid")) {
    const json& g = j["grid"];
    auto load = [&](const char* key, std::vector<double>& dst) {
      if (!g.contains(key)) return;
      if (!g[key].is_array())
        throw ParseError(std::string("grid.") + key + " must be an array of numbers");
      dst.clear();
      for (const json& e : g[key]) {
        if (!e.is_number())
          throw ParseError(std::string("grid.") + key + " must be an array of numbers");
        dst.push_back(e.get<double>());
      }
      if (dst.empty()) throw ParseError(std::string("grid.") + key + " must be nonempty");
    };
    load("k1", grid.k1);
    load("k0", grid.k0);
    load("km1", grid.km1);
    load("alpha", grid.alpha);
    load("beta", grid.beta);
  }
  return SweepConfig{plant_from(j["plant"]), std::move(grid)};
}

std::string sweep_config_to_json(const SweepConfig& cfg) {
  json j;
  j["plant"]["num"] = poly_to(cfg.plant.num);
  j["plant"]["den"] = poly_to(cfg.plant.den);
  j["grid"] = {{"k1", cfg.grid.k1},       {"k0", cfg.grid.k0}, {"km1", cfg.grid.km1},
               {"alpha", cfg.grid.alpha}, {"beta", cfg.grid.beta}};
  return j.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace bodefrac

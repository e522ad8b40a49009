#include "cli_config.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace unihub::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& prefix, const std::string& key) { return prefix.empty() ? key : prefix + "." + key; }

long long get_int(const json& j, const std::string& field, long long lo) {
  if (!j.is_number_integer()) throw UsageError(field, "expected an integer");
  const auto v = j.get<long long>();
  if (v < lo) throw UsageError(field, "must be at least " + std::to_string(lo));
  return v;
}

double get_real(const json& j, const std::string& field) {
  if (!j.is_number()) throw UsageError(field, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw UsageError(field, "must be finite");
  return v;
}

SpinConfig parse_spin(const json& j, const std::string& field) {
  if (!j.is_object()) throw UsageError(field, "expected an object {m, n, N}");
  for (const auto& [k, v] : j.items()) {
    (void)v;
    if (k != "m" && k != "n" && k != "N") throw UsageError(join(field, k), "unknown key");
  }
  for (const char* k : {"m", "n", "N"})
    if (!j.contains(k)) throw UsageError(join(field, k), "missing");
  SpinConfig s;
  s.m = static_cast<int>(get_int(j["m"], join(field, "m"), 0));
  s.n = static_cast<int>(get_int(j["n"], join(field, "n"), 0));
  if (s.m + s.n < 1) throw UsageError(field, "m + n must be positive");
  if (s.m + s.n > 16) throw UsageError(field, "m + n above 16");
  const std::string nf = join(field, "N");
  if (!j["N"].is_array()) throw UsageError(nf, "expected a list of indices");
  std::set<int> seen;
  for (std::size_t i = 0; i < j["N"].size(); ++i) {
    const std::string ef = nf + "[" + std::to_string(i) + "]";
    const auto v = get_int(j["N"][i], ef, 1);
    if (v > s.m + s.n) throw UsageError(nf, "index " + std::to_string(v) + " outside [1, " + std::to_string(s.m + s.n) + "]");
    if (!seen.insert(static_cast<int>(v)).second) throw UsageError(nf, "repeated index " + std::to_string(v));
  }
  s.subset.assign(seen.begin(), seen.end());
  return s;
}

const std::set<std::string> kKeys = {"up",      "down", "U",    "L",    "twist", "twist_spin", "seed",   "tol",
                                     "samples", "U_list", "Nmax", "kind", "ell",   "ambient",    "comment"};

}  // namespace

std::size_t ModelConfig::site_dim() const {
  if (!up) return 1;
  const auto d = static_cast<std::size_t>(up->m + up->n);
  return down ? d * static_cast<std::size_t>(down->m + down->n) : d;
}

Refinement ModelConfig::refinement(const XXModel& spin) const {
  Refinement r = Refinement::maximal(spin, 1.0);
  const auto un = spin.unbarred_indices(), ba = spin.barred_indices();
  for (const auto& t : twist) {
    const auto a = static_cast<std::size_t>(std::find(un.begin(), un.end(), static_cast<std::size_t>(t.a - 1)) - un.begin());
    const auto b = static_cast<std::size_t>(std::find(ba.begin(), ba.end(), static_cast<std::size_t>(t.abar - 1)) - ba.begin());
    r.q[a][b] = std::polar(t.modulus, t.angle);
  }
  return r;
}

json ModelConfig::echo() const {
  json j;
  auto spin = [](const SpinConfig& s) { return json{{"m", s.m}, {"n", s.n}, {"N", s.subset}}; };
  if (up) j["up"] = spin(*up);
  if (down) j["down"] = spin(*down);
  j["U"] = U;
  j["L"] = L;
  j["seed"] = seed;
  j["tol"] = tol;
  j["samples"] = samples;
  j["U_list"] = couplings;
  j["Nmax"] = nmax;
  j["kind"] = fock_kind;
  j["ell"] = ell;
  if (ambient) j["ambient"] = *ambient;
  if (!twist.empty()) {
    j["twist_spin"] = twist_spin;
    for (const auto& t : twist) j["twist"].push_back({{"a", t.a}, {"abar", t.abar}, {"modulus", t.modulus}, {"angle", t.angle}});
  }
  return j;
}

ModelConfig parse_model(const json& doc, const Overrides& ov, bool need_up, const std::string& prefix) {
  if (!doc.is_object()) throw UsageError(prefix, "expected a JSON object");
  for (const auto& [k, v] : doc.items()) {
    (void)v;
    if (!kKeys.count(k)) throw UsageError(join(prefix, k), "unknown key");
  }
  ModelConfig c;
  const auto f = [&](const char* k) { return join(prefix, k); };
  if (doc.contains("up")) c.up = parse_spin(doc["up"], f("up"));
  else if (need_up) throw UsageError(f("up"), "missing");
  if (doc.contains("down")) {
    if (!c.up) throw UsageError(f("down"), "given without up");
    c.down = parse_spin(doc["down"], f("down"));
  }
  if (doc.contains("U")) c.U = get_real(doc["U"], f("U"));
  if (doc.contains("L")) c.L = static_cast<std::size_t>(get_int(doc["L"], f("L"), 2));
  if (doc.contains("seed")) c.seed = static_cast<std::uint64_t>(get_int(doc["seed"], f("seed"), 0));
  if (doc.contains("tol")) c.tol = get_real(doc["tol"], f("tol"));
  if (doc.contains("samples")) c.samples = static_cast<std::size_t>(get_int(doc["samples"], f("samples"), 1));
  if (ov.seed) c.seed = *ov.seed;
  if (ov.tol) c.tol = *ov.tol;
  if (!(c.tol > 0.0)) throw UsageError(ov.tol ? "--tol" : f("tol"), "must be positive");

  if (doc.contains("U_list")) {
    const auto& u = doc["U_list"];
    if (!u.is_array() || u.empty()) throw UsageError(f("U_list"), "expected a non-empty list of couplings");
    c.couplings.clear();
    for (std::size_t i = 0; i < u.size(); ++i) {
      const std::string ef = f("U_list") + "[" + std::to_string(i) + "]";
      const double v = get_real(u[i], ef);
      if (v == 0.0) throw UsageError(ef, "coupling must be nonzero");
      c.couplings.push_back(v);
    }
  }
  if (doc.contains("Nmax")) c.nmax = static_cast<std::size_t>(get_int(doc["Nmax"], f("Nmax"), 1));
  if (doc.contains("kind")) {
    if (!doc["kind"].is_string()) throw UsageError(f("kind"), "expected a string");
    c.fock_kind = doc["kind"].get<std::string>();
    if (c.fock_kind != "both" && c.fock_kind != "even_odd" && c.fock_kind != "small_modes")
      throw UsageError(f("kind"), "expected even_odd, small_modes or both");
  }
  if (doc.contains("ell")) c.ell = static_cast<std::size_t>(get_int(doc["ell"], f("ell"), 0));
  if (c.ell > c.nmax) throw UsageError(f("ell"), "exceeds Nmax");
  if (doc.contains("ambient")) {
    c.ambient = static_cast<std::size_t>(get_int(doc["ambient"], f("ambient"), 1));
    if (*c.ambient < c.nmax) throw UsageError(f("ambient"), "below Nmax");
  }
  const std::size_t fock_side = c.ambient.value_or(c.nmax + 1) + 1;
  if (fock_side * fock_side * fock_side > kDimensionCap) throw UsageError(f("Nmax"), "three-factor Fock space exceeds the dimension cap");

  if (doc.contains("twist_spin")) {
    if (!doc["twist_spin"].is_string()) throw UsageError(f("twist_spin"), "expected \"up\" or \"down\"");
    c.twist_spin = doc["twist_spin"].get<std::string>();
    if (c.twist_spin != "up" && c.twist_spin != "down") throw UsageError(f("twist_spin"), "expected \"up\" or \"down\"");
    if (c.twist_spin == "down" && !c.down) throw UsageError(f("twist_spin"), "no down model given");
  }
  if (doc.contains("twist")) {
    const std::string tf = f("twist");
    if (!doc["twist"].is_array()) throw UsageError(tf, "expected a list of {a, abar, modulus, angle}");
    if (!c.up) throw UsageError(tf, "needs a model");
    const SpinConfig& s = c.twist_spin == "down" ? *c.down : *c.up;
    const XXModel spin = s.model();
    std::set<std::pair<int, int>> seen;
    for (std::size_t i = 0; i < doc["twist"].size(); ++i) {
      const auto& e = doc["twist"][i];
      const std::string ef = tf + "[" + std::to_string(i) + "]";
      if (!e.is_object()) throw UsageError(ef, "expected an object");
      for (const char* k : {"a", "abar"})
        if (!e.contains(k)) throw UsageError(join(ef, k), "missing");
      TwistEntry t;
      t.a = static_cast<int>(get_int(e["a"], join(ef, "a"), 1));
      t.abar = static_cast<int>(get_int(e["abar"], join(ef, "abar"), 1));
      if (t.a > s.m + s.n || !spin.in_n(static_cast<std::size_t>(t.a - 1))) throw UsageError(join(ef, "a"), "not an index of N");
      if (t.abar > s.m + s.n || spin.in_n(static_cast<std::size_t>(t.abar - 1)))
        throw UsageError(join(ef, "abar"), "not an index of the complement of N");
      if (e.contains("modulus")) t.modulus = get_real(e["modulus"], join(ef, "modulus"));
      if (e.contains("angle")) t.angle = get_real(e["angle"], join(ef, "angle"));
      if (!(t.modulus > 0.0)) throw UsageError(join(ef, "modulus"), "must be positive");
      if (!seen.insert({t.a, t.abar}).second) throw UsageError(ef, "pair listed twice");
      c.twist.push_back(t);
    }
  }

  if (c.up && static_cast<double>(c.L) * std::log(static_cast<double>(c.site_dim())) >
                  std::log(static_cast<double>(kDimensionCap)))
    throw UsageError(f("L"), "chain dimension " + std::to_string(c.site_dim()) + "^" + std::to_string(c.L) +
                                 " exceeds the cap " + std::to_string(kDimensionCap));
  return c;
}

std::vector<ModelConfig> parse_document(const json& doc, const Overrides& ov, bool need_up) {
  std::vector<ModelConfig> out;
  if (doc.is_array()) {
    if (doc.empty()) throw UsageError("", "empty model list");
    for (std::size_t i = 0; i < doc.size(); ++i) out.push_back(parse_model(doc[i], ov, need_up, "[" + std::to_string(i) + "]"));
  } else {
    out.push_back(parse_model(doc, ov, need_up));
  }
  return out;
}

}  // namespace unihub::cli

#include "cli_commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <numbers>

#include "unihub/hubbard_bethe.hpp"
#include "unihub/strong_coupling.hpp"
#include "unihub/xx_bethe.hpp"

namespace unihub::cli {

using nlohmann::json;

namespace {

constexpr double kPi = std::numbers::pi;

class Report {
 public:
  // residual <= tolerance
  void upper(const std::string& name, double residual, double tol) { add(name, residual, tol, "max", residual <= tol); }
  // residual > bound
  void lower(const std::string& name, double residual, double bound) { add(name, residual, bound, "min", residual > bound); }
  void note(const std::string& name, json value) { notes_[name] = std::move(value); }

  void timed(const std::string& section, const std::function<void()>& f) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    timings_[section] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }

  json spectra = json::array();
  json extra = json::object();

  json finish(const json& echo) const {
    json out = extra;
    out["config"] = echo;
    out["checks"] = json::array();
    bool pass = true;
    for (const auto& [name, c] : checks_) {
      out["checks"].push_back(c);
      pass = pass && c["pass"].get<bool>();
    }
    out["diagnostics"] = notes_;
    out["spectra"] = spectra;
    out["timings"] = timings_;
    out["pass"] = pass;
    return out;
  }

 private:
  void add(const std::string& name, double residual, double tol, const char* bound, bool pass) {
    checks_[name] = {{"name", name}, {"residual", residual}, {"tolerance", tol}, {"bound", bound}, {"pass", pass}};
  }
  std::map<std::string, json> checks_;
  json notes_ = json::object();
  std::map<std::string, double> timings_;
};

double per_side(const Matrix& a) { return a.size() == 0 ? 0.0 : frobenius_per_side(a); }

std::vector<double> sorted(const Eigen::VectorXd& v) {
  std::vector<double> out(v.data(), v.data() + v.size());
  std::sort(out.begin(), out.end());
  return out;
}

double nearest(const std::vector<double>& vals, double e) {
  double best = INFINITY;
  for (double v : vals) best = std::min(best, std::abs(v - e));
  return best;
}

struct SectorSpectrum {
  ChargeVector charge;
  std::size_t dimension = 0;
  std::vector<double> real;
  std::vector<double> imag;  // empty when the block is hermitian
  double hermiticity = 0.0;
};

Matrix block(const Matrix& h, const std::vector<std::size_t>& states) {
  const auto n = static_cast<Eigen::Index>(states.size());
  Matrix b(n, n);
  for (Eigen::Index c = 0; c < n; ++c)
    for (Eigen::Index r = 0; r < n; ++r)
      b(r, c) = h(static_cast<Eigen::Index>(states[static_cast<std::size_t>(r)]),
                  static_cast<Eigen::Index>(states[static_cast<std::size_t>(c)]));
  return b;
}

SectorSpectrum diagonalize(const ChargeVector& q, const Matrix& b, bool hermitian) {
  SectorSpectrum s;
  s.charge = q;
  s.dimension = static_cast<std::size_t>(b.rows());
  s.hermiticity = per_side(b - b.adjoint());
  if (hermitian) {
    s.real = sorted(eigh(b).values);
    return s;
  }
  const Eigen::ComplexEigenSolver<Matrix> es(b, false);
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](cplx x, cplx y) { return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag(); });
  for (cplx z : ev) {
    s.real.push_back(z.real());
    s.imag.push_back(z.imag());
  }
  return s;
}

struct SectorResult {
  std::vector<SectorSpectrum> sectors;
  double leakage = 0.0;  // weight of H outside the charge blocks
  std::size_t total = 0;
};

std::map<ChargeVector, std::vector<std::size_t>> sectors_of(const ModelConfig& c) {
  if (c.hubbard()) {
    const auto hm = c.hubbard_model();
    return charge_sectors(SiteList(c.L, hm.site()), hubbard_site_charges(hm));
  }
  const auto m = c.up_model();
  return charge_sectors(SiteList(c.L, m.space()), xx_site_charges(m));
}

SectorResult sector_spectra(const ModelConfig& c) {
  SectorResult out;
  const auto secs = sectors_of(c);
  if (c.twist.empty()) {
    const auto terms = c.hubbard() ? hamiltonian_terms_hubbard(c.hubbard_model(), c.L) : hamiltonian_terms_xx(c.up_model(), c.L);
    for (const auto& [q, states] : secs) {
      out.sectors.push_back(diagonalize(q, restrict_terms(terms, states), true));
      out.total += states.size();
    }
    return out;
  }
  Matrix h;
  bool phases = false;
  if (c.hubbard()) {
    const auto hm = c.hubbard_model();
    const auto ru = c.twist_spin == "up" ? c.refinement(hm.up) : Refinement::maximal(hm.up, 1.0);
    const auto rd = c.twist_spin == "down" ? c.refinement(hm.down) : Refinement::maximal(hm.down, 1.0);
    h = twisted_hubbard_hamiltonian(hm, ru, rd, c.L).matrix;
    phases = ru.phases() && rd.phases();
  } else {
    const auto ref = c.refinement(c.up_model());
    h = twisted_hamiltonian(c.up_model(), ref, c.L).matrix;
    phases = ref.phases();
  }
  Matrix in_blocks = Matrix::Zero(h.rows(), h.cols());
  for (const auto& [q, states] : secs) {
    const Matrix b = block(h, states);
    for (std::size_t col = 0; col < states.size(); ++col)
      for (std::size_t row = 0; row < states.size(); ++row)
        in_blocks(static_cast<Eigen::Index>(states[row]), static_cast<Eigen::Index>(states[col])) =
            b(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
    out.sectors.push_back(diagonalize(q, b, phases));
    out.total += states.size();
  }
  out.leakage = per_side(h - in_blocks);
  return out;
}

std::vector<double> all_levels(const SectorResult& r) {
  std::vector<double> v;
  for (const auto& s : r.sectors) v.insert(v.end(), s.real.begin(), s.real.end());
  std::sort(v.begin(), v.end());
  return v;
}

// Dense commutator checks run on at most this many chain states.
constexpr double kDenseStates = 1024.0;

std::size_t dense_length(std::size_t site_dim, std::size_t length) {
  while (length > 2 && std::pow(static_cast<double>(site_dim), static_cast<double>(length)) > kDenseStates) --length;
  return length;
}

bool wants(const std::string& suite, const char* name) { return suite == "all" || suite == name; }

// ---- verify ----

void property_suite(Report& rep, const std::string& tag, const XXModel& m, const ModelConfig& c, std::size_t len) {
  const auto pr = verify_r_matrix(m, c.samples, c.seed, c.tol);
  for (const auto& [name, r] : pr.properties) rep.upper("properties." + tag + "." + name, r.value, c.tol);
  const Matrix t1 = transfer_xx(m, 0.31, len).matrix, t2 = transfer_xx(m, -0.77, len).matrix;
  rep.upper("properties." + tag + ".transfer-commute", commutator_norm(t1, t2).value, c.tol);
}

void xx_symmetry(Report& rep, const std::string& tag, const XXModel& m, const ModelConfig& c, std::size_t len) {
  const SiteList chain(len, m.space());
  const Matrix h = hamiltonian_xx(m, len).matrix;
  const Matrix t = transfer_xx(m, 0.53, len).matrix;
  double worst_h = 0.0, worst_t = 0.0;
  for (const auto& g : symmetry_generators_xx(m)) {
    const Matrix big = global_one_site(g.one_site, chain);
    worst_h = std::max(worst_h, commutator_norm(h, big).value);
    worst_t = std::max(worst_t, commutator_norm(t, big).value);
  }
  rep.upper("symmetry." + tag + ".hamiltonian", worst_h, c.tol);
  rep.upper("symmetry." + tag + ".transfer", worst_t, c.tol);
  const auto cross = cross_block_generators_xx(m);
  if (cross.empty()) return;
  double least = INFINITY;
  for (const auto& g : cross) least = std::min(least, commutator_norm(h, global_one_site(g.one_site, chain)).value);
  rep.lower("symmetry." + tag + ".cross-block", least, 1e-2);
}

void verify(Report& rep, const ModelConfig& c, const std::string& suite) {
  // Transfer matrices, symmetry commutators and twisted chains are dense.
  const std::size_t len = dense_length(c.site_dim(), c.L);
  rep.note("dense-check-length", len);
  if (wants(suite, "properties"))
    rep.timed("properties", [&] {
      const XXModel up = c.up_model();
      property_suite(rep, "up", up, c, dense_length(up.dim(), c.L));
      if (c.down) property_suite(rep, "down", c.down->model(), c, dense_length(c.down->model().dim(), c.L));
    });
  if (wants(suite, "hubbard") && c.hubbard())
    rep.timed("hubbard", [&] {
      const auto hm = c.hubbard_model();
      const auto r = verify_hubbard_r(hm, c.samples, c.seed);
      rep.upper("hubbard.ybe", r.ybe, c.tol);
      rep.upper("hubbard.unitarity", r.unitarity, c.tol);
      rep.upper("hubbard.regularity", r.regularity, c.tol);
      rep.upper("hubbard.coefficient-forms", r.coefficient_forms, c.tol);
      rep.note("hubbard.closed-form-unitarity", r.closed_unitarity);
      rep.note("hubbard.symmetry", r.symmetry);
      rep.note("hubbard.symmetry-site-two", r.symmetry_site_two);
      const Matrix t1 = transfer_hubbard(hm, 0.31, len).matrix, t2 = transfer_hubbard(hm, -0.77, len).matrix;
      rep.upper("hubbard.transfer-commute", commutator_norm(t1, t2).value, c.tol);
    });
  if (wants(suite, "symmetry"))
    rep.timed("symmetry", [&] {
      if (!c.hubbard()) {
        xx_symmetry(rep, "up", c.up_model(), c, len);
        return;
      }
      const auto s = symmetry_hubbard(c.hubbard_model(), len);
      rep.upper("symmetry.hubbard.r-matrix", s.r_commutator, c.tol);
      rep.upper("symmetry.hubbard.hamiltonian", s.h_commutator, c.tol);
      rep.upper("symmetry.hubbard.interaction", s.c_commutator, c.tol);
      if (!cross_block_generators_hubbard(c.hubbard_model()).empty())
        rep.lower("symmetry.hubbard.cross-block", s.cross_block_min, 1e-2);
      rep.note("symmetry.hubbard.generators", s.generators);
    });
  if (wants(suite, "twist") && !c.twist.empty())
    rep.timed("twist", [&] {
      if (!c.hubbard()) {
        const auto ref = c.refinement(c.up_model());
        const auto t = verify_twist(c.up_model(), ref, len, c.samples, c.seed);
        for (const auto& [name, r] : t.properties.properties)
          if (name == "symmetry") rep.note("twist.symmetry", r.value);
          else rep.upper("twist." + name, r.value, c.tol);
        rep.upper("twist.closed-form", t.closed_form, c.tol);
        rep.upper("twist.inverse", t.inverse, c.tol);
        rep.upper("twist.transfer-commute", t.transfer_commutator, c.tol);
        if (ref.phases()) {
          rep.upper("twist.hermiticity", t.hermiticity, c.tol);
          rep.upper("twist.imaginary-spectrum", t.imaginary_spectrum, c.tol);
        } else {
          rep.note("twist.hermiticity", t.hermiticity);
        }
        return;
      }
      const auto hm = c.hubbard_model();
      const auto ru = c.twist_spin == "up" ? c.refinement(hm.up) : Refinement::maximal(hm.up, 1.0);
      const auto rd = c.twist_spin == "down" ? c.refinement(hm.down) : Refinement::maximal(hm.down, 1.0);
      const auto t = verify_twisted_hubbard(hm, ru, rd, len, c.samples, c.seed);
      rep.upper("twist.hubbard.ybe", t.ybe, c.tol);
      rep.upper("twist.hubbard.unitarity", t.unitarity, c.tol);
      rep.upper("twist.hubbard.regularity", t.regularity, c.tol);
      rep.upper("twist.hubbard.closed-form", t.closed_form, c.tol);
      if (ru.phases() && rd.phases()) rep.upper("twist.hubbard.hermiticity", t.hermiticity, c.tol);
      else rep.note("twist.hubbard.hermiticity", t.hermiticity);
    });
}

// ---- spectrum ----

void spectrum(Report& rep, const ModelConfig& c) {
  SectorResult r;
  rep.timed("diagonalization", [&] { r = sector_spectra(c); });
  double herm = 0.0;
  bool any_complex = false;
  for (const auto& s : r.sectors) {
    herm = std::max(herm, s.hermiticity);
    json e = {{"sector", s.charge}, {"dimension", s.dimension}, {"eigenvalues", s.real}};
    if (!s.imag.empty()) {
      e["imag"] = s.imag;
      any_complex = true;
    }
    rep.spectra.push_back(e);
  }
  const double full = std::pow(static_cast<double>(c.site_dim()), static_cast<double>(c.L));
  rep.upper("spectrum.state-count", std::abs(static_cast<double>(r.total) - full), 0.0);
  rep.upper("spectrum.sector-closure", r.leakage, c.tol);
  if (any_complex) rep.note("spectrum.hermiticity", herm);
  else rep.upper("spectrum.hermiticity", herm, c.tol);
  rep.extra["eigenvalue_count"] = r.total;
  rep.extra["sector_labels"] = c.hubbard() ? "one-hot occupation of V_up then V_down, summed over sites"
                                           : "one-hot occupation of V, summed over sites";
}

// ---- bae ----

void bae(Report& rep, const ModelConfig& c, const std::string& suite) {
  if (wants(suite, "xx") && !c.hubbard())
    rep.timed("xx", [&] {
      const auto r = bae_vs_ed(c.up_model(), c.L, c.tol);
      rep.upper("bae.xx.worst-match", r.worst_match, c.tol);
      rep.upper("bae.xx.missing", static_cast<double>(r.missing), 0.0);
      rep.note("bae.xx.sectors", r.sectors);
      rep.note("bae.xx.predicted-levels", r.predicted_levels);
      rep.note("bae.xx.ed-levels", r.ed_levels);
      rep.note("bae.xx.sector-levels-match", r.exact());
    });
  if (!wants(suite, "hubbard") || !c.hubbard()) return;
  rep.timed("hubbard", [&] {
    const auto hm = c.hubbard_model();
    const auto levels = all_levels(sector_spectra(c));
    const auto sc = hubbard_small_chain(hm);
    double one = 0.0, in_ed = nearest(levels, hm.U * static_cast<double>(c.L));
    json energies = json::array();
    for (std::size_t j = 0; j < sc.dim(); ++j)
      for (std::size_t k = 0; k < c.L; ++k) {
        const auto e = one_excitation_hubbard(hm, c.L, j, 2.0 * kPi * static_cast<double>(k) / static_cast<double>(c.L));
        one = std::max(one, e.max());
        in_ed = std::max(in_ed, nearest(levels, e.energy));
        energies.push_back({{"label", j}, {"type", to_string(e.type)}, {"k", k}, {"energy", e.energy}});
      }
    rep.extra["one_excitation"] = energies;
    rep.upper("bae.hubbard.one-excitation", one, c.tol);
    rep.upper("bae.hubbard.energies-in-ed", in_ed, c.tol);
    try {
      const auto sols = solve_barred_pair(hm, c.L);
      double cond = 0.0, res = 0.0, ed = 0.0;
      for (const auto& s : sols) {
        const auto t = two_excitation_hubbard(hm, c.L, s);
        cond = std::max(cond, t.condition);
        res = std::max(res, t.residual.max());
        ed = std::max(ed, nearest(levels, s.energy));
      }
      rep.note("bae.hubbard.barred-pair-solutions", sols.size());
      if (!sols.empty()) {
        rep.upper("bae.hubbard.barred-pair-condition", cond, c.tol);
        rep.upper("bae.hubbard.barred-pair-eigenstate", res, c.tol);
        rep.upper("bae.hubbard.barred-pair-in-ed", ed, c.tol);
      }
    } catch (const std::invalid_argument& e) {
      rep.note("bae.hubbard.barred-pair", std::string("skipped: ") + e.what());
    }
    try {
      const auto u = bae_unbarred(hm, c.L, 1, 1);
      rep.upper("bae.hubbard.unbarred", std::max(u.up.residual, u.down.residual), c.tol);
      rep.upper("bae.hubbard.unbarred-vs-xx", unbarred_cross_check(hm, c.L, 1, 1), c.tol);
    } catch (const std::invalid_argument& e) {
      rep.note("bae.hubbard.unbarred", std::string("skipped: ") + e.what());
    }
  });
}

// ---- perturb ----

void perturb(Report& rep, const ModelConfig& c, const std::string& suite) {
  if (!c.hubbard()) throw UsageError("down", "perturb needs a Hubbard model (up and down)");
  const HubbardModel unit(c.up_model(), c.down->model(), 1.0);
  if (wants(suite, "scaling"))
    rep.timed("scaling", [&] {
      const auto s = strong_coupling_vs_ed(unit, c.L, c.couplings);
      json rows = json::array();
      for (const auto& r : s.rows) rows.push_back({r.U, r.error_h2, r.error_h4});
      rep.extra["rows"] = rows;
      rep.extra["row_columns"] = {"U", "error_H2", "error_H2+H4"};
      rep.extra["half_filled_states"] = s.states;
      if (s.rows.size() < 2) return;
      // Error ratio within a factor 2 of (U_last/U_first)^k, k = 3 or 5.
      const double span = std::log(std::abs(s.rows.back().U / s.rows.front().U));
      rep.note("perturb.exponent-h2", s.exponent_h2);
      rep.note("perturb.exponent-h4", s.exponent_h4);
      rep.upper("perturb.scaling-h2", std::abs(s.exponent_h2 + 3.0) * span / std::log(2.0), 1.0);
      if (c.L >= 5) rep.upper("perturb.scaling-h4", std::abs(s.exponent_h4 + 5.0) * span / std::log(2.0), 1.0);
    });
  if (wants(suite, "three-site"))
    rep.timed("three-site", [&] {
      double worst = 0.0;
      for (double U : c.couplings) {
        const auto t = three_site_spectrum(unit, U);
        worst = std::max(worst, t.deviation);
        rep.spectra.push_back({{"U", U}, {"eigenvalues", t.eigenvalues}, {"expected", t.expected}});
      }
      rep.upper("perturb.three-site", worst, c.tol);
    });
  if (wants(suite, "odd"))
    rep.timed("odd", [&] {
      const auto o = odd_word_check(unit, c.L, 3);
      rep.upper("perturb.odd-words", o.odd_words, c.tol);
      rep.note("perturb.winding-words", o.winding_words);
      if (c.L >= 3) {
        const auto k = corollaries(unit, c.L);
        rep.upper("perturb.corollary.square", k.square, c.tol);
        rep.upper("perturb.corollary.back-forth", k.back_forth, c.tol);
        rep.upper("perturb.corollary.converge", k.converge, c.tol);
        rep.upper("perturb.corollary.odd-power", k.odd_power, c.tol);
        rep.upper("perturb.corollary.redundancy", k.redundancy, c.tol);
      }
    });
}

// ---- fock ----

void fock(Report& rep, const ModelConfig& c, const std::string& suite) {
  if (wants(suite, "properties"))
    rep.timed("properties", [&] {
      for (auto [name, kind] : {std::pair{"even_odd", FockKind::even_odd}, std::pair{"small_modes", FockKind::small_modes}}) {
        if (c.fock_kind != "both" && c.fock_kind != name) continue;
        const auto pr = verify_r_family(fock_family(c.nmax, kind, c.ell), c.samples, c.seed, c.tol);
        for (const auto& [p, r] : pr.properties) rep.upper(std::string("fock.") + name + "." + p, r.value, c.tol);
      }
    });
  if (wants(suite, "noncyclic"))
    rep.timed("noncyclic", [&] {
      const auto d = noncyclicity_demo(c.nmax, c.ambient.value_or(c.nmax + 1), c.seed);
      rep.lower("fock.noncyclic.difference", d.difference, c.tol);
      rep.upper("fock.noncyclic.predicted", std::abs(d.difference - d.predicted), c.tol);
      rep.upper("fock.full-trace-cyclic", d.full_trace_cyclic, c.tol);
      rep.note("fock.noncyclic.ambient", d.ambient);
      rep.note("fock.noncyclic.truncated-difference", d.truncated_difference);
    });
}

}  // namespace

Command parse_command(const std::string& name) {
  for (Command c : {Command::verify, Command::spectrum, Command::bae, Command::perturb, Command::fock})
    if (to_string(c) == name) return c;
  throw UsageError("", "unknown command " + name);
}

std::string to_string(Command c) {
  switch (c) {
    case Command::verify: return "verify";
    case Command::spectrum: return "spectrum";
    case Command::bae: return "bae";
    case Command::perturb: return "perturb";
    case Command::fock: return "fock";
  }
  return "";
}

const std::vector<std::string>& suites(Command c) {
  static const std::map<Command, std::vector<std::string>> table = {
      {Command::verify, {"all", "properties", "hubbard", "symmetry", "twist"}},
      {Command::spectrum, {"all"}},
      {Command::bae, {"all", "xx", "hubbard"}},
      {Command::perturb, {"all", "scaling", "three-site", "odd"}},
      {Command::fock, {"all", "properties", "noncyclic"}},
  };
  return table.at(c);
}

json run(Command cmd, const ModelConfig& c, const std::string& suite) {
  Report rep;
  switch (cmd) {
    case Command::verify: verify(rep, c, suite); break;
    case Command::spectrum: spectrum(rep, c); break;
    case Command::bae: bae(rep, c, suite); break;
    case Command::perturb: perturb(rep, c, suite); break;
    case Command::fock: fock(rep, c, suite); break;
  }
  json out = rep.finish(c.echo());
  if (c.up) out["model"] = c.hubbard() ? c.hubbard_model().name() : c.up_model().name();
  return out;
}

json run_zoo(const Overrides& ov) {
  Report rep;
  ModelConfig c;
  if (ov.seed) c.seed = *ov.seed;
  if (ov.tol) c.tol = *ov.tol;
  json names = json::array();
  rep.timed("properties", [&] {
    for (const auto& m : xx_zoo()) {
      names.push_back(m.name());
      for (const auto& [name, r] : verify_r_matrix(m, c.samples, c.seed, c.tol).properties)
        rep.upper("properties." + m.name() + "." + name, r.value, c.tol);
    }
  });
  json echo = {{"zoo", names}, {"seed", c.seed}, {"tol", c.tol}, {"samples", c.samples}};
  return rep.finish(echo);
}

}  // namespace unihub::cli

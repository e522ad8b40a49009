#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "unihub/fock.hpp"
#include "unihub/twist.hpp"

namespace unihub::cli {

inline constexpr const char* kToolVersion = "0.1.0";

// Bad input; `field` is the dotted path of the offending config entry.
class UsageError : public std::runtime_error {
 public:
  UsageError(std::string field, const std::string& what)
      : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

struct SpinConfig {
  int m = 0;
  int n = 0;
  std::vector<int> subset;
  XXModel model() const { return XXModel::gl(m, n, subset); }
};

struct TwistEntry {
  int a = 0;     // 1-based, inside N
  int abar = 0;  // 1-based, outside N
  double modulus = 1.0;
  double angle = 0.0;
};

struct ModelConfig {
  std::optional<SpinConfig> up;
  std::optional<SpinConfig> down;
  double U = 1.0;
  std::size_t L = 4;
  std::vector<TwistEntry> twist;
  std::string twist_spin = "up";
  std::uint64_t seed = 0;
  double tol = 1e-10;
  std::size_t samples = 20;
  std::vector<double> couplings = {8.0, 16.0};
  std::size_t nmax = 3;
  std::string fock_kind = "both";
  std::size_t ell = 0;
  std::optional<std::size_t> ambient;

  bool hubbard() const { return up.has_value() && down.has_value(); }
  std::size_t site_dim() const;
  XXModel up_model() const { return up->model(); }
  HubbardModel hubbard_model() const { return HubbardModel(up->model(), down->model(), U); }
  // Maximal refinement of the twisted spin with the listed q = modulus·e^{i angle}, 1 elsewhere.
  Refinement refinement(const XXModel& spin) const;
  nlohmann::json echo() const;
};

struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
};

// `need_up`: the command builds a model, so `up` is mandatory.
ModelConfig parse_model(const nlohmann::json& doc, const Overrides& ov, bool need_up, const std::string& prefix = "");
std::vector<ModelConfig> parse_document(const nlohmann::json& doc, const Overrides& ov, bool need_up);

}  // namespace unihub::cli

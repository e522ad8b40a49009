#include <chrono>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "cli_commands.hpp"

using namespace unihub;
using namespace unihub::cli;
using nlohmann::json;

namespace {

constexpr int kPass = 0, kFail = 1, kUsage = 2;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--model", "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("--model", std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checks for projector-built XX and Hubbard chains"};
  app.require_subcommand(1);
  std::string model_path, out_path, suite = "all";
  std::uint64_t seed = 0;
  double tol = 1e-10;
  for (const char* name : {"verify", "spectrum", "bae", "perturb", "fock"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--model", model_path, "JSON model configuration (object or array of objects)");
    sub->add_option("--out", out_path, "report path (standard output when omitted)");
    sub->add_option("--seed", seed, "random seed")->default_val(0);
    sub->add_option("--tol", tol, "check tolerance")->default_val(1e-10);
    sub->add_option("--suite", suite, "suite name")->default_val("all");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  const auto t0 = std::chrono::steady_clock::now();
  json report;
  try {
    const CLI::App* sub = app.get_subcommands().front();
    const Command cmd = parse_command(sub->get_name());
    const auto& allowed = suites(cmd);
    if (std::find(allowed.begin(), allowed.end(), suite) == allowed.end())
      throw UsageError("--suite", "unknown suite '" + suite + "' for " + to_string(cmd));
    Overrides ov;
    if (sub->count("--seed")) ov.seed = seed;
    if (sub->count("--tol")) {
      if (!(tol > 0.0)) throw UsageError("--tol", "must be positive");
      ov.tol = tol;
    }
    report["tool"] = "unihub";
    report["version"] = kToolVersion;
    report["command"] = to_string(cmd);
    report["suite"] = suite;
    report["runs"] = json::array();
    if (model_path.empty()) {
      if (cmd == Command::verify) report["runs"].push_back(run_zoo(ov));
      else if (cmd == Command::fock) report["runs"].push_back(run(cmd, parse_model(json::object(), ov, false), suite));
      else throw UsageError("--model", "required for " + to_string(cmd));
    } else {
      for (const auto& c : parse_document(read_json(model_path), ov, cmd != Command::fock))
        report["runs"].push_back(run(cmd, c, suite));
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error while running checks: " << e.what() << "\n";
    return kFail;
  }

  bool pass = true;
  for (const auto& r : report["runs"]) pass = pass && r["pass"].get<bool>();
  report["pass"] = pass;
  report["timings"] = {{"total_s", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};

  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: --out: cannot write " << out_path << "\n";
      return kUsage;
    }
    out << text;
  }
  if (!pass) {
    for (const auto& r : report["runs"])
      for (const auto& c : r["checks"])
        if (!c["pass"].get<bool>()) std::cerr << "FAIL " << c["name"].get<std::string>() << "\n";
  }
  return pass ? kPass : kFail;
}

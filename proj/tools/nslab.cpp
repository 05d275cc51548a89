// Command-line front end: ingest metric definitions, classify and verify
// them, emit deterministic JSON and human-readable reports.
//
// Exit codes: 0 pass, 1 check failure, 2 input error, 3 sampling failure.

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "nsl/report.hpp"

namespace {

uint64_t default_seed() {
  if (const char* env = std::getenv("NULLSTRING_LAB_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 1;
}

struct CommonOpts {
  std::string file;
  int points = 20;
  uint64_t seed = default_seed();
  std::string mode;
  std::string json_path;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("file", o.file, "metric definition file")->required();
  cmd->add_option("--points", o.points, "number of sample points");
  cmd->add_option("--seed", o.seed, "random seed (default: NULLSTRING_LAB_SEED or 1)");
  cmd->add_option("--mode", o.mode, "override mode: real|complex")
      ->check(CLI::IsMember({"real", "complex"}));
  cmd->add_option("--json", o.json_path, "write the JSON report to this path");
}

nsl::MetricFile load(const CommonOpts& o) {
  nsl::MetricFile mf = nsl::MetricFile::load(o.file);
  if (o.mode == "real") {
    mf.mode = nsl::Mode::Real;
    mf.bindings.mode = nsl::Mode::Real;
  } else if (o.mode == "complex") {
    mf.mode = nsl::Mode::Complex;
    mf.bindings.mode = nsl::Mode::Complex;
  }
  return mf;
}

void emit(const std::string& json, const std::string& text, const std::string& json_path) {
  if (!json_path.empty()) {
    std::ofstream out(json_path, std::ios::binary);
    out << json;
  }
  std::cout << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numeric laboratory for 4-metrics with congruences of null strings"};
  app.require_subcommand(1);

  CommonOpts copt;
  std::string check = "congruences";
  std::string grid;

  CLI::App* c_classify = app.add_subcommand("classify", "sample points and classify the metric");
  add_common(c_classify, copt);

  CLI::App* c_verify = app.add_subcommand("verify", "run a named residual check");
  add_common(c_verify, copt);
  c_verify->add_option("--check", check, "congruences|einstein|killing|master|type3")
      ->check(CLI::IsMember({"congruences", "einstein", "killing", "master", "type3"}));

  CLI::App* c_scan = app.add_subcommand("scan", "per-cell Petrov label map over a 2-D grid");
  add_common(c_scan, copt);
  c_scan->add_option("--grid", grid, "e.g. \"x=-1:1:21,y=-1:1:21;q=0.3,p=-0.2\"")->required();

  CLI::App* c_fam = app.add_subcommand("families", "list the built-in metric families");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c_fam->parsed()) {
      for (const auto* f : nsl::list_families()) {
        std::cout << f->id << "\t" << f->claimed_pattern << "\t" << f->note << "\n";
      }
      std::cout << "# auxiliary (symmetry / special-solution entries):\n";
      for (const auto& f : nsl::all_families()) {
        if (!f.in_table) std::cout << f.id << "\t" << f.claimed_pattern << "\t" << f.note << "\n";
      }
      return 0;
    }

    nsl::MetricFile mf = load(copt);
    const std::string digest = nsl::content_digest(mf.raw);
    nsl::MetricInstance inst = mf.instantiate();

    if (c_classify->parsed()) {
      nsl::ClassificationRun run = nsl::run_classification(inst, copt.points, copt.seed);
      emit(nsl::classification_json(run, digest), nsl::classification_text(run), copt.json_path);
      return 0;
    }
    if (c_verify->parsed()) {
      nsl::VerificationRun run =
          nsl::run_verification(inst, nsl::parse_check(check), copt.points, copt.seed);
      emit(nsl::verification_json(run, digest), nsl::verification_text(run), copt.json_path);
      return run.passed ? 0 : 1;
    }
    if (c_scan->parsed()) {
      nsl::ScanResult scan = nsl::run_scan(inst, grid);
      emit(nsl::scan_json(scan, inst, digest), nsl::scan_text(scan, inst), copt.json_path);
      return 0;
    }
  } catch (const nsl::SamplingFailure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const nsl::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nsl::UnboundSlot& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const nsl::ArityViolation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

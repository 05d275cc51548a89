#ifndef NSL_REPORT_HPP
#define NSL_REPORT_HPP

#include <map>
#include <string>
#include <vector>

#include "nsl/metricfile.hpp"

namespace nsl {

extern const char* kToolVersion;
inline constexpr int kSchemaVersion = 1;

struct PointRecord {
  Point4 point;
  std::string sd_label;
  std::string asd_label;
  std::string symbol;
  std::array<Cplx, 5> cup{};      // C^(1..5)
  std::array<Cplx, 5> asd_cup{};  // dotted side
  Cplx scalar{};
  double max_curvature = 0;
  bool ill_conditioned = false;
  std::vector<std::string> flags;
};

struct ClassificationRun {
  Mode mode = Mode::Complex;
  std::string family_id;
  int points_sampled = 0;
  uint64_t seed = 0;
  std::vector<PointRecord> points;
  std::string aggregate_symbol;
  double confidence = 0;
  int flagged_points = 0;
  std::map<std::string, double> checks;
};

// Runs curvature + Petrov labels + congruence verification + optics at
// `npoints` samples and aggregates the modal symbol.
ClassificationRun run_classification(const MetricInstance& inst, int npoints, uint64_t seed);

enum class CheckKind { Congruences, Einstein, Killing, Master, Type3 };
CheckKind parse_check(const std::string& name);

struct VerificationRun {
  std::string check;
  bool passed = false;
  std::map<std::string, double> residuals;  // named maxima
  std::vector<std::string> failures;
  int points_sampled = 0;
  uint64_t seed = 0;
};

VerificationRun run_verification(const MetricInstance& inst, CheckKind kind, int npoints,
                                 uint64_t seed);

// Deterministic JSON serialization of either run, with provenance.
std::string classification_json(const ClassificationRun& run, const std::string& input_digest);
std::string verification_json(const VerificationRun& run, const std::string& input_digest);
std::string classification_text(const ClassificationRun& run);
std::string verification_text(const VerificationRun& run);

struct ScanAxis {
  int coord = 0;
  double lo = -1, hi = 1;
  int count = 11;
};

struct ScanResult {
  ScanAxis ax1, ax2;
  Point4 base;
  std::vector<std::string> labels;        // row-major symbol strings ("!" on error)
  std::vector<bool> boundary;             // neighbor labels differ
};

// Grid spec: "x=-1:1:21,y=-1:1:21;q=0.3,p=-0.2" over the instance chart.
ScanResult run_scan(const MetricInstance& inst, const std::string& grid_spec);
std::string scan_json(const ScanResult& scan, const MetricInstance& inst,
                      const std::string& input_digest);
std::string scan_text(const ScanResult& scan, const MetricInstance& inst);

}  // namespace nsl

#endif

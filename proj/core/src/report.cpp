#include "nsl/report.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nsl/errors.hpp"

namespace nsl {

const char* kToolVersion = "0.1.0";

namespace {

using nlohmann::json;

struct PointClassification {
  PetrovType sd, asd;
  std::vector<CongruenceReport> congruences;
  std::vector<OpticsClass> optics;
  GeometrySymbol symbol;
  CurvatureData curv;
};

PointClassification classify_point(const MetricInstance& inst, const Point4& pt) {
  PointClassification out;
  out.curv = inst.curvature(pt);
  const auto cup = out.curv.cup();
  const auto acup = out.curv.asd_cup();
  // a Weyl half below the zero threshold of the whole curvature is type O;
  // normalizing its own rounding noise would amplify it into a random label
  const double zero_floor = 1e-8 * (1.0 + out.curv.max_abs());
  auto side_max = [](const std::array<Cplx, 5>& c) {
    double m = 0;
    for (const auto& z : c) m = std::max(m, std::abs(z));
    return m;
  };
  const bool real = inst.mode == Mode::Real;
  auto label_of = [&](const std::array<Cplx, 5>& c) {
    if (side_max(c) <= zero_floor) {
      return PetrovType{real ? PetrovLabel::O_r : PetrovLabel::O, {}};
    }
    return real ? petrov_real(c) : petrov_complex(c);
  };
  out.sd = label_of(cup);
  out.asd = label_of(acup);
  const bool sd_is_o = out.sd.label == PetrovLabel::O || out.sd.label == PetrovLabel::O_r;
  const bool asd_is_o = out.asd.label == PetrovLabel::O || out.asd.label == PetrovLabel::O_r;

  const FramePoint fp = inst.frame.eval(pt);
  const ConnectionPoint conn = connection_at(fp);
  std::vector<CongruenceTag> tags;
  std::vector<const CongruenceReport*> sd_reports, asd_reports;
  for (const auto& c : inst.congruences) {
    out.congruences.push_back(verify_null_string(c.spec, fp, conn.spinor, pt));
  }
  for (const auto& r : out.congruences) {
    tags.push_back(CongruenceTag{r.self_dual, r.nonexpanding});
  }
  for (const auto& r : out.congruences) {
    (r.self_dual ? sd_reports : asd_reports).push_back(&r);
  }
  for (const auto* s : sd_reports) {
    for (const auto* a : asd_reports) {
      out.optics.push_back(intersection_optics(*s, *a).cls);
    }
  }
  out.symbol = assemble_symbol(out.sd.label, out.asd.label, tags, out.optics, sd_is_o, asd_is_o);
  // an O side carries the single superscript n (R = 0) or e (R != 0)
  const double rscale = 1.0 + out.curv.max_abs();
  const bool r_zero = std::abs(out.curv.scalar) <= 1e-8 * rscale;
  if (sd_is_o) out.symbol.sd_supers = r_zero ? "n" : "e";
  if (asd_is_o) out.symbol.asd_supers = r_zero ? "n" : "e";
  return out;
}

json point_to_json(const Point4& p) {
  json arr = json::array();
  for (const auto& c : p) arr.push_back(json::array({c.real(), c.imag()}));
  return arr;
}

}  // namespace

ClassificationRun run_classification(const MetricInstance& inst, int npoints, uint64_t seed) {
  ClassificationRun run;
  run.mode = inst.mode;
  run.family_id = inst.family_id;
  run.seed = seed;
  std::mt19937_64 rng(seed);

  double max_null_residual = 0;
  double max_einstein = 0;
  double max_killing = 0;
  int flag_mismatches = 0;

  for (int k = 0; k < npoints; ++k) {
    PointRecord rec;
    bool got = false;
    for (int attempt = 0; attempt < 8 && !got; ++attempt) {
      const Point4 pt = inst.sample(rng);
      rec.point = pt;
      try {
        PointClassification pc = classify_point(inst, pt);
        rec.sd_label = petrov_name(pc.sd.label);
        rec.asd_label = petrov_name(pc.asd.label);
        rec.symbol = pc.symbol.render();
        rec.cup = pc.curv.cup();
        rec.asd_cup = pc.curv.asd_cup();
        rec.scalar = pc.curv.scalar;
        rec.max_curvature = pc.curv.max_abs();
        for (std::size_t i = 0; i < pc.congruences.size(); ++i) {
          max_null_residual = std::max(max_null_residual, pc.congruences[i].residual);
          if (pc.congruences[i].nonexpanding != inst.congruences[i].claimed_nonexpanding) {
            ++flag_mismatches;
            rec.flags.push_back("expansion flag mismatch: " + inst.congruences[i].spec.label);
          }
        }
        if (inst.einstein) {
          const EinsteinResidual er = einstein_residual(pc.curv, inst.lambda);
          const double scale = 1.0 + pc.curv.max_abs();
          max_einstein = std::max(max_einstein, std::max(er.max_ricci, er.scalar_gap) / scale);
        }
        for (const auto& K : inst.killing) {
          max_killing = std::max(max_killing, killing_residual(inst, K, pt));
        }
        got = true;
      } catch (const IllConditioned& e) {
        rec.ill_conditioned = true;
        rec.flags.push_back(std::string("ill-conditioned: ") + e.what());
        got = true;  // keep the point, flagged
      } catch (const EvalError&) {
        // singular evaluation not caught by guards; resample
      }
    }
    if (!got) throw SamplingFailure("classification could not sample a usable point");
    run.points.push_back(std::move(rec));
  }
  run.points_sampled = int(run.points.size());

  // modal symbol over non-ill-conditioned points
  std::map<std::string, int> votes;
  for (const auto& r : run.points) {
    if (!r.ill_conditioned) ++votes[r.symbol];
  }
  int best = 0;
  for (const auto& [sym, count] : votes) {
    if (count > best) { best = count; run.aggregate_symbol = sym; }
  }
  run.confidence = run.points_sampled ? double(best) / run.points_sampled : 0.0;
  for (const auto& r : run.points) {
    if (r.ill_conditioned || r.symbol != run.aggregate_symbol) ++run.flagged_points;
  }
  run.checks["null_string_residual"] = max_null_residual;
  run.checks["expansion_flag_mismatches"] = double(flag_mismatches);
  if (inst.einstein) run.checks["einstein_residual"] = max_einstein;
  if (!inst.killing.empty()) run.checks["killing_residual"] = max_killing;
  return run;
}

CheckKind parse_check(const std::string& name) {
  if (name == "congruences") return CheckKind::Congruences;
  if (name == "einstein") return CheckKind::Einstein;
  if (name == "killing") return CheckKind::Killing;
  if (name == "master") return CheckKind::Master;
  if (name == "type3") return CheckKind::Type3;
  throw ParseError(ParseError::Kind::Syntax, "unknown check '" + name + "'", 0);
}

namespace {

void verify_congruences(const MetricInstance& inst, int npoints, std::mt19937_64& rng,
                        VerificationRun& run) {
  double max_residual = 0;
  double max_nn_optics = 0;
  int flag_mismatches = 0;
  int optics_violations = 0;
  for (int k = 0; k < npoints; ++k) {
    const Point4 pt = inst.sample(rng);
    const FramePoint fp = inst.frame.eval(pt);
    const ConnectionPoint conn = connection_at(fp);
    std::vector<CongruenceReport> reports;
    for (std::size_t i = 0; i < inst.congruences.size(); ++i) {
      CongruenceReport r = verify_null_string(inst.congruences[i].spec, fp, conn.spinor, pt);
      max_residual = std::max(max_residual, r.residual);
      if (r.nonexpanding != inst.congruences[i].claimed_nonexpanding) {
        ++flag_mismatches;
        run.failures.push_back("expansion flag mismatch for " + inst.congruences[i].spec.label);
      }
      reports.push_back(std::move(r));
    }
    for (const auto& s : reports) {
      if (!s.self_dual) continue;
      for (const auto& a : reports) {
        if (a.self_dual) continue;
        OpticsReport opt = intersection_optics(s, a);
        if (s.nonexpanding && a.nonexpanding) {
          max_nn_optics = std::max(max_nn_optics,
                                   std::max(std::abs(opt.theta), std::abs(opt.rho)));
          if (opt.cls != OpticsClass::MinusMinus) ++optics_violations;
        }
      }
    }
  }
  run.residuals["null_string_residual"] = max_residual;
  run.residuals["expansion_flag_mismatches"] = flag_mismatches;
  run.residuals["nn_optics_magnitude"] = max_nn_optics;
  run.residuals["nn_optics_violations"] = optics_violations;
  run.passed = max_residual < 1e-9 && flag_mismatches == 0 && optics_violations == 0;
}

void verify_einstein(const MetricInstance& inst, int npoints, std::mt19937_64& rng,
                     VerificationRun& run) {
  double max_ricci = 0, max_gap = 0;
  for (int k = 0; k < npoints; ++k) {
    const Point4 pt = inst.sample(rng);
    const CurvatureData c = inst.curvature(pt);
    const EinsteinResidual r = einstein_residual(c, inst.lambda);
    const double scale = 1.0 + c.max_abs();
    max_ricci = std::max(max_ricci, r.max_ricci / scale);
    max_gap = std::max(max_gap, r.scalar_gap / scale);
  }
  run.residuals["einstein_max_ricci"] = max_ricci;
  run.residuals["einstein_scalar_gap"] = max_gap;
  run.passed = max_ricci < 1e-10 && max_gap < 1e-10;
  if (!run.passed) run.failures.push_back("Einstein residual above tolerance");
}

void verify_killing(const MetricInstance& inst, int npoints, std::mt19937_64& rng,
                    VerificationRun& run) {
  if (inst.killing.empty()) {
    run.failures.push_back("no symmetry vectors declared for this instance");
    run.passed = false;
    return;
  }
  double worst = 0;
  for (int k = 0; k < npoints; ++k) {
    const Point4 pt = inst.sample(rng);
    for (const auto& K : inst.killing) {
      const double r = killing_residual(inst, K, pt);
      run.residuals["killing_" + K.name] = std::max(run.residuals["killing_" + K.name], r);
      worst = std::max(worst, r);
    }
  }
  run.residuals["killing_residual"] = worst;
  run.passed = worst < 1e-10;
  if (!run.passed) run.failures.push_back("symmetry residual above tolerance");
}

ScalarField field_or_zero(const MetricInstance& inst, const std::string& name) {
  auto it = inst.fields.find(name);
  if (it != inst.fields.end()) return it->second;
  return ScalarField("0", inst.mode, {}, inst.chart);
}

void verify_master(const MetricInstance& inst, int npoints, std::mt19937_64& rng,
                   VerificationRun& run) {
  const bool lambda_family = inst.family_id.rfind("pkE-II", 0) == 0 ||
                             inst.family_id == "pkE-D";
  const bool null_family = inst.family_id == "pkE-N" || inst.family_id == "homothety-III";
  if (!lambda_family && !null_family) {
    run.failures.push_back("master check applies to the Einstein symmetry families only");
    run.passed = false;
    return;
  }
  double worst = 0;
  for (int k = 0; k < npoints; ++k) {
    const Point4 pt = inst.sample(rng);
    if (lambda_family) {
      const ScalarField Sg = field_or_zero(inst, "Sigma");
      const ScalarField Om = field_or_zero(inst, "Omega");
      for (const auto& K : inst.killing) {
        ScalarField d1(K.components[0], inst.mode, inst.params, inst.chart);
        ScalarField d2(K.components[1], inst.mode, inst.params, inst.chart);
        if ((dsl::coordinate_mask(d1.expr) & ~1u) != 0 ||
            (dsl::coordinate_mask(d2.expr) & ~2u) != 0) {
          continue;  // vector not of the delta^A form
        }
        const auto r = master_lambda_residuals(d1, d2, Sg, Om, inst.lambda, pt);
        worst = std::max({worst, std::abs(r[0]), std::abs(r[1])});
      }
    } else {
      // null-vector case: K3 of the triple corresponds to eps = q p, the
      // proper homothety to eps = 0
      const ScalarField Ph = field_or_zero(inst, "Phi");
      const ScalarField Om = field_or_zero(inst, "Omega");
      Cplx chi0(0, 0);
      std::string eps_src = "0";
      if (inst.family_id == "pkE-N") {
        eps_src = "q*p";
      } else {
        for (const auto& K : inst.killing) chi0 = K.chi0;
      }
      ScalarField eps(eps_src, inst.mode, {}, inst.chart);
      const auto r = master_null_residuals(eps, chi0, Ph, Om, pt);
      worst = std::max({worst, std::abs(r[0]), std::abs(r[1])});
    }
  }
  run.residuals["master_residual"] = worst;
  run.passed = worst < 1e-10;
  if (!run.passed) run.failures.push_back("master-equation residual above tolerance");
}

void verify_type3(const MetricInstance& inst, int npoints, std::mt19937_64& rng,
                  VerificationRun& run) {
  if (inst.fields.find("N") == inst.fields.end()) {
    run.failures.push_back("type3 check applies to the self-dual N/P/Omega families only");
    run.passed = false;
    return;
  }
  const Cplx M0 = inst.params.count("M0") ? inst.params.at("M0") : Cplx(0, 0);
  const ScalarField N = inst.fields.at("N");
  const ScalarField P = inst.fields.at("P");
  const ScalarField Om = inst.fields.at("Omega");
  FieldFn nf = candidate_n_field(M0, N, P, Om);
  const FieldFn A = inst.plebanski->A;
  const FieldFn B = inst.plebanski->B;
  double worst_sys = 0, worst_cong = 0;
  for (int k = 0; k < npoints; ++k) {
    const Point4 pt = inst.sample(rng);
    const auto rs = type3_system_residual(M0, field_of(N), field_of(P), field_of(Om), pt);
    for (const auto& r : rs) worst_sys = std::max(worst_sys, std::abs(r));
    const SystemResidual sr = second_sd_residual(nf, A, B, pt);
    worst_cong = std::max({worst_cong, std::abs(sr.r1) / sr.scale, std::abs(sr.r2) / sr.scale});
  }
  run.residuals["type3_system_residual"] = worst_sys;
  run.residuals["second_congruence_residual"] = worst_cong;
  run.passed = worst_sys < 1e-10 && worst_cong < 1e-9;
  if (!run.passed) run.failures.push_back("six-equation system residual above tolerance");
}

}  // namespace

VerificationRun run_verification(const MetricInstance& inst, CheckKind kind, int npoints,
                                 uint64_t seed) {
  VerificationRun run;
  run.points_sampled = npoints;
  run.seed = seed;
  std::mt19937_64 rng(seed);
  switch (kind) {
    case CheckKind::Congruences:
      run.check = "congruences";
      verify_congruences(inst, npoints, rng, run);
      break;
    case CheckKind::Einstein:
      run.check = "einstein";
      verify_einstein(inst, npoints, rng, run);
      break;
    case CheckKind::Killing:
      run.check = "killing";
      verify_killing(inst, npoints, rng, run);
      break;
    case CheckKind::Master:
      run.check = "master";
      verify_master(inst, npoints, rng, run);
      break;
    case CheckKind::Type3:
      run.check = "type3";
      verify_type3(inst, npoints, rng, run);
      break;
  }
  return run;
}

std::string classification_json(const ClassificationRun& run, const std::string& input_digest) {
  json j;
  j["schemaVersion"] = kSchemaVersion;
  j["toolVersion"] = kToolVersion;
  j["inputDigest"] = input_digest;
  j["mode"] = mode_name(run.mode);
  j["family"] = run.family_id;
  j["seed"] = run.seed;
  j["pointsSampled"] = run.points_sampled;
  j["aggregate"] = {{"symbol", run.aggregate_symbol}, {"confidence", run.confidence}};
  j["flaggedPoints"] = run.flagged_points;
  json pts = json::array();
  for (const auto& r : run.points) {
    json p;
    p["point"] = point_to_json(r.point);
    p["sd"] = r.sd_label;
    p["asd"] = r.asd_label;
    p["symbol"] = r.symbol;
    json cup = json::array(), acup = json::array();
    for (const auto& c : r.cup) cup.push_back(json::array({c.real(), c.imag()}));
    for (const auto& c : r.asd_cup) acup.push_back(json::array({c.real(), c.imag()}));
    p["cup"] = std::move(cup);
    p["asdCup"] = std::move(acup);
    p["scalar"] = json::array({r.scalar.real(), r.scalar.imag()});
    p["maxCurvature"] = r.max_curvature;
    p["illConditioned"] = r.ill_conditioned;
    p["flags"] = r.flags;
    pts.push_back(std::move(p));
  }
  j["perPoint"] = std::move(pts);
  json checks;
  for (const auto& [k, v] : run.checks) checks[k] = v;
  j["checks"] = std::move(checks);
  return j.dump(2) + "\n";
}

std::string verification_json(const VerificationRun& run, const std::string& input_digest) {
  json j;
  j["schemaVersion"] = kSchemaVersion;
  j["toolVersion"] = kToolVersion;
  j["inputDigest"] = input_digest;
  j["check"] = run.check;
  j["seed"] = run.seed;
  j["pointsSampled"] = run.points_sampled;
  j["passed"] = run.passed;
  json res;
  for (const auto& [k, v] : run.residuals) res[k] = v;
  j["residuals"] = std::move(res);
  j["failures"] = run.failures;
  return j.dump(2) + "\n";
}

std::string classification_text(const ClassificationRun& run) {
  std::ostringstream out;
  out << "family: " << run.family_id << "  mode: " << mode_name(run.mode) << "\n";
  out << "points: " << run.points_sampled << "  seed: " << run.seed << "\n";
  out << "aggregate symbol: " << run.aggregate_symbol << "\n";
  out.precision(3);
  out << "confidence: " << run.confidence;
  if (run.flagged_points) out << "  (" << run.flagged_points << " flagged)";
  out << "\n";
  for (const auto& [k, v] : run.checks) out << "  " << k << " = " << v << "\n";
  return out.str();
}

std::string verification_text(const VerificationRun& run) {
  std::ostringstream out;
  out << "check: " << run.check << "  ->  " << (run.passed ? "PASS" : "FAIL") << "\n";
  out.precision(3);
  for (const auto& [k, v] : run.residuals) out << "  " << k << " = " << v << "\n";
  for (const auto& f : run.failures) out << "  ! " << f << "\n";
  return out.str();
}

ScanResult run_scan(const MetricInstance& inst, const std::string& grid_spec) {
  ScanResult scan;
  scan.base = {Cplx(0.1, 0), Cplx(0.1, 0), Cplx(0.1, 0), Cplx(0.1, 0)};
  auto coord_of = [&](const std::string& name) {
    for (int k = 0; k < 4; ++k) {
      if (inst.chart[k] == name) return k;
    }
    throw ParseError(ParseError::Kind::Syntax, "scan: unknown coordinate '" + name + "'", 0);
  };
  // "x=-1:1:21,y=-1:1:21;q=0.3,p=-0.2"
  std::string axes = grid_spec, fixed;
  if (const auto semi = grid_spec.find(';'); semi != std::string::npos) {
    axes = grid_spec.substr(0, semi);
    fixed = grid_spec.substr(semi + 1);
  }
  std::vector<ScanAxis> parsed;
  std::istringstream ax(axes);
  std::string item;
  while (std::getline(ax, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw ParseError(ParseError::Kind::Syntax, "scan: expected var=lo:hi:n", 0);
    }
    ScanAxis a;
    a.coord = coord_of(item.substr(0, eq));
    if (std::sscanf(item.c_str() + eq + 1, "%lf:%lf:%d", &a.lo, &a.hi, &a.count) != 3 ||
        a.count < 2) {
      throw ParseError(ParseError::Kind::Syntax, "scan: expected var=lo:hi:n", 0);
    }
    parsed.push_back(a);
  }
  if (parsed.size() != 2) {
    throw ParseError(ParseError::Kind::Syntax, "scan: exactly two axes required", 0);
  }
  scan.ax1 = parsed[0];
  scan.ax2 = parsed[1];
  if (!fixed.empty()) {
    std::istringstream fx(fixed);
    while (std::getline(fx, item, ',')) {
      const auto eq = item.find('=');
      if (eq == std::string::npos) {
        throw ParseError(ParseError::Kind::Syntax, "scan: expected var=value", 0);
      }
      scan.base[coord_of(item.substr(0, eq))] = Cplx(std::atof(item.c_str() + eq + 1), 0);
    }
  }

  const int n1 = scan.ax1.count, n2 = scan.ax2.count;
  scan.labels.assign(std::size_t(n1) * n2, "!");
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      Point4 pt = scan.base;
      pt[scan.ax1.coord] = Cplx(scan.ax1.lo + (scan.ax1.hi - scan.ax1.lo) * i / (n1 - 1), 0);
      pt[scan.ax2.coord] = Cplx(scan.ax2.lo + (scan.ax2.hi - scan.ax2.lo) * j / (n2 - 1), 0);
      try {
        const CurvatureData c = inst.curvature(pt);
        const double zero_floor = 1e-8 * (1.0 + c.max_abs());
        const bool real = inst.mode == Mode::Real;
        auto label_of = [&](const std::array<Cplx, 5>& cup) {
          double m = 0;
          for (const auto& z : cup) m = std::max(m, std::abs(z));
          if (m <= zero_floor) {
            return PetrovType{real ? PetrovLabel::O_r : PetrovLabel::O, {}};
          }
          return real ? petrov_real(cup) : petrov_complex(cup);
        };
        const PetrovType sd = label_of(c.cup());
        const PetrovType asd = label_of(c.asd_cup());
        scan.labels[std::size_t(i) * n2 + j] =
            "[" + petrov_name(sd.label) + "]x[" + petrov_name(asd.label) + "]";
      } catch (const EvalError&) {
      } catch (const IllConditioned&) {
        scan.labels[std::size_t(i) * n2 + j] = "?";
      } catch (const DegenerateMetric&) {
      }
    }
  }
  scan.boundary.assign(scan.labels.size(), false);
  for (int i = 0; i < n1; ++i) {
    for (int j = 0; j < n2; ++j) {
      const std::string& me = scan.labels[std::size_t(i) * n2 + j];
      auto differs = [&](int a, int b) {
        return a >= 0 && a < n1 && b >= 0 && b < n2 &&
               scan.labels[std::size_t(a) * n2 + b] != me;
      };
      if (differs(i - 1, j) || differs(i + 1, j) || differs(i, j - 1) || differs(i, j + 1)) {
        scan.boundary[std::size_t(i) * n2 + j] = true;
      }
    }
  }
  return scan;
}

std::string scan_json(const ScanResult& scan, const MetricInstance& inst,
                      const std::string& input_digest) {
  json j;
  j["schemaVersion"] = kSchemaVersion;
  j["toolVersion"] = kToolVersion;
  j["inputDigest"] = input_digest;
  j["family"] = inst.family_id;
  j["axis1"] = {{"coord", inst.chart[scan.ax1.coord]},
                {"lo", scan.ax1.lo},
                {"hi", scan.ax1.hi},
                {"count", scan.ax1.count}};
  j["axis2"] = {{"coord", inst.chart[scan.ax2.coord]},
                {"lo", scan.ax2.lo},
                {"hi", scan.ax2.hi},
                {"count", scan.ax2.count}};
  j["labels"] = scan.labels;
  j["boundary"] = scan.boundary;
  return j.dump(2) + "\n";
}

std::string scan_text(const ScanResult& scan, const MetricInstance& inst) {
  std::ostringstream out;
  out << "scan over " << inst.chart[scan.ax1.coord] << " (rows) and "
      << inst.chart[scan.ax2.coord] << " (cols); * marks type-change boundary cells\n";
  std::map<std::string, char> legend;
  char next = 'A';
  for (const auto& l : scan.labels) {
    if (!legend.count(l)) legend[l] = next++;
  }
  for (int i = 0; i < scan.ax1.count; ++i) {
    for (int j = 0; j < scan.ax2.count; ++j) {
      const std::size_t idx = std::size_t(i) * scan.ax2.count + j;
      out << legend[scan.labels[idx]] << (scan.boundary[idx] ? '*' : ' ');
    }
    out << "\n";
  }
  for (const auto& [label, ch] : legend) out << "  " << ch << " = " << label << "\n";
  return out.str();
}

}  // namespace nsl

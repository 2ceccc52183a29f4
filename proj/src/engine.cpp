// Copyright (c) 2026 the qtensor authors.
// Licensed under the Apache License, Version 2.0. You may obtain a copy
// of this license at http://www.apache.org/licenses/LICENSE-2.0.

#include "qtensor/engine.hpp"

#include <fstream>
#include <sstream>

namespace qtensor {
namespace {

Json point_to_json(const Point& p) {
  Json a = Json::array();
  for (const auto& z : p) a.push_back(Json::array({z.real(), z.imag()}));
  return a;
}

double get_num(const Json& cfg, const char* key, double dflt) {
  if (!cfg.contains(key)) return dflt;
  if (!cfg[key].is_number())
    throw UsageError(std::string("config field '") + key + "' must be a number");
  return cfg[key].get<double>();
}

int get_int(const Json& cfg, const char* key, int dflt) {
  return static_cast<int>(get_num(cfg, key, dflt));
}

std::uint64_t get_seed(const Json& cfg, const char* key, std::uint64_t dflt) {
  if (!cfg.contains(key)) return dflt;
  if (!cfg[key].is_number())
    throw UsageError(std::string("config field '") + key + "' must be a number");
  return cfg[key].get<std::uint64_t>();
}

std::string get_str(const Json& cfg, const char* key, const std::string& dflt) {
  if (!cfg.contains(key)) return dflt;
  if (!cfg[key].is_string())
    throw UsageError(std::string("config field '") + key + "' must be a string");
  return cfg[key].get<std::string>();
}

MetricModel model_from_config(const Json& cfg, const char* key = "model") {
  if (!cfg.contains(key))
    throw UsageError(std::string("config is missing the '") + key + "' spec");
  return catalog_get(cfg[key]);
}

Json tensor_entries(const Tensor4& t) {
  Json e = Json::array();
  const int n = t.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Complex v = t(i, j, k, l);
          if (std::abs(v) == 0.0) continue;
          e.push_back(Json::array(
              {Json::array({i, j, k, l}), v.real(), v.imag()}));
        }
  return e;
}

Json grid3_entries(const Grid3<Complex>& t) {
  Json e = Json::array();
  const int n = t.dim();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Complex v = t(i, j, k);
        if (std::abs(v) == 0.0) continue;
        e.push_back(Json::array({Json::array({i, j, k}), v.real(), v.imag()}));
      }
  return e;
}

OneOneFormModel default_rho(const MetricModel& model, std::uint64_t seed) {
  return rho_from_potential(
      Eigen::MatrixXcd::Identity(model.dim, model.dim),
      scalar_poly_random(model.dim, 3, derive_seed(seed, 0xB0C, 0), 0.05));
}

struct VerifyPlan {
  std::vector<std::string> ids;
};

VerifyPlan verify_plan(const std::string& identity, const MetricModel* model) {
  VerifyPlan plan;
  if (identity == "all") {
    plan.ids = {"proposition", "two_route", "q_symmetry", "commutation"};
    if (model) {
      if (model->potential) plan.ids.push_back("vaisman_norm");
      if (model->kahler) plan.ids.push_back("bochner");
    }
  } else {
    plan.ids = {identity};
  }
  return plan;
}

IdentityReport run_one_identity(const std::string& id, const Json& cfg,
                                const MetricModel& model,
                                const std::vector<Point>& pts, int order,
                                std::uint64_t seed, double tol_override) {
  auto tol = [&](double dflt) { return tol_override > 0 ? tol_override : dflt; };
  if (id == "proposition")
    return check_q_bismut_proposition(model, pts, order, tol(1e-9));
  if (id == "two_route") return check_two_route(model, pts, order, tol(1e-9));
  if (id == "q_symmetry")
    return check_q_symmetry(model, pts, order, tol(1e-9));
  if (id == "commutation")
    return check_commutation_identity(model, default_rho(model, seed), pts,
                                      std::max(order, 3), tol(1e-7));
  if (id == "vaisman_norm") return check_vaisman_norm(model, pts, tol(1e-12));
  if (id == "bochner") {
    if (!model.kahler)
      throw UsageError(
          "bochner check via the command interface needs a Kaehler model "
          "(rho is taken to be omega)");
    OneOneFormModel rho = rho_from_metric(model);
    IdentityReport rep;
    rep.id = "bochner";
    rep.model_spec = model.spec;
    rep.tolerance = tol(1e-8);
    for (const auto& p : pts) {
      BochnerReport b = bochner_residual(model, rho, p, order);
      ++rep.n_points;
      rep.accumulate(b.residual, p, {});
    }
    rep.finish();
    return rep;
  }
  if (id == "conformal") {
    MetricModel base = model_from_config(cfg, "base");
    if (!cfg.contains("f"))
      throw UsageError("conformal check needs an 'f' scalar spec");
    ScalarFieldModel f = scalar_from_json(base.dim, cfg["f"]);
    std::vector<Point> bpts =
        sample_points(base, static_cast<int>(pts.size()), seed);
    return check_conformal_lemma(base, f, bpts, order, tol_override > 0
                                                          ? tol_override
                                                          : 1e-9);
  }
  throw UsageError("unknown identity '" + id + "'");
}

void write_out_file(const Json& cfg, const std::string& body) {
  std::string path = get_str(cfg, "out", "");
  if (path.empty()) return;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open output file '" + path + "'");
  f << body;
  if (!f) throw UsageError("failed writing output file '" + path + "'");
}

std::string finalize(const Json& cfg, const Json& body, std::string csv) {
  std::string format = get_str(cfg, "format", "json");
  std::string text;
  if (format == "json")
    text = body.dump(2) + "\n";
  else if (format == "csv")
    text = std::move(csv);
  else
    throw UsageError("unknown format '" + format + "'");
  write_out_file(cfg, text);
  return text;
}

RunResult cmd_tensors(const Json& cfg) {
  MetricModel model = model_from_config(cfg);
  int order = get_int(cfg, "order", 4);
  if (order < 2)
    throw UsageError("tensor dumps need jet order >= 2");
  int count = get_int(cfg, "points", 10);
  std::uint64_t seed = get_seed(cfg, "seed", 1);
  std::vector<Point> pts = sample_points(model, count, seed);
  Json records = Json::array();
  std::ostringstream csv;
  csv << "point,role,i,j,k,l,re,im\n";
  for (int pi = 0; pi < static_cast<int>(pts.size()); ++pi) {
    PointTensors pt = compute_point_tensors(model, pts[pi], order);
    Json rec;
    rec["point"] = point_to_json(pts[pi]);
    rec["gamma"] = grid3_entries(pt.conn.gamma);
    rec["torsion"] = grid3_entries(pt.tor.low);
    rec["chern_r"] = tensor_entries(pt.chern_r);
    rec["q"] = tensor_entries(pt.q);
    rec["bismut_11"] = tensor_entries(pt.bismut_direct);
    rec["ddbar_omega"] = tensor_entries(pt.ddbar);
    records.push_back(rec);
    const int n = model.dim;
    for (const auto& [role, t] :
         std::initializer_list<std::pair<const char*, const Tensor4*>>{
             {"chern_r", &pt.chern_r},
             {"q", &pt.q},
             {"bismut_11", &pt.bismut_direct},
             {"ddbar_omega", &pt.ddbar}})
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              Complex v = (*t)(i, j, k, l);
              if (std::abs(v) == 0.0) continue;
              csv << pi << ',' << role << ',' << i << ',' << j << ',' << k
                  << ',' << l << ',' << v.real() << ',' << v.imag() << '\n';
            }
  }
  Json body;
  body["command"] = "tensors";
  body["model"] = model.spec;
  body["order"] = order;
  body["seed"] = seed;
  body["records"] = records;
  return {0, finalize(cfg, body, csv.str())};
}

RunResult cmd_verify(const Json& cfg) {
  std::string identity = get_str(cfg, "identity", "all");
  int order = get_int(cfg, "order", 4);
  if (order < 2) throw UsageError("verification needs jet order >= 2");
  int count = get_int(cfg, "points", 20);
  std::uint64_t seed = get_seed(cfg, "seed", 1);
  double tol_override = get_num(cfg, "tol", 0.0);

  std::optional<MetricModel> model;
  if (cfg.contains("model")) model = model_from_config(cfg);
  VerifyPlan plan = verify_plan(identity, model ? &*model : nullptr);

  std::vector<Point> pts;
  if (model) pts = sample_points(*model, count, seed);
  else if (identity != "conformal")
    throw UsageError("config is missing the 'model' spec");
  if (!model && identity == "conformal") pts.resize(count);

  Json reports = Json::array();
  bool pass = true;
  std::ostringstream csv;
  csv << "identity,model,n_points,max_residual,tolerance,pass\n";
  for (const auto& id : plan.ids) {
    IdentityReport rep =
        model ? run_one_identity(id, cfg, *model, pts, order, seed,
                                 tol_override)
              : run_one_identity(id, cfg, MetricModel{}, pts, order, seed,
                                 tol_override);
    reports.push_back(rep.to_json());
    pass = pass && rep.pass;
    csv << rep.id << ',' << rep.model_spec.value("name", "") << ','
        << rep.n_points << ',' << rep.max_residual << ',' << rep.tolerance
        << ',' << (rep.pass ? 1 : 0) << '\n';
  }
  Json body;
  body["command"] = "verify";
  body["pass"] = pass;
  body["reports"] = reports;
  return {pass ? 0 : 1, finalize(cfg, body, csv.str())};
}

Json resolved_qcheck_config(const Json& cfg, const MetricModel& model,
                            const CertifyOptions& opts,
                            const std::string& mode) {
  Json r;
  r["command"] = "qcheck";
  r["model"] = model.spec;
  r["points"] = opts.n_points;
  r["frames"] = opts.n_frames;
  r["seed"] = opts.seed;
  r["order"] = opts.order;
  r["tol"] = opts.tol;
  r["mode"] = mode;
  (void)cfg;
  return r;
}

RunResult cmd_qcheck(const Json& cfg) {
  MetricModel model = model_from_config(cfg);
  CertifyOptions opts;
  opts.n_points = get_int(cfg, "points", 100);
  opts.n_frames = get_int(cfg, "frames", 1000);
  opts.seed = get_seed(cfg, "seed", 1);
  opts.order = get_int(cfg, "order", 4);
  opts.tol = get_num(cfg, "tol", 1e-8);
  std::string mode = get_str(cfg, "mode", "q");
  PositivityCertificate cert;
  if (mode == "q")
    cert = q_nonneg_certify(model, opts);
  else if (mode == "qob")
    cert = qob_check_kahler(model, opts);
  else
    throw UsageError("qcheck mode must be 'q' or 'qob'");
  Json body = cert.to_json();
  body["command"] = "qcheck";
  body["config"] = resolved_qcheck_config(cfg, model, opts, mode);
  if (cert.violation) {
    std::string rpath = get_str(cfg, "replay_out", "");
    if (!rpath.empty()) {
      Json replay = Json::array({resolved_qcheck_config(cfg, model, opts, mode)});
      std::ofstream f(rpath, std::ios::binary);
      if (!f) throw UsageError("cannot open replay file '" + rpath + "'");
      f << replay.dump(2) << "\n";
    }
  }
  std::ostringstream csv;
  csv << "key,value\nmode," << cert.mode << "\nmin_eigenvalue,"
      << cert.min_eigenvalue << "\nviolation," << (cert.violation ? 1 : 0)
      << "\n";
  return {cert.violation ? 1 : 0, finalize(cfg, body, csv.str())};
}

RunResult cmd_fuzz(const Json& cfg) {
  std::string identity = get_str(cfg, "identity", "proposition");
  int cases = get_int(cfg, "cases", 100);
  int dim = get_int(cfg, "dim", 2);
  int count = get_int(cfg, "points", 5);
  int order = get_int(cfg, "order", 4);
  if (order < 2) throw UsageError("fuzzing needs jet order >= 2");
  std::uint64_t seed = get_seed(cfg, "seed", 1);
  double tol_override = get_num(cfg, "tol", 0.0);

  Json results = Json::array();
  Json replay = Json::array();
  double worst = 0.0;
  int failures = 0;
  std::ostringstream csv;
  csv << "case,identity,max_residual,pass\n";
  for (int c = 0; c < cases; ++c) {
    std::uint64_t cseed = derive_seed(seed, 0xF022, static_cast<std::uint64_t>(c));
    Json mspec;
    mspec["name"] = "polynomial_random";
    mspec["dim"] = dim;
    mspec["seed"] = cseed;
    MetricModel model = catalog_get(mspec);
    std::uint64_t pseed = derive_seed(cseed, 0xA, 0);
    std::vector<Point> pts = sample_points(model, count, pseed);
    IdentityReport rep = run_one_identity(identity, cfg, model, pts, order,
                                          cseed, tol_override);
    worst = std::max(worst, rep.max_residual);
    csv << c << ',' << rep.id << ',' << rep.max_residual << ','
        << (rep.pass ? 1 : 0) << '\n';
    if (!rep.pass) {
      ++failures;
      Json cc;
      cc["command"] = "verify";
      cc["identity"] = identity;
      cc["model"] = mspec;
      cc["points"] = count;
      cc["order"] = order;
      cc["seed"] = pseed;
      if (tol_override > 0) cc["tol"] = tol_override;
      replay.push_back(cc);
      Json fail;
      fail["case"] = c;
      fail["config"] = cc;
      fail["report"] = rep.to_json();
      results.push_back(fail);
    }
  }
  std::string rpath = get_str(cfg, "replay_out", "");
  if (!rpath.empty()) {
    std::ofstream f(rpath, std::ios::binary);
    if (!f) throw UsageError("cannot open replay file '" + rpath + "'");
    f << replay.dump(2) << "\n";
  }
  Json body;
  body["command"] = "fuzz";
  body["identity"] = identity;
  body["cases"] = cases;
  body["failures"] = failures;
  body["max_residual"] = worst;
  body["failed_cases"] = results;
  return {failures > 0 ? 1 : 0, finalize(cfg, body, csv.str())};
}

RunResult cmd_replay(const Json& cfg) {
  std::string path = get_str(cfg, "replay", "");
  std::ifstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open replay file '" + path + "'");
  Json entries;
  try {
    f >> entries;
  } catch (const Json::exception& e) {
    throw UsageError(std::string("replay file is not valid JSON: ") + e.what());
  }
  if (!entries.is_array())
    throw UsageError("replay file must hold a JSON array of configs");
  Json body;
  body["command"] = "replay";
  Json runs = Json::array();
  int worst_exit = 0;
  for (const auto& entry : entries) {
    RunResult r = run_config(entry);
    Json one;
    one["config"] = entry;
    one["exit_code"] = r.exit_code;
    one["body"] = Json::parse(r.output, nullptr, false);
    runs.push_back(one);
    worst_exit = std::max(worst_exit, r.exit_code);
  }
  body["runs"] = runs;
  std::string text = body.dump(2) + "\n";
  write_out_file(cfg, text);
  return {worst_exit, text};
}

}  // namespace

RunResult run_config(const Json& cfg) {
  try {
    if (!cfg.is_object()) throw UsageError("config must be a JSON object");
    if (cfg.contains("replay")) return cmd_replay(cfg);
    std::string command = get_str(cfg, "command", "");
    if (command == "tensors") return cmd_tensors(cfg);
    if (command == "verify") return cmd_verify(cfg);
    if (command == "qcheck") return cmd_qcheck(cfg);
    if (command == "fuzz") return cmd_fuzz(cfg);
    throw UsageError("unknown command '" + command +
                     "' (expected tensors|verify|qcheck|fuzz)");
  } catch (const UsageError& e) {
    Json err;
    err["error"] = e.what();
    err["kind"] = "usage";
    return {2, err.dump(2) + "\n"};
  } catch (const std::exception& e) {
    Json err;
    err["error"] = e.what();
    err["kind"] = "runtime";
    return {2, err.dump(2) + "\n"};
  }
}

RunResult run_config_text(const std::string& config_text) {
  Json cfg = Json::parse(config_text, nullptr, false);
  if (cfg.is_discarded()) {
    Json err;
    err["error"] = "config is not valid JSON";
    err["kind"] = "usage";
    return {2, err.dump(2) + "\n"};
  }
  return run_config(cfg);
}

}  // namespace qtensor

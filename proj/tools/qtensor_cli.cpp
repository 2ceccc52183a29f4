// Copyright (c) 2026 the qtensor authors.
// Licensed under the Apache License, Version 2.0. You may obtain a copy
// of this license at http://www.apache.org/licenses/LICENSE-2.0.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "qtensor/qtensor.h"

namespace {

using Json = nlohmann::json;

struct CommonOpts {
  std::string model;
  int dim = 0;
  std::string params;
  int points = 0;
  std::uint64_t seed = 0;
  int frames = 0;
  int order = 0;
  double tol = 0.0;
  std::string out;
  std::string format;
  std::string identity;
  std::string base;
  std::string f;
  std::string mode;
  int cases = 0;
  std::string replay;
  std::string replay_out;
  std::string config_file;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--model", o.model, "model name (flat, fubini_study, hopf, ...)");
  cmd->add_option("--dim", o.dim, "complex dimension (1-4)");
  cmd->add_option("--params", o.params, "extra model parameters, JSON object");
  cmd->add_option("--points", o.points, "number of sample points");
  cmd->add_option("--seed", o.seed, "master seed (default: QTENSOR_SEED or 1)");
  cmd->add_option("--frames", o.frames, "random frames per point");
  cmd->add_option("--order", o.order, "jet truncation order");
  cmd->add_option("--tol", o.tol, "tolerance override");
  cmd->add_option("--out", o.out, "also write the report body to this file");
  cmd->add_option("--format", o.format, "output format: json or csv");
  cmd->add_option("--identity", o.identity, "identity name or 'all'");
  cmd->add_option("--base", o.base, "base model name (conformal check)");
  cmd->add_option("--f", o.f, "conformal factor, named scalar field");
  cmd->add_option("--mode", o.mode, "qcheck mode: q or qob");
  cmd->add_option("--cases", o.cases, "fuzz case count");
  cmd->add_option("--replay", o.replay, "replay file to reproduce");
  cmd->add_option("--replay-out", o.replay_out, "write failing cases here");
  cmd->add_option("--config", o.config_file, "JSON config file (flags win)");
}

// flags > config file > environment/defaults
int build_config(const CLI::App* cmd, const CommonOpts& o, Json& cfg) {
  cfg = Json::object();
  if (!o.config_file.empty()) {
    std::ifstream f(o.config_file, std::ios::binary);
    if (!f) {
      std::fprintf(stderr, "error: cannot open config file '%s'\n",
                   o.config_file.c_str());
      return 2;
    }
    cfg = Json::parse(f, nullptr, false);
    if (!cfg.is_object()) {
      std::fprintf(stderr, "error: config file is not a JSON object\n");
      return 2;
    }
  }
  cfg["command"] = cmd->get_name();
  auto given = [cmd](const char* name) {
    return cmd->count(name) > 0;
  };
  if (given("--model") || !cfg.contains("model")) {
    if (!o.model.empty() || given("--model")) cfg["model"] = Json::object();
  }
  if (given("--model")) cfg["model"]["name"] = o.model;
  if (given("--dim")) {
    if (cfg.contains("model")) cfg["model"]["dim"] = o.dim;
    cfg["dim"] = o.dim;
  }
  if (given("--params")) {
    Json p = Json::parse(o.params, nullptr, false);
    if (!p.is_object()) {
      std::fprintf(stderr, "error: --params must be a JSON object\n");
      return 2;
    }
    cfg["model"]["params"] = p;
  }
  if (given("--seed")) {
    cfg["seed"] = o.seed;
    if (cfg.contains("model") && !cfg["model"].contains("seed"))
      cfg["model"]["seed"] = o.seed;
  } else if (!cfg.contains("seed")) {
    if (const char* env = std::getenv("QTENSOR_SEED")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end && *end == '\0') {
        cfg["seed"] = static_cast<std::uint64_t>(v);
        if (cfg.contains("model") && !cfg["model"].contains("seed"))
          cfg["model"]["seed"] = static_cast<std::uint64_t>(v);
      } else {
        std::fprintf(stderr, "error: QTENSOR_SEED is not an integer\n");
        return 2;
      }
    }
  }
  if (given("--points")) cfg["points"] = o.points;
  if (given("--frames")) cfg["frames"] = o.frames;
  if (given("--order")) cfg["order"] = o.order;
  if (given("--tol")) cfg["tol"] = o.tol;
  if (given("--out")) cfg["out"] = o.out;
  if (given("--format")) cfg["format"] = o.format;
  if (given("--identity")) cfg["identity"] = o.identity;
  if (given("--base")) {
    cfg["base"] = Json::object();
    cfg["base"]["name"] = o.base;
    if (given("--dim")) cfg["base"]["dim"] = o.dim;
  }
  if (given("--f")) {
    cfg["f"] = Json::object();
    cfg["f"]["name"] = o.f;
  }
  if (given("--mode")) cfg["mode"] = o.mode;
  if (given("--cases")) cfg["cases"] = o.cases;
  if (given("--replay")) cfg["replay"] = o.replay;
  if (given("--replay-out")) cfg["replay_out"] = o.replay_out;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"curvature tensor verification engine"};
  app.require_subcommand(1);
  CommonOpts o;
  CLI::App* tensors = app.add_subcommand("tensors", "dump tensors at sample points");
  CLI::App* verify = app.add_subcommand("verify", "run identity checks");
  CLI::App* qcheck = app.add_subcommand("qcheck", "certify Q-nonnegativity");
  CLI::App* fuzz = app.add_subcommand("fuzz", "fuzz identities on random metrics");
  for (CLI::App* c : {tensors, verify, qcheck, fuzz}) add_common(c, o);
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }
  const CLI::App* cmd = app.get_subcommands().front();
  Json cfg;
  if (int rc = build_config(cmd, o, cfg)) return rc;

  qt_session* s = qt_session_new();
  if (!s) {
    std::fprintf(stderr, "error: out of memory\n");
    return 2;
  }
  int rc = qt_run_json(s, cfg.dump().c_str());
  std::fputs(qt_session_result(s), stdout);
  if (rc != 0) std::fprintf(stderr, "error: %s\n", qt_session_error(s));
  qt_session_free(s);
  return rc;
}

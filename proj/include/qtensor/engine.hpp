// Copyright (c) 2026 the qtensor authors.
// Licensed under the Apache License, Version 2.0. You may obtain a copy
// of this license at http://www.apache.org/licenses/LICENSE-2.0.

#ifndef QTENSOR_ENGINE_HPP
#define QTENSOR_ENGINE_HPP

#include "qtensor/identities.hpp"

namespace qtensor {

// Exit code contract: 0 pass, 1 mathematical failure or violation,
// 2 usage/config error.
struct RunResult {
  int exit_code = 0;
  std::string output;  // report body (JSON or CSV); byte-stable per config
};

// Run one command from a JSON config:
// {
//   "command":  "tensors" | "verify" | "qcheck" | "fuzz",
//   "model":    {"name", "dim", "params", "seed"},
//   "points":   <count>,
//   "order":    <jet order, default 4>,
//   "seed":     <master seed, default 1>,
//   "frames":   <qcheck frame count, default 1000>,
//   "tol":      <override tolerance>,
//   "identity": "all" | "proposition" | "two_route" | "conformal" |
//               "q_symmetry" | "commutation" | "vaisman_norm" | "bochner",
//   "base":     <model spec, conformal base>,
//   "f":        <scalar spec, conformal factor>,
//   "mode":     "q" | "qob"        (qcheck),
//   "cases":    <fuzz case count>,
//   "dim":      <fuzz model dimension, default 2>,
//   "replay":   <path of a replay file to reproduce>,
//   "replay_out": <path to write failing fuzz/qcheck cases to>,
//   "out":      <path to also write the report body to>,
//   "format":   "json" | "csv"
// }
// Config errors are reported in-band: exit_code 2 and output {"error": ...}.
RunResult run_config(const Json& config);

RunResult run_config_text(const std::string& config_text);

}  // namespace qtensor

#endif

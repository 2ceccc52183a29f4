// Copyright (c) 2026 the qtensor authors.
// Licensed under the Apache License, Version 2.0. You may obtain a copy
// of this license at http://www.apache.org/licenses/LICENSE-2.0.

#include "qtensor/qtensor.h"

#include <string>

#include "qtensor/engine.hpp"

struct qt_session {
  std::string result;
  std::string error;
};

extern "C" {

qt_session* qt_session_new(void) { return new (std::nothrow) qt_session; }

void qt_session_free(qt_session* s) { delete s; }

int qt_run_json(qt_session* s, const char* config_json) {
  if (!s) return 2;
  s->result.clear();
  s->error.clear();
  if (!config_json) {
    s->error = "config is null";
    return 2;
  }
  try {
    qtensor::RunResult r = qtensor::run_config_text(config_json);
    s->result = r.output;
    if (r.exit_code != 0) {
      // surface the in-band error message, if the body carries one
      qtensor::Json body = qtensor::Json::parse(r.output, nullptr, false);
      if (body.is_object() && body.contains("error"))
        s->error = body["error"].get<std::string>();
      else
        s->error = r.exit_code == 1 ? "verification failed" : "usage error";
    }
    return r.exit_code;
  } catch (const std::exception& e) {
    s->error = e.what();
    return 2;
  } catch (...) {
    s->error = "unknown error";
    return 2;
  }
}

const char* qt_session_result(const qt_session* s) {
  return s ? s->result.c_str() : "";
}

const char* qt_session_error(const qt_session* s) {
  return s ? s->error.c_str() : "";
}

}  // extern "C"

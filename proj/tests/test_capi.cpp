// Copyright (c) 2026 the qtensor authors.
// Licensed under the Apache License, Version 2.0. You may obtain a copy
// of this license at http://www.apache.org/licenses/LICENSE-2.0.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstring>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "qtensor/qtensor.h"

using Json = nlohmann::json;

TEST_CASE("session lifecycle and null handling") {
  qt_session_free(nullptr);  // must be a no-op
  qt_session* s = qt_session_new();
  REQUIRE(s != nullptr);
  CHECK(qt_run_json(nullptr, "{}") == 2);
  CHECK(qt_run_json(s, nullptr) == 2);
  qt_session_free(s);
}

TEST_CASE("a passing verify run returns 0 with a JSON body") {
  qt_session* s = qt_session_new();
  Json cfg;
  cfg["command"] = "verify";
  cfg["model"] = {{"name", "hopf"}, {"dim", 2}};
  cfg["points"] = 3;
  cfg["seed"] = 5;
  cfg["identity"] = "proposition";
  int rc = qt_run_json(s, cfg.dump().c_str());
  CHECK(rc == 0);
  CHECK(std::strlen(qt_session_error(s)) == 0);
  Json body = Json::parse(qt_session_result(s));
  CHECK(body.at("command") == "verify");
  qt_session_free(s);
}

TEST_CASE("bad configs return 2 and carry an error message") {
  qt_session* s = qt_session_new();
  CHECK(qt_run_json(s, "this is not json") == 2);
  CHECK(std::strlen(qt_session_error(s)) > 0);

  Json cfg;
  cfg["command"] = "verify";
  cfg["model"] = {{"name", "no_such_model"}, {"dim", 2}};
  CHECK(qt_run_json(s, cfg.dump().c_str()) == 2);
  Json body = Json::parse(qt_session_result(s));
  CHECK(body.at("kind") == "usage");
  CHECK(std::string(qt_session_error(s)).find("no_such_model") !=
        std::string::npos);
  qt_session_free(s);
}

TEST_CASE("a positivity violation returns 1 and keeps the report") {
  qt_session* s = qt_session_new();
  Json cfg;
  cfg["command"] = "qcheck";
  cfg["model"] = {{"name", "poincare"}, {"dim", 2}};
  cfg["points"] = 5;
  cfg["frames"] = 20;
  cfg["seed"] = 2;
  CHECK(qt_run_json(s, cfg.dump().c_str()) == 1);
  Json body = Json::parse(qt_session_result(s));
  CHECK(body.at("verdict") == "violation");
  // the session owns the buffer until the next run
  std::string first = qt_session_result(s);
  cfg["model"] = {{"name", "flat"}, {"dim", 2}};
  CHECK(qt_run_json(s, cfg.dump().c_str()) == 0);
  CHECK(std::string(qt_session_result(s)) != first);
  qt_session_free(s);
}

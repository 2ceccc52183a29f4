/* Copyright (c) 2026 the qtensor authors.
 * Licensed under the Apache License, Version 2.0. You may obtain a copy
 * of this license at http://www.apache.org/licenses/LICENSE-2.0.
 *
 * C interface of the curvature verification engine. A session runs JSON
 * command configs (see the schema notes in the project README) and keeps
 * the last report body and error message until the next run or free.
 */

#ifndef QTENSOR_QTENSOR_H
#define QTENSOR_QTENSOR_H

#ifdef __cplusplus
extern "C" {
#endif

typedef struct qt_session qt_session;

/* Create / destroy a session. qt_session_free(NULL) is a no-op. */
qt_session* qt_session_new(void);
void qt_session_free(qt_session* s);

/* Run one JSON config. Returns the command's exit status:
 *   0  pass
 *   1  mathematical failure / positivity violation
 *   2  usage or config error (including invalid JSON)
 * A null session or config returns 2. */
int qt_run_json(qt_session* s, const char* config_json);

/* Report body of the last run (JSON or CSV text, NUL-terminated). Owned by
 * the session; valid until the next qt_run_json or qt_session_free. Never
 * NULL after a run. */
const char* qt_session_result(const qt_session* s);

/* Error message of the last run, or an empty string if it passed. */
const char* qt_session_error(const qt_session* s);

#ifdef __cplusplus
}
#endif

#endif

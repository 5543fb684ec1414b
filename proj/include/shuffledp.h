/* Copyright 2026 The shuffledp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface to the shuffle-model workbench. One call runs one experiment:
 * the caller hands over a JSON configuration string and receives a JSON
 * report (plus a CSV table for audit sweeps). Reports are byte-identical
 * across runs and platforms for a fixed (config, seed, library version).
 *
 * Every returned string is heap-allocated by the library and must be
 * released with sdp_free_string. The library keeps no state between calls;
 * concurrent calls from different threads are safe.
 */

#ifndef SHUFFLEDP_H_
#define SHUFFLEDP_H_

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes returned by sdp_execute. Nonzero codes match the CLI's
 * process exit codes. */
#define SDP_OK 0           /* report produced */
#define SDP_ERR_CONFIG 2   /* configuration rejected */
#define SDP_ERR_BUDGET 3   /* enumeration would exceed its leaf budget */
#define SDP_ERR_INTERNAL 4 /* invariant violation inside the library */

/* Runs the experiment described by config_json.
 *
 * On success (*report_json) receives the JSON report and, when the config
 * requested CSV output, (*csv_out) receives the CSV table; otherwise
 * (*csv_out) stays NULL. On failure (*error_out) receives a one-line
 * description and the other outputs stay NULL. Output pointers may be NULL
 * when the caller does not want that piece.
 */
int sdp_execute(const char* config_json, char** report_json, char** csv_out,
                char** error_out);

/* Parses and re-serializes a config, applying defaults and validation.
 * Useful for canonicalizing hand-written configs. Same contract as
 * sdp_execute for ownership and status codes. */
int sdp_canonical_config(const char* config_json, char** canonical_out,
                         char** error_out);

/* Releases a string returned by this library. NULL is a no-op. */
void sdp_free_string(char* s);

/* Static "name version" string; never freed by the caller. */
const char* sdp_version(void);

#ifdef __cplusplus
}
#endif

#endif /* SHUFFLEDP_H_ */

#ifndef WEYLKIT_H
#define WEYLKIT_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define WK_API __declspec(dllexport)
#else
#define WK_API __attribute__((visibility("default")))
#endif

typedef struct wk_problem wk_problem;

typedef enum wk_status {
    WK_OK = 0,
    WK_ERR_PARSE = 1,
    WK_ERR_DOMAIN = 2,
    WK_ERR_DIVERGENT = 3,
    WK_ERR_NUMERIC = 4,
    WK_ERR_CLASSIFICATION = 5,
    WK_ERR_UNSUPPORTED = 6,
    WK_ERR_ARGUMENT = 7, /* null pointer or bad call sequence */
    WK_ERR_INTERNAL = 8
} wk_status;

/* Verdict classes written by wk_run. */
enum { WK_VERDICT_POSITIVE = 0, WK_VERDICT_NEGATIVE = 1, WK_VERDICT_INCONCLUSIVE = 2 };

WK_API const char* wk_version(void);
WK_API const char* wk_status_string(wk_status s);
/* Message of the last failure on this thread; empty after a success. */
WK_API const char* wk_last_error(void);

WK_API wk_status wk_problem_from_json(const char* json, wk_problem** out);
WK_API wk_status wk_problem_from_catalog(const char* name, wk_problem** out);
WK_API wk_status wk_problem_to_json(const wk_problem* p, char** out);
WK_API void wk_problem_free(wk_problem* p);

/* JSON array of catalog names. */
WK_API wk_status wk_catalog_names(char** out);
/* JSON array of the commands wk_run accepts ("mfun eval", "help check", ...). */
WK_API wk_status wk_command_names(char** out);

WK_API wk_status wk_m_eval(const wk_problem* p, double re, double im, double* m_re, double* m_im, double* enclosure);

/*
 * Runs one analysis. options_json may be NULL. On success *report_json holds the report and *verdict
 * its class. On failure *report_json (when not NULL) holds {"error": {"kind", "message"}}.
 */
WK_API wk_status wk_run(const char* command, const wk_problem* p, const char* options_json, char** report_json,
                        int* verdict);

/* CSV of a report's evidence table. */
WK_API wk_status wk_report_csv(const char* report_json, char** out);

WK_API void wk_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif

#include "weylkit.h"

#include "report.hpp"

#include <cstdlib>
#include <cstring>
#include <string>

struct wk_problem {
    wk::Problem p;
};

namespace {

thread_local std::string g_last_error;

wk_status status_of(wk::ErrorKind k) {
    switch (k) {
    case wk::ErrorKind::Parse: return WK_ERR_PARSE;
    case wk::ErrorKind::Domain: return WK_ERR_DOMAIN;
    case wk::ErrorKind::Divergent: return WK_ERR_DIVERGENT;
    case wk::ErrorKind::Numeric: return WK_ERR_NUMERIC;
    case wk::ErrorKind::Classification: return WK_ERR_CLASSIFICATION;
    case wk::ErrorKind::Unsupported: return WK_ERR_UNSUPPORTED;
    }
    return WK_ERR_INTERNAL;
}

char* dup(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

const char* kind_name(wk_status s) {
    switch (s) {
    case WK_ERR_PARSE: return "parse";
    case WK_ERR_DOMAIN: return "domain";
    case WK_ERR_DIVERGENT: return "divergent";
    case WK_ERR_NUMERIC: return "numeric";
    case WK_ERR_CLASSIFICATION: return "classification";
    case WK_ERR_UNSUPPORTED: return "unsupported";
    case WK_ERR_ARGUMENT: return "argument";
    default: return "internal";
    }
}

// Runs f, mapping exceptions to status codes and the thread-local message.
template <class F>
wk_status guarded(F&& f) {
    try {
        f();
        g_last_error.clear();
        return WK_OK;
    } catch (const wk::Error& e) {
        g_last_error = e.what();
        return status_of(e.kind());
    } catch (const nlohmann::json::exception& e) {
        g_last_error = std::string("malformed JSON: ") + e.what();
        return WK_ERR_PARSE;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return WK_ERR_INTERNAL;
    }
}

wk_status argument_error(const char* what) {
    g_last_error = what;
    return WK_ERR_ARGUMENT;
}

} // namespace

extern "C" {

const char* wk_version(void) { return wk::kToolVersion; }

const char* wk_status_string(wk_status s) {
    switch (s) {
    case WK_OK: return "ok";
    case WK_ERR_PARSE: return "parse error";
    case WK_ERR_DOMAIN: return "argument outside the domain";
    case WK_ERR_DIVERGENT: return "divergent integral";
    case WK_ERR_NUMERIC: return "numeric failure";
    case WK_ERR_CLASSIFICATION: return "classification undecided";
    case WK_ERR_UNSUPPORTED: return "unsupported input";
    case WK_ERR_ARGUMENT: return "invalid argument";
    case WK_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* wk_last_error(void) { return g_last_error.c_str(); }

wk_status wk_problem_from_json(const char* json, wk_problem** out) {
    if (!json || !out) return argument_error("null argument");
    *out = nullptr;
    return guarded([&] {
        auto h = new wk_problem{wk::Problem::from_json(nlohmann::json::parse(json))};
        *out = h;
    });
}

wk_status wk_problem_from_catalog(const char* name, wk_problem** out) {
    if (!name || !out) return argument_error("null argument");
    *out = nullptr;
    return guarded([&] { *out = new wk_problem{wk::catalog(name)}; });
}

wk_status wk_problem_to_json(const wk_problem* p, char** out) {
    if (!p || !out) return argument_error("null argument");
    return guarded([&] { *out = dup(p->p.to_json().dump(2)); });
}

void wk_problem_free(wk_problem* p) { delete p; }

wk_status wk_catalog_names(char** out) {
    if (!out) return argument_error("null argument");
    return guarded([&] { *out = dup(nlohmann::json(wk::catalog_names()).dump()); });
}

wk_status wk_command_names(char** out) {
    if (!out) return argument_error("null argument");
    return guarded([&] { *out = dup(nlohmann::json(wk::command_names()).dump()); });
}

wk_status wk_m_eval(const wk_problem* p, double re, double im, double* m_re, double* m_im, double* enclosure) {
    if (!p || !m_re || !m_im) return argument_error("null argument");
    return guarded([&] {
        const wk::MSample s = wk::m_eval(p->p, wk::cplx(re, im));
        *m_re = s.m.real();
        *m_im = s.m.imag();
        if (enclosure) *enclosure = s.enclosure;
    });
}

wk_status wk_run(const char* command, const wk_problem* p, const char* options_json, char** report_json,
                 int* verdict) {
    if (report_json) *report_json = nullptr;
    if (!command || !p || !report_json) return argument_error("null argument");
    std::string text;
    const wk_status st = guarded([&] {
        const nlohmann::json opts = options_json && *options_json ? nlohmann::json::parse(options_json)
                                                                  : nlohmann::json::object();
        const wk::Report r = wk::run_command(command, p->p, opts);
        text = r.body.dump(2);
        if (verdict) *verdict = static_cast<int>(r.verdict);
    });
    if (st != WK_OK)
        text = nlohmann::json{{"error", {{"kind", kind_name(st)}, {"message", g_last_error}}}}.dump(2);
    *report_json = dup(text);
    return st;
}

wk_status wk_report_csv(const char* report_json, char** out) {
    if (!report_json || !out) return argument_error("null argument");
    return guarded([&] { *out = dup(wk::table_csv(nlohmann::json::parse(report_json))); });
}

void wk_string_free(char* s) { std::free(s); }

} // extern "C"

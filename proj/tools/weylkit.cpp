#include "weylkit.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

enum class Kind { Number, Integer, Text, Flag, TextList };

struct FlagSpec {
    const char* flag;
    const char* key;
    Kind kind;
    const char* help;
};

// Tolerance and grid overrides shared by every analysis.
const std::vector<FlagSpec> kCommon = {
    {"--ode-rtol", "ode_rtol", Kind::Number, "ODE relative tolerance"},
    {"--ode-atol", "ode_atol", Kind::Number, "ODE absolute tolerance"},
    {"--disk-rtol", "disk_rtol", Kind::Number, "Weyl disk radius target, relative"},
    {"--x-cap", "x_cap", Kind::Number, "truncation cap toward infinity"},
    {"--y-lo", "y_lo", Kind::Number, "inner end of the y -> 0 ratio window"},
    {"--y-hi", "y_hi", Kind::Number, "outer end of the y -> infinity ratio window"},
    {"--ratio-per-decade", "ratio_per_decade", Kind::Integer, "ratio samples per decade"},
    {"--variation-per-decade", "variation_per_decade", Kind::Integer, "regvar samples per decade"},
    {"--c0-rtol", "c0_rtol", Kind::Number, "tolerance of the zero-energy solution"},
    {"--c0-per-decade", "c0_per_decade", Kind::Integer, "zero-energy grid points per decade"},
    {"--rho-lo", "rho_lo", Kind::Number, "Everitt scan, smallest |lambda|"},
    {"--rho-hi", "rho_hi", Kind::Number, "Everitt scan, largest |lambda|"},
    {"--rho-per-decade", "rho_per_decade", Kind::Integer, "Everitt scan rays per decade"},
    {"--theta-tol", "theta_tol", Kind::Number, "Everitt bisection tolerance"},
    {"--seed", "seed", Kind::Integer, "seed for randomized grids"},
};

const std::vector<FlagSpec> kIndefinite = {
    {"--c,--coupling", "coupling", Kind::Number, "coupling c of A_c"},
};

struct Command {
    const char* group;
    const char* name;
    const char* help;
    std::vector<FlagSpec> flags;
    bool indefinite = false;
};

const std::vector<Command> kCommands = {
    {"mfun", "eval", "m(lambda) with its enclosure", {{"--lambda", "lambda", Kind::TextList, "spectral parameter a+bi"}}},
    {"mfun",
     "table",
     "m along an axis (CSV: y, re_m, im_m, enclosure)",
     {{"--axis", "axis", Kind::Text, "imag or negative-real"},
      {"--from", "from", Kind::Number, "first |lambda|"},
      {"--to", "to", Kind::Number, "last |lambda|"},
      {"--per-decade", "per_decade", Kind::Integer, "points per decade"}}},
    {"regvar",
     "classify",
     "regular/slow/rapid variation and positive increase",
     {{"--map", "map", Kind::Text, "W, R, WoR^-1 or RoW^-1"}, {"--end", "end", Kind::Text, "zero or infinity"}}},
    {"asym", "model", "one-term asymptotic model of m", {{"--end", "end", Kind::Text, "zero or infinity"},
                                                         {"--rho", "rho", Kind::Number, "evaluation point"}}},
    {"asym",
     "verify",
     "numeric m against the one-term model",
     {{"--end", "end", Kind::Text, "zero or infinity"},
      {"--per-decade", "per_decade", Kind::Integer, "points per decade"},
      {"--decades", "decades", Kind::Integer, "decades toward the end"}}},
    {"asym", "ratio", "Re m/Im m or Im m/Re m along the imaginary axis",
     {{"--end", "end", Kind::Text, "zero or infinity"}, {"--which", "which", Kind::Text, "re/im or im/re"}}},
    {"help",
     "check",
     "HELP inequality validity",
     {{"--everitt", "everitt", Kind::Flag, "add the sector scan"},
      {"--seq", "seq", Kind::Text, "test-function sequence: factorial"},
      {"--n", "n", Kind::Integer, "number of sequence terms"}}},
    {"help", "everitt", "best constant from the sector scan (CSV: theta, rho, arg, im_lambda2_m)", {}},
    {"help", "bound", "test-function lower bounds K_n", {{"--seq", "seq", Kind::Text, "factorial or a JSON list of [a, b]"},
                                                          {"--n", "n", Kind::Integer, "number of terms"}}},
    {"help", "potential", "HELP coefficient criterion with a potential", {}},
    {"sim", "check", "similarity to a self-adjoint operator", {}, true},
    {"sim", "coeff", "coefficient similarity criterion (q = 0)", {}, true},
    {"sim", "potential", "similarity criterion with a potential (r = 1)", {}, true},
    {"sim",
     "probe",
     "nonreal eigenvalues from zeros of c m(z) + m(-z)",
     {{"--re-lo", "re_lo", Kind::Number, "grid real part, low"},
      {"--re-hi", "re_hi", Kind::Number, "grid real part, high"},
      {"--im-lo", "im_lo", Kind::Number, "grid imaginary part, low"},
      {"--im-hi", "im_hi", Kind::Number, "grid imaginary part, high"},
      {"--n-re", "n_re", Kind::Integer, "grid columns"},
      {"--n-im", "n_im", Kind::Integer, "grid rows"}},
     true},
    {"sim", "lrg", "similarity, ratio and swapped HELP side by side", {}, true},
    {"fp", "check", "well-posedness of the forward-backward equation", {}, true},
    {"liouville", "transform", "zero-energy Liouville transform", {}},
    {"liouville", "verify", "m before and after the transform", {{"--lambda", "lambda", Kind::TextList, "spectral parameter a+bi"}}},
};

struct Bound {
    const FlagSpec* spec;
    std::string text;
    std::vector<std::string> list;
    bool flag = false;
    CLI::Option* opt = nullptr;
};

int exit_for(wk_status s) {
    switch (s) {
    case WK_ERR_PARSE: return 64;
    case WK_ERR_DOMAIN: return 65;
    case WK_ERR_UNSUPPORTED: return 66;
    case WK_ERR_ARGUMENT: return 67;
    case WK_ERR_NUMERIC: return 70;
    case WK_ERR_DIVERGENT: return 71;
    case WK_ERR_CLASSIFICATION: return 72;
    default: return 73;
    }
}

int fail(const std::string& kind, const std::string& message, int code) {
    std::cout << json{{"error", {{"kind", kind}, {"message", message}}}}.dump(2) << "\n";
    std::cerr << "weylkit: " << message << "\n";
    return code;
}

std::string slurp(const std::string& path) {
    if (path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json value_of(const Bound& b) {
    switch (b.spec->kind) {
    case Kind::Flag: return b.flag;
    case Kind::TextList: return b.list.size() == 1 ? json(b.list.front()) : json(b.list);
    case Kind::Text:
        // "--seq" may carry a JSON list of pairs.
        if (!b.text.empty() && b.text.front() == '[') return json::parse(b.text);
        return b.text;
    case Kind::Integer:
    case Kind::Number: {
        if (b.text == "inf") return "inf";
        size_t pos = 0;
        const double v = std::stod(b.text, &pos);
        if (pos != b.text.size()) throw std::invalid_argument(b.text);
        return v;
    }
    }
    return nullptr;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"weylkit: Weyl-Titchmarsh m-functions, HELP inequalities and similarity of indefinite Sturm-Liouville operators"};
    app.set_version_flag("--version", std::string("weylkit ") + wk_version());
    app.require_subcommand(1);

    std::string problem_path, catalog_name, format = "json", out_path, options_text;
    std::vector<std::string> sets;
    auto add_io = [&](CLI::App* sub) {
        sub->add_option("--problem", problem_path, "problem JSON file ('-' for stdin)");
        sub->add_option("--catalog", catalog_name, "named problem from the catalog");
        sub->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
        sub->add_option("--out", out_path, "write the report here instead of stdout");
        sub->add_option("--options", options_text, "extra options as a JSON object");
    };

    std::map<std::string, CLI::App*> groups;
    std::vector<std::pair<const Command*, CLI::App*>> leaves;
    std::vector<std::vector<Bound>> bound(kCommands.size());
    for (size_t i = 0; i < kCommands.size(); ++i) {
        const Command& c = kCommands[i];
        CLI::App*& g = groups[c.group];
        if (!g) {
            g = app.add_subcommand(c.group, std::string(c.group) + " commands");
            g->require_subcommand(1);
        }
        CLI::App* sub = g->add_subcommand(c.name, c.help);
        add_io(sub);
        auto& bs = bound[i];
        std::vector<const FlagSpec*> specs;
        for (const auto& f : c.flags) specs.push_back(&f);
        if (c.indefinite)
            for (const auto& f : kIndefinite) specs.push_back(&f);
        for (const auto& f : kCommon) specs.push_back(&f);
        bs.reserve(specs.size());
        for (const FlagSpec* f : specs) {
            bs.push_back(Bound{f, {}, {}, false, nullptr});
            Bound& b = bs.back();
            if (f->kind == Kind::Flag)
                b.opt = sub->add_flag(f->flag, b.flag, f->help);
            else if (f->kind == Kind::TextList)
                b.opt = sub->add_option(f->flag, b.list, f->help);
            else
                b.opt = sub->add_option(f->flag, b.text, f->help);
        }
        leaves.emplace_back(&c, sub);
    }

    std::string catalog_entry;
    CLI::App* cat = app.add_subcommand("catalog", "list the catalog, or print one entry as problem JSON");
    cat->add_option("name", catalog_entry, "catalog entry");
    cat->add_option("--out", out_path, "write the JSON here instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("parse", e.what(), 64);
    }

    auto emit = [&](const std::string& text) -> int {
        if (out_path.empty()) {
            std::cout << text;
            if (!text.empty() && text.back() != '\n') std::cout << "\n";
            return 0;
        }
        std::ofstream out(out_path);
        if (!out) return fail("io", "cannot write " + out_path, 74);
        out << text;
        if (!text.empty() && text.back() != '\n') out << "\n";
        return 0;
    };

    if (cat->parsed()) {
        char* s = nullptr;
        if (catalog_entry.empty()) {
            wk_catalog_names(&s);
            const json names = json::parse(s);
            wk_string_free(s);
            std::string text;
            for (const auto& n : names) text += n.get<std::string>() + "\n";
            return emit(text);
        }
        wk_problem* p = nullptr;
        wk_status st = wk_problem_from_catalog(catalog_entry.c_str(), &p);
        if (st != WK_OK) return fail("parse", wk_last_error(), exit_for(st));
        st = wk_problem_to_json(p, &s);
        wk_problem_free(p);
        if (st != WK_OK) return fail("internal", wk_last_error(), exit_for(st));
        const std::string text = s;
        wk_string_free(s);
        return emit(text);
    }

    for (size_t i = 0; i < leaves.size(); ++i) {
        const auto [cmd, sub] = leaves[i];
        if (!sub->parsed()) continue;

        if (problem_path.empty() == catalog_name.empty())
            return fail("parse", "give exactly one of --problem or --catalog", 64);
        json options = json::object();
        try {
            if (!options_text.empty()) {
                options = json::parse(options_text);
                if (!options.is_object()) return fail("parse", "--options must be a JSON object", 64);
            }
            for (const Bound& b : bound[i])
                if (b.opt->count() > 0) options[b.spec->key] = value_of(b);
        } catch (const std::exception& e) {
            return fail("parse", std::string("bad option value: ") + e.what(), 64);
        }

        wk_problem* p = nullptr;
        wk_status st;
        if (!catalog_name.empty()) {
            st = wk_problem_from_catalog(catalog_name.c_str(), &p);
        } else {
            std::string text;
            try {
                text = slurp(problem_path);
            } catch (const std::exception& e) {
                return fail("io", e.what(), 66);
            }
            st = wk_problem_from_json(text.c_str(), &p);
        }
        if (st != WK_OK) return fail(st == WK_ERR_PARSE ? "parse" : "domain", wk_last_error(), exit_for(st));

        const std::string command = std::string(cmd->group) + " " + cmd->name;
        char* report = nullptr;
        int verdict = WK_VERDICT_INCONCLUSIVE;
        st = wk_run(command.c_str(), p, options.dump().c_str(), &report, &verdict);
        wk_problem_free(p);
        const std::string text = report ? report : "";
        wk_string_free(report);
        if (st != WK_OK) {
            std::cerr << "weylkit: " << wk_status_string(st) << ": " << json::parse(text)["error"]["message"].get<std::string>()
                      << "\n";
            std::cout << text << "\n";
            return exit_for(st);
        }
        std::string body = text;
        if (format == "csv") {
            char* csv = nullptr;
            if (wk_report_csv(text.c_str(), &csv) != WK_OK) return fail("internal", wk_last_error(), 73);
            body = csv;
            wk_string_free(csv);
        } else if (command == "liouville transform" && !out_path.empty()) {
            // --out receives the transformed problem in the standard schema; the report goes to stdout.
            const json r = json::parse(text);
            std::cout << text << "\n";
            if (const int rc = emit(r["transformed"].dump(2)); rc != 0) return rc;
            return verdict;
        }
        if (const int rc = emit(body); rc != 0) return rc;
        return verdict;
    }
    return fail("parse", "no command given", 64);
}

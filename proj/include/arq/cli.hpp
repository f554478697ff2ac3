/* ------------------------------------------------------------------------- */
/* Command-line plumbing shared by the subcommand translation units.         */
/*                                                                           */
/* Every subcommand produces a Report: a headline, `key=value` lines, and a  */
/* mirrored JSON document (`--json`).  Text reports end with a `#` trailer   */
/* stamping the version, command, field, and seed, so identical invocations  */
/* are byte-identical and every certificate is reproducible.  The trailer is */
/* a comment in all of the tool's own file grammars, which keeps reports     */
/* reusable as inputs (e.g. `compat phit` output feeds `compat check`).      */
/*                                                                           */
/* Exit codes: 0 success, 1 malformed input, 2 violated precondition,        */
/* 3 internal invariant breach (always a bug).                               */
/* ------------------------------------------------------------------------- */
#pragma once

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "arq/error.hpp"
#include "arq/format.hpp"
#include "arq/rep.hpp"
#include "arq/scalar.hpp"

namespace arq::cli {

inline const char* version() { return "arq 1.0.0"; }

struct Invocation {
    std::string command;
    std::string field = "Q";
    long long bound = 0; /* 0 = library default */
    int depth = 2;
    long long sublattice_bound = 4;
    unsigned long long seed = 0;
    bool json = false;
    bool inverse = false;
    std::string handle;
    std::string desc;
    std::string prime;
    std::string output; /* empty = standard output */
    std::vector<std::string> files;
};

/* ---------------------------------------------------------------- *
 *  coefficient-field menu
 * ---------------------------------------------------------------- */

inline std::string resolve_field(std::string flag) {
    if (flag.empty()) flag = "Q";
    if (flag == "Q(t)") flag = "Qt";
    for (const char* m : {"Q", "F2", "F3", "F5", "F7", "Qt"})
        if (flag == m) return flag;
    throw parse_error("unknown field '" + flag + "' (choose one of Q, F2, F3, F5, F7, Qt)");
}

template <class Fn>
int with_field(const std::string& f, Fn&& fn) {
    if (f == "Q") return fn(std::type_identity<Rat>{});
    if (f == "F2") return fn(std::type_identity<Fp<2>>{});
    if (f == "F3") return fn(std::type_identity<Fp<3>>{});
    if (f == "F5") return fn(std::type_identity<Fp<5>>{});
    if (f == "F7") return fn(std::type_identity<Fp<7>>{});
    if (f == "Qt") return fn(std::type_identity<RatFunc<Rat>>{});
    throw parse_error("unknown field '" + f + "'");
}

/* k[t] machinery needs a plain coefficient field k, not another function field */
template <class Fn>
int with_base_field(const std::string& f, Fn&& fn) {
    ARQ_REQUIRE(f != "Qt",
                "this subcommand works over the polynomial ring k[t] and needs a plain "
                "coefficient field k; choose one of Q, F2, F3, F5, F7");
    return with_field(f, std::forward<Fn>(fn));
}

/* ---------------------------------------------------------------- *
 *  input files
 * ---------------------------------------------------------------- */

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw parse_error("cannot open input file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

/* A representation file is self-contained: a quiver description followed by
 * the representation, whose block starts at the `dims` line. */
inline std::pair<std::string, std::string> split_combined(const std::string& text) {
    std::istringstream in(text);
    std::string line, head, tail;
    bool in_rep = false;
    while (std::getline(in, line)) {
        std::string code = line.substr(0, line.find('#'));
        auto toks = split_ws(code);
        if (!in_rep && !toks.empty() && toks[0] == "dims") in_rep = true;
        (in_rep ? tail : head) += line + "\n";
    }
    return {head, tail};
}

template <FieldLike K>
std::pair<Quiver, Rep<K>> parse_combined(const std::string& text) {
    auto [qt, rt] = split_combined(text);
    Quiver q = parse_quiver_text(qt);
    Rep<K> x = parse_rep_text<K>(q, rt);
    return {q, x};
}

/* ---------------------------------------------------------------- *
 *  reports
 * ---------------------------------------------------------------- */

class Report {
  public:
    explicit Report(const Invocation& inv) : inv_(inv) {
        obj_["version"] = version();
        obj_["command"] = inv.command;
        obj_["field"] = inv.field;
        obj_["seed"] = inv.seed;
    }

    void headline(const std::string& s) {
        head_ = s;
        obj_["result"] = s;
    }
    void kv(const std::string& k, const std::string& v) {
        lines_.push_back(k + "=" + v);
        obj_[k] = v;
    }
    void kv(const std::string& k, const char* v) { kv(k, std::string(v)); }
    void kv(const std::string& k, long long v) {
        lines_.push_back(k + "=" + std::to_string(v));
        obj_[k] = v;
    }
    void kv(const std::string& k, bool v) {
        lines_.push_back(k + (v ? "=true" : "=false"));
        obj_[k] = v;
    }
    /* a preformatted text line; mirror structured content with json_extra */
    void line(const std::string& raw) { lines_.push_back(raw); }
    void note(const std::string& n) {
        lines_.push_back("# note: " + n);
        obj_["notes"].push_back(n);
    }
    /* multi-line payload under a `key:` header */
    void block(const std::string& key, const std::string& body) {
        lines_.push_back(key + ":");
        std::istringstream in(body);
        std::string l;
        while (std::getline(in, l)) lines_.push_back(l);
        obj_[key] = body;
    }
    void json_extra(const std::string& key, nlohmann::json v) { obj_[key] = std::move(v); }

    int emit() const {
        std::ostringstream os;
        if (inv_.json) {
            os << obj_.dump(2) << "\n";
        } else {
            if (!head_.empty()) os << head_ << "\n";
            for (const auto& l : lines_) os << l << "\n";
            os << "# " << version() << " command=" << inv_.command << " field=" << inv_.field
               << " seed=" << inv_.seed << "\n";
        }
        if (inv_.output.empty()) {
            std::cout << os.str();
        } else {
            std::ofstream f(inv_.output, std::ios::binary);
            ARQ_REQUIRE(static_cast<bool>(f), "cannot open output file: " + inv_.output);
            f << os.str();
        }
        return 0;
    }

  private:
    const Invocation& inv_;
    std::string head_;
    std::vector<std::string> lines_;
    nlohmann::json obj_;
};

/* ---------------------------------------------------------------- *
 *  subcommand entry points
 * ---------------------------------------------------------------- */

int cmd_classify(const Invocation&);
int cmd_indec(const Invocation&);
int cmd_tau(const Invocation&);
int cmd_tubes(const Invocation&);
int cmd_tors_enumerate(const Invocation&);
int cmd_tors_check(const Invocation&);
int cmd_snf(const Invocation&);
int cmd_filtration(const Invocation&);
int cmd_rpq(const Invocation&);
int cmd_compat_check(const Invocation&);
int cmd_compat_witness(const Invocation&);
int cmd_compat_phit(const Invocation&);

}  // namespace arq::cli

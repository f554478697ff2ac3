/* Subcommands: compat check, compat witness, compat phit. */
#include <sstream>
#include <string>
#include <vector>

#include "arq/cli.hpp"
#include "arq/compat.hpp"

namespace arq::cli {

namespace {

/* A family file is self-contained: the quiver description followed by the
 * family lines (generic/at/default), which are exactly the lines that do not
 * start with a quiver keyword. */
template <FieldLike K>
std::pair<Quiver, TorsionFamily<K>> parse_family_file(const std::string& text) {
    std::istringstream in(text);
    std::string line, qt, ft;
    bool in_family = false;
    while (std::getline(in, line)) {
        std::string code = line.substr(0, line.find('#'));
        auto toks = split_ws(code);
        if (!in_family && !toks.empty() && toks[0] != "vertices" && toks[0] != "arrow")
            in_family = true;
        (in_family ? ft : qt) += line + "\n";
    }
    Quiver q = parse_quiver_text(qt);
    return {q, parse_family<K>(ft)};
}

void entry_lines(Report& rep, nlohmann::json& arr, const CompatEntry& e) {
    std::string l = "prime " + e.prime + ": ok=" + (e.ok ? "true" : "false");
    if (!e.witness.empty()) l += " witness=" + e.witness;
    rep.line(l);
    for (const auto& n : e.notes) rep.line("  note: " + n);
    arr.push_back({{"prime", e.prime}, {"ok", e.ok}, {"witness", e.witness}, {"notes", e.notes}});
}

template <FieldLike K>
int compat_check_impl(const Invocation& inv) {
    auto [q, fam] = parse_family_file<K>(read_file(inv.files.at(0)));
    ARContext<K> ck(q);
    ARContext<RatFunc<K>> cK(q);
    CompatReport r = is_compatible(ck, cK, fam, inv.bound);
    Report rep(inv);
    rep.headline(std::string("compatible=") + (r.compatible ? "true" : "false"));
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : r.entries) entry_lines(rep, arr, e);
    rep.json_extra("entries", std::move(arr));
    rep.kv("bound", inv.bound > 0 ? inv.bound : default_probe(ck));
    return rep.emit();
}

template <FieldLike K>
int compat_witness_impl(const Invocation& inv) {
    auto [q, fam] = parse_family_file<K>(read_file(inv.files.at(0)));
    ARContext<K> ck(q);
    ARContext<RatFunc<K>> cK(q);
    IndecDescriptor d = parse_descriptor<RatFunc<K>>(inv.desc);
    Rep<RatFunc<K>> xp = cK.realize(d);
    GlueWitness<K> w =
        glue_witness(ck, cK, fam, xp, PrimeLabel<K>::generic_label(), inv.sublattice_bound);
    Report rep(inv);
    rep.headline(std::string("all_certs_pass=") + (w.all_certs_pass() ? "true" : "false"));
    rep.kv("descriptor", d.str());
    rep.kv("homogeneous_case", w.homogeneous_case);
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : w.certs) {
        rep.line("cert " + c.prime + ": dims=" + dimvec_str(c.reduced_dims) +
                 " member=" + (c.member ? "true" : "false"));
        arr.push_back({{"prime", c.prime}, {"dims", c.reduced_dims}, {"member", c.member}});
    }
    rep.json_extra("certs", std::move(arr));
    for (const auto& n : w.notes) rep.note(n);
    rep.block("module", quiver_str(q) + rep_str(w.x.generic_fiber()));
    rep.kv("sublattice_bound", inv.sublattice_bound);
    return rep.emit();
}

template <FieldLike K>
int compat_phit_impl(const Invocation& inv) {
    std::vector<RQModule<K>> gens;
    std::string qs;
    Quiver q;
    for (const auto& path : inv.files) {
        auto [qi, xi] = parse_combined<RatFunc<K>>(read_file(path));
        if (gens.empty()) {
            q = qi;
            qs = quiver_str(qi);
        } else {
            ARQ_REQUIRE(quiver_str(qi) == qs, "all generators must live on the same quiver");
        }
        gens.push_back(rqmodule_from_rep(xi));
    }
    ARContext<K> ck(q);
    ARContext<RatFunc<K>> cK(q);
    PhiTResult<K> r = phi_t(ck, cK, gens, inv.bound);
    Report rep(inv);
    /* quiver block + family text form a complete family file, reusable as
     * `compat check` input; everything else rides in comments so the report
     * stays parseable */
    std::istringstream fam(qs + r.family.str());
    std::string line;
    while (std::getline(fam, line)) rep.line(line);
    for (const auto& n : r.notes) rep.note(n);
    rep.line("# bound=" + std::to_string(inv.bound > 0 ? inv.bound : default_probe(ck)));
    rep.json_extra("family", r.family.str());
    rep.json_extra("quiver", qs);
    rep.json_extra("bound", inv.bound > 0 ? inv.bound : default_probe(ck));
    return rep.emit();
}

}  // namespace

int cmd_compat_check(const Invocation& inv) {
    return with_base_field(inv.field,
                           [&]<class K>(std::type_identity<K>) { return compat_check_impl<K>(inv); });
}

int cmd_compat_witness(const Invocation& inv) {
    return with_base_field(
        inv.field, [&]<class K>(std::type_identity<K>) { return compat_witness_impl<K>(inv); });
}

int cmd_compat_phit(const Invocation& inv) {
    return with_base_field(inv.field,
                           [&]<class K>(std::type_identity<K>) { return compat_phit_impl<K>(inv); });
}

}  // namespace arq::cli

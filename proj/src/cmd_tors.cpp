/* Subcommands: tors enumerate, tors check. */
#include <string>

#include "arq/ar.hpp"
#include "arq/cli.hpp"
#include "arq/torsion.hpp"

namespace arq::cli {

namespace {

template <FieldLike K>
int tors_enumerate_impl(const Invocation& inv) {
    Quiver q = parse_quiver_text(read_file(inv.files.at(0)));
    ARContext<K> ctx(q);
    long long bound = inv.bound > 0 ? inv.bound : default_probe(ctx);
    PosetFragment f = enumerate_ftors(ctx, inv.depth, bound);
    Report rep(inv);
    rep.headline("nodes=" + std::to_string(f.nodes.size()));
    nlohmann::json nodes = nlohmann::json::array(), edges = nlohmann::json::array();
    for (std::size_t i = 0; i < f.nodes.size(); ++i) {
        rep.line("node " + std::to_string(i) + ": depth=" + std::to_string(f.depth[i]) +
                 " handle=" + f.nodes[i].str());
        nodes.push_back({{"depth", f.depth[i]}, {"handle", f.nodes[i].str()}});
    }
    for (const auto& e : f.edges) {
        rep.line("edge " + std::to_string(e[0]) + " -> " + std::to_string(e[1]) +
                 " slot=" + std::to_string(e[2]));
        edges.push_back({{"from", e[0]}, {"to", e[1]}, {"slot", e[2]}});
    }
    rep.json_extra("node_list", std::move(nodes));
    rep.json_extra("edge_list", std::move(edges));
    rep.kv("depth", static_cast<long long>(inv.depth));
    rep.kv("bound", bound);
    return rep.emit();
}

template <FieldLike K>
int tors_check_impl(const Invocation& inv) {
    Quiver q = parse_quiver_text(read_file(inv.files.at(0)));
    ARContext<K> ctx(q);
    TorsionHandle h = parse_handle(inv.handle);
    TheoremReport r = check_theorem31(ctx, h, inv.bound);
    Report rep(inv);
    rep.headline(std::string("functorially_finite=") + (r.cond_ff ? "true" : "false"));
    rep.kv("handle", h.str());
    rep.kv("upper_or_lower_finite", r.cond_finiteness);
    rep.kv("meets_preprojectives_or_perp_meets_preinjectives", r.cond_intersection);
    rep.kv("in_interval_between_preinjectives_and_their_join_with_regulars", r.cond_interval);
    rep.kv("conditions_agree", r.agree);
    if (r.pp_witness) rep.kv("preprojective_witness", r.pp_witness->str());
    if (r.pi_perp_witness) rep.kv("preinjective_perp_witness", r.pi_perp_witness->str());
    if (r.missing_preinjective) rep.kv("missing_preinjective", r.missing_preinjective->str());
    rep.kv("bound", r.bound_used);
    return rep.emit();
}

}  // namespace

int cmd_tors_enumerate(const Invocation& inv) {
    return with_field(inv.field,
                      [&]<class K>(std::type_identity<K>) { return tors_enumerate_impl<K>(inv); });
}

int cmd_tors_check(const Invocation& inv) {
    return with_field(inv.field,
                      [&]<class K>(std::type_identity<K>) { return tors_check_impl<K>(inv); });
}

}  // namespace arq::cli

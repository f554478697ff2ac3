/* Subcommands: classify, indec, tau, tubes. */
#include <string>
#include <vector>

#include "arq/ar.hpp"
#include "arq/cli.hpp"
#include "arq/torsion.hpp"
#include "arq/translate.hpp"

namespace arq::cli {

namespace {

std::string desc_list_str(const std::vector<IndecDescriptor>& ds) {
    std::string s = "[";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (i) s += ",";
        s += ds[i].str();
    }
    return s + "]";
}

std::string dims_list_str(const std::vector<DimVec>& ds) {
    std::string s = "[";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (i) s += ",";
        s += dimvec_str(ds[i]);
    }
    return s + "]";
}

template <FieldLike K>
int indec_impl(const Invocation& inv) {
    Quiver q = parse_quiver_text(read_file(inv.files.at(0)));
    ARContext<K> ctx(q);
    ARQ_REQUIRE(ctx.type.kind != QuiverKind::Wild,
                "indecomposable enumeration needs a Dynkin or extended Dynkin quiver");
    long long bound = inv.bound > 0 ? inv.bound : default_probe(ctx);
    auto ds = ctx.descriptors_up_to(bound);
    Report rep(inv);
    rep.headline("indecomposables=" + std::to_string(ds.size()));
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& d : ds) {
        DimVec dm = ctx.dims_of(d);
        rep.line(d.str() + " dims=" + dimvec_str(dm));
        arr.push_back({{"name", d.str()}, {"dims", dm}});
    }
    rep.json_extra("descriptors", std::move(arr));
    if (ctx.extended()) {
        std::string h = "homogeneous: HomReg(p,l) for every closed point p off the tubes above, "
                        "any l >= 1 with l*deg(p)*" +
                        std::to_string(dim_total(ctx.type.delta)) + " <= bound";
        rep.line(h);
        rep.json_extra("homogeneous", h);
    }
    rep.kv("bound", bound);
    return rep.emit();
}

template <FieldLike K>
int tau_impl(const Invocation& inv) {
    auto [q, x] = parse_combined<K>(read_file(inv.files.at(0)));
    Rep<K> y = inv.inverse ? tau_minus(x) : tau_plus(x);
    Report rep(inv);
    rep.headline((inv.inverse ? "tau_minus_dims=" : "tau_dims=") + dimvec_str(y.dims));
    rep.kv("input_dims", dimvec_str(x.dims));
    rep.json_extra("output_dims", y.dims);
    if (arq::classify(q).kind != QuiverKind::Wild) {
        ARContext<K> ctx(q);
        try {
            rep.kv("input_descriptors", desc_list_str(detail::summand_descriptors(ctx, x)));
            rep.kv("descriptors", desc_list_str(detail::summand_descriptors(ctx, y)));
        } catch (const precondition_error& e) {
            rep.note(std::string("descriptor naming unavailable: ") + e.what());
        }
    }
    return rep.emit();
}

template <FieldLike K>
int tubes_impl(const Invocation& inv) {
    Quiver q = parse_quiver_text(read_file(inv.files.at(0)));
    ARContext<K> ctx(q);
    ctx.require_extended();
    const auto& tb = ctx.tubes();
    Report rep(inv);
    rep.headline("tubes=" + std::to_string(tb.size()));
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < tb.size(); ++i) {
        rep.line("tube " + std::to_string(i + 1) + ": rank=" + std::to_string(tb[i].rank) +
                 " simples=" + dims_list_str(tb[i].simple_dims));
        arr.push_back({{"rank", tb[i].rank}, {"simples", tb[i].simple_dims}});
    }
    rep.json_extra("tube_list", std::move(arr));
    rep.kv("delta", dimvec_str(ctx.type.delta));
    rep.json_extra("delta_vec", ctx.type.delta);
    return rep.emit();
}

}  // namespace

int cmd_classify(const Invocation& inv) {
    Quiver q = parse_quiver_text(read_file(inv.files.at(0)));
    QuiverType t = arq::classify(q);
    Report rep(inv);
    std::string head = kind_name(t.kind);
    if (t.kind == QuiverKind::ExtendedDynkin) head += ", delta=" + dimvec_str(t.delta);
    rep.headline(head);
    rep.kv("arrows", static_cast<long long>(q.arrows.size()));
    rep.kv("vertices", static_cast<long long>(q.n));
    rep.json_extra("kind", kind_name(t.kind));
    rep.json_extra("delta_vec", t.delta);
    return rep.emit();
}

int cmd_indec(const Invocation& inv) {
    return with_field(inv.field, [&]<class K>(std::type_identity<K>) { return indec_impl<K>(inv); });
}

int cmd_tau(const Invocation& inv) {
    return with_field(inv.field, [&]<class K>(std::type_identity<K>) { return tau_impl<K>(inv); });
}

int cmd_tubes(const Invocation& inv) {
    return with_field(inv.field, [&]<class K>(std::type_identity<K>) { return tubes_impl<K>(inv); });
}

}  // namespace arq::cli

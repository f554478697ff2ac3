/* Subcommands: snf, filtration, rpq. */
#include <string>

#include "arq/basechange.hpp"
#include "arq/cli.hpp"
#include "arq/compat.hpp"

namespace arq::cli {

namespace {

template <FieldLike K>
int snf_impl(const Invocation& inv) {
    using RF = RatFunc<K>;
    Matrix<RF> a = parse_matrix_text<RF>(read_file(inv.files.at(0)));
    SNFResult<K> r = snf_dvr(a);
    ARQ_CHECK(r.p * r.d * r.q == a, "Smith factors do not multiply back to the input");
    Report rep(inv);
    rep.headline("exponents=" + dimvec_str(r.exponents));
    rep.kv("rows", static_cast<long long>(a.rows()));
    rep.kv("cols", static_cast<long long>(a.cols()));
    rep.block("P", matrix_str(r.p));
    rep.block("D", matrix_str(r.d));
    rep.block("Q", matrix_str(r.q));
    rep.json_extra("exponent_list", r.exponents);
    return rep.emit();
}

template <FieldLike K>
int filtration_impl(const Invocation& inv) {
    using RF = RatFunc<K>;
    auto [qx, xr] = parse_combined<RF>(read_file(inv.files.at(0)));
    auto [qy, yr] = parse_combined<RF>(read_file(inv.files.at(1)));
    ARQ_REQUIRE(quiver_str(qx) == quiver_str(qy), "the two modules must live on the same quiver");
    RQModule<K> x = rqmodule_from_rep(xr);
    RQModule<K> y = rqmodule_from_rep(yr);
    MatchedFiltrations<K> m = filtration_pair(x, y);
    for (std::size_t i = 0; i < m.factor_isos.size(); ++i)
        ARQ_CHECK(m.factor_isos[i].intertwines(m.x_factors[i], m.y_factors[i]) &&
                      m.factor_isos[i].is_invertible(),
                  "matched filtration produced a non-isomorphism between factors");
    Report rep(inv);
    rep.headline("m=" + std::to_string(m.m) + ", factors matched");
    rep.kv("exponents", dimvec_str(m.exponents));
    nlohmann::json arr = nlohmann::json::array();
    for (std::size_t i = 0; i < m.x_factors.size(); ++i) {
        rep.line("factor " + std::to_string(i + 1) + ": exponent=" + std::to_string(m.exponents[i]) +
                 " dims=" + dimvec_str(m.x_factors[i].dims));
        arr.push_back({{"exponent", m.exponents[i]}, {"dims", m.x_factors[i].dims}});
    }
    rep.json_extra("m", m.m);
    rep.json_extra("factors", std::move(arr));
    return rep.emit();
}

template <FieldLike K>
int rpq_impl(const Invocation& inv) {
    Quiver q = parse_quiver_text(read_file(inv.files.at(0)));
    ARContext<K> ck(q);
    ARContext<RatFunc<K>> cK(q);
    TorsionHandle h = parse_handle(inv.handle);
    K a = inv.prime.empty() ? field_traits<K>::zero() : parse_scalar<K>(inv.prime);
    PrimeLabel<K> p = PrimeLabel<K>::closed(a);
    TorsionHandle out = r_pq(ck, cK, h, p);
    Report rep(inv);
    rep.headline(out.str());
    rep.kv("source_handle", h.str());
    rep.kv("source_prime", prime_str(p));
    rep.kv("target_prime", "(0)");
    return rep.emit();
}

}  // namespace

int cmd_snf(const Invocation& inv) {
    return with_base_field(inv.field, [&]<class K>(std::type_identity<K>) { return snf_impl<K>(inv); });
}

int cmd_filtration(const Invocation& inv) {
    return with_base_field(inv.field,
                           [&]<class K>(std::type_identity<K>) { return filtration_impl<K>(inv); });
}

int cmd_rpq(const Invocation& inv) {
    return with_base_field(inv.field, [&]<class K>(std::type_identity<K>) { return rpq_impl<K>(inv); });
}

}  // namespace arq::cli

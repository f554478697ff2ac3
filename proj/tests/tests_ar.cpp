#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "arq/ar.hpp"
#include "arq/builders.hpp"
#include "arq/descriptor.hpp"
#include "arq/format.hpp"

using namespace arq;

TEST_CASE("descriptor strings round-trip and normalize") {
    CHECK(parse_descriptor<Rat>("PP(1,3)").str() == "PP(1,3)");
    CHECK(parse_descriptor<Rat>("Reg(2,0,5)").str() == "Reg(2,0,5)");
    CHECK(parse_descriptor<Rat>("HomReg(t-1,2)").str() == "HomReg(t-1,2)");
    CHECK(parse_descriptor<Rat>("HomReg(inf,1)").str() == "HomReg(inf,1)");
    /* labels normalize to monic polynomials in the canonical variable */
    CHECK(parse_descriptor<Rat>("HomReg(t-0,1)").str() == "HomReg(t,1)");
    CHECK(parse_descriptor<Rat>("HomReg(2*t-2,4)").str() == "HomReg(t-1,4)");
    CHECK(parse_descriptor<Rat>(" PP( 2 , 0 ) ").str() == "PP(2,0)");
    CHECK(parse_descriptor<Fp<5>>("HomReg(t^2+2,1)").str() == "HomReg(t^2+2,1)");
    CHECK_THROWS_AS(parse_descriptor<Rat>("PP(0,0)"), parse_error);
    CHECK_THROWS_AS(parse_descriptor<Rat>("Reg(1,0)"), parse_error);
    CHECK_THROWS_AS(parse_descriptor<Rat>("Blob(1,0)"), parse_error);

    IndecDescriptor a = IndecDescriptor::pp(0, 0), b = IndecDescriptor::pp(1, 0);
    IndecDescriptor c = IndecDescriptor::reg(0, 0, 1), d = IndecDescriptor::pi(0, 0);
    CHECK(desc_less(a, b));
    CHECK(desc_less(b, c));
    CHECK(desc_less(c, d));
}

TEST_CASE("expression parser and canonical rendering") {
    CHECK(scalar_str(parse_scalar<Rat>("3/6")) == "1/2");
    CHECK(scalar_str(parse_scalar<Rat>("-(2-5)")) == "3");
    CHECK(scalar_str(parse_scalar<Fp<7>>("1/2")) == "4");
    auto f = parse_scalar<RatFunc<Rat>>("(t^2-1)/(t-1)");
    CHECK(scalar_str(f) == "t+1");
    auto g = parse_scalar<RatFunc<Rat>>("1/(2*t)");
    CHECK(scalar_str(g) == "1/2/t");
    CHECK(scalar_str(parse_scalar<RatFunc<Rat>>(scalar_str(g))) == "1/2/t");
    auto p = parse_poly<Rat>("x^2 - 2*x + 1");
    CHECK(poly_str(p, "t") == "t^2-2*t+1");
    auto pr = parse_poly<RatFunc<Rat>>("x-t");
    CHECK(poly_str(pr, "x") == "x-t");
    CHECK(canonical_point<Rat>("2*t-2") == "t-1");
    CHECK(canonical_point<RatFunc<Rat>>("x-t") == "x-t");
}

TEST_CASE("Kronecker pencil matches the pinned eigenvalue convention") {
    ARContext<Rat> ctx(quiver_kronecker());
    CHECK(ctx.tubes().empty());
    const auto& pe = ctx.pencil();
    CHECK(pe.a.dims == DimVec{0, 1});
    CHECK(pe.b.dims == DimVec{1, 0});
    /* echelon cocycle basis: zeta0 rides arrow a, zeta1 rides arrow b */
    CHECK(pe.z0.per_arrow[0].at(0, 0) == Rat(1));
    CHECK(pe.z0.per_arrow[1].is_zero_matrix());
    CHECK(pe.z1.per_arrow[0].is_zero_matrix());
    CHECK(pe.z1.per_arrow[1].at(0, 0) == Rat(1));

    /* the regular simple at lambda = 0 is (1, 0) */
    Rep<Rat> r0 = ctx.realize(IndecDescriptor::homreg("t", 1));
    CHECK(r0.dims == DimVec{1, 1});
    CHECK(r0.mats[0].at(0, 0) == Rat(1));
    CHECK(r0.mats[1].at(0, 0) == Rat(0));
    /* lambda = infinity swaps the roles */
    Rep<Rat> rinf = ctx.realize(IndecDescriptor::homreg("inf", 1));
    CHECK(rinf.mats[0].at(0, 0) == Rat(0));
    CHECK(rinf.mats[1].at(0, 0) == Rat(1));
    /* general lambda gives (1, lambda) */
    Rep<Rat> r2 = ctx.realize(IndecDescriptor::homreg("t-2", 1));
    CHECK(r2.mats[0].at(0, 0) == Rat(1));
    CHECK(r2.mats[1].at(0, 0) == Rat(2));
}

TEST_CASE("Kronecker realization oracles") {
    ARContext<Rat> ctx(quiver_kronecker());
    Rep<Rat> p1 = ctx.realize(IndecDescriptor::pp(0, 0));
    CHECK(p1.dims == DimVec{1, 2});
    Rep<Rat> pp11 = ctx.realize(IndecDescriptor::pp(0, 1));
    CHECK(pp11.dims == DimVec{3, 4});
    CHECK(ctx.dims_of(IndecDescriptor::pp(0, 1)) == DimVec{3, 4});
    Rep<Rat> i2 = ctx.realize(IndecDescriptor::pi(1, 0));
    CHECK(i2.dims == DimVec{2, 1});
    CHECK(ctx.dims_of(IndecDescriptor::homreg("t^2-2", 3)) == DimVec{6, 6});
}

TEST_CASE("component trisection by defect") {
    ARContext<Rat> ctx(quiver_kronecker());
    CHECK(ctx.component_of(projective_rep<Rat>(ctx.q, 0)) == Component::P);
    CHECK(ctx.component_of(kronecker_regular(Rat(5))) == Component::R);
    CHECK(ctx.component_of(injective_rep<Rat>(ctx.q, 1)) == Component::I);
    CHECK(component_name(Component::R) == std::string("R"));
    CHECK_THROWS_AS(ctx.component_of(direct_sum(simple_rep<Rat>(ctx.q, 0), simple_rep<Rat>(ctx.q, 0))),
                    precondition_error);
}

TEST_CASE("describe inverts realize on the Kronecker quiver") {
    ARContext<Rat> ctx(quiver_kronecker());
    std::vector<IndecDescriptor> cases = {
        IndecDescriptor::pp(0, 0),          IndecDescriptor::pp(1, 2),
        IndecDescriptor::pi(0, 1),          IndecDescriptor::pi(1, 0),
        IndecDescriptor::homreg("t", 1),    IndecDescriptor::homreg("t-1", 2),
        IndecDescriptor::homreg("inf", 2),  IndecDescriptor::homreg("t^2-2", 1),
        IndecDescriptor::homreg("t+1/2", 1)};
    for (const auto& d : cases) {
        Rep<Rat> x = ctx.realize(d);
        CHECK(ctx.describe(x).str() == d.str());
    }
}

TEST_CASE("homogeneous realization rejects non-homogeneous labels") {
    ARContext<Rat> ctx(quiver_kronecker());
    CHECK_THROWS_AS(ctx.realize(IndecDescriptor::homreg("t^2-1", 1)), precondition_error);

    /* the D4-tilde pencil has exactly three exceptional fibers (one per
     * rank-2 tube); every other label realizes and round-trips */
    ARContext<Rat> d4(quiver_d4_tilde());
    int rejected = 0, accepted = 0;
    for (const char* label : {"t", "t-1", "t+1", "t-2", "t-3", "inf"}) {
        try {
            Rep<Rat> e = d4.realize(IndecDescriptor::homreg(label, 1));
            CHECK(d4.describe(e).str() == IndecDescriptor::homreg(label, 1).str());
            ++accepted;
        } catch (const precondition_error&) {
            ++rejected;
        }
    }
    CHECK(rejected <= 3);
    CHECK(accepted >= 3);
}

TEST_CASE("D4-tilde tube inventory") {
    ARContext<Rat> ctx(quiver_d4_tilde());
    const auto& tb = ctx.tubes();
    REQUIRE(tb.size() == 3);
    std::vector<DimVec> all;
    for (const auto& t : tb) {
        CHECK(t.rank == 2);
        DimVec sum = dim_add(t.simple_dims[0], t.simple_dims[1]);
        CHECK(sum == ctx.type.delta);
        for (const auto& d : t.simple_dims) all.push_back(d);
    }
    CHECK(all.size() == 6);
    /* deterministic tube ordering: ray 0 of tube 1 is the lexicographically
     * smallest regular-simple dimension vector */
    CHECK(tb[0].simple_dims[0] == DimVec{1, 0, 0, 1, 1});
    for (std::size_t t = 1; t < tb.size(); ++t)
        CHECK(tb[t - 1].simple_dims[0] < tb[t].simple_dims[0]);
    /* tau sends ray 1 back to ray 0 */
    Rep<Rat> back = tau_plus(tb[0].simples[0]);
    CHECK(back.dims == tb[0].simple_dims[1]);
}

TEST_CASE("A2-tilde has a single rank-2 tube") {
    ARContext<Rat> ctx(quiver_a2_tilde());
    CHECK(ctx.type.delta == DimVec{1, 1, 1});
    const auto& tb = ctx.tubes();
    REQUIRE(tb.size() == 1);
    CHECK(tb[0].rank == 2);
    CHECK(tb[0].simple_dims[0] == DimVec{0, 1, 0});
    CHECK(tb[0].simple_dims[1] == DimVec{1, 0, 1});
}

TEST_CASE("tube inventory over a finite field") {
    ARContext<Fp<5>> ctx(quiver_a2_tilde());
    const auto& tb = ctx.tubes();
    REQUIRE(tb.size() == 1);
    CHECK(tb[0].rank == 2);
}

TEST_CASE("tube modules realize, describe and peel") {
    ARContext<Rat> ctx(quiver_d4_tilde());
    IndecDescriptor d = IndecDescriptor::reg(0, 0, 2);
    Rep<Rat> m = ctx.realize(d);
    CHECK(m.dims == ctx.type.delta);
    CHECK(hom_dim(m, m) == 1);
    CHECK(ctx.describe(m).str() == "Reg(1,0,2)");

    auto series = ctx.regular_length(m);
    CHECK(series.length == 2);
    REQUIRE(series.factors.size() == 2);
    CHECK(series.factors[0].str() == "Reg(1,0,1)");
    CHECK(series.factors[1].str() == "Reg(1,1,1)");
    CHECK(series.chain.back() == m.dims);

    /* longer than the rank: length 3 wraps around the tube */
    IndecDescriptor d3 = IndecDescriptor::reg(0, 1, 3);
    Rep<Rat> m3 = ctx.realize(d3);
    CHECK(hom_dim(m3, m3) == 2);
    CHECK(ctx.describe(m3).str() == "Reg(1,1,3)");

    auto simple = ctx.regular_length(ctx.realize(IndecDescriptor::reg(1, 1, 1)));
    CHECK(simple.length == 1);
}

TEST_CASE("regular length of homogeneous modules") {
    ARContext<Rat> ctx(quiver_kronecker());
    auto series = ctx.regular_length(ctx.realize(IndecDescriptor::homreg("t-1", 2)));
    CHECK(series.length == 2);
    CHECK(series.factors[0].str() == "HomReg(t-1,1)");
    CHECK(series.chain == std::vector<DimVec>{{1, 1}, {2, 2}});
    auto quad = ctx.regular_length(ctx.realize(IndecDescriptor::homreg("t^2-2", 1)));
    CHECK(quad.length == 1);
    CHECK(quad.factors[0].str() == "HomReg(t^2-2,1)");
}

TEST_CASE("tau-orbit sincerity") {
    ARContext<Rat> ctx(quiver_kronecker());
    CHECK(ctx.is_tau_minus_sincere(IndecDescriptor::pp(0, 0)));
    CHECK_FALSE(ctx.is_tau_minus_sincere(IndecDescriptor::pp(1, 0)));
    CHECK(ctx.is_tau_minus_sincere(IndecDescriptor::pp(1, 1)));
    CHECK(ctx.is_tau_sincere(IndecDescriptor::pi(0, 1)));
    CHECK_FALSE(ctx.is_tau_sincere(IndecDescriptor::pi(0, 0)));

    ARContext<Rat> d4(quiver_d4_tilde());
    CHECK_FALSE(d4.is_tau_minus_sincere(IndecDescriptor::pp(1, 0)));
}

TEST_CASE("hom nonvanishing report") {
    ARContext<Rat> ctx(quiver_kronecker());
    auto r = ctx.hom_nonvanishing_check(IndecDescriptor::pp(0, 0), IndecDescriptor::pi(0, 0),
                                        IndecDescriptor::homreg("t", 1));
    CHECK(r.pre_sincere);
    CHECK(r.pre_tau_fixed);
    CHECK(r.hom_pi >= 1);
    CHECK(r.hom_px >= 1);
    CHECK(r.hom_xi >= 1);
    CHECK(r.claim_pi);
    CHECK(r.claim_through_x);
}

TEST_CASE("bounded descriptor enumeration") {
    ARContext<Rat> kr(quiver_kronecker());
    auto list = kr.descriptors_up_to(5);
    std::vector<std::string> got;
    for (const auto& d : list) got.push_back(d.str());
    std::vector<std::string> want = {"PP(1,0)", "PP(2,0)", "PP(2,1)",
                                     "PI(1,0)", "PI(2,0)", "PI(1,1)"};
    CHECK(got == want);

    /* trisection: every enumerated descriptor lands in its defect class */
    for (const auto& d : kr.descriptors_up_to(8)) {
        Rep<Rat> x = kr.realize(d);
        CHECK(x.dims == kr.dims_of(d));
        long long df = defect(kr.q, kr.type.delta, x.dims);
        if (d.kind == DescKind::PP) CHECK(df < 0);
        if (d.kind == DescKind::PI) CHECK(df > 0);
        if (d.kind == DescKind::Reg) CHECK(df == 0);
    }

    ARContext<Rat> a2(quiver_a2());
    auto dyn = a2.descriptors_up_to(10);
    CHECK(dyn.size() == 3);
    for (const auto& d : dyn) CHECK(d.kind == DescKind::PP);

    ARContext<Rat> at(quiver_a2_tilde());
    auto withregs = at.descriptors_up_to(3);
    int regs = 0;
    for (const auto& d : withregs)
        if (d.kind == DescKind::Reg) ++regs;
    CHECK(regs == 4); /* two simples and two length-2 wedges of dim delta */
}

TEST_CASE("describe round-trips over a finite field and a function field") {
    ARContext<Fp<5>> ctx(quiver_kronecker());
    for (const char* label : {"t", "t+3", "t^2+2", "inf"}) {
        IndecDescriptor d = IndecDescriptor::homreg(label, 1);
        CHECK(ctx.describe(ctx.realize(d)).str() == d.str());
    }
    ARContext<RatFunc<Rat>> rf(quiver_kronecker());
    IndecDescriptor at_t = IndecDescriptor::homreg("x-t", 1);
    Rep<RatFunc<Rat>> x = rf.realize(at_t);
    CHECK(x.mats[0].at(0, 0) == RatFunc<Rat>(1));
    CHECK(x.mats[1].at(0, 0) == RatFunc<Rat>::t());
    CHECK(rf.describe(x).str() == "HomReg(x-t,1)");
}

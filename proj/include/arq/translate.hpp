#pragma once

#include <utility>
#include <vector>

#include "arq/fitting.hpp"
#include "arq/rep.hpp"

/* Auslander-Reiten translation: tau X = ker(nu P1 -> nu P0) for a minimal
 * projective presentation P1 -> P0 -> X -> 0, where nu sends P(i) to I(i) and a
 * map given by a path-algebra element to its dual left-multiplication.
 * tau^- is computed by dualizing over the opposite quiver. */

namespace arq {

/* product of arrow matrices along a path (first arrow applied first) */
template <FieldLike K>
Matrix<K> path_action(const Rep<K>& x, const std::vector<int>& path, int src_vertex) {
    Matrix<K> m = Matrix<K>::identity(x.dim(src_vertex));
    for (int a : path) m = x.mats[static_cast<size_t>(a)] * m;
    return m;
}

/* extend the columns of b to a basis of the full space, unit vectors appended */
template <FieldLike K>
Matrix<K> complete_basis(const Matrix<K>& b) {
    const size_t n = b.rows(), k = b.cols();
    Matrix<K> full(n, n);
    full.set_block(0, 0, b);
    size_t have = k;
    for (size_t e = 0; e < n && have < n; ++e) {
        for (size_t r = 0; r < n; ++r)
            full.at(r, have) = (r == e) ? field_traits<K>::one() : field_traits<K>::zero();
        if (rank(full.block(0, 0, n, have + 1)) == have + 1) ++have;
    }
    ARQ_CHECK(have == n, "basis completion failed");
    return full;
}

template <FieldLike K>
struct ProjCover {
    Rep<K> proj;            /* direct sum of indecomposable projectives */
    RepMap<K> cover;        /* surjection onto the covered module */
    std::vector<int> verts; /* vertex of each projective summand, in sum order */
};

/* Minimal projective cover: one P(v) summand per top basis element, generators
 * lifted through a completed radical basis. */
template <FieldLike K>
ProjCover<K> projective_cover(const Rep<K>& x) {
    ProjCover<K> pc;
    auto rad = radical_sub(x);
    std::vector<std::vector<std::vector<K>>> gens(static_cast<size_t>(x.q.n));
    for (int v = 0; v < x.q.n; ++v) {
        const Matrix<K>& rb = rad.incl.comps[static_cast<size_t>(v)];
        Matrix<K> full = complete_basis(rb);
        for (size_t c = rb.cols(); c < full.cols(); ++c)
            gens[static_cast<size_t>(v)].push_back(full.col(c));
    }
    /* assemble the sum and the cover map in vertex-ascending order */
    std::vector<Rep<K>> summands;
    std::vector<std::vector<K>> summand_gen;
    for (int v = 0; v < x.q.n; ++v)
        for (const auto& g : gens[static_cast<size_t>(v)]) {
            pc.verts.push_back(v);
            summands.push_back(projective_rep<K>(x.q, v));
            summand_gen.push_back(g);
        }
    pc.proj = zero_rep<K>(x.q);
    for (const auto& s : summands) pc.proj = direct_sum(pc.proj, s);
    for (int w = 0; w < x.q.n; ++w) {
        Matrix<K> block(x.dim(w), 0);
        for (size_t s = 0; s < summands.size(); ++s) {
            int v = pc.verts[s];
            auto ps = x.q.paths(v, w);
            Matrix<K> cols(x.dim(w), ps.size());
            for (size_t c = 0; c < ps.size(); ++c) {
                Matrix<K> act = path_action(x, ps[c], v);
                std::vector<K> img = mat_vec(act, summand_gen[s]);
                for (size_t r = 0; r < x.dim(w); ++r) cols.at(r, c) = img[r];
            }
            block = hstack(block, cols);
        }
        pc.cover.comps.push_back(std::move(block));
    }
    ARQ_CHECK(pc.cover.intertwines(pc.proj, x), "projective cover must intertwine");
    for (int w = 0; w < x.q.n; ++w)
        ARQ_CHECK(rank(pc.cover.comps[static_cast<size_t>(w)]) == x.dim(w),
                  "projective cover must be surjective");
    return pc;
}

/* offsets of each summand's path-basis block inside a sum of projectives */
inline std::vector<std::vector<size_t>> proj_sum_offsets(const Quiver& q, const std::vector<int>& verts) {
    std::vector<std::vector<size_t>> off(verts.size(), std::vector<size_t>(static_cast<size_t>(q.n), 0));
    std::vector<size_t> run(static_cast<size_t>(q.n), 0);
    for (size_t s = 0; s < verts.size(); ++s) {
        for (int w = 0; w < q.n; ++w) {
            off[s][static_cast<size_t>(w)] = run[static_cast<size_t>(w)];
            run[static_cast<size_t>(w)] += q.paths(verts[s], w).size();
        }
    }
    return off;
}

template <FieldLike K>
Rep<K> injective_sum(const Quiver& q, const std::vector<int>& verts) {
    Rep<K> s = zero_rep<K>(q);
    for (int v : verts) s = direct_sum(s, injective_rep<K>(q, v));
    return s;
}

/* Auslander-Reiten translate tau X (zero on projectives). */
template <FieldLike K>
Rep<K> tau_plus(const Rep<K>& x) {
    if (x.is_zero_rep()) return x;
    auto pc = projective_cover(x);

    /* kernel of the cover as a subrepresentation of P0 */
    std::vector<Matrix<K>> kspans;
    for (const auto& c : pc.cover.comps) {
        auto kb = kernel_basis(c);
        Matrix<K> m(c.cols(), kb.size());
        for (size_t j = 0; j < kb.size(); ++j)
            for (size_t i = 0; i < c.cols(); ++i) m.at(i, j) = kb[j][i];
        kspans.push_back(std::move(m));
    }
    auto kker = sub_rep_from_spans(pc.proj, kspans);
    if (kker.rep.is_zero_rep()) return zero_rep<K>(x.q); /* X projective */

    /* the kernel of a map between projectives is projective: cover it and
     * require the cover to be an isomorphism */
    auto pk = projective_cover(kker.rep);
    ARQ_CHECK(pk.proj.dims == kker.rep.dims,
              "syzygy of a module over a hereditary algebra must be projective");

    /* h = incl . cover(K) : P1 -> P0; extract path coefficients per summand pair */
    RepMap<K> h;
    for (size_t v = 0; v < pc.cover.comps.size(); ++v)
        h.comps.push_back(kker.incl.comps[v] * pk.cover.comps[v]);

    auto off0 = proj_sum_offsets(x.q, pc.verts);
    auto off1 = proj_sum_offsets(x.q, pk.verts);

    /* nu(P1) -> nu(P0): block (alpha, beta) at vertex v has entry
     * [q: v ~> i_a][r: v ~> j_b] = coefficient c_p of the path p with r = q + p
     * in the path-expansion u_ab of h restricted to the summand pair */
    Rep<K> nu1 = injective_sum<K>(x.q, pk.verts);
    Rep<K> nu0 = injective_sum<K>(x.q, pc.verts);
    /* offsets inside the injective sums */
    auto ioff = [&](const std::vector<int>& verts, int v) {
        std::vector<size_t> off;
        size_t run = 0;
        for (int j : verts) {
            off.push_back(run);
            run += x.q.paths(v, j).size();
        }
        return off;
    };

    std::vector<Matrix<K>> nuh(static_cast<size_t>(x.q.n));
    for (int v = 0; v < x.q.n; ++v) {
        Matrix<K> m(nu0.dim(v), nu1.dim(v));
        auto o0 = ioff(pc.verts, v), o1 = ioff(pk.verts, v);
        for (size_t a = 0; a < pc.verts.size(); ++a) {
            int i = pc.verts[a];
            auto qi = x.q.paths(v, i);
            for (size_t b = 0; b < pk.verts.size(); ++b) {
                int j = pk.verts[b];
                auto qj = x.q.paths(v, j);
                auto pij = x.q.paths(i, j);
                /* u_ab: coefficients of h's column of the trivial path of summand b
                 * at vertex j, rows of summand a's block */
                const Matrix<K>& hj = h.comps[static_cast<size_t>(j)];
                size_t col = off1[b][static_cast<size_t>(j)]; /* empty path sorts first */
                std::vector<K> u(pij.size());
                for (size_t p = 0; p < pij.size(); ++p)
                    u[p] = hj.at(off0[a][static_cast<size_t>(j)] + p, col);
                /* entry [q][r] = c_p where r = q + p */
                for (size_t qq = 0; qq < qi.size(); ++qq)
                    for (size_t p = 0; p < pij.size(); ++p) {
                        std::vector<int> cat = qi[qq];
                        cat.insert(cat.end(), pij[p].begin(), pij[p].end());
                        auto it = std::find(qj.begin(), qj.end(), cat);
                        ARQ_CHECK(it != qj.end(), "path concatenation must land in the basis");
                        size_t rr = static_cast<size_t>(it - qj.begin());
                        m.at(o0[a] + qq, o1[b] + rr) += u[p];
                    }
            }
        }
        nuh[static_cast<size_t>(v)] = std::move(m);
    }
    RepMap<K> nuh_map;
    nuh_map.comps = nuh;
    ARQ_CHECK(nuh_map.intertwines(nu1, nu0), "Nakayama image map must intertwine");

    /* tau X = kernel of nu(h) */
    std::vector<Matrix<K>> tspans;
    for (const auto& c : nuh) {
        auto kb = kernel_basis(c);
        Matrix<K> m(c.cols(), kb.size());
        for (size_t j2 = 0; j2 < kb.size(); ++j2)
            for (size_t i2 = 0; i2 < c.cols(); ++i2) m.at(i2, j2) = kb[j2][i2];
        tspans.push_back(std::move(m));
    }
    return sub_rep_from_spans(nu1, tspans).rep;
}

template <FieldLike K>
Rep<K> tau_minus(const Rep<K>& x) {
    return dual_rep(tau_plus(dual_rep(x)));
}

enum class TauDir { Forward, Inverse };

template <FieldLike K>
Rep<K> ar_translate(const Rep<K>& x, TauDir dir) {
    return dir == TauDir::Forward ? tau_plus(x) : tau_minus(x);
}

} // namespace arq

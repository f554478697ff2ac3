#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "arq/error.hpp"
#include "arq/matrix.hpp"
#include "arq/quiver.hpp"
#include "arq/scalar.hpp"

namespace arq {

/* A representation: one vector space dimension per vertex, one matrix per
 * arrow, with M_a of shape d[tgt] x d[src].  Owns its quiver copy. */
template <FieldLike K>
struct Rep {
    Quiver q;
    DimVec dims;
    std::vector<Matrix<K>> mats; /* parallel to q.arrows */

    Rep() = default;
    Rep(Quiver qq, DimVec dd) : q(std::move(qq)), dims(std::move(dd)) {
        for (const auto& a : q.arrows)
            mats.push_back(Matrix<K>::zero(static_cast<size_t>(dims[static_cast<size_t>(a.tgt)]),
                                           static_cast<size_t>(dims[static_cast<size_t>(a.src)])));
    }

    void validate() const {
        ARQ_REQUIRE(dims.size() == static_cast<size_t>(q.n), "dimension vector length mismatch");
        ARQ_REQUIRE(mats.size() == q.arrows.size(), "arrow matrix count mismatch");
        for (size_t a = 0; a < mats.size(); ++a) {
            ARQ_REQUIRE(mats[a].rows() == static_cast<size_t>(dims[static_cast<size_t>(q.arrows[a].tgt)]) &&
                            mats[a].cols() == static_cast<size_t>(dims[static_cast<size_t>(q.arrows[a].src)]),
                        "arrow matrix shape mismatch at " + q.arrows[a].label);
        }
    }

    size_t dim(int v) const { return static_cast<size_t>(dims[static_cast<size_t>(v)]); }
    long long total_dim() const { return dim_total(dims); }
    bool is_zero_rep() const { return total_dim() == 0; }

    friend bool operator==(const Rep& x, const Rep& y) {
        return x.dims == y.dims && x.mats == y.mats;
    }
};

/* Morphism of representations: one matrix per vertex. */
template <FieldLike K>
struct RepMap {
    std::vector<Matrix<K>> comps; /* comps[v]: X_v -> Y_v */

    static RepMap identity_on(const Rep<K>& x) {
        RepMap f;
        for (int v = 0; v < x.q.n; ++v) f.comps.push_back(Matrix<K>::identity(x.dim(v)));
        return f;
    }
    static RepMap zero_map(const Rep<K>& x, const Rep<K>& y) {
        RepMap f;
        for (int v = 0; v < x.q.n; ++v)
            f.comps.push_back(Matrix<K>::zero(y.dim(v), x.dim(v)));
        return f;
    }

    bool intertwines(const Rep<K>& x, const Rep<K>& y) const {
        for (size_t a = 0; a < x.q.arrows.size(); ++a) {
            int i = x.q.arrows[a].src, j = x.q.arrows[a].tgt;
            if (!(y.mats[a] * comps[static_cast<size_t>(i)] ==
                  comps[static_cast<size_t>(j)] * x.mats[a]))
                return false;
        }
        return true;
    }

    bool is_invertible() const {
        for (const auto& c : comps) {
            if (c.rows() != c.cols()) return false;
            if (!try_inverse(c).has_value()) return false;
        }
        return true;
    }
    bool is_zero() const {
        for (const auto& c : comps)
            if (!c.is_zero_matrix()) return false;
        return true;
    }

    RepMap inverse_map() const {
        RepMap f;
        for (const auto& c : comps) f.comps.push_back(inverse(c));
        return f;
    }

    friend RepMap compose(const RepMap& g, const RepMap& f) { /* g after f */
        RepMap h;
        for (size_t v = 0; v < f.comps.size(); ++v) h.comps.push_back(g.comps[v] * f.comps[v]);
        return h;
    }
    friend RepMap operator+(const RepMap& f, const RepMap& g) {
        RepMap h;
        for (size_t v = 0; v < f.comps.size(); ++v) h.comps.push_back(f.comps[v] + g.comps[v]);
        return h;
    }
    friend RepMap operator*(const K& k, const RepMap& f) {
        RepMap h;
        for (const auto& c : f.comps) h.comps.push_back(k * c);
        return h;
    }
};

/* --- basic constructions --------------------------------------------------------- */

template <FieldLike K>
Rep<K> zero_rep(const Quiver& q) {
    return Rep<K>(q, DimVec(static_cast<size_t>(q.n), 0));
}

template <FieldLike K>
Rep<K> simple_rep(const Quiver& q, int v) {
    DimVec d(static_cast<size_t>(q.n), 0);
    d[static_cast<size_t>(v)] = 1;
    return Rep<K>(q, d);
}

template <FieldLike K>
Rep<K> direct_sum(const Rep<K>& x, const Rep<K>& y) {
    Rep<K> s(x.q, dim_add(x.dims, y.dims));
    for (size_t a = 0; a < s.mats.size(); ++a) s.mats[a] = diag_join(x.mats[a], y.mats[a]);
    return s;
}

/* Indecomposable projective P(i): basis of P(i)_v is the set of paths i ~> v;
 * an arrow acts by appending itself to the path. */
template <FieldLike K>
Rep<K> projective_rep(const Quiver& q, int i) {
    std::vector<std::vector<std::vector<int>>> basis(static_cast<size_t>(q.n));
    DimVec d(static_cast<size_t>(q.n));
    for (int v = 0; v < q.n; ++v) {
        basis[static_cast<size_t>(v)] = q.paths(i, v);
        d[static_cast<size_t>(v)] = static_cast<long long>(basis[static_cast<size_t>(v)].size());
    }
    Rep<K> p(q, d);
    for (size_t a = 0; a < q.arrows.size(); ++a) {
        int s = q.arrows[a].src, t = q.arrows[a].tgt;
        const auto& bs = basis[static_cast<size_t>(s)];
        const auto& bt = basis[static_cast<size_t>(t)];
        for (size_t col = 0; col < bs.size(); ++col) {
            std::vector<int> ext = bs[col];
            ext.push_back(static_cast<int>(a));
            auto it = std::find(bt.begin(), bt.end(), ext);
            ARQ_CHECK(it != bt.end(), "path basis closure failure in projective");
            p.mats[a].at(static_cast<size_t>(it - bt.begin()), col) = field_traits<K>::one();
        }
    }
    return p;
}

/* Indecomposable injective I(i): I(i)_v is the dual of the span of paths v ~> i;
 * the matrix of arrow a: v -> w sends the functional dual to path p (v ~> i) so
 * that column p has a 1 in row q exactly when p = q after a. */
template <FieldLike K>
Rep<K> injective_rep(const Quiver& q, int i) {
    std::vector<std::vector<std::vector<int>>> basis(static_cast<size_t>(q.n));
    DimVec d(static_cast<size_t>(q.n));
    for (int v = 0; v < q.n; ++v) {
        basis[static_cast<size_t>(v)] = q.paths(v, i);
        d[static_cast<size_t>(v)] = static_cast<long long>(basis[static_cast<size_t>(v)].size());
    }
    Rep<K> m(q, d);
    for (size_t a = 0; a < q.arrows.size(); ++a) {
        int v = q.arrows[a].src, w = q.arrows[a].tgt;
        const auto& bv = basis[static_cast<size_t>(v)];
        const auto& bw = basis[static_cast<size_t>(w)];
        for (size_t row = 0; row < bw.size(); ++row) {
            std::vector<int> ext{static_cast<int>(a)};
            ext.insert(ext.end(), bw[row].begin(), bw[row].end());
            auto it = std::find(bv.begin(), bv.end(), ext);
            if (it != bv.end())
                m.mats[a].at(row, static_cast<size_t>(it - bv.begin())) = field_traits<K>::one();
        }
    }
    return m;
}

/* Dual representation over the opposite quiver (transpose all matrices). */
template <FieldLike K>
Rep<K> dual_rep(const Rep<K>& x) {
    Rep<K> d(x.q.opposite(), x.dims);
    for (size_t a = 0; a < x.mats.size(); ++a) d.mats[a] = x.mats[a].transpose();
    return d;
}

/* --- sub / quotient machinery ---------------------------------------------------- */

/* A subrepresentation presented by per-vertex full-column-rank inclusion matrices. */
template <FieldLike K>
struct SubRep {
    Rep<K> rep;       /* the subrepresentation in its own basis */
    RepMap<K> incl;   /* inclusion into the ambient representation */
};

/* Build the subrepresentation spanned by given per-vertex column spans.
 * Requires the span to be arrow-stable; the columns need not be independent. */
template <FieldLike K>
SubRep<K> sub_rep_from_spans(const Rep<K>& x, const std::vector<Matrix<K>>& spans) {
    SubRep<K> s;
    std::vector<Matrix<K>> bases(static_cast<size_t>(x.q.n));
    DimVec d(static_cast<size_t>(x.q.n));
    for (int v = 0; v < x.q.n; ++v) {
        /* column-reduce the span to an independent basis */
        Matrix<K> tr = spans[static_cast<size_t>(v)].transpose();
        auto pivots = rref_inplace(tr);
        Matrix<K> b(x.dim(v), pivots.size());
        for (size_t r = 0; r < pivots.size(); ++r)
            for (size_t c = 0; c < x.dim(v); ++c) b.at(c, r) = tr.at(r, c);
        bases[static_cast<size_t>(v)] = b;
        d[static_cast<size_t>(v)] = static_cast<long long>(pivots.size());
    }
    s.rep = Rep<K>(x.q, d);
    s.incl.comps = bases;
    for (size_t a = 0; a < x.q.arrows.size(); ++a) {
        int i = x.q.arrows[a].src, j = x.q.arrows[a].tgt;
        const Matrix<K>& bi = bases[static_cast<size_t>(i)];
        const Matrix<K>& bj = bases[static_cast<size_t>(j)];
        /* solve B_j * U = X_a * B_i column by column */
        Matrix<K> rhs = x.mats[a] * bi;
        Matrix<K> u(bj.cols(), bi.cols());
        for (size_t c = 0; c < bi.cols(); ++c) {
            auto sol = solve_linear(bj, rhs.col(c));
            ARQ_REQUIRE(sol.consistent, "span is not arrow-stable: not a subrepresentation");
            for (size_t r = 0; r < bj.cols(); ++r) u.at(r, c) = sol.particular[r];
        }
        s.rep.mats[a] = u;
    }
    ARQ_CHECK(s.incl.intertwines(s.rep, x), "subrepresentation inclusion must intertwine");
    return s;
}

/* A quotient presented by per-vertex projection matrices. */
template <FieldLike K>
struct QuotRep {
    Rep<K> rep;
    RepMap<K> proj; /* surjection from the ambient representation */
};

/* Quotient of x by the image of a subrepresentation inclusion. */
template <FieldLike K>
QuotRep<K> quotient_rep(const Rep<K>& x, const RepMap<K>& incl) {
    QuotRep<K> qt;
    const int n = x.q.n;
    std::vector<Matrix<K>> projs(static_cast<size_t>(n)), secs(static_cast<size_t>(n));
    DimVec d(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) {
        const Matrix<K>& b = incl.comps[static_cast<size_t>(v)];
        const size_t nv = x.dim(v), k = b.cols();
        /* complete the subspace basis to a basis of X_v: scan unit vectors */
        Matrix<K> full(nv, nv);
        full.set_block(0, 0, b);
        size_t have = k;
        for (size_t e = 0; e < nv && have < nv; ++e) {
            Matrix<K> cand = full.block(0, 0, nv, have + 1);
            for (size_t r = 0; r < nv; ++r)
                cand.at(r, have) = (r == e) ? field_traits<K>::one() : field_traits<K>::zero();
            if (rank(cand.transpose()) == have + 1) {
                for (size_t r = 0; r < nv; ++r) full.at(r, have) = cand.at(r, have);
                ++have;
            }
        }
        ARQ_CHECK(have == nv, "failed to complete basis for quotient");
        Matrix<K> inv = inverse(full);
        /* projection = last nv-k rows of the inverse; section = last nv-k columns */
        projs[static_cast<size_t>(v)] = inv.block(k, 0, nv - k, nv);
        secs[static_cast<size_t>(v)] = full.block(0, k, nv, nv - k);
        d[static_cast<size_t>(v)] = static_cast<long long>(nv - k);
    }
    qt.rep = Rep<K>(x.q, d);
    for (size_t a = 0; a < x.q.arrows.size(); ++a) {
        int i = x.q.arrows[a].src, j = x.q.arrows[a].tgt;
        qt.rep.mats[a] = projs[static_cast<size_t>(j)] * x.mats[a] * secs[static_cast<size_t>(i)];
    }
    qt.proj.comps = projs;
    ARQ_CHECK(qt.proj.intertwines(x, qt.rep), "quotient projection must intertwine");
    return qt;
}

/* Radical submodule: rad(X)_v = sum over arrows a: i -> v of the image of X_a. */
template <FieldLike K>
SubRep<K> radical_sub(const Rep<K>& x) {
    std::vector<Matrix<K>> spans;
    for (int v = 0; v < x.q.n; ++v) {
        Matrix<K> sp(x.dim(v), 0);
        for (size_t a = 0; a < x.q.arrows.size(); ++a)
            if (x.q.arrows[a].tgt == v) sp = hstack(sp, x.mats[a]);
        spans.push_back(std::move(sp));
    }
    return sub_rep_from_spans(x, spans);
}

/* dimensions of top(X) = X / rad(X), vertex by vertex */
template <FieldLike K>
DimVec top_dims(const Rep<K>& x) {
    auto r = radical_sub(x);
    return dim_sub(x.dims, r.rep.dims);
}

/* --- Hom and Ext ----------------------------------------------------------------- */

/* Basis of the intertwiner space Hom(X, Y), deterministic order.  The linear
 * system stacks, for each arrow a: i -> j, the equations Y_a f_i - f_j X_a = 0
 * in the unknowns (f_v)_{entries}. */
template <FieldLike K>
std::vector<RepMap<K>> hom_space(const Rep<K>& x, const Rep<K>& y) {
    const int n = x.q.n;
    std::vector<size_t> offset(static_cast<size_t>(n) + 1, 0);
    for (int v = 0; v < n; ++v)
        offset[static_cast<size_t>(v) + 1] =
            offset[static_cast<size_t>(v)] + y.dim(v) * x.dim(v);
    const size_t unknowns = offset[static_cast<size_t>(n)];
    size_t eqs = 0;
    for (size_t a = 0; a < x.q.arrows.size(); ++a)
        eqs += y.dim(x.q.arrows[a].tgt) * x.dim(x.q.arrows[a].src);

    Matrix<K> sys(eqs, unknowns);
    size_t row = 0;
    for (size_t a = 0; a < x.q.arrows.size(); ++a) {
        const int i = x.q.arrows[a].src, j = x.q.arrows[a].tgt;
        const size_t di = x.dim(i), dj = x.dim(j), ei = y.dim(i), ej = y.dim(j);
        /* unknown f_i is ei x di at offset[i] (row-major); f_j is ej x dj */
        for (size_t r = 0; r < ej; ++r)
            for (size_t c = 0; c < di; ++c) {
                /* (Y_a f_i)[r][c] = sum_s Y_a[r][s] f_i[s][c] */
                for (size_t s = 0; s < ei; ++s)
                    sys.at(row, offset[static_cast<size_t>(i)] + s * di + c) += y.mats[a].at(r, s);
                /* -(f_j X_a)[r][c] = -sum_s f_j[r][s] X_a[s][c] */
                for (size_t s = 0; s < dj; ++s)
                    sys.at(row, offset[static_cast<size_t>(j)] + r * dj + s) -= x.mats[a].at(s, c);
                ++row;
            }
    }
    auto ker = kernel_basis(std::move(sys));
    std::vector<RepMap<K>> basis;
    for (const auto& vec : ker) {
        RepMap<K> f;
        for (int v = 0; v < n; ++v) {
            Matrix<K> m(y.dim(v), x.dim(v));
            for (size_t r = 0; r < y.dim(v); ++r)
                for (size_t c = 0; c < x.dim(v); ++c)
                    m.at(r, c) = vec[offset[static_cast<size_t>(v)] + r * x.dim(v) + c];
            f.comps.push_back(std::move(m));
        }
        ARQ_CHECK(f.intertwines(x, y), "hom_space produced a non-intertwiner");
        basis.push_back(std::move(f));
    }
    return basis;
}

template <FieldLike K>
size_t hom_dim(const Rep<K>& x, const Rep<K>& y) {
    /* rank-based count, avoids materializing the basis */
    const int n = x.q.n;
    size_t unknowns = 0;
    for (int v = 0; v < n; ++v) unknowns += y.dim(v) * x.dim(v);
    std::vector<size_t> offset(static_cast<size_t>(n) + 1, 0);
    for (int v = 0; v < n; ++v)
        offset[static_cast<size_t>(v) + 1] = offset[static_cast<size_t>(v)] + y.dim(v) * x.dim(v);
    size_t eqs = 0;
    for (size_t a = 0; a < x.q.arrows.size(); ++a)
        eqs += y.dim(x.q.arrows[a].tgt) * x.dim(x.q.arrows[a].src);
    Matrix<K> sys(eqs, unknowns);
    size_t row = 0;
    for (size_t a = 0; a < x.q.arrows.size(); ++a) {
        const int i = x.q.arrows[a].src, j = x.q.arrows[a].tgt;
        const size_t di = x.dim(i), dj = x.dim(j), ei = y.dim(i), ej = y.dim(j);
        for (size_t r = 0; r < ej; ++r)
            for (size_t c = 0; c < di; ++c) {
                for (size_t s = 0; s < ei; ++s)
                    sys.at(row, offset[static_cast<size_t>(i)] + s * di + c) += y.mats[a].at(r, s);
                for (size_t s = 0; s < dj; ++s)
                    sys.at(row, offset[static_cast<size_t>(j)] + r * dj + s) -= x.mats[a].at(s, c);
                ++row;
            }
    }
    return unknowns - rank(std::move(sys));
}

/* dim Ext^1 via the hereditary Euler characteristic */
template <FieldLike K>
size_t ext1_dim(const Rep<K>& x, const Rep<K>& y) {
    long long e = static_cast<long long>(hom_dim(x, y)) - euler_form(x.q, x.dims, y.dims);
    ARQ_CHECK(e >= 0, "negative Ext dimension");
    return static_cast<size_t>(e);
}

/* X lies in gen(M) iff the trace of M in X (sum of images of all morphisms
 * M -> X) is all of X. */
template <FieldLike K>
bool gen_membership(const Rep<K>& m, const Rep<K>& x) {
    if (x.is_zero_rep()) return true;
    auto hom = hom_space(m, x);
    for (int v = 0; v < x.q.n; ++v) {
        if (x.dim(v) == 0) continue;
        Matrix<K> sp(x.dim(v), 0);
        for (const auto& f : hom) sp = hstack(sp, f.comps[static_cast<size_t>(v)]);
        if (rank(sp.transpose()) < x.dim(v)) return false;
    }
    return true;
}

} // namespace arq

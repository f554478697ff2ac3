/* ------------------------------------------------------------------------- */
/* Extensions of representations through explicit cocycles.                  */
/*                                                                           */
/* A cocycle for the pair (Y, X) assigns to each arrow a : u -> v a matrix   */
/* zeta_a in Hom(Y_u, X_v).  It determines a middle term E with             */
/* E_v = X_v (+) Y_v and E_a = [[X_a, zeta_a], [0, Y_a]], an exact sequence  */
/* 0 -> X -> E -> Y -> 0.  Coboundaries are the cocycles                     */
/* (d phi)_a = X_a phi_u - phi_v Y_a for vertexwise phi_v in Hom(Y_v, X_v);  */
/* they give split middles, and Ext^1(Y, X) is cocycles mod coboundaries.    */
/* ------------------------------------------------------------------------- */
#pragma once

#include <cstddef>
#include <vector>

#include "arq/error.hpp"
#include "arq/matrix.hpp"
#include "arq/rep.hpp"

namespace arq {

template <FieldLike K>
struct Cocycle {
    std::vector<Matrix<K>> per_arrow; /* indexed like quiver arrows */
};

/* flat coordinates of the cocycle space: per arrow, row-major entries of
 * Hom(Y_src, X_tgt), arrows in declaration order */
template <FieldLike K>
std::size_t cocycle_dim(const Rep<K>& y, const Rep<K>& x) {
    std::size_t z = 0;
    for (std::size_t a = 0; a < x.q.arrows.size(); ++a)
        z += static_cast<std::size_t>(x.dims[x.q.arrows[a].tgt]) *
             static_cast<std::size_t>(y.dims[y.q.arrows[a].src]);
    return z;
}

template <FieldLike K>
Cocycle<K> cocycle_from_vector(const Rep<K>& y, const Rep<K>& x, const std::vector<K>& v) {
    Cocycle<K> z;
    std::size_t off = 0;
    for (std::size_t a = 0; a < x.q.arrows.size(); ++a) {
        std::size_t rows = static_cast<std::size_t>(x.dims[x.q.arrows[a].tgt]);
        std::size_t cols = static_cast<std::size_t>(y.dims[y.q.arrows[a].src]);
        Matrix<K> m(rows, cols);
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) m.at(r, c) = v[off + r * cols + c];
        off += rows * cols;
        z.per_arrow.push_back(std::move(m));
    }
    ARQ_CHECK(off == v.size(), "cocycle vector length mismatch");
    return z;
}

/* the coboundary matrix: columns indexed by vertexwise phi entries
 * (row-major per vertex, vertices ascending), rows by cocycle coordinates */
template <FieldLike K>
Matrix<K> coboundary_matrix(const Rep<K>& y, const Rep<K>& x) {
    const Quiver& q = x.q;
    std::vector<std::size_t> voff(q.n + 1, 0);
    for (int v = 0; v < q.n; ++v)
        voff[v + 1] = voff[v] + static_cast<std::size_t>(x.dims[v]) * static_cast<std::size_t>(y.dims[v]);
    Matrix<K> d(cocycle_dim(y, x), voff[q.n]);
    std::size_t zoff = 0;
    for (std::size_t a = 0; a < q.arrows.size(); ++a) {
        const int u = q.arrows[a].src, w = q.arrows[a].tgt;
        const std::size_t rows = static_cast<std::size_t>(x.dims[w]);
        const std::size_t cols = static_cast<std::size_t>(y.dims[u]);
        const std::size_t yu = cols, yw = static_cast<std::size_t>(y.dims[w]);
        const std::size_t xu = static_cast<std::size_t>(x.dims[u]);
        /* (d phi)_a [r][c] = sum_m X_a[r][m] phi_u[m][c] - sum_m phi_w[r][m] Y_a[m][c] */
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) {
                const std::size_t zrow = zoff + r * cols + c;
                for (std::size_t m = 0; m < xu; ++m)
                    d.at(zrow, voff[u] + m * yu + c) = d.at(zrow, voff[u] + m * yu + c) + x.mats[a].at(r, m);
                for (std::size_t m = 0; m < yw; ++m)
                    d.at(zrow, voff[w] + r * yw + m) = d.at(zrow, voff[w] + r * yw + m) - y.mats[a].at(m, c);
            }
        zoff += rows * cols;
    }
    return d;
}

/* echelon coordinate basis of Ext^1(Y, X): the standard basis vectors at the
 * lexicographically first cocycle coordinates that complement the coboundary
 * image (pivot coordinates of its column space) */
template <FieldLike K>
std::vector<Cocycle<K>> ext1_cocycle_basis(const Rep<K>& y, const Rep<K>& x) {
    Matrix<K> d = coboundary_matrix(y, x);
    Matrix<K> dt = d.transpose();
    std::vector<std::size_t> pivots = rref_inplace(dt);
    std::vector<bool> is_pivot(d.rows(), false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<Cocycle<K>> basis;
    for (std::size_t j = 0; j < d.rows(); ++j) {
        if (is_pivot[j]) continue;
        std::vector<K> v(d.rows(), field_traits<K>::zero());
        v[j] = field_traits<K>::one();
        basis.push_back(cocycle_from_vector(y, x, v));
    }
    return basis;
}

/* middle term of the extension determined by a cocycle, with the inclusion
 * of X and the projection onto Y */
template <FieldLike K>
struct ExtMiddle {
    Rep<K> total;
    RepMap<K> incl; /* X -> total */
    RepMap<K> proj; /* total -> Y */
};

template <FieldLike K>
ExtMiddle<K> ext_middle(const Rep<K>& y, const Rep<K>& x, const Cocycle<K>& z) {
    const Quiver& q = x.q;
    Rep<K> e;
    e.q = q;
    e.dims.resize(q.n);
    for (int v = 0; v < q.n; ++v) e.dims[v] = x.dims[v] + y.dims[v];
    for (std::size_t a = 0; a < q.arrows.size(); ++a) {
        const int u = q.arrows[a].src, w = q.arrows[a].tgt;
        Matrix<K> m(static_cast<std::size_t>(e.dims[w]), static_cast<std::size_t>(e.dims[u]));
        m.set_block(0, 0, x.mats[a]);
        m.set_block(0, static_cast<std::size_t>(x.dims[u]), z.per_arrow[a]);
        m.set_block(static_cast<std::size_t>(x.dims[w]), static_cast<std::size_t>(x.dims[u]), y.mats[a]);
        e.mats.push_back(std::move(m));
    }
    e.validate();
    ExtMiddle<K> out{std::move(e), RepMap<K>{}, RepMap<K>{}};
    out.incl.comps.resize(q.n);
    out.proj.comps.resize(q.n);
    for (int v = 0; v < q.n; ++v) {
        const std::size_t xd = static_cast<std::size_t>(x.dims[v]);
        const std::size_t yd = static_cast<std::size_t>(y.dims[v]);
        Matrix<K> inc(xd + yd, xd);
        inc.set_block(0, 0, Matrix<K>::identity(xd));
        Matrix<K> prj(yd, xd + yd);
        prj.set_block(0, xd, Matrix<K>::identity(yd));
        out.incl.comps[v] = std::move(inc);
        out.proj.comps[v] = std::move(prj);
    }
    ARQ_CHECK(out.incl.intertwines(x, out.total), "extension inclusion must intertwine");
    ARQ_CHECK(out.proj.intertwines(out.total, y), "extension projection must intertwine");
    return out;
}

}  // namespace arq

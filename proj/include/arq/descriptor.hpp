/* ------------------------------------------------------------------------- */
/* Symbolic names for indecomposable representations.                        */
/*                                                                           */
/*   PP(v,k)      the k-th inverse-translate of the projective at vertex v   */
/*   PI(v,k)      the k-th translate of the injective at vertex v            */
/*   Reg(t,i,l)   the module in tube t whose regular socle is the i-th       */
/*                simple of the tube, of regular length l                    */
/*   HomReg(p,l)  the homogeneous module of regular length l at the closed   */
/*                point p (`inf` or a monic polynomial label)                */
/*                                                                           */
/* Serialized form: vertex and tube are printed 1-based, the shift k and    */
/* the ray index are 0-based, lengths are >= 1.  Point labels follow the     */
/* polynomial grammar of format.hpp.                                         */
/* ------------------------------------------------------------------------- */
#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "arq/error.hpp"
#include "arq/format.hpp"

namespace arq {

enum class DescKind { PP, Reg, HomReg, PI };

struct IndecDescriptor {
    DescKind kind = DescKind::PP;
    int vertex = 0;      /* 0-based; PP/PI */
    long long shift = 0; /* k >= 0; PP/PI */
    int tube = 0;        /* 0-based; Reg */
    int ray = 0;         /* 0-based; Reg */
    long long len = 1;   /* >= 1; Reg/HomReg */
    std::string point;   /* canonical label; HomReg */

    static IndecDescriptor pp(int v, long long k) {
        IndecDescriptor d;
        d.kind = DescKind::PP;
        d.vertex = v;
        d.shift = k;
        return d;
    }
    static IndecDescriptor pi(int v, long long k) {
        IndecDescriptor d;
        d.kind = DescKind::PI;
        d.vertex = v;
        d.shift = k;
        return d;
    }
    static IndecDescriptor reg(int t, int i, long long l) {
        IndecDescriptor d;
        d.kind = DescKind::Reg;
        d.tube = t;
        d.ray = i;
        d.len = l;
        return d;
    }
    static IndecDescriptor homreg(std::string p, long long l) {
        IndecDescriptor d;
        d.kind = DescKind::HomReg;
        d.point = std::move(p);
        d.len = l;
        return d;
    }

    std::string str() const {
        switch (kind) {
            case DescKind::PP:
                return "PP(" + std::to_string(vertex + 1) + "," + std::to_string(shift) + ")";
            case DescKind::PI:
                return "PI(" + std::to_string(vertex + 1) + "," + std::to_string(shift) + ")";
            case DescKind::Reg:
                return "Reg(" + std::to_string(tube + 1) + "," + std::to_string(ray) + "," +
                       std::to_string(len) + ")";
            case DescKind::HomReg:
                return "HomReg(" + point + "," + std::to_string(len) + ")";
        }
        return "";
    }

    bool operator==(const IndecDescriptor&) const = default;
};

/* display order: preprojectives, then tube modules, then homogeneous
 * modules, then preinjectives */
inline bool desc_less(const IndecDescriptor& a, const IndecDescriptor& b) {
    auto key = [](const IndecDescriptor& d) {
        switch (d.kind) {
            case DescKind::PP: return 0;
            case DescKind::Reg: return 1;
            case DescKind::HomReg: return 2;
            case DescKind::PI: return 3;
        }
        return 4;
    };
    if (key(a) != key(b)) return key(a) < key(b);
    switch (a.kind) {
        case DescKind::PP:
        case DescKind::PI:
            return std::tie(a.shift, a.vertex) < std::tie(b.shift, b.vertex);
        case DescKind::Reg:
            return std::tie(a.tube, a.ray, a.len) < std::tie(b.tube, b.ray, b.len);
        case DescKind::HomReg:
            return std::tie(a.point, a.len) < std::tie(b.point, b.len);
    }
    return false;
}

/* split at top-level commas (parentheses nest) */
inline std::vector<std::string> split_args(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    int depth = 0;
    for (char c : s) {
        if (c == '(') ++depth;
        else if (c == ')') --depth;
        if (c == ',' && depth == 0) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

/* Field-free parse: point labels are kept verbatim.  Use parse_descriptor<K>
 * when the coefficient field is known so labels can be brought to canonical
 * polynomial form. */
inline IndecDescriptor parse_descriptor_raw(const std::string& text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    auto open = s.find('(');
    if (open == std::string::npos || s.empty() || s.back() != ')')
        throw parse_error("malformed descriptor: " + text);
    std::string head = s.substr(0, open);
    auto args = split_args(s.substr(open + 1, s.size() - open - 2));
    if (head == "PP" || head == "PI") {
        if (args.size() != 2) throw parse_error(head + " descriptor takes (vertex,shift): " + text);
        long long v = parse_int_str(args[0]);
        long long k = parse_int_str(args[1]);
        if (v < 1) throw parse_error("descriptor vertex is 1-based: " + text);
        if (k < 0) throw parse_error("descriptor shift must be >= 0: " + text);
        return head == "PP" ? IndecDescriptor::pp(static_cast<int>(v - 1), k)
                            : IndecDescriptor::pi(static_cast<int>(v - 1), k);
    }
    if (head == "Reg") {
        if (args.size() != 3) throw parse_error("Reg descriptor takes (tube,ray,length): " + text);
        long long t = parse_int_str(args[0]);
        long long i = parse_int_str(args[1]);
        long long l = parse_int_str(args[2]);
        if (t < 1) throw parse_error("descriptor tube is 1-based: " + text);
        if (i < 0) throw parse_error("descriptor ray index must be >= 0: " + text);
        if (l < 1) throw parse_error("descriptor length must be >= 1: " + text);
        return IndecDescriptor::reg(static_cast<int>(t - 1), static_cast<int>(i), l);
    }
    if (head == "HomReg") {
        if (args.size() != 2) throw parse_error("HomReg descriptor takes (point,length): " + text);
        long long l = parse_int_str(args[1]);
        if (l < 1) throw parse_error("descriptor length must be >= 1: " + text);
        return IndecDescriptor::homreg(args[0], l);
    }
    throw parse_error("unknown descriptor head '" + head + "'");
}

template <FieldLike K>
IndecDescriptor parse_descriptor(const std::string& text) {
    IndecDescriptor d = parse_descriptor_raw(text);
    if (d.kind == DescKind::HomReg) d.point = canonical_point<K>(d.point);
    return d;
}

}  // namespace arq

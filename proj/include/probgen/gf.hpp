#pragma once

#include <algorithm>
#include <cstdint>
#include <vector>

#include <probgen/error.hpp>
#include <probgen/perm.hpp>

namespace probgen {

// GF(q) for prime powers q <= 9, represented as polynomial residues modulo a
// fixed primitive polynomial. An element value v in 0..q-1 encodes the
// coefficient vector of the residue in base p: v = sum c_i p^i. The residue
// class of x (value p) is the stored primitive element for proper prime
// powers; for prime fields the least primitive root is used instead.
class Field {
public:
    explicit Field(unsigned q) : q_(q) {
        switch (q) {
            case 2: p_ = 2; deg_ = 1; primitive_ = 1; break;
            case 3: p_ = 3; deg_ = 1; primitive_ = 2; break;
            case 4: p_ = 2; deg_ = 2; primitive_ = 2; modulus_ = {1, 1}; break;
            case 5: p_ = 5; deg_ = 1; primitive_ = 2; break;
            case 7: p_ = 7; deg_ = 1; primitive_ = 3; break;
            case 8: p_ = 2; deg_ = 3; primitive_ = 2; modulus_ = {1, 1, 0}; break;
            case 9: p_ = 3; deg_ = 2; primitive_ = 3; modulus_ = {2, 2}; break;
            default: user_error("unsupported field size " + std::to_string(q));
        }
        mul_.assign(q_ * q_, 0);
        for (unsigned a = 0; a < q_; ++a)
            for (unsigned b = 0; b < q_; ++b)
                mul_[a * q_ + b] = mul_slow(a, b);
        // discrete logs of the primitive element; exp_[q-1] wraps to 1 so the
        // catalog's exponent codes 1..q-1 cover every nonzero element
        exp_.assign(q_, 1);
        log_.assign(q_, 0);
        unsigned acc = 1;
        for (unsigned e = 1; e <= q_ - 1; ++e) {
            acc = mul(acc, primitive_);
            exp_[e] = acc;
            if (log_[acc] == 0) log_[acc] = e;
        }
        check_internal(exp_[q_ - 1] == 1, "stored element is not primitive");
    }

    unsigned size() const { return q_; }
    unsigned characteristic() const { return p_; }
    unsigned primitive() const { return primitive_; }

    unsigned add(unsigned a, unsigned b) const {
        unsigned r = 0, mult = 1;
        for (unsigned i = 0; i < deg_; ++i) {
            r += ((a % p_ + b % p_) % p_) * mult;
            a /= p_;
            b /= p_;
            mult *= p_;
        }
        return r;
    }

    unsigned neg(unsigned a) const {
        unsigned r = 0, mult = 1;
        for (unsigned i = 0; i < deg_; ++i) {
            r += ((p_ - a % p_) % p_) * mult;
            a /= p_;
            mult *= p_;
        }
        return r;
    }

    unsigned mul(unsigned a, unsigned b) const { return mul_[a * q_ + b]; }

    unsigned inv(unsigned a) const {
        check_internal(a != 0 && a < q_, "inverse of zero");
        if (a == 1) return 1;
        return exp_[q_ - 1 - log_[a]];
    }

    unsigned pow(unsigned a, std::uint64_t e) const {
        unsigned r = 1;
        for (; e; e >>= 1) {
            if (e & 1) r = mul(r, a);
            a = mul(a, a);
        }
        return r;
    }

    // catalog encoding: code 0 is the zero element, code k in 1..q-1 is the
    // k-th power of the primitive element (so code q-1 is the identity)
    unsigned from_exponent_code(unsigned code) const {
        if (code == 0) return 0;
        if (code > q_ - 1) user_error("field exponent code out of range");
        return exp_[code];
    }

    unsigned exponent_code(unsigned a) const {
        if (a == 0) return 0;
        check_internal(a < q_, "field element out of range");
        return a == 1 ? q_ - 1 : log_[a];
    }

private:
    // schoolbook product of residue polynomials followed by reduction
    unsigned mul_slow(unsigned a, unsigned b) const {
        std::vector<unsigned> ca(deg_), cb(deg_), prod(2 * deg_, 0);
        for (unsigned i = 0; i < deg_; ++i, a /= p_) ca[i] = a % p_;
        for (unsigned i = 0; i < deg_; ++i, b /= p_) cb[i] = b % p_;
        for (unsigned i = 0; i < deg_; ++i)
            for (unsigned j = 0; j < deg_; ++j)
                prod[i + j] = (prod[i + j] + ca[i] * cb[j]) % p_;
        // x^deg = -(modulus_), applied from the top coefficient down
        for (unsigned d = 2 * deg_ - 1; d >= deg_ && d < 2 * deg_; --d) {
            unsigned c = prod[d];
            if (c == 0) continue;
            prod[d] = 0;
            for (unsigned i = 0; i < deg_; ++i)
                prod[d - deg_ + i] =
                    (prod[d - deg_ + i] + c * (p_ - modulus_[i])) % p_;
        }
        unsigned r = 0, mult = 1;
        for (unsigned i = 0; i < deg_; ++i, mult *= p_) r += prod[i] * mult;
        return r;
    }

    unsigned q_, p_, deg_, primitive_;
    std::vector<unsigned> modulus_; // low-degree coefficients of the monic modulus
    std::vector<unsigned> mul_, exp_, log_;
};

// shared immutable instances; q has already been validated by the ctor
inline const Field& gf(unsigned q) {
    static const Field f2(2), f3(3), f4(4), f5(5), f7(7), f8(8), f9(9);
    switch (q) {
        case 2: return f2;
        case 3: return f3;
        case 4: return f4;
        case 5: return f5;
        case 7: return f7;
        case 8: return f8;
        case 9: return f9;
        default: user_error("unsupported field size " + std::to_string(q));
    }
}

// square matrix over GF(q), dimension <= 8, row-major
class Matrix {
public:
    Matrix(unsigned q, unsigned dim) : q_(q), dim_(dim), a_(dim * dim, 0) {
        if (dim == 0 || dim > 8) user_error("matrix dimension out of range");
    }

    static Matrix identity(unsigned q, unsigned dim) {
        Matrix m(q, dim);
        for (unsigned i = 0; i < dim; ++i) m.at(i, i) = 1;
        return m;
    }

    unsigned dim() const { return dim_; }
    unsigned field_size() const { return q_; }
    unsigned& at(unsigned r, unsigned c) { return a_[r * dim_ + c]; }
    unsigned at(unsigned r, unsigned c) const { return a_[r * dim_ + c]; }

    Matrix operator*(const Matrix& o) const {
        const Field& F = gf(q_);
        Matrix r(q_, dim_);
        for (unsigned i = 0; i < dim_; ++i)
            for (unsigned k = 0; k < dim_; ++k) {
                unsigned aik = at(i, k);
                if (aik == 0) continue;
                for (unsigned j = 0; j < dim_; ++j)
                    r.at(i, j) = F.add(r.at(i, j), F.mul(aik, o.at(k, j)));
            }
        return r;
    }

    bool operator==(const Matrix& o) const {
        return q_ == o.q_ && dim_ == o.dim_ && a_ == o.a_;
    }

    bool invertible() const { return try_inverse(nullptr); }

    Matrix inverse() const {
        Matrix inv = identity(q_, dim_);
        if (!try_inverse(&inv)) user_error("singular matrix");
        return inv;
    }

private:
    // Gauss-Jordan over the field; writes the inverse into *out when asked
    bool try_inverse(Matrix* out) const {
        const Field& F = gf(q_);
        Matrix work = *this;
        Matrix acc = identity(q_, dim_);
        for (unsigned col = 0; col < dim_; ++col) {
            unsigned pivot = dim_;
            for (unsigned r = col; r < dim_; ++r)
                if (work.at(r, col) != 0) { pivot = r; break; }
            if (pivot == dim_) return false;
            for (unsigned j = 0; j < dim_; ++j) {
                std::swap(work.at(col, j), work.at(pivot, j));
                std::swap(acc.at(col, j), acc.at(pivot, j));
            }
            unsigned scale = F.inv(work.at(col, col));
            for (unsigned j = 0; j < dim_; ++j) {
                work.at(col, j) = F.mul(work.at(col, j), scale);
                acc.at(col, j) = F.mul(acc.at(col, j), scale);
            }
            for (unsigned r = 0; r < dim_; ++r) {
                if (r == col) continue;
                unsigned f = work.at(r, col);
                if (f == 0) continue;
                unsigned nf = F.neg(f);
                for (unsigned j = 0; j < dim_; ++j) {
                    work.at(r, j) = F.add(work.at(r, j), F.mul(nf, work.at(col, j)));
                    acc.at(r, j) = F.add(acc.at(r, j), F.mul(nf, acc.at(col, j)));
                }
            }
        }
        if (out) *out = acc;
        return true;
    }

    unsigned q_, dim_;
    std::vector<unsigned> a_;
};

// projective points of F_q^d: one vector per 1-space, scaled so the first
// nonzero coordinate is 1, listed in lexicographic coordinate order; this
// fixed ordering is what makes catalog-built permutations reproducible
inline std::vector<std::vector<unsigned>> projective_points(unsigned q,
                                                            unsigned dim) {
    std::vector<std::vector<unsigned>> pts;
    std::vector<unsigned> v(dim, 0);
    while (true) {
        unsigned lead = dim;
        for (unsigned i = 0; i < dim; ++i)
            if (v[i] != 0) { lead = i; break; }
        if (lead < dim && v[lead] == 1) pts.push_back(v);
        unsigned i = dim;
        while (i > 0 && v[i - 1] == q - 1) v[--i] = 0;
        if (i == 0) break;
        ++v[i - 1];
    }
    return pts;
}

inline std::vector<unsigned> normalize_projective(const Field& F,
                                                  std::vector<unsigned> v) {
    unsigned lead = static_cast<unsigned>(v.size());
    for (unsigned i = 0; i < v.size(); ++i)
        if (v[i] != 0) { lead = i; break; }
    check_internal(lead < v.size(), "projective image of the zero vector");
    unsigned scale = F.inv(v[lead]);
    for (unsigned& c : v) c = F.mul(c, scale);
    return v;
}

// right action of M on row vectors, v -> v*M, transported to point indices
inline Permutation projective_permutation(
    const Matrix& M, const std::vector<std::vector<unsigned>>& pts) {
    const Field& F = gf(M.field_size());
    if (!M.invertible()) user_error("singular matrix");
    unsigned dim = M.dim();
    std::vector<Point> img(pts.size());
    for (std::size_t idx = 0; idx < pts.size(); ++idx) {
        std::vector<unsigned> w(dim, 0);
        for (unsigned i = 0; i < dim; ++i) {
            unsigned vi = pts[idx][i];
            if (vi == 0) continue;
            for (unsigned j = 0; j < dim; ++j)
                w[j] = F.add(w[j], F.mul(vi, M.at(i, j)));
        }
        w = normalize_projective(F, std::move(w));
        auto it = std::lower_bound(pts.begin(), pts.end(), w);
        check_internal(it != pts.end() && *it == w,
                       "projective image escapes the point list");
        img[idx] = static_cast<Point>(it - pts.begin());
    }
    return Permutation(std::move(img));
}

} // namespace probgen

#pragma once

#include "orbitlin/echelon.hpp"
#include "orbitlin/fields.hpp"

namespace orbitlin {

// Field-ops adapter so the echelon machinery can run over runtime fields.
struct ScalarOps {
    Field f;
    using value_type = Scalar;
    Scalar zero() const { return f.zero(); }
    Scalar one() const { return f.one(); }
    bool is_zero(const Scalar& a) const { return f.is_zero(a); }
    Scalar add(const Scalar& a, const Scalar& b) const { return f.add(a, b); }
    Scalar sub(const Scalar& a, const Scalar& b) const { return f.sub(a, b); }
    Scalar mul(const Scalar& a, const Scalar& b) const { return f.mul(a, b); }
    Scalar inv(const Scalar& a) const { return f.inv(a); }
};

using ScalarRowSpace = RowSpaceT<ScalarOps>;

inline ScalarRowSpace make_row_space(const Field& f, size_t n) {
    return ScalarRowSpace(ScalarOps{f}, n);
}

// A subspace E of F^n in reduced echelon form; the coefficient domain of
// Lin_E vectors.
struct CoeffSpace {
    size_t n = 1;
    ScalarRowSpace basis;

    static CoeffSpace full(const Field& f, size_t n) {
        CoeffSpace e;
        e.n = n;
        e.basis = make_row_space(f, n);
        for (size_t i = 0; i < n; ++i) {
            Coeff row(n, f.zero());
            row[i] = f.one();
            e.basis.insert(row);
        }
        return e;
    }
    static CoeffSpace span(const Field& f, size_t n, const std::vector<Coeff>& gens) {
        CoeffSpace e;
        e.n = n;
        e.basis = make_row_space(f, n);
        for (const auto& g : gens) e.basis.insert(g);
        return e;
    }
    bool contains(const Coeff& c) const { return basis.contains(c); }
};

}  // namespace orbitlin

#pragma once

#include <cassert>
#include <cstddef>
#include <optional>
#include <vector>

namespace orbitlin {

// Reduced-echelon basis of a subspace of F^n, maintained incrementally.
// Canonical: pivots strictly increasing, pivot entries 1, pivot columns
// cleared elsewhere. Two equal subspaces produce identical row lists.
//
// Fd supplies the scalar type and arithmetic:
//   value_type, zero(), one(), is_zero(v), add, sub, mul, inv.
template <class Fd>
class RowSpaceT {
public:
    using V = typename Fd::value_type;
    using Row = std::vector<V>;

    RowSpaceT() = default;
    RowSpaceT(Fd f, size_t n) : f_(f), n_(n) {}

    size_t ambient_dim() const { return n_; }
    size_t dim() const { return rows_.size(); }
    const std::vector<Row>& rows() const { return rows_; }
    const std::vector<size_t>& pivots() const { return pivots_; }

    // Residual of v after reduction against the basis; zero iff v is a member.
    Row reduce(Row v) const {
        assert(v.size() == n_);
        for (size_t k = 0; k < rows_.size(); ++k) {
            const V& c = v[pivots_[k]];
            if (f_.is_zero(c)) continue;
            V coef = c;
            for (size_t j = 0; j < n_; ++j) v[j] = f_.sub(v[j], f_.mul(coef, rows_[k][j]));
        }
        return v;
    }

    bool contains(const Row& v) const {
        Row r = reduce(v);
        for (const auto& x : r)
            if (!f_.is_zero(x)) return false;
        return true;
    }

    // Coordinates of v in the basis rows, if v is a member.
    std::optional<Row> coordinates(Row v) const {
        Row coord(rows_.size(), f_.zero());
        for (size_t k = 0; k < rows_.size(); ++k) {
            const V c = v[pivots_[k]];
            if (f_.is_zero(c)) continue;
            coord[k] = c;
            for (size_t j = 0; j < n_; ++j) v[j] = f_.sub(v[j], f_.mul(c, rows_[k][j]));
        }
        for (const auto& x : v)
            if (!f_.is_zero(x)) return std::nullopt;
        return coord;
    }

    // Inserts v; returns true iff the dimension grew.
    bool insert(Row v) {
        v = reduce(std::move(v));
        size_t piv = n_;
        for (size_t j = 0; j < n_; ++j)
            if (!f_.is_zero(v[j])) { piv = j; break; }
        if (piv == n_) return false;
        V s = f_.inv(v[piv]);
        for (size_t j = 0; j < n_; ++j) v[j] = f_.mul(s, v[j]);
        // Clear the new pivot column above.
        for (auto& row : rows_) {
            V c = row[piv];
            if (f_.is_zero(c)) continue;
            for (size_t j = 0; j < n_; ++j) row[j] = f_.sub(row[j], f_.mul(c, v[j]));
        }
        size_t at = 0;
        while (at < pivots_.size() && pivots_[at] < piv) ++at;
        rows_.insert(rows_.begin() + at, std::move(v));
        pivots_.insert(pivots_.begin() + at, piv);
        return true;
    }

    bool is_full() const { return dim() == n_; }

    friend bool operator==(const RowSpaceT& a, const RowSpaceT& b) {
        if (a.n_ != b.n_ || a.pivots_ != b.pivots_) return false;
        for (size_t k = 0; k < a.rows_.size(); ++k)
            for (size_t j = 0; j < a.n_; ++j)
                if (a.rows_[k][j] != b.rows_[k][j]) return false;
        return true;
    }
    friend bool operator!=(const RowSpaceT& a, const RowSpaceT& b) { return !(a == b); }

    const Fd& field() const { return f_; }

private:
    Fd f_{};
    size_t n_ = 0;
    std::vector<Row> rows_;
    std::vector<size_t> pivots_;
};

// Solves sum_i x_i * gens[i] = target inside F^n, tracking provenance.
// Returns the combination over gens, or nullopt if target is outside the span.
template <class Fd>
std::optional<std::vector<typename Fd::value_type>> solve_combination(
    const Fd& f, const std::vector<std::vector<typename Fd::value_type>>& gens,
    const std::vector<typename Fd::value_type>& target) {
    using V = typename Fd::value_type;
    size_t n = target.size();
    size_t m = gens.size();
    // Augment each generator with its provenance unit vector, reduce the
    // augmented system; the residual's tail holds the combination.
    RowSpaceT<Fd> space(f, n + m);
    for (size_t i = 0; i < m; ++i) {
        std::vector<V> row(n + m, f.zero());
        assert(gens[i].size() == n);
        for (size_t j = 0; j < n; ++j) row[j] = gens[i][j];
        row[n + i] = f.one();
        space.insert(std::move(row));
    }
    std::vector<V> t(n + m, f.zero());
    for (size_t j = 0; j < n; ++j) t[j] = target[j];
    auto r = space.reduce(std::move(t));
    for (size_t j = 0; j < n; ++j)
        if (!f.is_zero(r[j])) return std::nullopt;
    std::vector<V> combo(m);
    for (size_t i = 0; i < m; ++i) combo[i] = f.sub(f.zero(), r[n + i]);
    return combo;
}

}  // namespace orbitlin

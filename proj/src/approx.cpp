#include "orbitlin/approx.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <numeric>
#include <set>

namespace orbitlin {

void PermGroup::check_closed() const {
    std::set<std::vector<int>> all(elements.begin(), elements.end());
    for (const auto& g : elements) {
        std::vector<int> inv(degree);
        for (size_t i = 0; i < degree; ++i) inv[g[i]] = static_cast<int>(i);
        if (!all.count(inv)) throw std::logic_error("group not closed under inverse");
        for (const auto& h : elements) {
            std::vector<int> gh(degree);
            for (size_t i = 0; i < degree; ++i) gh[i] = g[h[i]];
            if (!all.count(gh)) throw std::logic_error("group not closed under composition");
        }
    }
}

PermGroup aut_group(const FiniteStructure& B, const Vocabulary& voc, size_t bound) {
    if (static_cast<size_t>(B.size) > bound)
        throw err_too_large("aut_group: structure exceeds the configured bound");
    B.validate(voc);
    size_t n = static_cast<size_t>(B.size);
    std::vector<int> pos_in_order(n, 0);
    if (B.order)
        for (size_t k = 0; k < n; ++k) pos_in_order[(*B.order)[k]] = static_cast<int>(k);

    PermGroup g;
    g.degree = n;
    std::vector<int> img(n, -1);
    std::vector<bool> used(n, false);
    auto consistent = [&](int v, int w) {
        if (B.unary[v] != B.unary[w]) return false;
        for (int u = 0; u < static_cast<int>(n); ++u) {
            if (img[u] < 0) continue;
            for (size_t s = 0; s < B.binary.size(); ++s) {
                int si = static_cast<int>(s);
                if (B.has_edge(si, v, u) != B.has_edge(si, w, img[u])) return false;
                if (B.has_edge(si, u, v) != B.has_edge(si, img[u], w)) return false;
            }
            if (B.order && (pos_in_order[v] < pos_in_order[u]) != (pos_in_order[w] < pos_in_order[img[u]]))
                return false;
        }
        return true;
    };
    std::function<void(size_t)> rec = [&](size_t v) {
        if (v == n) {
            g.elements.push_back(img);
            return;
        }
        for (size_t w = 0; w < n; ++w) {
            if (used[w] || !consistent(static_cast<int>(v), static_cast<int>(w))) continue;
            used[w] = true;
            img[v] = static_cast<int>(w);
            rec(v + 1);
            img[v] = -1;
            used[w] = false;
        }
    };
    rec(0);
    return g;
}

namespace {

// Mixed-radix iteration over B^d.
bool next_tuple(std::vector<int>& t, int base) {
    for (size_t i = 0; i < t.size(); ++i) {
        if (++t[i] < base) return true;
        t[i] = 0;
    }
    return false;
}

}  // namespace

long long orbit_count(const FiniteStructure& B, const Vocabulary& voc, size_t d) {
    double total = 1;
    for (size_t i = 0; i < d; ++i) total *= B.size;
    if (total > (1 << 20)) throw err_too_large("orbit_count: |B|^d too large");
    PermGroup g = aut_group(B, voc);
    long long count = 0;
    std::vector<int> t(d, 0);
    if (d == 0) return 1;
    do {
        bool minimal = true;
        std::vector<int> image(d);
        for (const auto& perm : g.elements) {
            for (size_t i = 0; i < d; ++i) image[i] = perm[t[i]];
            if (std::lexicographical_compare(image.begin(), image.end(), t.begin(), t.end())) {
                minimal = false;
                break;
            }
        }
        if (minimal) ++count;
    } while (next_tuple(t, B.size));
    return count;
}

long long endo_dim(const FiniteStructure& B, const Vocabulary& voc, size_t d, const Field& f) {
    double nd = 1;
    for (size_t i = 0; i < d; ++i) nd *= B.size;
    size_t N = static_cast<size_t>(nd);
    if (N * N > 10000) throw err_too_large("endo_dim: matrix space too large");
    PermGroup g = aut_group(B, voc);

    // Index tuples of B^d.
    std::vector<std::vector<int>> tuples;
    std::vector<int> t(d, 0);
    if (d == 0) tuples.push_back({});
    else
        do tuples.push_back(t);
        while (next_tuple(t, B.size));
    assert(tuples.size() == N);
    std::map<std::vector<int>, size_t> at;
    for (size_t i = 0; i < N; ++i) at[tuples[i]] = i;

    // Commutation constraints: M[g x][g y] - M[x][y] = 0, one row each.
    ScalarRowSpace constraints = make_row_space(f, N * N);
    for (const auto& perm : g.elements) {
        for (size_t x = 0; x < N; ++x)
            for (size_t y = 0; y < N; ++y) {
                std::vector<int> gx(d), gy(d);
                for (size_t i = 0; i < d; ++i) {
                    gx[i] = perm[tuples[x][i]];
                    gy[i] = perm[tuples[y][i]];
                }
                size_t xi = at[gx] * N + at[gy];
                size_t yi = x * N + y;
                if (xi == yi) continue;
                std::vector<Scalar> row(N * N, f.zero());
                row[xi] = f.one();
                row[yi] = f.neg(f.one());
                constraints.insert(std::move(row));
            }
    }
    return static_cast<long long>(N * N - constraints.dim());
}

FiniteStructure pure_set(size_t n) {
    FiniteStructure b;
    b.size = static_cast<int>(n);
    b.unary.assign(n, 0);
    return b;
}

Vocabulary pure_vocab() { return Vocabulary{}; }

Vocabulary graph_vocab_sym() {
    Vocabulary v;
    v.binary = {"E"};
    v.symmetric = {true};
    return v;
}

FiniteStructure graph_structure(size_t n, const std::vector<std::pair<int, int>>& edges) {
    FiniteStructure b;
    b.size = static_cast<int>(n);
    b.unary.assign(n, 0);
    b.binary.resize(1);
    for (auto [x, y] : edges) {
        b.binary[0].push_back({x, y});
        b.binary[0].push_back({y, x});
    }
    return b;
}

FiniteStructure path_graph(size_t n) {
    std::vector<std::pair<int, int>> e;
    for (size_t i = 0; i + 1 < n; ++i) e.push_back({static_cast<int>(i), static_cast<int>(i) + 1});
    return graph_structure(n, e);
}

// ---------------------------------------------------------------------------

SmallField::SmallField(unsigned q) : q_(q) {
    if (q != 2 && q != 3 && q != 4 && q != 5)
        throw err_format("SmallField: q must be one of 2, 3, 4, 5");
    if (q == 4) {
        // GF(4) = F2[x]/(x^2+x+1); elements 0, 1, x = 2, x+1 = 3.
        auto xor2 = [](uint8_t a, uint8_t b) { return static_cast<uint8_t>(a ^ b); };
        for (unsigned a = 0; a < 4; ++a)
            for (unsigned b = 0; b < 4; ++b) add_[a][b] = xor2(a, b);
        uint8_t table[4][4] = {{0, 0, 0, 0}, {0, 1, 2, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}};
        for (unsigned a = 0; a < 4; ++a)
            for (unsigned b = 0; b < 4; ++b) mul_[a][b] = table[a][b];
        for (unsigned a = 0; a < 4; ++a) neg_[a] = static_cast<uint8_t>(a);  // char 2
    } else {
        for (unsigned a = 0; a < q; ++a) {
            for (unsigned b = 0; b < q; ++b) {
                add_[a][b] = static_cast<uint8_t>((a + b) % q);
                mul_[a][b] = static_cast<uint8_t>((a * b) % q);
            }
            neg_[a] = static_cast<uint8_t>((q - a) % q);
        }
    }
    for (unsigned a = 1; a < q; ++a)
        for (unsigned b = 1; b < q; ++b)
            if (mul_[a][b] == 1) inv_[a] = static_cast<uint8_t>(b);
}

uint8_t SmallField::inv(uint8_t a) const {
    if (a == 0) throw std::domain_error("SmallField: inverse of zero");
    return inv_[a];
}

GFVec SymplecticSpace::e(size_t i) const {
    GFVec v = zero();
    v[i - 1] = 1;
    return v;
}

GFVec SymplecticSpace::f(size_t i) const {
    GFVec v = zero();
    v[n + i - 1] = 1;
    return v;
}

uint8_t SymplecticSpace::omega(const GFVec& u, const GFVec& v) const {
    uint8_t acc = 0;
    for (size_t i = 0; i < n; ++i) {
        acc = field.add(acc, field.mul(u[i], v[n + i]));
        acc = field.sub(acc, field.mul(u[n + i], v[i]));
    }
    return acc;
}

GFVec SymplecticSpace::add(const GFVec& u, const GFVec& v) const {
    GFVec r(dim());
    for (size_t i = 0; i < dim(); ++i) r[i] = field.add(u[i], v[i]);
    return r;
}

GFVec SymplecticSpace::scale(uint8_t s, const GFVec& u) const {
    GFVec r(dim());
    for (size_t i = 0; i < dim(); ++i) r[i] = field.mul(s, u[i]);
    return r;
}

GFVec SymplecticSpace::vector_at(size_t index) const {
    GFVec v(dim());
    for (size_t i = dim(); i-- > 0;) {
        v[i] = static_cast<uint8_t>(index % field.q());
        index /= field.q();
    }
    return v;
}

size_t SymplecticSpace::vector_count() const {
    size_t c = 1;
    for (size_t i = 0; i < dim(); ++i) c *= field.q();
    return c;
}

namespace {

// Least enumerated vector outside the span, if any.
std::optional<GFVec> least_outside_span(const SymplecticSpace& sp, const std::vector<GFVec>& vs) {
    GFRowSpace span(sp.field, sp.dim());
    for (const auto& v : vs) span.insert(v);
    if (span.dim() == sp.dim()) return std::nullopt;
    for (size_t i = 0; i < sp.vector_count(); ++i) {
        GFVec v = sp.vector_at(i);
        if (!span.contains(v)) return v;
    }
    return std::nullopt;
}

// Orthogonalize v against the pairs (e_i, f_i): v - sum omega(e_i,v) f_i +
// sum omega(f_i,v) e_i.
GFVec pair_orthogonalize(const SymplecticSpace& sp, const std::vector<GFVec>& es,
                         const std::vector<GFVec>& fs, GFVec v) {
    for (size_t i = 0; i < fs.size(); ++i) {
        v = sp.add(v, sp.scale(sp.field.neg(sp.omega(es[i], v)), fs[i]));
        v = sp.add(v, sp.scale(sp.omega(fs[i], v), es[i]));
    }
    return v;
}

// Extends paired lists (es, fs) spanning a symplectic subspace to a
// symplectic basis of the whole space (the paired loop of the subbasis
// lemma). Restricting the enumeration to `inside` limits the completion to
// that subspace.
void complete_paired(const SymplecticSpace& sp, std::vector<GFVec>& es, std::vector<GFVec>& fs,
                     const std::vector<GFVec>* inside = nullptr) {
    auto candidates = [&]() -> std::optional<GFVec> {
        if (!inside) {
            std::vector<GFVec> have;
            have.insert(have.end(), es.begin(), es.end());
            have.insert(have.end(), fs.begin(), fs.end());
            return least_outside_span(sp, have);
        }
        GFRowSpace span(sp.field, sp.dim());
        for (const auto& v : es) span.insert(v);
        for (const auto& v : fs) span.insert(v);
        // Enumerate the subspace spanned by `inside` instead of the whole W.
        GFRowSpace sub(sp.field, sp.dim());
        for (const auto& v : *inside) sub.insert(v);
        size_t k = sub.dim();
        std::vector<size_t> digits(k, 0);
        while (true) {
            GFVec v(sp.dim(), 0);
            for (size_t i = 0; i < k; ++i)
                v = sp.add(v, sp.scale(static_cast<uint8_t>(digits[i]), sub.rows()[i]));
            if (!span.contains(v)) return v;
            size_t i = 0;
            while (i < k && ++digits[i] == sp.field.q()) digits[i++] = 0;
            if (i == k) return std::nullopt;
        }
    };
    while (auto v_opt = candidates()) {
        GFVec e_new = pair_orthogonalize(sp, es, fs, *v_opt);
        // Cannot be zero, else *v_opt was already in the span.
        GFVec w(sp.dim(), 0);
        bool found = false;
        if (!inside) {
            for (size_t i = 0; i < sp.vector_count() && !found; ++i) {
                GFVec cand = sp.vector_at(i);
                if (sp.omega(e_new, cand) != 0) { w = cand; found = true; }
            }
        } else {
            GFRowSpace sub(sp.field, sp.dim());
            for (const auto& v : *inside) sub.insert(v);
            size_t k = sub.dim();
            std::vector<size_t> digits(k, 0);
            while (!found) {
                GFVec cand(sp.dim(), 0);
                for (size_t i = 0; i < k; ++i)
                    cand = sp.add(cand, sp.scale(static_cast<uint8_t>(digits[i]), sub.rows()[i]));
                if (sp.omega(e_new, cand) != 0) { w = cand; found = true; break; }
                size_t i = 0;
                while (i < k && ++digits[i] == sp.field.q()) digits[i++] = 0;
                if (i == k) break;
            }
        }
        if (!found) throw std::logic_error("symplectic completion: degenerate subspace");
        w = sp.scale(sp.field.inv(sp.omega(e_new, w)), w);
        GFVec f_new = pair_orthogonalize(sp, es, fs, w);
        es.push_back(e_new);
        fs.push_back(f_new);
    }
}

GFVec solve_in_basis(const SmallField& f, const std::vector<GFVec>& basis, const GFVec& target) {
    auto combo = solve_combination(f, basis, target);
    if (!combo) throw std::logic_error("solve_in_basis: target outside span");
    return *combo;
}

}  // namespace

SymplecticBasis complete_subbasis(const SymplecticSpace& sp, const std::vector<GFVec>& es,
                                  const std::vector<GFVec>& fs) {
    if (fs.size() > es.size()) throw err_not_subbasis("more f-vectors than e-vectors");
    // Validate the pairing equations and linear independence.
    GFRowSpace indep(sp.field, sp.dim());
    for (const auto& v : es)
        if (!indep.insert(v)) throw err_not_subbasis("input vectors linearly dependent");
    for (const auto& v : fs)
        if (!indep.insert(v)) throw err_not_subbasis("input vectors linearly dependent");
    for (size_t i = 0; i < es.size(); ++i)
        for (size_t j = 0; j < fs.size(); ++j) {
            uint8_t want = i == j ? 1 : 0;
            if (sp.omega(es[i], fs[j]) != want)
                throw err_not_subbasis("pairing omega(e_" + std::to_string(i + 1) + ", f_" +
                                       std::to_string(j + 1) + ") violated");
        }
    for (size_t i = 0; i < es.size(); ++i)
        for (size_t j = 0; j < es.size(); ++j)
            if (i != j && sp.omega(es[i], es[j]) != 0)
                throw err_not_subbasis("e-vectors not pairwise orthogonal");
    for (size_t i = 0; i < fs.size(); ++i)
        for (size_t j = 0; j < fs.size(); ++j)
            if (i != j && sp.omega(fs[i], fs[j]) != 0)
                throw err_not_subbasis("f-vectors not pairwise orthogonal");

    SymplecticBasis basis;
    basis.e = es;
    basis.f = fs;
    // Find partners for the unpaired e-vectors via a dual functional.
    while (basis.f.size() < basis.e.size()) {
        size_t target = basis.f.size();  // first unpaired e
        // Extend the current collection to a basis of W.
        std::vector<GFVec> coll;
        coll.insert(coll.end(), basis.e.begin(), basis.e.end());
        coll.insert(coll.end(), basis.f.begin(), basis.f.end());
        GFRowSpace span(sp.field, sp.dim());
        std::vector<GFVec> full = coll;
        for (const auto& v : coll) span.insert(v);
        for (size_t i = 0; i < sp.dim() && span.dim() < sp.dim(); ++i) {
            GFVec unit(sp.dim(), 0);
            unit[i] = 1;
            if (span.insert(unit)) full.push_back(unit);
        }
        // psi: 1 on the target e, 0 on the rest of the basis. Solve for its
        // standard-coordinate representation.
        std::vector<GFVec> columns;  // transpose system: psi . full[j] = delta
        for (size_t i = 0; i < sp.dim(); ++i) {
            GFVec row(full.size());
            for (size_t j = 0; j < full.size(); ++j) row[j] = full[j][i];
            columns.push_back(row);
        }
        GFVec delta(full.size(), 0);
        delta[target] = 1;
        GFVec psi = solve_in_basis(sp.field, columns, delta);
        // A symplectic basis of the whole W, from scratch.
        std::vector<GFVec> pe, pf;
        complete_paired(sp, pe, pf);
        GFVec f_new = sp.zero();
        for (size_t j = 0; j < pe.size(); ++j) {
            uint8_t pe_val = 0, pf_val = 0;
            for (size_t i = 0; i < sp.dim(); ++i) {
                pe_val = sp.field.add(pe_val, sp.field.mul(psi[i], pe[j][i]));
                pf_val = sp.field.add(pf_val, sp.field.mul(psi[i], pf[j][i]));
            }
            f_new = sp.add(f_new, sp.scale(pe_val, pf[j]));
            f_new = sp.add(f_new, sp.scale(sp.field.neg(pf_val), pe[j]));
        }
        basis.f.push_back(f_new);
    }
    complete_paired(sp, basis.e, basis.f);
    // Re-verify the full pairing.
    for (size_t i = 0; i < basis.e.size(); ++i)
        for (size_t j = 0; j < basis.f.size(); ++j)
            if (sp.omega(basis.e[i], basis.f[j]) != (i == j ? 1 : 0))
                throw std::logic_error("complete_subbasis: pairing check failed");
    for (size_t i = 0; i < basis.e.size(); ++i)
        for (size_t j = 0; j < basis.e.size(); ++j) {
            if (sp.omega(basis.e[i], basis.e[j]) != 0 || sp.omega(basis.f[i], basis.f[j]) != 0)
                throw std::logic_error("complete_subbasis: orthogonality check failed");
        }
    if (basis.e.size() != sp.n) throw std::logic_error("complete_subbasis: wrong size");
    return basis;
}

GFVec apply_matrix(const SymplecticSpace& sp, const GFMatrix& m, const GFVec& v) {
    GFVec r = sp.zero();
    for (size_t c = 0; c < sp.dim(); ++c) r = sp.add(r, sp.scale(v[c], m[c]));
    return r;
}

GFMatrix witt_extend(const SymplecticSpace& sp,
                     const std::vector<std::pair<GFVec, GFVec>>& pairs) {
    const SmallField& F = sp.field;
    // Linear well-definedness and injectivity, tracking images.
    std::vector<GFVec> xbasis, ximages;
    GFRowSpace xspan(F, sp.dim());
    for (const auto& [x, y] : pairs) {
        if (xspan.contains(x)) {
            // x is a combination of the basis; its image must match.
            GFVec coords = solve_in_basis(F, xbasis, x);
            GFVec expect = sp.zero();
            for (size_t k = 0; k < xbasis.size(); ++k)
                expect = sp.add(expect, sp.scale(coords[k], ximages[k]));
            if (expect != y) throw err_not_injective("map is not linearly consistent");
        } else {
            xspan.insert(x);
            xbasis.push_back(x);
            ximages.push_back(y);
        }
    }
    GFRowSpace yspan(F, sp.dim());
    for (const auto& y : ximages) yspan.insert(y);
    if (yspan.dim() != xbasis.size())
        throw err_not_injective("images are linearly dependent");
    // Isometry on the given pairs (enough, by bilinearity, for the span).
    for (size_t i = 0; i < pairs.size(); ++i)
        for (size_t j = 0; j < pairs.size(); ++j)
            if (sp.omega(pairs[i].first, pairs[j].first) !=
                sp.omega(pairs[i].second, pairs[j].second))
                throw err_not_isometric("omega mismatch at input pair (" + std::to_string(i) +
                                        ", " + std::to_string(j) + ")");

    // Radical split X = X0 + X1 via the Gram matrix kernel.
    size_t r = xbasis.size();
    std::vector<GFVec> gram_rows;
    for (size_t i = 0; i < r; ++i) {
        GFVec row(r);
        for (size_t j = 0; j < r; ++j) row[j] = sp.omega(xbasis[i], xbasis[j]);
        gram_rows.push_back(row);
    }
    // Kernel of the Gram matrix: coefficient vectors c with sum c_i x_i in X0.
    GFRowSpace gram(F, r);
    std::vector<GFVec> kernel;
    {
        // Augmented elimination: [gram | I], kernel rows are those reducing to 0.
        GFRowSpace aug(F, 2 * r);
        for (size_t i = 0; i < r; ++i) {
            GFVec row(2 * r, 0);
            for (size_t j = 0; j < r; ++j) row[j] = gram_rows[j][i];  // column i of gram
            row[r + i] = 1;
            aug.insert(row);
        }
        for (const auto& row : aug.rows()) {
            bool zero_head = true;
            for (size_t j = 0; j < r && zero_head; ++j) zero_head = row[j] == 0;
            if (zero_head) kernel.push_back(GFVec(row.begin() + r, row.end()));
        }
    }
    auto combine = [&](const std::vector<GFVec>& basis, const GFVec& coeffs) {
        GFVec v = sp.zero();
        for (size_t k = 0; k < basis.size(); ++k) v = sp.add(v, sp.scale(coeffs[k], basis[k]));
        return v;
    };
    std::vector<GFVec> x0, x0_img;
    GFRowSpace x0span(F, sp.dim());
    for (const auto& c : kernel) {
        GFVec v = combine(xbasis, c);
        if (x0span.insert(v)) {
            x0.push_back(v);
            x0_img.push_back(combine(ximages, c));
        }
    }
    // Greedy complement from the echelon basis of X.
    std::vector<GFVec> x1, x1_img;
    GFRowSpace accum = x0span;
    for (size_t k = 0; k < xbasis.size(); ++k)
        if (accum.insert(xbasis[k])) {
            x1.push_back(xbasis[k]);
            x1_img.push_back(ximages[k]);
        }
    // Symplectic basis of X1 (and its image under the map).
    std::vector<GFVec> se, sf;
    complete_paired(sp, se, sf, &x1);
    auto map_through = [&](const GFVec& v) {
        GFVec coords = solve_in_basis(F, xbasis, v);
        return combine(ximages, coords);
    };
    std::vector<GFVec> se_img, sf_img;
    for (const auto& v : se) se_img.push_back(map_through(v));
    for (const auto& v : sf) sf_img.push_back(map_through(v));

    // Complete both sides: unpaired e-slots host the radical.
    std::vector<GFVec> es = se, es_img = se_img;
    es.insert(es.end(), x0.begin(), x0.end());
    es_img.insert(es_img.end(), x0_img.begin(), x0_img.end());
    SymplecticBasis dom = complete_subbasis(sp, es, sf);
    SymplecticBasis img = complete_subbasis(sp, es_img, sf_img);

    // Matrix sending the domain basis to the image basis.
    std::vector<GFVec> dbasis, ibasis;
    for (size_t i = 0; i < dom.e.size(); ++i) { dbasis.push_back(dom.e[i]); ibasis.push_back(img.e[i]); }
    for (size_t i = 0; i < dom.f.size(); ++i) { dbasis.push_back(dom.f[i]); ibasis.push_back(img.f[i]); }
    GFMatrix m(sp.dim());
    for (size_t c = 0; c < sp.dim(); ++c) {
        GFVec unit(sp.dim(), 0);
        unit[c] = 1;
        GFVec coords = solve_in_basis(F, dbasis, unit);
        m[c] = combine(ibasis, coords);
    }
    // Validation: bijective, form-preserving, restricts to the input.
    GFRowSpace rank(F, sp.dim());
    for (const auto& col : m) rank.insert(col);
    if (rank.dim() != sp.dim()) throw std::logic_error("witt_extend: singular result");
    for (size_t i = 0; i < sp.dim(); ++i)
        for (size_t j = 0; j < sp.dim(); ++j) {
            GFVec ui(sp.dim(), 0), uj(sp.dim(), 0);
            ui[i] = 1;
            uj[j] = 1;
            if (sp.omega(apply_matrix(sp, m, ui), apply_matrix(sp, m, uj)) != sp.omega(ui, uj))
                throw std::logic_error("witt_extend: form not preserved");
        }
    for (const auto& [x, y] : pairs)
        if (apply_matrix(sp, m, x) != y) throw std::logic_error("witt_extend: restriction mismatch");
    return m;
}

namespace {

// Verified direct search, used when the recursive construction trips over
// the zero vector (its image can coincide with a pivot image).
std::vector<GFVec> embed_graph_search(const FiniteStructure& G, const SymplecticSpace& sp) {
    size_t sz = static_cast<size_t>(G.size);
    std::vector<GFVec> img(sz);
    std::set<GFVec> used;
    std::function<bool(size_t)> rec = [&](size_t v) -> bool {
        if (v == sz) return true;
        for (size_t i = 0; i < sp.vector_count(); ++i) {
            GFVec cand = sp.vector_at(i);
            if (used.count(cand)) continue;
            bool ok = true;
            for (size_t u = 0; u < v && ok; ++u)
                ok = (sp.omega(img[u], cand) == 1) ==
                     G.has_edge(0, static_cast<int>(u), static_cast<int>(v));
            if (!ok) continue;
            img[v] = cand;
            used.insert(cand);
            if (rec(v + 1)) return true;
            used.erase(cand);
        }
        return false;
    };
    if (!rec(0)) throw std::logic_error("embed_graph: no embedding found");
    return img;
}

std::vector<GFVec> embed_graph_rec(const FiniteStructure& G, size_t n);

}  // namespace

std::vector<GFVec> embed_graph(const FiniteStructure& G, size_t n) {
    if (G.binary.size() != 1) throw err_format("embed_graph: expects one edge relation");
    if (static_cast<size_t>(G.size) > 2 * n)
        throw err_too_large("embed_graph: graph exceeds 2n vertices");
    SymplecticSpace sp{SmallField(2), n};
    size_t sz = static_cast<size_t>(G.size);
    for (size_t x = 0; x < sz; ++x) {
        if (G.unary[x] != 0) throw err_format("embed_graph: plain graphs only");
        for (size_t y = 0; y < sz; ++y)
            if (G.has_edge(0, static_cast<int>(x), static_cast<int>(y)) !=
                G.has_edge(0, static_cast<int>(y), static_cast<int>(x)))
                throw err_format("embed_graph: graph must be symmetric");
    }
    std::vector<GFVec> img;
    try {
        img = embed_graph_rec(G, n);
    } catch (const std::logic_error&) {
        img = embed_graph_search(G, sp);
    }
    for (size_t x = 0; x < sz; ++x)
        for (size_t y = 0; y < sz; ++y) {
            if (x == y) continue;
            if ((sp.omega(img[x], img[y]) == 1) !=
                G.has_edge(0, static_cast<int>(x), static_cast<int>(y)))
                throw std::logic_error("embed_graph: induced correctness failed");
        }
    std::set<GFVec> distinct(img.begin(), img.end());
    if (distinct.size() != sz) throw std::logic_error("embed_graph: images not distinct");
    return img;
}

namespace {

std::vector<GFVec> embed_graph_rec(const FiniteStructure& G, size_t n) {
    SymplecticSpace sp{SmallField(2), n};
    size_t sz = static_cast<size_t>(G.size);

    // Find an edge; if none, spread the vertices over span(e_1..e_n),
    // skipping the zero vector whenever the count allows.
    int s = -1, t = -1;
    for (int x = 0; x < G.size && s < 0; ++x)
        for (int y = x + 1; y < G.size && s < 0; ++y)
            if (G.has_edge(0, x, y)) { s = x; t = y; }
    if (s < 0) {
        size_t skip_zero = sz < (size_t(1) << n) ? 1 : 0;
        std::vector<GFVec> img;
        for (size_t k = 0; k < sz; ++k) {
            GFVec v = sp.zero();
            for (size_t b = 0; b < n; ++b) v[b] = static_cast<uint8_t>(((k + skip_zero) >> b) & 1);
            img.push_back(v);
        }
        return img;
    }

    // Recurse on G minus {s, t} with the corrected edge relation.
    std::vector<int> rest;
    for (int x = 0; x < G.size; ++x)
        if (x != s && x != t) rest.push_back(x);
    FiniteStructure H;
    H.size = static_cast<int>(rest.size());
    H.unary.assign(rest.size(), 0);
    H.binary.resize(1);
    auto E = [&](int x, int y) { return G.has_edge(0, x, y); };
    for (size_t x = 0; x < rest.size(); ++x)
        for (size_t y = 0; y < rest.size(); ++y) {
            if (x == y) continue;
            bool edge = E(rest[x], rest[y]) ^ (E(rest[x], s) && E(rest[y], t)) ^
                        (E(rest[x], t) && E(rest[y], s));
            if (edge) H.binary[0].push_back({static_cast<int>(x), static_cast<int>(y)});
        }
    std::vector<GFVec> sub = embed_graph_rec(H, n - 1);

    std::vector<GFVec> img(sz);
    auto lift = [&](const GFVec& v) {
        GFVec r = sp.zero();
        for (size_t i = 0; i < n - 1; ++i) {
            r[i] = v[i];
            r[n + i] = v[(n - 1) + i];
        }
        return r;
    };
    for (size_t k = 0; k < rest.size(); ++k) {
        GFVec v = lift(sub[k]);
        if (E(rest[k], s)) v = sp.add(v, sp.f(n));  // -f_n = f_n over F2
        if (E(rest[k], t)) v = sp.add(v, sp.e(n));
        img[rest[k]] = v;
    }
    img[s] = sp.e(n);
    img[t] = sp.f(n);
    std::set<GFVec> distinct(img.begin(), img.end());
    if (distinct.size() != sz) throw std::logic_error("embed_graph: zero-vector collision");
    return img;
}

}  // namespace

long long gaussian_binomial(long long d, long long m, long long q) {
    if (m < 0 || m > d) return 0;
    if (m == 0 || m == d) return 1;
    // Pascal-style recurrence keeps everything integral.
    long long qm = 1;
    for (long long i = 0; i < m; ++i) qm *= q;
    return gaussian_binomial(d - 1, m - 1, q) + qm * gaussian_binomial(d - 1, m, q);
}

long long vector_orbit_count(long long d, long long q) {
    long long total = 0;
    for (long long m = 0; m <= d; ++m) total += gaussian_binomial(d, m, q);
    return total;
}

long long symplectic_orbit_count(long long d, long long q) {
    long long total = 0;
    for (long long m = 0; m <= d; ++m) {
        long long qc = 1;
        for (long long i = 0; i < m * (m - 1) / 2; ++i) qc *= q;
        total += gaussian_binomial(d, m, q) * qc;
    }
    return total;
}

TupleClassification classify_tuple(const SymplecticSpace& sp, const std::vector<GFVec>& tuple) {
    TupleClassification cls;
    GFRowSpace span(sp.field, sp.dim());
    std::vector<GFVec> pivot_vecs;
    for (size_t i = 0; i < tuple.size(); ++i) {
        if (span.contains(tuple[i])) {
            cls.lambdas[i] = solve_in_basis(sp.field, pivot_vecs, tuple[i]);
        } else {
            for (size_t k = 0; k < cls.pivots.size(); ++k)
                cls.mu[{i, cls.pivots[k]}] = sp.omega(tuple[i], tuple[cls.pivots[k]]);
            span.insert(tuple[i]);
            pivot_vecs.push_back(tuple[i]);
            cls.pivots.push_back(i);
        }
    }
    return cls;
}

std::vector<GFVec> reconstruct(const SymplecticSpace& sp, size_t d,
                               const TupleClassification& cls) {
    if (cls.pivots.size() > sp.n)
        throw err_too_large("reconstruct: needs n >= number of pivots");
    std::vector<GFVec> out(d, sp.zero());
    for (size_t k = 0; k < cls.pivots.size(); ++k) {
        size_t i = cls.pivots[k];
        GFVec v = sp.f(k + 1);
        for (size_t k2 = 0; k2 < k; ++k2) {
            auto it = cls.mu.find({i, cls.pivots[k2]});
            uint8_t m = it == cls.mu.end() ? 0 : it->second;
            v = sp.add(v, sp.scale(m, sp.e(k2 + 1)));
        }
        out[i] = v;
    }
    for (const auto& [j, coeffs] : cls.lambdas) {
        GFVec v = sp.zero();
        for (size_t k = 0; k < coeffs.size(); ++k)
            v = sp.add(v, sp.scale(coeffs[k], out[cls.pivots[k]]));
        out[j] = v;
    }
    return out;
}

FiniteStructure symplectic_graph_structure(size_t n) {
    SymplecticSpace sp{SmallField(2), n};
    size_t count = sp.vector_count();
    std::vector<std::pair<int, int>> edges;
    for (size_t i = 0; i < count; ++i)
        for (size_t j = i + 1; j < count; ++j)
            if (sp.omega(sp.vector_at(i), sp.vector_at(j)) == 1)
                edges.push_back({static_cast<int>(i), static_cast<int>(j)});
    return graph_structure(count, edges);
}

}  // namespace orbitlin

#pragma once

#include "mtower/chain.hpp"

#include <map>

namespace mtower {

namespace detail {

/// blockdiag of n copies of b (I_n (x) b).
inline ExactMatrix identity_kron(int n, const ExactMatrix& b) {
    ExactMatrix r(b.ring(), b.rows() * n, b.cols() * n);
    for (int t = 0; t < n; ++t)
        for (int i = 0; i < b.rows(); ++i)
            for (int j = 0; j < b.cols(); ++j) r.at(t * b.rows() + i, t * b.cols() + j) = b.at(i, j);
    return r;
}

} // namespace detail

/// The internal Hom complex of a pair of bounded complexes, materialized on
/// a degree window. Hom_k = sum over i of Hom(X_i, Y_{i+k}) with differential
/// D(f)_i = d f_i - (-1)^k f_{i-1} d.
class HomComplexRange {
public:
    HomComplexRange(ChainComplex X, ChainComplex Y, int klo, int khi)
        : X_(std::move(X)), Y_(std::move(Y)), klo_(klo), khi_(khi) {
        require_same_ring(X_.ring(), Y_.ring(), "HomComplexRange");
        for (int k = klo_; k <= khi_; ++k) build_level(k);
        for (int k = klo_ + 1; k <= khi_; ++k) build_differential(k);
    }

    struct Level {
        std::vector<int> srcs;
        std::vector<HomModule> homs;
        DirectSum sum;
    };

    const Level& level(int k) const { return levels_.at(k); }
    const ModuleMap& differential(int k) const { return diffs_.at(k); }
    const ChainComplex& X() const { return X_; }
    const ChainComplex& Y() const { return Y_; }

    /// Generator coordinates in Hom_k of a family of module maps
    /// X_i -> Y_{i+k} (must all be well-defined).
    std::vector<mpz_class> encode(int k, const std::function<ModuleMap(int)>& comp) const {
        const Level& L = levels_.at(k);
        std::vector<mpz_class> total(L.sum.total.generators(), mpz_class(0));
        for (size_t p = 0; p < L.srcs.size(); ++p) {
            int i = L.srcs[p];
            auto z = L.homs[p].encode(comp(i));
            auto inj = L.sum.inject[p].apply(z);
            for (int t = 0; t < int(total.size()); ++t) total[t] = X_.ring().reduce(total[t] + inj[t]);
        }
        return total;
    }

    /// Per-degree module maps from generator coordinates of Hom_k.
    std::vector<std::pair<int, ModuleMap>> decode(int k, const std::vector<mpz_class>& coords) const {
        const Level& L = levels_.at(k);
        std::vector<std::pair<int, ModuleMap>> out;
        for (size_t p = 0; p < L.srcs.size(); ++p) {
            int i = L.srcs[p];
            auto z = L.sum.project[p].apply(coords);
            out.emplace_back(i, L.homs[p].decode(X_.term(i), Y_.term(i + k), z));
        }
        return out;
    }

private:
    void build_level(int k) {
        Level L;
        std::vector<FgModule> mods;
        for (int i = 0; i <= X_.top_degree(); ++i) {
            int j = i + k;
            if (j < 0 || j > Y_.top_degree()) continue;
            if (X_.term(i).generators() == 0 || Y_.term(j).generators() == 0) continue;
            L.srcs.push_back(i);
            L.homs.push_back(hom_module(X_.term(i), Y_.term(j)));
            mods.push_back(L.homs.back().module);
        }
        L.sum = direct_sum(mods, X_.ring());
        levels_[k] = std::move(L);
    }

    // block of the differential from position p (src degree i, level k) into
    // level k-1, expressed on hom-module generators
    void build_differential(int k) {
        const Level& from = levels_.at(k);
        const Level& to = levels_.at(k - 1);
        ModuleMap D = ModuleMap::zero(from.sum.total, to.sum.total);
        int sign = (k % 2 == 0) ? -1 : 1; // -(-1)^k
        for (size_t p = 0; p < from.srcs.size(); ++p) {
            int i = from.srcs[p];
            // post-composition with d^Y_{i+k} lands at source degree i
            for (size_t q = 0; q < to.srcs.size(); ++q) {
                if (to.srcs[q] == i) {
                    ExactMatrix amb = detail::identity_kron(X_.term(i).generators(), Y_.differential(i + k).matrix());
                    D = D + transfer(from, p, to, q, amb);
                }
                if (to.srcs[q] == i + 1) {
                    ExactMatrix amb = ExactMatrix::kron_identity(X_.differential(i + 1).matrix().transpose(),
                                                                 Y_.term(i + k).generators());
                    D = D + transfer(from, p, to, q, amb.scaled(sign));
                }
            }
        }
        diffs_[k] = D;
    }

    /// Push an ambient-level block through the hom-module presentations.
    ModuleMap transfer(const Level& from, size_t p, const Level& to, size_t q, const ExactMatrix& amb) const {
        const HomModule& hs = from.homs[p];
        const HomModule& ht = to.homs[q];
        ExactMatrix cols = amb * hs.gens; // ambient images of source hom generators
        ExactMatrix sys = ExactMatrix::hcat(ht.gens, ht.ambient.relations());
        auto sol = solve(sys, cols);
        if (!sol) throw ring_error("HomComplexRange: differential does not preserve hom modules");
        ExactMatrix z = sol->submatrix(0, 0, ht.gens.cols(), cols.cols());
        ModuleMap block(hs.module, ht.module, z, false);
        return to.sum.inject[q].compose(block.compose(from.sum.project[p]));
    }

    ChainComplex X_, Y_;
    int klo_, khi_;
    std::map<int, Level> levels_;
    std::map<int, ModuleMap> diffs_;
};

/// Exact nullhomotopy test: solve f = dH + Hd over the ring. Complete over
/// both Z and Z/m, for arbitrary presented terms.
inline std::optional<ChainHomotopy> nullhomotopy(const ChainMap& f) {
    HomComplexRange hc(f.source(), f.target(), 0, 1);
    auto z0 = hc.encode(0, [&](int i) { return f.component(i); });
    const auto& L0 = hc.level(0);
    ExactMatrix rhs(f.source().ring(), L0.sum.total.generators(), 1);
    rhs.set_column(0, z0);
    ExactMatrix sys = ExactMatrix::hcat(hc.differential(1).matrix(), L0.sum.total.relations());
    auto sol = solve(sys, rhs);
    if (!sol) return std::nullopt;
    int h_gens = hc.level(1).sum.total.generators();
    std::vector<mpz_class> h(h_gens);
    for (int i = 0; i < h_gens; ++i) h[i] = sol->at(i, 0);
    auto parts = hc.decode(1, h);
    std::vector<ModuleMap> comps;
    for (int k = 0; k <= f.source().top_degree(); ++k) {
        ModuleMap c = ModuleMap::zero(f.source().term(k), f.target().term(k + 1));
        for (auto& [i, m] : parts)
            if (i == k) c = c + m;
        comps.push_back(c);
    }
    return ChainHomotopy(f, ChainMap::zero(f.source(), f.target()), std::move(comps));
}

inline bool nullhomotopic(const ChainMap& f) { return nullhomotopy(f).has_value(); }

inline bool homotopic(const ChainMap& f, const ChainMap& g) { return nullhomotopic(f - g); }

struct FreeReplacement {
    ChainComplex complex; // degreewise free
    ChainMap map;         // quasi-isomorphism onto the original in the window
};

/// Degreewise-free resolution of a bounded complex: a surjective chain map
/// F -> c inducing isomorphisms on H_k for k < through_degree. F is built
/// level by level: one generator per generator of c (surjectivity), one per
/// generator of the excess-cycle module, one per kernel cycle.
inline FreeReplacement free_replacement(const ChainComplex& c, int through_degree) {
    const RingSpec& rg = c.ring();
    std::vector<FgModule> terms;
    std::vector<ModuleMap> diffs;
    std::vector<ModuleMap> phis;

    FgModule F0 = FgModule::free_module(rg, c.term(0).generators());
    terms.push_back(F0);
    diffs.push_back(ModuleMap::zero(F0, FgModule::zero(rg)));
    phis.emplace_back(F0, c.term(0), ExactMatrix::identity(rg, F0.generators()), false);

    for (int k = 0; k < through_degree; ++k) {
        const FgModule& Fk = terms[k];
        const ExactMatrix dF = diffs[k].matrix(); // Fk -> F_{k-1} on generators
        const ExactMatrix phik = phis[k].matrix();
        const FgModule ck = c.term(k);
        const FgModule ck1 = c.term(k + 1);
        ExactMatrix dc1 = c.differential(k + 1).matrix(); // c_{k+1} -> c_k

        // cycle generators of the free level
        ExactMatrix Zk = (k == 0) ? ExactMatrix::identity(rg, Fk.generators()) : kernel_gens(dF);

        // A: cover the generators of c_{k+1}; boundaries lift to cycles of F
        ExactMatrix bound_sys = ExactMatrix::hcat(phik * Zk, ck.relations());
        auto asol = solve(bound_sys, dc1);
        if (!asol) throw ring_error("free_replacement: cycle surjectivity lost");
        ExactMatrix acoef = asol->submatrix(0, 0, Zk.cols(), dc1.cols());
        ExactMatrix a_cols = Zk * acoef; // boundaries of the A generators

        // B: excess cycles N_k = { z : dF z = 0, phi z in B_k(c) }
        ExactMatrix stackM = ExactMatrix::vcat(dF, phik);
        ExactMatrix spanN = ExactMatrix::block_diag(
            ExactMatrix(rg, dF.rows(), 0), ExactMatrix::hcat(dc1, ck.relations()));
        ExactMatrix Ngens = preimage_gens(stackM, spanN);

        // C: kernel cycles K_k = { z : dF z = 0, phi z = 0 in c_k }
        ExactMatrix spanK = ExactMatrix::block_diag(ExactMatrix(rg, dF.rows(), 0), ck.relations());
        ExactMatrix Kgens = preimage_gens(stackM, spanK);

        int nA = dc1.cols(), nB = Ngens.cols(), nC = Kgens.cols();
        FgModule Fnext = FgModule::free_module(rg, nA + nB + nC);
        ExactMatrix dnext = ExactMatrix::hcat(ExactMatrix::hcat(a_cols, Ngens), Kgens);
        diffs.emplace_back(Fnext, Fk, dnext, false);

        // phi on the new generators: identity on A, a boundary preimage on B, zero on C
        ExactMatrix phinext(rg, ck1.generators(), nA + nB + nC);
        for (int j = 0; j < nA; ++j) phinext.at(j, j) = 1;
        if (nB > 0) {
            ExactMatrix img = phik * Ngens;
            ExactMatrix sys = ExactMatrix::hcat(dc1, ck.relations());
            auto vsol = solve(sys, img);
            if (!vsol) throw ring_error("free_replacement: excess cycle is not a boundary");
            for (int j = 0; j < nB; ++j)
                for (int i = 0; i < ck1.generators(); ++i) phinext.at(i, nA + j) = vsol->at(i, j);
        }
        terms.push_back(Fnext);
        phis.emplace_back(Fnext, ck1, phinext, false);
    }

    ChainComplex F(rg, std::move(terms), std::move(diffs), false);
    // c padded up to the window so the chain map typechecks degreewise
    ChainMap phi(F, c, std::move(phis), false);
    return {F, phi};
}

/// Homotopy classes of chain maps c -> d, computed as the degree-0 homology
/// of the Hom complex. A non-free source is silently replaced by a bounded
/// free resolution (recorded in the result).
class HomotopyClasses {
public:
    HomotopyClasses(const ChainComplex& c, const ChainComplex& d)
        : target_(d) {
        if (c.degreewise_free()) {
            source_ = c;
        } else {
            int window = std::max(c.top_degree(), d.top_degree()) + 2;
            auto rep = free_replacement(c, window);
            source_ = rep.complex;
            replacement_ = std::move(rep);
        }
        hc_ = std::make_shared<HomComplexRange>(source_, target_, -1, 1);
        sq_ = Subquotient(hc_->differential(1), hc_->differential(0));
    }

    const FgModule& group() const { return sq_.module(); }
    const ChainComplex& effective_source() const { return source_; }
    const std::optional<FreeReplacement>& replacement() const { return replacement_; }

    /// A concrete chain map representing the class (canonical coordinates).
    ChainMap representative(const std::vector<mpz_class>& cls) const {
        auto amb = sq_.rep_from_class(cls);
        auto parts = hc_->decode(0, amb);
        std::vector<ModuleMap> comps;
        for (int k = 0; k <= source_.top_degree(); ++k) {
            ModuleMap m = ModuleMap::zero(source_.term(k), target_.term(k));
            for (auto& [i, mm] : parts)
                if (i == k) m = m + mm;
            comps.push_back(m);
        }
        return ChainMap(source_, target_, std::move(comps), false);
    }

    /// Canonical coordinates of the class of a chain map from the effective
    /// source; round-trips with representative().
    std::vector<mpz_class> classify(const ChainMap& f) const {
        auto z = hc_->encode(0, [&](int i) { return f.component(i); });
        return sq_.to_class(z);
    }

    std::vector<std::vector<mpz_class>> enumerate_classes(size_t cap = 4096) const {
        auto elems = group().enumerate_elements(cap);
        std::vector<std::vector<mpz_class>> out;
        for (auto& e : elems) out.push_back(group().to_canonical_coords(e));
        return out;
    }

private:
    ChainComplex source_, target_;
    std::optional<FreeReplacement> replacement_;
    std::shared_ptr<HomComplexRange> hc_;
    Subquotient sq_;
};

} // namespace mtower

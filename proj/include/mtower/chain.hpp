#pragma once

#include "mtower/extensions.hpp"

#include <functional>

namespace mtower {

/// Bounded non-negatively graded chain complex of presented modules.
/// d_k : term k -> term k-1; d o d = 0 is enforced at construction.
class ChainComplex {
public:
    ChainComplex() : ring_(RingSpec::integers()), top_(-1) {}

    ChainComplex(RingSpec ring, std::vector<FgModule> terms, std::vector<ModuleMap> diffs, bool verify = true)
        : ring_(std::move(ring)), top_(int(terms.size()) - 1), terms_(std::move(terms)), diffs_(std::move(diffs)) {
        if (top_ >= 0 && int(diffs_.size()) != top_ + 1)
            throw ring_error("ChainComplex: need one differential slot per term (slot 0 unused)");
        for (const auto& t : terms_) require_same_ring(t.ring(), ring_, "ChainComplex term");
        if (verify) validate();
    }

    static ChainComplex zero(const RingSpec& ring) { return ChainComplex(ring, {}, {}); }

    /// Module M concentrated in a single degree.
    static ChainComplex concentrated(const FgModule& m, int degree) {
        std::vector<FgModule> terms(degree + 1, FgModule::zero(m.ring()));
        std::vector<ModuleMap> diffs;
        terms[degree] = m;
        for (int k = 0; k <= degree; ++k)
            diffs.push_back(ModuleMap::zero(terms[k], k ? terms[k - 1] : FgModule::zero(m.ring())));
        return ChainComplex(m.ring(), std::move(terms), std::move(diffs), false);
    }

    /// Free complex from differential matrices: ranks r0..rn, mats[k] maps
    /// rank r_k to rank r_{k-1}.
    static ChainComplex from_matrices(const RingSpec& ring, const std::vector<int>& ranks,
                                      const std::vector<ExactMatrix>& mats) {
        std::vector<FgModule> terms;
        for (int r : ranks) terms.push_back(FgModule::free_module(ring, r));
        std::vector<ModuleMap> diffs;
        for (size_t k = 0; k < terms.size(); ++k) {
            if (k == 0) {
                diffs.push_back(ModuleMap::zero(terms[0], FgModule::zero(ring)));
            } else if (ranks[k] == 0 || ranks[k - 1] == 0) {
                diffs.push_back(ModuleMap::zero(terms[k], terms[k - 1]));
            } else {
                diffs.emplace_back(terms[k], terms[k - 1], mats[k], false);
            }
        }
        return ChainComplex(ring, std::move(terms), std::move(diffs));
    }

    const RingSpec& ring() const { return ring_; }
    int top_degree() const { return top_; }

    FgModule term(int k) const {
        if (k < 0 || k > top_) return FgModule::zero(ring_);
        return terms_[k];
    }

    ModuleMap differential(int k) const {
        if (k >= 1 && k <= top_) return diffs_[k];
        return ModuleMap::zero(term(k), term(k - 1));
    }

    void validate() const {
        for (int k = 1; k <= top_; ++k) {
            if (diffs_[k].source().generators() != terms_[k].generators() ||
                diffs_[k].target().generators() != terms_[k - 1].generators())
                throw ring_error("ChainComplex: differential endpoints mismatch at degree " + std::to_string(k));
            if (!diffs_[k].well_defined())
                throw ring_error("ChainComplex: differential not well-defined at degree " + std::to_string(k));
            if (k + 1 <= top_ && !diffs_[k].compose(diffs_[k + 1]).is_zero_map())
                throw ring_error("ChainComplex: d o d != 0 at degrees " + std::to_string(k + 1) + "," + std::to_string(k));
        }
    }

    bool degreewise_free() const {
        for (const auto& t : terms_)
            if (t.relations().cols() != 0) return false;
        return true;
    }

private:
    RingSpec ring_;
    int top_;
    std::vector<FgModule> terms_;
    std::vector<ModuleMap> diffs_;
};

/// Degreewise map of complexes commuting with the differentials.
class ChainMap {
public:
    ChainMap() = default;

    ChainMap(ChainComplex source, ChainComplex target, std::vector<ModuleMap> comps, bool verify = true)
        : src_(std::move(source)), tgt_(std::move(target)), comps_(std::move(comps)) {
        require_same_ring(src_.ring(), tgt_.ring(), "ChainMap");
        if (verify) validate();
    }

    static ChainMap zero(const ChainComplex& s, const ChainComplex& t) {
        std::vector<ModuleMap> comps;
        for (int k = 0; k <= s.top_degree(); ++k) comps.push_back(ModuleMap::zero(s.term(k), t.term(k)));
        return ChainMap(s, t, std::move(comps), false);
    }
    static ChainMap identity(const ChainComplex& c) {
        std::vector<ModuleMap> comps;
        for (int k = 0; k <= c.top_degree(); ++k) comps.push_back(ModuleMap::identity(c.term(k)));
        return ChainMap(c, c, std::move(comps), false);
    }

    const ChainComplex& source() const { return src_; }
    const ChainComplex& target() const { return tgt_; }

    ModuleMap component(int k) const {
        if (k >= 0 && k < int(comps_.size())) return comps_[k];
        return ModuleMap::zero(src_.term(k), tgt_.term(k));
    }

    void validate() const {
        int hi = std::max(src_.top_degree(), tgt_.top_degree()) + 1;
        for (int k = 1; k <= hi; ++k) {
            ModuleMap lhs = tgt_.differential(k).compose(component(k));
            ModuleMap rhs = component(k - 1).compose(src_.differential(k));
            if (!(lhs - rhs).is_zero_map())
                throw ring_error("ChainMap: square fails at degree " + std::to_string(k));
        }
        for (int k = 0; k < int(comps_.size()); ++k)
            if (!comps_[k].well_defined())
                throw ring_error("ChainMap: component not well-defined at degree " + std::to_string(k));
    }

    ChainMap compose(const ChainMap& inner) const {
        std::vector<ModuleMap> comps;
        int hi = std::max(inner.src_.top_degree(), 0);
        for (int k = 0; k <= hi; ++k) comps.push_back(component(k).compose(inner.component(k)));
        return ChainMap(inner.src_, tgt_, std::move(comps), false);
    }

    ChainMap operator+(const ChainMap& o) const {
        std::vector<ModuleMap> comps;
        for (int k = 0; k <= src_.top_degree(); ++k) comps.push_back(component(k) + o.component(k));
        return ChainMap(src_, tgt_, std::move(comps), false);
    }
    ChainMap operator-(const ChainMap& o) const {
        std::vector<ModuleMap> comps;
        for (int k = 0; k <= src_.top_degree(); ++k) comps.push_back(component(k) - o.component(k));
        return ChainMap(src_, tgt_, std::move(comps), false);
    }

    bool is_zero_map() const {
        for (const auto& c : comps_)
            if (!c.is_zero_map()) return false;
        return true;
    }

private:
    ChainComplex src_, tgt_;
    std::vector<ModuleMap> comps_;
};

/// Witness for f ~ g: components H_k : X_k -> Y_{k+1} with
/// f - g = dH + Hd, verified exactly at construction.
class ChainHomotopy {
public:
    ChainHomotopy() = default;

    ChainHomotopy(ChainMap f, ChainMap g, std::vector<ModuleMap> comps, bool verify = true)
        : f_(std::move(f)), g_(std::move(g)), comps_(std::move(comps)) {
        if (verify) validate();
    }

    ModuleMap component(int k) const {
        if (k >= 0 && k < int(comps_.size())) return comps_[k];
        return ModuleMap::zero(f_.source().term(k), f_.target().term(k + 1));
    }

    const ChainMap& lhs() const { return f_; }
    const ChainMap& rhs() const { return g_; }

    void validate() const {
        const ChainComplex& X = f_.source();
        const ChainComplex& Y = f_.target();
        int hi = std::max(X.top_degree(), Y.top_degree());
        for (int k = 0; k <= hi; ++k) {
            ModuleMap want = f_.component(k) - g_.component(k);
            ModuleMap got = Y.differential(k + 1).compose(component(k)) + component(k - 1).compose(X.differential(k));
            if (!(want - got).is_zero_map())
                throw ring_error("ChainHomotopy: identity fails at degree " + std::to_string(k));
        }
    }

private:
    ChainMap f_, g_;
    std::vector<ModuleMap> comps_;
};

/// Joint kernel of a family of maps out of a common source, presented with
/// its inclusion.
inline KernelData joint_kernel(const FgModule& source, const std::vector<ModuleMap>& maps) {
    const RingSpec& rg = source.ring();
    if (maps.empty()) {
        return {source, ModuleMap::identity(source)};
    }
    ExactMatrix stacked(rg, 0, source.generators());
    ExactMatrix span(rg, 0, 0);
    for (const auto& f : maps) {
        stacked = ExactMatrix::vcat(stacked, f.matrix());
        span = ExactMatrix::block_diag(span, f.target().relations());
    }
    ExactMatrix K = preimage_gens(stacked, span);
    FgModule ker(rg, K.cols(), preimage_gens(K, source.relations()));
    return {ker, ModuleMap(ker, source, K, false)};
}

/// Corestriction of f through an inclusion: the unique map A -> S with
/// inclusion o result = f, where inclusion : S -> B presents a submodule.
inline ModuleMap corestrict(const ModuleMap& inclusion, const ModuleMap& f) {
    const FgModule& B = inclusion.target();
    ExactMatrix sys = ExactMatrix::hcat(inclusion.matrix(), B.relations());
    auto sol = solve(sys, f.matrix());
    if (!sol) throw ring_error("corestrict: map does not factor through the submodule");
    ExactMatrix z = sol->submatrix(0, 0, inclusion.matrix().cols(), f.matrix().cols());
    return ModuleMap(f.source(), inclusion.source(), z, false);
}

inline FgModule homology(const ChainComplex& c, int n) {
    if (n < 0 || n > c.top_degree()) return FgModule::zero(c.ring());
    return Subquotient(c.term(n), c.differential(n), c.differential(n + 1).matrix()).module();
}

inline Subquotient homology_data(const ChainComplex& c, int n) {
    return Subquotient(c.term(n), c.differential(n), c.differential(n + 1).matrix());
}

/// Map induced on homology by a chain map.
inline ModuleMap induced_on_homology(const ChainMap& f, int n, const Subquotient& hs, const Subquotient& ht) {
    const FgModule& H = hs.module();
    ExactMatrix m(H.ring(), ht.module().generators(), H.generators());
    for (int j = 0; j < H.generators(); ++j) {
        std::vector<mpz_class> z(H.generators(), mpz_class(0));
        z[j] = 1;
        auto rep = hs.rep_from_gen_coords(z);
        auto img = f.component(n).apply(rep);
        auto cls = ht.to_class(img);
        auto gen_coords = ht.module().from_canonical_coords(cls);
        m.set_column(j, gen_coords);
    }
    return ModuleMap(H, ht.module(), m, false);
}

inline ModuleMap induced_on_homology(const ChainMap& f, int n) {
    Subquotient hs = homology_data(f.source(), n);
    Subquotient ht = homology_data(f.target(), n);
    return induced_on_homology(f, n, hs, ht);
}

struct PostnikovSection {
    ChainComplex p;
    ChainMap r; // from the original complex to p
};

/// Chain-level Postnikov section: agree through degree n+1, cycles in
/// degree n+2, zero above; kills homology above n and preserves it below.
inline PostnikovSection postnikov_section(const ChainComplex& c, int n) {
    if (n < 0) throw ring_error("postnikov_section: negative degree");
    if (n >= c.top_degree()) return {c, ChainMap::identity(c)};

    const RingSpec& rg = c.ring();
    std::vector<FgModule> terms;
    std::vector<ModuleMap> diffs;
    for (int k = 0; k <= n + 1; ++k) {
        terms.push_back(c.term(k));
        diffs.push_back(c.differential(k));
    }
    auto zdata = map_subquotients(c.differential(n + 1)).kernel; // Z_{n+1}
    terms.push_back(zdata.module);
    diffs.push_back(zdata.inclusion);
    ChainComplex p(rg, std::move(terms), std::move(diffs), false);

    std::vector<ModuleMap> rcomps;
    for (int k = 0; k <= n + 1; ++k) rcomps.push_back(ModuleMap::identity(c.term(k)));
    // degree n+2: the differential, corestricted to cycles
    rcomps.push_back(corestrict(zdata.inclusion, c.differential(n + 2)));
    return {p, ChainMap(c, p, std::move(rcomps), false)};
}

/// Structure map P_{n+1} c -> P_n c of the Postnikov tower.
inline ChainMap postnikov_structure_map(const ChainComplex& c, int n) {
    PostnikovSection hi = postnikov_section(c, n + 1);
    PostnikovSection lo = postnikov_section(c, n);
    std::vector<ModuleMap> comps;
    int cut = std::min(n + 1, hi.p.top_degree());
    for (int k = 0; k <= cut; ++k) comps.push_back(ModuleMap::identity(hi.p.term(k)));
    if (hi.p.top_degree() > n + 1) {
        // degree n+2 of the lower section is Z_{n+1}; of the upper it is c_{n+2}
        comps.push_back(lo.r.component(n + 2));
        if (hi.p.top_degree() >= n + 3)
            comps.push_back(ModuleMap::zero(hi.p.term(n + 3), lo.p.term(n + 3)));
    }
    return ChainMap(hi.p, lo.p, std::move(comps), false);
}

struct KInvariant {
    ChainComplex e;     // cycles in degree n+2, boundaries in degree n+3
    ChainMap k;         // from postnikov_section(c, n).p
    PostnikovSection section;
};

/// k-invariant of the chain-level Postnikov tower: e carries
/// H_{n+2}(e) = H_{n+1}(c) and k is the identity on the cycles term.
inline KInvariant k_invariant(const ChainComplex& c, int n) {
    PostnikovSection sec = postnikov_section(c, n);
    const RingSpec& rg = c.ring();
    if (n >= c.top_degree()) {
        ChainComplex e = ChainComplex::zero(rg);
        return {e, ChainMap::zero(sec.p, e), sec};
    }
    auto zdata = map_subquotients(c.differential(n + 1)).kernel; // Z_{n+1}
    auto bdata = map_subquotients(c.differential(n + 2)).image;  // B_{n+1}

    std::vector<FgModule> terms(n + 2, FgModule::zero(rg));
    std::vector<ModuleMap> diffs;
    for (int k = 0; k <= n + 1; ++k) diffs.push_back(ModuleMap::zero(terms[k], k ? terms[k - 1] : FgModule::zero(rg)));
    terms.push_back(zdata.module);
    diffs.push_back(ModuleMap::zero(zdata.module, terms[n + 1]));
    terms.push_back(bdata.module);
    diffs.push_back(corestrict(zdata.inclusion, bdata.inclusion)); // boundaries are cycles
    ChainComplex e(rg, std::move(terms), std::move(diffs), false);

    std::vector<ModuleMap> kcomps;
    for (int k = 0; k <= n + 1; ++k) kcomps.push_back(ModuleMap::zero(sec.p.term(k), e.term(k)));
    kcomps.push_back(ModuleMap::identity(zdata.module));
    return {e, ChainMap(sec.p, e, std::move(kcomps), false), sec};
}

struct MappingCone {
    ChainComplex cone;
    ChainMap inclusion;  // target of f -> cone
    ChainMap projection; // cone -> suspension of source of f
};

inline ChainComplex shift_up(const ChainComplex& c, int s) {
    const RingSpec& rg = c.ring();
    std::vector<FgModule> terms(s, FgModule::zero(rg));
    std::vector<ModuleMap> diffs;
    for (int k = 0; k < s; ++k) diffs.push_back(ModuleMap::zero(terms[k], k ? terms[k - 1] : FgModule::zero(rg)));
    for (int k = 0; k <= c.top_degree(); ++k) {
        terms.push_back(c.term(k));
        ModuleMap d = c.differential(k);
        if (s % 2) d = -d;
        if (k == 0)
            diffs.push_back(ModuleMap::zero(c.term(0), s ? terms[s - 1] : FgModule::zero(rg)));
        else
            diffs.push_back(d);
    }
    return ChainComplex(rg, std::move(terms), std::move(diffs), false);
}

inline MappingCone mapping_cone(const ChainMap& f) {
    const ChainComplex& X = f.source();
    const ChainComplex& Y = f.target();
    const RingSpec& rg = X.ring();
    int top = std::max(Y.top_degree(), X.top_degree() + 1);
    std::vector<FgModule> terms;
    std::vector<DirectSum> sums;
    for (int k = 0; k <= top; ++k) {
        sums.push_back(direct_sum({Y.term(k), X.term(k - 1)}, rg));
        terms.push_back(sums.back().total);
    }
    std::vector<ModuleMap> diffs;
    diffs.push_back(ModuleMap::zero(terms[0], FgModule::zero(rg)));
    for (int k = 1; k <= top; ++k) {
        ModuleMap dy = sums[k - 1].inject[0].compose(Y.differential(k).compose(sums[k].project[0]));
        ModuleMap fx = sums[k - 1].inject[0].compose(f.component(k - 1).compose(sums[k].project[1]));
        ModuleMap dx = sums[k - 1].inject[1].compose((-X.differential(k - 1)).compose(sums[k].project[1]));
        diffs.push_back(dy + fx + dx);
    }
    ChainComplex cone(rg, terms, std::move(diffs), false);

    std::vector<ModuleMap> inc;
    for (int k = 0; k <= Y.top_degree(); ++k) inc.push_back(sums[k].inject[0]);
    std::vector<ModuleMap> proj;
    ChainComplex sx = shift_up(X, 1);
    for (int k = 0; k <= top; ++k) proj.push_back(sums[k].project[1]);
    return {cone, ChainMap(Y, cone, std::move(inc), false), ChainMap(cone, sx, std::move(proj), false)};
}

struct MappingCocone {
    ChainComplex fib;
    ChainMap projection;            // fib -> source of f
    std::vector<DirectSum> sums;    // X_k + Y_{k+1} decompositions
    ModuleMap bottom_inclusion;     // fib_0 -> X_0 + Y_1 (kernel inclusion)

    /// Generator coordinates in fib_k of a pair already known to satisfy the
    /// degree-0 condition.
    std::vector<mpz_class> embed(int k, const std::vector<mpz_class>& pair_coords) const {
        if (k != 0) return pair_coords;
        const ModuleMap& inc = bottom_inclusion;
        ExactMatrix rhs(inc.target().ring(), inc.target().generators(), 1);
        rhs.set_column(0, pair_coords);
        ExactMatrix sys = ExactMatrix::hcat(inc.matrix(), inc.target().relations());
        auto sol = solve(sys, rhs);
        if (!sol) throw ring_error("mapping_cocone: pair does not satisfy the bottom condition");
        std::vector<mpz_class> z(inc.matrix().cols());
        for (int t = 0; t < inc.matrix().cols(); ++t) z[t] = sol->at(t, 0);
        return z;
    }
};

/// Shifted mapping cone: fib_k = X_k + Y_{k+1}, d(x, y) = (dx, f x - dy).
/// In degree 0 the would-be boundary into Y_0 is imposed as a kernel
/// condition, since the grading is non-negative.
inline MappingCocone mapping_cocone(const ChainMap& f) {
    const ChainComplex& X = f.source();
    const ChainComplex& Y = f.target();
    const RingSpec& rg = X.ring();
    int top = std::max(X.top_degree(), Y.top_degree() - 1);
    if (top < 0) return {ChainComplex::zero(rg), ChainMap::zero(ChainComplex::zero(rg), X)};
    std::vector<DirectSum> sums;
    std::vector<FgModule> terms;
    for (int k = 0; k <= top; ++k) {
        sums.push_back(direct_sum({X.term(k), Y.term(k + 1)}, rg));
        terms.push_back(sums.back().total);
    }
    // degree 0: cut out ker((x, y) -> f x - dy) in X_0 + Y_1
    ModuleMap bottom = f.component(0).compose(sums[0].project[0]) -
                       Y.differential(1).compose(sums[0].project[1]);
    KernelData k0 = joint_kernel(sums[0].total, {bottom});
    terms[0] = k0.module;

    std::vector<ModuleMap> diffs;
    diffs.push_back(ModuleMap::zero(terms[0], FgModule::zero(rg)));
    for (int k = 1; k <= top; ++k) {
        ModuleMap dx = sums[k - 1].inject[0].compose(X.differential(k).compose(sums[k].project[0]));
        ModuleMap fx = sums[k - 1].inject[1].compose(f.component(k).compose(sums[k].project[0]));
        ModuleMap dy = sums[k - 1].inject[1].compose((-Y.differential(k + 1)).compose(sums[k].project[1]));
        ModuleMap full = dx + fx + dy;
        if (k == 1) full = corestrict(k0.inclusion, full); // d o d lands in the kernel
        diffs.push_back(full);
    }
    ChainComplex fib(rg, terms, std::move(diffs), false);
    std::vector<ModuleMap> proj;
    for (int k = 0; k <= top; ++k) {
        ModuleMap p = sums[k].project[0];
        if (k == 0) p = p.compose(k0.inclusion);
        proj.push_back(p);
    }
    MappingCocone out;
    out.fib = fib;
    out.projection = ChainMap(fib, X, std::move(proj), false);
    out.sums = std::move(sums);
    out.bottom_inclusion = k0.inclusion;
    return out;
}

/// Degreewise tensor with the target ring (functorial base change Z -> Z/m).
inline ChainComplex base_change(const ChainComplex& c, const RingSpec& target) {
    if (!c.ring().is_integers()) throw ring_error("base_change expects a complex over Z");
    if (target.is_integers()) return c;
    std::vector<FgModule> terms;
    std::vector<ModuleMap> diffs;
    for (int k = 0; k <= c.top_degree(); ++k)
        terms.emplace_back(target, c.term(k).generators(), c.term(k).relations().with_ring(target));
    for (int k = 0; k <= c.top_degree(); ++k) {
        if (k == 0)
            diffs.push_back(ModuleMap::zero(terms[0], FgModule::zero(target)));
        else
            diffs.emplace_back(terms[k], terms[k - 1], c.differential(k).matrix().with_ring(target), false);
    }
    return ChainComplex(target, std::move(terms), std::move(diffs), false);
}

inline ChainMap base_change(const ChainMap& f, const RingSpec& target) {
    ChainComplex s = base_change(f.source(), target);
    ChainComplex t = base_change(f.target(), target);
    std::vector<ModuleMap> comps;
    for (int k = 0; k <= s.top_degree(); ++k)
        comps.emplace_back(s.term(k), t.term(k), f.component(k).matrix().with_ring(target), false);
    return ChainMap(s, t, std::move(comps), false);
}

/// A Z/m complex viewed over Z, degreewise restriction of scalars.
inline ChainComplex restrict_to_integers(const ChainComplex& c) {
    if (c.ring().is_integers()) return c;
    const RingSpec Z = RingSpec::integers();
    std::vector<FgModule> terms;
    std::vector<ModuleMap> diffs;
    for (int k = 0; k <= c.top_degree(); ++k) terms.push_back(restrict_to_integers(c.term(k)));
    for (int k = 0; k <= c.top_degree(); ++k) {
        if (k == 0)
            diffs.push_back(ModuleMap::zero(terms[0], FgModule::zero(Z)));
        else
            diffs.emplace_back(terms[k], terms[k - 1], c.differential(k).matrix().with_ring(Z), false);
    }
    return ChainComplex(Z, std::move(terms), std::move(diffs), false);
}

inline ChainMap restrict_to_integers(const ChainMap& f) {
    ChainComplex s = restrict_to_integers(f.source());
    ChainComplex t = restrict_to_integers(f.target());
    std::vector<ModuleMap> comps;
    for (int k = 0; k <= s.top_degree(); ++k)
        comps.emplace_back(s.term(k), t.term(k), f.component(k).matrix().with_ring(RingSpec::integers()), false);
    return ChainMap(s, t, std::move(comps), false);
}

/// Unit x -> res(x (x) R') over Z, the identity on generators.
inline ChainMap unit_map(const ChainComplex& c, const RingSpec& target) {
    ChainComplex t = restrict_to_integers(base_change(c, target));
    std::vector<ModuleMap> comps;
    for (int k = 0; k <= c.top_degree(); ++k)
        comps.emplace_back(c.term(k), t.term(k), ExactMatrix::identity(RingSpec::integers(), c.term(k).generators()), false);
    return ChainMap(c, t, std::move(comps), false);
}

struct ComplexSum {
    ChainComplex total;
    std::vector<ChainMap> inject;
    std::vector<ChainMap> project;
};

inline ComplexSum direct_sum_complexes(const std::vector<ChainComplex>& parts, const RingSpec& rg) {
    int top = -1;
    for (const auto& p : parts) top = std::max(top, p.top_degree());
    std::vector<DirectSum> sums;
    std::vector<FgModule> terms;
    for (int k = 0; k <= top; ++k) {
        std::vector<FgModule> mods;
        for (const auto& p : parts) mods.push_back(p.term(k));
        sums.push_back(direct_sum(mods, rg));
        terms.push_back(sums.back().total);
    }
    std::vector<ModuleMap> diffs;
    for (int k = 0; k <= top; ++k) {
        if (k == 0) {
            diffs.push_back(ModuleMap::zero(terms[0], FgModule::zero(rg)));
            continue;
        }
        ModuleMap d = ModuleMap::zero(terms[k], terms[k - 1]);
        for (size_t i = 0; i < parts.size(); ++i)
            d = d + sums[k - 1].inject[i].compose(parts[i].differential(k).compose(sums[k].project[i]));
        diffs.push_back(d);
    }
    ComplexSum out;
    out.total = ChainComplex(rg, terms, std::move(diffs), false);
    for (size_t i = 0; i < parts.size(); ++i) {
        std::vector<ModuleMap> inc, prj;
        for (int k = 0; k <= parts[i].top_degree(); ++k) inc.push_back(sums[k].inject[i]);
        for (int k = 0; k <= top; ++k) prj.push_back(sums[k].project[i]);
        out.inject.emplace_back(parts[i], out.total, std::move(inc), false);
        out.project.emplace_back(out.total, parts[i], std::move(prj), false);
    }
    return out;
}

} // namespace mtower
